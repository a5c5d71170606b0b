#ifndef CVEPR_CHSH_HPP
#define CVEPR_CHSH_HPP

#include "cvepr/wigner.hpp"

#include <functional>
#include <vector>

namespace cvepr {

/// Normalised displaced-parity expectation Pi = (pi/2)^N W, so Pi(0,..,0) = 1.
struct ParityProvider {
    int modes = 0;
    Regime regime = Regime::normalizable;
    std::function<Real(const PhasePoint&)> pi;
};

/// Provider for the EPR-type family; delegates to the closed forms by
/// default or to the general Berezin engine when use_engine is set.
ParityProvider epr_parity_provider(int modes, Regulator s, bool use_engine = false);
ParityProvider nopa_parity_provider(int modes, SqueezingParam r, bool use_engine = false);

enum class BellBranch { imaginary, real_pair, general };

const char* to_string(BellBranch branch);

struct BellValue {
    Real b = 0;
    Regime regime = Regime::normalizable;
};

/// B2 = Pi(0,0) + Pi(0,beta) + Pi(alpha,0) - Pi(alpha,beta).
BellValue bell_b2(const ParityProvider& p, Complex alpha, Complex beta);

/// B3 = Pi(0,0,gamma) + Pi(0,beta,0) + Pi(alpha,0,0) - Pi(alpha,beta,gamma).
BellValue bell_b3(const ParityProvider& p, Complex alpha, Complex beta, Complex gamma);

/// Displacement amplitudes of a branch pattern at distance parameter J.
/// Patterns are quadrature kicks of size sqrt(J): the imaginary branch
/// displaces every mode by p = sqrt(J), the real-pair branch by
/// x_1 = -sqrt(J), x_2 = +sqrt(J).
std::vector<Complex> branch_displacements(BellBranch branch, int modes, Real J);

/// All-imaginary bipartite combination in closed form:
/// 1 + 2 exp(-J(s^4+1)/(s^4-1)) - exp(-2J(s^2+1)/(s^2-1)).
BellValue b2_imaginary(Regulator s, Real J);

/// Tripartite all-imaginary branch:
/// 3 exp(-J(s^4-s^2+2)/((s^2+1)(s^2-2))) - exp(-3J(s^2+2)/(s^2-2)).
BellValue b3_imaginary(Regulator s, Real J);

/// Tripartite real-pair branch:
/// 1 + 2 exp(-J(s^4+s^2+2)/((s^2-1)(s^2+2))) - exp(-2J(s^2+1)/(s^2-1)).
BellValue b3_real(Regulator s, Real J);

/// Exponent ratio lambda of the lowest-order maximum of B = 3x - x^lambda.
struct AsymptoticBranch {
    Real lambda;

    explicit AsymptoticBranch(Real value);
};

/// (lambda - 1) (3/lambda)^(lambda/(lambda-1)), attained at
/// x = (3/lambda)^(1/(lambda-1)).
Real b3_asymptotic_max(AsymptoticBranch branch);
Real b3_asymptotic_argmax(AsymptoticBranch branch);

struct ScanDomain {
    Real s_min = 0, s_max = 0;
    Real j_min = 0, j_max = 0;
};

struct MaxReport {
    BellBranch branch = BellBranch::imaginary;
    int modes = 3;
    ScanDomain domain;
    BellValue max;
    Real s_at_max = 0;
    Real j_at_max = 0;
    VecX displacement_at_max;  // quadratures, general branch only
    long iterations = 0;
    bool converged = false;
};

/// Deterministic maximization of a branch value over the (s, J) box: coarse
/// grid scan (log-spaced in J) followed by Nelder-Mead refinement from the
/// best grid cells.  The box must avoid the branch's singular regulators by
/// at least 1e-6.
MaxReport maximize_bell(BellBranch branch, int modes, const ScanDomain& domain,
                        int grid_steps = 48);

/// Unpatterned 6-parameter displacement search at fixed s, seeded by the
/// coarse grid and by the branch patterns at their own optima.
MaxReport maximize_bell_general(Regulator s, Real amp_bound, int grid_steps = 5);

struct BellRow {
    Real s = 0, j = 0, b = 0;
    Regime regime = Regime::normalizable;
};

struct BellSurface {
    BellBranch branch = BellBranch::imaginary;
    int modes = 3;
    std::vector<BellRow> rows;  // s-major, J-minor
    std::size_t argmax = 0;
};

enum class GridSpacing { linear, log };

/// Dense grid of branch values; log spacing places J on {0} followed by a
/// geometric ladder up to j_max so the J->0 peaks stay resolved.
BellSurface scan_surface(BellBranch branch, int modes, const ScanDomain& domain, int steps,
                         GridSpacing j_spacing = GridSpacing::linear);

struct FigurePreset {
    int figure = 1;
    BellBranch branch = BellBranch::imaginary;
    int modes = 2;
    ScanDomain domain;
    int steps = 200;
};

/// Scan presets reproducing the four survey figures: 1 bipartite imaginary
/// near s=1, 2 tripartite imaginary near s=1, 3 tripartite real-pair near
/// s=1, 4 tripartite imaginary near s=sqrt(2).
FigurePreset figure_preset(int figure);

}  // namespace cvepr

#endif  // CVEPR_CHSH_HPP
