#ifndef CVEPR_GAUSSIAN_CORE_HPP
#define CVEPR_GAUSSIAN_CORE_HPP

#include "cvepr/types.hpp"

#include <vector>

namespace cvepr {

enum class StateFamily { epr, nopa };

const char* to_string(StateFamily family);

/// Coefficient data of a Gaussian ket
///
///   norm * scalar_prefactor * exp(drive . adag + 1/2 adag^T coupling adag) |0..0>
///
/// with coupling exactly symmetric.  The unit-norm convention fixes
/// norm = det(I - F^dag F)^(1/4) whenever the coupling spectral norm is
/// below 1; norm is 0 at singular regulators and NaN in the formal regime.
struct GaussianKetSpec {
    int modes = 0;
    Real norm = 0;
    CVecX drive;
    CMatX coupling;
    Real scalar_prefactor = 1;
    Regime regime = Regime::normalizable;

    StateFamily family = StateFamily::epr;
    Real s_or_r = 0;
    CVecX eta;

    bool has_finite_norm() const { return regime == Regime::normalizable; }

    /// Largest singular value of the coupling matrix.
    Real coupling_spectral_norm() const;
};

/// Regularised EPR-type ket with 2 or 3 modes: off-diagonal coupling 1/s^2,
/// drive eta_i/s, scalar prefactor exp(-sum |eta_i|^2 / (4 s^2)).
GaussianKetSpec epr_ket(int modes, Regulator s, const CVecX& eta);

/// Two-mode squeezed vacuum: coupling tanh r, norm sqrt(1 - tanh^2 r).
GaussianKetSpec nopa2_ket(SqueezingParam r);

/// Tripartite NOPA-like state: diagonal coupling -tanh(r)/3, off-diagonal
/// 2 tanh(r)/3, norm (1 - tanh^2 r)^(3/4).
GaussianKetSpec nopa3_ket(SqueezingParam r);

/// The same state assembled from one momentum-squeezed and two
/// position-squeezed vacua (quadratic coefficients +tanh r, -tanh r, -tanh r)
/// mixed by the phase-free beamsplitters B12(arccos 1/sqrt(3)) and B23(pi/4),
/// applied to the coupling as orthogonal congruences.
GaussianKetSpec nopa3_from_beamsplitters(SqueezingParam r);

/// r = artanh(1/s^2): squeezing at which the two-mode squeezed vacuum carries
/// the bipartite EPR-type coupling.
SqueezingParam squeezing_correspondence(Regulator s);

enum class EigenFamily { annihilation, quadrature, jacobi };

struct ModeCoeff {
    Complex creation;
    Complex annihilation;
};

/// One eigen-relation sum_j (u_j a_j + v_j adag_j) |psi> = eigenvalue |psi>
/// with u_j the annihilation and v_j the creation coefficients.
struct EigenRelation {
    EigenFamily family = EigenFamily::annihilation;
    int index = 0;
    std::vector<ModeCoeff> mode_coeffs;
    Complex eigenvalue;
};

/// The nine tripartite eigen-relations: the annihilation family
/// (a - (b^dag + c^dag)/s^2 and cyclic), the quadrature family (scaled
/// relative-position differences and the total sum) and the Jacobi-mode
/// family (s m + c/s m^dag on the relative and centre-of-mass modes).
std::vector<EigenRelation> eigen_relations(Regulator s, const CVecX& eta);

/// Orthogonal map from the three mode operators to the Jacobi modes
/// (a_rel, b_rel, a_cm); rows (1,0,-1)/sqrt2, (1,-2,1)/sqrt6, (1,1,1)/sqrt3.
Mat3 jacobi_mode_map();

/// artanh(||v|| / ||u||) of a relation whose creation and annihilation
/// coefficient vectors are parallel; the squeezing of the associated
/// Bogoliubov mode.
Real bogoliubov_squeezing(const EigenRelation& rel);

}  // namespace cvepr

#endif  // CVEPR_GAUSSIAN_CORE_HPP
