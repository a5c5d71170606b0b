#ifndef CVEPR_FOCK_HPP
#define CVEPR_FOCK_HPP

#include "cvepr/gaussian_core.hpp"

#include <cstddef>
#include <vector>

namespace cvepr {

/// Dense number-basis expansion of a Gaussian ket, truncated at `cutoff`
/// photons per mode.  Mode 0 has the fastest-running index.
struct FockTensor {
    int modes = 0;
    int cutoff = 0;
    CVecX coeffs;
    Real tail_estimate = 0;  // outer-shell mass (any n_j == cutoff) / total
    Real captured_norm = 0;  // sqrt(sum |c|^2)

    std::size_t flat(const std::vector<int>& n) const;
    Complex at(const std::vector<int>& n) const { return coeffs[static_cast<Eigen::Index>(flat(n))]; }
};

/// Expand a normalizable spec by the recurrence
///   sqrt(n_i + 1) c(n + e_i) = lambda_i c(n) + sum_j F_ij sqrt(n_j) c(n - e_j)
/// seeded by c(0) = norm * scalar_prefactor.  Refuses specs whose coupling
/// spectral norm is not below 1.
FockTensor expand_ket(const GaussianKetSpec& spec, int cutoff);

/// <m| D(alpha) |n> by the associated-Laguerre closed form.
Complex displacement_matrix_element(int m, int n, Complex alpha);

struct ParityEstimate {
    Real value;
    Real tail_estimate;
};

/// Brute-force <psi| prod_j D_j(alpha_j)(-1)^{n_j} D_j^dag(alpha_j) |psi> by
/// contracting the Fock expansion with per-mode displaced-parity matrices.
/// Refuses to report when the expansion tail mass exceeds max_tail.
ParityEstimate parity_expectation_oracle(const GaussianKetSpec& spec, const PhasePoint& pt,
                                         int cutoff, Real max_tail = 1e-8);

struct ResidualReport {
    EigenRelation relation;
    Real residual_norm = 0;
    Real tail_estimate = 0;
};

/// 2-norm of (sum_j u_j a_j + v_j adag_j - eigenvalue) applied to the
/// expansion, restricted to total photon number <= cutoff - 1.
ResidualReport eigen_residual(const GaussianKetSpec& spec, const EigenRelation& rel, int cutoff);

}  // namespace cvepr

#endif  // CVEPR_FOCK_HPP
