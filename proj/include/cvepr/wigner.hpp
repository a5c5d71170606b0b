#ifndef CVEPR_WIGNER_HPP
#define CVEPR_WIGNER_HPP

#include "cvepr/gaussian_core.hpp"

namespace cvepr {

/// Blocks of the 2N x 2N coherent-state Gaussian integral matrix, assembled
/// as ((C, D), (A, B)).  A and D must be symmetric and C = B^T.
struct BlockMatrix {
    CMatX a, b, c, d;

    CMatX assembled() const;
    bool symmetric_blocks(Real tol = 1e-12) const;

    /// Blocks of the displaced-parity integral for a coupling matrix F:
    /// A = -conj(F), D = -F, B = C = I.
    static BlockMatrix for_coupling(const CMatX& coupling);
};

struct BerezinResult {
    Complex prefactor;  // det((C,D),(A,B))^(-1/2)
    Complex exponent;   // 1/2 (mu,nu*) ((C,D),(A,B))^(-1) (nu*,mu)
};

/// Closed form of the anti-normal-ordered coherent-state Gaussian integral.
/// The square-root branch of the determinant is taken as the product of
/// principal square roots of the eigenvalues; in-scope matrices have
/// positive real determinant in the normalizable regime.
BerezinResult berezin_integral(const BlockMatrix& m, const CVecX& mu_nu);

/// A Wigner value together with the regime of the state it came from.
/// w = (2/pi)^N exp(exponent); the exponent is kept so consumers can work in
/// log space when w saturates to 0 or infinity.
struct WignerValue {
    Real w = 0;
    Real exponent = 0;
    Regime regime = Regime::normalizable;
};

/// Wigner function as the displaced-parity expectation of a Gaussian ket,
/// evaluated through the Berezin integral.  In the formal regime the
/// integral is carried out algebraically; the normalization cancellation
/// norm^2 det^(-1/2) = 1 is applied analytically there.
WignerValue wigner_displaced_parity(const GaussianKetSpec& spec, const PhasePoint& pt);

/// Exponent coefficients of the closed-form tripartite EPR-type Wigner
/// function: C1 = -2(s^8-s^4-4), C2 = 4s^2(s^4-2), C3 = -4s^4, C4 = 4s^2
/// over the denominator (s^4-4)(s^4-1).
struct WignerCoefficients {
    Real c1, c2, c3, c4;
    Real denom;

    static WignerCoefficients for_regulator(Regulator s);
};

WignerValue wigner_epr3_closed(Regulator s, const PhasePoint& pt);

/// Same function with the amplitudes in polar form alpha_j = mag_j e^{i phi_j}.
WignerValue wigner_epr3_polar(Regulator s, const Vec3& mags, const Vec3& phases);

WignerValue wigner_nopa3_closed(SqueezingParam r, const PhasePoint& pt);

/// Bipartite EPR-type Wigner function, evaluated through the general engine
/// on epr_ket(2, s, 0); equals the two-mode squeezed vacuum Wigner function
/// with tanh r = 1/s^2.
WignerValue wigner_epr2(Regulator s, const PhasePoint& pt);

struct EtaShift {
    PhasePoint pt_unshifted;
    Real factor;
};

/// Absorb the eta parameters into shifted displacements.  For a point pt'
/// whose pairs (alpha'_j, eta_j) satisfy alpha'_j eta_j^* + alpha'_j^* eta_j = 0
/// (alpha' real and eta imaginary or vice versa), returns
/// pt_unshifted = pt' + eta/(2s) and factor = exp(sum_j (alpha'_j eta_j^* +
/// alpha'_j^* eta_j)/s), which the constraint forces to 1.  The shift
/// identity reads W_eta(pt_unshifted) = factor * W_0(pt').
EtaShift eta_shift(const PhasePoint& pt_shifted, const CVecX& eta, Regulator s);

/// 6x6 Hessian of the Wigner exponent over (Re alpha_1..3, Im alpha_1..3).
Mat6 epr3_exponent_form(Regulator s);
Mat6 nopa3_exponent_form(SqueezingParam r);

/// Integral of (2/pi)^3 exp(1/2 u^T H u) over all six phase-space
/// coordinates; 1 for a unit-norm state.  NaN when H is not negative
/// definite (the integral diverges).
Real wigner_normalization_integral(const Mat6& hessian);

/// True when (pi/2)^modes * w exceeds the displaced-parity bound of 1.
bool exceeds_parity_bound(const WignerValue& v, int modes, Real tol = 1e-9);

}  // namespace cvepr

#endif  // CVEPR_WIGNER_HPP
