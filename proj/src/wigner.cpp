#include "cvepr/wigner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cvepr {

namespace {

constexpr Real kExponentSaturation = 700.0;

Real saturating_exp(Real exponent) {
    if (exponent > kExponentSaturation) return std::numeric_limits<Real>::infinity();
    return std::exp(exponent);
}

void require_modes(const GaussianKetSpec& spec, const PhasePoint& pt) {
    if (pt.size() != spec.modes)
        throw std::invalid_argument("phase point has " + std::to_string(pt.size()) +
                                    " amplitudes for a " + std::to_string(spec.modes) +
                                    "-mode state");
}

void reject_singular(Regulator s) {
    if (s.regime(3) == Regime::singular)
        throw std::domain_error("regulator s = sqrt(2) is singular for the tripartite state");
}

// Exponent terms shared by the closed forms: moduli, pair products + conj,
// mixed conjugate pairs, squares + conj.
struct ExponentTerms {
    Real t1 = 0, t2 = 0, t3 = 0, t4 = 0;
};

ExponentTerms exponent_terms(const PhasePoint& pt) {
    ExponentTerms t;
    const Eigen::Index n = pt.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        t.t1 += std::norm(pt[i]);
        t.t4 += 2.0 * (pt[i] * pt[i]).real();
        for (Eigen::Index j = i + 1; j < n; ++j) {
            t.t2 += 2.0 * (pt[i] * pt[j]).real();
            t.t3 += 2.0 * (pt[i] * std::conj(pt[j])).real();
        }
    }
    return t;
}

WignerValue from_exponent(Real exponent, int modes, Regime regime) {
    WignerValue v;
    v.exponent = exponent;
    v.w = std::pow(2.0 / M_PI, modes) * saturating_exp(exponent);
    v.regime = regime;
    return v;
}

// Hessian over (Re alpha, Im alpha) of c1 T1 + c2 T2 + c3 T3 + c4 T4 over denom.
Mat6 exponent_form_from_coeffs(Real c1, Real c2, Real c3, Real c4, Real denom) {
    const Mat3 offdiag = Mat3::Ones() - Mat3::Identity();
    const Mat3 re = ((c1 + 2.0 * c4) * Mat3::Identity() + (c2 + c3) * offdiag) / denom;
    const Mat3 im = ((c1 - 2.0 * c4) * Mat3::Identity() + (c3 - c2) * offdiag) / denom;
    Mat6 h = Mat6::Zero();
    h.topLeftCorner<3, 3>() = 2.0 * re;
    h.bottomRightCorner<3, 3>() = 2.0 * im;
    return h;
}

}  // namespace

CMatX BlockMatrix::assembled() const {
    const Eigen::Index n = a.rows();
    CMatX m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = c;
    m.topRightCorner(n, n) = d;
    m.bottomLeftCorner(n, n) = a;
    m.bottomRightCorner(n, n) = b;
    return m;
}

bool BlockMatrix::symmetric_blocks(Real tol) const {
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol &&
           (d - d.transpose()).cwiseAbs().maxCoeff() <= tol &&
           (c - b.transpose()).cwiseAbs().maxCoeff() <= tol;
}

BlockMatrix BlockMatrix::for_coupling(const CMatX& coupling) {
    const Eigen::Index n = coupling.rows();
    BlockMatrix m;
    m.a = -coupling.conjugate();
    m.d = -coupling;
    m.b = CMatX::Identity(n, n);
    m.c = CMatX::Identity(n, n);
    return m;
}

BerezinResult berezin_integral(const BlockMatrix& m, const CVecX& mu_nu) {
    const Eigen::Index n = m.a.rows();
    if (m.b.rows() != n || m.c.rows() != n || m.d.rows() != n)
        throw std::invalid_argument("block matrix blocks must share one size");
    if (mu_nu.size() != 2 * n)
        throw std::invalid_argument("mu_nu must have length 2N");
    if (!m.symmetric_blocks())
        throw std::invalid_argument("block matrix violates A = A^T, D = D^T, C = B^T");

    const CMatX s = m.assembled();
    Eigen::FullPivLU<CMatX> lu(s);
    if (!lu.isInvertible())
        throw std::domain_error("singular Gaussian integral matrix");

    Eigen::ComplexEigenSolver<CMatX> es(s, /*computeEigenvectors=*/false);
    Complex prefactor(1.0, 0.0);
    for (Eigen::Index i = 0; i < 2 * n; ++i)
        prefactor /= std::sqrt(es.eigenvalues()[i]);

    CVecX swapped(2 * n);
    swapped << mu_nu.tail(n), mu_nu.head(n);
    const CVecX solved = lu.solve(swapped);
    const Complex exponent = 0.5 * (mu_nu.transpose() * solved)(0, 0);

    return {prefactor, exponent};
}

WignerValue wigner_displaced_parity(const GaussianKetSpec& spec, const PhasePoint& pt) {
    require_modes(spec, pt);
    if (spec.regime == Regime::singular)
        throw std::domain_error("Wigner function undefined at a singular regulator");

    const BlockMatrix blocks = BlockMatrix::for_coupling(spec.coupling);
    CVecX mu_nu(2 * spec.modes);
    mu_nu << (spec.drive.conjugate() - 2.0 * pt.conjugate()), (2.0 * pt - spec.drive);

    const BerezinResult bi = berezin_integral(blocks, mu_nu);

    // For unit-norm specs norm^2 det^(-1/2) = 1; in the formal regime the
    // cancellation is applied analytically (norm alone is undefined there).
    Real log_ratio = 0.0;
    if (spec.regime == Regime::normalizable)
        log_ratio = std::log(spec.norm * spec.norm * bi.prefactor.real());

    const Real exponent = 2.0 * pt.squaredNorm() + bi.exponent.real() + log_ratio +
                          2.0 * std::log(spec.scalar_prefactor);
    return from_exponent(exponent, spec.modes, spec.regime);
}

WignerCoefficients WignerCoefficients::for_regulator(Regulator s) {
    reject_singular(s);
    const Real s2 = s.s * s.s, s4 = s2 * s2, s8 = s4 * s4;
    return {-2.0 * (s8 - s4 - 4.0), 4.0 * s2 * (s4 - 2.0), -4.0 * s4, 4.0 * s2,
            (s4 - 4.0) * (s4 - 1.0)};
}

WignerValue wigner_epr3_closed(Regulator s, const PhasePoint& pt) {
    if (pt.size() != 3) throw std::invalid_argument("wigner_epr3_closed expects 3 amplitudes");
    const WignerCoefficients c = WignerCoefficients::for_regulator(s);
    const ExponentTerms t = exponent_terms(pt);
    const Real exponent = (c.c1 * t.t1 + c.c2 * t.t2 + c.c3 * t.t3 + c.c4 * t.t4) / c.denom;
    return from_exponent(exponent, 3, s.regime(3));
}

WignerValue wigner_epr3_polar(Regulator s, const Vec3& mags, const Vec3& phases) {
    if ((mags.array() < 0).any())
        throw std::invalid_argument("polar magnitudes must be nonnegative");
    const WignerCoefficients c = WignerCoefficients::for_regulator(s);
    Real e = 0;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        e += c.c1 * mags[i] * mags[i];
        e += 2.0 * c.c2 * mags[i] * mags[j] * std::cos(phases[i] + phases[j]);
        e += 2.0 * c.c3 * mags[i] * mags[j] * std::cos(phases[j] - phases[i]);
        e += 2.0 * c.c4 * mags[i] * mags[i] * std::cos(2.0 * phases[i]);
    }
    return from_exponent(e / c.denom, 3, s.regime(3));
}

WignerValue wigner_nopa3_closed(SqueezingParam r, const PhasePoint& pt) {
    if (pt.size() != 3) throw std::invalid_argument("wigner_nopa3_closed expects 3 amplitudes");
    const ExponentTerms t = exponent_terms(pt);
    const Real ch = std::cosh(2.0 * r.r), sh = std::sinh(2.0 * r.r);
    const Real exponent = -2.0 * ch * t.t1 + (4.0 / 3.0) * sh * t.t2 - (1.0 / 3.0) * sh * t.t4;
    return from_exponent(exponent, 3, Regime::normalizable);
}

WignerValue wigner_epr2(Regulator s, const PhasePoint& pt) {
    if (pt.size() != 2) throw std::invalid_argument("wigner_epr2 expects 2 amplitudes");
    return wigner_displaced_parity(epr_ket(2, s, CVecX::Zero(2)), pt);
}

EtaShift eta_shift(const PhasePoint& pt_shifted, const CVecX& eta, Regulator s) {
    if (pt_shifted.size() != eta.size())
        throw std::invalid_argument("eta and phase point must have equal length");

    Real cross = 0.0;
    for (Eigen::Index j = 0; j < eta.size(); ++j) {
        const Real pair = 2.0 * (pt_shifted[j] * std::conj(eta[j])).real();
        const Real scale = std::max<Real>(1.0, std::abs(pt_shifted[j]) * std::abs(eta[j]));
        if (std::abs(pair) > 1e-10 * scale)
            throw std::invalid_argument(
                "eta shift constraint violated: alpha'_j eta_j^* + alpha'_j^* eta_j != 0 at mode " +
                std::to_string(j));
        cross += pair;
    }

    EtaShift shift;
    shift.pt_unshifted = pt_shifted + eta / (2.0 * s.s);
    shift.factor = std::exp(cross / s.s);
    return shift;
}

Mat6 epr3_exponent_form(Regulator s) {
    const WignerCoefficients c = WignerCoefficients::for_regulator(s);
    return exponent_form_from_coeffs(c.c1, c.c2, c.c3, c.c4, c.denom);
}

Mat6 nopa3_exponent_form(SqueezingParam r) {
    const Real ch = std::cosh(2.0 * r.r), sh = std::sinh(2.0 * r.r);
    return exponent_form_from_coeffs(-2.0 * ch, (4.0 / 3.0) * sh, 0.0, -(1.0 / 3.0) * sh, 1.0);
}

Real wigner_normalization_integral(const Mat6& hessian) {
    Eigen::SelfAdjointEigenSolver<Mat6> es(hessian);
    if (es.eigenvalues().maxCoeff() >= 0.0) return std::numeric_limits<Real>::quiet_NaN();
    Real det = 1.0;
    for (int i = 0; i < 6; ++i) det *= -es.eigenvalues()[i];
    return 64.0 / std::sqrt(det);
}

bool exceeds_parity_bound(const WignerValue& v, int modes, Real tol) {
    return std::pow(M_PI / 2.0, modes) * v.w > 1.0 + tol;
}

}  // namespace cvepr
