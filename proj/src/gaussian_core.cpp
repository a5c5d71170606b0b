#include "cvepr/gaussian_core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cvepr {

namespace {

constexpr Real kSingularTol = 1e-12;

// Unit-norm normalization det(I - F^dag F)^(1/4) for the given regime.
Real unit_norm(const CMatX& f, Regime regime) {
    switch (regime) {
        case Regime::singular:
            return 0.0;
        case Regime::formal:
            return std::numeric_limits<Real>::quiet_NaN();
        case Regime::normalizable: {
            const Eigen::Index n = f.rows();
            Eigen::SelfAdjointEigenSolver<CMatX> es(f.adjoint() * f);
            Real det = 1.0;
            for (Eigen::Index i = 0; i < n; ++i) det *= 1.0 - es.eigenvalues()[i];
            return std::pow(det, 0.25);
        }
    }
    return 0.0;
}

CMatX epr_coupling(int modes, Real s) {
    CMatX f = CMatX::Constant(modes, modes, Complex(1.0 / (s * s), 0.0));
    f.diagonal().setZero();
    return f;
}

}  // namespace

const char* to_string(Regime regime) {
    switch (regime) {
        case Regime::formal: return "formal";
        case Regime::singular: return "singular";
        case Regime::normalizable: return "normalizable";
    }
    return "?";
}

const char* to_string(StateFamily family) {
    return family == StateFamily::epr ? "epr" : "nopa";
}

Regulator::Regulator(Real value) : s(value) {
    if (!(value > 1.0) || !std::isfinite(value))
        throw std::invalid_argument("regulator requires s > 1, got s = " + std::to_string(value));
}

Regime Regulator::regime(int modes) const {
    if (modes == 2) return Regime::normalizable;
    if (modes == 3) {
        const Real gap = s * s - 2.0;
        if (std::abs(gap) < kSingularTol) return Regime::singular;
        return gap > 0 ? Regime::normalizable : Regime::formal;
    }
    throw std::invalid_argument("regime classification covers 2 or 3 modes");
}

SqueezingParam::SqueezingParam(Real value) : r(value) {
    if (!(value >= 0.0) || !std::isfinite(value))
        throw std::invalid_argument("squeezing parameter requires finite r >= 0");
}

PhasePoint phase_point(std::initializer_list<Complex> amps) {
    PhasePoint pt(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index i = 0;
    for (const Complex& a : amps) pt[i++] = a;
    return pt;
}

PhasePoint phase_point_from_quadratures(const VecX& xp) {
    if (xp.size() % 2 != 0)
        throw std::invalid_argument("quadrature list must interleave x,p pairs");
    PhasePoint pt(xp.size() / 2);
    for (Eigen::Index j = 0; j < pt.size(); ++j)
        pt[j] = Complex(xp[2 * j], xp[2 * j + 1]) / std::sqrt(2.0);
    return pt;
}

VecX quadratures(const PhasePoint& pt) {
    VecX xp(2 * pt.size());
    for (Eigen::Index j = 0; j < pt.size(); ++j) {
        xp[2 * j] = std::sqrt(2.0) * pt[j].real();
        xp[2 * j + 1] = std::sqrt(2.0) * pt[j].imag();
    }
    return xp;
}

Real GaussianKetSpec::coupling_spectral_norm() const {
    Eigen::SelfAdjointEigenSolver<CMatX> es(coupling.adjoint() * coupling);
    return std::sqrt(es.eigenvalues().maxCoeff());
}

GaussianKetSpec epr_ket(int modes, Regulator s, const CVecX& eta) {
    if (modes != 2 && modes != 3)
        throw std::invalid_argument("epr_ket supports 2 or 3 modes");
    if (eta.size() != modes)
        throw std::invalid_argument("eta length must equal the mode count");

    GaussianKetSpec spec;
    spec.modes = modes;
    spec.family = StateFamily::epr;
    spec.s_or_r = s.s;
    spec.eta = eta;
    spec.drive = eta / s.s;
    spec.coupling = epr_coupling(modes, s.s);
    spec.scalar_prefactor = std::exp(-eta.squaredNorm() / (4.0 * s.s * s.s));
    spec.regime = s.regime(modes);
    spec.norm = unit_norm(spec.coupling, spec.regime);
    return spec;
}

GaussianKetSpec nopa2_ket(SqueezingParam r) {
    const Real t = std::tanh(r.r);
    GaussianKetSpec spec;
    spec.modes = 2;
    spec.family = StateFamily::nopa;
    spec.s_or_r = r.r;
    spec.eta = CVecX::Zero(2);
    spec.drive = CVecX::Zero(2);
    spec.coupling = CMatX::Zero(2, 2);
    spec.coupling(0, 1) = spec.coupling(1, 0) = t;
    spec.regime = Regime::normalizable;
    spec.norm = std::sqrt(1.0 - t * t);
    return spec;
}

GaussianKetSpec nopa3_ket(SqueezingParam r) {
    const Real t = std::tanh(r.r);
    GaussianKetSpec spec;
    spec.modes = 3;
    spec.family = StateFamily::nopa;
    spec.s_or_r = r.r;
    spec.eta = CVecX::Zero(3);
    spec.drive = CVecX::Zero(3);
    spec.coupling = CMatX::Constant(3, 3, Complex(2.0 * t / 3.0, 0.0));
    spec.coupling.diagonal().setConstant(Complex(-t / 3.0, 0.0));
    spec.regime = Regime::normalizable;
    spec.norm = std::pow(1.0 - t * t, 0.75);
    return spec;
}

GaussianKetSpec nopa3_from_beamsplitters(SqueezingParam r) {
    const Real t = std::tanh(r.r);

    // One momentum-squeezed and two position-squeezed vacua.
    Mat3 f0 = Mat3::Zero();
    f0.diagonal() << t, -t, -t;

    auto beamsplitter = [](int i, int j, Real theta) {
        Mat3 g = Mat3::Identity();
        g(i, i) = std::cos(theta);
        g(i, j) = std::sin(theta);
        g(j, i) = -std::sin(theta);
        g(j, j) = std::cos(theta);
        return g;
    };

    // B12 acts on the squeezed vacua first, then B23.
    const Mat3 g12 = beamsplitter(0, 1, std::acos(1.0 / std::sqrt(3.0)));
    const Mat3 g23 = beamsplitter(1, 2, M_PI / 4.0);
    Mat3 f = g12.transpose() * f0 * g12;
    f = g23.transpose() * f * g23;

    GaussianKetSpec spec;
    spec.modes = 3;
    spec.family = StateFamily::nopa;
    spec.s_or_r = r.r;
    spec.eta = CVecX::Zero(3);
    spec.drive = CVecX::Zero(3);
    spec.coupling = f.cast<Complex>();
    spec.regime = Regime::normalizable;
    spec.norm = unit_norm(spec.coupling, spec.regime);
    return spec;
}

SqueezingParam squeezing_correspondence(Regulator s) {
    return SqueezingParam(std::atanh(1.0 / (s.s * s.s)));
}

std::vector<EigenRelation> eigen_relations(Regulator s, const CVecX& eta) {
    if (eta.size() != 3)
        throw std::invalid_argument("eigen_relations is tripartite; eta must have length 3");

    const Real v = s.s;
    std::vector<EigenRelation> rels;
    rels.reserve(9);

    auto make = [&](EigenFamily family, int index, const Vec3& u, const Vec3& w, Complex eig) {
        EigenRelation rel;
        rel.family = family;
        rel.index = index;
        rel.mode_coeffs.resize(3);
        for (int j = 0; j < 3; ++j) rel.mode_coeffs[j] = {Complex(w[j]), Complex(u[j])};
        rel.eigenvalue = eig;
        rels.push_back(std::move(rel));
    };

    // a_i - sum_{j != i} adag_j / s^2, eigenvalue eta_i / s.
    for (int i = 0; i < 3; ++i) {
        Vec3 u = Vec3::Zero(), w = Vec3::Constant(-1.0 / (v * v));
        u[i] = 1.0;
        w[i] = 0.0;
        make(EigenFamily::annihilation, i, u, w, eta[i] / v);
    }

    // Scaled pair differences and the total sum.
    make(EigenFamily::quadrature, 0, v * Vec3(1, -1, 0), (1.0 / v) * Vec3(1, -1, 0), eta[0] - eta[1]);
    make(EigenFamily::quadrature, 1, v * Vec3(0, 1, -1), (1.0 / v) * Vec3(0, 1, -1), eta[1] - eta[2]);
    make(EigenFamily::quadrature, 2, v * Vec3(1, 1, 1), (-2.0 / v) * Vec3(1, 1, 1),
         eta[0] + eta[1] + eta[2]);

    // Jacobi relative and centre-of-mass modes.
    const Mat3 m = jacobi_mode_map();
    make(EigenFamily::jacobi, 0, v * m.row(0), (1.0 / v) * m.row(0), (eta[0] - eta[2]) / std::sqrt(2.0));
    make(EigenFamily::jacobi, 1, v * m.row(1), (1.0 / v) * m.row(1),
         (eta[0] - 2.0 * eta[1] + eta[2]) / std::sqrt(6.0));
    make(EigenFamily::jacobi, 2, v * m.row(2), (-2.0 / v) * m.row(2),
         (eta[0] + eta[1] + eta[2]) / std::sqrt(3.0));

    return rels;
}

Mat3 jacobi_mode_map() {
    Mat3 m;
    m.row(0) = Vec3(1, 0, -1) / std::sqrt(2.0);
    m.row(1) = Vec3(1, -2, 1) / std::sqrt(6.0);
    m.row(2) = Vec3(1, 1, 1) / std::sqrt(3.0);
    return m;
}

Real bogoliubov_squeezing(const EigenRelation& rel) {
    Real u2 = 0, v2 = 0;
    for (const ModeCoeff& mc : rel.mode_coeffs) {
        u2 += std::norm(mc.annihilation);
        v2 += std::norm(mc.creation);
    }
    const Real ratio = std::sqrt(v2 / u2);
    if (!(ratio < 1.0))
        throw std::domain_error("relation is not a squeezed Bogoliubov pair (|v| >= |u|)");
    return std::atanh(ratio);
}

}  // namespace cvepr
