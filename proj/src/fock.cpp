#include "cvepr/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cvepr {

namespace {

// L_k^{(d)}(x) by the three-term recurrence.
Real associated_laguerre(int k, int d, Real x) {
    if (k == 0) return 1.0;
    Real lm = 1.0, l = 1.0 + d - x;
    for (int t = 1; t < k; ++t) {
        const Real ln = ((2.0 * t + 1.0 + d - x) * l - (t + d) * lm) / (t + 1.0);
        lm = l;
        l = ln;
    }
    return l;
}

Complex int_pow(Complex base, int n) {
    Complex p(1.0, 0.0);
    for (int i = 0; i < n; ++i) p *= base;
    return p;
}

// Truncated displaced-parity matrix D(alpha) (-1)^n D(alpha)^dag with the
// internal sum padded past the kept dimension.
CMatX displaced_parity_matrix(int keep, Complex alpha, int pad = 32) {
    const int inner = keep + pad;
    CMatX d(keep, inner);
    for (int m = 0; m < keep; ++m)
        for (int k = 0; k < inner; ++k) d(m, k) = displacement_matrix_element(m, k, alpha);
    CVecX sign(inner);
    for (int k = 0; k < inner; ++k) sign[k] = (k % 2 == 0) ? 1.0 : -1.0;
    return d * sign.asDiagonal() * d.adjoint();
}

// Contract one mode of the flat tensor with a keep x keep matrix.
void apply_mode_matrix(CVecX& coeffs, const CMatX& p, int mode, int dim, int modes) {
    Eigen::Index pre = 1;
    for (int k = 0; k < mode; ++k) pre *= dim;
    Eigen::Index post = 1;
    for (int k = mode + 1; k < modes; ++k) post *= dim;

    CVecX out(coeffs.size());
    for (Eigen::Index q = 0; q < post; ++q) {
        Eigen::Map<const CMatX> block(coeffs.data() + q * pre * dim, pre, dim);
        Eigen::Map<CMatX> target(out.data() + q * pre * dim, pre, dim);
        target = block * p.transpose();
    }
    coeffs = std::move(out);
}

std::vector<int> unflatten(std::size_t index, int dim, int modes) {
    std::vector<int> n(modes);
    for (int j = 0; j < modes; ++j) {
        n[j] = static_cast<int>(index % dim);
        index /= dim;
    }
    return n;
}

}  // namespace

std::size_t FockTensor::flat(const std::vector<int>& n) const {
    std::size_t index = 0;
    const std::size_t dim = static_cast<std::size_t>(cutoff) + 1;
    for (int j = modes - 1; j >= 0; --j) index = index * dim + static_cast<std::size_t>(n[j]);
    return index;
}

FockTensor expand_ket(const GaussianKetSpec& spec, int cutoff) {
    if (cutoff < 2) throw std::invalid_argument("Fock expansion needs cutoff >= 2");
    if (spec.regime != Regime::normalizable)
        throw std::domain_error(std::string("Fock expansion requires a normalizable spec (regime ") +
                                to_string(spec.regime) + ")");

    FockTensor t;
    t.modes = spec.modes;
    t.cutoff = cutoff;
    const int dim = cutoff + 1;
    std::size_t size = 1;
    for (int j = 0; j < spec.modes; ++j) size *= static_cast<std::size_t>(dim);
    t.coeffs = CVecX::Zero(static_cast<Eigen::Index>(size));
    t.coeffs[0] = spec.norm * spec.scalar_prefactor;

    // Group indices by total photon number; the recurrence only looks back
    // one and two shells.
    std::vector<std::vector<std::size_t>> shells(static_cast<std::size_t>(spec.modes) * cutoff + 1);
    for (std::size_t idx = 0; idx < size; ++idx) {
        int total = 0;
        for (int v : unflatten(idx, dim, spec.modes)) total += v;
        shells[static_cast<std::size_t>(total)].push_back(idx);
    }

    for (std::size_t total = 1; total < shells.size(); ++total) {
        for (std::size_t idx : shells[total]) {
            std::vector<int> n = unflatten(idx, dim, spec.modes);
            int i = 0;
            while (n[i] == 0) ++i;

            std::vector<int> nm = n;
            nm[i] -= 1;
            Complex val = spec.drive[i] * t.coeffs[static_cast<Eigen::Index>(t.flat(nm))];
            for (int j = 0; j < spec.modes; ++j) {
                if (nm[j] < 1) continue;
                std::vector<int> nmj = nm;
                nmj[j] -= 1;
                val += spec.coupling(i, j) * std::sqrt(static_cast<Real>(nm[j])) *
                       t.coeffs[static_cast<Eigen::Index>(t.flat(nmj))];
            }
            t.coeffs[static_cast<Eigen::Index>(idx)] = val / std::sqrt(static_cast<Real>(n[i]));
        }
    }

    Real total_mass = 0, outer_mass = 0;
    for (std::size_t idx = 0; idx < size; ++idx) {
        const Real mass = std::norm(t.coeffs[static_cast<Eigen::Index>(idx)]);
        total_mass += mass;
        const std::vector<int> n = unflatten(idx, dim, spec.modes);
        bool outer = false;
        for (int v : n) outer = outer || (v == cutoff);
        if (outer) outer_mass += mass;
    }
    t.captured_norm = std::sqrt(total_mass);
    t.tail_estimate = total_mass > 0 ? outer_mass / total_mass : 0.0;
    return t;
}

Complex displacement_matrix_element(int m, int n, Complex alpha) {
    if (m < 0 || n < 0) throw std::invalid_argument("Fock indices must be nonnegative");
    if (alpha == Complex(0, 0)) return m == n ? Complex(1, 0) : Complex(0, 0);

    const int k = std::min(m, n), d = std::abs(m - n);
    const Real x = std::norm(alpha);
    const Real ratio = std::exp(0.5 * (std::lgamma(k + 1.0) - std::lgamma(std::max(m, n) + 1.0)));
    const Real gauss = std::exp(-0.5 * x);
    const Complex phase = m >= n ? int_pow(alpha, m - n) : int_pow(-std::conj(alpha), n - m);
    return ratio * phase * gauss * associated_laguerre(k, d, x);
}

ParityEstimate parity_expectation_oracle(const GaussianKetSpec& spec, const PhasePoint& pt,
                                         int cutoff, Real max_tail) {
    if (pt.size() != spec.modes)
        throw std::invalid_argument("phase point length must equal the mode count");

    const FockTensor t = expand_ket(spec, cutoff);
    if (t.tail_estimate > max_tail)
        throw std::runtime_error("Fock cutoff too small: tail estimate " +
                                 std::to_string(t.tail_estimate) + " exceeds " +
                                 std::to_string(max_tail));

    const int dim = cutoff + 1;
    CVecX contracted = t.coeffs;
    for (int j = 0; j < spec.modes; ++j) {
        const CMatX p = displaced_parity_matrix(dim, pt[j]);
        apply_mode_matrix(contracted, p, j, dim, spec.modes);
    }

    const Complex value = t.coeffs.dot(contracted);
    if (std::abs(value.imag()) > 1e-10 * (1.0 + std::abs(value.real())))
        throw std::runtime_error("parity expectation has a non-negligible imaginary part");
    return {value.real(), t.tail_estimate};
}

ResidualReport eigen_residual(const GaussianKetSpec& spec, const EigenRelation& rel, int cutoff) {
    if (static_cast<int>(rel.mode_coeffs.size()) != spec.modes)
        throw std::invalid_argument("relation arity must equal the mode count");

    const FockTensor t = expand_ket(spec, cutoff);
    const int dim = cutoff + 1;

    Real residual2 = 0;
    const std::size_t size = static_cast<std::size_t>(t.coeffs.size());
    for (std::size_t idx = 0; idx < size; ++idx) {
        std::vector<int> n = unflatten(idx, dim, spec.modes);
        int total = 0;
        for (int v : n) total += v;
        if (total > cutoff - 1) continue;

        Complex val = -rel.eigenvalue * t.coeffs[static_cast<Eigen::Index>(idx)];
        for (int j = 0; j < spec.modes; ++j) {
            std::vector<int> up = n;
            up[j] += 1;
            val += rel.mode_coeffs[j].annihilation * std::sqrt(static_cast<Real>(n[j] + 1)) *
                   t.coeffs[static_cast<Eigen::Index>(t.flat(up))];
            if (n[j] >= 1) {
                std::vector<int> down = n;
                down[j] -= 1;
                val += rel.mode_coeffs[j].creation * std::sqrt(static_cast<Real>(n[j])) *
                       t.coeffs[static_cast<Eigen::Index>(t.flat(down))];
            }
        }
        residual2 += std::norm(val);
    }

    return {rel, std::sqrt(residual2), t.tail_estimate};
}

}  // namespace cvepr
