#include "cvepr/chsh.hpp"

#include "parallel_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cvepr {

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();
constexpr Real kSingularMargin = 1e-6;

Real guarded_combination(Real first_coeff, Real e1, Real e2) {
    // e2 dominates whenever both exponents are positive (formal regime);
    // saturate instead of producing inf - inf.
    if (e2 > 700.0) return -kInf;
    return first_coeff * std::exp(e1) - std::exp(e2);
}

void require_branch_domain(BellBranch branch, int modes, Real s_min, Real s_max) {
    if (!(s_min > 1.0) || !(s_max >= s_min))
        throw std::invalid_argument("scan domain requires 1 < s_min <= s_max");
    if (s_min - 1.0 < kSingularMargin)
        throw std::invalid_argument("scan domain must avoid the singular regulator s = 1 by 1e-6");
    if (modes == 3 && branch == BellBranch::imaginary) {
        const Real root2 = std::sqrt(2.0);
        if (s_min <= root2 + kSingularMargin && s_max >= root2 - kSingularMargin)
            throw std::invalid_argument(
                "scan domain must avoid the singular regulator s = sqrt(2) by 1e-6");
    }
}

Real branch_value(BellBranch branch, int modes, Real s, Real j) {
    const Regulator reg(s);
    if (modes == 2) return b2_imaginary(reg, j).b;
    return branch == BellBranch::imaginary ? b3_imaginary(reg, j).b : b3_real(reg, j).b;
}

struct NelderMeadResult {
    VecX x;
    Real value = -kInf;
    long iterations = 0;
    bool converged = false;
};

// Maximizes f over a box by the standard reflect/expand/contract/shrink
// simplex; vertices outside the box score -inf.  Deterministic.
NelderMeadResult nelder_mead_max(const std::function<Real(const VecX&)>& f, const VecX& x0,
                                 const VecX& lo, const VecX& hi, const VecX& step, Real tol,
                                 long max_iterations) {
    const Eigen::Index n = x0.size();
    std::vector<VecX> xs;
    std::vector<Real> fs;

    auto eval = [&](const VecX& x) -> Real {
        for (Eigen::Index k = 0; k < n; ++k)
            if (x[k] < lo[k] || x[k] > hi[k]) return -kInf;
        return f(x);
    };

    xs.push_back(x0);
    for (Eigen::Index k = 0; k < n; ++k) {
        VecX v = x0;
        v[k] = std::min(hi[k], v[k] + step[k]);
        if (v[k] == x0[k]) v[k] = std::max(lo[k], v[k] - step[k]);
        xs.push_back(v);
    }
    for (const VecX& v : xs) fs.push_back(eval(v));

    auto order = [&] {
        std::vector<std::size_t> idx(xs.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] > fs[b]; });
        std::vector<VecX> xs2;
        std::vector<Real> fs2;
        for (std::size_t i : idx) {
            xs2.push_back(xs[i]);
            fs2.push_back(fs[i]);
        }
        xs = std::move(xs2);
        fs = std::move(fs2);
    };

    NelderMeadResult result;
    long iter = 0;
    for (; iter < max_iterations; ++iter) {
        order();

        Real diameter = 0;
        for (std::size_t i = 1; i < xs.size(); ++i)
            diameter = std::max(diameter, (xs[i] - xs[0]).cwiseAbs().maxCoeff());
        if (diameter < tol) {
            result.converged = true;
            break;
        }

        VecX centroid = VecX::Zero(n);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) centroid += xs[i];
        centroid /= static_cast<Real>(xs.size() - 1);

        const VecX reflected = centroid + (centroid - xs.back());
        const Real fr = eval(reflected);
        if (fr > fs[0]) {
            const VecX expanded = centroid + 2.0 * (centroid - xs.back());
            const Real fe = eval(expanded);
            if (fe > fr) {
                xs.back() = expanded;
                fs.back() = fe;
            } else {
                xs.back() = reflected;
                fs.back() = fr;
            }
            continue;
        }
        if (fr > fs[fs.size() - 2]) {
            xs.back() = reflected;
            fs.back() = fr;
            continue;
        }

        const VecX contracted = centroid + 0.5 * (xs.back() - centroid);
        const Real fc = eval(contracted);
        if (fc > fs.back()) {
            xs.back() = contracted;
            fs.back() = fc;
            continue;
        }

        for (std::size_t i = 1; i < xs.size(); ++i) {
            xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
            fs[i] = eval(xs[i]);
        }
    }

    order();
    result.x = xs[0];
    result.value = fs[0];
    result.iterations = iter;
    return result;
}

std::vector<Real> linear_grid(Real lo, Real hi, int steps) {
    std::vector<Real> g;
    if (steps <= 1 || hi <= lo) {
        g.push_back(lo);
        return g;
    }
    for (int i = 0; i < steps; ++i)
        g.push_back(lo + (hi - lo) * static_cast<Real>(i) / static_cast<Real>(steps - 1));
    return g;
}

// {j_min} followed by a geometric ladder up to j_max; resolves peaks that
// collapse toward J = 0 as the regulator approaches a singular value.
std::vector<Real> log_grid(Real j_min, Real j_max, int steps, Real floor_ratio) {
    std::vector<Real> g;
    const Real lo = std::max(j_min, j_max * floor_ratio);
    if (steps <= 1 || j_max <= lo) {
        g.push_back(j_min);
        return g;
    }
    g.push_back(j_min);
    const Real lg_lo = std::log(lo), lg_hi = std::log(j_max);
    for (int i = 0; i < steps - 1; ++i)
        g.push_back(std::exp(lg_lo + (lg_hi - lg_lo) * static_cast<Real>(i) /
                                         static_cast<Real>(steps - 2 > 0 ? steps - 2 : 1)));
    return g;
}

}  // namespace

const char* to_string(BellBranch branch) {
    switch (branch) {
        case BellBranch::imaginary: return "imaginary";
        case BellBranch::real_pair: return "real_pair";
        case BellBranch::general: return "general";
    }
    return "?";
}

ParityProvider epr_parity_provider(int modes, Regulator s, bool use_engine) {
    if (modes != 2 && modes != 3) throw std::invalid_argument("parity provider covers 2 or 3 modes");
    ParityProvider p;
    p.modes = modes;
    p.regime = s.regime(modes);
    const Real scale = std::pow(M_PI / 2.0, modes);
    if (modes == 3 && !use_engine) {
        p.pi = [s, scale](const PhasePoint& pt) { return scale * wigner_epr3_closed(s, pt).w; };
    } else {
        const GaussianKetSpec spec = epr_ket(modes, s, CVecX::Zero(modes));
        p.pi = [spec, scale](const PhasePoint& pt) {
            return scale * wigner_displaced_parity(spec, pt).w;
        };
    }
    return p;
}

ParityProvider nopa_parity_provider(int modes, SqueezingParam r, bool use_engine) {
    if (modes != 2 && modes != 3) throw std::invalid_argument("parity provider covers 2 or 3 modes");
    ParityProvider p;
    p.modes = modes;
    p.regime = Regime::normalizable;
    const Real scale = std::pow(M_PI / 2.0, modes);
    if (modes == 3 && !use_engine) {
        p.pi = [r, scale](const PhasePoint& pt) { return scale * wigner_nopa3_closed(r, pt).w; };
    } else {
        const GaussianKetSpec spec = modes == 2 ? nopa2_ket(r) : nopa3_ket(r);
        p.pi = [spec, scale](const PhasePoint& pt) {
            return scale * wigner_displaced_parity(spec, pt).w;
        };
    }
    return p;
}

BellValue bell_b2(const ParityProvider& p, Complex alpha, Complex beta) {
    if (p.modes != 2) throw std::invalid_argument("bell_b2 needs a bipartite provider");
    const Complex z(0, 0);
    const Real b = p.pi(phase_point({z, z})) + p.pi(phase_point({z, beta})) +
                   p.pi(phase_point({alpha, z})) - p.pi(phase_point({alpha, beta}));
    return {b, p.regime};
}

BellValue bell_b3(const ParityProvider& p, Complex alpha, Complex beta, Complex gamma) {
    if (p.modes != 3) throw std::invalid_argument("bell_b3 needs a tripartite provider");
    const Complex z(0, 0);
    const Real b = p.pi(phase_point({z, z, gamma})) + p.pi(phase_point({z, beta, z})) +
                   p.pi(phase_point({alpha, z, z})) - p.pi(phase_point({alpha, beta, gamma}));
    return {b, p.regime};
}

std::vector<Complex> branch_displacements(BellBranch branch, int modes, Real J) {
    if (J < 0) throw std::invalid_argument("J must be nonnegative");
    const Real amp = std::sqrt(J / 2.0);
    if (branch == BellBranch::imaginary)
        return std::vector<Complex>(static_cast<std::size_t>(modes), Complex(0.0, amp));
    if (branch == BellBranch::real_pair) {
        if (modes != 3) throw std::invalid_argument("the real-pair pattern is tripartite");
        return {Complex(-amp, 0.0), Complex(amp, 0.0), Complex(0.0, 0.0)};
    }
    throw std::invalid_argument("the general branch has no fixed pattern");
}

BellValue b2_imaginary(Regulator s, Real J) {
    const Real s2 = s.s * s.s, s4 = s2 * s2;
    const Real e1 = -J * (s4 + 1.0) / (s4 - 1.0);
    const Real e2 = -2.0 * J * (s2 + 1.0) / (s2 - 1.0);
    return {1.0 + 2.0 * std::exp(e1) - std::exp(e2), Regime::normalizable};
}

BellValue b3_imaginary(Regulator s, Real J) {
    const Regime regime = s.regime(3);
    if (regime == Regime::singular)
        throw std::domain_error("b3_imaginary is singular at s = sqrt(2)");
    const Real s2 = s.s * s.s, s4 = s2 * s2;
    const Real e1 = -J * (s4 - s2 + 2.0) / ((s2 + 1.0) * (s2 - 2.0));
    const Real e2 = -3.0 * J * (s2 + 2.0) / (s2 - 2.0);
    return {guarded_combination(3.0, e1, e2), regime};
}

BellValue b3_real(Regulator s, Real J) {
    const Real s2 = s.s * s.s, s4 = s2 * s2;
    const Real e1 = -J * (s4 + s2 + 2.0) / ((s2 - 1.0) * (s2 + 2.0));
    const Real e2 = -2.0 * J * (s2 + 1.0) / (s2 - 1.0);
    return {1.0 + guarded_combination(2.0, e1, e2), s.regime(3)};
}

AsymptoticBranch::AsymptoticBranch(Real value) : lambda(value) {
    if (!(value > 1.0)) throw std::invalid_argument("asymptotic branch requires lambda > 1");
}

Real b3_asymptotic_max(AsymptoticBranch branch) {
    const Real l = branch.lambda;
    return (l - 1.0) * std::pow(3.0 / l, l / (l - 1.0));
}

Real b3_asymptotic_argmax(AsymptoticBranch branch) {
    const Real l = branch.lambda;
    return std::pow(3.0 / l, 1.0 / (l - 1.0));
}

MaxReport maximize_bell(BellBranch branch, int modes, const ScanDomain& domain, int grid_steps) {
    if (branch == BellBranch::general)
        throw std::invalid_argument("use maximize_bell_general for the unpatterned search");
    if (modes == 2 && branch != BellBranch::imaginary)
        throw std::invalid_argument("the bipartite combination uses the imaginary pattern");
    if (!(domain.j_max >= domain.j_min) || domain.j_min < 0)
        throw std::invalid_argument("scan domain requires 0 <= j_min <= j_max");
    require_branch_domain(branch, modes, domain.s_min, domain.s_max);

    MaxReport report;
    report.branch = branch;
    report.modes = modes;
    report.domain = domain;

    const bool s_free = domain.s_max > domain.s_min;
    const Real j_floor = std::max(domain.j_min, std::max(domain.j_max, 1.0) * 1e-12);
    const bool j_free = domain.j_max > j_floor;

    // Work in (s, ln J): the optima collapse toward J = 0 near the singular
    // regulators and need log-scale resolution.
    const Real u_lo = j_free ? std::log(j_floor) : 0.0;
    const Real u_hi = j_free ? std::log(domain.j_max) : 0.0;

    auto value_at = [&](Real s, Real j) { return branch_value(branch, modes, s, j); };

    const std::vector<Real> s_grid = linear_grid(domain.s_min, domain.s_max, s_free ? grid_steps : 1);
    const std::vector<Real> u_grid = linear_grid(u_lo, u_hi, j_free ? grid_steps : 1);

    struct Cell {
        Real s, u, value;
    };
    std::vector<Cell> cells;
    cells.reserve(s_grid.size() * u_grid.size());
    for (Real s : s_grid)
        for (Real u : u_grid) cells.push_back({s, u, value_at(s, j_free ? std::exp(u) : domain.j_min)});
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.value > b.value; });

    // J = 0 gives exactly 2 on every branch; the corner doubles as the
    // fallback for degenerate boxes.
    Real best_value = value_at(domain.s_min, domain.j_min);
    Real best_s = domain.s_min, best_j = domain.j_min;

    std::vector<int> free_dims;  // 0 -> s, 1 -> u
    if (s_free) free_dims.push_back(0);
    if (j_free) free_dims.push_back(1);

    long iterations = 0;
    bool converged = !free_dims.empty() ? false : true;
    const std::size_t starts = std::min<std::size_t>(4, cells.size());
    const Real s_step = s_free ? (domain.s_max - domain.s_min) / static_cast<Real>(grid_steps) : 0.0;
    const Real u_step = j_free ? (u_hi - u_lo) / static_cast<Real>(grid_steps) : 0.0;

    for (std::size_t k = 0; k < starts && !free_dims.empty(); ++k) {
        const Cell& cell = cells[k];
        VecX x0(free_dims.size()), lo(free_dims.size()), hi(free_dims.size()), step(free_dims.size());
        for (std::size_t d = 0; d < free_dims.size(); ++d) {
            if (free_dims[d] == 0) {
                x0[static_cast<Eigen::Index>(d)] = cell.s;
                lo[static_cast<Eigen::Index>(d)] = domain.s_min;
                hi[static_cast<Eigen::Index>(d)] = domain.s_max;
                step[static_cast<Eigen::Index>(d)] = s_step;
            } else {
                x0[static_cast<Eigen::Index>(d)] = cell.u;
                lo[static_cast<Eigen::Index>(d)] = u_lo;
                hi[static_cast<Eigen::Index>(d)] = u_hi;
                step[static_cast<Eigen::Index>(d)] = u_step;
            }
        }

        auto objective = [&](const VecX& x) {
            Real s = s_free ? x[0] : domain.s_min;
            Real u = j_free ? x[s_free ? 1 : 0] : 0.0;
            return value_at(s, j_free ? std::exp(u) : domain.j_min);
        };
        const NelderMeadResult nm = nelder_mead_max(objective, x0, lo, hi, step, 1e-10, 2000);
        iterations += nm.iterations;
        if (nm.value > best_value) {
            best_value = nm.value;
            best_s = s_free ? nm.x[0] : domain.s_min;
            best_j = j_free ? std::exp(nm.x[s_free ? 1 : 0]) : domain.j_min;
            converged = nm.converged;
        }
    }

    report.max = {best_value, Regulator(best_s).regime(modes == 2 ? 2 : 3)};
    report.s_at_max = best_s;
    report.j_at_max = best_j;
    report.iterations = iterations;
    report.converged = converged;
    return report;
}

MaxReport maximize_bell_general(Regulator s, Real amp_bound, int grid_steps) {
    if (!(amp_bound > 0)) throw std::invalid_argument("amp_bound must be positive");
    if (s.regime(3) == Regime::singular)
        throw std::domain_error("general search is singular at s = sqrt(2)");

    const ParityProvider provider = epr_parity_provider(3, s);
    auto objective = [&](const VecX& xp) {
        const PhasePoint pt = phase_point_from_quadratures(xp);
        return bell_b3(provider, pt[0], pt[1], pt[2]).b;
    };

    MaxReport report;
    report.branch = BellBranch::general;
    report.modes = 3;
    report.domain = {s.s, s.s, 0.0, amp_bound * amp_bound};

    const VecX lo = VecX::Constant(6, -amp_bound);
    const VecX hi = VecX::Constant(6, amp_bound);

    struct Seed {
        VecX x;
        Real value;
    };
    std::vector<Seed> seeds;

    const std::vector<Real> axis = linear_grid(-amp_bound, amp_bound, std::max(2, grid_steps));
    VecX probe(6);
    for (Real x0 : axis)
        for (Real p0 : axis)
            for (Real x1 : axis)
                for (Real p1 : axis)
                    for (Real x2 : axis)
                        for (Real p2 : axis) {
                            probe << x0, p0, x1, p1, x2, p2;
                            seeds.push_back({probe, objective(probe)});
                        }

    // The branch patterns at their own optima are natural starting points.
    const ScanDomain pattern_domain{s.s, s.s, 0.0, amp_bound * amp_bound};
    for (BellBranch branch : {BellBranch::imaginary, BellBranch::real_pair}) {
        if (branch == BellBranch::imaginary && std::abs(s.s - std::sqrt(2.0)) < 2.0 * kSingularMargin)
            continue;
        const MaxReport sub = maximize_bell(branch, 3, pattern_domain, 64);
        const std::vector<Complex> amps = branch_displacements(branch, 3, sub.j_at_max);
        PhasePoint pt(3);
        for (int j = 0; j < 3; ++j) pt[j] = amps[static_cast<std::size_t>(j)];
        const VecX xp = quadratures(pt);
        seeds.push_back({xp, objective(xp)});
    }

    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.value > b.value; });

    Real best_value = -kInf;
    VecX best_x = VecX::Zero(6);
    long iterations = 0;
    bool converged = false;
    const VecX step = VecX::Constant(6, amp_bound / static_cast<Real>(std::max(2, grid_steps)));
    for (std::size_t k = 0; k < std::min<std::size_t>(4, seeds.size()); ++k) {
        const NelderMeadResult nm = nelder_mead_max(objective, seeds[k].x, lo, hi, step, 1e-10, 4000);
        iterations += nm.iterations;
        if (nm.value > best_value) {
            best_value = nm.value;
            best_x = nm.x;
            converged = nm.converged;
        }
    }

    report.max = {best_value, s.regime(3)};
    report.s_at_max = s.s;
    report.j_at_max = 0.0;
    report.displacement_at_max = best_x;
    report.iterations = iterations;
    report.converged = converged;
    return report;
}

BellSurface scan_surface(BellBranch branch, int modes, const ScanDomain& domain, int steps,
                         GridSpacing j_spacing) {
    if (branch == BellBranch::general)
        throw std::invalid_argument("surface scans cover the patterned branches");
    if (modes == 2 && branch != BellBranch::imaginary)
        throw std::invalid_argument("the bipartite combination uses the imaginary pattern");
    if (steps < 2) throw std::invalid_argument("scan needs at least 2 steps per axis");
    if (!(domain.j_max >= domain.j_min) || domain.j_min < 0)
        throw std::invalid_argument("scan domain requires 0 <= j_min <= j_max");
    require_branch_domain(branch, modes, domain.s_min, domain.s_max);

    const std::vector<Real> s_grid = linear_grid(domain.s_min, domain.s_max, steps);
    const std::vector<Real> j_grid = j_spacing == GridSpacing::linear
                                         ? linear_grid(domain.j_min, domain.j_max, steps)
                                         : log_grid(domain.j_min, domain.j_max, steps, 1e-6);

    BellSurface surface;
    surface.branch = branch;
    surface.modes = modes;
    surface.rows.resize(s_grid.size() * j_grid.size());

    detail::parallel_for(s_grid.size(), [&](std::size_t si) {
        const Real s = s_grid[si];
        const Regime regime = Regulator(s).regime(modes);
        for (std::size_t ji = 0; ji < j_grid.size(); ++ji) {
            BellRow& row = surface.rows[si * j_grid.size() + ji];
            row.s = s;
            row.j = j_grid[ji];
            row.b = branch_value(branch, modes, s, row.j);
            row.regime = regime;
        }
    });

    for (std::size_t i = 0; i < surface.rows.size(); ++i)
        if (surface.rows[i].b > surface.rows[surface.argmax].b) surface.argmax = i;
    return surface;
}

FigurePreset figure_preset(int figure) {
    // Ranges: s from just above the singular limit to limit + 0.5 (capped
    // below sqrt(2) for figure 2), J in [0, 1] on the log ladder.
    const Real root2 = std::sqrt(2.0);
    switch (figure) {
        case 1: return {1, BellBranch::imaginary, 2, {1.001, 1.501, 0.0, 1.0}, 200};
        case 2: return {2, BellBranch::imaginary, 3, {1.001, 1.4, 0.0, 1.0}, 200};
        case 3: return {3, BellBranch::real_pair, 3, {1.001, 1.501, 0.0, 1.0}, 200};
        case 4: return {4, BellBranch::imaginary, 3, {root2 + 0.001, root2 + 0.501, 0.0, 1.0}, 200};
        default: throw std::invalid_argument("figure presets are 1 through 4");
    }
}

}  // namespace cvepr
