#include "cvepr/cli.hpp"

#include "cvepr/io.hpp"
#include "parallel_util.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace cvepr::cli {

namespace {

struct StateFlags {
    int modes = 3;
    std::optional<Real> s;
    std::optional<Real> r;
    std::string eta_text;
};

void add_state_flags(CLI::App* cmd, StateFlags& flags, bool allow_eta = true) {
    cmd->add_option("--modes", flags.modes, "Mode count (2 or 3)")->required();
    auto* s_opt = cmd->add_option("--s", flags.s, "Regulator s (> 1) of the EPR-type family");
    auto* r_opt = cmd->add_option("--r", flags.r, "Squeezing r (>= 0) of the NOPA family");
    s_opt->excludes(r_opt);
    if (allow_eta)
        cmd->add_option("--eta", flags.eta_text, "Eta parameters as re:im pairs, comma separated");
}

CVecX parse_eta(const std::string& text, int modes) {
    if (text.empty()) return CVecX::Zero(modes);
    std::vector<Complex> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("eta entries must look like re:im, got '" + item + "'");
        values.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    }
    if (static_cast<int>(values.size()) != modes)
        throw std::invalid_argument("eta needs exactly one re:im pair per mode");
    CVecX eta(modes);
    for (int i = 0; i < modes; ++i) eta[i] = values[static_cast<std::size_t>(i)];
    return eta;
}

VecX parse_reals(const std::string& text, int expected, const char* what) {
    std::vector<Real> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
    if (expected >= 0 && static_cast<int>(values.size()) != expected)
        throw std::invalid_argument(std::string(what) + " needs " + std::to_string(expected) +
                                    " comma-separated values");
    VecX out(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) out[static_cast<Eigen::Index>(i)] = values[i];
    return out;
}

GaussianKetSpec build_spec(const StateFlags& flags) {
    if (flags.modes != 2 && flags.modes != 3)
        throw std::invalid_argument("--modes must be 2 or 3");
    if (flags.s.has_value() == flags.r.has_value())
        throw std::invalid_argument("pass exactly one of --s or --r");
    if (flags.s) return epr_ket(flags.modes, Regulator(*flags.s), parse_eta(flags.eta_text, flags.modes));
    if (!flags.eta_text.empty())
        throw std::invalid_argument("--eta applies to the EPR-type family only");
    const SqueezingParam r(*flags.r);
    return flags.modes == 2 ? nopa2_ket(r) : nopa3_ket(r);
}

// Closed forms by default; the engine for eta != 0 or on request.
std::function<WignerValue(const PhasePoint&)> wigner_evaluator(const GaussianKetSpec& spec,
                                                               bool use_engine) {
    const bool driven = spec.drive.size() > 0 && spec.drive.cwiseAbs().maxCoeff() > 0;
    if (use_engine || driven || spec.modes == 2)
        return [spec](const PhasePoint& pt) { return wigner_displaced_parity(spec, pt); };
    if (spec.family == StateFamily::epr) {
        const Regulator s(spec.s_or_r);
        return [s](const PhasePoint& pt) { return wigner_epr3_closed(s, pt); };
    }
    const SqueezingParam r(spec.s_or_r);
    return [r](const PhasePoint& pt) { return wigner_nopa3_closed(r, pt); };
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output path '" + path + "'");
    out << content;
}

void require_format(const std::string& format, const std::string& expected) {
    if (format != expected)
        throw std::invalid_argument("this command emits " + expected + " output");
}

BellBranch parse_branch(const std::string& name) {
    if (name == "imaginary") return BellBranch::imaginary;
    if (name == "real_pair" || name == "real") return BellBranch::real_pair;
    if (name == "general") return BellBranch::general;
    throw std::invalid_argument("unknown branch '" + name + "'");
}

int run_state_info(const StateFlags& flags, const std::string& format, const std::string& out) {
    require_format(format, "json");
    const GaussianKetSpec spec = build_spec(flags);
    write_output(out, spec_to_json(spec).dump(2) + "\n");
    return 0;
}

int run_wigner_eval(const StateFlags& flags, const std::string& point_text, bool use_engine,
                    const std::string& format, const std::string& out) {
    require_format(format, "json");
    const GaussianKetSpec spec = build_spec(flags);
    const PhasePoint pt =
        phase_point_from_quadratures(parse_reals(point_text, 2 * flags.modes, "--point"));
    const WignerValue w = wigner_evaluator(spec, use_engine)(pt);
    nlohmann::json j{{"W", w.w}, {"exponent", w.exponent}, {"regime", to_string(w.regime)}};
    write_output(out, j.dump(2) + "\n");
    return 0;
}

int run_wigner_grid(const StateFlags& flags, const std::string& point_text, bool use_engine,
                    Real x_min, Real x_max, Real p_min, Real p_max, int steps,
                    const std::string& format, const std::string& out) {
    require_format(format, "csv");
    if (steps < 2) throw std::invalid_argument("--steps must be at least 2");
    const GaussianKetSpec spec = build_spec(flags);
    VecX base = VecX::Zero(2 * flags.modes);
    if (!point_text.empty()) base = parse_reals(point_text, 2 * flags.modes, "--point");
    const auto evaluate = wigner_evaluator(spec, use_engine);

    std::vector<WignerGridRow> rows(static_cast<std::size_t>(steps) * steps);
    detail::parallel_for(static_cast<std::size_t>(steps), [&](std::size_t i) {
        VecX xp = base;
        xp[0] = x_min + (x_max - x_min) * static_cast<Real>(i) / static_cast<Real>(steps - 1);
        for (int k = 0; k < steps; ++k) {
            xp[1] = p_min + (p_max - p_min) * static_cast<Real>(k) / static_cast<Real>(steps - 1);
            const WignerValue w = evaluate(phase_point_from_quadratures(xp));
            WignerGridRow& row = rows[i * static_cast<std::size_t>(steps) + static_cast<std::size_t>(k)];
            if (spec.family == StateFamily::epr)
                row.s = spec.s_or_r;
            else
                row.r = spec.s_or_r;
            row.xp.head(2 * flags.modes) = xp;
            row.w = w.w;
            row.regime = w.regime;
        }
    });

    std::ostringstream text;
    write_wigner_grid_csv(rows, text);
    write_output(out, text.str());
    return 0;
}

int run_chsh_scan(int figure, std::string branch_name, int modes, ScanDomain domain, int steps,
                  std::string spacing, const std::string& format, const std::string& out) {
    require_format(format, "csv");
    BellBranch branch;
    GridSpacing grid_spacing;
    if (figure != 0) {
        const FigurePreset preset = figure_preset(figure);
        branch = preset.branch;
        modes = preset.modes;
        domain = preset.domain;
        steps = preset.steps;
        grid_spacing = GridSpacing::log;
    } else {
        branch = parse_branch(branch_name);
        if (spacing == "linear")
            grid_spacing = GridSpacing::linear;
        else if (spacing == "log")
            grid_spacing = GridSpacing::log;
        else
            throw std::invalid_argument("--spacing must be linear or log");
    }
    const BellSurface surface = scan_surface(branch, modes, domain, steps, grid_spacing);
    std::ostringstream text;
    write_bell_surface_csv(surface, text);
    write_output(out, text.str());
    return 0;
}

int run_chsh_max(const std::string& branch_name, int modes, ScanDomain domain, int steps,
                 std::optional<Real> s_fixed, Real amp_bound, const std::string& format,
                 const std::string& out) {
    require_format(format, "json");
    const BellBranch branch = parse_branch(branch_name);
    MaxReport report;
    if (branch == BellBranch::general) {
        if (!s_fixed) throw std::invalid_argument("the general search needs a fixed --s");
        report = maximize_bell_general(Regulator(*s_fixed), amp_bound);
    } else {
        if (s_fixed) {
            domain.s_min = *s_fixed;
            domain.s_max = *s_fixed;
        }
        report = maximize_bell(branch, modes, domain, steps);
    }
    write_output(out, max_report_to_json(report).dump(2) + "\n");
    return 0;
}

int run_oracle_compare(const StateFlags& flags, int cutoff, int points, unsigned seed, Real max_amp,
                       Real tol, const std::string& format, const std::string& out) {
    require_format(format, "json");
    const GaussianKetSpec spec = build_spec(flags);
    const auto evaluate = wigner_evaluator(spec, /*use_engine=*/false);
    const Real scale = std::pow(M_PI / 2.0, flags.modes);

    std::mt19937 rng(seed);
    std::uniform_real_distribution<Real> mag(0.0, max_amp);
    std::uniform_real_distribution<Real> phase(0.0, 2.0 * M_PI);

    Real max_diff = 0, sum_diff = 0, tail = 0;
    for (int k = 0; k < points; ++k) {
        PhasePoint pt(flags.modes);
        for (int j = 0; j < flags.modes; ++j) pt[j] = std::polar(mag(rng), phase(rng));
        const Real closed = scale * evaluate(pt).w;
        const ParityEstimate oracle = parity_expectation_oracle(spec, pt, cutoff);
        tail = oracle.tail_estimate;
        const Real diff = std::abs(closed - oracle.value);
        max_diff = std::max(max_diff, diff);
        sum_diff += diff;
    }

    const bool passed = max_diff <= tol + tail;
    nlohmann::json j{{"state", spec_to_json(spec)},
                     {"cutoff", cutoff},
                     {"points", points},
                     {"seed", seed},
                     {"max_abs_diff", max_diff},
                     {"mean_abs_diff", points > 0 ? sum_diff / points : 0.0},
                     {"tail_estimate", tail},
                     {"tolerance", tol},
                     {"passed", passed}};
    write_output(out, j.dump(2) + "\n");
    if (!passed)
        throw std::runtime_error("oracle disagreement " + format_g17(max_diff) + " beyond tolerance");
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Regularised CV EPR-type states: Wigner functions and CHSH surveys"};
    app.require_subcommand(1);

    std::string format = "json";
    std::string out;

    StateFlags info_flags;
    auto* info = app.add_subcommand("state-info", "Construct a state and print its coefficient data");
    add_state_flags(info, info_flags);
    info->add_option("--format", format);
    info->add_option("--out", out);

    StateFlags eval_flags;
    std::string eval_point;
    bool eval_engine = false;
    auto* eval = app.add_subcommand("wigner-eval", "Evaluate the Wigner function at one phase point");
    add_state_flags(eval, eval_flags);
    eval->add_option("--point", eval_point, "Quadratures x1,p1,...")->required();
    eval->add_flag("--engine", eval_engine, "Force the general Berezin engine");
    eval->add_option("--format", format);
    eval->add_option("--out", out);

    StateFlags grid_flags;
    std::string grid_point;
    bool grid_engine = false;
    Real x_min = -2, x_max = 2, p_min = -2, p_max = 2;
    int grid_steps = 64;
    std::string grid_format = "csv";
    auto* grid = app.add_subcommand("wigner-grid", "Wigner values on an (x1, p1) grid as CSV");
    add_state_flags(grid, grid_flags);
    grid->add_option("--point", grid_point, "Base quadratures for the remaining coordinates");
    grid->add_flag("--engine", grid_engine);
    grid->add_option("--x-min", x_min);
    grid->add_option("--x-max", x_max);
    grid->add_option("--p-min", p_min);
    grid->add_option("--p-max", p_max);
    grid->add_option("--steps", grid_steps);
    grid->add_option("--format", grid_format);
    grid->add_option("--out", out);

    int figure = 0;
    std::string scan_branch = "imaginary";
    int scan_modes = 3;
    ScanDomain scan_domain{1.001, 1.4, 0.0, 1.0};
    int scan_steps = 200;
    std::string scan_spacing = "log";
    std::string scan_format = "csv";
    auto* scan = app.add_subcommand("chsh-scan", "Bell-value surface over (s, J) as CSV");
    scan->add_option("--figure", figure, "Survey figure preset (1-4)")->check(CLI::Range(1, 4));
    scan->add_option("--branch", scan_branch, "imaginary or real_pair");
    scan->add_option("--modes", scan_modes);
    scan->add_option("--s-min", scan_domain.s_min);
    scan->add_option("--s-max", scan_domain.s_max);
    scan->add_option("--j-min", scan_domain.j_min);
    scan->add_option("--j-max", scan_domain.j_max);
    scan->add_option("--steps", scan_steps);
    scan->add_option("--spacing", scan_spacing, "linear or log J grid");
    scan->add_option("--format", scan_format);
    scan->add_option("--out", out);

    std::string max_branch = "imaginary";
    int max_modes = 3;
    ScanDomain max_domain{1.001, 1.4, 0.0, 1.0};
    int max_steps = 48;
    std::optional<Real> max_s;
    Real amp_bound = 1.0;
    auto* chmax = app.add_subcommand("chsh-max", "Maximize a Bell branch; JSON report");
    chmax->add_option("--branch", max_branch, "imaginary, real_pair or general");
    chmax->add_option("--modes", max_modes);
    chmax->add_option("--s-min", max_domain.s_min);
    chmax->add_option("--s-max", max_domain.s_max);
    chmax->add_option("--j-min", max_domain.j_min);
    chmax->add_option("--j-max", max_domain.j_max);
    chmax->add_option("--steps", max_steps);
    chmax->add_option("--s", max_s, "Fix the regulator (degenerate s-box)");
    chmax->add_option("--amp-bound", amp_bound, "Displacement box half-width (general branch)");
    chmax->add_option("--format", format);
    chmax->add_option("--out", out);

    StateFlags oracle_flags;
    int cutoff = 25, points = 20;
    unsigned seed = 1;
    Real max_amp = 0.8, tol = 1e-6;
    auto* oracle = app.add_subcommand("oracle-compare",
                                      "Closed-form parity vs the Fock-space oracle; JSON report");
    add_state_flags(oracle, oracle_flags);
    oracle->add_option("--cutoff", cutoff);
    oracle->add_option("--points", points);
    oracle->add_option("--seed", seed);
    oracle->add_option("--max-amp", max_amp);
    oracle->add_option("--tol", tol);
    oracle->add_option("--format", format);
    oracle->add_option("--out", out);

    try {
        app.parse(argc, argv);
        if (info->parsed()) return run_state_info(info_flags, format, out);
        if (eval->parsed()) return run_wigner_eval(eval_flags, eval_point, eval_engine, format, out);
        if (grid->parsed())
            return run_wigner_grid(grid_flags, grid_point, grid_engine, x_min, x_max, p_min, p_max,
                                   grid_steps, grid_format, out);
        if (scan->parsed())
            return run_chsh_scan(figure, scan_branch, scan_modes, scan_domain, scan_steps,
                                 scan_spacing, scan_format, out);
        if (chmax->parsed())
            return run_chsh_max(max_branch, max_modes, max_domain, max_steps, max_s, amp_bound,
                                format, out);
        if (oracle->parsed())
            return run_oracle_compare(oracle_flags, cutoff, points, seed, max_amp, tol, format, out);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << nlohmann::json{{"kind", "validation"}, {"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << nlohmann::json{{"kind", "validation"}, {"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << nlohmann::json{{"kind", "validation"}, {"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"kind", "numerical"}, {"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace cvepr::cli
