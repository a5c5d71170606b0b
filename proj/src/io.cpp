#include "cvepr/io.hpp"

#include <cmath>
#include <cstdio>

namespace cvepr {

std::string format_g17(Real value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

nlohmann::json spec_to_json(const GaussianKetSpec& spec) {
    nlohmann::json j;
    j["modes"] = spec.modes;
    j["family"] = to_string(spec.family);
    if (spec.family == StateFamily::epr)
        j["s"] = spec.s_or_r;
    else
        j["r"] = spec.s_or_r;

    nlohmann::json eta = nlohmann::json::array();
    for (Eigen::Index i = 0; i < spec.eta.size(); ++i)
        eta.push_back({spec.eta[i].real(), spec.eta[i].imag()});
    j["eta"] = eta;

    nlohmann::json f = nlohmann::json::array();
    for (Eigen::Index r = 0; r < spec.coupling.rows(); ++r)
        for (Eigen::Index c = 0; c < spec.coupling.cols(); ++c)
            f.push_back({spec.coupling(r, c).real(), spec.coupling(r, c).imag()});
    j["F"] = f;

    if (std::isnan(spec.norm))
        j["norm"] = nullptr;
    else
        j["norm"] = spec.norm;
    j["regime"] = to_string(spec.regime);
    return j;
}

void write_wigner_grid_csv(const std::vector<WignerGridRow>& rows, std::ostream& out) {
    out << "s,r,x1,p1,x2,p2,x3,p3,W,regime\n";
    for (const WignerGridRow& row : rows) {
        out << format_g17(row.s) << ',' << format_g17(row.r);
        for (int k = 0; k < 6; ++k) out << ',' << format_g17(row.xp[k]);
        out << ',' << format_g17(row.w) << ',' << to_string(row.regime) << '\n';
    }
}

void write_bell_surface_csv(const BellSurface& surface, std::ostream& out) {
    const std::string branch =
        std::string(surface.modes == 2 ? "b2_" : "b3_") + to_string(surface.branch);
    out << "branch,s,J,B,regime\n";
    for (const BellRow& row : surface.rows)
        out << branch << ',' << format_g17(row.s) << ',' << format_g17(row.j) << ','
            << format_g17(row.b) << ',' << to_string(row.regime) << '\n';
}

nlohmann::json max_report_to_json(const MaxReport& report) {
    nlohmann::json j;
    j["branch"] = to_string(report.branch);
    j["modes"] = report.modes;
    j["domain"] = {{"s_min", report.domain.s_min},
                   {"s_max", report.domain.s_max},
                   {"j_min", report.domain.j_min},
                   {"j_max", report.domain.j_max}};
    j["max"] = report.max.b;
    j["regime"] = to_string(report.max.regime);
    nlohmann::json argmax;
    argmax["s"] = report.s_at_max;
    argmax["J"] = report.j_at_max;
    if (report.displacement_at_max.size() == 6) {
        nlohmann::json d = nlohmann::json::array();
        for (int k = 0; k < 6; ++k) d.push_back(report.displacement_at_max[k]);
        argmax["displacement"] = d;
    }
    j["argmax"] = argmax;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    return j;
}

nlohmann::json fock_metadata_json(const FockTensor& tensor) {
    return {{"modes", tensor.modes},
            {"cutoff", tensor.cutoff},
            {"captured_norm", tensor.captured_norm},
            {"tail_estimate", tensor.tail_estimate}};
}

}  // namespace cvepr
