#ifndef CVEPR_IO_HPP
#define CVEPR_IO_HPP

#include "cvepr/chsh.hpp"
#include "cvepr/fock.hpp"

#include "json.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace cvepr {

/// Shortest round-trippable decimal form (17 significant digits).
std::string format_g17(Real value);

nlohmann::json spec_to_json(const GaussianKetSpec& spec);

struct WignerGridRow {
    Real s = 0;
    Real r = 0;
    Vec6 xp = Vec6::Zero();  // x1,p1,x2,p2,x3,p3; trailing entries 0 for 2 modes
    Real w = 0;
    Regime regime = Regime::normalizable;
};

/// Header "s,r,x1,p1,x2,p2,x3,p3,W,regime"; floats with 17 significant digits.
void write_wigner_grid_csv(const std::vector<WignerGridRow>& rows, std::ostream& out);

/// Header "branch,s,J,B,regime".
void write_bell_surface_csv(const BellSurface& surface, std::ostream& out);

nlohmann::json max_report_to_json(const MaxReport& report);

nlohmann::json fock_metadata_json(const FockTensor& tensor);

}  // namespace cvepr

#endif  // CVEPR_IO_HPP
