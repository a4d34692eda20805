#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "magcp/quadrature.hpp"

namespace magcp::cli {

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    // Perfect-conductor closed form vs double integral: z_tilde, U_e rel. dev., U_m rel. dev.
    std::vector<std::array<double, 3>> pc_table;
    bool passed() const;
};

// Cross-representation and asymptotic checks at the reference particle, run with `quad`.
ValidationReport cmd_validate(const QuadratureConfig& quad);

void print_report(std::ostream& out, const ValidationReport& r);

}  // namespace magcp::cli
