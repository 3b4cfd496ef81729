// Runs the dual-pair and normal-form verifiers on the rotation algebra and
// prints the text report.
#include <iostream>

#include "plab/plab.hpp"

using namespace plab;

int main() {
    LieAlgebra so3 = catalog::so3();

    Report report;
    report.config = {{"algebra", "so3"}, {"samples", 200}, {"tol", 1e-6}, {"seed", 42}};
    report.add(verify_dual_pair(so3, 200, 1e-6, 42));

    Vec base = Vec::Unit(3, 2);
    Mat dirs(3, 1);
    dirs.col(0) = base;
    AffineTransversal t = make_transversal(so3, base, dirs);
    report.add(verify_normal_form(t, 200, 1e-6, 42));

    std::cout << report.to_text();

    SprayPoint p{0.3 * Vec::Unit(3, 0), base};
    std::cout << "\nspray exponential of (0.3 e1, e3*):\n"
              << spray_exp(so3, p).transpose() << "\n";
    return report.overall_pass ? 0 : 1;
}
