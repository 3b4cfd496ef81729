// Builds the Dirac-recipe local model of the rotation algebra around the
// polar axis transversal and prints the split blocks and the model bivector.
#include <iostream>

#include "plab/plab.hpp"

using namespace plab;

int main() {
    LieAlgebra so3 = catalog::so3();
    Vec base = Vec::Unit(3, 2);
    Mat dirs(3, 1);
    dirs.col(0) = base;
    AffineTransversal t = make_transversal(so3, base, dirs);

    SplitBivector s = split_at(t, Vec(1.4 * base));
    std::cout << "tangential block:\n" << s.pi_x << "\n";
    std::cout << "normal block:\n" << s.w_x << "\n";
    std::cout << "mixed block max: " << s.mixed_max << "\n\n";

    ConormalChart chart = conormal_chart(t);
    PointField sigma = omega_V_on_conormal(chart);
    Vec e = Vec::Zero(chart.dim());
    e(chart.dim() - 1) = 0.2;  // base slot of the chart point
    std::cout << "model bivector at a chart point:\n" << local_model(chart, sigma, e) << "\n";
    return 0;
}
