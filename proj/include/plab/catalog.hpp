#ifndef PLAB_CATALOG_HPP
#define PLAB_CATALOG_HPP

#include <vector>

#include "plab/algebra.hpp"

namespace plab {
namespace catalog {

/// Rotation algebra: [e0,e1] = e2, [e1,e2] = e0, [e2,e0] = e1.
inline LieAlgebra so3() {
    return LieAlgebra::from_entries("so3", 3,
                                    {{0, 1, 2, 1}, {1, 2, 0, 1}, {0, 2, 1, -1}});
}

/// Basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h.
inline LieAlgebra sl2() {
    return LieAlgebra::from_entries("sl2", 3,
                                    {{0, 1, 1, 2}, {0, 2, 2, -2}, {1, 2, 0, 1}});
}

/// Affine line: [e0,e1] = e1.
inline LieAlgebra aff1() {
    return LieAlgebra::from_entries("aff1", 2, {{0, 1, 1, 1}});
}

/// Two commuting affine lines: [e0,e1] = e1, [e2,e3] = e3.
inline LieAlgebra aff1_x_aff1() {
    return LieAlgebra::from_entries("aff1_x_aff1", 4, {{0, 1, 1, 1}, {2, 3, 3, 1}});
}

/// Heisenberg: [e0,e1] = e2, center e2.
inline LieAlgebra heisenberg3() {
    return LieAlgebra::from_entries("heisenberg3", 3, {{0, 1, 2, 1}});
}

inline LieAlgebra abelian(int n) {
    return LieAlgebra::from_entries("abelian", n, {});
}

/// Upper-triangular traceless 2x2 matrices, basis (h, e): [h,e] = 2e.
/// Embeds into sl2 as the first two basis vectors.
inline LieAlgebra borel2() {
    return LieAlgebra::from_entries("borel2", 2, {{0, 1, 1, 2}});
}

/// Antisymmetric but non-Jacobi table: [e0,e1] = e0, [e1,e2] = e1.
/// Its Jacobi defect on (e0,e1,e2) is -e0.
inline LieAlgebra broken3() {
    return LieAlgebra::from_entries("broken3", 3, {{0, 1, 0, 1}, {1, 2, 1, 1}});
}

/// Defining representation of so3 by 3x3 antisymmetric matrices.
inline std::vector<Mat> so3_defining_rep() {
    std::vector<Mat> rho(3, Mat::Zero(3, 3));
    rho[0] << 0, 0, 0, 0, 0, -1, 0, 1, 0;
    rho[1] << 0, 0, 1, 0, 0, 0, -1, 0, 0;
    rho[2] << 0, -1, 0, 1, 0, 0, 0, 0, 0;
    return rho;
}

/// Defining representation of sl2 by traceless 2x2 matrices.
inline std::vector<Mat> sl2_defining_rep() {
    std::vector<Mat> rho(3, Mat::Zero(2, 2));
    rho[0] << 1, 0, 0, -1;
    rho[1] << 0, 1, 0, 0;
    rho[2] << 0, 0, 1, 0;
    return rho;
}

}
}

#endif
