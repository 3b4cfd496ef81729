#ifndef PLAB_LINALG_HPP
#define PLAB_LINALG_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "plab/error.hpp"

namespace plab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Relative singular-value cutoff used by every rank decision in the library.
inline constexpr double kRankRtol = 1e-10;

inline double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const Vec& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

/// Numerical rank: singular values above kRankRtol times the largest.
inline int svd_rank(const Mat& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > kRankRtol * s(0)) ++r;
    return r;
}

inline double min_singular_value(const Mat& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues().minCoeff();
}

/// Orthonormal basis of the right null space of `a`, as columns.
/// A matrix with no rows annihilates nothing: the kernel is all of R^n.
inline Mat kernel_basis(const Mat& a) {
    const int n = static_cast<int>(a.cols());
    if (a.rows() == 0) return Mat::Identity(n, n);
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (smax > 0.0 && s(i) > kRankRtol * smax) ++r;
    return svd.matrixV().rightCols(n - r);
}

/// Orthonormal basis of the column space of `a`, as columns.
inline Mat orthonormal_columns(const Mat& a) {
    if (a.cols() == 0 || a.rows() == 0) return Mat(a.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (smax > 0.0 && s(i) > kRankRtol * smax) ++r;
    return svd.matrixU().leftCols(r);
}

/// Max-norm distance between the orthogonal projectors onto the column
/// spans of `a` and `b`.  Zero iff the spans agree; order one when they
/// differ in dimension or direction.
inline double subspace_distance(const Mat& a, const Mat& b) {
    Mat qa = orthonormal_columns(a);
    Mat qb = orthonormal_columns(b);
    Mat pa = qa * qa.transpose();
    Mat pb = qb * qb.transpose();
    if (pa.size() == 0 && pb.size() == 0) return 0.0;
    if (pa.size() == 0) return max_abs(pb);
    if (pb.size() == 0) return max_abs(pa);
    return max_abs(Mat(pa - pb));
}

/// Minimum-norm least-squares solve.
inline Vec lstsq(const Mat& a, const Vec& b) {
    if (a.cols() == 0) return Vec(0);
    return a.completeOrthogonalDecomposition().solve(b);
}

inline Mat lstsq(const Mat& a, const Mat& b) {
    if (a.cols() == 0) return Mat(0, b.cols());
    return a.completeOrthogonalDecomposition().solve(b);
}

inline Mat pinv(const Mat& a) {
    return a.completeOrthogonalDecomposition().pseudoInverse();
}

/// Matrix exponential together with Xi(A) = sum_{k>=0} A^k / (k+1)!,
/// the operator with A * Xi(A) = exp(A) - I.  Scaling and squaring with a
/// Taylor tail of order 12; Xi is propagated through the squaring step via
/// Xi(2A) = Xi(A) (I + exp(A)) / 2.
inline void matrix_exp_xi(const Mat& a, Mat& exp_out, Mat& xi_out) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n) throw DimensionMismatch("matrix_exp_xi needs a square matrix");
    int squarings = 0;
    double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.5) {
        norm /= 2.0;
        ++squarings;
    }
    Mat b = a / std::ldexp(1.0, squarings);
    Mat e = Mat::Identity(n, n);
    Mat x = Mat::Identity(n, n);
    Mat term = Mat::Identity(n, n);
    double fact = 1.0;
    for (int k = 1; k <= 12; ++k) {
        term = Mat(term * b);
        fact *= k;
        e += term / fact;
        x += term / (fact * (k + 1));
    }
    for (int i = 0; i < squarings; ++i) {
        x = Mat(x * (Mat::Identity(n, n) + e) / 2.0);
        e = Mat(e * e);
    }
    exp_out = e;
    xi_out = x;
}

inline Mat matrix_exp(const Mat& a) {
    Mat e, x;
    matrix_exp_xi(a, e, x);
    return e;
}

/// Central-difference Jacobian of `f` at `p` with step `h` per coordinate.
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& p,
                       double h) {
    Vec f0 = f(p);
    Mat jac(f0.size(), p.size());
    for (int j = 0; j < p.size(); ++j) {
        Vec pp = p, pm = p;
        pp(j) += h;
        pm(j) -= h;
        jac.col(j) = (f(pp) - f(pm)) / (2.0 * h);
    }
    return jac;
}

/// Step size scaled to the magnitude of the evaluation point.
inline double fd_step_for(const Vec& p, double base = 1e-5) {
    return base * (1.0 + p.norm());
}

}

#endif
