#ifndef PLAB_DIRAC_HPP
#define PLAB_DIRAC_HPP

#include "plab/linalg.hpp"

namespace plab {

/// Lagrangian subspace of V + V* under the pairing
/// <(u,a),(v,b)> = a(v) + b(u).  The basis matrix is 2n x n with the vector
/// part in the top n rows and the covector part in the bottom n rows.
struct DiracSpace {
    int n = 0;
    Mat basis;  // 2n x n, orthonormal columns

    double isotropy_residual() const {
        Mat pairing = Mat::Zero(2 * n, 2 * n);
        pairing.topRightCorner(n, n) = Mat::Identity(n, n);
        pairing.bottomLeftCorner(n, n) = Mat::Identity(n, n);
        return max_abs(Mat(basis.transpose() * pairing * basis));
    }
};

/// Wrap a raw spanning set into a DiracSpace, orthonormalizing and checking
/// dimension n and isotropy.
inline DiracSpace make_dirac(int n, const Mat& span) {
    if (span.rows() != 2 * n) throw DimensionMismatch("Dirac span must have 2n rows");
    DiracSpace d;
    d.n = n;
    d.basis = orthonormal_columns(span);
    if (d.basis.cols() != n)
        throw DimensionDrop("Dirac construction produced dimension " +
                            std::to_string(d.basis.cols()) + " instead of " + std::to_string(n));
    if (d.isotropy_residual() > 1e-9) throw DimensionDrop("Dirac construction lost isotropy");
    return d;
}

/// Graph of a bivector: pairs (Pi a, a).
inline DiracSpace graph_of_bivector(const Mat& pi) {
    const int n = static_cast<int>(pi.rows());
    if (pi.cols() != n) throw DimensionMismatch("bivector matrix must be square");
    if (max_abs(Mat(pi + pi.transpose())) > 1e-10 * (1.0 + max_abs(pi)))
        throw NotAntisymmetric("graph_of_bivector input");
    Mat span(2 * n, n);
    span.topRows(n) = pi;
    span.bottomRows(n) = Mat::Identity(n, n);
    return make_dirac(n, span);
}

/// Graph of a two-form: pairs (v, w v).
inline DiracSpace graph_of_twoform(const Mat& w) {
    const int n = static_cast<int>(w.rows());
    if (w.cols() != n) throw DimensionMismatch("two-form matrix must be square");
    if (max_abs(Mat(w + w.transpose())) > 1e-10 * (1.0 + max_abs(w)))
        throw NotAntisymmetric("graph_of_twoform input");
    Mat span(2 * n, n);
    span.topRows(n) = Mat::Identity(n, n);
    span.bottomRows(n) = w;
    return make_dirac(n, span);
}

/// Gauge transform by a closed two-form value: (v, a) |-> (v, a + s v).
inline DiracSpace gauge(const DiracSpace& d, const Mat& sigma) {
    if (sigma.rows() != d.n || sigma.cols() != d.n)
        throw DimensionMismatch("gauge form has wrong shape");
    if (max_abs(Mat(sigma + sigma.transpose())) > 1e-10 * (1.0 + max_abs(sigma)))
        throw NotAntisymmetric("gauge input");
    Mat span = d.basis;
    span.bottomRows(d.n) += sigma * span.topRows(d.n);
    return make_dirac(d.n, span);
}

/// Backward image along f: V -> W of a Dirac space on W:
/// {(v, f^T b) : (f v, b) in L_W}.  Always Lagrangian of dimension dim V.
inline DiracSpace backward_image(const Mat& f, const DiracSpace& lw) {
    const int m = static_cast<int>(f.rows());
    const int nv = static_cast<int>(f.cols());
    if (lw.n != m) throw DimensionMismatch("backward_image codomain mismatch");
    Mat vw = lw.basis.topRows(m);
    Mat bw = lw.basis.bottomRows(m);
    // Solve f v = V_W c; kernel columns stack (v; c).
    Mat sys(m, nv + lw.basis.cols());
    sys.leftCols(nv) = f;
    sys.rightCols(lw.basis.cols()) = -vw;
    Mat ker = kernel_basis(sys);
    Mat span(2 * nv, ker.cols());
    span.topRows(nv) = ker.topRows(nv);
    span.bottomRows(nv) = f.transpose() * bw * ker.bottomRows(lw.basis.cols());
    return make_dirac(nv, span);
}

/// Forward image along f: V -> W of a Dirac space on V:
/// {(f v, b) : (v, f^T b) in L_V}.  Pairs (0, b) with b in ker f^T are
/// produced by the kernel formulation since (0, 0) lies in L_V.
inline DiracSpace forward_image(const Mat& f, const DiracSpace& lv) {
    const int m = static_cast<int>(f.rows());
    const int nv = static_cast<int>(f.cols());
    if (lv.n != nv) throw DimensionMismatch("forward_image domain mismatch");
    Mat vv = lv.basis.topRows(nv);
    Mat bv = lv.basis.bottomRows(nv);
    // Solve B_V c = f^T b; kernel columns stack (c; b).
    Mat sys(nv, lv.basis.cols() + m);
    sys.leftCols(lv.basis.cols()) = bv;
    sys.rightCols(m) = -f.transpose();
    Mat ker = kernel_basis(sys);
    Mat span(2 * m, ker.cols());
    span.topRows(m) = f * vv * ker.topRows(lv.basis.cols());
    span.bottomRows(m) = ker.bottomRows(m);
    return make_dirac(m, span);
}

/// Recover the bivector whose graph is `d`; throws NotGraph with the
/// dimension of the intersection with V + 0 when the projection to V*
/// degenerates.
inline Mat as_bivector(const DiracSpace& d) {
    Mat v = d.basis.topRows(d.n);
    Mat a = d.basis.bottomRows(d.n);
    int r = svd_rank(a);
    if (r < d.n) throw NotGraph("covector projection has rank " + std::to_string(r), d.n - r);
    Mat pi = v * pinv(a);
    if (max_abs(Mat(pi + pi.transpose())) > 1e-9 * (1.0 + max_abs(pi)))
        throw NotAntisymmetric("recovered bivector");
    // Symmetrize away round-off so downstream graph constructions accept it.
    return 0.5 * (pi - pi.transpose());
}

/// Max-norm distance between two Dirac spaces as subspaces of V + V*.
inline double dirac_distance(const DiracSpace& a, const DiracSpace& b) {
    if (a.n != b.n) throw DimensionMismatch("dirac_distance ambient mismatch");
    return subspace_distance(a.basis, b.basis);
}

}

#endif
