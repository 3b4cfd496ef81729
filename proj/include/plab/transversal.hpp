#ifndef PLAB_TRANSVERSAL_HPP
#define PLAB_TRANSVERSAL_HPP

#include "plab/algebra.hpp"
#include "plab/dirac.hpp"
#include "plab/fields.hpp"

namespace plab {

/// Affine subspace X = base + span(directions) of the dual, with the
/// annihilator of the direction span kept as a basis of the conormal fiber.
struct AffineTransversal {
    LieAlgebra lie;
    Vec base;        // lambda, a dual point
    Mat directions;  // n x k, columns span the direction space L
    Mat conormal;    // n x (n-k), basis of the annihilator of L in the algebra

    int n() const { return lie.dim(); }
    int k() const { return static_cast<int>(directions.cols()); }

    /// Membership snap tolerance, relative to the base point scale.
    double snap_tol() const { return 1e-9 * (1.0 + base.norm()); }

    /// Coordinates of a member point in the direction frame.
    Vec coords_of(const Vec& xi) const {
        if (max_abs(Vec(conormal.transpose() * (xi - base))) > snap_tol())
            throw PointNotOnX("point is off the affine subspace");
        return lstsq(directions, Vec(xi - base));
    }

    Vec embed(const Vec& s) const { return base + directions * s; }
};

/// Both transversality criteria at a dual point, which must agree:
/// complementarity of L with Pi(mu) applied to its annihilator, and
/// nondegeneracy of the pairing mu([.,.]) on the annihilator.
struct TransversalityCheck {
    bool complement = false;
    bool pairing_nondegenerate = false;
    double complement_min_sv = 0.0;
    double pairing_min_sv = 0.0;

    bool ok() const { return complement && pairing_nondegenerate; }
};

inline TransversalityCheck is_transversal_at(const LieAlgebra& lie, const Vec& mu,
                                             const Mat& directions) {
    const int n = lie.dim();
    if (directions.rows() != n) throw DimensionMismatch("direction columns must live in the dual");
    if (svd_rank(directions) != directions.cols())
        throw DimensionMismatch("direction columns are dependent");
    Mat u = kernel_basis(Mat(directions.transpose()));
    Mat pi = lie.poisson_matrix(mu);
    Mat frame(n, n);
    frame.leftCols(directions.cols()) = directions;
    frame.rightCols(u.cols()) = pi * u;
    TransversalityCheck c;
    c.complement_min_sv = min_singular_value(frame);
    c.complement = svd_rank(frame) == n;
    Mat b = u.transpose() * pi * u;
    c.pairing_min_sv = b.size() == 0 ? 1.0 : min_singular_value(b);
    c.pairing_nondegenerate = b.size() == 0 || svd_rank(b) == b.rows();
    if (c.complement != c.pairing_nondegenerate)
        throw NotTransversal("transversality criteria disagree; point is near the boundary");
    return c;
}

/// Validated constructor; throws NotTransversal when the subspace fails at
/// its base point.
inline AffineTransversal make_transversal(LieAlgebra lie, Vec base, Mat directions) {
    if (base.size() != lie.dim()) throw DimensionMismatch("base point dimension");
    if (!is_transversal_at(lie, base, directions).ok())
        throw NotTransversal("subspace is not transversal at its base point");
    AffineTransversal t;
    t.conormal = kernel_basis(Mat(directions.transpose()));
    t.lie = std::move(lie);
    t.base = std::move(base);
    t.directions = std::move(directions);
    return t;
}

/// Block decomposition of the linear bivector at a member point, in the
/// frame [directions | Pi(xi) conormal].  `pi_x` is the induced bivector on
/// the subspace, `w_x` the nondegenerate normal block; the mixed block must
/// vanish.
struct SplitBivector {
    Mat pi_x;   // k x k, direction-frame coordinates
    Mat w_x;    // (n-k) x (n-k), normal-frame coordinates
    Mat frame;  // n x n, [directions | normal]
    double mixed_max = 0.0;
};

inline SplitBivector split_at(const AffineTransversal& t, const Vec& xi) {
    t.coords_of(xi);  // membership check
    const int n = t.n(), k = t.k();
    Mat pi = t.lie.poisson_matrix(xi);
    Mat frame(n, n);
    frame.leftCols(k) = t.directions;
    frame.rightCols(n - k) = pi * t.conormal;
    if (svd_rank(frame) != n)
        throw NotTransversal("frame degenerates at evaluation point");
    Mat inv = frame.inverse();
    Mat pf = inv * pi * inv.transpose();
    SplitBivector s;
    s.frame = frame;
    s.pi_x = pf.topLeftCorner(k, k);
    s.w_x = pf.bottomRightCorner(n - k, n - k);
    s.mixed_max = max_abs(Mat(pf.topRightCorner(k, n - k)));
    double scale = 1.0 + max_abs(pf);
    if (s.mixed_max > 1e-10 * scale)
        throw MixedBlockNonzero("splitting mixed block at member point");
    if (svd_rank(s.w_x) != n - k) throw NotTransversal("normal block degenerates");
    return s;
}

/// Chart on the total space of the conormal bundle over the subspace.
/// A chart point stacks (n-k) fiber coordinates in the conormal basis over
/// k base coordinates in the direction frame.
struct ConormalChart {
    AffineTransversal t;

    int dim() const { return t.n(); }
    int fiber_dim() const { return t.n() - t.k(); }
    int base_dim() const { return t.k(); }

    Vec fiber_part(const Vec& e) const { return e.head(fiber_dim()); }
    Vec base_part(const Vec& e) const { return e.tail(base_dim()); }

    /// Algebra vector represented by the fiber coordinates.
    Vec embed_fiber(const Vec& e) const { return t.conormal * fiber_part(e); }

    /// Dual point under the base coordinates.
    Vec embed_base(const Vec& e) const { return t.base + t.directions * base_part(e); }

    /// Jacobian of (embed_fiber, embed_base), constant in e.
    Mat embedding_jacobian() const {
        const int n = t.n();
        Mat j = Mat::Zero(2 * n, n);
        j.topLeftCorner(n, fiber_dim()) = t.conormal;
        j.bottomRightCorner(n, base_dim()) = t.directions;
        return j;
    }

    /// Bundle projection in chart coordinates.
    Mat projection() const {
        Mat dp = Mat::Zero(base_dim(), dim());
        dp.rightCols(base_dim()) = Mat::Identity(base_dim(), base_dim());
        return dp;
    }

    /// Validity ball for chart-coordinate sampling.
    double sample_radius() const { return 0.1 * (1.0 + t.base.norm()); }
};

inline ConormalChart conormal_chart(const AffineTransversal& t) { return ConormalChart{t}; }

/// Dirac construction of the model bivector on the chart: pull the induced
/// subspace bivector back along the bundle projection, then gauge by the
/// fiberwise two-form value.
inline Mat local_model_from_parts(const Mat& pi_x, const Mat& sigma, int k) {
    const int dim = static_cast<int>(sigma.rows());
    Mat dp = Mat::Zero(k, dim);
    dp.rightCols(k) = Mat::Identity(k, k);
    DiracSpace pulled = backward_image(dp, graph_of_bivector(pi_x));
    return as_bivector(gauge(pulled, sigma));
}

inline Mat local_model(const ConormalChart& chart, const PointField& sigma, const Vec& e) {
    Mat pi_x = split_at(chart.t, chart.embed_base(e)).pi_x;
    return local_model_from_parts(pi_x, sigma.matrix_at(e), chart.base_dim());
}

}

#endif
