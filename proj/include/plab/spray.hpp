#ifndef PLAB_SPRAY_HPP
#define PLAB_SPRAY_HPP

#include "plab/report.hpp"
#include "plab/rng.hpp"
#include "plab/transversal.hpp"

namespace plab {

/// Point of the tangent model: an algebra vector over a dual point.
struct SprayPoint {
    Vec x;   // algebra vector
    Vec xi;  // dual point
};

/// Time-t flow of the quadratic spray: rescales along exp(t ad_x) in the
/// fiber direction while keeping the algebra vector.
inline SprayPoint spray_flow(const LieAlgebra& lie, const SprayPoint& p, double t) {
    return {p.x, coad_exp(lie, Vec(t * p.x), p.xi)};
}

/// Time-one base point of the spray flow.
inline Vec spray_exp(const LieAlgebra& lie, const SprayPoint& p) {
    return coad_exp(lie, p.x, p.xi);
}

/// Symplectic form on the tangent model at (x0, xi0), as a matrix on
/// stacked tangents (algebra part over dual part):
///   [[Xi^T Pi(xi0) Xi, -Xi^T], [Xi, 0]]  with  Xi = xi_operator(x0).
inline Mat omega_g_matrix(const LieAlgebra& lie, const Vec& x0, const Vec& xi0) {
    const int n = lie.dim();
    Mat xi = xi_operator(lie, x0);
    Mat p0 = lie.poisson_matrix(xi0);
    Mat o = Mat::Zero(2 * n, 2 * n);
    o.topLeftCorner(n, n) = xi.transpose() * p0 * xi;
    o.topRightCorner(n, n) = -xi.transpose();
    o.bottomLeftCorner(n, n) = xi;
    return o;
}

inline double omega_g(const LieAlgebra& lie, const SprayPoint& at, const Vec& u, const Vec& v) {
    if (u.size() != 2 * lie.dim() || v.size() != 2 * lie.dim())
        throw DimensionMismatch("omega_g tangents must stack algebra and dual parts");
    return u.dot(omega_g_matrix(lie, at.x, at.xi) * v);
}

/// The form as a field on stacked coordinates, for closedness checks.
inline PointField omega_g_field(const LieAlgebra& lie, double fd_step = 1e-5) {
    const int n = lie.dim();
    return twoform_field(2 * n, [lie, n](const Vec& p) {
        return omega_g_matrix(lie, p.head(n), p.tail(n));
    }, fd_step);
}

/// Residuals of the dual-pair structure at one sample: the projection leg
/// pushes the inverse form to +Pi at the source, the spray-exponential leg
/// to -Pi at its image, and the legs annihilate each other.
struct DualPairResidual {
    double projection = 0.0;
    double exponential = 0.0;
    double commutation = 0.0;

    double max() const { return std::max({projection, exponential, commutation}); }
};

inline DualPairResidual dual_pair_residual(const LieAlgebra& lie, const SprayPoint& p,
                                           double fd_step = 1e-6) {
    const int n = lie.dim();
    Mat xi = xi_operator(lie, p.x);
    if (min_singular_value(xi) <= 1e-8)
        throw SingularBase("tangent model degenerates at the sample");
    Mat o = omega_g_matrix(lie, p.x, p.xi);
    Mat oinv = o.inverse();
    Mat dpr = Mat::Zero(n, 2 * n);
    dpr.rightCols(n) = Mat::Identity(n, n);
    Vec stacked(2 * n);
    stacked << p.x, p.xi;
    auto expmap = [&](const Vec& q) { return coad_exp(lie, q.head(n), q.tail(n)); };
    Mat jexp = fd_jacobian(expmap, stacked, fd_step * (1.0 + stacked.norm()));
    DualPairResidual r;
    r.projection = max_abs(Mat(dpr * oinv * dpr.transpose() - lie.poisson_matrix(p.xi)));
    r.exponential =
        max_abs(Mat(jexp * oinv * jexp.transpose() + lie.poisson_matrix(expmap(stacked))));
    r.commutation = max_abs(Mat(dpr * oinv * jexp.transpose()));
    return r;
}

/// Sampled dual-pair certification; algebra vectors stay inside the unit
/// ball where the tangent model is regular.
inline VerificationReport verify_dual_pair(const LieAlgebra& lie, long samples, double tol,
                                           uint64_t seed) {
    VerificationReport rep;
    rep.check = "dual_pair";
    rep.tolerance = tol;
    Sampler rng(seed);
    for (long i = 0; i < samples; ++i) {
        SprayPoint p{rng.ball(lie.dim(), 1.0), rng.cube(lie.dim(), 1.0)};
        rep.record(i, dual_pair_residual(lie, p).max());
    }
    rep.finalize();
    return rep;
}

/// Fiberwise two-form on the conormal chart: minus the pullback of the
/// tangent-model form through the chart embedding.
inline PointField omega_V_on_conormal(const ConormalChart& chart, double fd_step = 1e-5) {
    Mat j = chart.embedding_jacobian();
    LieAlgebra lie = chart.t.lie;
    auto ef = [chart](const Vec& e) { return chart.embed_fiber(e); };
    auto eb = [chart](const Vec& e) { return chart.embed_base(e); };
    return twoform_field(chart.dim(), [lie, j, ef, eb](const Vec& e) {
        return Mat(-j.transpose() * omega_g_matrix(lie, ef(e), eb(e)) * j);
    }, fd_step);
}

/// Spray exponential through the chart: chart point to dual point.
inline PointField exp_chart(const ConormalChart& chart, double fd_step = 1e-6) {
    LieAlgebra lie = chart.t.lie;
    return map_field(chart.dim(), lie.dim(), [chart, lie](const Vec& e) {
        return coad_exp(lie, chart.embed_fiber(e), chart.embed_base(e));
    }, fd_step);
}

/// Pushforward defect of the Dirac model bivector under the spray
/// exponential at one chart point; `sigma_scale` != 1 is the negative
/// control that detunes the gauge term.
inline double normal_form_residual(const ConormalChart& chart, const PointField& sigma,
                                   const Vec& e, double sigma_scale = 1.0,
                                   double fd_step = 1e-6) {
    const LieAlgebra& lie = chart.t.lie;
    Mat pi_x = split_at(chart.t, chart.embed_base(e)).pi_x;
    Mat model =
        local_model_from_parts(pi_x, Mat(sigma_scale * sigma.matrix_at(e)), chart.base_dim());
    auto em = [&](const Vec& q) { return coad_exp(lie, chart.embed_fiber(q), chart.embed_base(q)); };
    Mat j = fd_jacobian(em, e, fd_step * (1.0 + e.norm()));
    return max_abs(Mat(j * model * j.transpose() - lie.poisson_matrix(em(e))));
}

/// Sampled certification that the gauged Dirac model is carried onto the
/// linear structure by the spray exponential.
inline VerificationReport verify_normal_form(const AffineTransversal& t, long samples, double tol,
                                             uint64_t seed, double sigma_scale = 1.0,
                                             double fd_step = 1e-6) {
    ConormalChart chart = conormal_chart(t);
    PointField sigma = omega_V_on_conormal(chart);
    VerificationReport rep;
    rep.check = "normal_form";
    rep.tolerance = tol;
    Sampler rng(seed);
    for (long i = 0; i < samples; ++i) {
        Vec e = rng.ball(chart.dim(), chart.sample_radius());
        rep.record(i, normal_form_residual(chart, sigma, e, sigma_scale, fd_step));
    }
    rep.finalize();
    return rep;
}

/// Preimage data of a transversal under the dual of an algebra morphism.
struct MapNormalForm {
    AffineTransversal preimage;        // Y in the codomain dual
    Mat fiber_solve;                   // f applied to the domain conormal basis
    VerificationReport diagram;        // exp intertwines the fiber maps
    VerificationReport pullback_form;  // fiber two-forms correspond
    VerificationReport base_poisson;   // restricted map is Poisson on bases
};

/// Functoriality of the normal form under a morphism f: dom -> cod.  The
/// transversal lives in the domain dual; its preimage under the dual map
/// is built in the codomain dual and the three certification checks of the
/// correspondence run on `samples` chart points.
inline MapNormalForm poisson_map_normal_form(const LieAlgebra& dom, const LieAlgebra& cod,
                                             const Mat& f, const AffineTransversal& x,
                                             long samples, double tol, uint64_t seed) {
    const int ng = dom.dim(), nh = cod.dim(), k = x.k();
    if (morphism_residual(dom, cod, f) > 1e-12) throw NotMorphism("matrix is not a morphism");

    // Base point of Y: solve f^T eta = lambda + L c jointly.
    Mat sys(ng, nh + k);
    sys.leftCols(nh) = f.transpose();
    sys.rightCols(k) = -x.directions;
    Vec sol = lstsq(sys, x.base);
    Vec eta0 = sol.head(nh);
    if (max_abs(Vec(f.transpose() * eta0 - x.embed(sol.tail(k)))) > 1e-9 * (1.0 + x.base.norm()))
        throw EmptyPreimage("dual map misses the affine subspace");

    // Directions: covectors whose dual image stays inside the direction span.
    Mat f_conormal = f * x.conormal;  // image of the domain conormal basis
    Mat dy = kernel_basis(Mat(f_conormal.transpose()));
    AffineTransversal y;
    try {
        y = make_transversal(cod, eta0, dy);
    } catch (const NotTransversal& e) {
        throw PreimageNotTransversal(e.what());
    }
    if (subspace_distance(y.conormal, f_conormal) > 1e-9)
        throw PreimageNotTransversal("conormal correspondence failed");

    ConormalChart cx = conormal_chart(x);
    ConormalChart cy = conormal_chart(y);
    PointField sigma_x = omega_V_on_conormal(cx);
    PointField sigma_y = omega_V_on_conormal(cy);

    // Chart-level fiber correspondence: invert f between conormal fibers and
    // push the base along the dual map.
    auto f_chart = [&, f](const Vec& ey) -> Vec {
        Vec u = cy.embed_fiber(ey);
        Vec c = lstsq(f_conormal, u);
        Vec mu = f.transpose() * cy.embed_base(ey);
        Vec out(cx.dim());
        out << c, x.coords_of(mu);
        return out;
    };

    MapNormalForm out;
    out.preimage = y;
    out.fiber_solve = f_conormal;
    out.diagram.check = "map_diagram";
    out.diagram.tolerance = 1e-10;
    out.pullback_form.check = "map_pullback_form";
    out.pullback_form.tolerance = tol;
    out.base_poisson.check = "map_base_poisson";
    out.base_poisson.tolerance = 1e-9;

    Sampler rng(seed);
    for (long i = 0; i < samples; ++i) {
        Vec ey = rng.ball(cy.dim(), cy.sample_radius());
        Vec ex = f_chart(ey);
        // (a) spray exponentials intertwine.
        Vec lhs = coad_exp(dom, cx.embed_fiber(ex), cx.embed_base(ex));
        Vec rhs = f.transpose() * coad_exp(cod, cy.embed_fiber(ey), cy.embed_base(ey));
        out.diagram.record(i, max_abs(Vec(lhs - rhs)));
        // (b) fiber two-forms correspond under the chart map.
        Mat jf = fd_jacobian(f_chart, ey, fd_step_for(ey, 1e-6));
        out.pullback_form.record(
            i, max_abs(Mat(jf.transpose() * sigma_x.matrix_at(ex) * jf - sigma_y.matrix_at(ey))));
        // (c) the restricted dual map is Poisson between the base structures.
        Vec eta = cy.embed_base(ey);
        Mat pi_ty = split_at(y, eta).pi_x;
        Mat base_map = lstsq(x.directions, Mat(f.transpose() * y.directions));
        Mat pi_tx = split_at(x, Vec(f.transpose() * eta)).pi_x;
        out.base_poisson.record(
            i, max_abs(Mat(base_map * pi_ty * base_map.transpose() - pi_tx)));
    }
    out.diagram.finalize();
    out.pullback_form.finalize();
    out.base_poisson.finalize();
    return out;
}

}

#endif
