#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "plab/catalog.hpp"
#include "plab/groupoid.hpp"

using namespace plab;

namespace {

MatrixRep so3_rep() { return make_matrix_rep(catalog::so3(), catalog::so3_defining_rep()); }

MatrixRep sl2_rep() { return make_matrix_rep(catalog::sl2(), catalog::sl2_defining_rep()); }

AffineTransversal so3_line() {
    Vec base(3);
    base << 0.0, 0.0, 1.0;
    Mat dir = Mat::Zero(3, 1);
    dir(2, 0) = 1.0;
    return make_transversal(catalog::so3(), base, dir);
}

Vec unit_axis(int n, int axis) {
    Vec v = Vec::Zero(n);
    v(axis) = 1.0;
    return v;
}

}  // namespace

TEST_CASE("representation constructor validates its input", "[groupoid]") {
    LieAlgebra so3 = catalog::so3();
    std::vector<Mat> two(2, Mat::Zero(3, 3));
    CHECK_THROWS_AS(make_matrix_rep(so3, two), DimensionMismatch);
    std::vector<Mat> ragged{Mat::Zero(3, 3), Mat::Zero(2, 2), Mat::Zero(3, 3)};
    CHECK_THROWS_AS(make_matrix_rep(so3, ragged), DimensionMismatch);
    std::vector<Mat> zeros(3, Mat::Zero(3, 3));
    CHECK_THROWS_AS(make_matrix_rep(so3, zeros), NotMorphism);
    MatrixRep good = so3_rep();
    std::vector<Mat> bent = good.rho;
    bent[0](0, 1) += 0.25;
    CHECK_THROWS_AS(make_matrix_rep(so3, bent), NotMorphism);
}

TEST_CASE("coordinates invert the generator span", "[groupoid]") {
    MatrixRep rep = sl2_rep();
    Sampler rng(50);
    for (int i = 0; i < 10; ++i) {
        Vec x = rng.cube(3, 2.0);
        double res = 1.0;
        Vec back = rep.coords(rep.of(x), &res);
        CHECK(max_abs(Vec(back - x)) < 1e-12);
        CHECK(res < 1e-12);
    }
}

TEST_CASE("represented adjoint matches the algebra exponential", "[groupoid]") {
    MatrixRep rep = so3_rep();
    Sampler rng(51);
    for (int i = 0; i < 10; ++i) {
        Vec x = rng.ball(3, 1.0);
        Mat ad = rep_adjoint(rep, rep.exp(x));
        CHECK(max_abs(Mat(ad - matrix_exp(rep.lie.ad_matrix(x)))) < 1e-11);
        // rotations have orthogonal adjoints
        CHECK(max_abs(Mat(ad.transpose() * ad - Mat::Identity(3, 3))) < 1e-11);
    }
}

TEST_CASE("conjugation outside the group leaves the generator span", "[groupoid]") {
    MatrixRep rep = so3_rep();
    Mat g = Mat::Identity(3, 3);
    g(0, 0) = 2.0;  // not orthogonal, conjugation breaks antisymmetry
    CHECK_THROWS_AS(rep_adjoint(rep, g), NotInAdjointImage);
}

TEST_CASE("represented coadjoint action agrees with the series", "[groupoid]") {
    for (const MatrixRep& rep : {so3_rep(), sl2_rep()}) {
        VerificationReport rep_out = check_coad_agreement(rep, 50, 1e-10, 7);
        INFO(rep.lie.name() << " worst " << rep_out.max_residual);
        CHECK(rep_out.pass);
    }
}

TEST_CASE("groupoid axioms hold on random words", "[groupoid]") {
    VerificationReport so3_out = check_axioms(so3_rep(), 200, 1e-10, 42);
    INFO("so3 worst " << so3_out.max_residual);
    CHECK(so3_out.pass);
    VerificationReport sl2_out = check_axioms(sl2_rep(), 100, 1e-9, 42);
    INFO("sl2 worst " << sl2_out.max_residual);
    CHECK(sl2_out.pass);
}

TEST_CASE("mismatched endpoints refuse to compose", "[groupoid]") {
    MatrixRep rep = so3_rep();
    Sampler rng(52);
    ActionGroupoidPoint second{random_word(rep, rng), rng.cube(3, 1.0)};
    ActionGroupoidPoint first{random_word(rep, rng), Vec(target(rep, second) + unit_axis(3, 0))};
    CHECK_THROWS_AS(multiply(rep, first, second), NotComposable);
    first.xi = target(rep, second);
    CHECK_NOTHROW(multiply(rep, first, second));
}

TEST_CASE("units are fixed points of both endpoint maps", "[groupoid]") {
    MatrixRep rep = so3_rep();
    Vec xi(3);
    xi << 0.3, -0.8, 0.5;
    ActionGroupoidPoint u = unit(rep, xi);
    CHECK(max_abs(Vec(source(u) - xi)) == 0.0);
    CHECK(max_abs(Vec(target(rep, u) - xi)) < 1e-14);
}

TEST_CASE("groupoid form has canonical blocks and a closed-form inverse", "[groupoid]") {
    LieAlgebra so3 = catalog::so3();
    Sampler rng(53);
    Vec xi = rng.cube(3, 1.0);
    Mat o = omega_G_matrix(so3, xi);
    CHECK(max_abs(Mat(o + o.transpose())) == 0.0);
    Mat expect = Mat::Zero(6, 6);
    expect.topLeftCorner(3, 3) = so3.poisson_matrix(xi);
    expect.topRightCorner(3, 3) = -Mat::Identity(3, 3);
    expect.bottomLeftCorner(3, 3) = Mat::Identity(3, 3);
    CHECK(max_abs(Mat(o - expect)) == 0.0);
    Mat oinv = Mat::Zero(6, 6);
    oinv.topRightCorner(3, 3) = Mat::Identity(3, 3);
    oinv.bottomLeftCorner(3, 3) = -Mat::Identity(3, 3);
    oinv.bottomRightCorner(3, 3) = so3.poisson_matrix(xi);
    CHECK(max_abs(Mat(o * oinv - Mat::Identity(6, 6))) < 1e-14);
    ActionGroupoidPoint at{Mat::Identity(3, 3), xi};
    Vec u = rng.cube(6, 1.0), v = rng.cube(6, 1.0);
    CHECK(std::abs(omega_G(so3, at, u, v) + omega_G(so3, at, v, u)) < 1e-13);
    CHECK_THROWS_AS(omega_G(so3, at, Vec::Zero(3), v), DimensionMismatch);
}

TEST_CASE("target differential matches a finite-difference curve", "[groupoid]") {
    MatrixRep rep = so3_rep();
    Sampler rng(54);
    for (int i = 0; i < 5; ++i) {
        ActionGroupoidPoint at{random_word(rep, rng), rng.cube(3, 1.0)};
        Vec a = rng.ball(3, 1.0), dxi = rng.cube(3, 1.0);
        double h = 1e-6;
        auto curve = [&](double s) {
            ActionGroupoidPoint q{Mat(rep.exp(Vec(s * a)) * at.g), Vec(at.xi + s * dxi)};
            return target(rep, q);
        };
        Vec fd = (curve(h) - curve(-h)) / (2.0 * h);
        CHECK(max_abs(Vec(fd - target_differential(rep, at, a, dxi))) < 1e-7);
    }
}

TEST_CASE("endpoint maps form a dual pair for the groupoid form", "[groupoid]") {
    VerificationReport out = verify_groupoid_dual_pair(so3_rep(), 100, 1e-10, 42);
    INFO("worst " << out.max_residual);
    CHECK(out.pass);
    CHECK(out.samples == 100);
}

TEST_CASE("groupoid form is multiplicative and detuning breaks it", "[groupoid]") {
    MatrixRep rep = so3_rep();
    const LieAlgebra lie = rep.lie;
    auto form = [lie](const Vec& eta) { return omega_G_matrix(lie, eta); };
    VerificationReport good = check_multiplicative(rep, form, 100, 1e-6, 42);
    INFO("worst " << good.max_residual);
    CHECK(good.pass);
    CHECK(good.max_residual < 1e-10);

    Mat beta = Mat::Zero(3, 3);
    beta(0, 1) = 0.3;
    beta(1, 0) = -0.3;
    auto bad = [lie, beta](const Vec& eta) {
        Mat o = omega_G_matrix(lie, eta);
        o.bottomRightCorner(3, 3) += beta;
        return o;
    };
    VerificationReport broken = check_multiplicative(rep, bad, 50, 1e-6, 42);
    CHECK_FALSE(broken.pass);
    CHECK(broken.max_residual > 1e-3);
}

TEST_CASE("restriction keeps arrows between transversal points", "[groupoid]") {
    MatrixRep rep = so3_rep();
    AffineTransversal t = so3_line();
    RestrictedGroupoid gx = restrict_to_transversal(rep, t, rep.exp(Vec(0.6 * unit_axis(3, 2))));
    Vec p(6);
    p << 0.0, 0.0, 0.0, 0.0, 0.0, 1.3;
    CHECK_NOTHROW(gx.require_member(p));
    CHECK(max_abs(gx.constraints(p)) < 1e-14);
    Mat tan = gx.tangent_basis(p);
    CHECK(tan.cols() == 2);
    Mat wx = gx.omega_x_matrix(p);
    CHECK(wx.rows() == 2);
    CHECK(max_abs(Mat(wx + wx.transpose())) < 1e-9);
    CHECK(min_singular_value(wx) > 1e-8);
    Vec off = p;
    off(3) = 0.2;  // move the source off the line
    CHECK_THROWS_AS(gx.require_member(off), NotMember);
    CHECK_THROWS_AS(gx.omega_x_matrix(off), NotMember);
}

TEST_CASE("restricted form anchor on rotation-axis tangents", "[groupoid]") {
    // at an arrow fixing the axis point, the rotation generator against the
    // dual axis direction pairs to -1
    LieAlgebra so3 = catalog::so3();
    Vec xi(3);
    xi << 0.0, 0.0, 1.3;
    Mat og = omega_G_matrix(so3, xi);
    Vec u = Vec::Zero(6), v = Vec::Zero(6);
    u(2) = 1.0;  // algebra slot e3
    v(5) = 1.0;  // dual slot e3*
    CHECK(u.dot(og * v) == -1.0);
}

TEST_CASE("restriction rejects mismatched algebras", "[groupoid]") {
    MatrixRep rep = so3_rep();
    Vec reg(2);
    reg << 0.0, 1.0;
    AffineTransversal t = make_transversal(catalog::borel2(), reg, Mat::Zero(2, 0));
    CHECK_THROWS_AS(restrict_to_transversal(rep, t), DimensionMismatch);
}

TEST_CASE("pullback model certifies the form quadruple", "[groupoid]") {
    MatrixRep rep = so3_rep();
    AffineTransversal t = so3_line();
    RestrictedGroupoid gx = restrict_to_transversal(rep, t);
    PointField sigma = omega_V_on_conormal(conormal_chart(t));
    PullbackModel m = build_pullback_model(gx, sigma);
    CHECK(m.dim() == 6);
    CHECK(m.zdir.cols() == 1);
    CHECK(std::abs(std::abs(m.zdir(2, 0)) - 1.0) < 1e-12);

    Vec u(6);
    u << 0.05, -0.03, 0.12, 0.04, -0.06, 0.02;
    // source chart is the identity on the last slot of the flattened point
    CHECK(max_abs(Vec(m.s_chart(u) - u.head(3))) == 0.0);
    Vec tu = m.t_chart(u);
    CHECK(max_abs(Vec(tu.head(2) - u.tail(2))) == 0.0);

    CHECK(pullback_nondegenerate(m, u).pass);
    VerificationReport closed = pullback_closed(m, u, 1e-6);
    INFO("closed residual " << closed.max_residual);
    CHECK(closed.pass);
    VerificationReport fdir = pullback_forward_dirac(m, u, 1e-6);
    INFO("forward image residual " << fdir.max_residual);
    CHECK(fdir.pass);

    Vec q(9);
    q << 0.05, -0.03, 0.12, 0.04, 0.07, -0.02, 0.03, 0.06, -0.04;
    VerificationReport mult = pullback_multiplicative(m, q, 20, 1e-6, 42);
    INFO("multiplicative residual " << mult.max_residual);
    CHECK(mult.pass);
}

TEST_CASE("pullback pair chart solves the composition constraints", "[groupoid]") {
    MatrixRep rep = so3_rep();
    AffineTransversal t = so3_line();
    PullbackModel m = build_pullback_model(restrict_to_transversal(rep, t),
                                           omega_V_on_conormal(conormal_chart(t)));
    Vec q(9);
    q << 0.05, -0.03, 0.12, 0.04, 0.07, -0.02, 0.03, 0.06, -0.04;
    PullbackModel::PairImages im = m.pair_images(q);
    // factor endpoints chain: source of the product is the source of the
    // second factor, its target the target of the first
    CHECK(max_abs(Vec(im.m.tail(3) - im.pr2.tail(3))) == 0.0);
    CHECK(max_abs(Vec(im.m.head(3) - im.pr1.head(3))) == 0.0);
    CHECK(max_abs(Vec(im.pr1.tail(3) - im.pr2.head(3))) == 0.0);
    // the product group coordinate reproduces the matrix product
    Vec zm = im.m.segment(3, 3), z1 = im.pr2.segment(3, 3), z2 = im.pr1.segment(3, 3);
    CHECK(max_abs(Mat(rep.exp(zm) - Mat(rep.exp(z1) * rep.exp(z2)))) < 1e-11);
}

TEST_CASE("pullback model rejects malformed configuration", "[groupoid]") {
    MatrixRep rep = so3_rep();
    AffineTransversal t = so3_line();
    PointField sigma = omega_V_on_conormal(conormal_chart(t));
    RestrictedGroupoid off_identity =
        restrict_to_transversal(rep, t, rep.exp(Vec(0.6 * unit_axis(3, 2))));
    CHECK_THROWS_AS(build_pullback_model(off_identity, sigma), InputError);
    PointField tiny = twoform_field(2, [](const Vec&) { return Mat::Zero(2, 2); });
    CHECK_THROWS_AS(build_pullback_model(restrict_to_transversal(rep, t), tiny),
                    BlockDimensionMismatch);
}

TEST_CASE("point-base model splits into a difference of fiber forms", "[groupoid]") {
    LieAlgebra borel = catalog::borel2();
    Mat h(2, 2), e(2, 2);
    h << 1.0, 0.0, 0.0, -1.0;
    e << 0.0, 1.0, 0.0, 0.0;
    MatrixRep rep = make_matrix_rep(borel, {h, e});
    Vec reg(2);
    reg << 0.0, 1.0;
    AffineTransversal t = make_transversal(borel, reg, Mat::Zero(2, 0));
    ConormalChart chart = conormal_chart(t);
    PointField sigma = omega_V_on_conormal(chart);
    PullbackModel m = build_pullback_model(restrict_to_transversal(rep, t), sigma);
    CHECK(m.dim() == 4);
    Vec u(4);
    u << 0.08, -0.05, 0.03, 0.11;  // (e fiber, w fiber), no base coordinates
    Mat w = m.omega_matrix(u);
    Mat expect = Mat::Zero(4, 4);
    expect.topLeftCorner(2, 2) = sigma.matrix_at(Vec(u.head(2)));
    expect.bottomRightCorner(2, 2) = -sigma.matrix_at(Vec(u.tail(2)));
    CHECK(max_abs(Mat(w - expect)) < 1e-8);
}

TEST_CASE("product-shaped model certifies for a line transversal", "[groupoid]") {
    AffineTransversal t = so3_line();
    ConormalChart chart = conormal_chart(t);
    PointField sigma = omega_V_on_conormal(chart);
    ProductModel m = make_product_model(t, sigma);
    CHECK(m.dim() == 6);

    Vec u(6);
    u << 0.05, -0.03, 0.3, 0.08, -0.04, 0.06;
    Mat w = m.omega_matrix(u);
    CHECK(max_abs(Mat(w + w.transpose())) < 1e-13);
    CHECK(min_singular_value(w) > 1e-8);

    PointField wf = twoform_field(6, [&m](const Vec& q) { return m.omega_matrix(q); }, 1e-3);
    CHECK(exterior_derivative(wf, u).max_abs() < 1e-5);

    // endpoints push the graph of the form onto the product structure
    Mat js = Mat::Zero(3, 6), jt = Mat::Zero(3, 6);
    js.topRightCorner(2, 2) = Mat::Identity(2, 2);
    js(2, 3) = 1.0;
    jt.topLeftCorner(2, 2) = Mat::Identity(2, 2);
    jt(2, 3) = 1.0;
    Mat jst(6, 6);
    jst.topRows(3) = jt;
    jst.bottomRows(3) = js;
    DiracSpace image = forward_image(jst, graph_of_twoform(w));
    Mat prod = Mat::Zero(6, 6);
    prod.topLeftCorner(3, 3) = -local_model(chart, sigma, m.t_map(u));
    prod.bottomRightCorner(3, 3) = local_model(chart, sigma, m.s_map(u));
    CHECK(dirac_distance(image, graph_of_bivector(prod)) < 1e-6);

    // multiplicativity through the linear pair chart
    Sampler rng(55);
    Vec q = 0.1 * rng.cube(9, 1.0);
    q(2) += 0.3;
    ProductModel::PairImages base = m.pair_images(q);
    auto tangent = [&m, &q](const Vec& d) {
        double h = 1e-6;
        ProductModel::PairImages plus = m.pair_images(Vec(q + h * d));
        ProductModel::PairImages minus = m.pair_images(Vec(q - h * d));
        ProductModel::PairImages out;
        out.pr1 = (plus.pr1 - minus.pr1) / (2.0 * h);
        out.pr2 = (plus.pr2 - minus.pr2) / (2.0 * h);
        out.m = (plus.m - minus.m) / (2.0 * h);
        return out;
    };
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        auto t1 = tangent(rng.cube(9, 1.0));
        auto t2 = tangent(rng.cube(9, 1.0));
        double lhs = t1.m.dot(m.omega_matrix(base.m) * t2.m);
        double rhs = t1.pr1.dot(m.omega_matrix(base.pr1) * t2.pr1) +
                     t1.pr2.dot(m.omega_matrix(base.pr2) * t2.pr2);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    INFO("multiplicative worst " << worst);
    CHECK(worst < 1e-6);
}

TEST_CASE("product-shaped model needs a one-dimensional base", "[groupoid]") {
    Vec reg(2);
    reg << 0.0, 1.0;
    AffineTransversal t = make_transversal(catalog::borel2(), reg, Mat::Zero(2, 0));
    PointField sigma = omega_V_on_conormal(conormal_chart(t));
    CHECK_THROWS_AS(make_product_model(t, sigma), BlockDimensionMismatch);
}

TEST_CASE("random words are deterministic per seed", "[groupoid]") {
    MatrixRep rep = so3_rep();
    Sampler a(9), b(9);
    for (int i = 0; i < 5; ++i)
        CHECK(max_abs(Mat(random_word(rep, a) - random_word(rep, b))) == 0.0);
}
