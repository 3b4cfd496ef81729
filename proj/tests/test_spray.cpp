#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "plab/catalog.hpp"
#include "plab/rng.hpp"
#include "plab/spray.hpp"

using namespace plab;

namespace {

AffineTransversal so3_line() {
    Vec base(3);
    base << 0.0, 0.0, 1.0;
    Mat dir = Mat::Zero(3, 1);
    dir(2, 0) = 1.0;
    return make_transversal(catalog::so3(), base, dir);
}

AffineTransversal sl2_line() {
    Vec base(3);
    base << 1.0, 0.0, 0.0;
    Mat dir = Mat::Zero(3, 1);
    dir(0, 0) = 1.0;
    return make_transversal(catalog::sl2(), base, dir);
}

}  // namespace

TEST_CASE("spray flow composes additively in time", "[spray]") {
    Sampler rng(40);
    for (const LieAlgebra& lie : {catalog::so3(), catalog::sl2()}) {
        for (int i = 0; i < 10; ++i) {
            SprayPoint p{rng.ball(lie.dim(), 1.0), rng.cube(lie.dim(), 1.0)};
            SprayPoint two = spray_flow(lie, spray_flow(lie, p, 0.4), 0.35);
            SprayPoint one = spray_flow(lie, p, 0.75);
            CHECK(max_abs(Vec(two.xi - one.xi)) < 1e-12);
            CHECK(max_abs(Vec(two.x - p.x)) == 0.0);
            CHECK(max_abs(Vec(spray_exp(lie, p) - spray_flow(lie, p, 1.0).xi)) == 0.0);
        }
    }
}

TEST_CASE("tangent-model form reduces to canonical blocks at the zero section", "[spray]") {
    LieAlgebra so3 = catalog::so3();
    Sampler rng(41);
    Vec xi0 = rng.cube(3, 1.0);
    Mat o = omega_g_matrix(so3, Vec::Zero(3), xi0);
    Mat expect = Mat::Zero(6, 6);
    expect.topLeftCorner(3, 3) = so3.poisson_matrix(xi0);
    expect.topRightCorner(3, 3) = -Mat::Identity(3, 3);
    expect.bottomLeftCorner(3, 3) = Mat::Identity(3, 3);
    CHECK(max_abs(Mat(o - expect)) == 0.0);
}

TEST_CASE("tangent-model form is antisymmetric and closed", "[spray]") {
    LieAlgebra sl2 = catalog::sl2();
    PointField field = omega_g_field(sl2);
    Sampler rng(42);
    for (int i = 0; i < 10; ++i) {
        Vec p(6);
        p << rng.ball(3, 1.0), rng.cube(3, 1.0);
        Mat o = field.matrix_at(p);
        CHECK(max_abs(Mat(o + o.transpose())) < 1e-12);
        CHECK(exterior_derivative(field, p).max_abs() < 1e-6);
    }
}

TEST_CASE("scalar form wrapper pairs stacked tangents", "[spray]") {
    LieAlgebra so3 = catalog::so3();
    Sampler rng(43);
    SprayPoint at{rng.ball(3, 1.0), rng.cube(3, 1.0)};
    Vec u = rng.cube(6, 1.0), v = rng.cube(6, 1.0);
    CHECK(std::abs(omega_g(so3, at, u, v) + omega_g(so3, at, v, u)) < 1e-13);
    CHECK_THROWS_AS(omega_g(so3, at, Vec::Zero(3), v), DimensionMismatch);
}

TEST_CASE("projection and exponential legs form a dual pair", "[spray]") {
    for (const LieAlgebra& lie : {catalog::so3(), catalog::sl2()}) {
        VerificationReport rep = verify_dual_pair(lie, 100, 1e-6, 42);
        INFO(rep.check << " on " << lie.name() << ": " << rep.max_residual);
        CHECK(rep.pass);
        CHECK(rep.samples == 100);
        CHECK(rep.max_residual < 1e-6);
    }
}

TEST_CASE("tangent model degenerates on the first conjugate sphere", "[spray]") {
    LieAlgebra so3 = catalog::so3();
    Vec x(3);
    x << 0.0, 0.0, 2.0 * M_PI;
    SprayPoint p{x, Vec::Ones(3)};
    CHECK_THROWS_AS(dual_pair_residual(so3, p), SingularBase);
    // just inside the sphere the model is regular again
    p.x(2) = 0.9 * 2.0 * M_PI;
    CHECK_NOTHROW(dual_pair_residual(so3, p));
}

TEST_CASE("fiber form anchor at the chart origin", "[spray]") {
    AffineTransversal t = so3_line();
    Mat u(3, 2);
    u << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0;
    t.conormal = u;
    ConormalChart chart = conormal_chart(t);
    Mat sig = omega_V_on_conormal(chart).matrix_at(Vec::Zero(3));
    Mat expect = Mat::Zero(3, 3);
    expect(0, 1) = -1.0;
    expect(1, 0) = 1.0;
    CHECK(max_abs(Mat(sig - expect)) < 1e-14);
}

TEST_CASE("gauged model is carried onto the linear structure", "[spray]") {
    VerificationReport so3_rep = verify_normal_form(so3_line(), 200, 1e-6, 42);
    INFO("so3 max residual " << so3_rep.max_residual);
    CHECK(so3_rep.pass);
    VerificationReport sl2_rep = verify_normal_form(sl2_line(), 200, 1e-6, 42);
    INFO("sl2 max residual " << sl2_rep.max_residual);
    CHECK(sl2_rep.pass);
}

TEST_CASE("detuned gauge term breaks the normal form", "[spray]") {
    VerificationReport rep = verify_normal_form(so3_line(), 20, 1e-6, 42, 1.1);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_residual > 1e-3);
}

TEST_CASE("finite differences cannot certify below their floor", "[spray]") {
    VerificationReport rep = verify_normal_form(so3_line(), 10, 1e-12, 42);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_residual > 1e-12);
}

TEST_CASE("normal form over a point transversal", "[spray]") {
    Vec reg(2);
    reg << 0.0, 1.0;
    AffineTransversal t = make_transversal(catalog::borel2(), reg, Mat::Zero(2, 0));
    VerificationReport rep = verify_normal_form(t, 100, 1e-6, 42);
    CHECK(rep.pass);
}

TEST_CASE("morphism duals respect the normal form", "[spray]") {
    LieAlgebra borel = catalog::borel2(), sl2 = catalog::sl2();
    Mat f(3, 2);
    f << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0;
    Vec reg(2);
    reg << 0.0, 1.0;
    AffineTransversal x = make_transversal(borel, reg, Mat::Zero(2, 0));
    MapNormalForm nf = poisson_map_normal_form(borel, sl2, f, x, 100, 1e-6, 42);
    CHECK(nf.diagram.pass);
    CHECK(nf.pullback_form.pass);
    CHECK(nf.base_poisson.pass);
    // the preimage is the line through (0,1,0) along the third dual axis
    CHECK(nf.preimage.k() == 1);
    Vec eta0(3);
    eta0 << 0.0, 1.0, 0.0;
    CHECK(max_abs(Vec(nf.preimage.base - eta0)) < 1e-12);
    CHECK(std::abs(std::abs(nf.preimage.directions(2, 0)) - 1.0) < 1e-12);
}

TEST_CASE("non-morphisms are rejected before any analysis", "[spray]") {
    LieAlgebra borel = catalog::borel2(), sl2 = catalog::sl2();
    Mat f(3, 2);
    f << 1.0, 0.0, 0.0, 1.0, 0.0, 0.3;
    Vec reg(2);
    reg << 0.0, 1.0;
    AffineTransversal x = make_transversal(borel, reg, Mat::Zero(2, 0));
    CHECK_THROWS_AS(poisson_map_normal_form(borel, sl2, f, x, 10, 1e-6, 42), NotMorphism);
}

TEST_CASE("dual maps can miss the subspace entirely", "[spray]") {
    LieAlgebra dom = catalog::aff1_x_aff1();
    LieAlgebra cod = catalog::abelian(1);
    Mat f(1, 4);
    f << 1.0, 0.0, 0.0, 0.0;
    Vec lambda(4);
    lambda << 0.0, 1.0, 0.0, 1.0;
    AffineTransversal x = make_transversal(dom, lambda, Mat::Zero(4, 0));
    CHECK_THROWS_AS(poisson_map_normal_form(dom, cod, f, x, 10, 1e-6, 42), EmptyPreimage);
}

TEST_CASE("preimages can fail transversality in the codomain", "[spray]") {
    LieAlgebra dom = catalog::heisenberg3();
    LieAlgebra cod = catalog::abelian(1);
    Mat f(1, 3);
    f << 1.0, 0.0, 0.0;
    Vec lambda(3);
    lambda << 0.0, 0.0, 1.0;
    Mat dir = Mat::Zero(3, 1);
    dir(2, 0) = 1.0;
    AffineTransversal x = make_transversal(dom, lambda, dir);
    CHECK_THROWS_AS(poisson_map_normal_form(dom, cod, f, x, 10, 1e-6, 42),
                    PreimageNotTransversal);
}
