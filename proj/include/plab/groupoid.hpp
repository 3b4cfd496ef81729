#ifndef PLAB_GROUPOID_HPP
#define PLAB_GROUPOID_HPP

#include "plab/report.hpp"
#include "plab/rng.hpp"
#include "plab/spray.hpp"

namespace plab {

/// Faithful matrix representation of a Lie algebra; rho[i] represents e_i.
struct MatrixRep {
    LieAlgebra lie;
    int N = 0;
    std::vector<Mat> rho;
    Mat flat;  // N^2 x n, flattened generators, used for coordinate solves

    Mat of(const Vec& x) const {
        Mat m = Mat::Zero(N, N);
        for (int i = 0; i < lie.dim(); ++i) m += x(i) * rho[i];
        return m;
    }

    Mat exp(const Vec& x) const { return matrix_exp(of(x)); }

    /// Algebra coordinates of a matrix in the generator span.
    Vec coords(const Mat& a, double* residual = nullptr) const {
        Vec v = Eigen::Map<const Vec>(a.data(), N * N);
        Vec c = lstsq(flat, v);
        if (residual) *residual = max_abs(Vec(flat * c - v));
        return c;
    }
};

inline MatrixRep make_matrix_rep(LieAlgebra lie, std::vector<Mat> rho) {
    const int n = lie.dim();
    if (static_cast<int>(rho.size()) != n)
        throw DimensionMismatch("representation needs one matrix per basis vector");
    MatrixRep rep;
    rep.N = static_cast<int>(rho[0].rows());
    for (const auto& r : rho)
        if (r.rows() != rep.N || r.cols() != rep.N)
            throw DimensionMismatch("representation matrices must share one square shape");
    rep.flat.resize(rep.N * rep.N, n);
    for (int i = 0; i < n; ++i)
        rep.flat.col(i) = Eigen::Map<const Vec>(rho[i].data(), rep.N * rep.N);
    if (svd_rank(rep.flat) != n) throw NotMorphism("representation is not faithful");
    Mat id = Mat::Identity(n, n);
    rep.lie = std::move(lie);
    rep.rho = std::move(rho);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Mat lhs = rep.of(rep.lie.bracket(id.col(i), id.col(j)));
            Mat rhs = rep.rho[i] * rep.rho[j] - rep.rho[j] * rep.rho[i];
            if (max_abs(Mat(lhs - rhs)) > 1e-12)
                throw NotMorphism("representation does not respect the bracket");
        }
    return rep;
}

/// Adjoint matrix of a group element, solved columnwise from the conjugation
/// action on the generator span.
inline Mat rep_adjoint(const MatrixRep& rep, const Mat& g) {
    const int n = rep.lie.dim();
    Mat ginv = g.inverse();
    Mat ad(n, n);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        double r = 0.0;
        ad.col(j) = rep.coords(Mat(g * rep.rho[j] * ginv), &r);
        worst = std::max(worst, r);
    }
    if (worst > 1e-8 * (1.0 + max_abs(g)))
        throw NotInAdjointImage("conjugation leaves the generator span");
    return ad;
}

/// Element of the action groupoid: a group matrix over a dual point.
struct ActionGroupoidPoint {
    Mat g;
    Vec xi;
};

/// Dual point moved by the group element: xi composed with the adjoint.
/// For g = exp(rho(x)) this agrees with coad_exp(x, xi).
inline Vec coadjoint_action(const MatrixRep& rep, const Mat& g, const Vec& xi) {
    return rep_adjoint(rep, g).transpose() * xi;
}

inline Vec source(const ActionGroupoidPoint& p) { return p.xi; }

inline Vec target(const MatrixRep& rep, const ActionGroupoidPoint& p) {
    return coadjoint_action(rep, p.g, p.xi);
}

inline ActionGroupoidPoint unit(const MatrixRep& rep, const Vec& xi) {
    return {Mat::Identity(rep.N, rep.N), xi};
}

/// Composition: the first arrow's source must match the second's target;
/// the product acts by the second element first.
inline ActionGroupoidPoint multiply(const MatrixRep& rep, const ActionGroupoidPoint& first,
                                    const ActionGroupoidPoint& second) {
    Vec t2 = target(rep, second);
    if (max_abs(Vec(first.xi - t2)) > 1e-9 * (1.0 + t2.norm()))
        throw NotComposable("source of first arrow does not match target of second");
    return {second.g * first.g, second.xi};
}

inline ActionGroupoidPoint inverse(const MatrixRep& rep, const ActionGroupoidPoint& p) {
    return {p.g.inverse(), target(rep, p)};
}

/// Random group element as a word of exponentials.
inline Mat random_word(const MatrixRep& rep, Sampler& rng, int max_factors = 3,
                       double radius = 0.7) {
    Mat g = Mat::Identity(rep.N, rep.N);
    int factors = 1 + rng.index(max_factors);
    for (int i = 0; i < factors; ++i) g = Mat(g * rep.exp(rng.ball(rep.lie.dim(), radius)));
    return g;
}

/// Groupoid axioms on random words: target compatibility of products,
/// associativity, unit and inverse laws.
inline VerificationReport check_axioms(const MatrixRep& rep, long words, double tol,
                                       uint64_t seed) {
    VerificationReport out;
    out.check = "groupoid_axioms";
    out.tolerance = tol;
    Sampler rng(seed);
    const int n = rep.lie.dim();
    for (long i = 0; i < words; ++i) {
        Vec eta = rng.cube(n, 1.0);
        ActionGroupoidPoint p2{random_word(rep, rng), eta};
        ActionGroupoidPoint p1{random_word(rep, rng), target(rep, p2)};
        ActionGroupoidPoint p0{random_word(rep, rng), target(rep, p1)};
        ActionGroupoidPoint m12 = multiply(rep, p1, p2);
        double r = max_abs(Vec(target(rep, m12) - target(rep, p1)));
        r = std::max(r, max_abs(Vec(source(m12) - source(p2))));
        Mat assoc = multiply(rep, p0, m12).g - multiply(rep, multiply(rep, p0, p1), p2).g;
        r = std::max(r, max_abs(assoc));
        r = std::max(r, max_abs(Vec(target(rep, unit(rep, eta)) - eta)));
        ActionGroupoidPoint inv = inverse(rep, p2);
        ActionGroupoidPoint idp = multiply(rep, inv, p2);
        r = std::max(r, max_abs(Mat(idp.g - Mat::Identity(rep.N, rep.N))));
        r = std::max(r, max_abs(Vec(coadjoint_action(rep, p2.g.inverse(), target(rep, p2)) - eta)));
        out.record(i, r);
    }
    out.finalize();
    return out;
}

/// Symplectic form of the action groupoid at source point xi0, as a matrix
/// on tangents (a, xi-dot) whose group component is the right-trivialized
/// velocity a = (d/dt g) g^{-1} in algebra coordinates:
///   [[Pi(xi0), -I], [I, 0]].
inline Mat omega_G_matrix(const LieAlgebra& lie, const Vec& xi0) {
    const int n = lie.dim();
    Mat o = Mat::Zero(2 * n, 2 * n);
    o.topLeftCorner(n, n) = lie.poisson_matrix(xi0);
    o.topRightCorner(n, n) = -Mat::Identity(n, n);
    o.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    return o;
}

inline double omega_G(const LieAlgebra& lie, const ActionGroupoidPoint& at, const Vec& u,
                      const Vec& v) {
    if (u.size() != 2 * lie.dim() || v.size() != 2 * lie.dim())
        throw DimensionMismatch("omega_G tangents stack algebra and dual parts");
    return u.dot(omega_G_matrix(lie, at.xi) * v);
}

/// Differential of the target map on a right-trivialized tangent (a, dxi)
/// at (g, xi): Ad_g^T (ad_a^T xi + dxi), with ad_a^T xi = -Pi(xi) a.
inline Vec target_differential(const MatrixRep& rep, const ActionGroupoidPoint& at, const Vec& a,
                               const Vec& dxi) {
    Vec inner = dxi - rep.lie.poisson_matrix(at.xi) * a;
    return rep_adjoint(rep, at.g).transpose() * inner;
}

/// Dual-pair residuals for (source, target) out of the groupoid: source
/// pushes the inverse form to +Pi, target to -Pi, and the legs commute.
inline DualPairResidual groupoid_dual_pair_residual(const MatrixRep& rep,
                                                    const ActionGroupoidPoint& at) {
    const LieAlgebra& lie = rep.lie;
    const int n = lie.dim();
    // Closed-form inverse of [[P, -I], [I, 0]] is [[0, I], [-I, P]].
    Mat p = lie.poisson_matrix(at.xi);
    Mat oinv = Mat::Zero(2 * n, 2 * n);
    oinv.topRightCorner(n, n) = Mat::Identity(n, n);
    oinv.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    oinv.bottomRightCorner(n, n) = p;
    Mat js = Mat::Zero(n, 2 * n);
    js.rightCols(n) = Mat::Identity(n, n);
    Mat adt = rep_adjoint(rep, at.g).transpose();
    Mat jt(n, 2 * n);
    jt.leftCols(n) = -adt * p;
    jt.rightCols(n) = adt;
    DualPairResidual r;
    r.projection = max_abs(Mat(js * oinv * js.transpose() - p));
    r.exponential =
        max_abs(Mat(jt * oinv * jt.transpose() + lie.poisson_matrix(target(rep, at))));
    r.commutation = max_abs(Mat(js * oinv * jt.transpose()));
    return r;
}

inline VerificationReport verify_groupoid_dual_pair(const MatrixRep& rep, long samples, double tol,
                                                    uint64_t seed) {
    VerificationReport out;
    out.check = "groupoid_dual_pair";
    out.tolerance = tol;
    Sampler rng(seed);
    for (long i = 0; i < samples; ++i) {
        ActionGroupoidPoint at{random_word(rep, rng), rng.cube(rep.lie.dim(), 1.0)};
        out.record(i, groupoid_dual_pair_residual(rep, at).max());
    }
    out.finalize();
    return out;
}

/// Multiplicativity defect of a form given as a matrix field over the source
/// point, acting on right-trivialized tangents.  Composable pairs are
/// parametrized by (g, h, eta); tangents by (a, b, eta-dot).
inline VerificationReport check_multiplicative(const MatrixRep& rep,
                                               const std::function<Mat(const Vec&)>& form,
                                               long samples, double tol, uint64_t seed) {
    VerificationReport out;
    out.check = "multiplicativity";
    out.tolerance = tol;
    Sampler rng(seed);
    const int n = rep.lie.dim();
    for (long i = 0; i < samples; ++i) {
        Mat g = random_word(rep, rng), h = random_word(rep, rng);
        Vec eta = rng.cube(n, 1.0);
        ActionGroupoidPoint second{h, eta};
        Vec t2 = target(rep, second);
        Mat ad_h = rep_adjoint(rep, h);
        auto tangents = [&](const Vec& w) {
            Vec a = w.segment(0, n), b = w.segment(n, n), etad = w.segment(2 * n, n);
            Vec u1(2 * n), u2(2 * n), um(2 * n);
            u2 << b, etad;
            u1 << a, target_differential(rep, second, b, etad);
            um << Vec(b + ad_h * a), etad;
            return std::array<Vec, 3>{u1, u2, um};
        };
        auto t_u = tangents(rng.cube(3 * n, 1.0));
        auto t_v = tangents(rng.cube(3 * n, 1.0));
        double lhs = t_u[2].dot(form(eta) * t_v[2]);
        double rhs = t_u[0].dot(form(t2) * t_v[0]) + t_u[1].dot(form(eta) * t_v[1]);
        out.record(i, std::abs(lhs - rhs));
    }
    out.finalize();
    return out;
}

/// Agreement of the represented coadjoint action with the series exponential
/// on exponential elements.
inline VerificationReport check_coad_agreement(const MatrixRep& rep, long samples, double tol,
                                               uint64_t seed) {
    VerificationReport out;
    out.check = "coadjoint_agreement";
    out.tolerance = tol;
    Sampler rng(seed);
    for (long i = 0; i < samples; ++i) {
        Vec x = rng.ball(rep.lie.dim(), 1.0);
        Vec xi = rng.cube(rep.lie.dim(), 1.0);
        out.record(i, max_abs(Vec(coadjoint_action(rep, rep.exp(x), xi) -
                                  coad_exp(rep.lie, x, xi))));
    }
    out.finalize();
    return out;
}

/// Restriction of the action groupoid to arrows whose source and target both
/// lie on a transversal; realized in an ambient chart (z, xi) around a
/// reference group element.
struct RestrictedGroupoid {
    MatrixRep rep;
    AffineTransversal t;
    Mat g0;  // reference element; the chart covers g0 exp(rho(z))

    int n() const { return rep.lie.dim(); }
    int k() const { return t.k(); }

    Mat chart_group(const Vec& z) const { return g0 * rep.exp(z); }

    ActionGroupoidPoint chart_point(const Vec& p) const {
        return {chart_group(p.head(n())), p.tail(n())};
    }

    /// Membership constraints: source and target both on the transversal.
    Vec constraints(const Vec& p) const {
        Vec xi = p.tail(n());
        Vec tv = coadjoint_action(rep, chart_group(p.head(n())), xi);
        Vec c(2 * (n() - k()));
        c << Vec(t.conormal.transpose() * (xi - t.base)),
            Vec(t.conormal.transpose() * (tv - t.base));
        return c;
    }

    void require_member(const Vec& p) const {
        if (max_abs(constraints(p)) > t.snap_tol())
            throw NotMember("point violates the restriction constraints");
    }

    /// Tangent space of the restriction at a member, as kernel of the
    /// linearized constraints; always dimension 2k.
    Mat tangent_basis(const Vec& p) const {
        Mat jac = fd_jacobian([this](const Vec& q) { return constraints(q); }, p,
                              fd_step_for(p, 1e-6));
        Mat ker = kernel_basis(jac);
        if (ker.cols() != 2 * k())
            throw DimensionDrop("restricted tangent space has dimension " +
                                std::to_string(ker.cols()) + " instead of " +
                                std::to_string(2 * k()));
        return ker;
    }

    /// Convert ambient chart velocities (z-dot, xi-dot) to right-trivialized
    /// tangents: the group part becomes Ad_{g0} Xi(z) z-dot.
    Mat rt_conversion(const Vec& z) const {
        const int nn = n();
        Mat conv = Mat::Identity(2 * nn, 2 * nn);
        conv.topLeftCorner(nn, nn) = rep_adjoint(rep, g0) * xi_operator(rep.lie, z);
        return conv;
    }

    /// Restricted form on the computed tangent basis.
    Mat omega_x_matrix(const Vec& p) const {
        require_member(p);
        Mat tan = rt_conversion(p.head(n())) * tangent_basis(p);
        return tan.transpose() * omega_G_matrix(rep.lie, p.tail(n())) * tan;
    }
};

inline RestrictedGroupoid restrict_to_transversal(const MatrixRep& rep, const AffineTransversal& t,
                                                  const Mat& g0) {
    if (t.lie.dim() != rep.lie.dim()) throw DimensionMismatch("transversal algebra mismatch");
    return RestrictedGroupoid{rep, t, g0};
}

inline RestrictedGroupoid restrict_to_transversal(const MatrixRep& rep,
                                                  const AffineTransversal& t) {
    return restrict_to_transversal(rep, t, Mat::Identity(rep.N, rep.N));
}

/// Pullback-groupoid model over the conormal chart: points (e', gamma, e)
/// with the bundle projection of e' matching the target of gamma and that of
/// e its source.  Chart coordinates stack (e, v, w) where v parametrizes the
/// gamma fiber and w the target fiber coordinates.
struct PullbackModel {
    MatrixRep rep;
    AffineTransversal t;
    ConormalChart chart;
    PointField sigma;
    Mat zdir;  // n x k group directions spanning the gamma fiber at the unit

    int n() const { return rep.lie.dim(); }
    int k() const { return t.k(); }
    int dim() const { return 2 * n(); }

    /// Arrow over source base point s with fiber parameter v: the dual point
    /// is pinned to the transversal and the group coordinate is retracted
    /// onto the target constraint by Gauss-Newton.
    std::pair<Vec, Vec> gamma(const Vec& s, const Vec& v) const {
        Vec xi = t.embed(s);
        Vec z = zdir * v;
        auto residual = [&](const Vec& zz) -> Vec {
            return t.conormal.transpose() *
                   (coadjoint_action(rep, rep.exp(zz), xi) - t.base);
        };
        for (int it = 0; it < 80; ++it) {
            Vec r = residual(z);
            if (max_abs(r) < 1e-13 * (1.0 + t.base.norm())) return {z, xi};
            Mat j = fd_jacobian(residual, z, 1e-7 * (1.0 + z.norm()));
            z -= pinv(j) * r;
        }
        if (max_abs(residual(z)) > 1e-12 * (1.0 + t.base.norm()))
            throw NonConvergence("gamma fiber retraction");
        return {z, xi};
    }

    /// Full model point flattened as (e' | z | xi | e), dimension 4n.
    Vec flat(const Vec& u) const {
        const int nn = n(), kk = k();
        Vec e = u.head(nn);
        Vec v = u.segment(nn, kk);
        Vec w = u.tail(nn - kk);
        auto [z, xi] = gamma(chart.base_part(e), v);
        Vec tv = coadjoint_action(rep, rep.exp(z), xi);
        Vec sprime = t.coords_of(tv);
        Vec out(4 * nn);
        out << w, sprime, z, xi, e;
        return out;
    }

    Vec t_chart(const Vec& u) const { return flat(u).head(n()); }
    Vec s_chart(const Vec& u) const { return flat(u).tail(n()); }

    /// Form value on ambient flats: tangents split into target-fiber,
    /// gamma, and source-fiber slots; the gamma group slot is converted to
    /// its right-trivialized velocity before pairing with the groupoid form.
    double omega_on_flat(const Vec& p, const Vec& t1, const Vec& t2) const {
        const int nn = n();
        Vec ep = p.head(nn), e = p.tail(nn);
        Vec z = p.segment(nn, nn), xi = p.segment(2 * nn, nn);
        Mat xiop = xi_operator(rep.lie, z);
        auto split = [&](const Vec& tt) {
            Vec a = xiop * tt.segment(nn, nn);
            Vec b(2 * nn);
            b << a, tt.segment(2 * nn, nn);
            return std::array<Vec, 3>{Vec(tt.head(nn)), b, Vec(tt.tail(nn))};
        };
        auto s1 = split(t1), s2 = split(t2);
        Mat og = omega_G_matrix(rep.lie, xi);
        return -s1[0].dot(sigma.matrix_at(ep) * s2[0]) + s1[1].dot(og * s2[1]) +
               s1[2].dot(sigma.matrix_at(e) * s2[2]);
    }

    /// Matrix of the model form on chart coordinates at u.
    Mat omega_matrix(const Vec& u, double fd_step = 1e-6) const {
        const int d = dim();
        Vec p = flat(u);
        double h = fd_step * (1.0 + u.norm());
        std::vector<Vec> tan(d);
        for (int i = 0; i < d; ++i) {
            Vec up = u, um = u;
            up(i) += h;
            um(i) -= h;
            tan[i] = (flat(up) - flat(um)) / (2.0 * h);
        }
        Mat w = Mat::Zero(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                w(i, j) = omega_on_flat(p, tan[i], tan[j]);
                w(j, i) = -w(i, j);
            }
        return w;
    }

    /// Group-coordinate logarithm by Gauss-Newton against the exponential.
    Vec group_log(const Mat& g, Vec guess) const {
        auto residual = [&](const Vec& z) -> Vec {
            Mat d = rep.exp(z) - g;
            return Eigen::Map<const Vec>(d.data(), rep.N * rep.N);
        };
        for (int it = 0; it < 80; ++it) {
            Vec r = residual(guess);
            if (max_abs(r) < 1e-13 * (1.0 + max_abs(g))) return guess;
            Mat j = fd_jacobian(residual, guess, 1e-7 * (1.0 + guess.norm()));
            guess -= pinv(j) * r;
        }
        if (max_abs(residual(guess)) > 1e-12 * (1.0 + max_abs(g)))
            throw NonConvergence("group logarithm");
        return guess;
    }

    /// Composable-pair chart (e, v, w1, v', w2) of dimension 3n; returns the
    /// flattened model points of the two factors and their product.
    struct PairImages {
        Vec pr1, pr2, m;
    };

    PairImages pair_images(const Vec& q) const {
        const int nn = n(), kk = k();
        Vec e = q.head(nn);
        Vec v = q.segment(nn, kk);
        Vec w1 = q.segment(nn + kk, nn - kk);
        Vec vp = q.segment(2 * nn, kk);
        Vec w2 = q.tail(nn - kk);
        auto [z, xi] = gamma(chart.base_part(e), v);
        Mat g = rep.exp(z);
        Vec s1 = t.coords_of(coadjoint_action(rep, g, xi));
        Vec ep(nn);
        ep << w1, s1;
        auto [z2, xi2] = gamma(s1, vp);
        Mat g2 = rep.exp(z2);
        Vec s2 = t.coords_of(coadjoint_action(rep, g2, xi2));
        Vec epp(nn);
        epp << w2, s2;
        Mat gm = g * g2;
        Vec zm = group_log(gm, Vec(z + z2));
        PairImages out;
        out.pr2.resize(4 * nn);
        out.pr2 << ep, z, xi, e;
        out.pr1.resize(4 * nn);
        out.pr1 << epp, z2, xi2, ep;
        out.m.resize(4 * nn);
        out.m << epp, zm, xi, e;
        return out;
    }
};

/// Assemble the model over the restriction handle; the chart reference must
/// be the identity so that group coordinates are plain exponentials.
inline PullbackModel build_pullback_model(const RestrictedGroupoid& gx, const PointField& sigma) {
    if (sigma.dim != gx.rep.lie.dim())
        throw BlockDimensionMismatch("fiber form dimension must match the chart");
    if (max_abs(Mat(gx.g0 - Mat::Identity(gx.rep.N, gx.rep.N))) > 1e-14)
        throw InputError("pullback model requires the identity reference chart");
    PullbackModel m{gx.rep, gx.t, conormal_chart(gx.t), sigma, Mat()};
    Mat c = gx.t.conormal.transpose() * gx.t.lie.poisson_matrix(gx.t.base);
    m.zdir = kernel_basis(c);
    if (m.zdir.cols() != gx.t.k())
        throw DimensionDrop("gamma fiber direction count mismatch");
    return m;
}

/// Certification quadruple for the model form at a chart point.
inline VerificationReport pullback_nondegenerate(const PullbackModel& m, const Vec& u,
                                                 double floor_sv = 1e-8) {
    VerificationReport out;
    out.check = "omega_E_nondegenerate";
    out.tolerance = 0.0;
    double sv = min_singular_value(m.omega_matrix(u));
    out.record(0, sv > floor_sv ? 0.0 : 1.0, "min singular value " + std::to_string(sv));
    out.finalize();
    return out;
}

inline VerificationReport pullback_closed(const PullbackModel& m, const Vec& u, double tol,
                                          double fd_step = 1e-3) {
    VerificationReport out;
    out.check = "omega_E_closed";
    out.tolerance = tol;
    PointField f = twoform_field(m.dim(), [&m](const Vec& q) { return m.omega_matrix(q); },
                                 fd_step);
    out.record(0, exterior_derivative(f, u).max_abs());
    out.finalize();
    return out;
}

inline VerificationReport pullback_forward_dirac(const PullbackModel& m, const Vec& u,
                                                 double tol) {
    VerificationReport out;
    out.check = "omega_E_forward_dirac";
    out.tolerance = tol;
    const int nn = m.n();
    auto ts = [&m, nn](const Vec& q) {
        Vec p = m.flat(q);
        Vec r(2 * nn);
        r << p.head(nn), p.tail(nn);
        return r;
    };
    Mat j = fd_jacobian(ts, u, 1e-6 * (1.0 + u.norm()));
    Mat w = m.omega_matrix(u);
    DiracSpace image = forward_image(j, graph_of_twoform(w));
    Vec p = m.flat(u);
    Mat pi_t = local_model(m.chart, m.sigma, Vec(p.head(nn)));
    Mat pi_s = local_model(m.chart, m.sigma, Vec(p.tail(nn)));
    Mat prod = Mat::Zero(2 * nn, 2 * nn);
    prod.topLeftCorner(nn, nn) = -pi_t;
    prod.bottomRightCorner(nn, nn) = pi_s;
    out.record(0, dirac_distance(image, graph_of_bivector(prod)));
    out.finalize();
    return out;
}

inline VerificationReport pullback_multiplicative(const PullbackModel& m, const Vec& q,
                                                  long samples, double tol, uint64_t seed,
                                                  double fd_step = 1e-5) {
    VerificationReport out;
    out.check = "omega_E_multiplicative";
    out.tolerance = tol;
    Sampler rng(seed);
    const int pd = 3 * m.n();
    double h = fd_step * (1.0 + q.norm());
    auto images = [&m](const Vec& qq) { return m.pair_images(qq); };
    PullbackModel::PairImages base = images(q);
    for (long i = 0; i < samples; ++i) {
        Vec d1 = rng.cube(pd, 1.0), d2 = rng.cube(pd, 1.0);
        auto tangent = [&](const Vec& d) {
            PullbackModel::PairImages plus = images(Vec(q + h * d));
            PullbackModel::PairImages minus = images(Vec(q - h * d));
            PullbackModel::PairImages t;
            t.pr1 = (plus.pr1 - minus.pr1) / (2.0 * h);
            t.pr2 = (plus.pr2 - minus.pr2) / (2.0 * h);
            t.m = (plus.m - minus.m) / (2.0 * h);
            return t;
        };
        auto t1 = tangent(d1), t2 = tangent(d2);
        double lhs = m.omega_on_flat(base.m, t1.m, t2.m);
        double rhs = m.omega_on_flat(base.pr1, t1.pr1, t2.pr1) +
                     m.omega_on_flat(base.pr2, t1.pr2, t2.pr2);
        out.record(i, std::abs(lhs - rhs));
    }
    out.finalize();
    return out;
}

/// Product-shaped model for one-dimensional transversal directions: chart
/// (y, theta, w, x) with source (x, w), target (y, w), group part (theta, w).
/// The middle factor carries the pairing w-dot(theta-dot') - w-dot'(theta-dot).
struct ProductModel {
    ConormalChart chart;  // conormal chart of a k = 1 transversal
    PointField sigma;

    int fiber() const { return chart.fiber_dim(); }
    int dim() const { return 2 * fiber() + 2; }

    Vec s_map(const Vec& u) const {
        Vec r(fiber() + 1);
        r << u.tail(fiber()), u(fiber() + 1);
        return r;
    }

    Vec t_map(const Vec& u) const {
        Vec r(fiber() + 1);
        r << u.head(fiber()), u(fiber() + 1);
        return r;
    }

    Mat omega_matrix(const Vec& u) const {
        const int nf = fiber(), d = dim();
        Mat js = Mat::Zero(nf + 1, d), jt = Mat::Zero(nf + 1, d);
        js.topRightCorner(nf, nf) = Mat::Identity(nf, nf);
        js(nf, nf + 1) = 1.0;
        jt.topLeftCorner(nf, nf) = Mat::Identity(nf, nf);
        jt(nf, nf + 1) = 1.0;
        Mat middle = Mat::Zero(d, d);
        // theta coordinate nf, w coordinate nf + 1
        middle(nf + 1, nf) = 1.0;
        middle(nf, nf + 1) = -1.0;
        Mat st = sigma.matrix_at(s_map(u));
        Mat tt = sigma.matrix_at(t_map(u));
        return Mat(js.transpose() * st * js + middle - jt.transpose() * tt * jt);
    }

    /// Composable-pair chart (y', theta', w, y, theta, x); factors and
    /// product are all linear in these coordinates.
    struct PairImages {
        Vec pr1, pr2, m;
    };

    PairImages pair_images(const Vec& q) const {
        const int nf = fiber();
        Vec yp = q.head(nf);
        double thp = q(nf), w = q(nf + 1);
        Vec y = q.segment(nf + 2, nf);
        double th = q(2 * nf + 2);
        Vec x = q.tail(nf);
        PairImages out;
        out.pr1.resize(dim());
        out.pr1 << yp, thp, w, y;
        out.pr2.resize(dim());
        out.pr2 << y, th, w, x;
        out.m.resize(dim());
        out.m << yp, th + thp, w, x;
        return out;
    }
};

inline ProductModel make_product_model(const AffineTransversal& t, const PointField& sigma) {
    if (t.k() != 1) throw BlockDimensionMismatch("product model needs a one-dimensional base");
    return ProductModel{conormal_chart(t), sigma};
}

}

#endif
