#ifndef PLAB_FROBENIUS_HPP
#define PLAB_FROBENIUS_HPP

#include "plab/report.hpp"
#include "plab/rng.hpp"
#include "plab/spray.hpp"

namespace plab {

/// Subalgebra with a covector whose isotropy form is nondegenerate: the data
/// of a flat-fiber splitting around the fiber over lambda.
struct FrobeniusPair {
    LieAlgebra g;
    LieAlgebra h;       // induced structure in the h-basis coordinates
    Mat h_basis;        // n x m, columns span h inside g
    Mat h_perp;         // n x (n - m), basis of the annihilator of h in the dual
    Vec lambda_h;       // covector on h, in h-basis coordinates
    Vec xi0;            // reference extension of lambda to the full dual

    int n() const { return g.dim(); }
    int m() const { return static_cast<int>(h_basis.cols()); }

    Mat b_lambda() const { return h.poisson_matrix(lambda_h); }

    /// The fiber over lambda as an affine transversal: base xi0, directions
    /// the annihilator of h.
    AffineTransversal fiber_transversal() const {
        return make_transversal(g, xi0, h_perp);
    }
};

/// Build the pair: checks bracket closure of the subspace, derives the
/// induced structure constants, and requires the isotropy form of lambda to
/// be nondegenerate.
inline FrobeniusPair make_frobenius_pair(const LieAlgebra& g, const Mat& h_basis,
                                         const Vec& lambda_h) {
    const int n = g.dim(), m = static_cast<int>(h_basis.cols());
    if (h_basis.rows() != n) throw DimensionMismatch("subalgebra basis must sit in the algebra");
    if (lambda_h.size() != m) throw DimensionMismatch("covector must match the subalgebra");
    if (svd_rank(h_basis) != m) throw DimensionMismatch("subalgebra basis is dependent");
    std::vector<Mat> ch(m, Mat::Zero(m, m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            Vec br = g.bracket(h_basis.col(a), h_basis.col(b));
            Vec co = lstsq(h_basis, br);
            if (max_abs(Vec(h_basis * co - br)) > 1e-12 * (1.0 + br.norm()))
                throw NotFrobenius("subspace is not closed under the bracket");
            for (int c = 0; c < m; ++c) ch[c](a, b) = co(c);
        }
    FrobeniusPair p;
    p.g = g;
    p.h = LieAlgebra("h", ch);
    p.h_basis = h_basis;
    p.h_perp = kernel_basis(Mat(h_basis.transpose()));
    p.lambda_h = lambda_h;
    p.xi0 = lstsq(Mat(h_basis.transpose()), lambda_h);
    Mat b = p.b_lambda();
    double scale = std::max(1.0, max_abs(b));
    if (m % 2 == 1 || min_singular_value(b) <= 1e-10 * scale)
        throw NotFrobenius("isotropy form of lambda is degenerate");
    return p;
}

/// Left-invariant symplectic form of the subalgebra at chart point x0:
/// omega(x, y) = -lambda([Xi(x0) x, Xi(x0) y]), all in h-coordinates.
inline Mat omega_lambda_matrix(const FrobeniusPair& p, const Vec& x0) {
    const int m = p.m();
    Mat xh = xi_operator(p.h, x0);
    Mat w(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            w(i, j) = -p.lambda_h.dot(p.h.bracket(xh.col(i), xh.col(j)));
    return w;
}

inline double omega_lambda(const FrobeniusPair& p, const Vec& x0, const Vec& x, const Vec& y) {
    return x.dot(omega_lambda_matrix(p, x0) * y);
}

/// Splitting map (x_h, fiber offset) -> dual point.
inline Vec splitting_map(const FrobeniusPair& p, const Vec& q) {
    Vec x = p.h_basis * q.head(p.m());
    Vec xi = p.xi0 + p.h_perp * q.tail(p.n() - p.m());
    return coad_exp(p.g, x, xi);
}

/// Certify the splitting: the map intertwines the subalgebra projection with
/// the subalgebra exponential exactly, and pushes the product bivector
/// (inverse form on the group factor, induced bivector on the fiber) to the
/// linear structure.
inline std::vector<VerificationReport> weinstein_splitting_check(const FrobeniusPair& p,
                                                                 long samples, double tol,
                                                                 uint64_t seed,
                                                                 double fd_step = 1e-6) {
    VerificationReport diagram;
    diagram.check = "splitting_diagram";
    diagram.tolerance = 1e-10;
    VerificationReport push;
    push.check = "weinstein_splitting";
    push.tolerance = tol;
    AffineTransversal fiber = p.fiber_transversal();
    const int n = p.n(), m = p.m(), kf = n - m;
    double radius = 0.1 * (1.0 + p.lambda_h.norm());
    Sampler rng(seed);
    for (long i = 0; i < samples; ++i) {
        Vec q(n);
        q << rng.cube(m, 3.0 * radius), rng.cube(kf, 3.0 * radius);
        diagram.record(i, max_abs(Vec(p.h_basis.transpose() * splitting_map(p, q) -
                                      coad_exp(p.h, q.head(m), p.lambda_h))));
        Mat w = omega_lambda_matrix(p, q.head(m));
        Mat prod = Mat::Zero(n, n);
        prod.topLeftCorner(m, m) = w.inverse();
        if (kf > 0) {
            SplitBivector sp = split_at(fiber, Vec(p.xi0 + p.h_perp * q.tail(kf)));
            prod.bottomRightCorner(kf, kf) = sp.pi_x;
        }
        Mat j = fd_jacobian([&p](const Vec& qq) { return splitting_map(p, qq); }, q,
                            fd_step * (1.0 + q.norm()));
        push.record(i, max_abs(Mat(j * prod * j.transpose() -
                                   p.g.poisson_matrix(splitting_map(p, q)))));
    }
    diagram.finalize();
    push.finalize();
    return {diagram, push};
}

/// Horizontal-vertical decomposition of the linear structure at a dual point.
struct VorobjevSplit {
    Mat pi_v, pi_h;
    Mat hor;       // n x m, horizontal lift of the h-dual basis
    Mat pi_h_mu;   // induced bivector of the subalgebra at mu
    Vec mu;        // restriction of the point to the subalgebra
};

inline VorobjevSplit vorobjev_decompose(const FrobeniusPair& p, const Vec& xi) {
    const int m = p.m();
    VorobjevSplit out;
    out.mu = p.h_basis.transpose() * xi;
    Mat bm = p.h.poisson_matrix(out.mu);
    if (min_singular_value(bm) <= 1e-10 * std::max(1.0, max_abs(bm)))
        throw SingularIsotropy("isotropy form degenerate at this point");
    Eigen::PartialPivLU<Mat> lu(Mat(-bm));
    out.hor.resize(p.n(), m);
    for (int a = 0; a < m; ++a) {
        Vec x = lu.solve(Vec(Vec::Unit(m, a)));
        out.hor.col(a) = p.g.ad_matrix(Vec(p.h_basis * x)).transpose() * xi;
    }
    out.pi_h_mu = p.h.poisson_matrix(out.mu);
    out.pi_h = out.hor * out.pi_h_mu * out.hor.transpose();
    out.pi_v = p.g.poisson_matrix(xi) - out.pi_h;
    return out;
}

/// Range containment of a bivector inside a subspace, as the residual of the
/// orthogonal projection.  `scale` sets the absolute cutoff below which
/// singular directions count as zero; a bivector that vanishes up to
/// round-off at that scale is contained in anything.
inline double range_containment(const Mat& pi, const Mat& span, double scale = 1.0) {
    Eigen::JacobiSVD<Mat> svd(pi, Eigen::ComputeThinU);
    int r = 0;
    while (r < svd.singularValues().size() &&
           svd.singularValues()(r) > 1e-10 * std::max(1.0, scale))
        ++r;
    if (r == 0) return 0.0;
    Mat range = svd.matrixU().leftCols(r);
    Mat q = orthonormal_columns(span);
    return max_abs(Mat(range - q * (q.transpose() * range)));
}

/// Full decomposition certificate: ranges, projection identities, Schouten
/// vanishing of both pieces and their mixed bracket, and the projection being
/// forward-Dirac onto the subalgebra's linear structure.
inline std::vector<VerificationReport> check_vorobjev(const FrobeniusPair& p, long samples,
                                                      double tol, uint64_t seed,
                                                      double schouten_tol = 1e-5) {
    VerificationReport alg;
    alg.check = "vorobjev_algebraic";
    alg.tolerance = tol;
    VerificationReport sch;
    sch.check = "vorobjev_schouten";
    sch.tolerance = schouten_tol;
    VerificationReport fw;
    fw.check = "vorobjev_forward_dirac";
    fw.tolerance = 1e-8;
    const int n = p.n(), m = p.m();
    double radius = 0.1 * (1.0 + p.lambda_h.norm());
    Sampler rng(seed);
    PointField ph = bivector_field(n, [&p](const Vec& q) { return vorobjev_decompose(p, q).pi_h; });
    PointField pv = bivector_field(n, [&p](const Vec& q) { return vorobjev_decompose(p, q).pi_v; });
    for (long i = 0; i < samples; ++i) {
        Vec xi = p.xi0 + rng.cube(n, 3.0 * radius);
        VorobjevSplit s = vorobjev_decompose(p, xi);
        double r = max_abs(Mat(s.pi_v + s.pi_h - p.g.poisson_matrix(xi)));
        r = std::max(r, max_abs(Mat(p.h_basis.transpose() * s.pi_h * p.h_basis - s.pi_h_mu)));
        r = std::max(r, max_abs(Mat(p.h_basis.transpose() * s.pi_v)));
        r = std::max(r, max_abs(Mat(p.h_basis.transpose() * s.hor -
                                    Mat::Identity(m, m))));
        double scale = max_abs(p.g.poisson_matrix(xi));
        r = std::max(r, range_containment(s.pi_h, s.hor, scale));
        r = std::max(r, range_containment(s.pi_v, p.h_perp, scale));
        alg.record(i, r);
        double sr = schouten(ph, ph, xi).max_abs();
        sr = std::max(sr, schouten(pv, pv, xi).max_abs());
        sr = std::max(sr, schouten(pv, ph, xi).max_abs());
        sch.record(i, sr);
        DiracSpace image = forward_image(Mat(p.h_basis.transpose()),
                                         graph_of_bivector(p.g.poisson_matrix(xi)));
        fw.record(i, dirac_distance(image, graph_of_bivector(p.h.poisson_matrix(s.mu))));
    }
    alg.finalize();
    sch.finalize();
    fw.finalize();
    return {alg, sch, fw};
}

/// Second differences of the horizontal lift along the fiber directions must
/// vanish: the lift depends affinely on the point over a fixed restriction.
inline VerificationReport check_hor_affine(const FrobeniusPair& p, long samples, double tol,
                                           uint64_t seed) {
    VerificationReport out;
    out.check = "hor_affine";
    out.tolerance = tol;
    const int n = p.n(), m = p.m(), kf = n - p.m();
    Sampler rng(seed);
    for (long i = 0; i < samples; ++i) {
        Vec xi = p.xi0 + rng.cube(n, 0.3);
        Vec v = rng.cube(m, 1.0);
        Vec d = p.h_perp * rng.cube(kf, 1.0);
        auto hor_v = [&](const Vec& q) -> Vec { return vorobjev_decompose(p, q).hor * v; };
        Vec second = hor_v(Vec(xi + 0.1 * d)) - 2.0 * hor_v(xi) + hor_v(Vec(xi - 0.1 * d));
        out.record(i, max_abs(second));
    }
    out.finalize();
    return out;
}

/// Degree certificate for the transverse structure on the fiber over mu.
struct QuadraticityReport {
    int degree = -1;
    std::vector<double> residual_by_degree;
    double cubic_residual = 0.0;
    bool pass = false;
};

inline QuadraticityReport transverse_quadraticity(const FrobeniusPair& p, const Vec& mu,
                                                  double region, double tol = 1e-8,
                                                  uint64_t seed = 42) {
    const int n = p.n(), kf = n - p.m();
    Vec base = lstsq(Mat(p.h_basis.transpose()), mu);
    Mat g = pinv(p.h_perp);
    QuadraticityReport rep;
    rep.residual_by_degree.assign(4, 0.0);
    for (int deg = 0; deg <= 3; ++deg) {
        double worst = 0.0;
        for (int i = 0; i < kf; ++i)
            for (int j = i + 1; j < kf; ++j) {
                auto entry = [&](const Vec& s) {
                    Mat piv = vorobjev_decompose(p, Vec(base + p.h_perp * s)).pi_v;
                    return (g * piv * g.transpose())(i, j);
                };
                worst = std::max(worst,
                                 polynomial_fit_residual(entry, kf, region, deg, seed));
            }
        rep.residual_by_degree[deg] = worst;
        if (rep.degree < 0 && worst <= tol) rep.degree = deg;
    }
    rep.cubic_residual = rep.residual_by_degree[3];
    rep.pass = rep.degree >= 0 && rep.degree <= 2;
    if (rep.degree < 0)
        throw NoFit("transverse structure does not fit a cubic within tolerance");
    return rep;
}

}

#endif
