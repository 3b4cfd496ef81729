// Command line front end: each subcommand wraps one family of verifiers and
// emits a Report.  Exit codes: 0 all checks pass, 1 a check failed or a
// structural error was detected, 2 malformed input or configuration.
#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "plab/plab.hpp"

using namespace plab;
using nlohmann::json;

namespace {

struct Options {
    std::string command;
    std::string algebra, transversal, rep, frobenius, morphism, pipeline, out;
    std::string format = "json";
    long samples = 100;
    double tol = 1e-6;
    double fd_step = 0.0;  // 0 keeps each verifier's own default
    uint64_t seed = 42;

    json echo() const {
        json j = {{"command", command},   {"samples", samples}, {"tol", tol},
                  {"fd_step", fd_step},   {"seed", seed},       {"format", format}};
        if (!algebra.empty()) j["algebra"] = algebra;
        if (!transversal.empty()) j["transversal"] = transversal;
        if (!rep.empty()) j["rep"] = rep;
        if (!frobenius.empty()) j["frobenius"] = frobenius;
        if (!morphism.empty()) j["morphism"] = morphism;
        if (!pipeline.empty()) j["in"] = pipeline;
        return j;
    }
};

LieAlgebra algebra_of(const Options& opt) {
    if (opt.algebra.empty()) throw InputError("this command needs --algebra");
    return load_algebra(read_json_file(opt.algebra));
}

AffineTransversal transversal_of(const Options& opt, const LieAlgebra& lie) {
    if (opt.transversal.empty()) throw InputError("this command needs --transversal");
    return load_transversal(read_json_file(opt.transversal), lie);
}

void cmd_jacobi(const Options& opt, Report& out) {
    LieAlgebra lie = algebra_of(opt);
    VerificationReport jac;
    jac.check = "jacobi_identity";
    jac.tolerance = opt.tol;
    jac.record(0, jacobiator(lie).max_abs);
    out.add(jac);

    VerificationReport anti;
    anti.check = "bivector_antisymmetry";
    anti.tolerance = opt.tol;
    Sampler rng(opt.seed);
    for (long i = 0; i < opt.samples; ++i) {
        Mat pi = lie.poisson_matrix(rng.cube(lie.dim(), 1.0));
        anti.record(i, max_abs(Mat(pi + pi.transpose())));
    }
    out.add(anti);

    VerificationReport self;
    self.check = "schouten_self_bracket";
    self.tolerance = opt.tol;
    self.record(0, schouten(lie_poisson_field(lie), lie_poisson_field(lie)).max_coeff_abs());
    out.add(self);
}

void cmd_dual_pair(const Options& opt, Report& out) {
    LieAlgebra lie = algebra_of(opt);
    out.add(verify_dual_pair(lie, opt.samples, opt.tol, opt.seed));

    VerificationReport closed;
    closed.check = "omega_g_closed";
    closed.tolerance = opt.tol;
    PointField og = opt.fd_step > 0 ? omega_g_field(lie, opt.fd_step) : omega_g_field(lie);
    Sampler rng(opt.seed);
    long pts = std::min<long>(opt.samples, 10);
    for (long i = 0; i < pts; ++i) {
        Vec p(2 * lie.dim());
        p << rng.ball(lie.dim(), 1.0), rng.cube(lie.dim(), 1.0);
        closed.record(i, exterior_derivative(og, p).max_abs());
    }
    out.add(closed);
}

void cmd_normal_form(const Options& opt, Report& out) {
    LieAlgebra lie = algebra_of(opt);
    AffineTransversal t = transversal_of(opt, lie);
    double fd = opt.fd_step > 0 ? opt.fd_step : 1e-6;
    out.add(verify_normal_form(t, opt.samples, opt.tol, opt.seed, 1.0, fd));

    ConormalChart chart = conormal_chart(t);
    PointField sigma = omega_V_on_conormal(chart);
    VerificationReport closed;
    closed.check = "omega_V_closed";
    closed.tolerance = opt.tol;
    Sampler rng(opt.seed);
    long pts = std::min<long>(opt.samples, 10);
    for (long i = 0; i < pts; ++i) {
        Vec e = rng.ball(chart.dim(), chart.sample_radius());
        closed.record(i, exterior_derivative(sigma, e).max_abs());
    }
    out.add(closed);
}

void cmd_poisson_map(const Options& opt, Report& out) {
    LieAlgebra dom = algebra_of(opt);
    if (opt.morphism.empty()) throw InputError("poisson-map needs --morphism");
    MorphismData md = load_morphism(read_json_file(opt.morphism), dom);
    AffineTransversal x = transversal_of(opt, dom);
    MapNormalForm mn =
        poisson_map_normal_form(dom, md.codomain, md.matrix, x, opt.samples, opt.tol, opt.seed);
    out.add(mn.diagram);
    out.add(mn.pullback_form);
    out.add(mn.base_poisson);
}

void cmd_groupoid(const Options& opt, Report& out) {
    LieAlgebra lie = algebra_of(opt);
    if (opt.rep.empty()) throw InputError("groupoid needs --rep");
    MatrixRep rep = load_rep(read_json_file(opt.rep), lie);
    AffineTransversal t = transversal_of(opt, lie);

    out.add(check_axioms(rep, opt.samples, opt.tol, opt.seed));
    out.add(check_multiplicative(
        rep, [&lie](const Vec& xi) { return omega_G_matrix(lie, xi); }, opt.samples, opt.tol,
        opt.seed));

    RestrictedGroupoid gx = restrict_to_transversal(rep, t);
    VerificationReport rest;
    rest.check = "restricted_form_nondegenerate";
    rest.tolerance = 0.0;
    Sampler rng(opt.seed);
    long pts = std::min<long>(opt.samples, 10);
    for (long i = 0; i < pts; ++i) {
        Vec p = Vec::Zero(2 * lie.dim());
        p.tail(lie.dim()) = t.embed(rng.cube(t.k(), 0.3 * (1.0 + t.base.norm())));
        double sv = min_singular_value(gx.omega_x_matrix(p));
        rest.record(i, sv > 1e-8 ? 0.0 : 1.0, "min singular value " + std::to_string(sv));
    }
    out.add(rest);

    PointField sigma = omega_V_on_conormal(conormal_chart(t));
    PullbackModel pm = build_pullback_model(gx, sigma);
    double r = 0.08 * (1.0 + t.base.norm());
    Vec u = rng.cube(pm.dim(), r);
    out.add(pullback_nondegenerate(pm, u));
    out.add(pullback_closed(pm, u, opt.tol));
    out.add(pullback_forward_dirac(pm, u, opt.tol));
    Vec q = rng.cube(3 * lie.dim(), r);
    long pairs = std::min<long>(opt.samples, 20);
    out.add(pullback_multiplicative(pm, q, pairs, opt.tol, opt.seed));
}

void cmd_frobenius(const Options& opt, Report& out) {
    LieAlgebra lie = algebra_of(opt);
    if (opt.frobenius.empty()) throw InputError("frobenius needs --frobenius");
    FrobeniusPair p = load_frobenius(read_json_file(opt.frobenius), lie);

    for (VerificationReport& r : weinstein_splitting_check(p, opt.samples, opt.tol, opt.seed))
        out.add(std::move(r));
    for (VerificationReport& r : check_vorobjev(p, opt.samples, opt.tol, opt.seed))
        out.add(std::move(r));

    QuadraticityReport q = transverse_quadraticity(p, p.lambda_h, 0.3, 1e-8, opt.seed);
    VerificationReport quad;
    quad.check = "transverse_quadraticity";
    quad.tolerance = 1e-8;
    quad.record(0, q.cubic_residual, "fitted degree " + std::to_string(q.degree));
    if (!q.pass || q.degree > 2) quad.record(1, 1.0, "fiber structure not quadratic");
    out.add(quad);
}

void cmd_dirac(const Options& opt, Report& out) {
    if (opt.pipeline.empty()) throw InputError("dirac needs --in with a pipeline file");
    json j = read_json_file(opt.pipeline);
    if (!j.contains("ambient") || !j["ambient"].is_number_integer())
        throw InputError("pipeline needs an integer ambient dimension");
    if (!j.contains("start") || !j["start"].is_object())
        throw InputError("pipeline needs a start object");

    DiracSpace cur;
    const json& start = j["start"];
    if (start.contains("bivector"))
        cur = graph_of_bivector(mat_from_json(start["bivector"], j["ambient"].get<int>()));
    else if (start.contains("twoform"))
        cur = graph_of_twoform(mat_from_json(start["twoform"], j["ambient"].get<int>()));
    else
        throw InputError("start must give a bivector or a twoform");

    VerificationReport steps;
    steps.check = "pipeline_isotropy";
    steps.tolerance = opt.tol;
    steps.record(0, cur.isotropy_residual(), "start, dimension " + std::to_string(cur.n));

    long stamp = 1;
    if (j.contains("operations")) {
        if (!j["operations"].is_array()) throw InputError("operations must be an array");
        for (const json& op : j["operations"]) {
            std::string kind = op.value("op", std::string());
            if (kind == "gauge") {
                cur = gauge(cur, mat_from_json(op.at("twoform"), cur.n));
            } else if (kind == "backward") {
                cur = backward_image(mat_from_json(op.at("matrix")), cur);
            } else if (kind == "forward") {
                cur = forward_image(mat_from_json(op.at("matrix")), cur);
            } else if (kind == "as_bivector") {
                Mat pi = as_bivector(cur);
                VerificationReport conv;
                conv.check = "as_bivector_round_trip";
                conv.tolerance = opt.tol;
                json rows = json::array();
                for (int r = 0; r < pi.rows(); ++r) {
                    json row = json::array();
                    for (int c = 0; c < pi.cols(); ++c) row.push_back(pi(r, c));
                    rows.push_back(row);
                }
                conv.record(0, dirac_distance(graph_of_bivector(pi), cur), rows.dump());
                out.add(conv);
                continue;
            } else {
                throw InputError("unknown pipeline operation '" + kind + "'");
            }
            steps.record(stamp++, cur.isotropy_residual(),
                         kind + ", dimension " + std::to_string(cur.n));
        }
    }
    out.add(steps);
}

int run(const Options& opt) {
    Report report;
    report.config = opt.echo();
    auto t0 = std::chrono::steady_clock::now();

    if (opt.command == "jacobi")
        cmd_jacobi(opt, report);
    else if (opt.command == "dual-pair")
        cmd_dual_pair(opt, report);
    else if (opt.command == "normal-form")
        cmd_normal_form(opt, report);
    else if (opt.command == "poisson-map")
        cmd_poisson_map(opt, report);
    else if (opt.command == "groupoid")
        cmd_groupoid(opt, report);
    else if (opt.command == "frobenius")
        cmd_frobenius(opt, report);
    else if (opt.command == "dirac")
        cmd_dirac(opt, report);

    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!opt.out.empty()) {
        std::ofstream f(opt.out);
        if (!f) throw InputError("cannot write " + opt.out);
        f << report.to_json_canonical().dump(2) << "\n";
    }
    if (opt.format == "text")
        std::cout << report.to_text();
    else
        std::cout << report.to_json_full().dump(2) << "\n";
    return report.overall_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"numerical certification of Poisson structures on Lie algebra duals"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--algebra", opt.algebra, "algebra description file");
    app.add_option("--transversal", opt.transversal, "affine transversal file");
    app.add_option("--rep", opt.rep, "matrix representation file");
    app.add_option("--frobenius", opt.frobenius, "frobenius pair file");
    app.add_option("--morphism", opt.morphism, "algebra morphism file");
    app.add_option("--in", opt.pipeline, "dirac pipeline file");
    app.add_option("--samples", opt.samples, "sample count per check");
    app.add_option("--tol", opt.tol, "pass tolerance");
    app.add_option("--fd-step", opt.fd_step, "finite difference step override");
    app.add_option("--seed", opt.seed, "sampler seed");
    app.add_option("--out", opt.out, "write the canonical JSON report here");
    app.add_option("--format", opt.format, "stdout format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    for (const char* name : {"jacobi", "dual-pair", "normal-form", "poisson-map", "groupoid",
                             "frobenius", "dirac"})
        app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    opt.command = app.get_subcommands().front()->get_name();
    if (opt.samples < 1 || opt.tol <= 0.0) {
        std::cerr << "samples must be >= 1 and tol must be positive\n";
        return 2;
    }

    try {
        return run(opt);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "verification error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
}
