#include "plcc/cli.hpp"

#include "plcc/branch.hpp"
#include "plcc/eigenpair.hpp"
#include "plcc/errors.hpp"
#include "plcc/nlsolve.hpp"
#include "plcc/quadrature.hpp"
#include "plcc/subsuper.hpp"
#include "plcc/varmin.hpp"
#include "plcc/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

namespace plcc::cli {

namespace {

struct RunConfig {
    double p = 2.0;
    double q = 0.5;
    double sigma = 3.0;
    double lambda = 1.0;
    std::string sign = "plus";
    std::string k = "const:1";
    std::string h = "const:1";
    int dim = 1;
    int n = 256;
    SolverOptions opts;
    std::uint64_t seed = 0;
    std::string output;
    std::vector<double> lambdas{1, 2, 3, 4, 5, 6, 7};
    double rel_width = 1e-3;
    int pairs = 20;
};

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

ProblemSpec make_spec(const RunConfig& c) {
    if (c.sign != "plus" && c.sign != "minus") throw InvalidSpec("--sign must be plus or minus");
    MeshPtr mesh = build_mesh(c.dim, c.n);
    return ProblemSpec{c.p,
                       c.q,
                       c.sigma,
                       c.lambda,
                       c.sign == "plus" ? Sign::Plus : Sign::Minus,
                       WeightField::parse(mesh, c.k),
                       WeightField::parse(mesh, c.h)};
}

void emit_field(const GridFunction& f, const RunConfig& c, std::ostream& out) {
    if (c.output.empty())
        write_csv(f, out);
    else
        write_csv(f, c.output);
}

// Summary goes to stdout when the field is written to a file, else to stderr.
std::ostream& summary_stream(const RunConfig& c, std::ostream& out, std::ostream& err) {
    return c.output.empty() ? err : out;
}

int status_code(SolveStatus s) { return s == SolveStatus::Converged ? kOk : kNonConvergence; }

void print_warnings(const ProblemSpec& s, std::ostream& err) {
    for (const auto& w : validate(s)) err << "warning: " << w << '\n';
}

int cmd_solve_plus(const RunConfig& c, std::ostream& out, std::ostream& err) {
    ProblemSpec s = make_spec(c).with_sign(Sign::Plus);
    print_warnings(s, err);
    const BranchPoint b = monotone_iterate(s, c.opts);
    emit_field(b.solution, c, out);
    summary_stream(c, out, err) << "status=" << to_string(b.status) << " lambda=" << num(b.lambda)
                                << " sup_norm=" << num(b.sup_norm) << " energy=" << num(b.energy)
                                << " iterations=" << b.iterations << " residual=" << num(b.residual) << '\n';
    return status_code(b.status);
}

int cmd_solve_minus(const RunConfig& c, std::ostream& out, std::ostream& err) {
    ProblemSpec s = make_spec(c).with_sign(Sign::Minus);
    print_warnings(s, err);
    const MinimizeReport r = minimize_F(s, default_initial(s), c.opts);
    emit_field(r.minimizer, c, out);
    summary_stream(c, out, err) << "status=" << to_string(r.status) << " lambda=" << num(s.lambda)
                                << " F=" << num(r.value) << " sup_norm=" << num(sup_norm(r.minimizer))
                                << " steps=" << r.steps << " gradient=" << num(r.gradient_norm) << '\n';
    return status_code(r.status);
}

int cmd_torsion(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (!(c.p > 1.0)) throw InvalidSpec("p must be > 1");
    c.opts.validate();
    const GridFunction v = solve_torsion(build_mesh(c.dim, c.n), c.p, c.opts);
    emit_field(v, c, out);
    summary_stream(c, out, err) << "status=converged sup_norm=" << num(sup_norm(v)) << '\n';
    return kOk;
}

int cmd_eigen(const RunConfig& c, std::ostream& out, std::ostream&) {
    if (!(c.p > 1.0)) throw InvalidSpec("p must be > 1");
    c.opts.validate();
    const EigenPair e = first_eigenpair(build_mesh(c.dim, c.n), c.p, c.opts);
    if (!c.output.empty()) write_csv(e.phi, c.output);
    out << "lambda1,iterations,residual\n" << num(e.lambda1) << ',' << e.iterations << ',' << num(e.residual) << '\n';
    return kOk;
}

int cmd_bounds(const RunConfig& c, std::ostream& out, std::ostream& err) {
    ProblemSpec s = make_spec(c);
    print_warnings(s, err);
    const SubSuperBundle b = compute_bounds(s, c.opts);
    out << "A,B,C,lambda0,lambda0_printed,lambda_prime,lambda1,m\n"
        << num(b.A) << ',' << num(b.B) << ',' << num(b.C) << ',' << num(b.lambda0) << ',' << num(b.lambda0_printed)
        << ',' << num(*b.lambda_prime) << ',' << num(*b.lambda1) << ',' << num(b.m) << '\n';
    return kOk;
}

int cmd_bifurcation(const RunConfig& c, std::ostream& out, std::ostream& err) {
    ProblemSpec s = make_spec(c).with_sign(Sign::Plus);
    print_warnings(s, err);
    for (double l : c.lambdas)
        if (!(l > 0.0)) throw InvalidSpec("bifurcation lambdas must be positive");
    const auto points = sweep_minimal_branch(s, c.lambdas, c.opts);
    out << "lambda,sup_norm,energy,iters,status\n";
    for (const auto& b : points)
        out << num(b.lambda) << ',' << num(b.sup_norm) << ',' << num(b.energy) << ',' << b.iterations << ','
            << to_string(b.status) << '\n';
    return kOk;
}

int cmd_lambda_star(const RunConfig& c, std::ostream& out, std::ostream& err) {
    ProblemSpec s = make_spec(c);
    print_warnings(s, err);
    const LambdaStarEstimate e = s.sign == Sign::Plus ? estimate_lambda_star_plus(s, c.opts, c.rel_width)
                                                      : estimate_lambda_star_minus(s, c.opts, c.rel_width);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out << "sign,lambda0,lambda_prime,Lambda,lo,hi,estimate\n"
        << (s.sign == Sign::Plus ? "plus" : "minus") << ',' << num(s.sign == Sign::Plus ? e.lambda0 : nan) << ','
        << num(s.sign == Sign::Plus ? e.lambda_prime : nan) << ',' << num(s.sign == Sign::Plus ? nan : e.Lambda)
        << ',' << num(e.lower) << ',' << num(e.upper) << ',' << num(e.estimate) << '\n';
    if (e.low_confidence) err << "warning: low-confidence estimate\n";
    return kOk;
}

// Smooth positive random field: sine bump times 1 + sum of small random modes.
GridFunction random_positive(const MeshPtr& mesh, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-0.3, 0.3);
    std::uniform_real_distribution<double> amp(0.2, 5.0);
    double a[3][3];
    for (auto& row : a)
        for (double& x : row) x = coef(rng);
    const double scale = amp(rng);
    const Extent e = mesh->extent();
    const int dim = mesh->dimension();
    return GridFunction::from_function(mesh, [&](const Point& x) {
        const double sx = (x[0] - e.x0) / (e.x1 - e.x0);
        const double sy = dim == 2 ? (x[1] - e.y0) / (e.y1 - e.y0) : 0.5;
        double bump = std::sin(std::numbers::pi * sx);
        if (dim == 2) bump *= std::sin(std::numbers::pi * sy);
        double mod = 1.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                mod += a[i][j] / 3.0 * std::cos(std::numbers::pi * (i + 1) * sx) * std::cos(std::numbers::pi * j * sy);
        return std::max(scale * bump * mod, 0.0);
    });
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    ProblemSpec s = make_spec(c).with_sign(Sign::Plus);
    print_warnings(s, err);
    const SolverOptions& o = c.opts;
    bool all = true;
    out << "check,value,pass\n";
    auto report = [&](const std::string& name, double value, bool pass) {
        out << name << ',' << num(value) << ',' << (pass ? "yes" : "no") << '\n';
        all = all && pass;
    };

    const BranchPoint b = monotone_iterate(s, o);
    report("plus_converged", b.residual, b.status == SolveStatus::Converged);
    if (b.status == SolveStatus::Converged) {
        const GridFunction& u = b.solution;
        report("monotone_violation", b.monotone_violation, b.monotone_violation <= 1e-8);
        report("interior_positive", sup_norm(u), interior_positive(u));
        const double slope = boundary_slope_check(u);
        report("boundary_slope", slope, slope > 0.0);
        const IdentityReport id = check_identities(u, s);
        report("energy_negative", id.E, id.energy_negative);
        report("testing_identity", id.testing_residual, id.testing_ok);
        report("stability", id.stability, id.stability_ok);
        report("stability_plus", id.stability_plus, id.stability_ok);
        report("balance", id.balance, id.balance_ok);

        const GridFunction v = solve_torsion(s.mesh_ptr(), s.p, o);
        const SubSuperBundle bundle = compute_constants(s, v);
        if (s.lambda <= bundle.lambda0) {
            const GridFunction w = solve_concave(s.lambda, s.k, s.q, s.p, o);
            const SubSuperPair pair = build_pair(s, v, w, bundle, o);
            report("pair_ordered", pair.eps, pair.ordered);
            report("sub_margin", pair.sub_margin, pair.sub_margin >= -o.tol_newton);
            report("super_margin", pair.super_margin, pair.super_margin >= -o.tol_newton);
            const ComparisonResult cmp = check_comparison(u, pair.super, s.p, o, o.tol_newton);
            report("comparison_premise", cmp.premise_gap, cmp.premise);
            report("comparison_conclusion", cmp.max_excess, cmp.conclusion);
        }
    }

    std::mt19937_64 rng(c.seed);
    double picone_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < c.pairs; ++i) {
        const GridFunction u = random_positive(s.mesh_ptr(), rng);
        const GridFunction v = random_positive(s.mesh_ptr(), rng);
        picone_min = std::min(picone_min, picone_R(u, v, s.p).pointwise_min);
    }
    report("picone_min", picone_min, picone_min >= -1e-12);

    const ProblemSpec minus = s.with_sign(Sign::Minus);
    const MinimizeReport r = minimize_F(minus, default_initial(minus), o);
    report("minus_converged", r.gradient_norm, r.status == SolveStatus::Converged);
    if (r.status == SolveStatus::Converged && r.value < -o.tol_energy)
        report("minus_interior_positive", sup_norm(r.minimizer), interior_positive(r.minimizer));
    return all ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Concave-convex p-Laplacian problems: solves, bounds, thresholds"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_config("--config", "", "Plain-text key = value file; flags override it");
    app.allow_config_extras(false);
    app.require_subcommand(1);
    app.add_option("--p", c.p, "Operator exponent p > 1");
    app.add_option("--q", c.q, "Concave exponent, 0 < q < p-1");
    app.add_option("--sigma", c.sigma, "Convex exponent, sigma > p-1");
    app.add_option("--lambda", c.lambda, "Parameter lambda");
    app.add_option("--sign", c.sign, "plus or minus");
    app.add_option("--k", c.k, "Weight k: const:C, sin:A, affine:C0,C1, file:PATH");
    app.add_option("--h", c.h, "Weight h, same forms as --k");
    app.add_option("--dim", c.dim, "Dimension, 1 or 2");
    app.add_option("--n", c.n, "Cells per axis");
    app.add_option("--eps-reg", c.opts.eps_reg, "Gradient regularization");
    app.add_option("--tol-newton", c.opts.tol_newton, "Weak residual tolerance");
    app.add_option("--tol-mono", c.opts.tol_mono, "Monotone increment tolerance");
    app.add_option("--tol-energy", c.opts.tol_energy, "Energy threshold");
    app.add_option("--max-iter", c.opts.max_mono, "Monotone iteration budget");
    app.add_option("--max-newton", c.opts.max_newton, "Newton step budget");
    app.add_option("--max-descent", c.opts.max_descent, "Descent step budget");
    app.add_option("--blowup", c.opts.blowup, "Sup-norm growth counted as divergence");
    app.add_option("--seed", c.seed, "Seed for random test fields");
    app.add_option("--output", c.output, "Write the solution field to this CSV file");
    app.add_option("--lambdas", c.lambdas, "Comma-separated lambda grid")->delimiter(',');
    app.add_option("--rel-width", c.rel_width, "Relative bracket width for thresholds");
    app.add_option("--pairs", c.pairs, "Random pairs for the Picone check");

    struct Entry {
        const char* name;
        const char* help;
        int (*fn)(const RunConfig&, std::ostream&, std::ostream&);
    };
    const Entry entries[] = {
        {"solve-plus", "Minimal positive solution of the + problem", cmd_solve_plus},
        {"solve-minus", "Global minimizer of the - problem energy", cmd_solve_minus},
        {"torsion", "Torsion function -Delta_p v = 1", cmd_torsion},
        {"eigen", "First Dirichlet eigenvalue", cmd_eigen},
        {"bounds", "Explicit constants A, B, C, lambda0, lambda', lambda1, m", cmd_bounds},
        {"bifurcation", "Minimal branch over a lambda grid", cmd_bifurcation},
        {"lambda-star", "Bracket for the extremal parameter", cmd_lambda_star},
        {"verify", "Property checks for one configuration", cmd_verify},
    };
    for (const auto& e : entries) app.add_subcommand(e.name, e.help)->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("plcc");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return kInvalidSpec;
    }

    try {
        c.opts.validate();
        for (const auto& e : entries)
            if (app.got_subcommand(e.name)) return e.fn(c, out, err);
        return kInvalidSpec;
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << '\n' << "status=stagnated\n";
        return kNonConvergence;
    } catch (const InvalidSpec& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidSpec;
    } catch (const InvalidMesh& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidSpec;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidSpec;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace plcc::cli
