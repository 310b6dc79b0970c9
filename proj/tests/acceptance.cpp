// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "oracles.hpp"
#include "plcc/branch.hpp"
#include "plcc/eigenpair.hpp"
#include "plcc/nlsolve.hpp"
#include "plcc/plap.hpp"
#include "plcc/quadrature.hpp"
#include "plcc/subsuper.hpp"
#include "plcc/varmin.hpp"
#include "plcc/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace plcc;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTimeBudget = 60.0;

ProblemSpec s0(const MeshPtr& m, double lambda = 1.0, Sign sign = Sign::Plus) {
    return ProblemSpec{2.0, 0.5, 3.0, lambda, sign, WeightField::constant(m, 1.0), WeightField::constant(m, 1.0)};
}

const auto unit = [](double) { return 1.0; };

/// Collects failed checks with a short description of each.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    void near(double got, double want, double tol, const std::string& what) {
        std::ostringstream s;
        s << what << ": got " << got << ", want " << want << " +- " << tol;
        expect(std::abs(got - want) <= tol, s.str());
    }
    void rel(double got, double want, double tol, const std::string& what) {
        near(got / want, 1.0, tol, what + " (ratio)");
    }
    const std::vector<std::string>& failures() const { return failures_; }

private:
    std::vector<std::string> failures_;
};

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

void torsion_closed_forms(Checks& c) {
    const MeshPtr m = build_mesh(1, 256);
    const SolverOptions opts;
    c.near(sup_norm(solve_torsion(m, 2.0, opts)), 0.125, 1e-4, "torsion p=2");
    // (p-1)/p * (1/2)^(p/(p-1)) at p = 3
    c.near(sup_norm(solve_torsion(m, 3.0, opts)), 0.23570, 1e-3, "torsion p=3");
}

void eigenvalues(Checks& c) {
    const SolverOptions opts;
    const EigenPair one = first_eigenpair(build_mesh(1, 256), 2.0, opts);
    c.expect(one.converged, "1-D eigen converged");
    c.rel(one.lambda1, kPi * kPi, 5e-3, "lambda1 1-D");
    const EigenPair two = first_eigenpair(build_mesh(2, 32), 2.0, opts);
    c.expect(two.converged, "2-D eigen converged");
    c.rel(two.lambda1, 2.0 * kPi * kPi, 1e-2, "lambda1 2-D");
    const EigenPair cubic = first_eigenpair(build_mesh(1, 256), 3.0, opts);
    c.expect(cubic.converged, "p=3 eigen converged");
    const double shoot = oracle::shooting_eigenvalue(3.0);
    c.rel(shoot, 28.29, 1e-2, "shooting p=3");
    c.rel(cubic.lambda1, shoot, 1e-2, "lambda1 p=3 vs shooting");
}

void constants(Checks& c) {
    const MeshPtr m = build_mesh(1, 256);
    const SubSuperBundle b = compute_bounds(s0(m), SolverOptions{});
    c.rel(b.C, 4.595, 1e-3, "C");
    c.rel(b.lambda0, 7.197, 1e-3, "lambda0");
    c.near(b.lambda0_check, 1.0, 1e-6, "tangency condition at lambda0");
    const double t = b.M(b.lambda0, 2.0, 0.5, 3.0);
    c.near(b.lambda0 * b.A * std::pow(t, -0.5), 0.8, 1e-6, "concave component");
    c.near(b.B * std::pow(t, 2.0), 0.2, 1e-6, "convex component");
    c.expect(b.lambda_prime.has_value() && b.lambda1.has_value(), "lambda' available");
    if (b.lambda_prime) c.rel(*b.lambda_prime, 9.359, 5e-3, "lambda'");
    if (b.lambda_prime && b.lambda1)
        c.rel(*b.lambda_prime, oracle::lambda_prime_grid(1.0, *b.lambda1, 2.0, 0.5, 3.0), 1e-3, "lambda' vs grid");
}

std::vector<ProblemSpec> random_plus_specs(const MeshPtr& m, int count) {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ProblemSpec> specs;
    for (int i = 0; i < count; ++i) {
        const double p = 1.6 + 1.6 * u(rng);
        const double q = (p - 1.0) * (0.2 + 0.6 * u(rng));
        const double sigma = p - 1.0 + 0.5 + 1.5 * u(rng);
        specs.push_back(ProblemSpec{p, q, sigma, 1.0, Sign::Plus, WeightField::sine(m, 0.8 * u(rng)),
                                    WeightField::affine(m, 0.5 + u(rng), u(rng))});
    }
    return specs;
}

void sandwich(Checks& c) {
    const SolverOptions opts;
    const MeshPtr m = build_mesh(1, 256);
    const LambdaStarEstimate e = estimate_lambda_star_plus(s0(m), opts);
    c.expect(e.lambda0 <= e.estimate && e.estimate <= e.lambda_prime, "S0 sandwich");
    const MeshPtr r = build_mesh(1, 128);
    int idx = 0;
    for (const ProblemSpec& spec : random_plus_specs(r, 3)) {
        const LambdaStarEstimate x = estimate_lambda_star_plus(spec, opts);
        std::ostringstream s;
        s << "random spec " << idx++ << " (p=" << spec.p << " q=" << spec.q << " sigma=" << spec.sigma
          << "): " << x.lambda0 << " <= " << x.estimate << " <= " << x.lambda_prime;
        c.expect(x.lambda0 <= x.estimate && x.estimate <= x.lambda_prime, s.str());
    }
}

void monotone_chain(Checks& c) {
    const SolverOptions opts;
    const MeshPtr m = build_mesh(1, 256);
    std::vector<ProblemSpec> runs;
    for (int l = 1; l <= 7; ++l) runs.push_back(s0(m, l));
    for (ProblemSpec spec : random_plus_specs(build_mesh(1, 128), 3)) {
        const SubSuperBundle b = compute_bounds(spec, opts);
        runs.push_back(spec.with_lambda(0.5 * b.lambda0));
        runs.push_back(spec.with_lambda(b.lambda0));
    }
    int converged = 0;
    for (const ProblemSpec& spec : runs) {
        std::vector<double> prev;
        double worst = 0.0;
        const BranchPoint pt = monotone_iterate(spec, opts, nullptr, [&](int, std::span<const double> u) {
            if (!prev.empty()) {
                const double s = sup_norm(u);
                for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, (prev[i] - u[i]) / s);
            }
            prev.assign(u.begin(), u.end());
        });
        if (pt.status != SolveStatus::Converged) continue;
        ++converged;
        std::ostringstream s;
        s << "lambda=" << spec.lambda << " p=" << spec.p << " violation " << worst;
        c.expect(worst <= 1e-8 && pt.monotone_violation <= 1e-8, s.str());
    }
    c.expect(converged == static_cast<int>(runs.size()), "all chains below lambda0 converge");
}

void minimal_branch(Checks& c) {
    const SolverOptions opts;
    const MeshPtr m = build_mesh(1, 256);
    const std::vector<double> lambdas{1, 2, 3, 4, 5, 6, 7};
    const auto pts = sweep_minimal_branch(s0(m), lambdas, opts);
    c.expect(pts.size() == lambdas.size(), "sweep size");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string at = "lambda=" + std::to_string(pts[i].lambda);
        c.expect(pts[i].status == SolveStatus::Converged, at + " converged");
        if (pts[i].status != SolveStatus::Converged) continue;
        c.expect(pts[i].energy < 0.0, at + " E < 0");
        if (i > 0) c.expect(pts[i].sup_norm > pts[i - 1].sup_norm, at + " sup-norm increases");
        const IdentityReport id = check_identities(pts[i].solution, s0(m, pts[i].lambda));
        c.expect(id.energy_negative, at + " energy identity");
        c.expect(id.testing_ok, at + " testing identity");
        c.expect(id.stability_ok, at + " stability inequality");
        c.expect(id.balance_ok, at + " balance inequality");
    }
}

void minus_problem(Checks& c) {
    const SolverOptions opts;
    const MeshPtr m = build_mesh(1, 256);
    const ProblemSpec base = s0(m, 1.0, Sign::Minus);
    const LevelResult level = compute_Lambda(base, opts);
    c.expect(level.report.status == SolveStatus::Converged, "Lambda minimization converged");
    const double big = level.Lambda;
    for (double lambda : {1.0, 5.0, big + 3.0})
        c.near(energy_F(level.report.minimizer, base.with_lambda(lambda)), big - lambda, 1e-6,
               "F(v_Lambda) at lambda=" + std::to_string(lambda));

    const LambdaStarEstimate e = estimate_lambda_star_minus(base, opts, 1e-3, &level);
    c.expect(e.estimate <= big, "lambda*- <= Lambda");

    const ProblemSpec above = base.with_lambda(big + 1.0);
    const MinimizeReport r = minimize_F(above, default_initial(above), opts);
    c.expect(r.status == SolveStatus::Converged, "minimizer above Lambda converged");
    c.expect(r.value < -opts.tol_energy, "minimizer above Lambda nontrivial");
    c.expect(interior_positive(r.minimizer), "minimizer above Lambda strictly positive");
    const double res = residual_norm(*m, weak_residual(r.minimizer, above, opts));
    std::ostringstream s;
    s << "weak residual above Lambda " << res;
    c.expect(res <= opts.tol_newton, s.str());

    const ProblemSpec below = base.with_lambda(0.5 * e.estimate);
    const MinimizeReport t = minimize_F(below, default_initial(below), opts);
    c.expect(std::abs(t.value) <= opts.tol_energy, "trivial minimizer at half the threshold");
}

void scale_covariance(Checks& c) {
    const SolverOptions opts;
    const MeshPtr m = build_mesh(1, 256);
    const LambdaStarEstimate base = estimate_lambda_star_plus(s0(m), opts);
    for (double factor : {2.0, 5.0}) {
        ProblemSpec scaled = s0(m);
        scaled.k = scaled.k.scaled(factor);
        for (double lambda : {1.0, 5.0}) {
            const BranchPoint a = monotone_iterate(s0(m, lambda), opts);
            const BranchPoint b = monotone_iterate(scaled.with_lambda(lambda / factor), opts);
            c.expect(a.status == SolveStatus::Converged && b.status == SolveStatus::Converged, "scaled solves converge");
            std::ostringstream s;
            s << "c=" << factor << " lambda=" << lambda << " solution change " << max_abs_diff(a.solution, b.solution);
            c.expect(max_abs_diff(a.solution, b.solution) <= 10.0 * opts.tol_newton, s.str());
        }
        const LambdaStarEstimate e = estimate_lambda_star_plus(scaled, opts);
        c.rel(factor * e.estimate, base.estimate, 5e-3, "lambda*+ scaling c=" + std::to_string(factor));
    }
}

void picone(Checks& c) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d(0.05, 1.0);
    const MeshPtr m = build_mesh(1, 64);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double p = 1.1 + 0.03 * trial;
        GridFunction u(m), v(m);
        for (int i : m->interior_nodes()) {
            u[i] = d(rng);
            v[i] = d(rng);
        }
        worst = std::min(worst, picone_R(u, v, p).pointwise_min);
    }
    std::ostringstream s;
    s << "random pairs min " << worst;
    c.expect(worst >= -1e-12, s.str());
    const GridFunction v = solve_torsion(m, 2.0, SolverOptions{});
    for (double p : {1.5, 2.0, 3.0}) {
        const PiconeResult r = picone_R(2.0 * v, v, p);
        c.expect(std::abs(r.pointwise_min) <= 1e-12 && std::abs(r.integral) <= 1e-12,
                 "R vanishes for u = 2v at p=" + std::to_string(p));
    }
}

void oracle_equivalence(Checks& c) {
    const SolverOptions opts;
    const MeshPtr m = build_mesh(1, 256);
    constexpr int fine = 4096;
    auto compare = [&](const std::string& name, const GridFunction& coarse, const std::vector<double>& ref) {
        if (ref.empty()) {
            c.expect(false, name + ": oracle failed");
            return;
        }
        const double d = oracle::relative_sup_difference(coarse.vector(), ref);
        std::ostringstream s;
        s << name << " relative sup difference " << d;
        c.expect(d <= 1e-3, s.str());
    };
    const std::vector<double> ones(fine + 1, 1.0);
    compare("torsion p=2", solve_torsion(m, 2.0, opts), oracle::load_solve(ones, 2.0));
    compare("torsion p=3", solve_torsion(m, 3.0, opts), oracle::load_solve(ones, 3.0));
    compare("concave", solve_concave(1.0, WeightField::constant(m, 1.0), 0.5, 2.0, opts),
            oracle::concave(fine, 2.0, 0.5, 1.0, unit));

    const std::function<double(double)> kx = [](double x) { return 1.0 + 0.5 * x; };
    compare("concave p=3 affine weight", solve_concave(2.0, WeightField::affine(m, 1.0, 0.5), 1.0, 3.0, opts),
            oracle::concave(fine, 3.0, 1.0, 2.0, kx));

    for (double lambda : {1.0, 5.0}) {
        const BranchPoint pt = monotone_iterate(s0(m, lambda), opts);
        c.expect(pt.status == SolveStatus::Converged, "plus converged");
        compare("plus lambda=" + std::to_string(lambda), pt.solution,
                oracle::minimal_plus(fine, 2.0, 0.5, 3.0, lambda, unit, unit));
    }
    ProblemSpec cubic{3.0, 1.0, 3.5, 2.0, Sign::Plus, WeightField::constant(m, 1.0), WeightField::constant(m, 1.0)};
    const BranchPoint pc = monotone_iterate(cubic, opts);
    c.expect(pc.status == SolveStatus::Converged, "plus p=3 converged");
    compare("plus p=3", pc.solution, oracle::minimal_plus(fine, 3.0, 1.0, 3.5, 2.0, unit, unit));

    for (double lambda : {1.0, 20.0, 50.0}) {
        const ProblemSpec spec = s0(m, lambda, Sign::Minus);
        const MinimizeReport r = minimize_F(spec, default_initial(spec), opts);
        c.expect(r.status == SolveStatus::Converged, "minus converged");
        compare("minus lambda=" + std::to_string(lambda), r.minimizer,
                oracle::positive_minus_p2(fine, 0.5, 3.0, lambda));
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Checks&)>>> criteria{
        {"closed-form torsion", torsion_closed_forms},
        {"first eigenvalues", eigenvalues},
        {"standard constants", constants},
        {"threshold sandwich", sandwich},
        {"monotone chain", monotone_chain},
        {"minimal branch", minimal_branch},
        {"minus problem", minus_problem},
        {"scale covariance", scale_covariance},
        {"picone nonnegativity", picone},
        {"oracle equivalence", oracle_equivalence},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checks checks;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(checks);
        } catch (const std::exception& e) {
            checks.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char budget[64];
        std::snprintf(budget, sizeof budget, "%.1fs", secs);
        checks.expect(secs <= kTimeBudget, std::string("runtime ") + budget + " over budget");
        const bool ok = checks.failures().empty();
        failed += ok ? 0 : 1;
        std::printf("%s criterion %zu (%s) %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), budget);
        for (const std::string& f : checks.failures()) std::printf("    %s\n", f.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
