#include "plcc/branch.hpp"

#include "plcc/errors.hpp"
#include "plcc/kernels.hpp"
#include "plcc/nlsolve.hpp"
#include "plcc/plap.hpp"
#include "plcc/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace plcc {

namespace {

BranchPoint finish(const ProblemSpec& spec, const SolverOptions& opts, std::vector<double> u, SolveStatus status,
                   int iterations, double violation, bool polished) {
    BranchPoint out;
    out.lambda = spec.lambda;
    out.solution = GridFunction(spec.mesh_ptr(), std::move(u));
    out.sup_norm = sup_norm(out.solution);
    out.energy = std::isfinite(out.sup_norm) ? energy_E(out.solution, spec) : out.sup_norm;
    out.residual = std::isfinite(out.sup_norm) ? residual_norm(spec.mesh(), weak_residual(out.solution, spec, opts))
                                               : out.sup_norm;
    out.iterations = iterations;
    out.status = status;
    out.monotone_violation = violation;
    out.polished = polished;
    return out;
}

}  // namespace

BranchPoint monotone_iterate(const ProblemSpec& spec, const SolverOptions& opts, const GridFunction* start,
                             const IterateObserver& observer) {
    validate(spec);
    if (spec.sign != Sign::Plus) throw InvalidSpec("the monotone iteration applies to the + problem");
    const Mesh& mesh = spec.mesh();
    const auto& kern = kernels::active();

    GridFunction w = start != nullptr ? *start : solve_concave(spec.lambda, spec.k, spec.q, spec.p, opts);
    require_same_mesh(w.mesh(), mesh);
    const double sup0 = sup_norm(w);
    if (!(sup0 > 0.0)) throw DomainError("monotone iteration needs a nontrivial starting field");
    const double limit = opts.blowup * sup0;

    std::vector<double> u = w.vector();
    if (observer) observer(0, u);
    std::vector<double> b = rhs_load(u, spec);
    double violation = 0.0;
    double polish_below = opts.tol_mono;

    NewtonOptions nopts = polish_newton_options(opts);
    nopts.blowup = opts.blowup;
    nopts.blowup_reference = sup0;

    for (int it = 1; it <= opts.max_mono; ++it) {
        std::vector<double> next;
        try {
            next = solve_load_vector(mesh, b, spec.p, opts, u);
        } catch (const NonConvergence& e) {
            const double s = sup_norm(e.last_iterate());
            const auto st = (!std::isfinite(s) || s > limit) ? SolveStatus::Diverged : SolveStatus::Stagnated;
            return finish(spec, opts, u, st, it, violation, false);
        }
        const double s = kern.max_abs(next.data(), next.size());
        if (!std::isfinite(s) || s > limit) return finish(spec, opts, next, SolveStatus::Diverged, it, violation, false);

        const double drop = -kern.min_diff(next.data(), u.data(), next.size());
        violation = std::max(violation, drop / s);

        std::vector<double> delta = next;
        kern.axpy(-1.0, u.data(), delta.data(), delta.size());
        const double increment = kern.max_abs(delta.data(), delta.size()) / s;

        u = std::move(next);
        if (observer) observer(it, u);
        b = rhs_load(u, spec);
        auto r = plap_apply(mesh, u, spec.p, opts.effective_eps(mesh));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
        if (residual_norm(mesh, r) <= opts.tol_newton)
            return finish(spec, opts, u, SolveStatus::Converged, it, violation, false);

        if (increment <= polish_below) {
            ResidualMap res = [&](std::span<const double> z) { return weak_residual(z, spec, opts); };
            JacobianMap jac = [&](std::span<const double> z) { return jacobian(z, spec, opts); };
            NewtonResult nr = newton_engine(mesh, u, res, jac, nopts);
            if (nr.status == SolveStatus::Converged) {
                const double below = -kern.min_diff(nr.u.data(), u.data(), u.size());
                if (below <= 1e-8 * sup_norm(nr.u))
                    return finish(spec, opts, std::move(nr.u), SolveStatus::Converged, it, violation, true);
            }
            polish_below *= 0.1;
        }
    }
    return finish(spec, opts, u, SolveStatus::Stagnated, opts.max_mono, violation, false);
}

std::vector<BranchPoint> sweep_minimal_branch(const ProblemSpec& spec, std::span<const double> lambdas,
                                              const SolverOptions& opts) {
    std::vector<double> sorted(lambdas.begin(), lambdas.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<BranchPoint> out;
    out.reserve(sorted.size());
    for (double l : sorted) out.push_back(monotone_iterate(spec.with_lambda(l), opts));
    return out;
}

LambdaStarEstimate estimate_lambda_star_plus(const ProblemSpec& spec, const SolverOptions& opts, double rel_width,
                                             const SubSuperBundle* bounds) {
    validate(spec);
    const SubSuperBundle b = bounds != nullptr ? *bounds : compute_bounds(spec, opts);
    if (!b.lambda_prime) throw InvalidSpec("lambda' is required");

    LambdaStarEstimate out;
    out.sign = Sign::Plus;
    out.lambda0 = b.lambda0;
    out.lambda_prime = *b.lambda_prime;
    if (!(out.lambda0 < out.lambda_prime))
        throw InvariantViolation("lambda0 = " + std::to_string(out.lambda0) + " is not below lambda' = " +
                                 std::to_string(out.lambda_prime));

    auto feasible = [&](double lambda) {
        SolveStatus st = monotone_iterate(spec.with_lambda(lambda), opts).status;
        if (st == SolveStatus::Stagnated) {
            SolverOptions more = opts;
            more.max_mono *= 4;
            st = monotone_iterate(spec.with_lambda(lambda), more).status;
            if (st == SolveStatus::Stagnated) out.low_confidence = true;
        }
        const bool ok = st == SolveStatus::Converged;
        out.history.push_back({lambda, ok});
        return ok;
    };

    double lo = out.lambda0;
    double hi = out.lambda_prime;
    if (!feasible(lo)) out.low_confidence = true;
    if (feasible(hi)) {
        out.low_confidence = true;
        lo = hi;
    }
    while ((hi - lo) > rel_width * hi) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            lo = mid;
        else
            hi = mid;
    }
    out.lower = lo;
    out.upper = hi;
    out.estimate = 0.5 * (lo + hi);
    return out;
}

}  // namespace plcc
