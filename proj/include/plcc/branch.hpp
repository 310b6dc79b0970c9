#pragma once

#include "plcc/newton.hpp"
#include "plcc/subsuper.hpp"

#include <functional>
#include <span>
#include <vector>

namespace plcc {

/// One point of the minimal positive branch of the + problem.
struct BranchPoint {
    double lambda = 0.0;
    GridFunction solution;
    double sup_norm = 0.0;
    double energy = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::Stagnated;
    /// Sup-norm of the weak residual at the returned iterate.
    double residual = 0.0;
    /// Largest decrease u_{n-1} - u_n seen along the iteration, relative to sup u_n.
    double monotone_violation = 0.0;
    /// The final iterate came from a Newton polish of a monotone iterate.
    bool polished = false;
};

/**
 * Monotone iteration u_n = S(lambda k u_{n-1}^q + h u_{n-1}^sigma) for the + problem,
 * started at the concave solution w. Converged when the weak residual drops below
 * tol_newton; once the relative increment is below tol_mono a Newton polish on the
 * full problem is tried and kept if it converges above the current iterate.
 * Diverged when sup u_n exceeds blowup * sup w; Stagnated after max_mono sweeps.
 * `start` replaces w as u_0 (it should be a sub-solution); `observer` sees every u_n.
 */
using IterateObserver = std::function<void(int, std::span<const double>)>;

BranchPoint monotone_iterate(const ProblemSpec& spec, const SolverOptions& opts, const GridFunction* start = nullptr,
                             const IterateObserver& observer = {});

/// monotone_iterate at every lambda, returned sorted by lambda.
std::vector<BranchPoint> sweep_minimal_branch(const ProblemSpec& spec, std::span<const double> lambdas,
                                              const SolverOptions& opts);

struct LambdaStarEstimate {
    Sign sign = Sign::Plus;
    /// Bracket [lower, upper] and its midpoint.
    double lower = 0.0;
    double upper = 0.0;
    double estimate = 0.0;
    double lambda0 = 0.0;
    double lambda_prime = 0.0;
    /// Minimization level Lambda (the - problem only).
    double Lambda = 0.0;
    /// Set when a probe stagnated even with an enlarged budget, or the bracket was degenerate.
    bool low_confidence = false;
    struct Probe {
        double lambda;
        bool feasible;
    };
    std::vector<Probe> history;
};

/**
 * Bisection of the minimal-branch existence threshold inside [lambda0, lambda'] down
 * to relative width rel_width. A probe is feasible when the monotone iteration
 * converges; a stagnated probe is retried once with four times the budget.
 * Throws InvariantViolation if lambda0 >= lambda'.
 */
LambdaStarEstimate estimate_lambda_star_plus(const ProblemSpec& spec, const SolverOptions& opts,
                                             double rel_width = 1e-3, const SubSuperBundle* bounds = nullptr);

}  // namespace plcc
