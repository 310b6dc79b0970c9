#pragma once

#include "plcc/branch.hpp"
#include "plcc/newton.hpp"

#include <vector>

namespace plcc {

struct MinimizeReport {
    GridFunction minimizer;
    double value = 0.0;
    /// Sup-norm of the (projected) energy gradient at the minimizer.
    double gradient_norm = 0.0;
    /// |constraint - 1| for constrained runs, 0 otherwise.
    double constraint_residual = 0.0;
    int steps = 0;
    SolveStatus status = SolveStatus::Stagnated;
    /// Smallest energy evaluated anywhere during the run, trial points included.
    double min_evaluated = 0.0;
    std::vector<double> value_history;
};

/// Nodal gradient of the discrete F (unregularized), boundary entries 0; u >= 0.
std::vector<double> energy_F_gradient(std::span<const double> u, const ProblemSpec& spec);

/// sin(pi x)[sin(pi y)] on the mesh extent, scaled to minimize F along the ray.
GridFunction default_initial(const ProblemSpec& spec);

/**
 * Minimizes F_lambda over nonnegative fields by preconditioned gradient descent:
 * metric plap_jacobian(u) + sigma h u^(sigma-1) mass, Armijo backtracking, each
 * trial projected by u -> |u|. Converged when the gradient sup-norm is below
 * tol_newton and the relative step below 1e-6.
 */
MinimizeReport minimize_F(const ProblemSpec& spec, const GridFunction& initial, const SolverOptions& opts);

/// Lower bound m_F for F_lambda from Hoelder and the one-dimensional map C2 t^(sigma+1) - C1 t^(q+1).
double coercivity_floor(const ProblemSpec& spec);

struct LevelResult {
    double Lambda = 0.0;
    MinimizeReport report;
};

/**
 * Lambda = inf { (1/p)|grad v|^p + 1/(sigma+1) h|v|^(sigma+1) : integral k|v|^(q+1) = q+1 }
 * by projected gradient descent on the constraint manifold (tangent direction in the
 * preconditioned metric, retraction by rescaling). spec.lambda is ignored.
 */
LevelResult compute_Lambda(const ProblemSpec& spec, const SolverOptions& opts, const GridFunction* initial = nullptr);

/**
 * Minimizes F_lambda over { u >= lower } (lower = 0 on the boundary, lower >= 0).
 * Two-metric projection: the preconditioned step is taken on the free set only and
 * trial points are clipped to the obstacle. Throws InvalidObstacle.
 */
MinimizeReport obstacle_minimize(const ProblemSpec& spec, const GridFunction& lower, const SolverOptions& opts,
                                 const GridFunction* initial = nullptr);

/**
 * Bisection for the threshold below which the minimum of F_lambda is not detectably
 * negative (F < -tol_energy), searched in (0, Lambda] to relative width rel_width.
 */
LambdaStarEstimate estimate_lambda_star_minus(const ProblemSpec& spec, const SolverOptions& opts,
                                              double rel_width = 1e-3, const LevelResult* level = nullptr);

}  // namespace plcc
