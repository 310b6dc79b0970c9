#pragma once

#include "plcc/newton.hpp"

#include <optional>
#include <span>
#include <vector>

namespace plcc {

/**
 * Solves -Delta_p u = b for a nodal load vector b (as produced by
 * assemble_load), u = 0 on the boundary. The load is normalized to sup-norm 1
 * before the Newton solve and the solution rescaled by s^(1/(p-1)), so
 * tolerances are relative. `warm` is an optional initial guess for u.
 * Throws NonConvergence.
 */
std::vector<double> solve_load_vector(const Mesh& mesh, std::span<const double> b, double p,
                                      const SolverOptions& opts, std::span<const double> warm = {});

/// -Delta_p u = g, g >= 0 not identically zero. Throws DomainError on a bad load.
GridFunction solve_load(const GridFunction& g, double p, const SolverOptions& opts);

/// -Delta_p v = 1.
GridFunction solve_torsion(const MeshPtr& mesh, double p, const SolverOptions& opts);

struct ConcaveSolveInfo {
    int newton_steps = 0;
    int picard_steps = 0;
    bool used_fallback = false;
    double residual = 0.0;
};

/**
 * Unique positive solution w of -Delta_p w = lambda k w^q (0 < q < p-1).
 * Newton from the torsion function scaled to balance the load (or from
 * `initial`); Picard iteration w <- solve_load(lambda k w^q) if Newton stalls.
 */
GridFunction solve_concave(double lambda, const WeightField& k, double q, double p, const SolverOptions& opts,
                           const GridFunction* initial = nullptr, ConcaveSolveInfo* info = nullptr);

/// Residual of the concave problem, boundary entries 0.
std::vector<double> concave_residual(std::span<const double> w, double lambda, const WeightField& k, double q,
                                     double p, const SolverOptions& opts);

/// Newton settings used throughout: drive to round-off, accept below tol_newton.
NewtonOptions polish_newton_options(const SolverOptions& opts);

}  // namespace plcc
