#pragma once

#include "plcc/problem.hpp"

namespace plcc {

/// First Dirichlet eigenpair of -Delta_p; phi normalized to sup-norm 1.
struct EigenPair {
    double lambda1 = 0.0;
    GridFunction phi;
    int iterations = 0;
    /// Sup-norm of plap(phi) - lambda1 * load(phi^(p-1)).
    double residual = 0.0;
    bool converged = false;
};

/// Discrete Rayleigh quotient  integral |grad u|^p / integral |u|^p.
double rayleigh_quotient(const GridFunction& u, double p);

/**
 * Nonlinear inverse power iteration: solve -Delta_p z = phi^(p-1), renormalize,
 * re-estimate by the Rayleigh quotient. Stops once the quotient changes by
 * less than 1e-8 relative and the eigen-residual is below tol_newton * max(1, lambda).
 * Throws NonConvergence after max_eigen sweeps.
 */
EigenPair first_eigenpair(const MeshPtr& mesh, double p, const SolverOptions& opts);

/// Eigen-residual of (lambda, phi), boundary entries 0.
std::vector<double> eigen_residual(const GridFunction& phi, double lambda, double p);

}  // namespace plcc
