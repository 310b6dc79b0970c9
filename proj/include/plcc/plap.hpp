#pragma once

#include "plcc/problem.hpp"

#include <Eigen/Sparse>

#include <span>
#include <vector>

namespace plcc {

using SparseMatrix = Eigen::SparseMatrix<double>;

/**
 * Discrete weak p-Laplacian. Entry i is
 *   sum over cells of (|grad u|^2 + eps^2)^((p-2)/2) grad u . grad phi_i |cell|
 * for interior nodes; boundary entries are returned as 0.
 */
std::vector<double> plap_apply(const Mesh& mesh, std::span<const double> u, double p, double eps);
std::vector<double> plap_apply(const GridFunction& u, double p, double eps);

/// b_i = integral of coeff * w * u^r * phi_i over the quadrature points; u >= 0.
std::vector<double> power_load(const Mesh& mesh, std::span<const double> u, const WeightField& w,
                               double coeff, double r);

/// Load of the right-hand side lambda k u^q +/- h u^sigma. Throws DomainError on negative nodes.
std::vector<double> rhs_load(std::span<const double> u, const ProblemSpec& spec);

/// plap_apply(u) - rhs_load(u), boundary entries 0. Throws DomainError on negative nodes.
std::vector<double> weak_residual(std::span<const double> u, const ProblemSpec& spec, const SolverOptions& opts);
std::vector<double> weak_residual(const GridFunction& u, const ProblemSpec& spec, const SolverOptions& opts);

/// Sup-norm over interior entries of a nodal residual vector.
double residual_norm(const Mesh& mesh, std::span<const double> r);

/// Gradient energy (1/p) * integral of |grad u|^p, unregularized.
double gradient_energy(const Mesh& mesh, std::span<const double> u, double p);

/// E(u) = (1/p)|grad u|^p - lambda/(q+1) k|u|^(q+1) - 1/(sigma+1) h|u|^(sigma+1)
double energy_E(std::span<const double> u, const ProblemSpec& spec);
double energy_E(const GridFunction& u, const ProblemSpec& spec);

/// F(u) = (1/p)|grad u|^p - lambda/(q+1) k|u|^(q+1) + 1/(sigma+1) h|u|^(sigma+1)
double energy_F(std::span<const double> u, const ProblemSpec& spec);
double energy_F(const GridFunction& u, const ProblemSpec& spec);

/// Jacobian of plap_apply restricted to interior unknowns (symmetric positive definite for eps > 0).
SparseMatrix plap_jacobian(const Mesh& mesh, std::span<const double> u, double p, double eps);

/// sum over quadrature points of weight * coef_qp * phi_a phi_b, interior unknowns.
SparseMatrix weighted_mass(const Mesh& mesh, std::span<const double> coef_qp);

/**
 * Jacobian of weak_residual on interior unknowns:
 *   plap_jacobian - mass(lambda q k u^(q-1) +/- sigma h u^(sigma-1)).
 * Powers with negative exponent use u clamped below at 1e-10 * sup|u|.
 */
SparseMatrix jacobian(std::span<const double> u, const ProblemSpec& spec, const SolverOptions& opts);

/// Quadrature values of the clamped derivative coefficient c * w * r * u^(r-1).
std::vector<double> power_derivative_qp(const Mesh& mesh, std::span<const double> u, const WeightField& w,
                                        double coeff, double r);

// Interior <-> full nodal vector helpers.
Eigen::VectorXd restrict_interior(const Mesh& mesh, std::span<const double> full);
void scatter_interior(const Mesh& mesh, const Eigen::VectorXd& interior, std::span<double> full);

}  // namespace plcc
