#pragma once

#include "plcc/plap.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace plcc {

enum class SolveStatus { Converged, Diverged, Stagnated };

std::string_view to_string(SolveStatus s);

/// Full nodal residual (boundary entries ignored).
using ResidualMap = std::function<std::vector<double>(std::span<const double>)>;
/// Jacobian on interior unknowns.
using JacobianMap = std::function<SparseMatrix(std::span<const double>)>;

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 80;
    /// Sup-norm growth over the reference beyond which the run counts as diverged.
    double blowup = std::numeric_limits<double>::infinity();
    /// Reference sup-norm for blowup; sup of the initial iterate when <= 0.
    double blowup_reference = 0.0;
    /// Clip iterates at zero (fractional powers downstream).
    bool project_nonnegative = true;
    /// When the line search cannot reduce the residual any more, accept the
    /// iterate if its residual is already below this (round-off floor).
    double accept_floor = 0.0;
};

struct NewtonResult {
    std::vector<double> u;
    SolveStatus status = SolveStatus::Stagnated;
    int iterations = 0;
    double residual = 0.0;
    /// Residual sup-norm after every accepted step (first entry: initial).
    std::vector<double> residual_history;
    /// Residual 2-norm (line-search merit) after every accepted step.
    std::vector<double> merit_history;
};

/// Damped Newton with backtracking on the residual 2-norm.
NewtonResult newton_engine(const Mesh& mesh, std::vector<double> initial, const ResidualMap& residual,
                           const JacobianMap& jacobian, const NewtonOptions& opts);

/// Solves J x = rhs; LDL^T first, sparse LU as fallback. nullopt if both fail.
std::optional<Eigen::VectorXd> solve_linear(const SparseMatrix& j, const Eigen::VectorXd& rhs);

}  // namespace plcc
