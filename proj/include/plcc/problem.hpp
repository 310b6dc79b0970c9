#pragma once

#include "plcc/fields.hpp"

#include <string>
#include <vector>

namespace plcc {

/// + selects  -Delta_p u = lambda k u^q + h u^sigma,  - selects  ... - h u^sigma.
enum class Sign { Plus, Minus };

inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

/// One concave-convex Dirichlet problem on a fixed mesh.
struct ProblemSpec {
    double p = 2.0;
    double q = 0.5;
    double sigma = 3.0;
    double lambda = 1.0;
    Sign sign = Sign::Plus;
    WeightField k;
    WeightField h;

    const Mesh& mesh() const noexcept { return k.mesh(); }
    const MeshPtr& mesh_ptr() const noexcept { return k.mesh_ptr(); }

    ProblemSpec with_lambda(double new_lambda) const {
        ProblemSpec s = *this;
        s.lambda = new_lambda;
        return s;
    }
    ProblemSpec with_sign(Sign new_sign) const {
        ProblemSpec s = *this;
        s.sign = new_sign;
        return s;
    }
};

/**
 * Throws InvalidSpec unless p > 1, 0 < q < p-1 < sigma, lambda >= 0 and k, h
 * share the mesh. Returns warnings (currently only sigma >= p* - 1 when p < N).
 */
std::vector<std::string> validate(const ProblemSpec& spec);

struct SolverOptions {
    /// Gradient regularization, divided by the domain diameter before use.
    double eps_reg = 1e-8;
    /// Sup-norm of the discrete weak residual accepted as a solution.
    double tol_newton = 1e-10;
    /// Relative residual for inner load solves (loads normalized to sup 1).
    double tol_inner = 1e-13;
    /// Relative increment of the monotone iteration below which a Newton polish is tried.
    double tol_mono = 1e-7;
    /// Energy threshold for "nontrivial minimizer" decisions.
    double tol_energy = 1e-10;
    int max_newton = 80;
    int max_mono = 5000;
    int max_descent = 4000;
    int max_eigen = 500;
    /// Sup-norm growth factor over the starting iterate treated as blow-up.
    double blowup = 1e4;

    /// Throws InvalidSpec on non-positive tolerances or blowup <= 1.
    void validate() const;

    double effective_eps(const Mesh& mesh) const { return eps_reg / mesh.diameter(); }
};

}  // namespace plcc
