#pragma once

#include "plcc/problem.hpp"

#include <optional>

namespace plcc {

/// Map t -> lambda*A*t^((q-p+1)/(p-1)) + B*t^((sigma-p+1)/(p-1)); the super-solution
/// condition is that it is <= 1 at t = M.
double supersolution_condition(double lambda, double t, double A, double B, double p, double q, double sigma);

struct ScalarMinimum {
    double argmin = 0.0;
    double value = 0.0;
};

/// Minimum of supersolution_condition over t > 0 by Brent's method on log t.
ScalarMinimum minimize_supersolution_condition(double lambda, double A, double B, double p, double q, double sigma);

/**
 * The explicit existence/non-existence machinery for the + problem:
 *   A = |k|_inf |v|_inf^q,  B = |h|_inf |v|_inf^sigma,
 *   C = [A/B (p-1-q)/(sigma-p+1)]^((p-1)/(sigma-q)),  M(lambda) = C lambda^((p-1)/(sigma-q)),
 *   lambda0 = (A C^a + B C^b)^(-(sigma-q)/(sigma-p+1)),  a = (q-p+1)/(p-1), b = (sigma-p+1)/(p-1),
 *   m = min(ess inf k, ess inf h),  lambda' from inf_t m(lambda' t^(q-p+1) + t^(sigma-p+1)) = lambda1.
 * lambda0_printed uses the exponent (sigma-p+1)/(sigma-p) in place of (sigma-p+1)/(sigma-q);
 * it is reported for reference only.
 */
struct SubSuperBundle {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double lambda0 = 0.0;
    double lambda0_printed = 0.0;
    /// supersolution_condition at (lambda0, M(lambda0)); 1 by construction.
    double lambda0_check = 0.0;
    /// The same minimum found by direct scalar minimization.
    ScalarMinimum lambda0_scalar_min;
    double m = 0.0;
    std::optional<double> lambda1;
    std::optional<double> lambda_prime;

    double M(double lambda, double p, double q, double sigma) const;
};

/// A, B, C, lambda0 and m for `spec` given the torsion function v. Throws InvalidSpec.
SubSuperBundle compute_constants(const ProblemSpec& spec, const GridFunction& v);

/// inf over t > 0 of m (lambda_prime t^(q-p+1) + t^(sigma-p+1)), by Brent's method on log t.
double nonexistence_level(double lambda_prime, double m, double p, double q, double sigma);

/// Smallest lambda' with nonexistence_level(lambda') = lambda1 (bracketed root find).
double lambda_prime(double m, double lambda1, double p, double q, double sigma);

/// eps^(1/(p-1)) w.
GridFunction build_subsolution(const ProblemSpec& spec, const GridFunction& w, double eps);

/// M^(1/(p-1)) v with M = M(spec.lambda).
GridFunction build_supersolution(const ProblemSpec& spec, const GridFunction& v, const SubSuperBundle& bundle);

/// min_i (rhs_load(u) - plap_apply(u)); >= 0 for a discrete sub-solution.
double subsolution_margin(const GridFunction& u, const ProblemSpec& spec, const SolverOptions& opts);
/// min_i (plap_apply(u) - rhs_load(u)); >= 0 for a discrete super-solution.
double supersolution_margin(const GridFunction& u, const ProblemSpec& spec, const SolverOptions& opts);

/// The ordered pair for one lambda, with its verification.
struct SubSuperPair {
    GridFunction sub;
    GridFunction super;
    double eps = 0.0;
    double M = 0.0;
    double sub_margin = 0.0;
    double super_margin = 0.0;
    /// lambda <= lambda0: the super-solution inequality is guaranteed.
    bool guaranteed = false;
    bool ordered = false;
};

/// Builds sub and super for spec.lambda, halving eps until sub <= super nodewise.
SubSuperPair build_pair(const ProblemSpec& spec, const GridFunction& v, const GridFunction& w,
                        const SubSuperBundle& bundle, const SolverOptions& opts, double eps = 0.5);

/// Everything above from scratch: torsion, eigenpair, constants, lambda'.
SubSuperBundle compute_bounds(const ProblemSpec& spec, const SolverOptions& opts);

}  // namespace plcc
