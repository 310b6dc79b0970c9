#pragma once

#include "plcc/problem.hpp"

namespace plcc {

/// Picone remainder R(u, v) = |grad u|^p - |grad v|^(p-2) grad v . grad(u^p / v^(p-1)).
struct PiconeResult {
    /// Smallest value over all quadrature points.
    double pointwise_min = 0.0;
    double integral = 0.0;
};

/// Evaluated on the P1 interpolants at quadrature points; u >= 0, v > 0 there.
/// Throws DomainError if v vanishes at a quadrature point or u is negative.
PiconeResult picone_R(const GridFunction& u, const GridFunction& v, double p);

struct ComparisonResult {
    /// plap(u) <= plap(v) at every interior node (up to premise_tol).
    bool premise = false;
    /// u <= v + conclusion_tol at every node.
    bool conclusion = false;
    /// max_i (plap(u) - plap(v))_i over interior nodes.
    double premise_gap = 0.0;
    /// max_i (u - v)_i.
    double max_excess = 0.0;
};

/// Checks the discrete comparison principle for one pair (u, v), both zero on the boundary.
ComparisonResult check_comparison(const GridFunction& u, const GridFunction& v, double p,
                                  const SolverOptions& opts, double premise_tol = 0.0,
                                  double conclusion_tol = 1e-10);

/// Integral identities and inequalities satisfied by a critical point u of E (the + problem).
struct IdentityReport {
    /// u is not identically zero.
    bool nontrivial = false;
    double E = 0.0;
    /// integral |grad u|^p, lambda integral k u^(q+1), integral h u^(sigma+1).
    double gradient_term = 0.0;
    double k_term = 0.0;
    double h_term = 0.0;
    /// Largest of the three terms; tolerances are relative to it.
    double scale = 0.0;
    /// E(u) < 0.
    bool energy_negative = false;
    /// gradient_term - k_term - h_term.
    double testing_residual = 0.0;
    bool testing_ok = false;
    /// gradient_term - q/(p-1) k_term - sigma/(p-1) h_term.
    double stability = 0.0;
    /// gradient_term - q/(p-1) k_term + sigma/(p-1) h_term.
    double stability_plus = 0.0;
    bool stability_ok = false;
    /// (p-1-q) k_term - (sigma+1-p) h_term.
    double balance = 0.0;
    bool balance_ok = false;
};

/// Reports the testing identity, the stability inequality in both forms and the
/// balance inequality, each with tolerance 1e-6 relative to scale.
IdentityReport check_identities(const GridFunction& u, const ProblemSpec& spec);

/// Smallest one-sided inward difference quotient (u_inner - u_boundary) / distance over
/// the boundary nodes; the inner node is the nearest interior node (diagonal at corners).
double boundary_slope_check(const GridFunction& u);

/// u > 0 at every interior node.
bool interior_positive(const GridFunction& u);

}  // namespace plcc
