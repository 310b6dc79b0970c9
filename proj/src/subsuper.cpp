#include "plcc/subsuper.hpp"

#include "plcc/eigenpair.hpp"
#include "plcc/errors.hpp"
#include "plcc/nlsolve.hpp"
#include "plcc/plap.hpp"
#include "plcc/quadrature.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace plcc {

namespace {

constexpr int kBrentBits = std::numeric_limits<double>::digits / 2;

// Brent on s = log t for a map that is convex in s (a sum of exponentials).
template <class F>
ScalarMinimum log_minimize(F&& f, double center) {
    double lo = center - 40.0;
    double hi = center + 40.0;
    auto g = [&](double s) { return f(std::exp(s)); };
    boost::uintmax_t iters = 500;
    const auto [s, value] = boost::math::tools::brent_find_minima(g, lo, hi, kBrentBits, iters);
    return {std::exp(s), value};
}

}  // namespace

double supersolution_condition(double lambda, double t, double A, double B, double p, double q, double sigma) {
    const double a = (q - p + 1.0) / (p - 1.0);
    const double b = (sigma - p + 1.0) / (p - 1.0);
    return lambda * A * std::pow(t, a) + B * std::pow(t, b);
}

ScalarMinimum minimize_supersolution_condition(double lambda, double A, double B, double p, double q, double sigma) {
    // Stationary point in closed form gives a good bracket center.
    const double guess = std::pow(lambda * A / B * (p - 1.0 - q) / (sigma - p + 1.0), (p - 1.0) / (sigma - q));
    return log_minimize([&](double t) { return supersolution_condition(lambda, t, A, B, p, q, sigma); },
                        std::log(guess));
}

double SubSuperBundle::M(double lambda, double p, double q, double sigma) const {
    return C * std::pow(lambda, (p - 1.0) / (sigma - q));
}

SubSuperBundle compute_constants(const ProblemSpec& spec, const GridFunction& v) {
    validate(spec);
    require_same_mesh(v.mesh(), spec.mesh());
    const double p = spec.p;
    const double q = spec.q;
    const double sigma = spec.sigma;
    const double vs = sup_norm(v);
    if (!(vs > 0.0) || !std::isfinite(vs)) throw InvalidSpec("torsion function must be positive and finite");

    SubSuperBundle out;
    out.A = spec.k.ess_sup() * std::pow(vs, q);
    out.B = spec.h.ess_sup() * std::pow(vs, sigma);
    out.C = std::pow(out.A / out.B * (p - 1.0 - q) / (sigma - p + 1.0), (p - 1.0) / (sigma - q));
    const double a = (q - p + 1.0) / (p - 1.0);
    const double b = (sigma - p + 1.0) / (p - 1.0);
    const double base = out.A * std::pow(out.C, a) + out.B * std::pow(out.C, b);
    out.lambda0 = std::pow(base, -(sigma - q) / (sigma - p + 1.0));
    out.lambda0_printed = sigma == p ? std::numeric_limits<double>::quiet_NaN()
                                     : std::pow(base, -(sigma - p + 1.0) / (sigma - p));
    out.lambda0_check = supersolution_condition(out.lambda0, out.M(out.lambda0, p, q, sigma), out.A, out.B, p, q, sigma);
    out.lambda0_scalar_min = minimize_supersolution_condition(out.lambda0, out.A, out.B, p, q, sigma);
    out.m = std::min(spec.k.ess_inf(), spec.h.ess_inf());
    return out;
}

double nonexistence_level(double lambda_prime, double m, double p, double q, double sigma) {
    const double a = q - p + 1.0;
    const double b = sigma - p + 1.0;
    auto f = [&](double t) { return m * (lambda_prime * std::pow(t, a) + std::pow(t, b)); };
    const double guess = std::pow(lambda_prime * (p - 1.0 - q) / b, 1.0 / (sigma - q));
    return log_minimize(f, std::log(guess)).value;
}

double lambda_prime(double m, double lambda1, double p, double q, double sigma) {
    if (!(m > 0.0) || !(lambda1 > 0.0)) throw InvalidSpec("lambda' needs m > 0 and lambda1 > 0");
    // The level is increasing in lambda' and vanishes as lambda' -> 0; in closed form it is
    // m c lambda'^((sigma-p+1)/(sigma-q)) for a constant c, which seeds the bracket.
    auto g = [&](double lp) { return nonexistence_level(lp, m, p, q, sigma) - lambda1; };
    const double c = nonexistence_level(1.0, m, p, q, sigma);
    double guess = std::pow(lambda1 / c, (sigma - q) / (sigma - p + 1.0));
    double lo = guess * 0.5;
    double hi = guess * 2.0;
    while (g(lo) > 0.0) lo *= 0.5;
    while (g(hi) < 0.0) hi *= 2.0;
    boost::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(50),
                                                          iters);
    return 0.5 * (a + b);
}

GridFunction build_subsolution(const ProblemSpec& spec, const GridFunction& w, double eps) {
    require_same_mesh(w.mesh(), spec.mesh());
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidSpec("sub-solution scale must lie in (0, 1]");
    return std::pow(eps, 1.0 / (spec.p - 1.0)) * w;
}

GridFunction build_supersolution(const ProblemSpec& spec, const GridFunction& v, const SubSuperBundle& bundle) {
    require_same_mesh(v.mesh(), spec.mesh());
    const double m = bundle.M(spec.lambda, spec.p, spec.q, spec.sigma);
    return std::pow(m, 1.0 / (spec.p - 1.0)) * v;
}

namespace {

double signed_margin(const GridFunction& u, const ProblemSpec& spec, const SolverOptions& opts, double sign) {
    const Mesh& mesh = u.mesh();
    const auto a = plap_apply(mesh, u.values(), spec.p, opts.effective_eps(mesh));
    const auto b = rhs_load(u.values(), spec);
    double m = std::numeric_limits<double>::infinity();
    for (int i : mesh.interior_nodes()) m = std::min(m, sign * (b[i] - a[i]));
    return m;
}

}  // namespace

double subsolution_margin(const GridFunction& u, const ProblemSpec& spec, const SolverOptions& opts) {
    return signed_margin(u, spec, opts, 1.0);
}

double supersolution_margin(const GridFunction& u, const ProblemSpec& spec, const SolverOptions& opts) {
    return signed_margin(u, spec, opts, -1.0);
}

SubSuperPair build_pair(const ProblemSpec& spec, const GridFunction& v, const GridFunction& w,
                        const SubSuperBundle& bundle, const SolverOptions& opts, double eps) {
    SubSuperPair out{build_subsolution(spec, w, eps), build_supersolution(spec, v, bundle)};
    out.M = bundle.M(spec.lambda, spec.p, spec.q, spec.sigma);
    out.guaranteed = spec.lambda <= bundle.lambda0;
    auto below = [](const GridFunction& lo, const GridFunction& hi) {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (lo[i] > hi[i]) return false;
        return true;
    };
    for (int halvings = 0; halvings < 200 && !below(out.sub, out.super); ++halvings) {
        eps *= 0.5;
        out.sub = build_subsolution(spec, w, eps);
    }
    out.eps = eps;
    out.ordered = below(out.sub, out.super);
    out.sub_margin = subsolution_margin(out.sub, spec, opts);
    out.super_margin = supersolution_margin(out.super, spec, opts);
    return out;
}

SubSuperBundle compute_bounds(const ProblemSpec& spec, const SolverOptions& opts) {
    const GridFunction v = solve_torsion(spec.mesh_ptr(), spec.p, opts);
    SubSuperBundle out = compute_constants(spec, v);
    const EigenPair eig = first_eigenpair(spec.mesh_ptr(), spec.p, opts);
    out.lambda1 = eig.lambda1;
    out.lambda_prime = lambda_prime(out.m, eig.lambda1, spec.p, spec.q, spec.sigma);
    return out;
}

}  // namespace plcc
