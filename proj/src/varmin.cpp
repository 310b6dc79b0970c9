#include "plcc/varmin.hpp"

#include "plcc/errors.hpp"
#include "plcc/kernels.hpp"
#include "plcc/plap.hpp"
#include "plcc/quadrature.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace plcc {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-14;
constexpr double kRelStep = 1e-6;

SparseMatrix stiffness(const Mesh& mesh) {
    const std::vector<double> zero(mesh.num_nodes(), 0.0);
    return plap_jacobian(mesh, zero, 2.0, 0.0);
}

// SPD variable metric: the p-Laplacian Jacobian plus the convex power term, with a
// small multiple of the stiffness matrix so flat regions stay well posed for p > 2.
SparseMatrix metric(std::span<const double> u, const ProblemSpec& spec, const SolverOptions& opts,
                    const SparseMatrix& k) {
    const Mesh& mesh = spec.mesh();
    const double eps = opts.effective_eps(mesh);
    SparseMatrix m = plap_jacobian(mesh, u, spec.p, eps);
    m += weighted_mass(mesh, power_derivative_qp(mesh, u, spec.h, 1.0, spec.sigma));
    const auto grads = cell_gradients(mesh, u);
    double mean = 0.0;
    for (const Point& g : grads) mean += std::pow(g[0] * g[0] + g[1] * g[1] + eps * eps, 0.5 * (spec.p - 2.0));
    mean /= static_cast<double>(grads.size());
    m += (1e-6 * mean) * k;
    return m;
}

std::vector<double> preconditioned(const SparseMatrix& m, const Mesh& mesh, std::span<const double> g) {
    const auto x = solve_linear(m, restrict_interior(mesh, g));
    if (!x) throw NonConvergence("metric solve failed", std::vector<double>(g.begin(), g.end()), false);
    std::vector<double> out(mesh.num_nodes(), 0.0);
    scatter_interior(mesh, *x, out);
    return out;
}

// -H^{-1} g with the exact Hessian when it is positive definite (fast local
// convergence), else -P^{-1} g with the SPD metric. Rows/columns flagged in
// `fixed` (interior numbering) are held at zero.
std::vector<double> descent_direction(std::span<const double> u, const ProblemSpec& spec, const SolverOptions& opts,
                                      const SparseMatrix& k, std::span<const double> g,
                                      const std::vector<bool>* fixed = nullptr) {
    const Mesh& mesh = spec.mesh();
    auto pin = [&](SparseMatrix& m) {
        if (fixed == nullptr) return;
        for (int col = 0; col < m.outerSize(); ++col)
            for (SparseMatrix::InnerIterator it(m, col); it; ++it)
                if ((*fixed)[it.row()] || (*fixed)[it.col()]) it.valueRef() = it.row() == it.col() ? 1.0 : 0.0;
    };
    Eigen::VectorXd rhs = restrict_interior(mesh, g);
    if (fixed != nullptr)
        for (Eigen::Index i = 0; i < rhs.size(); ++i)
            if ((*fixed)[i]) rhs[i] = 0.0;
    std::vector<double> d(mesh.num_nodes(), 0.0);

    SparseMatrix h = jacobian(u, spec, opts);
    pin(h);
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(h);
    if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0) {
        const Eigen::VectorXd x = ldlt.solve(rhs);
        if (x.allFinite() && x.dot(rhs) > 0.0) {
            scatter_interior(mesh, -x, d);
            return d;
        }
    }
    SparseMatrix m = metric(u, spec, opts, k);
    pin(m);
    const auto x = solve_linear(m, rhs);
    if (!x) throw NonConvergence("metric solve failed", std::vector<double>(u.begin(), u.end()), false);
    scatter_interior(mesh, -*x, d);
    return d;
}

// Energy differences this small are round-off; near a minimizer the full step is then
// judged by the gradient instead.
bool within_noise(double trial, double value) {
    return std::abs(trial - value) <= 1e-12 * std::abs(value);
}

double projected_gradient_norm(const Mesh& mesh, std::span<const double> u, std::span<const double> g,
                               const GridFunction& lower, std::vector<bool>* active) {
    const double tol_active = 1e-12 * std::max(kernels::max_abs(u), std::numeric_limits<double>::min());
    double pg = 0.0;
    for (int i : mesh.interior_nodes()) {
        const bool a = u[i] <= lower[i] + tol_active && g[i] > 0.0;
        if (active != nullptr) (*active)[i] = a;
        if (!a) pg = std::max(pg, std::abs(g[i]));
    }
    return pg;
}

double interior_dot(const Mesh& mesh, std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (int i : mesh.interior_nodes()) s += a[i] * b[i];
    return s;
}

void take_abs(std::vector<double>& u) {
    for (double& x : u) x = std::abs(x);
}

// G(v) = (1/p)|grad v|^p + 1/(sigma+1) h|v|^(sigma+1); the constraint c(v) = 1/(q+1) k|v|^(q+1).
double level_energy(const ProblemSpec& spec, const std::vector<double>& v) {
    const GridFunction f(spec.mesh_ptr(), v);
    return gradient_energy(spec.mesh(), v, spec.p) + integrate_weighted_power(f, spec.h, spec.sigma + 1.0) /
                                                         (spec.sigma + 1.0);
}

double level_constraint(const ProblemSpec& spec, const std::vector<double>& v) {
    const GridFunction f(spec.mesh_ptr(), v);
    return integrate_weighted_power(f, spec.k, spec.q + 1.0) / (spec.q + 1.0);
}

GridFunction sine_bump(const MeshPtr& mesh) {
    const Extent e = mesh->extent();
    const int dim = mesh->dimension();
    GridFunction f = GridFunction::from_function(mesh, [&](const Point& x) {
        double s = std::sin(std::numbers::pi * (x[0] - e.x0) / (e.x1 - e.x0));
        if (dim == 2) s *= std::sin(std::numbers::pi * (x[1] - e.y0) / (e.y1 - e.y0));
        return std::max(s, 0.0);
    });
    f.impose_dirichlet_zero();
    return f;
}

}  // namespace

std::vector<double> energy_F_gradient(std::span<const double> u, const ProblemSpec& spec) {
    const Mesh& mesh = spec.mesh();
    auto g = plap_apply(mesh, u, spec.p, 0.0);
    const auto a = power_load(mesh, u, spec.k, spec.lambda, spec.q);
    const auto b = power_load(mesh, u, spec.h, 1.0, spec.sigma);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += b[i] - a[i];
    for (int bnd : mesh.boundary_nodes()) g[bnd] = 0.0;
    return g;
}

GridFunction default_initial(const ProblemSpec& spec) {
    GridFunction bump = sine_bump(spec.mesh_ptr());
    const ProblemSpec minus = spec.with_sign(Sign::Minus);
    auto f = [&](double s) {
        GridFunction t = std::exp(s) * bump;
        return energy_F(t, minus);
    };
    boost::uintmax_t iters = 500;
    const auto [s, value] =
        boost::math::tools::brent_find_minima(f, -60.0, 20.0, std::numeric_limits<double>::digits / 2, iters);
    (void)value;
    return std::exp(s) * bump;
}

MinimizeReport minimize_F(const ProblemSpec& spec, const GridFunction& initial, const SolverOptions& opts) {
    validate(spec);
    require_same_mesh(initial.mesh(), spec.mesh());
    const ProblemSpec f_spec = spec.with_sign(Sign::Minus);
    const Mesh& mesh = spec.mesh();
    const SparseMatrix k = stiffness(mesh);

    std::vector<double> u = initial.vector();
    take_abs(u);
    for (int b : mesh.boundary_nodes()) u[b] = 0.0;
    double value = energy_F(u, f_spec);

    MinimizeReport out;
    out.min_evaluated = value;
    out.value_history.push_back(value);
    std::vector<double> g = energy_F_gradient(u, f_spec);

    for (int step = 0;; ++step) {
        out.steps = step;
        const double gnorm = residual_norm(mesh, g);
        out.gradient_norm = gnorm;
        const double usup = kernels::max_abs(u);
        if (usup == 0.0 && gnorm == 0.0) {
            out.status = SolveStatus::Converged;
            break;
        }
        if (step >= opts.max_descent) {
            out.status = SolveStatus::Stagnated;
            break;
        }
        const std::vector<double> d = descent_direction(u, f_spec, opts, k, g);
        const double rel = kernels::max_abs(d) / std::max(usup, std::numeric_limits<double>::min());
        if (gnorm <= opts.tol_newton && rel <= kRelStep) {
            out.status = SolveStatus::Converged;
            break;
        }
        const double slope = interior_dot(mesh, g, d);
        double alpha = 1.0;
        bool accepted = false;
        std::vector<double> trial(u.size());
        double trial_value = value;
        while (alpha >= kMinStep) {
            for (std::size_t i = 0; i < u.size(); ++i) trial[i] = std::abs(u[i] + alpha * d[i]);
            trial_value = energy_F(trial, f_spec);
            if (std::isfinite(trial_value)) out.min_evaluated = std::min(out.min_evaluated, trial_value);
            if (trial_value <= value + kArmijo * alpha * slope ||
                (alpha == 1.0 && within_noise(trial_value, value) &&
                 residual_norm(mesh, energy_F_gradient(trial, f_spec)) < gnorm)) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            out.status = gnorm <= opts.tol_newton ? SolveStatus::Converged : SolveStatus::Stagnated;
            break;
        }
        u.swap(trial);
        value = trial_value;
        out.value_history.push_back(value);
        g = energy_F_gradient(u, f_spec);
    }
    out.value = value;
    out.minimizer = GridFunction(spec.mesh_ptr(), std::move(u));
    return out;
}

double coercivity_floor(const ProblemSpec& spec) {
    validate(spec);
    const double q1 = spec.q + 1.0;
    const double s1 = spec.sigma + 1.0;
    const double holder = std::pow(spec.mesh().domain_measure(), 1.0 - q1 / s1);
    const double c1 = spec.lambda / q1 * spec.k.ess_sup() * holder;
    const double c2 = spec.h.ess_inf() / s1;
    if (c1 == 0.0) return 0.0;
    const double t = std::pow(c1 * q1 / (c2 * s1), 1.0 / (spec.sigma - spec.q));
    return c2 * std::pow(t, s1) - c1 * std::pow(t, q1);
}

LevelResult compute_Lambda(const ProblemSpec& spec, const SolverOptions& opts, const GridFunction* initial) {
    validate(spec);
    const Mesh& mesh = spec.mesh();
    const ProblemSpec base = spec.with_sign(Sign::Minus).with_lambda(0.0);
    const SparseMatrix k = stiffness(mesh);
    const double q1 = spec.q + 1.0;
    const WeightField unit_k = spec.k;

    auto rescale = [&](std::vector<double>& v) {
        const double c = level_constraint(spec, v);
        if (!(c > 0.0) || !std::isfinite(c)) return false;
        const double t = std::pow(c, -1.0 / q1);
        for (double& x : v) x *= t;
        return true;
    };

    std::vector<double> v;
    if (initial != nullptr) {
        require_same_mesh(initial->mesh(), mesh);
        v = initial->vector();
        take_abs(v);
    }
    if (v.empty() || !rescale(v)) {
        v = sine_bump(spec.mesh_ptr()).vector();
        rescale(v);
    }
    bool restarted = false;

    LevelResult out;
    MinimizeReport& rep = out.report;
    double value = level_energy(spec, v);
    rep.min_evaluated = value;
    rep.value_history.push_back(value);

    for (int step = 0;; ++step) {
        rep.steps = step;
        // Gradients of G and of the constraint.
        std::vector<double> gg = energy_F_gradient(v, base);
        const std::vector<double> gc = power_load(mesh, v, unit_k, 1.0, spec.q);
        const SparseMatrix m = metric(v, base, opts, k);
        const std::vector<double> pg = preconditioned(m, mesh, gg);
        const std::vector<double> pc = preconditioned(m, mesh, gc);
        const double mu = interior_dot(mesh, gc, pg) / interior_dot(mesh, gc, pc);
        std::vector<double> gl(gg.size());
        std::vector<double> d(gg.size());
        for (std::size_t i = 0; i < gg.size(); ++i) {
            gl[i] = gg[i] - mu * gc[i];
            d[i] = -(pg[i] - mu * pc[i]);
        }
        for (int bnd : mesh.boundary_nodes()) gl[bnd] = 0.0;
        const double gnorm = residual_norm(mesh, gl);
        rep.gradient_norm = gnorm;
        const double rel = kernels::max_abs(d) / kernels::max_abs(v);
        if (gnorm <= opts.tol_newton && rel <= kRelStep) {
            rep.status = SolveStatus::Converged;
            break;
        }
        if (step >= opts.max_descent) {
            rep.status = SolveStatus::Stagnated;
            break;
        }
        const double slope = interior_dot(mesh, gl, d);
        double alpha = 1.0;
        bool accepted = false;
        std::vector<double> trial(v.size());
        double trial_value = value;
        while (alpha >= kMinStep) {
            for (std::size_t i = 0; i < v.size(); ++i) trial[i] = std::abs(v[i] + alpha * d[i]);
            if (rescale(trial)) {
                trial_value = level_energy(spec, trial);
                rep.min_evaluated = std::min(rep.min_evaluated, trial_value);
                if (trial_value <= value + kArmijo * alpha * slope) {
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            if (gnorm <= opts.tol_newton) {
                rep.status = SolveStatus::Converged;
                break;
            }
            if (restarted) {
                rep.status = SolveStatus::Stagnated;
                break;
            }
            // Collapsed iterate: restart once from the smooth bump.
            restarted = true;
            v = sine_bump(spec.mesh_ptr()).vector();
            rescale(v);
            value = level_energy(spec, v);
            continue;
        }
        v.swap(trial);
        value = trial_value;
        rep.value_history.push_back(value);
    }
    rep.value = value;
    rep.constraint_residual = std::abs(level_constraint(spec, v) - 1.0);
    rep.minimizer = GridFunction(spec.mesh_ptr(), std::move(v));
    out.Lambda = value;
    return out;
}

MinimizeReport obstacle_minimize(const ProblemSpec& spec, const GridFunction& lower, const SolverOptions& opts,
                                 const GridFunction* initial) {
    validate(spec);
    const Mesh& mesh = spec.mesh();
    if (&lower.mesh() != &mesh) throw InvalidObstacle("obstacle lives on a different mesh");
    for (int bnd : mesh.boundary_nodes())
        if (lower[bnd] != 0.0) throw InvalidObstacle("obstacle must vanish on the boundary");
    for (double x : lower.values())
        if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidObstacle("obstacle must be finite and nonnegative");

    const ProblemSpec f_spec = spec.with_sign(Sign::Minus);
    const SparseMatrix k = stiffness(mesh);
    const GridFunction start = initial != nullptr ? *initial : default_initial(spec);
    require_same_mesh(start.mesh(), mesh);

    std::vector<double> u(mesh.num_nodes());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::max(std::abs(start[i]), lower[i]);
    for (int b : mesh.boundary_nodes()) u[b] = 0.0;
    double value = energy_F(u, f_spec);

    MinimizeReport out;
    out.min_evaluated = value;
    out.value_history.push_back(value);
    std::vector<bool> active(mesh.num_nodes(), false);

    for (int step = 0;; ++step) {
        out.steps = step;
        const std::vector<double> g = energy_F_gradient(u, f_spec);
        const double usup = kernels::max_abs(u);
        const double pg = projected_gradient_norm(mesh, u, g, lower, &active);
        out.gradient_norm = pg;
        if (usup == 0.0 && pg == 0.0) {
            out.status = SolveStatus::Converged;
            break;
        }
        if (step >= opts.max_descent) {
            out.status = SolveStatus::Stagnated;
            break;
        }

        const auto interior = mesh.interior_nodes();
        std::vector<bool> fixed(interior.size());
        for (std::size_t i = 0; i < interior.size(); ++i) fixed[i] = active[interior[i]];
        const std::vector<double> d = descent_direction(u, f_spec, opts, k, g, &fixed);
        const double rel = kernels::max_abs(d) / std::max(usup, std::numeric_limits<double>::min());
        if (pg <= opts.tol_newton && rel <= kRelStep) {
            out.status = SolveStatus::Converged;
            break;
        }

        double alpha = 1.0;
        bool accepted = false;
        std::vector<double> trial(u.size());
        double trial_value = value;
        while (alpha >= kMinStep) {
            double decrease = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                trial[i] = std::max(u[i] + alpha * d[i], lower[i]);
                decrease += g[i] * (trial[i] - u[i]);
            }
            trial_value = energy_F(trial, f_spec);
            if (std::isfinite(trial_value)) out.min_evaluated = std::min(out.min_evaluated, trial_value);
            if (trial_value <= value + kArmijo * decrease ||
                (alpha == 1.0 && within_noise(trial_value, value) &&
                 projected_gradient_norm(mesh, trial, energy_F_gradient(trial, f_spec), lower, nullptr) < pg)) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            out.status = pg <= opts.tol_newton ? SolveStatus::Converged : SolveStatus::Stagnated;
            break;
        }
        u.swap(trial);
        value = trial_value;
        out.value_history.push_back(value);
    }
    out.value = value;
    out.minimizer = GridFunction(spec.mesh_ptr(), std::move(u));
    return out;
}

LambdaStarEstimate estimate_lambda_star_minus(const ProblemSpec& spec, const SolverOptions& opts, double rel_width,
                                              const LevelResult* level) {
    validate(spec);
    const LevelResult lv = level != nullptr ? *level : compute_Lambda(spec, opts);

    LambdaStarEstimate out;
    out.sign = Sign::Minus;
    out.Lambda = lv.Lambda;
    out.lambda0 = std::numeric_limits<double>::quiet_NaN();
    out.lambda_prime = std::numeric_limits<double>::quiet_NaN();

    auto negative = [&](double lambda) {
        const ProblemSpec s = spec.with_lambda(lambda);
        const MinimizeReport r = minimize_F(s, default_initial(s), opts);
        if (r.status != SolveStatus::Converged) out.low_confidence = true;
        const bool ok = r.value < -opts.tol_energy;
        out.history.push_back({lambda, ok});
        return ok;
    };

    double hi = lv.Lambda;
    for (int i = 0; i < 20 && !negative(hi); ++i) {
        out.low_confidence = true;
        hi *= 1.1;
    }
    double lo = 0.5 * hi;
    for (int i = 0; i < 200 && negative(lo); ++i) {
        hi = lo;
        lo *= 0.5;
    }
    while ((hi - lo) > rel_width * hi) {
        const double mid = 0.5 * (lo + hi);
        if (negative(mid))
            hi = mid;
        else
            lo = mid;
    }
    out.lower = lo;
    out.upper = hi;
    out.estimate = 0.5 * (lo + hi);
    return out;
}

}  // namespace plcc
