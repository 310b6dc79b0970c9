#include "plcc/nlsolve.hpp"

#include "plcc/errors.hpp"
#include "plcc/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace plcc {

NewtonOptions polish_newton_options(const SolverOptions& opts) {
    NewtonOptions n;
    n.tol = opts.tol_newton * 1e-3;
    n.accept_floor = opts.tol_newton;
    n.max_iter = opts.max_newton;
    return n;
}

namespace {

// Initial guess for the normalized problem: p = 2 solution z, scaled by the
// energy-optimal factor c^(p-1) = <b, z> / integral |grad z|^p.
std::vector<double> scaled_linear_guess(const Mesh& mesh, std::span<const double> b, double p) {
    std::vector<double> zero(mesh.num_nodes(), 0.0);
    const SparseMatrix k = plap_jacobian(mesh, zero, 2.0, 0.0);
    const auto z_int = solve_linear(k, restrict_interior(mesh, b));
    std::vector<double> z(mesh.num_nodes(), 0.0);
    if (!z_int) return z;
    scatter_interior(mesh, *z_int, z);
    if (p == 2.0) return z;
    double bz = 0.0;
    for (int i : mesh.interior_nodes()) bz += b[i] * z[i];
    const double gz = p * gradient_energy(mesh, z, p);
    if (bz > 0.0 && gz > 0.0) {
        const double c = std::pow(bz / gz, 1.0 / (p - 1.0));
        for (double& v : z) v *= c;
    }
    return z;
}

}  // namespace

std::vector<double> solve_load_vector(const Mesh& mesh, std::span<const double> b, double p,
                                      const SolverOptions& opts, std::span<const double> warm) {
    double s = 0.0;
    for (int i : mesh.interior_nodes()) s = std::max(s, std::abs(b[i]));
    if (s == 0.0) return std::vector<double>(mesh.num_nodes(), 0.0);
    if (!std::isfinite(s)) throw NonConvergence("non-finite load", std::vector<double>(b.begin(), b.end()), true);

    std::vector<double> bn(b.begin(), b.end());
    for (double& v : bn) v /= s;
    const double back = std::pow(s, 1.0 / (p - 1.0));

    std::vector<double> init;
    if (!warm.empty() && sup_norm(warm) > 0.0) {
        init.assign(warm.begin(), warm.end());
        for (double& v : init) v /= back;
    } else {
        init = scaled_linear_guess(mesh, bn, p);
    }

    const double eps = opts.effective_eps(mesh);
    ResidualMap res = [&](std::span<const double> z) {
        auto r = plap_apply(mesh, z, p, eps);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= bn[i];
        for (int bnd : mesh.boundary_nodes()) r[bnd] = 0.0;
        return r;
    };
    JacobianMap jac = [&](std::span<const double> z) { return plap_jacobian(mesh, z, p, eps); };

    NewtonOptions nopts;
    nopts.tol = opts.tol_inner;
    nopts.accept_floor = std::max(opts.tol_inner, 1e-10);
    nopts.max_iter = opts.max_newton;
    nopts.project_nonnegative = false;
    NewtonResult r = newton_engine(mesh, std::move(init), res, jac, nopts);
    if (r.status != SolveStatus::Converged && !warm.empty()) {
        // A poor warm start can stall the damped iteration; retry from the linear guess.
        r = newton_engine(mesh, scaled_linear_guess(mesh, bn, p), res, jac, nopts);
    }
    for (double& v : r.u) v *= back;
    if (r.status != SolveStatus::Converged)
        throw NonConvergence("load solve did not converge (residual " + std::to_string(r.residual) + ")",
                             std::move(r.u), false);
    return std::move(r.u);
}

GridFunction solve_load(const GridFunction& g, double p, const SolverOptions& opts) {
    const Mesh& mesh = g.mesh();
    bool nonzero = false;
    for (double v : g.values()) {
        if (v < 0.0 || !std::isfinite(v)) throw DomainError("load must be finite and nonnegative");
        if (v > 0.0) nonzero = true;
    }
    if (!nonzero) throw DomainError("load must not vanish identically");
    if (!(p > 1.0)) throw DomainError("p must be > 1");
    return GridFunction(g.mesh_ptr(), solve_load_vector(mesh, load_vector(g), p, opts));
}

GridFunction solve_torsion(const MeshPtr& mesh, double p, const SolverOptions& opts) {
    return solve_load(GridFunction(mesh, std::vector<double>(mesh->num_nodes(), 1.0)), p, opts);
}

std::vector<double> concave_residual(std::span<const double> w, double lambda, const WeightField& k, double q,
                                     double p, const SolverOptions& opts) {
    const Mesh& mesh = k.mesh();
    for (double v : w)
        if (v < 0.0) throw DomainError("negative nodal value in a fractional power");
    auto r = plap_apply(mesh, w, p, opts.effective_eps(mesh));
    const auto b = power_load(mesh, w, k, lambda, q);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    for (int bnd : mesh.boundary_nodes()) r[bnd] = 0.0;
    return r;
}

GridFunction solve_concave(double lambda, const WeightField& k, double q, double p, const SolverOptions& opts,
                           const GridFunction* initial, ConcaveSolveInfo* info) {
    if (!(q > 0.0 && q < p - 1.0)) throw InvalidSpec("concave problem requires 0 < q < p - 1");
    if (!(lambda > 0.0)) throw InvalidSpec("concave problem requires lambda > 0");
    const MeshPtr& mesh_ptr = k.mesh_ptr();
    const Mesh& mesh = *mesh_ptr;

    std::vector<double> init;
    if (initial != nullptr) {
        require_same_mesh(initial->mesh(), mesh);
        init = initial->vector();
    } else {
        const GridFunction v = solve_torsion(mesh_ptr, p, opts);
        const double vs = sup_norm(v);
        const double kbar = std::sqrt(k.ess_inf() * k.ess_sup());
        const double s = std::pow(lambda * kbar * std::pow(vs, q), 1.0 / (p - 1.0 - q));
        init = v.vector();
        for (double& x : init) x *= s;
    }

    const double eps = opts.effective_eps(mesh);
    ResidualMap res = [&](std::span<const double> w) { return concave_residual(w, lambda, k, q, p, opts); };
    JacobianMap jac = [&](std::span<const double> w) {
        SparseMatrix j = plap_jacobian(mesh, w, p, eps);
        j -= weighted_mass(mesh, power_derivative_qp(mesh, w, k, lambda, q));
        return j;
    };
    NewtonResult r = newton_engine(mesh, init, res, jac, polish_newton_options(opts));
    ConcaveSolveInfo local;
    local.newton_steps = r.iterations;
    local.residual = r.residual;

    std::vector<double> w = std::move(r.u);
    if (r.status != SolveStatus::Converged || sup_norm(w) == 0.0) {
        // Picard: w <- S(lambda k w^q) is a contraction on positive fields.
        local.used_fallback = true;
        if (sup_norm(w) == 0.0) w = init;
        double norm = residual_norm(mesh, res(w));
        for (int it = 0; it < opts.max_mono && norm > opts.tol_newton; ++it) {
            w = solve_load_vector(mesh, power_load(mesh, w, k, lambda, q), p, opts, w);
            norm = residual_norm(mesh, res(w));
            local.picard_steps = it + 1;
        }
        // The Picard iterate lies inside Newton's basin; polish it down to round-off.
        NewtonResult polished = newton_engine(mesh, w, res, jac, polish_newton_options(opts));
        if (polished.status == SolveStatus::Converged && polished.residual < norm && sup_norm(polished.u) > 0.0) {
            local.newton_steps += polished.iterations;
            w = std::move(polished.u);
            norm = polished.residual;
        }
        local.residual = norm;
        if (norm > opts.tol_newton)
            throw NonConvergence("concave problem did not converge (residual " + std::to_string(norm) + ")",
                                 std::move(w), false);
    }
    if (info != nullptr) *info = local;
    return GridFunction(mesh_ptr, std::move(w));
}

}  // namespace plcc
