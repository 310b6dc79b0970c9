#include "plcc/eigenpair.hpp"

#include "plcc/errors.hpp"
#include "plcc/nlsolve.hpp"
#include "plcc/plap.hpp"
#include "plcc/quadrature.hpp"

#include <cmath>

namespace plcc {

double rayleigh_quotient(const GridFunction& u, double p) {
    const double den = integrate_power(u, p);
    return p * gradient_energy(u.mesh(), u.values(), p) / den;
}

std::vector<double> eigen_residual(const GridFunction& phi, double lambda, double p) {
    const Mesh& mesh = phi.mesh();
    const WeightField one = WeightField::constant(phi.mesh_ptr(), 1.0);
    auto r = plap_apply(mesh, phi.values(), p, 0.0);
    const auto b = power_load(mesh, phi.values(), one, lambda, p - 1.0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    for (int bnd : mesh.boundary_nodes()) r[bnd] = 0.0;
    return r;
}

EigenPair first_eigenpair(const MeshPtr& mesh, double p, const SolverOptions& opts) {
    if (!(p > 1.0)) throw InvalidSpec("p must be > 1");
    const WeightField one = WeightField::constant(mesh, 1.0);

    GridFunction phi = solve_torsion(mesh, p, opts);
    phi *= 1.0 / sup_norm(phi);
    double lambda = rayleigh_quotient(phi, p);
    std::vector<double> z = phi.vector();

    EigenPair out{0.0, phi, 0, 0.0, false};
    for (int it = 1; it <= opts.max_eigen; ++it) {
        const auto b = power_load(*mesh, phi.values(), one, 1.0, p - 1.0);
        z = solve_load_vector(*mesh, b, p, opts, z);
        for (double& v : z) v = std::max(v, 0.0);
        GridFunction next(mesh, z);
        next *= 1.0 / sup_norm(next);
        const double next_lambda = rayleigh_quotient(next, p);
        const double change = std::abs(next_lambda - lambda) / next_lambda;
        phi = std::move(next);
        lambda = next_lambda;

        const double res = residual_norm(*mesh, eigen_residual(phi, lambda, p));
        out.iterations = it;
        out.residual = res;
        if (change <= 1e-8 && res <= opts.tol_newton * std::max(1.0, lambda)) {
            out.converged = true;
            break;
        }
    }
    out.lambda1 = lambda;
    out.phi = phi;
    if (!out.converged)
        throw NonConvergence("inverse power iteration did not converge (residual " + std::to_string(out.residual) +
                                 ")",
                             phi.vector(), false);
    return out;
}

}  // namespace plcc
