#include "plcc/plap.hpp"

#include "plcc/errors.hpp"
#include "plcc/kernels.hpp"
#include "plcc/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace plcc {

namespace {

std::vector<double> grad_sq(const std::vector<Point>& g) {
    std::vector<double> s(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) s[c] = g[c][0] * g[c][0] + g[c][1] * g[c][1];
    return s;
}

// (|g|^2 + eps^2)^((p-2)/2) per cell; 0 where the base vanishes.
std::vector<double> flux_coefficients(const std::vector<double>& gsq, double p, double eps) {
    std::vector<double> a(gsq.size());
    const double eps2 = eps * eps;
    kernels::pow_shifted(gsq, eps2, 0.5 * (p - 2.0), a);
    if (eps2 == 0.0 && p < 2.0)
        for (std::size_t c = 0; c < a.size(); ++c)
            if (gsq[c] == 0.0) a[c] = 0.0;
    return a;
}

void require_nonnegative(std::span<const double> u) {
    for (double v : u)
        if (v < 0.0 || std::isnan(v)) throw DomainError("negative nodal value in a fractional power");
}

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(const Mesh& mesh, const Triplets& t) {
    const auto n = static_cast<Eigen::Index>(mesh.interior_nodes().size());
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

}  // namespace

std::vector<double> plap_apply(const Mesh& mesh, std::span<const double> u, double p, double eps) {
    const auto g = cell_gradients(mesh, u);
    const auto a = flux_coefficients(grad_sq(g), p, eps);
    const int npc = mesh.nodes_per_cell();
    std::vector<double> r(mesh.num_nodes(), 0.0);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const double s = a[c] * mesh.measure(c);
        const auto& cell = mesh.cell(c);
        for (int i = 0; i < npc; ++i) {
            const Point& d = mesh.basis_gradient(c, i);
            r[cell[i]] += s * (g[c][0] * d[0] + g[c][1] * d[1]);
        }
    }
    for (int b : mesh.boundary_nodes()) r[b] = 0.0;
    return r;
}

std::vector<double> plap_apply(const GridFunction& u, double p, double eps) {
    return plap_apply(u.mesh(), u.values(), p, eps);
}

std::vector<double> power_load(const Mesh& mesh, std::span<const double> u, const WeightField& w,
                               double coeff, double r) {
    require_same_mesh(mesh, w.mesh());
    auto uq = interpolate_qp(mesh, u);
    for (double& v : uq) v = std::max(v, 0.0);
    const auto wq = interpolate_qp(mesh, w.values());
    std::vector<double> f(uq.size());
    kernels::pow_shifted(uq, 0.0, r, f);
    for (std::size_t g = 0; g < f.size(); ++g) f[g] *= coeff * wq[g];
    return assemble_load(mesh, f);
}

std::vector<double> rhs_load(std::span<const double> u, const ProblemSpec& spec) {
    require_nonnegative(u);
    const Mesh& mesh = spec.mesh();
    auto b = power_load(mesh, u, spec.k, spec.lambda, spec.q);
    const auto c = power_load(mesh, u, spec.h, sign_value(spec.sign), spec.sigma);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += c[i];
    return b;
}

std::vector<double> weak_residual(std::span<const double> u, const ProblemSpec& spec, const SolverOptions& opts) {
    const Mesh& mesh = spec.mesh();
    const auto b = rhs_load(u, spec);
    auto r = plap_apply(mesh, u, spec.p, opts.effective_eps(mesh));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    for (int bnd : mesh.boundary_nodes()) r[bnd] = 0.0;
    return r;
}

std::vector<double> weak_residual(const GridFunction& u, const ProblemSpec& spec, const SolverOptions& opts) {
    require_same_mesh(u.mesh(), spec.mesh());
    return weak_residual(u.values(), spec, opts);
}

double residual_norm(const Mesh& mesh, std::span<const double> r) {
    double m = 0.0;
    for (int i : mesh.interior_nodes()) m = std::max(m, std::abs(r[i]));
    return m;
}

double gradient_energy(const Mesh& mesh, std::span<const double> u, double p) {
    const auto g = cell_gradients(mesh, u);
    std::vector<double> norm(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) norm[c] = std::hypot(g[c][0], g[c][1]);
    return kernels::weighted_abs_pow_sum(mesh.measures(), norm, p) / p;
}

namespace {

double weighted_power_term(const Mesh& mesh, std::span<const double> u, const WeightField& w, double r) {
    const auto uq = interpolate_qp(mesh, u);
    auto wq = interpolate_qp(mesh, w.values());
    const auto weight = mesh.qp_weight();
    for (std::size_t g = 0; g < wq.size(); ++g) wq[g] *= weight[g];
    return kernels::weighted_abs_pow_sum(wq, uq, r);
}

double energy_with_sign(std::span<const double> u, const ProblemSpec& spec, double h_sign) {
    const Mesh& mesh = spec.mesh();
    return gradient_energy(mesh, u, spec.p) -
           spec.lambda / (spec.q + 1.0) * weighted_power_term(mesh, u, spec.k, spec.q + 1.0) +
           h_sign / (spec.sigma + 1.0) * weighted_power_term(mesh, u, spec.h, spec.sigma + 1.0);
}

}  // namespace

double energy_E(std::span<const double> u, const ProblemSpec& spec) { return energy_with_sign(u, spec, -1.0); }
double energy_E(const GridFunction& u, const ProblemSpec& spec) {
    require_same_mesh(u.mesh(), spec.mesh());
    return energy_E(u.values(), spec);
}

double energy_F(std::span<const double> u, const ProblemSpec& spec) { return energy_with_sign(u, spec, 1.0); }
double energy_F(const GridFunction& u, const ProblemSpec& spec) {
    require_same_mesh(u.mesh(), spec.mesh());
    return energy_F(u.values(), spec);
}

SparseMatrix plap_jacobian(const Mesh& mesh, std::span<const double> u, double p, double eps) {
    const auto g = cell_gradients(mesh, u);
    const auto gsq = grad_sq(g);
    const auto a = flux_coefficients(gsq, p, eps);
    const int npc = mesh.nodes_per_cell();
    Triplets t;
    t.reserve(mesh.num_cells() * npc * npc);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const double base = gsq[c] + eps * eps;
        const double b = base > 0.0 ? (p - 2.0) * a[c] / base : 0.0;
        const auto& cell = mesh.cell(c);
        for (int i = 0; i < npc; ++i) {
            const int ii = mesh.interior_index(cell[i]);
            if (ii < 0) continue;
            const Point& di = mesh.basis_gradient(c, i);
            const double gdi = g[c][0] * di[0] + g[c][1] * di[1];
            for (int j = 0; j < npc; ++j) {
                const int jj = mesh.interior_index(cell[j]);
                if (jj < 0) continue;
                const Point& dj = mesh.basis_gradient(c, j);
                const double gdj = g[c][0] * dj[0] + g[c][1] * dj[1];
                const double v = mesh.measure(c) * (a[c] * (di[0] * dj[0] + di[1] * dj[1]) + b * gdi * gdj);
                t.emplace_back(ii, jj, v);
            }
        }
    }
    return from_triplets(mesh, t);
}

SparseMatrix weighted_mass(const Mesh& mesh, std::span<const double> coef_qp) {
    const int npc = mesh.nodes_per_cell();
    const auto basis = mesh.qp_basis();
    const auto weight = mesh.qp_weight();
    Triplets t;
    t.reserve(mesh.num_cells() * npc * npc);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto& cell = mesh.cell(c);
        for (int i = 0; i < npc; ++i) {
            const int ii = mesh.interior_index(cell[i]);
            if (ii < 0) continue;
            for (int j = 0; j < npc; ++j) {
                const int jj = mesh.interior_index(cell[j]);
                if (jj < 0) continue;
                double v = 0.0;
                for (int k = 0; k < Mesh::kQuadPerCell; ++k) {
                    const std::size_t gq = c * Mesh::kQuadPerCell + k;
                    v += weight[gq] * coef_qp[gq] * basis[gq * npc + i] * basis[gq * npc + j];
                }
                t.emplace_back(ii, jj, v);
            }
        }
    }
    return from_triplets(mesh, t);
}

std::vector<double> power_derivative_qp(const Mesh& mesh, std::span<const double> u, const WeightField& w,
                                        double coeff, double r) {
    require_same_mesh(mesh, w.mesh());
    auto uq = interpolate_qp(mesh, u);
    const double floor = 1e-10 * sup_norm(u);
    if (r < 1.0) {
        for (double& v : uq) v = std::max(v, floor);
    } else {
        for (double& v : uq) v = std::max(v, 0.0);
    }
    const auto wq = interpolate_qp(mesh, w.values());
    std::vector<double> f(uq.size());
    if (r == 1.0) {
        std::fill(f.begin(), f.end(), 1.0);
    } else {
        kernels::pow_shifted(uq, 0.0, r - 1.0, f);
    }
    for (std::size_t g = 0; g < f.size(); ++g) {
        f[g] *= coeff * r * wq[g];
        if (!std::isfinite(f[g])) f[g] = 0.0;  // u == 0 everywhere with r < 1
    }
    return f;
}

SparseMatrix jacobian(std::span<const double> u, const ProblemSpec& spec, const SolverOptions& opts) {
    const Mesh& mesh = spec.mesh();
    auto c = power_derivative_qp(mesh, u, spec.k, spec.lambda, spec.q);
    const auto d = power_derivative_qp(mesh, u, spec.h, sign_value(spec.sign), spec.sigma);
    for (std::size_t g = 0; g < c.size(); ++g) c[g] += d[g];
    SparseMatrix j = plap_jacobian(mesh, u, spec.p, opts.effective_eps(mesh));
    j -= weighted_mass(mesh, c);
    return j;
}

Eigen::VectorXd restrict_interior(const Mesh& mesh, std::span<const double> full) {
    const auto idx = mesh.interior_nodes();
    Eigen::VectorXd v(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) v[static_cast<Eigen::Index>(k)] = full[idx[k]];
    return v;
}

void scatter_interior(const Mesh& mesh, const Eigen::VectorXd& interior, std::span<double> full) {
    const auto idx = mesh.interior_nodes();
    for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = interior[static_cast<Eigen::Index>(k)];
}

}  // namespace plcc
