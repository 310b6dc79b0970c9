#include "plcc/quadrature.hpp"

#include "plcc/errors.hpp"
#include "plcc/kernels.hpp"

namespace plcc {

std::vector<double> interpolate_qp(const Mesh& mesh, std::span<const double> nodal) {
    const int npc = mesh.nodes_per_cell();
    const auto basis = mesh.qp_basis();
    std::vector<double> out(mesh.num_qp());
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto& cell = mesh.cell(c);
        for (int k = 0; k < Mesh::kQuadPerCell; ++k) {
            const std::size_t g = c * Mesh::kQuadPerCell + k;
            double s = 0.0;
            for (int a = 0; a < npc; ++a) s += basis[g * npc + a] * nodal[cell[a]];
            out[g] = s;
        }
    }
    return out;
}

std::vector<double> assemble_load(const Mesh& mesh, std::span<const double> f_qp) {
    const int npc = mesh.nodes_per_cell();
    const auto basis = mesh.qp_basis();
    const auto weight = mesh.qp_weight();
    std::vector<double> b(mesh.num_nodes(), 0.0);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto& cell = mesh.cell(c);
        for (int k = 0; k < Mesh::kQuadPerCell; ++k) {
            const std::size_t g = c * Mesh::kQuadPerCell + k;
            const double wf = weight[g] * f_qp[g];
            for (int a = 0; a < npc; ++a) b[cell[a]] += wf * basis[g * npc + a];
        }
    }
    return b;
}

std::vector<double> load_vector(const GridFunction& g) {
    return assemble_load(g.mesh(), interpolate_qp(g.mesh(), g.values()));
}

double integrate_weighted_power(const GridFunction& f, const WeightField& w, double r) {
    require_same_mesh(f.mesh(), w.mesh());
    if (!(r >= 0.0)) throw DomainError("integrate_weighted_power requires r >= 0");
    const Mesh& mesh = f.mesh();
    const auto fq = interpolate_qp(mesh, f.values());
    auto wq = interpolate_qp(mesh, w.values());
    const auto weight = mesh.qp_weight();
    for (std::size_t g = 0; g < wq.size(); ++g) wq[g] *= weight[g];
    return kernels::weighted_abs_pow_sum(wq, fq, r);
}

double integrate_power(const GridFunction& f, double r) {
    if (!(r >= 0.0)) throw DomainError("integrate_power requires r >= 0");
    const Mesh& mesh = f.mesh();
    const auto fq = interpolate_qp(mesh, f.values());
    return kernels::weighted_abs_pow_sum(mesh.qp_weight(), fq, r);
}

double sup_norm(std::span<const double> v) { return kernels::max_abs(v); }

double sup_norm(const GridFunction& f) { return sup_norm(f.values()); }

std::vector<Point> cell_gradients(const Mesh& mesh, std::span<const double> u) {
    const int npc = mesh.nodes_per_cell();
    std::vector<Point> g(mesh.num_cells());
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto& cell = mesh.cell(c);
        Point s{0.0, 0.0};
        for (int a = 0; a < npc; ++a) {
            const Point& d = mesh.basis_gradient(c, a);
            s[0] += u[cell[a]] * d[0];
            s[1] += u[cell[a]] * d[1];
        }
        g[c] = s;
    }
    return g;
}

std::vector<Point> grad_eval(const GridFunction& f) {
    const auto per_cell = cell_gradients(f.mesh(), f.values());
    std::vector<Point> out(f.mesh().num_qp());
    for (std::size_t g = 0; g < out.size(); ++g) out[g] = per_cell[g / Mesh::kQuadPerCell];
    return out;
}

double mass_inner(const Mesh& mesh, std::span<const double> u, std::span<const double> v) {
    const auto uq = interpolate_qp(mesh, u);
    auto vq = interpolate_qp(mesh, v);
    const auto weight = mesh.qp_weight();
    for (std::size_t g = 0; g < vq.size(); ++g) vq[g] *= weight[g];
    return kernels::dot(uq, vq);
}

}  // namespace plcc
