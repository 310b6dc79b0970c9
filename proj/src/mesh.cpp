#include "plcc/mesh.hpp"

#include "plcc/errors.hpp"

#include <cmath>
#include <string>

namespace plcc {

namespace {

// Gauss-Legendre, 3 points on the unit segment (degree 5).
constexpr double kGaussOff = 0.38729833462074168852;  // sqrt(3/5)/2
constexpr std::array<double, 3> kSegXi{0.5 - kGaussOff, 0.5, 0.5 + kGaussOff};
constexpr std::array<double, 3> kSegW{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// Interior 3-point rule on triangles (degree 2), barycentric coordinates.
constexpr std::array<std::array<double, 3>, 3> kTriBary{{
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
    {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
}};

}  // namespace

double Mesh::diameter() const noexcept {
    const double dx = extent_.x1 - extent_.x0;
    if (dim_ == 1) return dx;
    const double dy = extent_.y1 - extent_.y0;
    return std::hypot(dx, dy);
}

double Mesh::domain_measure() const noexcept {
    const double dx = extent_.x1 - extent_.x0;
    return dim_ == 1 ? dx : dx * (extent_.y1 - extent_.y0);
}

void Mesh::finalize() {
    const int npc = nodes_per_cell();
    measure_.resize(cells_.size());
    grads_.resize(cells_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto& cell = cells_[c];
        if (dim_ == 1) {
            const double h = nodes_[cell[1]][0] - nodes_[cell[0]][0];
            measure_[c] = h;
            grads_[c][0] = {-1.0 / h, 0.0};
            grads_[c][1] = {1.0 / h, 0.0};
            grads_[c][2] = {0.0, 0.0};
        } else {
            const Point& p0 = nodes_[cell[0]];
            const Point& p1 = nodes_[cell[1]];
            const Point& p2 = nodes_[cell[2]];
            const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
            measure_[c] = 0.5 * std::abs(det);
            grads_[c][0] = {(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det};
            grads_[c][1] = {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det};
            grads_[c][2] = {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det};
        }
        if (!(measure_[c] > 0.0)) throw InvalidMesh("cell " + std::to_string(c) + " has non-positive measure");
    }

    interior_index_.assign(nodes_.size(), 0);
    for (int b : boundary_) interior_index_[b] = -1;
    interior_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (interior_index_[i] == 0) {
            interior_index_[i] = static_cast<int>(interior_.size());
            interior_.push_back(static_cast<int>(i));
        }
    }

    const std::size_t nq = cells_.size() * kQuadPerCell;
    qp_weight_.resize(nq);
    qp_basis_.resize(nq * npc);
    qp_points_.resize(nq);
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        for (int k = 0; k < kQuadPerCell; ++k) {
            const std::size_t g = c * kQuadPerCell + k;
            Point x{0.0, 0.0};
            if (dim_ == 1) {
                qp_weight_[g] = measure_[c] * kSegW[k];
                qp_basis_[g * npc + 0] = 1.0 - kSegXi[k];
                qp_basis_[g * npc + 1] = kSegXi[k];
            } else {
                qp_weight_[g] = measure_[c] / 3.0;
                for (int a = 0; a < 3; ++a) qp_basis_[g * npc + a] = kTriBary[k][a];
            }
            for (int a = 0; a < npc; ++a) {
                const Point& p = nodes_[cells_[c][a]];
                x[0] += qp_basis_[g * npc + a] * p[0];
                x[1] += qp_basis_[g * npc + a] * p[1];
            }
            qp_points_[g] = x;
        }
    }
}

MeshPtr build_mesh(int dimension, int n, Extent extent) {
    if (dimension != 1 && dimension != 2) throw InvalidMesh("dimension must be 1 or 2");
    if (n < 2) throw InvalidMesh("resolution n must be at least 2");
    if (!(extent.x1 > extent.x0) || !std::isfinite(extent.x0) || !std::isfinite(extent.x1))
        throw InvalidMesh("x extent must be a finite interval with x1 > x0");
    if (dimension == 2 && (!(extent.y1 > extent.y0) || !std::isfinite(extent.y0) || !std::isfinite(extent.y1)))
        throw InvalidMesh("y extent must be a finite interval with y1 > y0");

    std::shared_ptr<Mesh> mesh(new Mesh());
    mesh->dim_ = dimension;
    mesh->n_ = n;
    mesh->extent_ = extent;

    const double hx = (extent.x1 - extent.x0) / n;
    if (dimension == 1) {
        mesh->nodes_.resize(n + 1);
        for (int i = 0; i <= n; ++i) mesh->nodes_[i] = {i == n ? extent.x1 : extent.x0 + i * hx, 0.0};
        mesh->cells_.resize(n);
        for (int i = 0; i < n; ++i) mesh->cells_[i] = {i, i + 1, -1};
        mesh->boundary_ = {0, n};
    } else {
        const double hy = (extent.y1 - extent.y0) / n;
        const int m = n + 1;
        mesh->nodes_.resize(static_cast<std::size_t>(m) * m);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i)
                mesh->nodes_[j * m + i] = {i == n ? extent.x1 : extent.x0 + i * hx,
                                           j == n ? extent.y1 : extent.y0 + j * hy};
        mesh->cells_.reserve(2 * static_cast<std::size_t>(n) * n);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int a = j * m + i;
                const int b = a + 1;
                const int c = a + m + 1;
                const int d = a + m;
                mesh->cells_.push_back({a, b, c});
                mesh->cells_.push_back({a, c, d});
            }
        }
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i)
                if (i == 0 || j == 0 || i == n || j == n) mesh->boundary_.push_back(j * m + i);
    }
    mesh->finalize();
    return mesh;
}

}  // namespace plcc
