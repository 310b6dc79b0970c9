#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace plcc {

/// Interval (x0, x1) in 1-D, rectangle (x0, x1) x (y0, y1) in 2-D.
struct Extent {
    double x0 = 0.0;
    double x1 = 1.0;
    double y0 = 0.0;
    double y1 = 1.0;
};

using Point = std::array<double, 2>;

/**
 * Uniform P1 simplex mesh: segments in 1-D, right triangles in 2-D (each grid
 * square cut along its (i,j)-(i+1,j+1) diagonal, 2n^2 triangles).
 *
 * Besides geometry it stores the 3-point-per-simplex quadrature table used by
 * every weighted nonlinear integral: for quadrature point g = 3*c + k,
 * qp_weight()[g] is the absolute weight and qp_basis()[g*npc + a] the value of
 * the basis function of local node a. Immutable after construction.
 */
class Mesh {
public:
    static constexpr int kQuadPerCell = 3;

    int dimension() const noexcept { return dim_; }
    int resolution() const noexcept { return n_; }
    const Extent& extent() const noexcept { return extent_; }

    std::size_t num_nodes() const noexcept { return nodes_.size(); }
    std::size_t num_cells() const noexcept { return cells_.size(); }
    int nodes_per_cell() const noexcept { return dim_ + 1; }

    const Point& node(std::size_t i) const { return nodes_[i]; }
    std::span<const Point> nodes() const noexcept { return nodes_; }

    /// Local-to-global node indices; only the first nodes_per_cell() are used.
    const std::array<int, 3>& cell(std::size_t c) const { return cells_[c]; }
    double measure(std::size_t c) const { return measure_[c]; }
    std::span<const double> measures() const noexcept { return measure_; }

    /// Constant gradient of the local basis function a on cell c.
    const Point& basis_gradient(std::size_t c, int a) const { return grads_[c][a]; }

    bool is_boundary(std::size_t i) const { return interior_index_[i] < 0; }
    std::span<const int> boundary_nodes() const noexcept { return boundary_; }
    std::span<const int> interior_nodes() const noexcept { return interior_; }
    /// Position of node i among interior_nodes(), -1 for boundary nodes.
    int interior_index(std::size_t i) const { return interior_index_[i]; }

    std::size_t num_qp() const noexcept { return qp_weight_.size(); }
    std::span<const double> qp_weight() const noexcept { return qp_weight_; }
    std::span<const double> qp_basis() const noexcept { return qp_basis_; }
    std::span<const Point> qp_points() const noexcept { return qp_points_; }

    /// Grid spacing along x (and y in 2-D).
    double hx() const noexcept { return (extent_.x1 - extent_.x0) / n_; }
    double hy() const noexcept { return (extent_.y1 - extent_.y0) / n_; }

    double diameter() const noexcept;
    double domain_measure() const noexcept;

private:
    friend std::shared_ptr<const Mesh> build_mesh(int dimension, int n, Extent extent);
    Mesh() = default;
    void finalize();

    int dim_ = 1;
    int n_ = 0;
    Extent extent_{};
    std::vector<Point> nodes_;
    std::vector<std::array<int, 3>> cells_;
    std::vector<double> measure_;
    std::vector<std::array<Point, 3>> grads_;
    std::vector<int> boundary_;
    std::vector<int> interior_;
    std::vector<int> interior_index_;
    std::vector<double> qp_weight_;
    std::vector<double> qp_basis_;
    std::vector<Point> qp_points_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Throws InvalidMesh for n < 2, dimension outside {1, 2} or a degenerate extent.
MeshPtr build_mesh(int dimension, int n, Extent extent = {});

}  // namespace plcc
