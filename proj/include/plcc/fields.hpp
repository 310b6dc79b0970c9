#pragma once

#include "plcc/mesh.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace plcc {

/// Nodal values of a P1 function on a mesh.
class GridFunction {
public:
    /// Empty placeholder without a mesh; only assignment and size() are meaningful.
    GridFunction() = default;
    explicit GridFunction(MeshPtr mesh);
    GridFunction(MeshPtr mesh, std::vector<double> values);

    static GridFunction from_function(MeshPtr mesh, const std::function<double(const Point&)>& f);

    const Mesh& mesh() const noexcept { return *mesh_; }
    const MeshPtr& mesh_ptr() const noexcept { return mesh_; }

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    /// Exactly zero at every boundary node.
    bool is_dirichlet_zero() const;
    /// Sets every boundary value to zero.
    void impose_dirichlet_zero();

    GridFunction& operator*=(double s);
    friend GridFunction operator*(double s, GridFunction f) { return f *= s; }

private:
    MeshPtr mesh_;
    std::vector<double> values_;
};

/// Throws IncompatibleFields unless both live on the same mesh object.
void require_same_mesh(const Mesh& a, const Mesh& b);

/**
 * Strictly positive bounded coefficient sampled at the mesh nodes.
 * Families: constant c; 1 + alpha*sin(pi*x) with |alpha| < 1; c0 + c1*x;
 * arbitrary nodal values (e.g. read from CSV).
 */
class WeightField {
public:
    enum class Kind { Constant, Sine, Affine, Nodal };

    static WeightField constant(MeshPtr mesh, double c);
    static WeightField sine(MeshPtr mesh, double alpha);
    static WeightField affine(MeshPtr mesh, double c0, double c1);
    static WeightField nodal(MeshPtr mesh, std::vector<double> values);

    /// "const:C", "sin:ALPHA", "affine:C0,C1" or "file:PATH".
    static WeightField parse(MeshPtr mesh, const std::string& spec);

    Kind kind() const noexcept { return kind_; }
    const Mesh& mesh() const noexcept { return *mesh_; }
    const MeshPtr& mesh_ptr() const noexcept { return mesh_; }
    std::span<const double> values() const noexcept { return values_; }
    double ess_inf() const noexcept { return inf_; }
    double ess_sup() const noexcept { return sup_; }
    const std::string& description() const noexcept { return description_; }

    /// c * this, same family.
    WeightField scaled(double c) const;

private:
    WeightField(MeshPtr mesh, Kind kind, std::vector<double> values, std::string description);

    MeshPtr mesh_;
    Kind kind_;
    std::vector<double> values_;
    double inf_ = 0.0;
    double sup_ = 0.0;
    std::string description_;
};

// Nodal CSV: header "x,u" (1-D) or "x,y,u" (2-D), one row per node in index order.

void write_csv(const GridFunction& f, std::ostream& out);
void write_csv(const GridFunction& f, const std::string& path);
/// Node count and coordinates must match the mesh (coordinates to 1e-9 relative).
GridFunction read_csv(MeshPtr mesh, std::istream& in);
GridFunction read_csv(MeshPtr mesh, const std::string& path);

}  // namespace plcc
