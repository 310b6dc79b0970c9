#pragma once

#include "plcc/fields.hpp"

#include <span>
#include <vector>

namespace plcc {

/// Quadrature approximation of the integral of w |f|^r (3-point rule per cell).
double integrate_weighted_power(const GridFunction& f, const WeightField& w, double r);

/// Same, unit weight.
double integrate_power(const GridFunction& f, double r);

double sup_norm(const GridFunction& f);
double sup_norm(std::span<const double> v);

/// Exact elementwise gradient of the P1 interpolant, one entry per cell.
std::vector<Point> cell_gradients(const Mesh& mesh, std::span<const double> u);

/// Gradient table per quadrature point (constant within each cell).
std::vector<Point> grad_eval(const GridFunction& f);

/// Values of the P1 interpolant at every quadrature point.
std::vector<double> interpolate_qp(const Mesh& mesh, std::span<const double> nodal);

/// b_i = sum over quadrature points of weight * f_qp * phi_i.
std::vector<double> assemble_load(const Mesh& mesh, std::span<const double> f_qp);

/// Load vector of the P1 interpolant of g: b_i = integral of g_h phi_i.
std::vector<double> load_vector(const GridFunction& g);

/// Integral of u_h v_h (consistent mass inner product).
double mass_inner(const Mesh& mesh, std::span<const double> u, std::span<const double> v);

}  // namespace plcc
