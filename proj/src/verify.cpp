#include "plcc/verify.hpp"

#include "plcc/errors.hpp"
#include "plcc/plap.hpp"
#include "plcc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plcc {

namespace {

// t^p - p t + p - 1 >= 0 (Young), with a series near t = 1 where the direct form cancels.
double young_gap(double t, double p) {
    const double e = t - 1.0;
    if (std::abs(e) < 1e-4)
        return 0.5 * p * (p - 1.0) * e * e * (1.0 + (p - 2.0) / 3.0 * e + (p - 2.0) * (p - 3.0) / 12.0 * e * e);
    return std::max(0.0, std::expm1(p * std::log1p(e)) - p * e);
}

// |a||c| - a.c >= 0 without cancellation when a and c are nearly parallel.
double alignment_gap(const Point& a, const Point& c, double na, double nc) {
    const double dot = a[0] * c[0] + a[1] * c[1];
    if (dot <= 0.0) return na * nc - dot;
    const double cross = a[0] * c[1] - a[1] * c[0];
    return cross * cross / (na * nc + dot);
}

}  // namespace

PiconeResult picone_R(const GridFunction& u, const GridFunction& v, double p) {
    require_same_mesh(u.mesh(), v.mesh());
    const Mesh& mesh = u.mesh();
    for (double x : u.values())
        if (x < 0.0) throw DomainError("Picone remainder needs u >= 0");
    const auto uq = interpolate_qp(mesh, u.values());
    const auto vq = interpolate_qp(mesh, v.values());
    const auto gu = cell_gradients(mesh, u.values());
    const auto gv = cell_gradients(mesh, v.values());
    const auto w = mesh.qp_weight();

    PiconeResult out{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t g = 0; g < mesh.num_qp(); ++g) {
        const std::size_t c = g / Mesh::kQuadPerCell;
        const Point& a = gu[c];
        const double na = std::hypot(a[0], a[1]);
        double r = 0.0;
        if (!(vq[g] > 0.0)) {
            // A cell with all vertices on the boundary: admissible only if u vanishes there too.
            if (vq[g] == 0.0 && uq[g] == 0.0 && na == 0.0) {
                out.pointwise_min = std::min(out.pointwise_min, 0.0);
                continue;
            }
            throw DomainError("Picone remainder needs v > 0 at every quadrature point");
        }
        // With c = (u/v) grad v the chain-rule expansion reads
        //   R = |a|^p - p |c|^(p-2) c.a + (p-1) |c|^p
        //     = Young(|a|, |c|) + p |c|^(p-2) (|a||c| - c.a),
        // a sum of two nonnegative terms evaluated separately.
        const double ratio = uq[g] / vq[g];
        const Point cv{ratio * gv[c][0], ratio * gv[c][1]};
        const double nc = std::hypot(cv[0], cv[1]);
        if (nc == 0.0) {
            r = std::pow(na, p);
        } else {
            r = std::pow(nc, p) * young_gap(na / nc, p) + p * std::pow(nc, p - 2.0) * alignment_gap(a, cv, na, nc);
        }
        out.pointwise_min = std::min(out.pointwise_min, r);
        out.integral += w[g] * r;
    }
    return out;
}

ComparisonResult check_comparison(const GridFunction& u, const GridFunction& v, double p,
                                  const SolverOptions& opts, double premise_tol, double conclusion_tol) {
    require_same_mesh(u.mesh(), v.mesh());
    const Mesh& mesh = u.mesh();
    const double eps = opts.effective_eps(mesh);
    const auto au = plap_apply(mesh, u.values(), p, eps);
    const auto av = plap_apply(mesh, v.values(), p, eps);
    ComparisonResult out;
    out.premise_gap = -std::numeric_limits<double>::infinity();
    for (int i : mesh.interior_nodes()) out.premise_gap = std::max(out.premise_gap, au[i] - av[i]);
    out.max_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i) out.max_excess = std::max(out.max_excess, u[i] - v[i]);
    out.premise = out.premise_gap <= premise_tol;
    out.conclusion = out.max_excess <= conclusion_tol;
    return out;
}

IdentityReport check_identities(const GridFunction& u, const ProblemSpec& spec) {
    require_same_mesh(u.mesh(), spec.mesh());
    const Mesh& mesh = u.mesh();
    const double p = spec.p;
    IdentityReport out;
    out.nontrivial = sup_norm(u) > 0.0;
    out.E = energy_E(u, spec);
    out.gradient_term = p * gradient_energy(mesh, u.values(), p);
    out.k_term = spec.lambda * integrate_weighted_power(u, spec.k, spec.q + 1.0);
    out.h_term = integrate_weighted_power(u, spec.h, spec.sigma + 1.0);
    out.scale = std::max({out.gradient_term, out.k_term, out.h_term});
    out.energy_negative = out.nontrivial && out.E < 0.0;

    const double sgn = sign_value(spec.sign);
    out.testing_residual = out.gradient_term - out.k_term - sgn * out.h_term;
    const double slack = -1e-6 * out.scale;
    out.testing_ok = std::abs(out.testing_residual) <= -slack;

    out.stability = out.gradient_term - spec.q / (p - 1.0) * out.k_term - spec.sigma / (p - 1.0) * out.h_term;
    out.stability_plus = out.gradient_term - spec.q / (p - 1.0) * out.k_term + spec.sigma / (p - 1.0) * out.h_term;
    out.stability_ok = out.stability >= slack && out.stability_plus >= slack;
    out.balance = (p - 1.0 - spec.q) * out.k_term - (spec.sigma + 1.0 - p) * out.h_term;
    out.balance_ok = out.balance >= slack;
    return out;
}

double boundary_slope_check(const GridFunction& u) {
    const Mesh& mesh = u.mesh();
    const int n = mesh.resolution();
    if (n < 2) return std::numeric_limits<double>::infinity();
    double out = std::numeric_limits<double>::infinity();
    if (mesh.dimension() == 1) {
        const double h = mesh.hx();
        out = std::min((u[1] - u[0]) / h, (u[n - 1] - u[n]) / h);
        return out;
    }
    const int m = n + 1;
    const double hx = mesh.hx();
    const double hy = mesh.hy();
    for (int b : mesh.boundary_nodes()) {
        const int i = b % m;
        const int j = b / m;
        const int ii = std::clamp(i, 1, n - 1);
        const int jj = std::clamp(j, 1, n - 1);
        const double dist = std::hypot((ii - i) * hx, (jj - j) * hy);
        out = std::min(out, (u[jj * m + ii] - u[b]) / dist);
    }
    return out;
}

bool interior_positive(const GridFunction& u) {
    for (int i : u.mesh().interior_nodes())
        if (!(u[i] > 0.0)) return false;
    return true;
}

}  // namespace plcc
