#include <gtest/gtest.h>

#include "plcc/errors.hpp"
#include "plcc/newton.hpp"
#include "plcc/nlsolve.hpp"
#include "plcc/plap.hpp"
#include "plcc/quadrature.hpp"

#include <cmath>
#include <random>

namespace {

using namespace plcc;

ProblemSpec s0(const MeshPtr& m, double lambda = 1.0, Sign sign = Sign::Plus) {
    return ProblemSpec{2.0, 0.5, 3.0, lambda, sign, WeightField::constant(m, 1.0), WeightField::constant(m, 1.0)};
}

// Smooth positive random field with zero boundary values.
GridFunction random_field(const MeshPtr& m, std::mt19937_64& rng, double floor = 0.2) {
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    const double a = d(rng), b = d(rng), c = d(rng);
    return GridFunction::from_function(m, [&](const Point& x) {
        double s = std::sin(M_PI * x[0]);
        if (m->dimension() == 2) s *= std::sin(M_PI * x[1]);
        return s * (1.0 + floor + a * std::cos(M_PI * x[0]) + b * std::sin(2 * M_PI * x[0]) + c * x[1]);
    });
}

// 3-point Gauss-Legendre on every 1-D cell, written out independently of the library.
template <class F>
std::vector<double> gauss_load_1d(int n, const std::vector<double>& u, F&& f) {
    const double h = 1.0 / n;
    const double xi[3] = {0.5 - std::sqrt(15.0) / 10.0, 0.5, 0.5 + std::sqrt(15.0) / 10.0};
    const double wt[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    std::vector<double> b(n + 1, 0.0);
    for (int c = 0; c < n; ++c) {
        for (int k = 0; k < 3; ++k) {
            const double val = (1.0 - xi[k]) * u[c] + xi[k] * u[c + 1];
            const double fx = f(val) * wt[k] * h;
            b[c] += fx * (1.0 - xi[k]);
            b[c + 1] += fx * xi[k];
        }
    }
    b[0] = b[n] = 0.0;
    return b;
}

TEST(PlapApply, ZeroField) {
    const MeshPtr m = build_mesh(2, 6);
    for (double v : plap_apply(GridFunction(m), 3.0, 1e-8)) EXPECT_EQ(v, 0.0);
}

TEST(PlapApply, QuadraticProfileReproducesUnitLoad) {
    const MeshPtr m = build_mesh(1, 64);
    const auto u = GridFunction::from_function(m, [](const Point& x) { return x[0] * (1.0 - x[0]) / 2.0; });
    const auto r = plap_apply(u, 2.0, 0.0);
    const auto b = load_vector(GridFunction(m, std::vector<double>(m->num_nodes(), 1.0)));
    for (int i : m->interior_nodes()) EXPECT_NEAR(r[i], b[i], 1e-10);
}

TEST(PlapApply, MatchesDirectSummationForP3) {
    const int n = 50;
    const MeshPtr m = build_mesh(1, n);
    const auto u = GridFunction::from_function(m, [](const Point& x) { return x[0] * (1.0 - x[0]) / 2.0; });
    const double eps = 1e-8;
    const auto r = plap_apply(u, 3.0, eps);
    const double h = 1.0 / n;
    for (int i = 1; i < n; ++i) {
        const double sl = (u[i] - u[i - 1]) / h;
        const double sr = (u[i + 1] - u[i]) / h;
        const double al = std::sqrt(sl * sl + eps * eps);
        const double ar = std::sqrt(sr * sr + eps * eps);
        EXPECT_NEAR(r[i], al * sl - ar * sr, 1e-14);
    }
    EXPECT_EQ(r[0], 0.0);
    EXPECT_EQ(r[n], 0.0);
}

TEST(WeakResidual, ZeroFieldAndDomainErrors) {
    const MeshPtr m = build_mesh(1, 16);
    const ProblemSpec s = s0(m);
    for (double v : weak_residual(GridFunction(m), s, SolverOptions{})) EXPECT_EQ(v, 0.0);
    std::vector<double> neg(m->num_nodes(), 0.0);
    neg[5] = -1e-3;
    EXPECT_THROW(weak_residual(GridFunction(m, neg), s, SolverOptions{}), DomainError);
}

TEST(WeakResidual, TorsionAgainstDirectQuadrature) {
    const int n = 128;
    const MeshPtr m = build_mesh(1, n);
    const SolverOptions opts;
    const GridFunction v = solve_torsion(m, 2.0, opts);
    for (Sign sign : {Sign::Plus, Sign::Minus}) {
        const ProblemSpec s = s0(m, 1.0, sign);
        const double sg = sign_value(sign);
        const auto r = weak_residual(v, s, opts);
        const auto one = gauss_load_1d(n, std::vector<double>(n + 1, 1.0), [](double) { return 1.0; });
        const auto rhs = gauss_load_1d(n, v.vector(),
                                       [&](double x) { return std::sqrt(x) + sg * x * x * x; });
        for (int i = 1; i < n; ++i) EXPECT_NEAR(r[i], one[i] - rhs[i], 1e-12);
    }
}

TEST(Energies, ZeroField) {
    const MeshPtr m = build_mesh(2, 4);
    EXPECT_EQ(energy_E(GridFunction(m), s0(m)), 0.0);
    EXPECT_EQ(energy_F(GridFunction(m), s0(m)), 0.0);
}

TEST(Energies, TorsionTermByTerm) {
    const int n = 128;
    const MeshPtr m = build_mesh(1, n);
    const GridFunction v = solve_torsion(m, 2.0, SolverOptions{});
    const double h = 1.0 / n;
    double grad = 0.0;
    for (int i = 0; i < n; ++i) grad += 0.5 * std::pow((v[i + 1] - v[i]) / h, 2.0) * h;
    const double xi[3] = {0.5 - std::sqrt(15.0) / 10.0, 0.5, 0.5 + std::sqrt(15.0) / 10.0};
    const double wt[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    double kq = 0.0, hs = 0.0;
    for (int c = 0; c < n; ++c)
        for (int k = 0; k < 3; ++k) {
            const double val = (1.0 - xi[k]) * v[c] + xi[k] * v[c + 1];
            kq += wt[k] * h * std::pow(val, 1.5);
            hs += wt[k] * h * std::pow(val, 4.0);
        }
    EXPECT_NEAR(energy_E(v, s0(m)), grad - kq / 1.5 - hs / 4.0, 1e-12);
    EXPECT_NEAR(energy_F(v, s0(m)), grad - kq / 1.5 + hs / 4.0, 1e-12);
}

TEST(Energies, FIsEvenForSingleSignedFields) {
    std::mt19937_64 rng(3);
    for (int dim : {1, 2}) {
        const MeshPtr m = build_mesh(dim, dim == 1 ? 64 : 12);
        const GridFunction u = random_field(m, rng);
        GridFunction neg = u;
        neg *= -1.0;
        EXPECT_EQ(energy_F(neg, s0(m, 2.0)), energy_F(u, s0(m, 2.0)));
    }
}

TEST(Jacobian, ConstantStateHandAssembly) {
    const int n = 20;
    const MeshPtr m = build_mesh(1, n);
    std::vector<double> u(n + 1, 1.0);
    u[0] = u[n] = 0.0;
    const double h = 1.0 / n;
    for (Sign sign : {Sign::Plus, Sign::Minus}) {
        const double lambda = 1.7;
        const ProblemSpec s = s0(m, lambda, sign);
        const SparseMatrix j = jacobian(u, s, SolverOptions{});
        const double c = lambda * 0.5 + sign_value(sign) * 3.0;
        // Interior rows 2..n-2 only see cells where u == 1 (interior unknown index = node - 1).
        for (int i = 2; i <= n - 2; ++i) {
            EXPECT_NEAR(j.coeff(i - 1, i - 1), 2.0 / h - c * 2.0 * h / 3.0, 1e-10);
            if (i + 1 <= n - 2) EXPECT_NEAR(j.coeff(i - 1, i), -1.0 / h - c * h / 6.0, 1e-10);
        }
    }
}

TEST(Jacobian, FiniteDifferenceCheck) {
    std::mt19937_64 rng(17);
    const SolverOptions opts;
    for (int dim : {1, 2}) {
        const MeshPtr m = build_mesh(dim, dim == 1 ? 40 : 8);
        for (double p : {1.5, 2.0, 3.0}) {
            for (Sign sign : {Sign::Plus, Sign::Minus}) {
                ProblemSpec s{p, 0.4 * (p - 1.0), p + 0.7, 1.3, sign, WeightField::sine(m, 0.3),
                              WeightField::affine(m, 1.0, 0.5)};
                const GridFunction u = random_field(m, rng);
                const GridFunction d = random_field(m, rng);
                const SparseMatrix j = jacobian(u.values(), s, opts);
                const Eigen::VectorXd jd = j * restrict_interior(*m, d.values());
                const double t = 1e-6;
                std::vector<double> up = u.vector(), um = u.vector();
                for (std::size_t i = 0; i < up.size(); ++i) {
                    up[i] += t * d[i];
                    um[i] -= t * d[i];
                }
                const auto r0 = weak_residual(um, s, opts);
                const auto r1 = weak_residual(up, s, opts);
                std::vector<double> fd(r0.size());
                for (std::size_t i = 0; i < fd.size(); ++i) fd[i] = (r1[i] - r0[i]) / (2.0 * t);
                const Eigen::VectorXd fdi = restrict_interior(*m, fd);
                EXPECT_LE((fdi - jd).norm() / jd.norm(), 1e-5) << "dim=" << dim << " p=" << p << " sign=" << sign_value(sign);
                EXPECT_LE((SparseMatrix(j.transpose()) - j).norm(), 1e-12 * j.norm());
                EXPECT_EQ((j * Eigen::VectorXd::Zero(j.rows())).norm(), 0.0);
            }
        }
    }
}

TEST(Consistency, InnerProductIdentity) {
    std::mt19937_64 rng(5);
    for (int dim : {1, 2}) {
        const MeshPtr m = build_mesh(dim, dim == 1 ? 100 : 10);
        for (double p : {1.6, 2.0, 3.5}) {
            const GridFunction u = random_field(m, rng);
            const double eps = 1e-3;
            const auto r = plap_apply(u, p, eps);
            double lhs = 0.0;
            for (int i : m->interior_nodes()) lhs += r[i] * u[i];
            double rhs = 0.0;
            const auto g = cell_gradients(*m, u.values());
            for (std::size_t c = 0; c < m->num_cells(); ++c) {
                const double gs = g[c][0] * g[c][0] + g[c][1] * g[c][1];
                rhs += std::pow(gs + eps * eps, 0.5 * (p - 2.0)) * gs * m->measure(c);
            }
            EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, rhs));
            const auto r0 = plap_apply(u, p, 0.0);
            double lhs0 = 0.0;
            for (int i : m->interior_nodes()) lhs0 += r0[i] * u[i];
            EXPECT_NEAR(lhs0, p * gradient_energy(*m, u.values(), p), 1e-12 * std::max(1.0, lhs0));
        }
    }
}

TEST(Consistency, OperatorIsMonotone) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> noise(0.0, 0.3);
    for (int dim : {1, 2}) {
        const MeshPtr m = build_mesh(dim, dim == 1 ? 60 : 9);
        for (int trial = 0; trial < 30; ++trial) {
            const double p = 1.2 + 0.1 * trial;
            GridFunction u = random_field(m, rng);
            GridFunction w = random_field(m, rng);
            for (int i : m->interior_nodes()) {
                u[i] += noise(rng);
                w[i] += noise(rng);
            }
            const auto au = plap_apply(u, p, 1e-8);
            const auto aw = plap_apply(w, p, 1e-8);
            double s = 0.0;
            for (int i : m->interior_nodes()) s += (au[i] - aw[i]) * (u[i] - w[i]);
            EXPECT_GE(s, -1e-12);
        }
    }
}

TEST(Consistency, NewtonStepLowersEnergyForLoadProblem) {
    // -Delta_p u = 1 is the Euler-Lagrange equation of (1/p)|grad u|^p - integral u.
    const MeshPtr m = build_mesh(1, 64);
    const SolverOptions opts;
    const double p = 3.0;
    const auto one = load_vector(GridFunction(m, std::vector<double>(m->num_nodes(), 1.0)));
    auto energy = [&](std::span<const double> u) {
        double lin = 0.0;
        for (int i : m->interior_nodes()) lin += one[i] * u[i];
        return gradient_energy(*m, u, p) - lin;
    };
    ResidualMap res = [&](std::span<const double> z) {
        auto r = plap_apply(*m, z, p, opts.effective_eps(*m));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= one[i];
        for (int b : m->boundary_nodes()) r[b] = 0.0;
        return r;
    };
    JacobianMap jac = [&](std::span<const double> z) { return plap_jacobian(*m, z, p, opts.effective_eps(*m)); };
    std::mt19937_64 rng(1);
    const GridFunction start = random_field(m, rng);
    NewtonOptions n;
    n.max_iter = 1;
    const NewtonResult r = newton_engine(*m, start.vector(), res, jac, n);
    ASSERT_EQ(r.iterations, 1);
    EXPECT_LT(energy(r.u), energy(start.values()));
}

}  // namespace
