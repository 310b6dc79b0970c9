#include "plcc/newton.hpp"

#include "plcc/errors.hpp"
#include "plcc/quadrature.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>

namespace plcc {

std::string_view to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::Diverged: return "diverged";
        case SolveStatus::Stagnated: return "stagnated";
    }
    return "unknown";
}

std::optional<Eigen::VectorXd> solve_linear(const SparseMatrix& j, const Eigen::VectorXd& rhs) {
    {
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(j);
        if (ldlt.info() == Eigen::Success) {
            Eigen::VectorXd x = ldlt.solve(rhs);
            if (ldlt.info() == Eigen::Success && x.allFinite()) return x;
        }
    }
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(j);
    lu.factorize(j);
    if (lu.info() != Eigen::Success) return std::nullopt;
    Eigen::VectorXd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) return std::nullopt;
    return x;
}

namespace {

double merit(const Mesh& mesh, std::span<const double> r) {
    double s = 0.0;
    for (int i : mesh.interior_nodes()) s += r[i] * r[i];
    return std::sqrt(s);
}

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

NewtonResult newton_engine(const Mesh& mesh, std::vector<double> initial, const ResidualMap& residual,
                           const JacobianMap& jacobian, const NewtonOptions& opts) {
    NewtonResult out;
    out.u = std::move(initial);
    for (int b : mesh.boundary_nodes()) out.u[b] = 0.0;
    if (opts.project_nonnegative)
        for (double& v : out.u) v = std::max(v, 0.0);

    const double reference = opts.blowup_reference > 0.0 ? opts.blowup_reference
                                                          : std::max(sup_norm(out.u), 1e-300);
    std::vector<double> r = residual(out.u);
    double norm = residual_norm(mesh, r);
    double m = merit(mesh, r);
    out.residual_history.push_back(norm);
    out.merit_history.push_back(m);

    std::vector<double> trial(out.u.size());
    for (int it = 0; it <= opts.max_iter; ++it) {
        out.residual = norm;
        out.iterations = it;
        if (norm <= opts.tol) {
            out.status = SolveStatus::Converged;
            return out;
        }
        if (it == opts.max_iter) break;

        Eigen::VectorXd rhs = -restrict_interior(mesh, r);
        const auto step = solve_linear(jacobian(out.u), rhs);
        if (!step) break;

        bool accepted = false;
        double alpha = 1.0;
        std::vector<double> rt;
        for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
            trial = out.u;
            const auto idx = mesh.interior_nodes();
            for (std::size_t k = 0; k < idx.size(); ++k) trial[idx[k]] += alpha * (*step)[static_cast<Eigen::Index>(k)];
            if (opts.project_nonnegative)
                for (double& v : trial) v = std::max(v, 0.0);
            if (!all_finite(trial)) continue;
            try {
                rt = residual(trial);
            } catch (const DomainError&) {
                continue;
            }
            if (!all_finite(rt)) continue;
            const double mt = merit(mesh, rt);
            if (mt <= (1.0 - 1e-4 * alpha) * m) {
                accepted = true;
                m = mt;
                break;
            }
        }
        if (!accepted) break;

        out.u.swap(trial);
        r.swap(rt);
        norm = residual_norm(mesh, r);
        out.residual_history.push_back(norm);
        out.merit_history.push_back(m);
        if (sup_norm(out.u) > opts.blowup * reference) {
            out.status = SolveStatus::Diverged;
            out.residual = norm;
            out.iterations = it + 1;
            return out;
        }
    }
    out.status = norm <= opts.accept_floor ? SolveStatus::Converged : SolveStatus::Stagnated;
    out.residual = norm;
    return out;
}

}  // namespace plcc
