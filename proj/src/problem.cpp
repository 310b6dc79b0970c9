#include "plcc/problem.hpp"

#include "plcc/errors.hpp"

#include <cmath>
#include <sstream>

namespace plcc {

std::vector<std::string> validate(const ProblemSpec& spec) {
    auto fail = [](const std::string& msg) { throw InvalidSpec(msg); };
    if (!std::isfinite(spec.p) || !(spec.p > 1.0)) fail("p must be > 1");
    if (!std::isfinite(spec.q) || !(spec.q > 0.0)) fail("q must be > 0");
    if (!(spec.q < spec.p - 1.0)) fail("exponents must satisfy q < p - 1");
    if (!std::isfinite(spec.sigma) || !(spec.p - 1.0 < spec.sigma)) fail("exponents must satisfy p - 1 < sigma");
    if (!std::isfinite(spec.lambda) || !(spec.lambda >= 0.0)) fail("lambda must be >= 0");
    if (&spec.k.mesh() != &spec.h.mesh()) fail("weights k and h must share one mesh");

    std::vector<std::string> warnings;
    const double n = spec.mesh().dimension();
    if (spec.p < n) {
        const double p_star = n * spec.p / (n - spec.p);
        if (!(spec.sigma < p_star - 1.0)) {
            std::ostringstream os;
            os << "sigma = " << spec.sigma << " is not below the critical exponent p* - 1 = " << p_star - 1.0;
            warnings.push_back(os.str());
        }
    }
    return warnings;
}

void SolverOptions::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidSpec(std::string(name) + " must be > 0");
    };
    if (!(eps_reg >= 0.0)) throw InvalidSpec("eps_reg must be >= 0");
    positive(tol_newton, "tol_newton");
    positive(tol_inner, "tol_inner");
    positive(tol_mono, "tol_mono");
    positive(tol_energy, "tol_energy");
    if (max_newton < 1 || max_mono < 1 || max_descent < 1 || max_eigen < 1)
        throw InvalidSpec("iteration limits must be >= 1");
    if (!(blowup > 1.0)) throw InvalidSpec("blowup threshold must be > 1");
}

}  // namespace plcc
