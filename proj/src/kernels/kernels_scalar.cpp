#include "plcc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plcc::kernels {
namespace {

void pow_shifted_scalar(const double* x, double shift, double r, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(x[i] + shift, r);
}

double weighted_abs_pow_sum_scalar(const double* w, const double* x, double r, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::pow(std::abs(x[i]), r);
    return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double max_abs_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

double min_diff_scalar(const double* a, const double* b, std::size_t n) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::min(m, a[i] - b[i]);
    return m;
}

constexpr KernelTable kScalar{
    "scalar",
    pow_shifted_scalar,
    weighted_abs_pow_sum_scalar,
    dot_scalar,
    axpy_scalar,
    max_abs_scalar,
    min_diff_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace plcc::kernels
