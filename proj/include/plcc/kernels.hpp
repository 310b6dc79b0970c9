#pragma once

// Data-parallel inner loops used by assembly, quadrature and the solvers.
//
// Every kernel has a portable scalar reference implementation. On x86-64 an
// AVX2+FMA variant is compiled into a separate translation unit and selected
// at runtime when the CPU supports it. Set PLCC_KERNELS=scalar (or avx2) in
// the environment to force a variant.

#include <cstddef>
#include <span>
#include <string_view>

namespace plcc::kernels {

struct KernelTable {
    std::string_view name;

    /// out[i] = (x[i] + shift)^r, for x[i] + shift >= 0. 0^0 == 1.
    void (*pow_shifted)(const double* x, double shift, double r, double* out, std::size_t n);

    /// sum_i w[i] * |x[i]|^r
    double (*weighted_abs_pow_sum)(const double* w, const double* x, double r, std::size_t n);

    double (*dot)(const double* a, const double* b, std::size_t n);

    /// y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

    /// max_i |x[i]|, 0 for n == 0
    double (*max_abs)(const double* x, std::size_t n);

    /// min_i (a[i] - b[i]), +inf for n == 0
    double (*min_diff)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table();

/// nullptr when the variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// Variant in use. Resolved once, on first call.
const KernelTable& active();

/// Force a variant by name ("scalar", "avx2"). Returns false if unavailable.
bool select(std::string_view name);

// Span conveniences over the active table.

inline void pow_shifted(std::span<const double> x, double shift, double r, std::span<double> out) {
    active().pow_shifted(x.data(), shift, r, out.data(), x.size());
}

inline double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, double r) {
    return active().weighted_abs_pow_sum(w.data(), x.data(), r, x.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double max_abs(std::span<const double> x) {
    return active().max_abs(x.data(), x.size());
}

inline double min_diff(std::span<const double> a, std::span<const double> b) {
    return active().min_diff(a.data(), b.data(), a.size());
}

}  // namespace plcc::kernels
