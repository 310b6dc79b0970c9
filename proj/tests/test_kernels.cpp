#include <gtest/gtest.h>

#include "plcc/kernels.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace {

using plcc::kernels::KernelTable;

const KernelTable* simd() { return plcc::kernels::avx2_table(); }

std::vector<double> random_values(std::size_t n, double lo, double hi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

double rel_err(double a, double b) {
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

TEST(Kernels, ScalarPowShiftedMatchesStdPow) {
    const auto& s = plcc::kernels::scalar_table();
    const std::vector<double> x{0.0, 0.5, 1.0, 2.0, 10.0};
    std::vector<double> out(x.size());
    s.pow_shifted(x.data(), 0.0, 1.5, out.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_DOUBLE_EQ(out[i], std::pow(x[i], 1.5));
    s.pow_shifted(x.data(), 0.0, 0.0, out.data(), x.size());
    EXPECT_EQ(out[0], 1.0);
}

TEST(Kernels, ScalarReductions) {
    const auto& s = plcc::kernels::scalar_table();
    const std::vector<double> a{1.0, -4.0, 2.0};
    const std::vector<double> b{0.5, 1.0, 3.0};
    EXPECT_EQ(s.max_abs(a.data(), 3), 4.0);
    EXPECT_EQ(s.min_diff(a.data(), b.data(), 3), -5.0);
    EXPECT_EQ(s.dot(a.data(), b.data(), 3), 0.5 - 4.0 + 6.0);
    EXPECT_EQ(s.max_abs(a.data(), 0), 0.0);
    EXPECT_TRUE(std::isinf(s.min_diff(a.data(), b.data(), 0)));
    std::vector<double> y = b;
    s.axpy(2.0, a.data(), y.data(), 3);
    EXPECT_EQ(y[1], -7.0);
}

TEST(Kernels, SelectionHonorsNames) {
    EXPECT_TRUE(plcc::kernels::select("scalar"));
    EXPECT_EQ(plcc::kernels::active().name, "scalar");
    EXPECT_FALSE(plcc::kernels::select("no-such-variant"));
    if (simd() != nullptr) {
        EXPECT_TRUE(plcc::kernels::select("avx2"));
        EXPECT_EQ(plcc::kernels::active().name, "avx2");
    }
    plcc::kernels::select("scalar");
}

class SimdEquivalence : public ::testing::Test {
protected:
    void SetUp() override {
        if (simd() == nullptr) GTEST_SKIP() << "AVX2 variant unavailable on this machine";
    }
};

TEST_F(SimdEquivalence, PowShiftedAcrossExponentsAndLengths) {
    const auto& s = plcc::kernels::scalar_table();
    const auto& v = *simd();
    const double exponents[] = {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 7.5, -0.5, -1.0};
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u, 1003u}) {
        auto x = random_values(n, 0.0, 50.0, n + 7);
        if (n > 2) {
            x[0] = 0.0;
            x[1] = 1e-300;
            x[2] = 1e-310;
        }
        for (double r : exponents) {
            std::vector<double> a(n), b(n);
            s.pow_shifted(x.data(), 0.0, r, a.data(), n);
            v.pow_shifted(x.data(), 0.0, r, b.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                if (std::isinf(a[i])) {
                    EXPECT_TRUE(std::isinf(b[i])) << "r=" << r << " x=" << x[i];
                    continue;
                }
                EXPECT_LE(rel_err(a[i], b[i]), 1e-13) << "r=" << r << " x=" << x[i];
            }
        }
    }
}

TEST_F(SimdEquivalence, PowShiftedWithShiftAndWideRange) {
    const auto& s = plcc::kernels::scalar_table();
    const auto& v = *simd();
    std::vector<double> x(4096);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::pow(10.0, -30.0 + 60.0 * i / (x.size() - 1));
    for (double r : {0.3, 1.7, 3.0}) {
        std::vector<double> a(x.size()), b(x.size());
        s.pow_shifted(x.data(), 1e-12, r, a.data(), x.size());
        v.pow_shifted(x.data(), 1e-12, r, b.data(), x.size());
        for (std::size_t i = 0; i < x.size(); ++i) EXPECT_LE(rel_err(a[i], b[i]), 1e-13) << x[i];
    }
}

TEST_F(SimdEquivalence, WeightedAbsPowSum) {
    const auto& s = plcc::kernels::scalar_table();
    const auto& v = *simd();
    for (std::size_t n : {1u, 6u, 255u, 3072u}) {
        const auto w = random_values(n, 0.0, 1.0, 11 + n);
        const auto x = random_values(n, -3.0, 3.0, 13 + n);
        for (double r : {1.5, 2.0, 4.0, 0.5}) {
            EXPECT_LE(rel_err(s.weighted_abs_pow_sum(w.data(), x.data(), r, n),
                              v.weighted_abs_pow_sum(w.data(), x.data(), r, n)),
                      1e-13);
        }
    }
}

TEST_F(SimdEquivalence, LinearAlgebraKernels) {
    const auto& s = plcc::kernels::scalar_table();
    const auto& v = *simd();
    for (std::size_t n : {0u, 1u, 2u, 5u, 8u, 1001u}) {
        const auto a = random_values(n, -1.0, 1.0, 3 + n);
        const auto b = random_values(n, -1.0, 1.0, 5 + n);
        if (n > 0) {
            EXPECT_LE(rel_err(s.dot(a.data(), b.data(), n), v.dot(a.data(), b.data(), n)), 1e-12);
        }
        EXPECT_EQ(s.max_abs(a.data(), n), v.max_abs(a.data(), n));
        EXPECT_EQ(s.min_diff(a.data(), b.data(), n), v.min_diff(a.data(), b.data(), n));
        std::vector<double> ya = b, yb = b;
        s.axpy(0.37, a.data(), ya.data(), n);
        v.axpy(0.37, a.data(), yb.data(), n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ya[i], yb[i], 1e-15);
    }
}

TEST_F(SimdEquivalence, NegativeInputsFallBackToReference) {
    const auto& s = plcc::kernels::scalar_table();
    const auto& v = *simd();
    const std::vector<double> x{-1.0, -0.5, 2.0, -8.0, 3.0};
    std::vector<double> a(x.size()), b(x.size());
    s.pow_shifted(x.data(), 0.0, 2.0, a.data(), x.size());
    v.pow_shifted(x.data(), 0.0, 2.0, b.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_DOUBLE_EQ(a[i], b[i]);
    s.pow_shifted(x.data(), 0.0, 0.5, a.data(), x.size());
    v.pow_shifted(x.data(), 0.0, 0.5, b.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(std::isnan(a[i]), std::isnan(b[i]));
}

}  // namespace
