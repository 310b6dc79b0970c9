// AVX2 + FMA variants. Functions carry target attributes instead of the whole
// translation unit being built with -mavx2, so nothing here can leak AVX2 code
// into inline functions shared with the scalar build.

#include "plcc/kernels.hpp"

#include <immintrin.h>

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>

#define PLCC_AVX2 __attribute__((target("avx2,fma")))

namespace plcc::kernels {
namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLog2e = 1.44269504088896338700e+00;
constexpr double kSqrt2 = 1.41421356237309514547e+00;

PLCC_AVX2 inline __m256d splat(double v) { return _mm256_set1_pd(v); }

// Natural log for strictly positive finite lanes (normal or subnormal).
// log(m) on m in [sqrt(1/2), sqrt(2)) via 2*atanh(s), s = (m-1)/(m+1), |s| < 0.1716,
// series truncated at s^23 (next term below 1e-18 relative).
PLCC_AVX2 __m256d log_pd(__m256d x) {
    const __m256d tiny = splat(DBL_MIN);
    const __m256d sub = _mm256_cmp_pd(x, tiny, _CMP_LT_OQ);
    x = _mm256_blendv_pd(x, _mm256_mul_pd(x, splat(18014398509481984.0)), sub);  // 2^54
    __m256d e_adj = _mm256_and_pd(sub, splat(-54.0));

    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i biased = _mm256_srli_epi64(bits, 52);
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
    __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, magic)),
                              splat(4503599627370496.0));  // 2^52
    e = _mm256_add_pd(_mm256_sub_pd(e, splat(1023.0)), e_adj);

    const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3ff0000000000000LL);
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

    const __m256d big = _mm256_cmp_pd(m, splat(kSqrt2), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, splat(0.5)), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, splat(1.0)));

    const __m256d f = _mm256_sub_pd(m, splat(1.0));
    const __m256d s = _mm256_div_pd(f, _mm256_add_pd(splat(2.0), f));
    const __m256d z = _mm256_mul_pd(s, s);

    __m256d r = splat(1.0 / 23.0);
    r = _mm256_fmadd_pd(r, z, splat(1.0 / 21.0));
    r = _mm256_fmadd_pd(r, z, splat(1.0 / 19.0));
    r = _mm256_fmadd_pd(r, z, splat(1.0 / 17.0));
    r = _mm256_fmadd_pd(r, z, splat(1.0 / 15.0));
    r = _mm256_fmadd_pd(r, z, splat(1.0 / 13.0));
    r = _mm256_fmadd_pd(r, z, splat(1.0 / 11.0));
    r = _mm256_fmadd_pd(r, z, splat(1.0 / 9.0));
    r = _mm256_fmadd_pd(r, z, splat(1.0 / 7.0));
    r = _mm256_fmadd_pd(r, z, splat(1.0 / 5.0));
    r = _mm256_fmadd_pd(r, z, splat(1.0 / 3.0));
    r = _mm256_mul_pd(r, z);

    const __m256d two_s = _mm256_add_pd(s, s);
    const __m256d log_m = _mm256_fmadd_pd(two_s, r, two_s);
    return _mm256_add_pd(_mm256_mul_pd(e, splat(kLn2Hi)),
                         _mm256_fmadd_pd(e, splat(kLn2Lo), log_m));
}

// 2^k for integral k in [-1022, 1023], k held as double.
PLCC_AVX2 inline __m256d exp2_int(__m256d k) {
    const __m256d shifter = splat(6755399441055744.0);  // 1.5 * 2^52
    const __m256i ki = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(k, shifter)),
                                        _mm256_castpd_si256(shifter));
    return _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(ki, _mm256_set1_epi64x(1023)), 52));
}

PLCC_AVX2 __m256d exp_pd(__m256d y) {
    const __m256d hi_lim = splat(709.782712893384);
    const __m256d lo_lim = splat(-745.1332191019412);
    const __m256d overflow = _mm256_cmp_pd(y, hi_lim, _CMP_GT_OQ);
    const __m256d underflow = _mm256_cmp_pd(y, lo_lim, _CMP_LT_OQ);
    const __m256d yc = _mm256_min_pd(_mm256_max_pd(y, lo_lim), hi_lim);

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(yc, splat(kLog2e)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d t = _mm256_fnmadd_pd(n, splat(kLn2Hi), yc);
    t = _mm256_fnmadd_pd(n, splat(kLn2Lo), t);

    // Taylor to degree 13, |t| <= 0.3466.
    __m256d p = splat(1.0 / 6227020800.0);
    p = _mm256_fmadd_pd(p, t, splat(1.0 / 479001600.0));
    p = _mm256_fmadd_pd(p, t, splat(1.0 / 39916800.0));
    p = _mm256_fmadd_pd(p, t, splat(1.0 / 3628800.0));
    p = _mm256_fmadd_pd(p, t, splat(1.0 / 362880.0));
    p = _mm256_fmadd_pd(p, t, splat(1.0 / 40320.0));
    p = _mm256_fmadd_pd(p, t, splat(1.0 / 5040.0));
    p = _mm256_fmadd_pd(p, t, splat(1.0 / 720.0));
    p = _mm256_fmadd_pd(p, t, splat(1.0 / 120.0));
    p = _mm256_fmadd_pd(p, t, splat(1.0 / 24.0));
    p = _mm256_fmadd_pd(p, t, splat(1.0 / 6.0));
    p = _mm256_fmadd_pd(p, t, splat(0.5));
    p = _mm256_fmadd_pd(p, t, splat(1.0));
    p = _mm256_fmadd_pd(p, t, splat(1.0));

    // Split the scale so both factors stay normal (n ranges over [-1075, 1024]).
    const __m256d n1 = _mm256_floor_pd(_mm256_mul_pd(n, splat(0.5)));
    const __m256d n2 = _mm256_sub_pd(n, n1);
    __m256d res = _mm256_mul_pd(_mm256_mul_pd(p, exp2_int(n1)), exp2_int(n2));

    res = _mm256_blendv_pd(res, splat(std::numeric_limits<double>::infinity()), overflow);
    res = _mm256_blendv_pd(res, _mm256_setzero_pd(), underflow);
    return res;
}

// b^r for b >= 0 lanes; zero lanes handled by the caller's mask.
PLCC_AVX2 inline __m256d pow_pos(__m256d b, double r) {
    return exp_pd(_mm256_mul_pd(splat(r), log_pd(b)));
}

PLCC_AVX2 __m256d pow_nonneg(__m256d b, double r) {
    if (r == 1.0) return b;
    if (r == 2.0) return _mm256_mul_pd(b, b);
    if (r == 0.5) return _mm256_sqrt_pd(b);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d is_zero = _mm256_cmp_pd(b, zero, _CMP_EQ_OQ);
    const __m256d is_inf = _mm256_cmp_pd(b, splat(std::numeric_limits<double>::infinity()), _CMP_EQ_OQ);
    const __m256d safe = _mm256_blendv_pd(b, splat(1.0), _mm256_or_pd(is_zero, is_inf));
    __m256d res = pow_pos(safe, r);
    const double zero_val = r > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    const double inf_val = r > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    res = _mm256_blendv_pd(res, splat(zero_val), is_zero);
    res = _mm256_blendv_pd(res, splat(inf_val), is_inf);
    return res;
}

PLCC_AVX2 void pow_shifted_avx2(const double* x, double shift, double r, double* out, std::size_t n) {
    std::size_t i = 0;
    if (r == 0.0) {
        for (; i < n; ++i) out[i] = 1.0;
        return;
    }
    const __m256d vs = splat(shift);
    const __m256d zero = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d b = _mm256_add_pd(_mm256_loadu_pd(x + i), vs);
        const __m256d neg = _mm256_cmp_pd(b, zero, _CMP_LT_OQ);
        const __m256d nan = _mm256_cmp_pd(b, b, _CMP_UNORD_Q);
        if (_mm256_movemask_pd(_mm256_or_pd(neg, nan)) != 0) {
            for (std::size_t j = i; j < i + 4; ++j) out[j] = std::pow(x[j] + shift, r);
            continue;
        }
        _mm256_storeu_pd(out + i, pow_nonneg(b, r));
    }
    for (; i < n; ++i) out[i] = std::pow(x[i] + shift, r);
}

PLCC_AVX2 double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

PLCC_AVX2 double weighted_abs_pow_sum_avx2(const double* w, const double* x, double r, std::size_t n) {
    const __m256d sign = splat(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d b = _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i));
        const __m256d v = r == 0.0 ? splat(1.0) : pow_nonneg(b, r);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * std::pow(std::abs(x[i]), r);
    return s;
}

PLCC_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

PLCC_AVX2 void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = splat(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

PLCC_AVX2 double max_abs_avx2(const double* x, std::size_t n) {
    const __m256d sign = splat(-0.0);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    double r = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) r = std::max(r, std::abs(x[i]));
    return r;
}

PLCC_AVX2 double min_diff_avx2(const double* a, const double* b, std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    __m256d m = splat(inf);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        m = _mm256_min_pd(m, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    double r = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
    for (; i < n; ++i) r = std::min(r, a[i] - b[i]);
    return r;
}

constexpr KernelTable kAvx2{
    "avx2",
    pow_shifted_avx2,
    weighted_abs_pow_sum_avx2,
    dot_avx2,
    axpy_avx2,
    max_abs_avx2,
    min_diff_avx2,
};

}  // namespace

const KernelTable* avx2_table() {
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2;
    return nullptr;
}

}  // namespace plcc::kernels
