#if defined(PDOE_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "kernels_impl.hpp"

namespace pdoe::kernels::detail {

namespace {

// exp for 4 doubles, Cephes-style: range reduction against log(2) split in
// two parts, Pade approximation on the reduced argument, two-step 2^n scaling
// so the full double range (including subnormal results) is covered.
// Saturates to +inf above 709.78 and to 0 below -745.14, matching std::exp.
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);

  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

  const __m256d overflow = _mm256_set1_pd(709.782712893383996732);
  const __m256d underflow = _mm256_set1_pd(-745.133219101941108420);

  const __m256d hi_mask = _mm256_cmp_pd(x, overflow, _CMP_GT_OQ);
  const __m256d lo_mask = _mm256_cmp_pd(x, underflow, _CMP_LT_OQ);
  __m256d xc = _mm256_min_pd(_mm256_max_pd(x, underflow), overflow);

  const __m256d n = _mm256_floor_pd(_mm256_fmadd_pd(xc, log2e, _mm256_set1_pd(0.5)));
  xc = _mm256_fnmadd_pd(n, ln2_hi, xc);
  xc = _mm256_fnmadd_pd(n, ln2_lo, xc);

  const __m256d xx = _mm256_mul_pd(xc, xc);
  __m256d px = _mm256_fmadd_pd(p0, xx, p1);
  px = _mm256_fmadd_pd(px, xx, p2);
  px = _mm256_mul_pd(px, xc);
  __m256d qx = _mm256_fmadd_pd(q0, xx, q1);
  qx = _mm256_fmadd_pd(qx, xx, q2);
  qx = _mm256_fmadd_pd(qx, xx, q3);
  const __m256d e =
      _mm256_fmadd_pd(_mm256_set1_pd(2.0),
                      _mm256_div_pd(px, _mm256_sub_pd(qx, px)), _mm256_set1_pd(1.0));

  // 2^n = 2^half * 2^rest with n split in the double domain (n is integral and
  // |n| <= 1100, so both halves sit in the normal exponent range).
  const __m256d half_d = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
  const __m256d rest_d = _mm256_sub_pd(n, half_d);
  const __m256i half = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(half_d));
  const __m256i rest = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(rest_d));
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256d s1 =
      _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(half, bias), 52));
  const __m256d s2 =
      _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(rest, bias), 52));
  __m256d r = _mm256_mul_pd(_mm256_mul_pd(e, s1), s2);

  r = _mm256_blendv_pd(r, _mm256_set1_pd(HUGE_VAL), hi_mask);
  r = _mm256_blendv_pd(r, _mm256_setzero_pd(), lo_mask);
  const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  r = _mm256_blendv_pd(r, x, nan_mask);
  return r;
}

}  // namespace

void exp_batch_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = std::exp(x[i]);
}

void quad_form_batch_avx2(const double* f, std::size_t n, std::size_t p,
                          const double* a, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* fi = f + i * p;
    double total = 0.0;
    for (std::size_t r = 0; r < p; ++r) {
      const double* arow = a + r * p;
      __m256d acc = _mm256_setzero_pd();
      std::size_t c = 0;
      for (; c + 4 <= p; c += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(arow + c), _mm256_loadu_pd(fi + c), acc);
      alignas(32) double lanes[4];
      _mm256_store_pd(lanes, acc);
      double row = lanes[0] + lanes[1] + lanes[2] + lanes[3];
      for (; c < p; ++c) row += arow[c] * fi[c];
      total += fi[r] * row;
    }
    out[i] = total;
  }
}

void deduced_2d_batch_avx2(const double* x1, const double* x2, std::size_t n,
                           const double* a, double scale, const double* beta,
                           double* d) {
  const __m256d a00 = _mm256_set1_pd(a[0]);
  const __m256d a01 = _mm256_set1_pd(2.0 * a[1]);
  const __m256d a02 = _mm256_set1_pd(2.0 * a[2]);
  const __m256d a03 = _mm256_set1_pd(2.0 * (a[3] + a[6]));
  const __m256d a11 = _mm256_set1_pd(a[5]);
  const __m256d a13 = _mm256_set1_pd(2.0 * a[7]);
  const __m256d a22 = _mm256_set1_pd(a[10]);
  const __m256d a23 = _mm256_set1_pd(2.0 * a[11]);
  const __m256d a33 = _mm256_set1_pd(a[15]);
  const __m256d b0 = _mm256_set1_pd(beta[0]);
  const __m256d b1 = _mm256_set1_pd(beta[1]);
  const __m256d b2 = _mm256_set1_pd(beta[2]);
  const __m256d b3 = _mm256_set1_pd(beta[3]);
  const __m256d sc = _mm256_set1_pd(scale);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d u = _mm256_loadu_pd(x1 + i);
    const __m256d v = _mm256_loadu_pd(x2 + i);
    const __m256d uv = _mm256_mul_pd(u, v);

    __m256d q = a00;
    q = _mm256_fmadd_pd(u, _mm256_fmadd_pd(u, a11, a01), q);
    q = _mm256_fmadd_pd(v, _mm256_fmadd_pd(v, a22, a02), q);
    q = _mm256_fmadd_pd(uv, _mm256_fmadd_pd(uv, a33, a03), q);
    q = _mm256_fmadd_pd(_mm256_mul_pd(u, uv), a13, q);
    q = _mm256_fmadd_pd(_mm256_mul_pd(v, uv), a23, q);

    __m256d eta = _mm256_fmadd_pd(b1, u, b0);
    eta = _mm256_fmadd_pd(b2, v, eta);
    eta = _mm256_fmadd_pd(b3, uv, eta);

    const __m256d inv_lambda = exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), eta));
    _mm256_storeu_pd(d + i, _mm256_fmsub_pd(sc, q, inv_lambda));
  }
  if (i < n)
    deduced_2d_batch_scalar(x1 + i, x2 + i, n - i, a, scale, beta, d + i);
}

}  // namespace pdoe::kernels::detail

#endif  // PDOE_HAVE_AVX2
