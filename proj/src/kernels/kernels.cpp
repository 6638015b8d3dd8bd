#include "pdoe/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernels_impl.hpp"

namespace pdoe::kernels {

namespace detail {

void exp_batch_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void quad_form_batch_scalar(const double* f, std::size_t n, std::size_t p,
                            const double* a, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* fi = f + i * p;
    double total = 0.0;
    for (std::size_t r = 0; r < p; ++r) {
      double row = 0.0;
      for (std::size_t c = 0; c < p; ++c) row += a[r * p + c] * fi[c];
      total += fi[r] * row;
    }
    out[i] = total;
  }
}

void deduced_2d_batch_scalar(const double* x1, const double* x2, std::size_t n,
                             const double* a, double scale, const double* beta,
                             double* d) {
  for (std::size_t i = 0; i < n; ++i) {
    const double u = x1[i];
    const double v = x2[i];
    const double uv = u * v;
    const double q = a[0] + u * (2.0 * a[1] + u * a[5]) + v * (2.0 * a[2] + v * a[10]) +
                     uv * (2.0 * a[3] + uv * a[15]) + 2.0 * u * v * a[6] +
                     2.0 * u * uv * a[7] + 2.0 * v * uv * a[11];
    const double eta = beta[0] + beta[1] * u + beta[2] * v + beta[3] * uv;
    d[i] = scale * q - std::exp(-eta);
  }
}

}  // namespace detail

namespace {

struct Dispatch {
  void (*exp_batch)(const double*, double*, std::size_t);
  void (*quad_form_batch)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*deduced_2d_batch)(const double*, const double*, std::size_t, const double*,
                           double, const double*, double*);
};

constexpr Dispatch kScalar{detail::exp_batch_scalar, detail::quad_form_batch_scalar,
                           detail::deduced_2d_batch_scalar};

#if defined(PDOE_HAVE_AVX2)
constexpr Dispatch kAvx2{detail::exp_batch_avx2, detail::quad_form_batch_avx2,
                         detail::deduced_2d_batch_avx2};
#endif

std::atomic<const Dispatch*> g_dispatch{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

const Dispatch* resolve() {
  const Dispatch* d = g_dispatch.load(std::memory_order_acquire);
  if (d) return d;
  use_best_backend();
  return g_dispatch.load(std::memory_order_acquire);
}

}  // namespace

bool avx2_supported() {
#if defined(PDOE_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() {
  resolve();
  return g_backend.load(std::memory_order_acquire);
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

void use_backend(Backend b) {
  switch (b) {
    case Backend::Scalar:
      g_backend.store(Backend::Scalar, std::memory_order_release);
      g_dispatch.store(&kScalar, std::memory_order_release);
      return;
    case Backend::Avx2:
#if defined(PDOE_HAVE_AVX2)
      if (avx2_supported()) {
        g_backend.store(Backend::Avx2, std::memory_order_release);
        g_dispatch.store(&kAvx2, std::memory_order_release);
        return;
      }
#endif
      throw std::invalid_argument("avx2 backend not available on this machine");
  }
  throw std::invalid_argument("unknown kernel backend");
}

void use_best_backend() {
  // PDOE_KERNELS=scalar forces the reference path for whole-suite comparisons.
  const char* env = std::getenv("PDOE_KERNELS");
  if (env && std::strcmp(env, "scalar") == 0) {
    use_backend(Backend::Scalar);
    return;
  }
#if defined(PDOE_HAVE_AVX2)
  if (avx2_supported()) {
    use_backend(Backend::Avx2);
    return;
  }
#endif
  use_backend(Backend::Scalar);
}

void exp_batch(const double* x, double* out, std::size_t n) {
  resolve()->exp_batch(x, out, n);
}

void quad_form_batch(const double* f, std::size_t n, std::size_t p,
                     const double* a, double* out) {
  resolve()->quad_form_batch(f, n, p, a, out);
}

void deduced_2d_batch(const double* x1, const double* x2, std::size_t n,
                      const double* a, double scale, const double* beta, double* d) {
  resolve()->deduced_2d_batch(x1, x2, n, a, scale, beta, d);
}

}  // namespace pdoe::kernels
