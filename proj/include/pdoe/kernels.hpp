#pragma once

#include <cstddef>

// Batch kernels behind the grid sweeps and the multiplicative weight updates.
// Scalar reference implementations always exist; on x86-64 an AVX2/FMA variant
// of each kernel is compiled in and selected at runtime.  The variants are
// equivalence-tested against the scalar reference in tests/test_kernels.cpp.

namespace pdoe::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
const char* backend_name(Backend b);
bool avx2_supported();

// Selects a backend explicitly; throws std::invalid_argument when the
// requested backend is not available on this machine.
void use_backend(Backend b);
void use_best_backend();

// out[i] = exp(x[i]).  Saturates to +inf / 0 outside the double range,
// never produces NaN for finite input.
void exp_batch(const double* x, double* out, std::size_t n);

// f holds n rows of length p (row-major), a is a symmetric p x p matrix:
// out[i] = f_i' a f_i.
void quad_form_batch(const double* f, std::size_t n, std::size_t p,
                     const double* a, double* out);

// Fused sweep kernel for two active variables with an interaction term.
// With f = (1, x1[i], x2[i], x1[i]*x2[i]), a = 4x4 symmetric, beta = 4-vector:
//   d[i] = scale * f' a f - exp(-(f . beta))
// Finite inputs give -inf (never NaN) when the exponential overflows.
void deduced_2d_batch(const double* x1, const double* x2, std::size_t n,
                      const double* a, double scale, const double* beta,
                      double* d);

}  // namespace pdoe::kernels
