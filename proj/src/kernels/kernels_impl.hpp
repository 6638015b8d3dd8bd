#pragma once

#include <cstddef>

namespace pdoe::kernels::detail {

void exp_batch_scalar(const double* x, double* out, std::size_t n);
void quad_form_batch_scalar(const double* f, std::size_t n, std::size_t p,
                            const double* a, double* out);
void deduced_2d_batch_scalar(const double* x1, const double* x2, std::size_t n,
                             const double* a, double scale, const double* beta,
                             double* d);

#if defined(PDOE_HAVE_AVX2)
void exp_batch_avx2(const double* x, double* out, std::size_t n);
void quad_form_batch_avx2(const double* f, std::size_t n, std::size_t p,
                          const double* a, double* out);
void deduced_2d_batch_avx2(const double* x1, const double* x2, std::size_t n,
                           const double* a, double scale, const double* beta,
                           double* d);
#endif

}  // namespace pdoe::kernels::detail
