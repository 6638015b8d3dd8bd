#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "pdoe/kernels.hpp"

using namespace pdoe;

namespace {

// Runs fn under every available backend and hands the per-backend outputs to
// check(scalar_result, other_result).
template <typename Work, typename Check>
void for_each_backend_pair(Work&& work, Check&& check) {
  kernels::use_backend(kernels::Backend::Scalar);
  const auto reference = work();
  if (kernels::avx2_supported()) {
    kernels::use_backend(kernels::Backend::Avx2);
    const auto candidate = work();
    check(reference, candidate);
  }
  kernels::use_best_backend();
}

}  // namespace

TEST_CASE("exp_batch equals std::exp across backends") {
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> unif(-700.0, 700.0);
  std::vector<double> x(1003);
  for (auto& v : x) v = unif(rng);
  // boundary and special values
  for (double v : {0.0, 1.0, -1.0, 709.0, 709.9, 710.0, -745.0, -745.2, -746.0,
                   -0.0, 1e-300, -1e-300, 708.5, -707.3,
                   std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()})
    x.push_back(v);

  auto run = [&] {
    std::vector<double> out(x.size());
    kernels::exp_batch(x.data(), out.data(), x.size());
    return out;
  };
  for_each_backend_pair(run, [&](const auto& ref, const auto& got) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::isinf(ref[i]) || ref[i] == 0.0) {
        CHECK(got[i] == ref[i]);
      } else {
        CHECK(std::abs(got[i] - ref[i]) <= 1e-14 * ref[i]);
      }
    }
  });

  // scalar reference is std::exp by definition
  kernels::use_backend(kernels::Backend::Scalar);
  std::vector<double> out(x.size());
  kernels::exp_batch(x.data(), out.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(out[i] == std::exp(x[i]));
  kernels::use_best_backend();
}

TEST_CASE("quad_form_batch agrees across backends and with a direct loop") {
  std::mt19937 rng(321);
  std::uniform_real_distribution<double> unif(-1.5, 1.5);
  for (std::size_t p : {3u, 4u, 7u, 11u, 15u}) {
    const std::size_t n = 257;
    std::vector<double> f(n * p), a(p * p);
    for (auto& v : f) v = unif(rng);
    for (std::size_t r = 0; r < p; ++r)
      for (std::size_t c = r; c < p; ++c) a[r * p + c] = a[c * p + r] = unif(rng);

    auto run = [&] {
      std::vector<double> out(n);
      kernels::quad_form_batch(f.data(), n, p, a.data(), out.data());
      return out;
    };
    for_each_backend_pair(run, [&](const auto& ref, const auto& got) {
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(got[i] - ref[i]) <= 1e-12 * (1.0 + std::abs(ref[i])));
    });

    kernels::use_backend(kernels::Backend::Scalar);
    std::vector<double> out(n);
    kernels::quad_form_batch(f.data(), n, p, a.data(), out.data());
    for (std::size_t i = 0; i < n; ++i) {
      double expect = 0.0;
      for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < p; ++c)
          expect += f[i * p + r] * a[r * p + c] * f[i * p + c];
      CHECK(out[i] == doctest::Approx(expect).epsilon(1e-12));
    }
    kernels::use_best_backend();
  }
}

TEST_CASE("deduced_2d_batch agrees across backends and never yields NaN") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> coord(0.0, 60.0);
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  const std::size_t n = 513;
  std::vector<double> x1(n), x2(n);
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] = coord(rng);
    x2[i] = coord(rng);
  }
  x1[0] = 50.0;
  x2[0] = 50.0;  // 1/lambda overflows at rho = 1 -> d must be -inf
  double a[16];
  for (int r = 0; r < 4; ++r)
    for (int c = r; c < 4; ++c) a[r * 4 + c] = a[c * 4 + r] = entry(rng);
  const double beta[4] = {0.0, -1.0, -1.0, -1.0};

  auto run = [&] {
    std::vector<double> d(n);
    kernels::deduced_2d_batch(x1.data(), x2.data(), n, a, 0.25, beta, d.data());
    return d;
  };
  for_each_backend_pair(run, [&](const auto& ref, const auto& got) {
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isinf(ref[i])) {
        CHECK(got[i] == ref[i]);
      } else {
        CHECK(std::abs(got[i] - ref[i]) <= 1e-11 * (1.0 + std::abs(ref[i])));
      }
    }
  });

  kernels::use_backend(kernels::Backend::Scalar);
  std::vector<double> d(n);
  kernels::deduced_2d_batch(x1.data(), x2.data(), n, a, 0.25, beta, d.data());
  CHECK(std::isinf(d[0]));
  CHECK(d[0] < 0);
  for (std::size_t i = 0; i < n; ++i) CHECK_FALSE(std::isnan(d[i]));
  kernels::use_best_backend();
}

TEST_CASE("backend selection is explicit and reversible") {
  kernels::use_backend(kernels::Backend::Scalar);
  CHECK(kernels::active_backend() == kernels::Backend::Scalar);
  if (kernels::avx2_supported()) {
    kernels::use_backend(kernels::Backend::Avx2);
    CHECK(kernels::active_backend() == kernels::Backend::Avx2);
  } else {
    CHECK_THROWS_AS(kernels::use_backend(kernels::Backend::Avx2), std::invalid_argument);
  }
  kernels::use_best_backend();
}
