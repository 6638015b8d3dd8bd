#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pdoe/linalg.hpp"

using namespace pdoe;

TEST_CASE("ldlt factors a known SPD matrix") {
  // [[4,2],[2,3]] = L D L^T with D = (4, 2), L21 = 1/2
  const std::vector<double> a{4.0, 2.0, 2.0, 3.0};
  const auto f = linalg::ldlt(a, 2);
  REQUIRE(f.positive_definite);
  CHECK(f.pivots[0] == doctest::Approx(4.0));
  CHECK(f.pivots[1] == doctest::Approx(2.0));
  CHECK(f.logdet == doctest::Approx(std::log(8.0)));
}

TEST_CASE("ldlt flags rank-deficient matrices") {
  // e1 e1^T: top-left 1, everything else 0
  std::vector<double> a(16, 0.0);
  a[0] = 1.0;
  const auto f = linalg::ldlt(a, 4);
  CHECK_FALSE(f.positive_definite);
  CHECK(std::isinf(f.logdet));
  CHECK(f.logdet < 0);
}

TEST_CASE("inverse of random SPD matrices hits the identity") {
  std::mt19937 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + rep % 7;
    std::vector<double> g(n * n);
    for (auto& v : g) v = gauss(rng);
    // a = g g^T + I keeps it well conditioned
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = (i == j) ? 1.0 : 0.0;
        for (std::size_t k = 0; k < n; ++k) s += g[i * n + k] * g[j * n + k];
        a[i * n + j] = s;
      }
    const auto f = linalg::ldlt(a, n);
    REQUIRE(f.positive_definite);
    const auto inv = linalg::spd_inverse(f);
    const auto prod = linalg::matmul(inv, a, n);
    CHECK(linalg::max_abs_off_identity(prod, n) < 1e-9);
  }
}

TEST_CASE("jacobi eigenvalues match known spectrum") {
  // [[2,1],[1,2]] has eigenvalues 1 and 3
  const auto ev = linalg::symmetric_eigenvalues({2.0, 1.0, 1.0, 2.0}, 2);
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(3.0));
}

TEST_CASE("solve_dense recovers a seeded solution") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  const std::size_t n = 5;
  std::vector<double> a(n * n);
  for (auto& v : a) v = unif(rng);
  std::vector<double> x_true(n);
  for (auto& v : x_true) v = unif(rng);
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b[i] += a[i * n + j] * x_true[j];
  const auto x = linalg::solve_dense(a, b, n);
  for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-9));
}
