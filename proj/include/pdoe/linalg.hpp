#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pdoe::linalg {

// Dense, row-major, symmetric matrix helpers for the small (p <= ~45)
// information matrices this library works with.

struct Ldlt {
  std::size_t n = 0;
  std::vector<double> lower;   // unit lower triangle, row-major n*n
  std::vector<double> pivots;  // diagonal of D
  bool positive_definite = false;
  double logdet = 0.0;         // sum of log pivots; -inf when not PD
};

// LDL^T factorization of a symmetric matrix without pivoting.  The matrix is
// flagged as not positive definite when any pivot falls below
// rel_tol * max diagonal entry of the input (or is non-positive).
Ldlt ldlt(std::span<const double> a, std::size_t n, double rel_tol = 1e-12);

// Inverse from an LDL^T factorization of a positive definite matrix.
std::vector<double> spd_inverse(const Ldlt& f);

double quad_form(std::span<const double> a, std::span<const double> x);
std::vector<double> matvec(std::span<const double> a, std::span<const double> x);
std::vector<double> matmul(std::span<const double> a, std::span<const double> b,
                           std::size_t n);
double max_abs_off_identity(std::span<const double> m, std::size_t n);

// Eigenvalues of a symmetric matrix by the cyclic Jacobi method, ascending.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n);

// Solves a general small linear system by Gaussian elimination with partial
// pivoting (polynomial fits in the contour checks).
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b,
                                std::size_t n);

}  // namespace pdoe::linalg
