#include "pdoe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pdoe::linalg {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

Ldlt ldlt(std::span<const double> a, std::size_t n, double rel_tol) {
  if (a.size() != n * n) throw std::invalid_argument("ldlt: size mismatch");
  Ldlt f;
  f.n = n;
  f.lower.assign(n * n, 0.0);
  f.pivots.assign(n, 0.0);

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i * n + i]));
  const double threshold = rel_tol * scale;

  f.positive_definite = true;
  double logdet = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k)
      d -= f.lower[j * n + k] * f.lower[j * n + k] * f.pivots[k];
    f.pivots[j] = d;
    if (!(d > threshold) || !std::isfinite(d)) {
      f.positive_definite = false;
      f.logdet = kNegInf;
      return f;
    }
    logdet += std::log(d);
    f.lower[j * n + j] = 1.0;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k)
        v -= f.lower[i * n + k] * f.lower[j * n + k] * f.pivots[k];
      f.lower[i * n + j] = v / d;
    }
  }
  f.logdet = logdet;
  return f;
}

std::vector<double> spd_inverse(const Ldlt& f) {
  if (!f.positive_definite)
    throw std::invalid_argument("spd_inverse: matrix not positive definite");
  const std::size_t n = f.n;
  std::vector<double> inv(n * n, 0.0);
  std::vector<double> y(n);
  for (std::size_t col = 0; col < n; ++col) {
    // forward solve L y = e_col
    for (std::size_t i = 0; i < n; ++i) {
      double v = (i == col) ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) v -= f.lower[i * n + k] * y[k];
      y[i] = v;
    }
    for (std::size_t i = 0; i < n; ++i) y[i] /= f.pivots[i];
    // back solve L^T x = y
    for (std::size_t ii = n; ii-- > 0;) {
      double v = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) v -= f.lower[k * n + ii] * inv[k * n + col];
      inv[ii * n + col] = v;
    }
  }
  // symmetrize against rounding
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (inv[i * n + j] + inv[j * n + i]);
      inv[i * n + j] = v;
      inv[j * n + i] = v;
    }
  return inv;
}

double quad_form(std::span<const double> a, std::span<const double> x) {
  const std::size_t n = x.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += a[i * n + j] * x[j];
    total += x[i] * row;
  }
  return total;
}

std::vector<double> matvec(std::span<const double> a, std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) v += a[i * n + j] * x[j];
    y[i] = v;
  }
  return y;
}

std::vector<double> matmul(std::span<const double> a, std::span<const double> b,
                           std::size_t n) {
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  return c;
}

double max_abs_off_identity(std::span<const double> m, std::size_t n) {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double target = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(m[i * n + j] - target));
    }
  return worst;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("eigenvalues: size mismatch");
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i * n + i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b,
                                std::size_t n) {
  if (a.size() != n * n || b.size() != n)
    throw std::invalid_argument("solve_dense: size mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(a[i * n + col]) > std::abs(a[piv * n + col])) piv = i;
    if (a[piv * n + col] == 0.0) throw std::runtime_error("solve_dense: singular system");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
      std::swap(b[piv], b[col]);
    }
    const double inv_p = 1.0 / a[col * n + col];
    for (std::size_t i = col + 1; i < n; ++i) {
      const double factor = a[i * n + col] * inv_p;
      if (factor == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[i * n + j] -= factor * a[col * n + j];
      b[i] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double v = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) v -= a[ii * n + j] * x[j];
    x[ii] = v / a[ii * n + ii];
  }
  return x;
}

}  // namespace pdoe::linalg
