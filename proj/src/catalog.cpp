#include "pdoe/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace pdoe {

double t_formula(double rho) {
  if (rho < -0.125) throw std::invalid_argument("t undefined for rho < -1/8");
  if (std::abs(rho) < 1e-8) return 2.0 - 4.0 * rho;  // series branch at the 0/0 point
  return 4.0 / (1.0 + std::sqrt(1.0 + 8.0 * rho));
}

double t_of_rho(double rho) {
  if (rho < 0.0)
    throw std::invalid_argument("rho must be non-negative; use the antagonistic constructor");
  return t_formula(rho);
}

double diagonal_det_factor(double s, double rho) {
  return s * s * s * s * std::exp(-2.0 * s - rho * s * s);
}

double axis_det_factor(double x) { return x * x * std::exp(-x); }

ModelSpec standardized_2d_model(double rho) {
  return ModelSpec(2, InteractionStructure::TwoDimWithInteraction, {0.0, -1.0, -1.0, -rho});
}

Design xi_diagonal_design(double s) {
  return Design({{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}, {s, s}},
                {0.25, 0.25, 0.25, 0.25});
}

Design design_1d(double beta1) {
  if (!(beta1 < 0.0))
    throw std::invalid_argument("no optimal design on unbounded region: requires beta1 < 0");
  return Design({{0.0}, {2.0 / std::abs(beta1)}}, {0.5, 0.5});
}

Design design_2d_no_interaction(double beta1, double beta2) {
  if (!(beta1 < 0.0) || !(beta2 < 0.0))
    throw std::invalid_argument("no optimal design on unbounded region: requires beta1, beta2 < 0");
  const double third = 1.0 / 3.0;
  return Design({{0.0, 0.0}, {2.0 / std::abs(beta1), 0.0}, {0.0, 2.0 / std::abs(beta2)}},
                {third, third, third});
}

Design design_2d_interaction(const std::array<double, 4>& beta) {
  const double b1 = beta[1], b2 = beta[2], b12 = beta[3];
  if (!(b1 < 0.0) || !(b2 < 0.0))
    throw std::invalid_argument("no optimal design on unbounded region: requires beta1, beta2 < 0");
  if (b12 > 0.0)
    throw std::invalid_argument("antagonistic interaction; use the bounded-region constructor (--bound)");
  const double rho = -b12 / (b1 * b2);
  const double t = t_of_rho(rho);
  const double s1 = 1.0 / std::abs(b1);
  const double s2 = 1.0 / std::abs(b2);
  return Design({{0.0, 0.0}, {2.0 * s1, 0.0}, {0.0, 2.0 * s2}, {t * s1, t * s2}},
                {0.25, 0.25, 0.25, 0.25});
}

Design design_product_k(int k, const std::vector<double>& beta) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  const ModelSpec model(k, InteractionStructure::Complete, beta);
  const auto& terms = model.terms();
  for (std::size_t t = 1; t < terms.size(); ++t) {
    const double want = terms[t].size() == 1 ? -1.0 : 0.0;
    if (beta[t] != want)
      throw std::invalid_argument(
          "product design requires main effects -1 and all interactions 0");
  }
  const int n = 1 << k;
  std::vector<Point> pts;
  pts.reserve(n);
  for (int mask = 0; mask < n; ++mask) {
    Point x(k, 0.0);
    for (int j = 0; j < k; ++j)
      if (mask & (1 << j)) x[j] = 2.0;
    pts.push_back(std::move(x));
  }
  return Design(std::move(pts), std::vector<double>(n, 1.0 / n));
}

namespace {

std::vector<Point> axial_and_pair_points(int k) {
  std::vector<Point> pts;
  pts.emplace_back(k, 0.0);
  for (int i = 0; i < k; ++i) {
    Point x(k, 0.0);
    x[i] = 2.0;
    pts.push_back(std::move(x));
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      Point x(k, 0.0);
      x[i] = 2.0;
      x[j] = 2.0;
      pts.push_back(std::move(x));
    }
  return pts;
}

}  // namespace

Design design_kdim_first_order(int k) {
  if (k < 2) throw std::invalid_argument("first-order design requires k >= 2");
  auto pts = axial_and_pair_points(k);
  const std::size_t n = pts.size();
  return Design(std::move(pts), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Design design_kdim_second_order(int k) {
  if (k < 3) throw std::invalid_argument("second-order design requires k >= 3");
  auto pts = axial_and_pair_points(k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (int l = j + 1; l < k; ++l) {
        Point x(k, 0.0);
        x[i] = x[j] = x[l] = 2.0;
        pts.push_back(std::move(x));
      }
  const std::size_t n = pts.size();
  return Design(std::move(pts), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Design design_faces(int k, const std::vector<double>& rho_matrix) {
  if (k < 3) throw std::invalid_argument("faces design requires k >= 3");
  if (rho_matrix.size() != static_cast<std::size_t>(k) * k)
    throw std::invalid_argument("rho matrix must be k x k");
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      if (rho_matrix[i * k + j] != rho_matrix[j * k + i])
        throw std::invalid_argument("rho matrix must be symmetric");
      if (rho_matrix[i * k + j] < 0.0)
        throw std::invalid_argument("faces design requires rho_ij >= 0");
    }
  std::vector<Point> pts;
  pts.emplace_back(k, 0.0);
  for (int i = 0; i < k; ++i) {
    Point x(k, 0.0);
    x[i] = 2.0;
    pts.push_back(std::move(x));
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const double t = t_of_rho(rho_matrix[i * k + j]);
      Point x(k, 0.0);
      x[i] = t;
      x[j] = t;
      pts.push_back(std::move(x));
    }
  const std::size_t n = pts.size();
  return Design(std::move(pts), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ClassRestrictedDesign design_antagonistic_class(double rho, double b) {
  if (!(rho < 0.0)) throw std::invalid_argument("antagonistic constructor requires rho < 0");
  if (b < 2.0) throw std::invalid_argument("bounded antagonistic designs require b >= 2");
  ClassRestrictedDesign out{xi_diagonal_design(b), true, 'b', b};
  if (rho > -0.125) {
    const double t = t_formula(rho);
    // ties go to the interior point
    if (t <= b && diagonal_det_factor(t, rho) >= diagonal_det_factor(b, rho)) {
      out.design = xi_diagonal_design(t);
      out.branch = 'a';
      out.diagonal_coord = t;
    }
  }
  return out;
}

Design shift_design(const Design& design, const std::vector<double>& a) {
  if (a.size() != static_cast<std::size_t>(design.k()))
    throw std::invalid_argument("shift vector dimension mismatch");
  for (double v : a)
    if (!(v >= 0.0)) throw std::invalid_argument("shift must be non-negative");
  std::vector<Point> pts = design.points();
  for (auto& x : pts)
    for (std::size_t c = 0; c < a.size(); ++c) x[c] += a[c];
  return Design(std::move(pts), design.weights());
}

bool rectangle_validity(const Design& design, const std::vector<double>& b) {
  if (b.size() != static_cast<std::size_t>(design.k()))
    throw std::invalid_argument("bound vector dimension mismatch");
  for (const auto& x : design.points())
    for (std::size_t c = 0; c < b.size(); ++c)
      if (x[c] < 0.0 || x[c] > b[c]) return false;
  return true;
}

}  // namespace pdoe
