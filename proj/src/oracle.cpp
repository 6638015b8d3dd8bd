#include "pdoe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pdoe/kernels.hpp"
#include "pdoe/linalg.hpp"

namespace pdoe {

CandidateGrid CandidateGrid::regular(const std::vector<double>& upper, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  const int k = static_cast<int>(upper.size());
  if (k < 1) throw std::invalid_argument("grid needs at least one dimension");
  std::vector<std::vector<double>> axes(k);
  for (int d = 0; d < k; ++d) {
    if (!(upper[d] > 0.0)) throw std::invalid_argument("grid bounds must be positive");
    const std::size_t m = static_cast<std::size_t>(std::floor(upper[d] / step + 1e-9));
    for (std::size_t i = 0; i <= m; ++i) axes[d].push_back(i * step);
  }
  CandidateGrid grid;
  grid.region = RegionSpec::rectangle(upper);
  grid.step = step;
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  grid.points.reserve(total);
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    Point x(k);
    for (int d = 0; d < k; ++d) x[d] = axes[d][idx[d]];
    grid.points.push_back(std::move(x));
    int d = k - 1;
    while (d >= 0 && ++idx[d] == axes[d].size()) idx[d--] = 0;
    if (d < 0) break;
  }
  return grid;
}

void CandidateGrid::add_points(const std::vector<Point>& extra) {
  for (const auto& x : extra) {
    bool dup = false;
    for (const auto& y : points) {
      bool same = x.size() == y.size();
      for (std::size_t c = 0; same && c < x.size(); ++c)
        same = std::abs(x[c] - y[c]) <= Design::kDuplicateTol;
      if (same) {
        dup = true;
        break;
      }
    }
    if (!dup) points.push_back(x);
  }
}

namespace {

Design cluster_support(const std::vector<Point>& pts, const std::vector<double>& w,
                       double radius) {
  const std::size_t n = pts.size();
  const int k = static_cast<int>(pts[0].size());
  // highest weight seeds first
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (w[a] != w[b]) return w[a] > w[b];
    return a < b;
  });
  std::vector<bool> used(n, false);
  std::vector<Point> centers;
  std::vector<double> weights;
  for (std::size_t seed : order) {
    if (used[seed]) continue;
    Point centroid(k, 0.0);
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      double dist2 = 0.0;
      for (int c = 0; c < k; ++c) {
        const double diff = pts[i][c] - pts[seed][c];
        dist2 += diff * diff;
      }
      if (dist2 <= radius * radius) {
        used[i] = true;
        mass += w[i];
        for (int c = 0; c < k; ++c) centroid[c] += w[i] * pts[i][c];
      }
    }
    for (int c = 0; c < k; ++c) centroid[c] = std::max(centroid[c] / mass, 0.0);
    centers.push_back(std::move(centroid));
    weights.push_back(mass);
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& v : weights) v /= total;
  return Design(std::move(centers), std::move(weights));
}

}  // namespace

OracleResult multiplicative_optimize(const ModelSpec& model, const CandidateGrid& grid,
                                     std::size_t max_iter, double tol,
                                     double prune_threshold) {
  const std::size_t n = grid.points.size();
  const int p = model.p();
  if (n < static_cast<std::size_t>(p))
    throw std::invalid_argument("candidate grid smaller than the parameter count");

  // fixed per-candidate data
  std::vector<double> frows(n * p), lambda(n);
  {
    std::vector<double> eta(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (grid.points[i].size() != static_cast<std::size_t>(model.k()))
        throw std::invalid_argument("point/model dimension");
      fill_regression_row(model, grid.points[i].data(), frows.data() + i * p);
      double e = 0.0;
      for (int t = 0; t < p; ++t) e += frows[i * p + t] * model.beta()[t];
      eta[i] = e;
    }
    kernels::exp_batch(eta.data(), lambda.data(), n);
  }

  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<double> m(static_cast<std::size_t>(p) * p);
  std::vector<double> psi(n);

  OracleResult result;
  result.logdet_trace.reserve(std::min<std::size_t>(max_iter, 1 << 20));

  std::size_t iter = 0;
  double gap = std::numeric_limits<double>::infinity();
  while (iter < max_iter) {
    // M = sum_i w_i lambda_i f_i f_i^T (upper triangle, then mirror)
    std::fill(m.begin(), m.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double c = w[i] * lambda[i];
      if (c == 0.0) continue;
      const double* fi = frows.data() + i * p;
      for (int r = 0; r < p; ++r) {
        const double cfr = c * fi[r];
        for (int s = r; s < p; ++s) m[r * p + s] += cfr * fi[s];
      }
    }
    for (int r = 0; r < p; ++r)
      for (int s = 0; s < r; ++s) m[r * p + s] = m[s * p + r];

    const auto fac = linalg::ldlt(m, p);
    if (!fac.positive_definite) {
      if (iter == 0)
        throw std::runtime_error("initial information matrix singular on this grid");
      throw std::runtime_error("information matrix became singular during optimization");
    }
    result.logdet_trace.push_back(fac.logdet);
    const auto inv = linalg::spd_inverse(fac);

    kernels::quad_form_batch(frows.data(), n, p, inv.data(), psi.data());
    double max_psi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      psi[i] *= lambda[i];
      max_psi = std::max(max_psi, psi[i]);
    }
    gap = max_psi / p - 1.0;
    ++iter;
    if (gap < tol) {
      result.converged = true;
      break;
    }

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] *= psi[i] / p;
      sum += w[i];
    }
    for (std::size_t i = 0; i < n; ++i) w[i] /= sum;
  }

  result.iterations = iter;
  result.final_max_sensitivity_gap = gap;

  // prune, renormalize, report
  std::vector<Point> support;
  std::vector<double> weights;
  double kept = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (w[i] > prune_threshold) {
      support.push_back(grid.points[i]);
      weights.push_back(w[i]);
      kept += w[i];
    }
  for (double& v : weights) v /= kept;

  result.grid_design = Design(support, weights);
  const double radius = grid.step > 0.0 ? 2.0 * grid.step : 1e-6;
  result.design = cluster_support(support, weights, radius);
  result.logdet = d_criterion(information_matrix(model, result.grid_design));
  return result;
}

ScalarMax maximize_scalar(double (*f)(double, double), double param, double lo,
                          double hi, int scan_points, double x_tol) {
  if (!(hi > lo)) throw std::invalid_argument("empty search interval");
  // coarse scan
  int best = 0;
  double best_val = f(lo, param);
  for (int i = 1; i < scan_points; ++i) {
    const double x = lo + (hi - lo) * i / (scan_points - 1.0);
    const double v = f(x, param);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double h = (hi - lo) / (scan_points - 1.0);
  double a = std::max(lo, lo + (best - 1) * h);
  double b = std::min(hi, lo + (best + 1) * h);

  // golden-section refinement on the bracketing interval
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c, param), fd = f(d, param);
  while (b - a > x_tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c, param);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d, param);
    }
  }
  ScalarMax out;
  out.x = 0.5 * (a + b);
  out.value = f(out.x, param);

  // Golden section alone stalls near sqrt(eps); one parabolic step through
  // samples wide enough to rise above rounding noise recovers ~1e-10 in x.
  const double delta = 1e-5 * std::max(1.0, std::abs(out.x));
  if (out.x - delta > lo && out.x + delta < hi) {
    const double f_lo = f(out.x - delta, param);
    const double f_mid = out.value;
    const double f_hi = f(out.x + delta, param);
    const double curvature = f_lo - 2.0 * f_mid + f_hi;
    if (curvature < 0.0) {
      const double step = 0.5 * delta * (f_lo - f_hi) / curvature;
      if (std::abs(step) < delta) {
        const double candidate = out.x + step;
        const double fc2 = f(candidate, param);
        if (fc2 >= out.value) {
          out.x = candidate;
          out.value = fc2;
        }
      }
    }
  }
  if (best_val > out.value) {
    out.x = lo + best * h;
    out.value = best_val;
  }
  return out;
}

namespace {

double axis_objective(double x, double) { return x * x * std::exp(-x); }

double diag_objective(double s, double rho) {
  return s * s * s * s * std::exp(-2.0 * s - rho * s * s);
}

}  // namespace

Design xi0_class_optimize(double rho, std::optional<double> b) {
  if (!b.has_value() && rho < 0.0)
    throw std::invalid_argument(
        "no optimal design exists on the unbounded region for rho < 0");
  // For rho >= 0 both factors decay, so a fixed window covers the unbounded case.
  const double axis_hi = b.value_or(12.0);
  const double diag_hi = b.value_or(12.0);
  const double axis = maximize_scalar(axis_objective, 0.0, 0.0, axis_hi).x;
  const double diag = maximize_scalar(diag_objective, rho, 0.0, diag_hi).x;
  return Design({{0.0, 0.0}, {axis, 0.0}, {0.0, axis}, {diag, diag}},
                {0.25, 0.25, 0.25, 0.25});
}

double compare_to_catalog(const ModelSpec& model, const Design& catalog_design,
                          const OracleResult& oracle, double min_efficiency) {
  double eff;
  try {
    eff = d_efficiency(model, oracle.design, catalog_design);
  } catch (const std::runtime_error&) {
    throw std::runtime_error("catalog design suboptimal");
  }
  if (eff < min_efficiency)
    throw std::runtime_error("oracle below expected efficiency");
  return eff;
}

}  // namespace pdoe
