#include "pdoe/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "pdoe/catalog.hpp"
#include "pdoe/kernels.hpp"
#include "pdoe/linalg.hpp"
#include "pdoe/parallel.hpp"

namespace pdoe {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

long long binom(int n, int r) {
  if (r < 0 || r > n) return 0;
  long long v = 1;
  for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return v;
}

int pair_rank(int i, int j, int k) {
  // lexicographic rank of the pair (i, j), i < j, among all pairs from k
  return i * k - i * (i + 1) / 2 + (j - i - 1);
}

std::vector<double> axis_values(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (hi < lo) throw std::invalid_argument("empty axis range");
  std::vector<double> v;
  const std::size_t m = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  v.reserve(m + 2);
  for (std::size_t i = 0; i <= m; ++i) v.push_back(lo + static_cast<double>(i) * step);
  if (hi - v.back() > 1e-12 * std::max(1.0, std::abs(hi))) v.push_back(hi);
  return v;
}

bool tail_qualifies(const ModelSpec& model) {
  const auto& terms = model.terms();
  const auto& beta = model.beta();
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (terms[t].size() == 1 && !(beta[t] < 0.0)) return false;
    if (terms[t].size() >= 2 && beta[t] > 0.0) return false;
  }
  return true;
}

double resolve_x_max(const GridConfig& grid, const Design& design,
                     const std::vector<double>* shift) {
  if (grid.x_max > 0.0) return grid.x_max;
  double largest = 0.0;
  for (const auto& x : design.points())
    for (std::size_t c = 0; c < x.size(); ++c) {
      const double base = shift ? (*shift)[c] : 0.0;
      largest = std::max(largest, x[c] - base);
    }
  return std::max(20.0, 10.0 * largest);
}

// The deduced sensitivity restricted to two active variables (vi, vj) only
// needs the 4x4 block of M^-1 on the monomials {1, x_i, x_j, x_i x_j} and the
// matching beta entries; missing monomials map to zero entries.
struct Slice2D {
  double a4[16];
  double beta4[4];
  double scale;
};

Slice2D make_slice(const ModelSpec& model, const InfoMatrix& info, int vi, int vj) {
  const auto& terms = model.terms();
  int idx[4] = {-1, -1, -1, -1};
  const int lo = std::min(vi, vj), hi = std::max(vi, vj);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& tm = terms[t];
    if (tm.empty()) idx[0] = static_cast<int>(t);
    else if (tm.size() == 1 && tm[0] == vi) idx[1] = static_cast<int>(t);
    else if (tm.size() == 1 && tm[0] == vj) idx[2] = static_cast<int>(t);
    else if (tm.size() == 2 && tm[0] == lo && tm[1] == hi) idx[3] = static_cast<int>(t);
  }
  Slice2D s{};
  const int p = info.p;
  for (int r = 0; r < 4; ++r) {
    s.beta4[r] = idx[r] >= 0 ? model.beta()[idx[r]] : 0.0;
    for (int c = 0; c < 4; ++c)
      s.a4[r * 4 + c] = (idx[r] >= 0 && idx[c] >= 0)
                            ? info.inverse[idx[r] * p + idx[c]]
                            : 0.0;
  }
  s.scale = 1.0 / p;
  return s;
}

double eval_slice_d(const Slice2D& s, double x1, double x2) {
  double d;
  kernels::deduced_2d_batch(&x1, &x2, 1, s.a4, s.scale, s.beta4, &d);
  return d;
}

Point embed_point(int k, int vi, int vj, double u, double v) {
  Point x(k, 0.0);
  x[vi] = u;
  x[vj] = v;
  return x;
}

struct SweepAccum {
  double max_d = kNegInf;
  std::size_t arg_i = 0, arg_j = 0;
  std::vector<Violation> violations;
  double shell_max = kNegInf;
};

struct Sweep2DResult {
  double max_d = kNegInf;
  std::size_t arg_i = 0, arg_j = 0;
  std::vector<Violation> violations;
  double shell_max = kNegInf;
  std::size_t n_points = 0;
};

Sweep2DResult sweep_2d(const Slice2D& s, const std::vector<double>& ax1,
                       const std::vector<double>& ax2, double tol, int threads,
                       bool track_shell, int k, int vi, int vj) {
  const std::size_t n1 = ax1.size(), n2 = ax2.size();
  const std::size_t rows_per_chunk = 8;
  std::vector<SweepAccum> acc(chunk_count(n1, rows_per_chunk));
  parallel_chunks(n1, rows_per_chunk, threads,
                  [&](std::size_t c, std::size_t rb, std::size_t re) {
    SweepAccum& a = acc[c];
    std::vector<double> x1buf(n2), dbuf(n2);
    for (std::size_t i = rb; i < re; ++i) {
      std::fill(x1buf.begin(), x1buf.end(), ax1[i]);
      kernels::deduced_2d_batch(x1buf.data(), ax2.data(), n2, s.a4, s.scale,
                                s.beta4, dbuf.data());
      const bool row_shell = track_shell && (i + 1 == n1);
      for (std::size_t j = 0; j < n2; ++j) {
        const double d = dbuf[j];
        if (d > a.max_d) {
          a.max_d = d;
          a.arg_i = i;
          a.arg_j = j;
        }
        if (d > tol) a.violations.push_back({embed_point(k, vi, vj, ax1[i], ax2[j]), d});
        if ((row_shell || (track_shell && j + 1 == n2)) && d > a.shell_max)
          a.shell_max = d;
      }
    }
  });

  Sweep2DResult out;
  out.n_points = n1 * n2;
  for (const auto& a : acc) {
    if (a.max_d > out.max_d) {
      out.max_d = a.max_d;
      out.arg_i = a.arg_i;
      out.arg_j = a.arg_j;
    }
    out.shell_max = std::max(out.shell_max, a.shell_max);
    out.violations.insert(out.violations.end(), a.violations.begin(), a.violations.end());
  }
  return out;
}

struct SweepKResult {
  double max_d = kNegInf;
  Point argmax;
  std::vector<Violation> violations;
  double shell_max = kNegInf;
  std::size_t n_points = 0;
};

SweepKResult sweep_kd(const ModelSpec& model, const InfoMatrix& info,
                      const std::vector<std::vector<double>>& axes, double tol,
                      int threads, bool track_shell) {
  const int k = static_cast<int>(axes.size());
  const int p = info.p;
  const std::vector<double>& strip = axes[k - 1];
  const std::size_t ns = strip.size();

  std::size_t n_rows = 1;
  for (int d = 0; d + 1 < k; ++d) n_rows *= axes[d].size();
  std::vector<std::size_t> stride(k - 1, 1);
  for (int d = k - 3; d >= 0; --d) stride[d] = stride[d + 1] * axes[d + 1].size();

  struct Local {
    double max_d = kNegInf;
    std::size_t arg_row = 0, arg_j = 0;
    std::vector<Violation> violations;
    double shell_max = kNegInf;
  };

  const std::size_t rows_per_chunk = 4;
  std::vector<Local> acc(chunk_count(n_rows, rows_per_chunk));
  const auto& beta = model.beta();

  parallel_chunks(n_rows, rows_per_chunk, threads,
                  [&](std::size_t c, std::size_t rb, std::size_t re) {
    Local& a = acc[c];
    std::vector<double> coords(k), frows(ns * p), neg_eta(ns), inv_lambda(ns), qf(ns);
    for (std::size_t row = rb; row < re; ++row) {
      bool row_shell = false;
      for (int d = 0; d + 1 < k; ++d) {
        const std::size_t id = (row / stride[d]) % axes[d].size();
        coords[d] = axes[d][id];
        row_shell = row_shell || (id + 1 == axes[d].size());
      }
      for (std::size_t j = 0; j < ns; ++j) {
        coords[k - 1] = strip[j];
        double* frow = frows.data() + j * p;
        fill_regression_row(model, coords.data(), frow);
        double eta = 0.0;
        for (int t = 0; t < p; ++t) eta += frow[t] * beta[t];
        neg_eta[j] = -eta;
      }
      kernels::exp_batch(neg_eta.data(), inv_lambda.data(), ns);
      kernels::quad_form_batch(frows.data(), ns, p, info.inverse.data(), qf.data());
      for (std::size_t j = 0; j < ns; ++j) {
        const double d = qf[j] / p - inv_lambda[j];
        if (d > a.max_d) {
          a.max_d = d;
          a.arg_row = row;
          a.arg_j = j;
        }
        if (d > tol) {
          Point x(coords);
          x[k - 1] = strip[j];
          a.violations.push_back({std::move(x), d});
        }
        if (track_shell && (row_shell || j + 1 == ns) && d > a.shell_max)
          a.shell_max = d;
      }
    }
  });

  SweepKResult out;
  out.n_points = n_rows * ns;
  std::size_t best_row = 0, best_j = 0;
  for (const auto& a : acc) {
    if (a.max_d > out.max_d) {
      out.max_d = a.max_d;
      best_row = a.arg_row;
      best_j = a.arg_j;
    }
    out.shell_max = std::max(out.shell_max, a.shell_max);
    out.violations.insert(out.violations.end(), a.violations.begin(), a.violations.end());
  }
  out.argmax.assign(k, 0.0);
  for (int d = 0; d + 1 < k; ++d)
    out.argmax[d] = axes[d][(best_row / stride[d]) % axes[d].size()];
  out.argmax[k - 1] = strip[best_j];
  return out;
}

}  // namespace

RegionSpec RegionSpec::orthant() { return RegionSpec{Kind::Orthant, {}, {}}; }

RegionSpec RegionSpec::rectangle(std::vector<double> b) {
  for (double v : b)
    if (!(v > 0.0)) throw std::invalid_argument("rectangle bounds must be positive");
  return RegionSpec{Kind::Rectangle, std::move(b), {}};
}

RegionSpec RegionSpec::shifted_orthant(std::vector<double> a) {
  for (double v : a)
    if (!(v >= 0.0)) throw std::invalid_argument("shift must be non-negative");
  return RegionSpec{Kind::ShiftedOrthant, {}, std::move(a)};
}

RegionSpec RegionSpec::two_faces_union() {
  return RegionSpec{Kind::TwoFacesUnion, {}, {}};
}

HyperbolicCoords to_hyperbolic(const Point& x, double rho) {
  if (x.size() != 2) throw std::invalid_argument("hyperbolic coordinates need two variables");
  if (!(rho > 0.0))
    throw std::invalid_argument("use linear contours for rho = 0");
  if (x[0] < 0.0 || x[1] < 0.0)
    throw std::invalid_argument("point outside the non-negative quadrant");
  const double f1 = 1.0 + rho * x[0];
  const double f2 = 1.0 + rho * x[1];
  HyperbolicCoords h;
  h.rho = rho;
  h.v = std::sqrt(f1 * f2);
  h.u = 0.5 * std::log(f1 / f2);
  return h;
}

Point from_hyperbolic(const HyperbolicCoords& h) {
  if (!(h.rho > 0.0))
    throw std::invalid_argument("use linear contours for rho = 0");
  if (h.v < 1.0 - 1e-12 || std::abs(h.u) > std::log(h.v) + 1e-12)
    throw std::invalid_argument("outside quadrant");
  const double x1 = (h.v * std::exp(h.u) - 1.0) / h.rho;
  const double x2 = (h.v * std::exp(-h.u) - 1.0) / h.rho;
  return {std::max(x1, 0.0), std::max(x2, 0.0)};
}

VerificationReport verify_full_grid(const ModelSpec& model, const Design& design,
                                    const RegionSpec& region, const GridConfig& grid) {
  if (region.kind == RegionSpec::Kind::TwoFacesUnion)
    throw std::invalid_argument("use verify_faces for the two-faces region");
  if (design.k() != model.k()) throw std::invalid_argument("point/model dimension");
  const auto info = information_matrix(model, design);
  if (info.singular) throw std::runtime_error("design not fully informative");

  const int k = model.k();
  const double step = grid.step > 0.0 ? grid.step : (k == 2 ? 0.01 : 0.05);

  std::vector<std::vector<double>> axes(k);
  bool tail_applicable = false;
  switch (region.kind) {
    case RegionSpec::Kind::Orthant: {
      const double x_max = resolve_x_max(grid, design, nullptr);
      for (int d = 0; d < k; ++d) axes[d] = axis_values(0.0, x_max, step);
      tail_applicable = true;
      break;
    }
    case RegionSpec::Kind::Rectangle: {
      if (region.bounds.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("rectangle bounds dimension mismatch");
      for (int d = 0; d < k; ++d) axes[d] = axis_values(0.0, region.bounds[d], step);
      break;
    }
    case RegionSpec::Kind::ShiftedOrthant: {
      if (region.shift.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("shift dimension mismatch");
      const double x_max = resolve_x_max(grid, design, &region.shift);
      for (int d = 0; d < k; ++d)
        axes[d] = axis_values(region.shift[d], region.shift[d] + x_max, step);
      tail_applicable = true;
      break;
    }
    case RegionSpec::Kind::TwoFacesUnion:
      break;
  }

  VerificationReport rep;
  rep.region = region;
  rep.tolerance = grid.tolerance;

  if (k == 2) {
    const Slice2D s = make_slice(model, info, 0, 1);
    auto r = sweep_2d(s, axes[0], axes[1], grid.tolerance, grid.threads,
                      tail_applicable, 2, 0, 1);
    rep.max_d = r.max_d;
    rep.argmax = {axes[0][r.arg_i], axes[1][r.arg_j]};
    rep.violations = std::move(r.violations);
    rep.n_points = r.n_points;
    rep.shell_max_d = r.shell_max;
  } else {
    auto r = sweep_kd(model, info, axes, grid.tolerance, grid.threads, tail_applicable);
    rep.max_d = r.max_d;
    rep.argmax = std::move(r.argmax);
    rep.violations = std::move(r.violations);
    rep.n_points = r.n_points;
    rep.shell_max_d = r.shell_max;
  }

  rep.tail_checked = tail_applicable;
  if (tail_applicable)
    rep.tail_certified = tail_qualifies(model) && rep.shell_max_d < -1.0;
  return rep;
}

namespace {

bool swap_symmetric(const Design& design) {
  const auto& pts = design.points();
  const auto& w = design.weights();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (std::abs(pts[j][0] - pts[i][1]) <= Design::kDuplicateTol &&
          std::abs(pts[j][1] - pts[i][0]) <= Design::kDuplicateTol) {
        found = std::abs(w[j] - w[i]) <= 1e-12;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

VerificationReport verify_reduced(const ModelSpec& model, const Design& design,
                                  double rho, const GridConfig& grid) {
  if (model.k() != 2 || design.k() != 2)
    throw std::invalid_argument("reduction requires swap symmetry");
  const auto& beta = model.beta();
  if (std::abs(beta[1] - beta[2]) > 1e-12 || !swap_symmetric(design))
    throw std::invalid_argument("reduction requires swap symmetry");
  if (rho < 0.0) throw std::invalid_argument("rho must be non-negative");
  const double rho_model = -beta[3] / (beta[1] * beta[2]);
  if (std::abs(rho_model - rho) > 1e-9 * std::max(1.0, std::abs(rho)))
    throw std::invalid_argument("rho inconsistent with the model's interaction");

  const auto info = information_matrix(model, design);
  if (info.singular) throw std::runtime_error("design not fully informative");

  const double step = grid.step > 0.0 ? grid.step : 0.001;
  const double x_max = resolve_x_max(grid, design, nullptr);
  const std::vector<double> axis = axis_values(0.0, x_max, step);
  const std::size_t n = axis.size();
  const Slice2D s = make_slice(model, info, 0, 1);

  VerificationReport rep;
  rep.region = RegionSpec::orthant();
  rep.tolerance = grid.tolerance;
  rep.reduced = true;
  rep.max_d = kNegInf;
  rep.n_points = 3 * n;

  const std::vector<double> zeros(n, 0.0);
  std::vector<double> dbuf(n);
  struct Line {
    const double* x1;
    const double* x2;
  };
  const Line lines[3] = {{axis.data(), zeros.data()},
                         {zeros.data(), axis.data()},
                         {axis.data(), axis.data()}};
  for (const auto& line : lines) {
    kernels::deduced_2d_batch(line.x1, line.x2, n, s.a4, s.scale, s.beta4, dbuf.data());
    for (std::size_t j = 0; j < n; ++j) {
      const double d = dbuf[j];
      if (d > rep.max_d) {
        rep.max_d = d;
        rep.argmax = {line.x1[j], line.x2[j]};
      }
      if (d > grid.tolerance) rep.violations.push_back({{line.x1[j], line.x2[j]}, d});
    }
  }
  rep.tail_checked = true;
  rep.shell_max_d = std::max({eval_slice_d(s, x_max, 0.0), eval_slice_d(s, 0.0, x_max),
                              eval_slice_d(s, x_max, x_max)});
  rep.tail_certified = tail_qualifies(model) && rep.shell_max_d < -1.0;

  // Empirical support for the reduction: along sampled contours of constant
  // intensity the maximum must land on the diagonal (u = 0) or the boundary.
  rep.reduction_confirmed = true;
  const int n_contours = 8;
  const int n_samples = 257;
  for (int ci = 0; ci < n_contours && rep.reduction_confirmed; ++ci) {
    std::vector<double> x1s(n_samples), x2s(n_samples), ds(n_samples);
    if (rho > 0.0) {
      const double v_max = 1.0 + rho * x_max;
      const double v = std::exp(std::log(1.05) + (std::log(v_max) - std::log(1.05)) *
                                                     ci / (n_contours - 1.0));
      const double L = std::log(v);
      for (int j = 0; j < n_samples; ++j) {
        const Point x = from_hyperbolic({L * j / (n_samples - 1.0), v, rho});
        x1s[j] = x[0];
        x2s[j] = x[1];
      }
    } else {
      const double v = 0.5 + (x_max - 0.5) * ci / (n_contours - 1.0);
      for (int j = 0; j < n_samples; ++j) {
        const double u = v * j / (n_samples - 1.0);
        x1s[j] = v + u;
        x2s[j] = v - u;
      }
    }
    kernels::deduced_2d_batch(x1s.data(), x2s.data(), n_samples, s.a4, s.scale,
                              s.beta4, ds.data());
    int arg = 0;
    for (int j = 1; j < n_samples; ++j)
      if (ds[j] > ds[arg]) arg = j;
    const bool at_ends = (arg == 0 || arg == n_samples - 1) ||
                         ds[arg] <= std::max(ds[0], ds[n_samples - 1]) +
                                        1e-12 * (1.0 + std::abs(ds[arg]));
    rep.reduction_confirmed = at_ends;
  }
  return rep;
}

VerificationReport verify_reduced_antagonistic(const ModelSpec& model,
                                               const Design& design, double rho,
                                               double b, const GridConfig& grid) {
  if (model.k() != 2 || design.k() != 2)
    throw std::invalid_argument("reduction requires swap symmetry");
  const auto& beta = model.beta();
  if (std::abs(beta[1] - beta[2]) > 1e-12 || !swap_symmetric(design))
    throw std::invalid_argument("reduction requires swap symmetry");
  if (!(rho > -0.125) || !(rho < 0.0))
    throw std::invalid_argument("antagonistic reduction needs -1/8 < rho < 0");
  const double rho_model = -beta[3] / (beta[1] * beta[2]);
  if (std::abs(rho_model - rho) > 1e-9 * std::max(1.0, std::abs(rho)))
    throw std::invalid_argument("rho inconsistent with the model's interaction");
  const double mag = std::abs(rho);
  if (!(b > 0.0) || b > 1.0 / mag + 1e-12)
    throw std::invalid_argument("antagonistic reduction needs 0 < b <= 1/|rho|");
  if (!rectangle_validity(design, {b, b}))
    throw std::invalid_argument("design support must lie inside [0,b]^2");

  const auto info = information_matrix(model, design);
  if (info.singular) throw std::runtime_error("design not fully informative");

  const double step = grid.step > 0.0 ? grid.step : 0.001;
  const std::vector<double> axis = axis_values(0.0, b, step);
  const std::size_t n = axis.size();
  const Slice2D s = make_slice(model, info, 0, 1);

  VerificationReport rep;
  rep.region = RegionSpec::rectangle({b, b});
  rep.tolerance = grid.tolerance;
  rep.reduced = true;
  rep.experimental = true;
  rep.max_d = kNegInf;
  rep.n_points = 3 * n;

  const std::vector<double> zeros(n, 0.0);
  std::vector<double> dbuf(n);
  struct Line {
    const double* x1;
    const double* x2;
  };
  const Line lines[3] = {{axis.data(), zeros.data()},
                         {zeros.data(), axis.data()},
                         {axis.data(), axis.data()}};
  for (const auto& line : lines) {
    kernels::deduced_2d_batch(line.x1, line.x2, n, s.a4, s.scale, s.beta4, dbuf.data());
    for (std::size_t j = 0; j < n; ++j) {
      const double d = dbuf[j];
      if (d > rep.max_d) {
        rep.max_d = d;
        rep.argmax = {line.x1[j], line.x2[j]};
      }
      if (d > grid.tolerance) rep.violations.push_back({{line.x1[j], line.x2[j]}, d});
    }
  }

  // Contours of constant intensity now sit at v in (sqrt(1 - |rho| b), 1);
  // check empirically that the maximum over each still lands at the ends.
  const double f_b = std::max(0.0, 1.0 - mag * b);
  const double v_lo = std::sqrt(f_b);
  rep.reduction_confirmed = true;
  const int n_contours = 8;
  const int n_samples = 257;
  for (int ci = 0; ci < n_contours && rep.reduction_confirmed; ++ci) {
    const double v = v_lo + (1.0 - v_lo) * (ci + 0.5) / n_contours;
    const double u_max =
        f_b > 0.0 ? std::min(-std::log(v), std::log(v / f_b)) : -std::log(v);
    if (!(u_max > 0.0)) continue;
    std::vector<double> x1s(n_samples), x2s(n_samples), ds(n_samples);
    for (int j = 0; j < n_samples; ++j) {
      const double u = u_max * j / (n_samples - 1.0);
      x1s[j] = (1.0 - v * std::exp(u)) / mag;
      x2s[j] = (1.0 - v * std::exp(-u)) / mag;
    }
    kernels::deduced_2d_batch(x1s.data(), x2s.data(), n_samples, s.a4, s.scale,
                              s.beta4, ds.data());
    int arg = 0;
    for (int j = 1; j < n_samples; ++j)
      if (ds[j] > ds[arg]) arg = j;
    rep.reduction_confirmed = (arg == 0 || arg == n_samples - 1) ||
                              ds[arg] <= std::max(ds[0], ds[n_samples - 1]) +
                                             1e-12 * (1.0 + std::abs(ds[arg]));
  }
  return rep;
}

double q0_constant() { return 0.6; }

double q1_constant() {
  const double e2 = std::exp(2.0);
  const double e4 = std::exp(4.0);
  return (e2 + 2.0 + std::sqrt(e4 - 4.0 * e2)) / (4.0 * e2 + 2.0);
}

double h0_peak_closed_form() {
  const double e1 = std::exp(1.0);
  const double e2 = std::exp(2.0);
  const double e4 = std::exp(4.0);
  const double s = 3.0 * e1 - std::sqrt(e2 - 4.0);
  const double r = e2 + 2.0 + std::sqrt(e4 - 4.0 * e2);
  const double den = 2.0 * e2 + 1.0;
  return e4 * s * s * r / (8.0 * den * den * den);
}

HSplit h_split(double q, double t) {
  const double e2 = std::exp(2.0);
  const double qm1 = q - 1.0;
  const double lin = q * (t - 1.0) - 1.0;
  HSplit s;
  s.h0 = 0.5 * e2 * t * t * qm1 * qm1 * q * q + qm1 * qm1 * lin * lin;
  s.h1 = std::exp(q * (2.0 * t + (2.0 - t) * q)) - std::exp(t + 2.0) * q * q * q * q;
  s.h2 = (q <= q0_constant()) ? 1.0 : std::exp(t + 2.0) * qm1 * qm1 * q * q;
  return s;
}

double diagonal_inequality(double q, double t) {
  const HSplit s = h_split(q, t);
  return s.h0 - s.h1;
}

double h0_le_h2_bound(double q, double t) {
  const double e2 = std::exp(2.0);
  return (e2 * (t + 1.0) - (t - 1.0) * (t - 1.0)) * q * q + 2.0 * (t - 1.0) * q - 1.0;
}

ChainCheck h_chain_check(std::size_t n_q, std::size_t n_t, double q_max, double t_max,
                         double fp_slack) {
  if (n_q < 2 || n_t < 2) throw std::invalid_argument("chain check grid too small");
  ChainCheck r;
  const double inf = std::numeric_limits<double>::infinity();
  r.min_slack_low = inf;
  r.min_slack_h0_h2 = inf;
  r.min_slack_h2_h1 = inf;
  const double q0 = q0_constant();
  for (std::size_t iq = 0; iq < n_q; ++iq) {
    const double q = q_max * static_cast<double>(iq) / static_cast<double>(n_q - 1);
    for (std::size_t it = 0; it < n_t; ++it) {
      const double t = t_max * static_cast<double>(it) / static_cast<double>(n_t - 1);
      const HSplit s = h_split(q, t);
      if (q <= q0) {
        r.min_slack_low = std::min({r.min_slack_low, 1.0 - s.h0, s.h1 - 1.0});
      } else {
        r.min_slack_h0_h2 = std::min(r.min_slack_h0_h2, s.h2 - s.h0);
        r.min_slack_h2_h1 = std::min(r.min_slack_h2_h1, s.h1 - s.h2);
      }
    }
  }
  r.min_slack = std::min({r.min_slack_low, r.min_slack_h0_h2, r.min_slack_h2_h1});
  r.holds = r.min_slack >= -fp_slack;
  r.n_points = n_q * n_t;
  return r;
}

KDimDesignMatrix build_kdim_F(int k, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("order must be 1 or 2");
  if (order == 1 && k < 2) throw std::invalid_argument("order 1 requires k >= 2");
  if (order == 2 && k < 3) throw std::invalid_argument("order 2 requires k >= 3");

  const int c2 = static_cast<int>(binom(k, 2));
  const int c3 = order == 2 ? static_cast<int>(binom(k, 3)) : 0;
  const int p = 1 + k + c2 + c3;

  KDimDesignMatrix m;
  m.k = k;
  m.order = order;
  m.p = p;
  m.A.assign(p, 0.0);
  m.A[0] = 1.0;
  for (int i = 0; i < k; ++i) m.A[1 + i] = 2.0;
  for (int r = 0; r < c2; ++r) m.A[1 + k + r] = 4.0;
  for (int r = 0; r < c3; ++r) m.A[1 + k + c2 + r] = 8.0;

  m.S2.assign(static_cast<std::size_t>(c2) * k, 0.0);
  {
    int r = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j, ++r) {
        m.S2[r * k + i] = 1.0;
        m.S2[r * k + j] = 1.0;
      }
  }
  if (order == 2) {
    m.S3.assign(static_cast<std::size_t>(c3) * k, 0.0);
    m.S23.assign(static_cast<std::size_t>(c3) * c2, 0.0);
    int r = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        for (int l = j + 1; l < k; ++l, ++r) {
          m.S3[r * k + i] = 1.0;
          m.S3[r * k + j] = 1.0;
          m.S3[r * k + l] = 1.0;
          m.S23[r * c2 + pair_rank(i, j, k)] = 1.0;
          m.S23[r * c2 + pair_rank(i, l, k)] = 1.0;
          m.S23[r * c2 + pair_rank(j, l, k)] = 1.0;
        }
  }

  std::vector<double> b(static_cast<std::size_t>(p) * p, 0.0);
  std::vector<double> binv(static_cast<std::size_t>(p) * p, 0.0);
  auto set = [p](std::vector<double>& mat, int r, int c, double v) { mat[r * p + c] = v; };

  set(b, 0, 0, 1.0);
  set(binv, 0, 0, 1.0);
  for (int i = 0; i < k; ++i) {
    set(b, 1 + i, 0, 1.0);
    set(b, 1 + i, 1 + i, 1.0);
    set(binv, 1 + i, 0, -1.0);
    set(binv, 1 + i, 1 + i, 1.0);
  }
  {
    int r = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j, ++r) {
        const int row = 1 + k + r;
        set(b, row, 0, 1.0);
        set(b, row, 1 + i, 1.0);
        set(b, row, 1 + j, 1.0);
        set(b, row, row, 1.0);
        set(binv, row, 0, 1.0);
        set(binv, row, 1 + i, -1.0);
        set(binv, row, 1 + j, -1.0);
        set(binv, row, row, 1.0);
      }
  }
  if (order == 2) {
    int r = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        for (int l = j + 1; l < k; ++l, ++r) {
          const int row = 1 + k + c2 + r;
          set(b, row, 0, 1.0);
          set(b, row, 1 + i, 1.0);
          set(b, row, 1 + j, 1.0);
          set(b, row, 1 + l, 1.0);
          set(b, row, 1 + k + pair_rank(i, j, k), 1.0);
          set(b, row, 1 + k + pair_rank(i, l, k), 1.0);
          set(b, row, 1 + k + pair_rank(j, l, k), 1.0);
          set(b, row, row, 1.0);
          set(binv, row, 0, -1.0);
          set(binv, row, 1 + i, 1.0);
          set(binv, row, 1 + j, 1.0);
          set(binv, row, 1 + l, 1.0);
          set(binv, row, 1 + k + pair_rank(i, j, k), -1.0);
          set(binv, row, 1 + k + pair_rank(i, l, k), -1.0);
          set(binv, row, 1 + k + pair_rank(j, l, k), -1.0);
          set(binv, row, row, 1.0);
        }
  }

  m.F.assign(static_cast<std::size_t>(p) * p, 0.0);
  m.F_inv.assign(static_cast<std::size_t>(p) * p, 0.0);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < p; ++c) {
      m.F[r * p + c] = b[r * p + c] * m.A[c];
      m.F_inv[r * p + c] = binv[r * p + c] / m.A[r];
    }
  return m;
}

double kdim_diagonal_sensitivity(int k, int order, int j, double q) {
  if (order != 1 && order != 2) throw std::invalid_argument("order must be 1 or 2");
  if (j < 2 || j > k) throw std::invalid_argument("face dimension j must lie in [2, k]");
  if (q < 0.0) throw std::invalid_argument("q must be non-negative");
  const double e2 = std::exp(2.0);
  const double e4 = std::exp(4.0);
  const double c2j = static_cast<double>(binom(j, 2));
  const double q2 = q * q;
  if (order == 1) {
    const double a = c2j * q2 - j * q + 1.0;
    const double bb = (j - 1.0) * q2 - q;
    return a * a + j * e2 * bb * bb + c2j * e4 * q2 * q2 - std::exp(2.0 * j * q);
  }
  const double e6 = std::exp(6.0);
  const double c3j = static_cast<double>(binom(j, 3));
  const double q3 = q2 * q;
  const double a = c3j * q3 - c2j * q2 + j * q - 1.0;
  const double bb = (c2j - j + 1.0) * q3 - (j - 1.0) * q2 + q;
  const double cc = (j - 2.0) * q3 - q2;
  return a * a + j * e2 * bb * bb + c2j * e4 * cc * cc + c3j * e6 * q3 * q3 -
         std::exp(2.0 * j * q);
}

double cross_check_diagonal_formula(int k, int order, int j, double q) {
  const auto structure = order == 1 ? InteractionStructure::FirstOrder
                                    : InteractionStructure::SecondOrder;
  const int p = ModelSpec::term_count(k, structure);
  std::vector<double> beta(p, 0.0);
  for (int i = 0; i < k; ++i) beta[1 + i] = -1.0;
  const ModelSpec model(k, structure, std::move(beta));
  const Design design =
      order == 1 ? design_kdim_first_order(k) : design_kdim_second_order(k);
  Point x(k, 0.0);
  for (int i = 0; i < j; ++i) x[i] = 2.0 * q;
  const double via_pipeline = deduced_sensitivity(model, design, x);
  const double via_formula = kdim_diagonal_sensitivity(k, order, j, q);
  return std::abs(via_pipeline - via_formula);
}

VerificationReport verify_faces(int k, const std::vector<double>& rho_matrix,
                                const GridConfig& grid) {
  const Design design = design_faces(k, rho_matrix);
  const int p = ModelSpec::term_count(k, InteractionStructure::FirstOrder);
  std::vector<double> beta(p, 0.0);
  for (int i = 0; i < k; ++i) beta[1 + i] = -1.0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      beta[1 + k + pair_rank(i, j, k)] = -rho_matrix[i * k + j];
  const ModelSpec model(k, InteractionStructure::FirstOrder, std::move(beta));

  const auto info = information_matrix(model, design);
  if (info.singular) throw std::runtime_error("design not fully informative");

  const double step = grid.step > 0.0 ? grid.step : 0.01;
  const double x_max = resolve_x_max(grid, design, nullptr);
  const std::vector<double> axis = axis_values(0.0, x_max, step);

  VerificationReport rep;
  rep.region = RegionSpec::two_faces_union();
  rep.tolerance = grid.tolerance;
  rep.max_d = kNegInf;
  rep.shell_max_d = kNegInf;

  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const Slice2D s = make_slice(model, info, i, j);
      auto r = sweep_2d(s, axis, axis, grid.tolerance, grid.threads, true, k, i, j);
      FaceReport face;
      face.i = i;
      face.j = j;
      face.max_d = r.max_d;
      face.argmax = embed_point(k, i, j, axis[r.arg_i], axis[r.arg_j]);
      rep.faces.push_back(face);
      if (r.max_d > rep.max_d) {
        rep.max_d = r.max_d;
        rep.argmax = rep.faces.back().argmax;
      }
      rep.shell_max_d = std::max(rep.shell_max_d, r.shell_max);
      rep.n_points += r.n_points;
      rep.violations.insert(rep.violations.end(), r.violations.begin(), r.violations.end());
    }

  rep.tail_checked = true;
  rep.tail_certified = tail_qualifies(model) && rep.shell_max_d < -1.0;
  return rep;
}

ContourFit contour_quadratic_fit(const ModelSpec& model, const Design& design,
                                 double rho, double v) {
  if (!(rho > 0.0)) throw std::invalid_argument("contour quadratic fit needs rho > 0");
  if (!(v > 1.0)) throw std::invalid_argument("contour fit needs v > 1");
  const auto info = information_matrix(model, design);
  if (info.singular) throw std::runtime_error("design not fully informative");
  const Slice2D s = make_slice(model, info, 0, 1);

  const double L = std::log(v);
  const double us[4] = {0.0, L / 3.0, 2.0 * L / 3.0, L};
  double cs[4], ds[4];
  for (int i = 0; i < 4; ++i) {
    cs[i] = std::cosh(us[i]);
    const Point x = from_hyperbolic({us[i], v, rho});
    ds[i] = eval_slice_d(s, x[0], x[1]);
  }
  std::vector<double> vand(9), rhs(3);
  for (int i = 0; i < 3; ++i) {
    vand[i * 3 + 0] = 1.0;
    vand[i * 3 + 1] = cs[i];
    vand[i * 3 + 2] = cs[i] * cs[i];
    rhs[i] = ds[i];
  }
  ContourFit fit;
  fit.coeffs = linalg::solve_dense(std::move(vand), std::move(rhs), 3);
  const double pred = fit.coeffs[0] + fit.coeffs[1] * cs[3] + fit.coeffs[2] * cs[3] * cs[3];
  double scale = 1.0;
  for (double d : ds) scale = std::max(scale, std::abs(d));
  fit.validation_residual = std::abs(pred - ds[3]) / scale;
  double cmax = 0.0;
  for (double c : fit.coeffs) cmax = std::max(cmax, std::abs(c));
  fit.leading_positive = fit.coeffs[2] > 0.0 && fit.coeffs[2] >= 1e-12 * cmax;
  return fit;
}

ContourFit contour_quartic_fit(const ModelSpec& model, const Design& design, double v) {
  if (!(v > 0.0)) throw std::invalid_argument("contour fit needs v > 0");
  const auto info = information_matrix(model, design);
  if (info.singular) throw std::runtime_error("design not fully informative");
  const Slice2D s = make_slice(model, info, 0, 1);

  const double us[6] = {-v, -0.5 * v, 0.0, 0.5 * v, v, 0.61803398874989484 * v};
  double ds[6];
  for (int i = 0; i < 6; ++i) ds[i] = eval_slice_d(s, v + us[i], v - us[i]);

  std::vector<double> vand(25), rhs(5);
  for (int i = 0; i < 5; ++i) {
    double pw = 1.0;
    for (int c = 0; c < 5; ++c) {
      vand[i * 5 + c] = pw;
      pw *= us[i];
    }
    rhs[i] = ds[i];
  }
  ContourFit fit;
  fit.coeffs = linalg::solve_dense(std::move(vand), std::move(rhs), 5);
  double pred = 0.0, pw = 1.0;
  for (int c = 0; c < 5; ++c) {
    pred += fit.coeffs[c] * pw;
    pw *= us[5];
  }
  double scale = 1.0;
  for (double d : ds) scale = std::max(scale, std::abs(d));
  fit.validation_residual = std::abs(pred - ds[5]) / scale;
  double cmax = 0.0;
  for (double c : fit.coeffs) cmax = std::max(cmax, std::abs(c));
  fit.leading_positive = fit.coeffs[4] > 0.0 && fit.coeffs[4] >= 1e-12 * cmax;
  return fit;
}

}  // namespace pdoe
