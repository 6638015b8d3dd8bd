#include "pdoe/design.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pdoe/linalg.hpp"

namespace pdoe {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

Design::Design(std::vector<Point> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty()) throw std::invalid_argument("design needs at least one point");
  if (points_.size() != weights_.size())
    throw std::invalid_argument("points/weights length mismatch");
  const std::size_t k = points_[0].size();
  double sum = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != k)
      throw std::invalid_argument("design points have mixed dimensions");
    for (double c : points_[i])
      if (!std::isfinite(c) || c < 0.0)
        throw std::invalid_argument("design points must have finite non-negative coordinates");
    if (!(weights_[i] >= 0.0))
      throw std::invalid_argument("design weights must be non-negative");
    sum += weights_[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("design weights must sum to one");
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      bool same = true;
      for (std::size_t c = 0; c < k; ++c)
        if (std::abs(points_[i][c] - points_[j][c]) > kDuplicateTol) {
          same = false;
          break;
        }
      if (same) throw std::invalid_argument("design points must be mutually distinct");
    }
}

InfoMatrix information_matrix(const ModelSpec& model, const Design& design) {
  if (design.k() != model.k()) throw std::invalid_argument("point/model dimension");
  const int p = model.p();
  InfoMatrix info;
  info.p = p;
  info.m.assign(static_cast<std::size_t>(p) * p, 0.0);
  std::vector<double> f(p);
  for (std::size_t i = 0; i < design.size(); ++i) {
    fill_regression_row(model, design.points()[i].data(), f.data());
    const double c = design.weights()[i] * intensity(model, design.points()[i]);
    if (c == 0.0) continue;
    for (int r = 0; r < p; ++r)
      for (int s = r; s < p; ++s) info.m[r * p + s] += c * f[r] * f[s];
  }
  for (int r = 0; r < p; ++r)
    for (int s = 0; s < r; ++s) info.m[r * p + s] = info.m[s * p + r];

  // Equilibrate before factoring: diagonal entries of M span the full range
  // of the intensities, and determinants like e^-100 are routine.  Factoring
  // the correlation-scaled matrix keeps the pivot threshold scale-free and
  // the log determinant representable.
  std::vector<double> scale(p);
  bool degenerate = false;
  double log_diag = 0.0;
  for (int i = 0; i < p; ++i) {
    const double di = info.m[i * p + i];
    if (!(di > 0.0) || !std::isfinite(di)) {
      degenerate = true;
      break;
    }
    scale[i] = 1.0 / std::sqrt(di);
    log_diag += std::log(di);
  }
  info.singular = true;
  info.logdet = kNegInf;
  if (!degenerate) {
    std::vector<double> corr(static_cast<std::size_t>(p) * p);
    for (int r = 0; r < p; ++r)
      for (int s = 0; s < p; ++s) corr[r * p + s] = info.m[r * p + s] * scale[r] * scale[s];
    const auto fac = linalg::ldlt(corr, p);
    if (fac.positive_definite) {
      info.singular = false;
      info.logdet = fac.logdet + log_diag;
      info.inverse = linalg::spd_inverse(fac);
      for (int r = 0; r < p; ++r)
        for (int s = 0; s < p; ++s) info.inverse[r * p + s] *= scale[r] * scale[s];
    }
  }
  return info;
}

double d_criterion(const InfoMatrix& info) {
  return info.singular ? kNegInf : info.logdet;
}

double sensitivity(const ModelSpec& model, const InfoMatrix& info, const Point& x) {
  if (info.singular) throw std::runtime_error("design not fully informative");
  const auto f = regression_vector(model, x);
  const double qf = linalg::quad_form(info.inverse, f);
  return intensity(model, x) * qf;
}

double sensitivity(const ModelSpec& model, const Design& design, const Point& x) {
  return sensitivity(model, information_matrix(model, design), x);
}

double deduced_sensitivity(const ModelSpec& model, const InfoMatrix& info, const Point& x) {
  if (info.singular) throw std::runtime_error("design not fully informative");
  const auto f = regression_vector(model, x);
  const double qf = linalg::quad_form(info.inverse, f);
  // exp(-lp) rather than 1/exp(lp): overflows cleanly to +inf, giving d = -inf.
  const double inv_lambda = std::exp(-linear_predictor(model, x));
  return qf / info.p - inv_lambda;
}

double deduced_sensitivity(const ModelSpec& model, const Design& design, const Point& x) {
  return deduced_sensitivity(model, information_matrix(model, design), x);
}

double d_efficiency(const ModelSpec& model, const Design& candidate,
                    const Design& reference_optimal) {
  const auto info_c = information_matrix(model, candidate);
  if (info_c.singular) return 0.0;
  const auto info_r = information_matrix(model, reference_optimal);
  if (info_r.singular) throw std::runtime_error("reference not optimal");
  const double eff = std::exp((info_c.logdet - info_r.logdet) / model.p());
  if (eff > 1.0 + 1e-9) throw std::runtime_error("reference not optimal");
  return std::min(eff, 1.0);
}

}  // namespace pdoe
