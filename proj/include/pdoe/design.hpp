#pragma once

#include <vector>

#include "pdoe/model.hpp"

namespace pdoe {

// Approximate design: mutually distinct support points with weights that are
// non-negative and sum to one.
class Design {
 public:
  Design() = default;  // empty placeholder; real designs use the main constructor
  Design(std::vector<Point> points, std::vector<double> weights);

  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }
  int k() const { return points_.empty() ? 0 : static_cast<int>(points_[0].size()); }

  // Coordinate-wise tolerance below which two points count as duplicates.
  static constexpr double kDuplicateTol = 1e-12;

 private:
  std::vector<Point> points_;
  std::vector<double> weights_;
};

struct InfoMatrix {
  int p = 0;
  std::vector<double> m;        // p x p, row-major, symmetric
  double logdet = 0.0;          // -inf when singular
  bool singular = true;
  std::vector<double> inverse;  // empty when singular
};

// M(xi) = sum_i w_i lambda(x_i) f(x_i) f(x_i)^T
InfoMatrix information_matrix(const ModelSpec& model, const Design& design);

// log det M; -inf sentinel for singular matrices (not an error).
double d_criterion(const InfoMatrix& info);

// psi(x; xi) = lambda(x) f(x)' M^-1 f(x)
double sensitivity(const ModelSpec& model, const InfoMatrix& info, const Point& x);
double sensitivity(const ModelSpec& model, const Design& design, const Point& x);

// d(x; xi) = f(x)' M^-1 f(x) / p - 1/lambda(x); same sign as psi - p.
// Large settings drive 1/lambda past the double range; the result is then
// -inf, never NaN.
double deduced_sensitivity(const ModelSpec& model, const InfoMatrix& info, const Point& x);
double deduced_sensitivity(const ModelSpec& model, const Design& design, const Point& x);

// (det M(candidate) / det M(reference))^(1/p), clipped into [0, 1].
// A singular candidate scores 0; a candidate that beats the reference by more
// than 1e-9 means the reference was not optimal and raises an error.
double d_efficiency(const ModelSpec& model, const Design& candidate,
                    const Design& reference_optimal);

}  // namespace pdoe
