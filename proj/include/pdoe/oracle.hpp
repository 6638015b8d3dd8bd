#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pdoe/design.hpp"
#include "pdoe/model.hpp"
#include "pdoe/verify.hpp"

namespace pdoe {

// Finite candidate set on which the numerical design optimizer runs.
struct CandidateGrid {
  std::vector<Point> points;
  RegionSpec region;
  double step = 0.0;

  // Regular lattice over [0, upper_1] x ... x [0, upper_k].
  static CandidateGrid regular(const std::vector<double>& upper, double step);

  // Adds extra candidates (e.g. the exact support of a closed-form design),
  // skipping duplicates.
  void add_points(const std::vector<Point>& extra);
};

struct OracleResult {
  Design design;        // clustered support (centroids of nearby candidates)
  Design grid_design;   // surviving candidates with their converged weights
  double logdet = 0.0;  // of grid_design
  std::size_t iterations = 0;
  double final_max_sensitivity_gap = 0.0;  // max_i psi(x_i)/p - 1
  bool converged = false;
  std::vector<double> logdet_trace;  // one entry per iteration
};

// Multiplicative weight update w_i <- w_i psi(x_i; xi)/p, stopping when the
// grid sensitivity gap drops below tol.  logdet is non-decreasing across
// iterations; weights below prune_threshold are removed at the end and the
// survivors within 2 * step of each other merge into weighted centroids.
OracleResult multiplicative_optimize(const ModelSpec& model, const CandidateGrid& grid,
                                     std::size_t max_iter = 200000, double tol = 1e-7,
                                     double prune_threshold = 1e-10);

// Scalar maximization by coarse scan plus golden-section refinement; robust
// against the bimodal shapes showing up for antagonistic interactions.
struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
};
ScalarMax maximize_scalar(double (*f)(double, double), double param, double lo,
                          double hi, int scan_points = 4001, double x_tol = 1e-10);

// Best four-point design of the diagonal class found numerically: equal
// weights, axis coordinate maximizing x^2 e^-x and diagonal coordinate
// maximizing s^4 exp(-2s - rho s^2), each over [0, b] (or the unbounded
// axis/diagonal for rho >= 0 without a bound).
Design xi0_class_optimize(double rho, std::optional<double> b);

// D-efficiency of the oracle's design measured against a catalog design.
// Throws "catalog design suboptimal" when the oracle wins by more than 1e-9
// in the efficiency scale, and "oracle below expected efficiency" when the
// result falls under min_efficiency.
double compare_to_catalog(const ModelSpec& model, const Design& catalog_design,
                          const OracleResult& oracle, double min_efficiency = 0.0);

}  // namespace pdoe
