#pragma once

#include <cstddef>
#include <vector>

#include "pdoe/design.hpp"
#include "pdoe/model.hpp"

namespace pdoe {

struct RegionSpec {
  enum class Kind { Orthant, Rectangle, ShiftedOrthant, TwoFacesUnion };
  Kind kind = Kind::Orthant;
  std::vector<double> bounds;  // Rectangle: upper bound per coordinate
  std::vector<double> shift;   // ShiftedOrthant: lower corner

  static RegionSpec orthant();
  static RegionSpec rectangle(std::vector<double> b);
  static RegionSpec shifted_orthant(std::vector<double> a);
  static RegionSpec two_faces_union();
};

struct GridConfig {
  double step = 0.0;       // 0: 0.01 for two variables, 0.05 beyond, 0.001 on lines
  double x_max = 0.0;      // 0: max(20, 10 * largest support coordinate)
  double tolerance = 1e-9;
  int threads = 0;         // 0: hardware count
};

struct Violation {
  Point x;
  double d = 0.0;
};

struct FaceReport {
  int i = 0, j = 0;
  double max_d = 0.0;
  Point argmax;
};

// Result of sweeping the deduced sensitivity d(x; xi) over a region.  The
// design is declared verified when the maximum stays at or below the
// tolerance and, on unbounded regions, the tail certificate holds: d < -1 on
// the outer shell of the truncation box, beyond which the exponential decay
// of the intensity dominates the polynomial growth of the quadratic form
// (valid for negative main effects and non-positive interactions).
struct VerificationReport {
  double max_d = 0.0;
  Point argmax;
  std::size_t n_points = 0;
  double tolerance = 1e-9;
  std::vector<Violation> violations;
  RegionSpec region;
  bool reduced = false;

  bool tail_checked = false;
  bool tail_certified = false;
  double shell_max_d = 0.0;

  bool reduction_confirmed = true;  // contour maxima landed on boundary/diagonal
  std::vector<FaceReport> faces;    // per-face maxima from verify_faces
  bool experimental = false;        // sweep carries no optimality claim

  bool verified() const {
    return max_d <= tolerance && (!tail_checked || tail_certified);
  }
};

// Contours of constant intensity in the standardized plane, rho > 0:
// v = sqrt((1 + rho x1)(1 + rho x2)) >= 1, u = log sqrt((1+rho x1)/(1+rho x2)),
// |u| <= log v.  For rho = 0 the contours degenerate to the straight lines
// x1 = v + u, x2 = v - u.
struct HyperbolicCoords {
  double u = 0.0;
  double v = 1.0;
  double rho = 0.0;
};

HyperbolicCoords to_hyperbolic(const Point& x, double rho);
Point from_hyperbolic(const HyperbolicCoords& h);

// Dense sweep of d over the region's truncation grid.
VerificationReport verify_full_grid(const ModelSpec& model, const Design& design,
                                    const RegionSpec& region, const GridConfig& grid);

// Boundary + diagonal sweep, valid for designs invariant under swapping the
// two coordinates; additionally confirms on sampled constant-intensity
// contours that the maximum over the contour sits at its ends.
VerificationReport verify_reduced(const ModelSpec& model, const Design& design,
                                  double rho, const GridConfig& grid);

// Boundary + diagonal sweep for a mildly antagonistic interaction
// (-1/8 < rho < 0) on [0,b]^2 with b <= 1/|rho|, where the constant-intensity
// hyperbolas recenter at (1/|rho|, 1/|rho|) and the contour distance drops
// below one.  The contour argument is checked empirically; the report is
// marked experimental and carries no optimality claim.
VerificationReport verify_reduced_antagonistic(const ModelSpec& model,
                                               const Design& design, double rho,
                                               double b, const GridConfig& grid);

// d((qt, qt); xi_t) expressed in q = x/t and t, via rho = (2 - t)/t^2:
// (q-1)^2 (q(t-1)-1)^2 + e^2 t^2 (q-1)^2 q^2 / 2 + e^(t+2) q^4
//   - exp(2tq + (2-t) q^2).
double diagonal_inequality(double q, double t);

// Split of the same expression into a polynomial part h0, an exponential part
// h1 (so that the diagonal inequality is h0 - h1 exactly) and the piecewise
// separator h2.
struct HSplit {
  double h0 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
};
HSplit h_split(double q, double t);

// (e^2 (t+1) - (t-1)^2) q^2 + 2 (t-1) q - 1, the lower bound used for the
// h0 <= h2 comparison; non-negative for q >= q0.
double h0_le_h2_bound(double q, double t);

double q0_constant();      // 3/5
double q1_constant();      // location of the local maximum of h0(., 2)
double h0_peak_closed_form();  // closed form of h0(q1, 2)

struct ChainCheck {
  bool holds = false;
  double min_slack = 0.0;      // most binding margin over the whole grid
  double min_slack_low = 0.0;  // q <= q0: min(1 - h0, h1 - 1)
  double min_slack_h0_h2 = 0.0;  // q > q0
  double min_slack_h2_h1 = 0.0;  // q > q0
  std::size_t n_points = 0;
};

// Verifies h0 <= h2 <= h1 on an n_q x n_t grid over [0, q_max] x [0, t_max];
// fp_slack absorbs floating-point rounding at the equality points (q = 1).
ChainCheck h_chain_check(std::size_t n_q, std::size_t n_t, double q_max = 10.0,
                         double t_max = 2.0, double fp_slack = 1e-12);

// Essential design matrix of the k-variable designs in block form, with the
// diagonal scaling A, the pair/triple incidence matrices, and the closed-form
// inverse assembled from the same blocks.
struct KDimDesignMatrix {
  int k = 0;
  int order = 1;
  int p = 0;
  std::vector<double> F;      // p x p
  std::vector<double> F_inv;  // p x p, closed form
  std::vector<double> A;      // diagonal, length p
  std::vector<double> S2;     // C(k,2) x k, rows = pairs in lex order
  std::vector<double> S3;     // C(k,3) x k (order 2)
  std::vector<double> S23;    // C(k,3) x C(k,2) (order 2)
};
KDimDesignMatrix build_kdim_F(int k, int order);

// Deduced sensitivity on the diagonal of a j-dimensional face (all j active
// coordinates equal to x = 2q) under the standardized k-variable model.
double kdim_diagonal_sensitivity(int k, int order, int j, double q);

// |d from the generic pipeline - the closed-form diagonal expression|.
double cross_check_diagonal_formula(int k, int order, int j, double q);

// Sweeps every two-dimensional face for the faces design with synergy matrix
// rho_matrix; reports the maximum per face and overall.
VerificationReport verify_faces(int k, const std::vector<double>& rho_matrix,
                                const GridConfig& grid);

// Polynomial structure of d along a contour of constant intensity.
struct ContourFit {
  std::vector<double> coeffs;        // ascending powers
  double validation_residual = 0.0;  // held-out sample, relative
  bool leading_positive = false;
};

// rho > 0: d is quadratic in c = cosh(u) on the contour at hyperbolic
// distance v > 1; fitted through 3 samples, validated on a 4th.
ContourFit contour_quadratic_fit(const ModelSpec& model, const Design& design,
                                 double rho, double v);

// rho = 0: d is a polynomial of degree 4 in u on the line x1 + x2 = 2v;
// fitted through 5 samples, validated on a 6th.
ContourFit contour_quartic_fit(const ModelSpec& model, const Design& design, double v);

}  // namespace pdoe
