#pragma once

#include <array>
#include <vector>

#include "pdoe/design.hpp"
#include "pdoe/model.hpp"

namespace pdoe {

// Optimal diagonal coordinate t(rho) for the standardized two-variable model
// with synergy strength rho = -beta12 >= 0.  t(0) = 2 and t decreases to 0 as
// rho grows.  Negative rho is rejected here; the antagonistic constructor
// below covers that regime.
double t_of_rho(double rho);

// Same map extended to rho >= -1/8, where the defining quadratic still has a
// real root; t(-1/8) = 4.  Evaluated as 4 / (1 + sqrt(1 + 8 rho)), which is
// algebraically identical to (sqrt(1+8 rho) - 1) / (2 rho) but has no 0/0 at
// rho = 0; a short series branch covers |rho| < 1e-8.
double t_formula(double rho);

// Diagonal factor g(s) = s^4 exp(-2s - rho s^2) of the determinant of a
// four-point design with diagonal coordinate s (standardized model).
double diagonal_det_factor(double s, double rho);

// Axis factor x^2 exp(-x) of the same determinant.
double axis_det_factor(double x);

// Standardized two-variable interaction model, beta = (0, -1, -1, -rho).
ModelSpec standardized_2d_model(double rho);

// Four-point design {(0,0), (2,0), (0,2), (s,s)} with equal weights.
Design xi_diagonal_design(double s);

// One variable: equal weights 1/2 on {0, 2/|beta1|}; requires beta1 < 0.
Design design_1d(double beta1);

// Two variables, no interaction: equal weights 1/3 on
// {(0,0), (2/|beta1|, 0), (0, 2/|beta2|)}.
Design design_2d_no_interaction(double beta1, double beta2);

// Two variables with synergetic interaction (beta1, beta2 < 0, beta12 <= 0):
// equal weights 1/4 on (0,0), (2/|b1|,0), (0,2/|b2|), (t/|b1|, t/|b2|) with
// rho = -beta12/(beta1 beta2).  The intercept does not affect the design.
Design design_2d_interaction(const std::array<double, 4>& beta);

// Complete-interaction model at main effects -1 and zero interactions:
// full factorial on {0,2}^k with equal weights 2^-k.  beta is validated and
// rejected away from that parameter point.
Design design_product_k(int k, const std::vector<double>& beta);

// First-order-interaction model, main effects -1, zero interactions:
// origin, k axial points at 2, and the C(k,2) pair points x_i + x_j.
Design design_kdim_first_order(int k);

// Second-order-interaction model: additionally the C(k,3) triple points.
Design design_kdim_second_order(int k);

// First-order interactions with synergy parameters rho_ij >= 0 on the union
// of two-dimensional faces: pair points move to x_i = x_j = t(rho_ij).
// rho is a symmetric k x k matrix (row-major); diagonal entries are ignored.
Design design_faces(int k, const std::vector<double>& rho_matrix);

// Best four-point design within the diagonal class on [0,b]^2 for an
// antagonistic interaction (rho < 0).  Only optimal within that class, hence
// the class_restricted flag travels with the result.
struct ClassRestrictedDesign {
  Design design;
  bool class_restricted = true;
  char branch = 'a';        // 'a': interior diagonal point t, 'b': corner b
  double diagonal_coord = 0.0;
};
ClassRestrictedDesign design_antagonistic_class(double rho, double b);

// Translates every support point by a (component-wise, a >= 0).
Design shift_design(const Design& design, const std::vector<double>& a);

// True when every support point lies in [0, b1] x ... x [0, bk].
bool rectangle_validity(const Design& design, const std::vector<double>& b);

}  // namespace pdoe
