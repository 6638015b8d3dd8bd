#pragma once

#include <string>
#include <vector>

namespace pdoe {

// A setting of the explanatory variables (dose-like, non-negative).
using Point = std::vector<double>;

enum class InteractionStructure {
  MainEffectsOnly,
  FirstOrder,
  SecondOrder,
  Complete,
  TwoDimWithInteraction,
};

const char* structure_name(InteractionStructure s);
InteractionStructure structure_from_name(const std::string& name);

// Poisson regression model: intensity lambda(x) = exp(f(x) . beta) where f
// collects the monomials of the chosen interaction structure.
//
// Monomial order is graded lexicographic and fixed across the project:
// the constant term, then x1..xk, then the pairwise products x_i*x_j with
// i < j in lexicographic order, then the triples, and so on.  beta is stored
// densely in the same order; interactions "set to zero" are explicit zeros.
class ModelSpec {
 public:
  ModelSpec(int k, InteractionStructure structure, std::vector<double> beta);

  int k() const { return k_; }
  InteractionStructure structure() const { return structure_; }
  const std::vector<double>& beta() const { return beta_; }
  int p() const { return static_cast<int>(terms_.size()); }

  // Variable index sets of the monomials, in the fixed order; the constant
  // term is the empty set.
  const std::vector<std::vector<int>>& terms() const { return terms_; }

  // Expected parameter count for a structure (before constructing a model).
  static int term_count(int k, InteractionStructure structure);

 private:
  int k_;
  InteractionStructure structure_;
  std::vector<double> beta_;
  std::vector<std::vector<int>> terms_;
};

// f(x) in the fixed monomial order; entry 0 is always 1.
std::vector<double> regression_vector(const ModelSpec& model, const Point& x);

// Writes f(x) into out[0..p); used by the batched sweep drivers.
void fill_regression_row(const ModelSpec& model, const double* x, double* out);

// f(x) . beta
double linear_predictor(const ModelSpec& model, const Point& x);

// lambda(x) = exp(f(x) . beta)
double intensity(const ModelSpec& model, const Point& x);

}  // namespace pdoe
