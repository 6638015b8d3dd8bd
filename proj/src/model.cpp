#include "pdoe/model.hpp"

#include <cmath>
#include <stdexcept>

namespace pdoe {

namespace {

void append_subsets_of_size(int k, int size, std::vector<std::vector<int>>& out) {
  std::vector<int> idx(size);
  for (int i = 0; i < size; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int pos = size - 1;
    while (pos >= 0 && idx[pos] == k - size + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
  }
}

std::vector<std::vector<int>> build_terms(int k, InteractionStructure s) {
  std::vector<std::vector<int>> terms;
  terms.push_back({});  // constant
  int max_degree = 0;
  switch (s) {
    case InteractionStructure::MainEffectsOnly: max_degree = 1; break;
    case InteractionStructure::FirstOrder: max_degree = 2; break;
    case InteractionStructure::SecondOrder: max_degree = 3; break;
    case InteractionStructure::Complete: max_degree = k; break;
    case InteractionStructure::TwoDimWithInteraction: max_degree = 2; break;
  }
  for (int deg = 1; deg <= max_degree; ++deg) append_subsets_of_size(k, deg, terms);
  return terms;
}

}  // namespace

const char* structure_name(InteractionStructure s) {
  switch (s) {
    case InteractionStructure::MainEffectsOnly: return "main_effects_only";
    case InteractionStructure::FirstOrder: return "first_order";
    case InteractionStructure::SecondOrder: return "second_order";
    case InteractionStructure::Complete: return "complete";
    case InteractionStructure::TwoDimWithInteraction: return "two_dim_with_interaction";
  }
  return "unknown";
}

InteractionStructure structure_from_name(const std::string& name) {
  if (name == "main_effects_only") return InteractionStructure::MainEffectsOnly;
  if (name == "first_order") return InteractionStructure::FirstOrder;
  if (name == "second_order") return InteractionStructure::SecondOrder;
  if (name == "complete") return InteractionStructure::Complete;
  if (name == "two_dim_with_interaction") return InteractionStructure::TwoDimWithInteraction;
  throw std::invalid_argument("unknown interaction structure: " + name);
}

int ModelSpec::term_count(int k, InteractionStructure s) {
  const auto c2 = [](int m) { return m * (m - 1) / 2; };
  const auto c3 = [](int m) { return m * (m - 1) * (m - 2) / 6; };
  switch (s) {
    case InteractionStructure::MainEffectsOnly: return 1 + k;
    case InteractionStructure::FirstOrder: return 1 + k + c2(k);
    case InteractionStructure::SecondOrder: return 1 + k + c2(k) + c3(k);
    case InteractionStructure::Complete: return 1 << k;
    case InteractionStructure::TwoDimWithInteraction: return 4;
  }
  throw std::invalid_argument("unknown interaction structure");
}

ModelSpec::ModelSpec(int k, InteractionStructure structure, std::vector<double> beta)
    : k_(k), structure_(structure), beta_(std::move(beta)) {
  if (k < 1) throw std::invalid_argument("model dimension k must be positive");
  switch (structure) {
    case InteractionStructure::TwoDimWithInteraction:
      if (k != 2) throw std::invalid_argument("two_dim_with_interaction requires k = 2");
      break;
    case InteractionStructure::SecondOrder:
      if (k < 3) throw std::invalid_argument("second_order requires k >= 3");
      break;
    case InteractionStructure::FirstOrder:
      if (k < 2) throw std::invalid_argument("first_order requires k >= 2");
      break;
    default:
      break;
  }
  terms_ = build_terms(k, structure);
  if (beta_.size() != terms_.size())
    throw std::invalid_argument("beta length does not match the structure's term count");
  for (double b : beta_)
    if (!std::isfinite(b)) throw std::invalid_argument("beta entries must be finite");
}

std::vector<double> regression_vector(const ModelSpec& model, const Point& x) {
  if (static_cast<int>(x.size()) != model.k())
    throw std::invalid_argument("point/model dimension");
  std::vector<double> f(model.p());
  fill_regression_row(model, x.data(), f.data());
  return f;
}

void fill_regression_row(const ModelSpec& model, const double* x, double* out) {
  const auto& terms = model.terms();
  for (std::size_t t = 0; t < terms.size(); ++t) {
    double v = 1.0;
    for (int idx : terms[t]) v *= x[idx];
    out[t] = v;
  }
}

double linear_predictor(const ModelSpec& model, const Point& x) {
  if (static_cast<int>(x.size()) != model.k())
    throw std::invalid_argument("point/model dimension");
  const auto& terms = model.terms();
  const auto& beta = model.beta();
  double lp = 0.0;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    double v = 1.0;
    for (int idx : terms[t]) v *= x[idx];
    lp += beta[t] * v;
  }
  return lp;
}

double intensity(const ModelSpec& model, const Point& x) {
  return std::exp(linear_predictor(model, x));
}

}  // namespace pdoe
