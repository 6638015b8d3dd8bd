#include "pdoe/efficiency.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "pdoe/catalog.hpp"

namespace pdoe {

double closed_form_efficiency(double x, double rho) {
  if (!(x > 0.0)) throw std::invalid_argument("competitor coordinate x must be positive");
  if (rho < 0.0) throw std::invalid_argument("rho must be non-negative");
  const double t = t_of_rho(rho);
  return (x / t) * std::exp((2.0 * t + rho * t * t - 2.0 * x - rho * x * x) / 4.0);
}

EfficiencyCurve efficiency_curve(double x, double rho_min, double rho_max,
                                 int n_samples) {
  if (rho_min < 0.0 || rho_max < rho_min)
    throw std::invalid_argument("rho range must lie in [0, inf)");
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  EfficiencyCurve curve;
  curve.x = x;
  curve.samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double rho = rho_min + (rho_max - rho_min) * i / (n_samples - 1.0);
    curve.samples.emplace_back(rho, closed_form_efficiency(x, rho));
  }
  return curve;
}

std::vector<std::pair<double, double>> t_curve(double rho_min, double rho_max,
                                               int n_samples) {
  if (rho_min < -0.125) throw std::invalid_argument("t undefined for rho < -1/8");
  if (rho_max < rho_min) throw std::invalid_argument("empty rho range");
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  std::vector<std::pair<double, double>> samples;
  samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double rho = rho_min + (rho_max - rho_min) * i / (n_samples - 1.0);
    samples.emplace_back(rho, t_formula(rho));
  }
  return samples;
}

void write_curve_csv(const std::string& path, const std::string& col1,
                     const std::string& col2,
                     const std::vector<std::pair<double, double>>& samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  out << col1 << "," << col2 << "\n";
  for (const auto& [a, b] : samples) out << a << "," << b << "\n";
}

}  // namespace pdoe
