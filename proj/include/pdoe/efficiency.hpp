#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pdoe {

// Local D-efficiency of the four-point design with diagonal coordinate x in
// the standardized model with synergy strength rho:
//   eff(x, rho) = (x/t) exp((2t + rho t^2 - 2x - rho x^2) / 4),  t = t(rho).
// Equals 1 exactly when rho = (2 - x)/x^2, i.e. when x is the optimal
// diagonal coordinate.
double closed_form_efficiency(double x, double rho);

struct EfficiencyCurve {
  double x = 0.0;
  std::vector<std::pair<double, double>> samples;  // (rho, efficiency)
};

EfficiencyCurve efficiency_curve(double x, double rho_min, double rho_max,
                                 int n_samples);

// (rho, t(rho)) samples; rho_min may go down to -1/8 where t reaches 4.
std::vector<std::pair<double, double>> t_curve(double rho_min, double rho_max,
                                               int n_samples);

// Two-column CSV (header included) for external plotting.
void write_curve_csv(const std::string& path, const std::string& col1,
                     const std::string& col2,
                     const std::vector<std::pair<double, double>>& samples);

}  // namespace pdoe
