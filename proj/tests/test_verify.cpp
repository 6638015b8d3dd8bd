#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "pdoe/catalog.hpp"
#include "pdoe/linalg.hpp"
#include "pdoe/verify.hpp"

using namespace pdoe;

TEST_CASE("hyperbolic coordinates round trip") {
  const auto origin = to_hyperbolic({0.0, 0.0}, 0.7);
  CHECK(origin.u == doctest::Approx(0.0));
  CHECK(origin.v == doctest::Approx(1.0));

  const auto edge = to_hyperbolic({2.0, 0.0}, 0.5);
  CHECK(edge.v == doctest::Approx(std::sqrt(2.0)));
  CHECK(edge.u == doctest::Approx(std::log(std::sqrt(2.0))));

  std::mt19937 rng(8);
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  std::uniform_real_distribution<double> rho_dist(0.05, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    const Point x{coord(rng), coord(rng)};
    const double rho = rho_dist(rng);
    const auto h = to_hyperbolic(x, rho);
    CHECK(h.v >= 1.0);
    CHECK(std::abs(h.u) <= std::log(h.v) + 1e-12);
    const auto back = from_hyperbolic(h);
    CHECK(back[0] == doctest::Approx(x[0]).epsilon(1e-12));
    CHECK(back[1] == doctest::Approx(x[1]).epsilon(1e-12));
  }

  CHECK_THROWS_AS(to_hyperbolic({1.0, 1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(from_hyperbolic({1.0, 1.5, 1.0}), std::invalid_argument);  // |u| > log v
  CHECK(from_hyperbolic({0.0, 1.0, 1.0}) == Point{0.0, 0.0});
  const auto boundary = from_hyperbolic({std::log(2.0), 2.0, 1.0});
  CHECK(boundary[0] == doctest::Approx(3.0));
  CHECK(boundary[1] == doctest::Approx(0.0));
  const auto mid = from_hyperbolic({0.0, 2.0, 1.0});
  CHECK(mid[0] == doctest::Approx(1.0));
  CHECK(mid[1] == doctest::Approx(1.0));
}

TEST_CASE("intensity is constant along hyperbolic contours") {
  for (double rho : {0.25, 1.0, 2.0}) {
    const auto model = standardized_2d_model(rho);
    for (double v : {1.1, 2.0, 5.0, 11.0}) {
      const double expected = -(v * v - 1.0) / rho;
      const double L = std::log(v);
      for (int i = 0; i <= 16; ++i) {
        const double u = -L + 2.0 * L * i / 16.0;
        const auto x = from_hyperbolic({u, v, rho});
        CHECK(linear_predictor(model, x) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("diagonal inequality: support-point zeros and interior negativity") {
  for (double t : {0.0, 0.5, 1.0, 1.7, 2.0}) {
    CHECK(std::abs(diagonal_inequality(0.0, t)) < 1e-12);
    CHECK(std::abs(diagonal_inequality(1.0, t)) < 1e-12);
  }
  CHECK(diagonal_inequality(0.5, 1.0) < -1e-3);

  // the diagonal inequality is h0 - h1 exactly, by construction
  for (double q : {0.0, 0.3, 0.9, 1.4, 3.0})
    for (double t : {0.0, 1.0, 2.0}) {
      const auto s = h_split(q, t);
      CHECK(diagonal_inequality(q, t) == s.h0 - s.h1);
    }
}

TEST_CASE("diagonal inequality equals the diagonal deduced sensitivity") {
  for (double rho : {0.0, 0.25, 1.0, 2.0, 5.0}) {
    const double t = t_of_rho(rho);
    const auto model = standardized_2d_model(rho);
    const auto info = information_matrix(model, xi_diagonal_design(t));
    for (double x = 0.0; x <= 6.0; x += 0.2) {
      const double via_d = deduced_sensitivity(model, info, {x, x});
      const double via_formula = diagonal_inequality(x / t, t);
      CHECK(std::abs(via_d - via_formula) < 1e-9 * (1.0 + std::abs(via_d)));
    }
  }
}

TEST_CASE("landmark constants of the diagonal split") {
  CHECK(q1_constant() == doctest::Approx(0.456).epsilon(1e-3));
  CHECK(h_split(q1_constant(), 2.0).h0 == doctest::Approx(0.997).epsilon(1e-3));
  CHECK(h_split(q1_constant(), 2.0).h0 ==
        doctest::Approx(h0_peak_closed_form()).epsilon(1e-12));
  CHECK(h_split(0.6, 0.0).h1 == doctest::Approx(1.097).epsilon(1e-3));
  CHECK(h0_le_h2_bound(0.6, 0.0) == doctest::Approx(0.1001).epsilon(5e-3));

  // q1 is the local maximum of h0(., 2): the closed form beats its neighbours
  const double q1 = q1_constant();
  CHECK(h_split(q1, 2.0).h0 > h_split(q1 - 1e-4, 2.0).h0);
  CHECK(h_split(q1, 2.0).h0 > h_split(q1 + 1e-4, 2.0).h0);
}

TEST_CASE("h chain inequalities on spot values and a coarse grid") {
  {
    const auto s = h_split(0.3, 1.0);  // q <= q0 branch
    CHECK(s.h0 <= 1.0);
    CHECK(s.h1 >= 1.0);
    CHECK(s.h2 == 1.0);
  }
  {
    const auto s = h_split(1.0, 1.0);  // equality point: h2 = h1 = 0
    CHECK(std::abs(s.h2) < 1e-12);
    CHECK(std::abs(s.h1) < 1e-12);
  }
  const auto chain = h_chain_check(400, 80);
  CHECK(chain.holds);
  CHECK(chain.min_slack >= -1e-12);
  CHECK(chain.n_points == 400 * 80);
  // away from the support zero at q = 0, the h0 <= 1 margin at t = 2 bottoms
  // out near 1 - h0(q1, 2) ~ 0.003
  double interior_min = 1.0;
  for (double q = 0.05; q <= 0.6; q += 0.0005)
    interior_min = std::min(interior_min, 1.0 - h_split(q, 2.0).h0);
  CHECK(interior_min < 0.004);
  CHECK(interior_min > 0.002);
}

TEST_CASE("verify_full_grid certifies the optimal design at rho = 1") {
  const auto model = standardized_2d_model(1.0);
  GridConfig grid;
  grid.step = 0.05;
  grid.x_max = 20.0;
  const auto rep = verify_full_grid(model, xi_diagonal_design(1.0),
                                    RegionSpec::orthant(), grid);
  CHECK(rep.max_d <= 1e-9);
  CHECK(rep.tail_checked);
  CHECK(rep.tail_certified);
  CHECK(rep.shell_max_d < -1.0);
  CHECK(rep.verified());
  CHECK(rep.violations.empty());
  CHECK(rep.n_points == 401u * 401u);
}

TEST_CASE("verify_full_grid rejects the product design under synergy") {
  const auto model = standardized_2d_model(1.0);
  GridConfig grid;
  grid.step = 0.05;
  grid.x_max = 8.0;
  const auto rep = verify_full_grid(model, xi_diagonal_design(2.0),
                                    RegionSpec::orthant(), grid);
  CHECK(rep.max_d > 0.0);
  CHECK_FALSE(rep.verified());
  CHECK_FALSE(rep.violations.empty());
  // the optimum moved to (1,1); the worst violation sits on the diagonal
  CHECK(rep.argmax[0] == doctest::Approx(rep.argmax[1]).epsilon(0.2));
}

TEST_CASE("verify_full_grid needs a nonsingular design") {
  const auto model = standardized_2d_model(1.0);
  const Design three({{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}},
                     {1.0 / 3, 1.0 / 3, 1.0 / 3});
  GridConfig grid;
  grid.step = 0.5;
  CHECK_THROWS_WITH_AS(verify_full_grid(model, three, RegionSpec::orthant(), grid),
                       "design not fully informative", std::runtime_error);
}

TEST_CASE("verify_reduced certifies the optimal designs") {
  for (double rho : {0.0, 1.0, 2.0}) {
    const auto model = standardized_2d_model(rho);
    GridConfig grid;
    grid.step = 0.01;
    grid.x_max = 50.0;
    const auto rep = verify_reduced(model, xi_diagonal_design(t_of_rho(rho)), rho, grid);
    CHECK(rep.reduced);
    CHECK(rep.max_d <= 1e-9);
    CHECK(rep.reduction_confirmed);
    CHECK(rep.verified());
  }
}

TEST_CASE("verify_reduced requires swap symmetry") {
  const auto model = standardized_2d_model(1.0);
  const Design asym({{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}, {1.0, 2.0}},
                    {0.25, 0.25, 0.25, 0.25});
  GridConfig grid;
  CHECK_THROWS_WITH_AS(verify_reduced(model, asym, 1.0, grid),
                       "reduction requires swap symmetry", std::invalid_argument);
}

TEST_CASE("full grid and reduced sweeps agree on verification") {
  for (double rho : {0.5, 2.0}) {
    const auto model = standardized_2d_model(rho);
    const auto design = xi_diagonal_design(t_of_rho(rho));
    GridConfig full;
    full.step = 0.05;
    full.x_max = 15.0;
    GridConfig reduced;
    reduced.step = 0.01;
    reduced.x_max = 15.0;
    const auto rf = verify_full_grid(model, design, RegionSpec::orthant(), full);
    const auto rr = verify_reduced(model, design, rho, reduced);
    CHECK(rf.verified());
    CHECK(rr.verified());
    // the full-grid argmax lies on the boundary or diagonal (within a step)
    const auto& am = rf.argmax;
    const bool on_reduction = am[0] <= full.step + 1e-12 || am[1] <= full.step + 1e-12 ||
                              std::abs(am[0] - am[1]) <= full.step + 1e-12;
    CHECK(on_reduction);
  }
}

TEST_CASE("contour fits: quadratic in cosh(u), quartic in u at rho = 0") {
  const auto model = standardized_2d_model(1.0);
  const auto design = xi_diagonal_design(1.0);
  for (double v : {1.3, 2.0, 4.0}) {
    const auto fit = contour_quadratic_fit(model, design, 1.0, v);
    CHECK(fit.validation_residual < 1e-8);
    CHECK(fit.leading_positive);
  }
  const auto model0 = standardized_2d_model(0.0);
  const auto design0 = xi_diagonal_design(2.0);
  for (double v : {0.8, 1.5, 3.0}) {
    const auto fit = contour_quartic_fit(model0, design0, v);
    CHECK(fit.validation_residual < 1e-8);
    CHECK(fit.leading_positive);
  }
}

TEST_CASE("rectangle regions skip the tail certificate") {
  const auto model = standardized_2d_model(1.0);
  GridConfig grid;
  grid.step = 0.05;
  const auto rep = verify_full_grid(model, xi_diagonal_design(1.0),
                                    RegionSpec::rectangle({4.0, 4.0}), grid);
  CHECK_FALSE(rep.tail_checked);
  CHECK(rep.verified());
}

TEST_CASE("k-dimensional design matrices and their closed-form inverses") {
  for (int k = 2; k <= 8; ++k) {
    const auto m = build_kdim_F(k, 1);
    CHECK(m.p == 1 + k + k * (k - 1) / 2);
    const auto prod = linalg::matmul(m.F, m.F_inv, m.p);
    CHECK(linalg::max_abs_off_identity(prod, m.p) < 1e-12);
  }
  for (int k = 3; k <= 6; ++k) {
    const auto m = build_kdim_F(k, 2);
    const auto prod = linalg::matmul(m.F, m.F_inv, m.p);
    CHECK(linalg::max_abs_off_identity(prod, m.p) < 1e-12);
  }

  // spec of the first column of F_inv for k = 3, order 1
  const auto m3 = build_kdim_F(3, 1);
  const double expected[7] = {1.0, -0.5, -0.5, -0.5, 0.25, 0.25, 0.25};
  for (int r = 0; r < 7; ++r)
    CHECK(m3.F_inv[r * 7 + 0] == doctest::Approx(expected[r]));

  // k = 2 order 1 reduces to the 4x4 matrix of the plane proof at t = 2
  const auto m2 = build_kdim_F(2, 1);
  const double f_expected[16] = {1, 0, 0, 0, 1, 2, 0, 0, 1, 0, 2, 0, 1, 2, 2, 4};
  for (int i = 0; i < 16; ++i) CHECK(m2.F[i] == doctest::Approx(f_expected[i]));
}

TEST_CASE("incidence matrices: row sums and block consistency") {
  const auto m = build_kdim_F(5, 2);
  const int k = 5, c2 = 10, c3 = 10;
  for (int r = 0; r < c2; ++r) {
    double sum = 0.0;
    for (int c = 0; c < k; ++c) sum += m.S2[r * k + c];
    CHECK(sum == 2.0);
  }
  for (int r = 0; r < c3; ++r) {
    double s3 = 0.0, s23 = 0.0;
    for (int c = 0; c < k; ++c) s3 += m.S3[r * k + c];
    for (int c = 0; c < c2; ++c) s23 += m.S23[r * c2 + c];
    CHECK(s3 == 3.0);
    CHECK(s23 == 3.0);
  }
  // each triple covers each of its variables through exactly two of its pairs
  for (int r = 0; r < c3; ++r)
    for (int c = 0; c < k; ++c) {
      double acc = 0.0;
      for (int q = 0; q < c2; ++q) acc += m.S23[r * c2 + q] * m.S2[q * k + c];
      CHECK(acc == 2.0 * m.S3[r * k + c]);
    }
}

TEST_CASE("diagonal sensitivity expressions: zeros and sweeps") {
  CHECK(kdim_diagonal_sensitivity(3, 1, 2, 0.0) == doctest::Approx(0.0));
  CHECK(kdim_diagonal_sensitivity(3, 1, 2, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(kdim_diagonal_sensitivity(4, 2, 2, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(kdim_diagonal_sensitivity(4, 2, 3, 1.0) == doctest::Approx(0.0).epsilon(1e-12));

  for (int j = 2; j <= 3; ++j) {
    double worst = -1e300;
    for (double q = 0.0; q <= 10.0; q += 0.001)
      worst = std::max(worst, kdim_diagonal_sensitivity(3, 1, j, q));
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("diagonal formula matches the generic pipeline") {
  CHECK(cross_check_diagonal_formula(3, 1, 2, 0.7) < 1e-9);
  CHECK(cross_check_diagonal_formula(3, 1, 3, 0.4) < 1e-9);
  CHECK(cross_check_diagonal_formula(4, 2, 3, 1.0) < 1e-9);
  CHECK(cross_check_diagonal_formula(5, 1, 4, 0.3) < 1e-9);
  for (double q : {2.5, 4.0}) {
    // far out both expressions blow up; compare relatively
    const double formula = kdim_diagonal_sensitivity(4, 1, 3, q);
    CHECK(cross_check_diagonal_formula(4, 1, 3, q) < 1e-9 * (1.0 + std::abs(formula)));
  }
}

TEST_CASE("verify_faces passes for synergy matrices") {
  std::vector<double> rho(9, 0.0);
  rho[0 * 3 + 1] = rho[1 * 3 + 0] = 1.0;
  GridConfig grid;
  grid.step = 0.05;
  grid.x_max = 15.0;
  const auto rep = verify_faces(3, rho, grid);
  CHECK(rep.faces.size() == 3);
  for (const auto& face : rep.faces) CHECK(face.max_d <= 1e-8);
  CHECK(rep.verified());
}

TEST_CASE("closed-form F inverse equals the numerically inverted F") {
  auto numeric_inverse = [](const std::vector<double>& f, int p) {
    std::vector<double> inv(static_cast<std::size_t>(p) * p);
    for (int col = 0; col < p; ++col) {
      std::vector<double> e(p, 0.0);
      e[col] = 1.0;
      const auto x = linalg::solve_dense(f, e, p);
      for (int r = 0; r < p; ++r) inv[r * p + col] = x[r];
    }
    return inv;
  };
  for (int k = 2; k <= 8; ++k) {
    const auto m = build_kdim_F(k, 1);
    const auto inv = numeric_inverse(m.F, m.p);
    for (int i = 0; i < m.p * m.p; ++i) CHECK(std::abs(m.F_inv[i] - inv[i]) < 1e-10);
  }
  for (int k = 3; k <= 6; ++k) {
    const auto m = build_kdim_F(k, 2);
    const auto inv = numeric_inverse(m.F, m.p);
    for (int i = 0; i < m.p * m.p; ++i) CHECK(std::abs(m.F_inv[i] - inv[i]) < 1e-10);
  }
}

TEST_CASE("violation list is exactly the points above tolerance") {
  const auto model = standardized_2d_model(1.0);
  GridConfig grid;
  grid.step = 0.1;
  grid.x_max = 6.0;
  const auto rep = verify_full_grid(model, xi_diagonal_design(2.0),
                                    RegionSpec::orthant(), grid);
  REQUIRE_FALSE(rep.violations.empty());
  const auto info = information_matrix(model, xi_diagonal_design(2.0));
  std::size_t recount = 0;
  double recount_max = -1e300;
  for (double x1 = 0.0; x1 <= 6.0 + 1e-9; x1 += 0.1)
    for (double x2 = 0.0; x2 <= 6.0 + 1e-9; x2 += 0.1) {
      const double d = deduced_sensitivity(model, info, {x1, x2});
      if (d > grid.tolerance) ++recount;
      recount_max = std::max(recount_max, d);
    }
  CHECK(rep.violations.size() == recount);
  CHECK(rep.max_d == doctest::Approx(recount_max).epsilon(1e-9));
  double worst = -1e300;
  for (const auto& v : rep.violations) {
    CHECK(v.d > grid.tolerance);
    worst = std::max(worst, v.d);
  }
  CHECK(worst == doctest::Approx(rep.max_d).epsilon(1e-12));
}

TEST_CASE("antagonistic reduced sweep is experimental and self-consistent") {
  const double rho = -0.05, b = 10.0;
  const ModelSpec model(2, InteractionStructure::TwoDimWithInteraction,
                        {0.0, -1.0, -1.0, -rho});
  const auto result = design_antagonistic_class(rho, b);
  GridConfig grid;
  grid.step = 0.01;
  const auto rep = verify_reduced_antagonistic(model, result.design, rho, b, grid);
  CHECK(rep.experimental);
  CHECK(rep.reduced);
  CHECK(rep.n_points > 0);
  CHECK(rep.reduction_confirmed);
  CHECK_FALSE(rep.tail_checked);

  // the boundary/diagonal maximum matches a full sweep of the square
  GridConfig full;
  full.step = 0.05;
  const auto rf = verify_full_grid(model, result.design,
                                   RegionSpec::rectangle({b, b}), full);
  CHECK(std::abs(rf.max_d - rep.max_d) < 1e-4);

  CHECK_THROWS_AS(verify_reduced_antagonistic(model, result.design, rho, 25.0, grid),
                  std::invalid_argument);  // b > 1/|rho|
  CHECK_THROWS_AS(verify_reduced_antagonistic(model, result.design, -0.2, b, grid),
                  std::invalid_argument);  // rho <= -1/8
}
