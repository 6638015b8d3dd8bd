#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "pdoe/catalog.hpp"
#include "pdoe/oracle.hpp"

using namespace pdoe;

TEST_CASE("t_of_rho exact values and limits") {
  CHECK(t_of_rho(0.0) == 2.0);
  CHECK(t_of_rho(1.0) == 1.0);
  CHECK(t_of_rho(3.0) == 2.0 / 3.0);
  CHECK(t_formula(-0.125) == 4.0);
  CHECK_THROWS_AS(t_of_rho(-0.01), std::invalid_argument);
  CHECK_THROWS_AS(t_formula(-0.2), std::invalid_argument);
  CHECK(std::abs(t_of_rho(1e-12) - 2.0) < 1e-9);
}

TEST_CASE("t_of_rho is continuous across the series switch and decreasing") {
  // series branch vs the stabilized closed form around the 1e-8 switch point
  for (double rho : {1e-9, 5e-9, 9.9e-9, 1.1e-8, 1e-7}) {
    const double series = 2.0 - 4.0 * rho;
    const double closed = 4.0 / (1.0 + std::sqrt(1.0 + 8.0 * rho));
    CHECK(std::abs(series - closed) < 1e-9);
    CHECK(std::abs(t_of_rho(rho) - closed) < 1e-9);
  }
  double prev = t_of_rho(0.0);
  for (double rho = 0.01; rho <= 10.0 + 1e-12; rho += 0.01) {
    const double t = t_of_rho(rho);
    CHECK(t < prev);
    prev = t;
  }
  CHECK(t_of_rho(1e6) < 1e-2);  // t -> 0 for large synergy
}

TEST_CASE("one- and two-variable additive designs") {
  const auto d1 = design_1d(-1.0);
  CHECK(d1.points() == std::vector<Point>{{0.0}, {2.0}});
  CHECK(design_1d(-2.0).points()[1][0] == doctest::Approx(1.0));
  CHECK(design_1d(-0.5).points()[1][0] == doctest::Approx(4.0));
  CHECK_THROWS_AS(design_1d(0.0), std::invalid_argument);
  CHECK_THROWS_AS(design_1d(1.0), std::invalid_argument);

  const auto d2 = design_2d_no_interaction(-1.0, -1.0);
  CHECK(d2.points() == std::vector<Point>{{0, 0}, {2, 0}, {0, 2}});
  CHECK(d2.weights()[0] == doctest::Approx(1.0 / 3));
  CHECK(design_2d_no_interaction(-2.0, -1.0).points()[1] == Point{1.0, 0.0});
  CHECK(design_2d_no_interaction(-1.0, -4.0).points()[2] == Point{0.0, 0.5});
}

TEST_CASE("two-variable interaction designs") {
  const auto product = design_2d_interaction({0, -1, -1, 0});
  CHECK(product.points() == std::vector<Point>{{0, 0}, {2, 0}, {0, 2}, {2, 2}});
  CHECK(product.weights() == std::vector<double>{0.25, 0.25, 0.25, 0.25});

  CHECK(design_2d_interaction({0, -1, -1, -1}).points()[3] == Point{1.0, 1.0});

  // scaled parameters: rho = -(-2)/((-2)(-1)) = 1, fourth point (t/2, t/1)
  const auto scaled = design_2d_interaction({5, -2, -1, -2});
  CHECK(scaled.points()[1] == Point{1.0, 0.0});
  CHECK(scaled.points()[2] == Point{0.0, 2.0});
  CHECK(scaled.points()[3][0] == doctest::Approx(0.5));
  CHECK(scaled.points()[3][1] == doctest::Approx(1.0));

  CHECK_THROWS_AS(design_2d_interaction({0, -1, -1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(design_2d_interaction({0, 1, -1, 0}), std::invalid_argument);
}

TEST_CASE("intercept does not change the interaction design") {
  const auto a = design_2d_interaction({0, -1, -1, -1});
  const auto b = design_2d_interaction({42.0, -1, -1, -1});
  CHECK(a.points() == b.points());
  CHECK(a.weights() == b.weights());
}

TEST_CASE("product design over {0,2}^k") {
  std::vector<double> beta1{0, -1};
  CHECK(design_product_k(1, beta1).points() == std::vector<Point>{{0}, {2}});

  std::vector<double> beta2{0, -1, -1, 0};
  const auto d2 = design_product_k(2, beta2);
  CHECK(d2.size() == 4);

  std::vector<double> beta3(8, 0.0);
  beta3[1] = beta3[2] = beta3[3] = -1.0;
  const auto d3 = design_product_k(3, beta3);
  CHECK(d3.size() == 8);
  CHECK(d3.weights()[0] == doctest::Approx(0.125));
  for (const auto& x : d3.points())
    for (double c : x) CHECK((c == 0.0 || c == 2.0));

  beta3[4] = -0.5;  // nonzero interaction: the construction is local at zero interactions
  CHECK_THROWS_AS(design_product_k(3, beta3), std::invalid_argument);
}

TEST_CASE("k-variable first- and second-order designs") {
  const auto d2 = design_kdim_first_order(2);
  CHECK(d2.points() == std::vector<Point>{{0, 0}, {2, 0}, {0, 2}, {2, 2}});

  const auto d3 = design_kdim_first_order(3);
  CHECK(d3.size() == 7);
  CHECK(d3.weights()[0] == doctest::Approx(1.0 / 7));
  CHECK(design_kdim_first_order(4).size() == 11);

  CHECK(design_kdim_second_order(4).size() == 15);
  CHECK(design_kdim_second_order(5).size() == 26);
  CHECK_THROWS_AS(design_kdim_second_order(2), std::invalid_argument);

  // k = 3 second order coincides with the full factorial
  const auto d3b = design_kdim_second_order(3);
  std::vector<double> beta3(8, 0.0);
  beta3[1] = beta3[2] = beta3[3] = -1.0;
  const auto prod3 = design_product_k(3, beta3);
  REQUIRE(d3b.size() == prod3.size());
  for (const auto& x : prod3.points()) {
    bool found = false;
    for (const auto& y : d3b.points())
      if (x == y) {
        found = true;
        break;
      }
    CHECK(found);
  }
  CHECK(d3b.weights()[0] == doctest::Approx(0.125));
}

TEST_CASE("faces design places pair points at t(rho_ij)") {
  std::vector<double> zeros(9, 0.0);
  const auto base = design_faces(3, zeros);
  const auto ref = design_kdim_first_order(3);
  CHECK(base.points() == ref.points());

  std::vector<double> rho(9, 0.0);
  rho[0 * 3 + 1] = rho[1 * 3 + 0] = 1.0;
  const auto d = design_faces(3, rho);
  CHECK(d.points()[4] == Point{1.0, 1.0, 0.0});
  CHECK(d.points()[5] == Point{2.0, 0.0, 2.0});
  CHECK(d.points()[6] == Point{0.0, 2.0, 2.0});

  std::vector<double> rho3(9, 3.0);
  for (int i = 0; i < 3; ++i) rho3[i * 3 + i] = 0.0;
  const auto d3 = design_faces(3, rho3);
  CHECK(d3.points()[4][0] == doctest::Approx(2.0 / 3));

  std::vector<double> bad(9, 0.0);
  bad[1] = -0.5;
  bad[3] = -0.5;
  CHECK_THROWS_AS(design_faces(3, bad), std::invalid_argument);
}

TEST_CASE("antagonistic class designs follow the branch conditions") {
  // rho = -1/16: t = 8(1 - 1/sqrt(2)) ~ 2.343 > b = 2, so the corner wins
  const auto r1 = design_antagonistic_class(-1.0 / 16, 2.0);
  CHECK(r1.branch == 'b');
  CHECK(r1.design.points()[3] == Point{2.0, 2.0});
  CHECK(r1.class_restricted);

  // rho <= -1/8: always the corner
  const auto r2 = design_antagonistic_class(-0.25, 3.0);
  CHECK(r2.branch == 'b');
  CHECK(r2.design.points()[3] == Point{3.0, 3.0});

  // mild antagonism on a wide region: compare the two determinant factors
  const double rho = -0.01, b = 10.0;
  const auto r3 = design_antagonistic_class(rho, b);
  const double t = t_formula(rho);
  const bool interior = t <= b && diagonal_det_factor(t, rho) >= diagonal_det_factor(b, rho);
  CHECK(r3.branch == (interior ? 'a' : 'b'));
  const auto scan = maximize_scalar(
      [](double s, double r) { return diagonal_det_factor(s, r); }, rho, 0.0, b);
  CHECK(std::abs(r3.diagonal_coord - scan.x) < 1e-6);

  CHECK_THROWS_AS(design_antagonistic_class(-0.1, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(design_antagonistic_class(0.1, 4.0), std::invalid_argument);
}

TEST_CASE("diagonal determinant factor peaks at t(rho)") {
  for (double rho : {0.0, 0.25, 1.0, 2.0, 5.0}) {
    const auto best = maximize_scalar(
        [](double s, double r) { return diagonal_det_factor(s, r); }, rho, 0.0, 8.0);
    CHECK(std::abs(best.x - t_of_rho(rho)) < 1e-8);
  }
}

TEST_CASE("shift and rectangle validity") {
  const auto xi2 = xi_diagonal_design(2.0);
  const auto same = shift_design(xi2, {0.0, 0.0});
  CHECK(same.points() == xi2.points());

  const auto moved = shift_design(xi2, {1.0, 1.0});
  CHECK(moved.points() == std::vector<Point>{{1, 1}, {3, 1}, {1, 3}, {3, 3}});

  const auto twice = shift_design(shift_design(xi2, {0.5, 1.0}), {0.25, 0.5});
  const auto direct = shift_design(xi2, {0.75, 1.5});
  for (std::size_t i = 0; i < twice.size(); ++i)
    for (int c = 0; c < 2; ++c)
      CHECK(twice.points()[i][c] == doctest::Approx(direct.points()[i][c]));

  CHECK(rectangle_validity(xi2, {2.0, 2.0}));
  CHECK_FALSE(rectangle_validity(xi2, {1.9, 1.9}));
  CHECK(rectangle_validity(xi_diagonal_design(t_of_rho(1.0)), {2.0, 2.0}));
}

TEST_CASE("equivariance: scaled designs keep the standardized d-values") {
  std::mt19937 rng(314);
  std::uniform_real_distribution<double> neg(-2.5, -0.3);
  std::uniform_real_distribution<double> inter(-2.0, 0.0);
  for (int rep = 0; rep < 10; ++rep) {
    // the scaling map keeps the zero intercept of the standardized model
    const double b0 = 0.0, b1 = neg(rng), b2 = neg(rng), b12 = inter(rng);
    const double rho = -b12 / (b1 * b2);
    const ModelSpec scaled_model(2, InteractionStructure::TwoDimWithInteraction,
                                 {b0, b1, b2, b12});
    const auto scaled_design = design_2d_interaction({b0, b1, b2, b12});
    const auto scaled_info = information_matrix(scaled_model, scaled_design);

    const auto std_model = standardized_2d_model(rho);
    const auto std_design = xi_diagonal_design(t_of_rho(rho));
    const auto std_info = information_matrix(std_model, std_design);

    for (double x1 = 0.0; x1 <= 4.0; x1 += 0.5)
      for (double x2 = 0.0; x2 <= 4.0; x2 += 0.5) {
        const double d_std = deduced_sensitivity(std_model, std_info, {x1, x2});
        const double d_scaled = deduced_sensitivity(
            scaled_model, scaled_info, {x1 / std::abs(b1), x2 / std::abs(b2)});
        CHECK(std::abs(d_std - d_scaled) < 1e-9 * (1.0 + std::abs(d_std)));
      }
  }
}

// The intercept enters the intensity and the information matrix only as the
// common factor exp(b0): psi is unchanged, d picks up the factor exp(-b0),
// so signs, argmax locations and the design itself stay put.
TEST_CASE("intercept invariance: psi unchanged, d scaled by exp(-b0)") {
  const auto design = xi_diagonal_design(1.0);
  const ModelSpec m0(2, InteractionStructure::TwoDimWithInteraction, {0, -1, -1, -1});
  const ModelSpec m5(2, InteractionStructure::TwoDimWithInteraction, {5, -1, -1, -1});
  const auto i0 = information_matrix(m0, design);
  const auto i5 = information_matrix(m5, design);
  for (double x1 : {0.0, 0.7, 1.0, 2.0, 3.3})
    for (double x2 : {0.0, 0.4, 1.0, 2.0}) {
      const double psi0 = sensitivity(m0, i0, {x1, x2});
      const double psi5 = sensitivity(m5, i5, {x1, x2});
      CHECK(psi0 == doctest::Approx(psi5).epsilon(1e-12));
      const double d0 = deduced_sensitivity(m0, i0, {x1, x2});
      const double d5 = deduced_sensitivity(m5, i5, {x1, x2});
      CHECK(std::exp(5.0) * d5 == doctest::Approx(d0).epsilon(1e-11));
      if (std::abs(d0) > 1e-12) CHECK((d0 <= 0) == (d5 <= 0));
    }
}
