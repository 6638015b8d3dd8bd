#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pdoe/catalog.hpp"
#include "pdoe/json_io.hpp"

using namespace pdoe;

TEST_CASE("model JSON round trip and field names") {
  const ModelSpec model(2, InteractionStructure::TwoDimWithInteraction,
                        {0.5, -1.0, -2.0, -0.25});
  const auto j = to_json(model);
  CHECK(j.at("k") == 2);
  CHECK(j.at("structure") == "two_dim_with_interaction");
  CHECK(j.at("beta").size() == 4);
  const auto back = model_from_json(j);
  CHECK(back.k() == model.k());
  CHECK(back.structure() == model.structure());
  CHECK(back.beta() == model.beta());

  CHECK_THROWS_AS(model_from_json(nlohmann::json{{"k", 2},
                                                 {"structure", "bogus"},
                                                 {"beta", {0, -1, -1, 0}}}),
                  std::invalid_argument);
}

TEST_CASE("design JSON round trip preserves points and weights") {
  const auto design = xi_diagonal_design(t_of_rho(1.5));
  const auto j = to_json(design);
  CHECK(j.at("points").size() == 4);
  CHECK(j.at("weights").size() == 4);
  const auto back = design_from_json(j);
  CHECK(back.points() == design.points());
  CHECK(back.weights() == design.weights());

  // invalid designs fail validation on the way in
  nlohmann::json bad = j;
  bad["weights"] = {0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS_AS(design_from_json(bad), std::invalid_argument);
}

TEST_CASE("region JSON round trip") {
  for (const auto& region :
       {RegionSpec::orthant(), RegionSpec::rectangle({2.0, 3.0}),
        RegionSpec::shifted_orthant({1.0, 0.5}), RegionSpec::two_faces_union()}) {
    const auto back = region_from_json(to_json(region));
    CHECK(back.kind == region.kind);
    CHECK(back.bounds == region.bounds);
    CHECK(back.shift == region.shift);
  }
}

TEST_CASE("verification report JSON carries the contract fields") {
  const auto model = standardized_2d_model(1.0);
  GridConfig grid;
  grid.step = 0.25;
  grid.x_max = 10.0;
  const auto rep = verify_full_grid(model, xi_diagonal_design(1.0),
                                    RegionSpec::orthant(), grid);
  const auto j = to_json(rep);
  CHECK(j.at("verified") == true);
  CHECK(j.at("tail_checked") == true);
  CHECK(j.at("tail_certified") == true);
  CHECK(j.at("n_points").get<std::size_t>() == rep.n_points);
  CHECK(j.at("violations").empty());
  CHECK(j.at("region").at("kind") == "orthant");
  CHECK(j.at("max_d").is_number());
}
