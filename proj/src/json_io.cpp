#include "pdoe/json_io.hpp"

#include <cmath>

namespace pdoe {

using nlohmann::json;

namespace {

json safe_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

json to_json(const ModelSpec& model) {
  return json{{"k", model.k()},
              {"structure", structure_name(model.structure())},
              {"beta", model.beta()}};
}

ModelSpec model_from_json(const json& j) {
  return ModelSpec(j.at("k").get<int>(),
                   structure_from_name(j.at("structure").get<std::string>()),
                   j.at("beta").get<std::vector<double>>());
}

json to_json(const Design& design) {
  return json{{"points", design.points()}, {"weights", design.weights()}};
}

Design design_from_json(const json& j) {
  return Design(j.at("points").get<std::vector<Point>>(),
                j.at("weights").get<std::vector<double>>());
}

json to_json(const RegionSpec& region) {
  json j;
  switch (region.kind) {
    case RegionSpec::Kind::Orthant: j["kind"] = "orthant"; break;
    case RegionSpec::Kind::Rectangle:
      j["kind"] = "rectangle";
      j["bounds"] = region.bounds;
      break;
    case RegionSpec::Kind::ShiftedOrthant:
      j["kind"] = "shifted_orthant";
      j["shift"] = region.shift;
      break;
    case RegionSpec::Kind::TwoFacesUnion: j["kind"] = "two_faces_union"; break;
  }
  return j;
}

RegionSpec region_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "orthant") return RegionSpec::orthant();
  if (kind == "rectangle")
    return RegionSpec::rectangle(j.at("bounds").get<std::vector<double>>());
  if (kind == "shifted_orthant")
    return RegionSpec::shifted_orthant(j.at("shift").get<std::vector<double>>());
  if (kind == "two_faces_union") return RegionSpec::two_faces_union();
  throw std::invalid_argument("unknown region kind: " + kind);
}

json to_json(const VerificationReport& report) {
  json j;
  j["max_d"] = safe_number(report.max_d);
  j["argmax"] = report.argmax;
  j["n_points"] = report.n_points;
  j["tolerance"] = report.tolerance;
  j["region"] = to_json(report.region);
  j["reduced"] = report.reduced;
  j["verified"] = report.verified();
  j["tail_checked"] = report.tail_checked;
  if (report.tail_checked) {
    j["tail_certified"] = report.tail_certified;
    j["shell_max_d"] = safe_number(report.shell_max_d);
  }
  if (report.reduced) j["reduction_confirmed"] = report.reduction_confirmed;
  if (report.experimental) j["experimental"] = true;
  json viols = json::array();
  for (const auto& v : report.violations)
    viols.push_back(json{{"x", v.x}, {"d", safe_number(v.d)}});
  j["violations"] = viols;
  if (!report.faces.empty()) {
    json faces = json::array();
    for (const auto& f : report.faces)
      faces.push_back(json{{"i", f.i},
                           {"j", f.j},
                           {"max_d", safe_number(f.max_d)},
                           {"argmax", f.argmax}});
    j["faces"] = faces;
  }
  return j;
}

json to_json(const OracleResult& result) {
  json j;
  j["design"] = to_json(result.design);
  j["grid_design"] = to_json(result.grid_design);
  j["logdet"] = safe_number(result.logdet);
  j["iterations"] = result.iterations;
  j["final_max_sensitivity_gap"] = result.final_max_sensitivity_gap;
  j["converged"] = result.converged;
  return j;
}

}  // namespace pdoe
