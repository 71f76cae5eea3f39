// Copyright 2026 The PIE Explorer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pie/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pie
{

using nlohmann::json;

namespace
{

/// Reader tracking the JSON path of the value being read, for error messages.
class Reader
{
public:
  Reader(const json & node, std::string path) : node_(node), path_(std::move(path)) {}

  const std::string & path() const { return path_; }
  bool has(const char * key) const { return node_.is_object() && node_.contains(key); }

  Reader at(const char * key) const
  {
    const std::string p = path_.empty() ? std::string(key) : path_ + "." + key;
    if (!node_.is_object()) {
      throw ScenarioError(path_.empty() ? "<root>" : path_, "expected an object");
    }
    if (!node_.contains(key)) {
      throw ScenarioError(p, "missing required field");
    }
    return Reader(node_.at(key), p);
  }

  Reader at(std::size_t i) const
  {
    return Reader(node_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  std::size_t size() const
  {
    if (!node_.is_array()) {
      throw ScenarioError(path_, "expected an array");
    }
    return node_.size();
  }

  double number() const
  {
    if (!node_.is_number()) {
      throw ScenarioError(path_, "expected a number");
    }
    return node_.get<double>();
  }

  long integer() const
  {
    if (!node_.is_number_integer()) {
      throw ScenarioError(path_, "expected an integer");
    }
    return node_.get<long>();
  }

  std::uint64_t unsigned_integer() const
  {
    if (!node_.is_number_unsigned()) {
      throw ScenarioError(path_, "expected a non-negative integer");
    }
    return node_.get<std::uint64_t>();
  }

  std::string string() const
  {
    if (!node_.is_string()) {
      throw ScenarioError(path_, "expected a string");
    }
    return node_.get<std::string>();
  }

  Point2 point() const
  {
    if (size() != 2) {
      throw ScenarioError(path_, "expected [x, y]");
    }
    return {at(std::size_t{0}).number(), at(std::size_t{1}).number()};
  }

  Polygon polygon() const
  {
    Polygon poly;
    for (std::size_t i = 0; i < size(); ++i) {
      poly.vertices.push_back(at(i).point());
    }
    return poly;
  }

  template <typename T, typename F>
  std::vector<T> list(F && read) const
  {
    std::vector<T> out;
    for (std::size_t i = 0; i < size(); ++i) {
      out.push_back(read(at(i)));
    }
    return out;
  }

  // optional field helpers keep the default when absent
  void get(const char * key, double & v) const
  {
    if (has(key)) {
      v = at(key).number();
    }
  }
  void get(const char * key, int & v) const
  {
    if (has(key)) {
      v = static_cast<int>(at(key).integer());
    }
  }
  void get(const char * key, long & v) const
  {
    if (has(key)) {
      v = at(key).integer();
    }
  }

private:
  const json & node_;
  std::string path_;
};

json point_json(const Point2 & p) { return json::array({p.x(), p.y()}); }

json polygon_json(const Polygon & poly)
{
  json a = json::array();
  for (const auto & v : poly.vertices) {
    a.push_back(point_json(v));
  }
  return a;
}

Scenario from_json(const json & root)
{
  const Reader r(root, "");
  Scenario s;
  s.schema_version = static_cast<int>(r.at("schema_version").integer());
  if (s.schema_version != Scenario::kSchemaVersion) {
    throw ScenarioError("schema_version", "unsupported version " + std::to_string(s.schema_version));
  }
  if (r.has("name")) {
    s.name = r.at("name").string();
  }
  if (r.has("seed")) {
    s.seed = r.at("seed").unsigned_integer();
  }
  const auto b = r.at("bounds");
  s.bounds.min = b.at("min").point();
  s.bounds.max = b.at("max").point();

  if (r.has("obstacles")) {
    s.obstacles = r.at("obstacles").list<Polygon>([](const Reader & x) { return x.polygon(); });
  }
  if (r.has("landmarks")) {
    s.landmarks = r.at("landmarks").list<Landmark>([](const Reader & x) {
      Landmark lm;
      lm.id = static_cast<int>(x.at("id").integer());
      lm.position = x.at("position").point();
      x.get("range_std", lm.range_noise_std);
      x.get("bearing_std", lm.bearing_noise_std);
      x.get("detect_range", lm.detect_range);
      return lm;
    });
  }

  const auto lra = r.at("lra");
  s.lra.polygons = lra.at("polygons").list<Polygon>([](const Reader & x) { return x.polygon(); });
  lra.get("gamma", s.lra.gamma);
  lra.get("delta", s.lra.delta);

  if (r.has("grid")) {
    const auto g = r.at("grid");
    g.get("resolution", s.grid.resolution);
    g.get("prior", s.grid.prior);
    if (g.has("regions")) {
      s.grid.regions = g.at("regions").list<PriorRegion>([](const Reader & x) {
        return PriorRegion{x.at("polygon").polygon(), x.at("p").number()};
      });
    }
  }
  if (r.has("sensor")) {
    const auto x = r.at("sensor");
    x.get("theta", s.sensor.theta);
    x.get("phi", s.sensor.phi);
    x.get("range", s.sensor.range);
    x.get("fov", s.sensor.fov);
    x.get("rate", s.sensor.rate);
  }
  if (r.has("noise")) {
    const auto x = r.at("noise");
    x.get("v_std", s.noise.v_std);
    x.get("omega_std", s.noise.omega_std);
  }
  if (r.has("robot")) {
    const auto x = r.at("robot");
    if (x.has("initial_pose")) {
      const auto p = x.at("initial_pose");
      if (p.size() != 3) {
        throw ScenarioError(p.path(), "expected [x, y, psi]");
      }
      s.robot.initial_pose = {p.at(std::size_t{0}).number(), p.at(std::size_t{1}).number(),
                              p.at(std::size_t{2}).number()};
    }
    if (x.has("initial_cov")) {
      const auto c = x.at("initial_cov");
      if (c.size() != 3) {
        throw ScenarioError(c.path(), "expected a 3x3 matrix");
      }
      for (std::size_t i = 0; i < 3; ++i) {
        const auto row = c.at(i);
        if (row.size() != 3) {
          throw ScenarioError(row.path(), "expected 3 entries");
        }
        for (std::size_t j = 0; j < 3; ++j) {
          s.robot.initial_cov(static_cast<int>(i), static_cast<int>(j)) = row.at(j).number();
        }
      }
    }
    x.get("speed", s.robot.speed);
    x.get("radius", s.robot.radius);
    if (x.has("gains")) {
      const auto gk = x.at("gains");
      gk.get("k_x", s.robot.gains.k_x);
      gk.get("k_y", s.robot.gains.k_y);
      gk.get("k_psi", s.robot.gains.k_psi);
      gk.get("v_max", s.robot.gains.v_max);
      gk.get("omega_max", s.robot.gains.omega_max);
    }
  }
  if (r.has("prm")) {
    const auto x = r.at("prm");
    x.get("nodes", s.prm.nodes);
    x.get("d_min", s.prm.d_min);
    x.get("d_max", s.prm.d_max);
    x.get("clearance", s.prm.clearance);
    if (x.has("seed")) {
      s.prm.seed = x.at("seed").unsigned_integer();
    }
    if (x.has("vertices")) {
      s.prm.vertices = x.at("vertices").list<Point2>([](const Reader & v) { return v.point(); });
    }
  }
  if (r.has("planner")) {
    const auto x = r.at("planner");
    auto & p = s.planner;
    x.get("alpha", p.alpha);
    x.get("beta", p.beta);
    x.get("horizon", p.horizon);
    x.get("n_cert_tol", p.n_cert_tol);
    x.get("samples", p.samples);
    x.get("max_paths", p.max_paths);
    x.get("time_budget", p.time_budget);
    x.get("max_nodes", p.max_nodes);
    x.get("trace_cap", p.trace_cap);
    if (x.has("variant")) {
      const auto v = x.at("variant");
      try {
        p.variant = info_variant_from_string(v.string());
      } catch (const std::invalid_argument & e) {
        throw ScenarioError(v.path(), e.what());
      }
    }
    if (x.has("sigma_worst")) {
      p.sigma_worst = x.at("sigma_worst").number();
    }
    if (x.has("goal_component")) {
      p.goal_component = static_cast<int>(x.at("goal_component").integer());
    }
  }
  if (r.has("episode")) {
    const auto x = r.at("episode");
    x.get("stages", s.episode.stages);
    x.get("dt", s.episode.dt);
    x.get("dwell_cap", s.episode.dwell_cap);
    x.get("settle_time", s.episode.settle_time);
    x.get("nees_window", s.episode.nees_window);
  }
  validate(s);
  return s;
}

json to_json(const Scenario & s)
{
  json j;
  j["schema_version"] = s.schema_version;
  j["name"] = s.name;
  j["seed"] = s.seed;
  j["bounds"] = {{"min", point_json(s.bounds.min)}, {"max", point_json(s.bounds.max)}};
  j["obstacles"] = json::array();
  for (const auto & o : s.obstacles) {
    j["obstacles"].push_back(polygon_json(o));
  }
  j["landmarks"] = json::array();
  for (const auto & lm : s.landmarks) {
    j["landmarks"].push_back(
      {{"id", lm.id},
       {"position", point_json(lm.position)},
       {"range_std", lm.range_noise_std},
       {"bearing_std", lm.bearing_noise_std},
       {"detect_range", lm.detect_range}});
  }
  json lra_polys = json::array();
  for (const auto & p : s.lra.polygons) {
    lra_polys.push_back(polygon_json(p));
  }
  j["lra"] = {{"polygons", lra_polys}, {"gamma", s.lra.gamma}, {"delta", s.lra.delta}};
  json regions = json::array();
  for (const auto & r : s.grid.regions) {
    regions.push_back({{"polygon", polygon_json(r.polygon)}, {"p", r.p}});
  }
  j["grid"] = {{"resolution", s.grid.resolution}, {"prior", s.grid.prior}, {"regions", regions}};
  j["sensor"] = {
    {"theta", s.sensor.theta}, {"phi", s.sensor.phi}, {"range", s.sensor.range},
    {"fov", s.sensor.fov}, {"rate", s.sensor.rate}};
  j["noise"] = {{"v_std", s.noise.v_std}, {"omega_std", s.noise.omega_std}};
  json cov = json::array();
  for (int i = 0; i < 3; ++i) {
    cov.push_back({s.robot.initial_cov(i, 0), s.robot.initial_cov(i, 1), s.robot.initial_cov(i, 2)});
  }
  const auto & g = s.robot.gains;
  j["robot"] = {
    {"initial_pose", {s.robot.initial_pose.x, s.robot.initial_pose.y, s.robot.initial_pose.psi}},
    {"initial_cov", cov},
    {"speed", s.robot.speed},
    {"radius", s.robot.radius},
    {"gains",
     {{"k_x", g.k_x}, {"k_y", g.k_y}, {"k_psi", g.k_psi}, {"v_max", g.v_max}, {"omega_max", g.omega_max}}}};
  json prm = {
    {"nodes", s.prm.nodes}, {"d_min", s.prm.d_min}, {"d_max", s.prm.d_max},
    {"seed", s.prm.seed}, {"clearance", s.prm.clearance}};
  if (!s.prm.vertices.empty()) {
    prm["vertices"] = json::array();
    for (const auto & v : s.prm.vertices) {
      prm["vertices"].push_back(point_json(v));
    }
  }
  j["prm"] = prm;
  const auto & p = s.planner;
  json planner = {
    {"alpha", p.alpha}, {"beta", p.beta}, {"horizon", p.horizon}, {"n_cert_tol", p.n_cert_tol},
    {"samples", p.samples}, {"max_paths", p.max_paths}, {"time_budget", p.time_budget},
    {"max_nodes", p.max_nodes}, {"variant", to_string(p.variant)}, {"trace_cap", p.trace_cap}};
  if (p.sigma_worst) {
    planner["sigma_worst"] = *p.sigma_worst;
  }
  if (p.goal_component) {
    planner["goal_component"] = *p.goal_component;
  }
  j["planner"] = planner;
  j["episode"] = {
    {"stages", s.episode.stages}, {"dt", s.episode.dt}, {"dwell_cap", s.episode.dwell_cap},
    {"settle_time", s.episode.settle_time}, {"nees_window", s.episode.nees_window}};
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string & text)
{
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error & e) {
    throw ScenarioError("<document>", e.what());
  }
  try {
    return from_json(root);
  } catch (const json::exception & e) {
    throw ScenarioError("<document>", e.what());
  }
}

Scenario load_scenario(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string dump_scenario(const Scenario & scenario)
{
  return to_json(scenario).dump(2) + "\n";
}

void save_scenario(const Scenario & scenario, const std::filesystem::path & path)
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write scenario file " + path.string());
  }
  out << dump_scenario(scenario);
}

}  // namespace pie
