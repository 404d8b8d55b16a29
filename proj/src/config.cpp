// Copyright 2026 The FSOF Authors
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

#include "fsof/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string>

#include "fsof/errors.hpp"

namespace fsof {

namespace {

using nlohmann::json;

// Reads typed fields from one JSON object and rejects keys it never asked for.
class Section {
 public:
  Section(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ConfigError("'" + path_ + "' must be an object");
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : doc_.items()) {
      bool known = false;
      for (std::string_view k : keys) known = known || key == k;
      if (!known) throw ConfigError("unknown key '" + path_ + "." + key + "'");
    }
  }

  bool has(const char* key) const { return doc_.contains(key); }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = doc_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
    return v.get<double>();
  }

  double required_number(const char* key) const {
    if (!has(key)) throw ConfigError("missing " + where(key));
    return number(key, 0.0);
  }

  int integer(const char* key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = doc_.at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + " must be an integer");
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = doc_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(where(key) + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = doc_.at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + " must be a boolean");
    return v.get<bool>();
  }

  std::string string(const char* key, std::string fallback) const {
    if (!has(key)) return fallback;
    const json& v = doc_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
    return v.get<std::string>();
  }

  Interval interval(const char* key, Interval fallback) const {
    if (!has(key)) return fallback;
    const json& v = doc_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError(where(key) + " must be a [lo, hi] pair");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  Section child(const char* key) const { return {doc_.at(key), path_ + "." + key}; }

 private:
  std::string where(const char* key) const { return "'" + path_ + "." + key + "'"; }

  const json& doc_;
  std::string path_;
};

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

}  // namespace

PoseDelta MotionConfig::displacement() const {
  if (kind == MotionKind::kDisplacement) return pose;
  return integrate_rates(ackermann_rates(state), dt);
}

RunConfig parse_config(const json& doc) {
  const Section root(doc, "config");
  root.allow({"camera", "mount", "motion", "scene", "noise", "pso", "fit"});
  RunConfig cfg;

  if (!root.has("camera")) throw ConfigError("missing 'config.camera'");
  const Section camera = root.child("camera");
  camera.allow({"fx", "fy", "u0", "v0"});
  cfg.camera = {camera.required_number("fx"), camera.required_number("fy"),
                camera.required_number("u0"), camera.required_number("v0")};
  validate(cfg.camera);

  if (!root.has("mount")) throw ConfigError("missing 'config.mount'");
  const Section mount = root.child("mount");
  mount.allow({"h", "theta"});
  cfg.mount = {mount.required_number("h"), mount.number("theta", 0.0)};
  validate(cfg.mount);

  if (root.has("motion")) {
    const Section motion = root.child("motion");
    const std::string kind = motion.string("kind", "displacement");
    if (kind == "displacement") {
      motion.allow({"kind", "x_d", "z_d", "phi"});
      cfg.motion.kind = MotionKind::kDisplacement;
      cfg.motion.pose = {motion.number("x_d", 0.0), motion.number("z_d", 0.0),
                         motion.number("phi", 0.0)};
    } else if (kind == "velocity") {
      motion.allow({"kind", "v_r", "delta_f", "l", "heading", "dt"});
      cfg.motion.kind = MotionKind::kVelocity;
      cfg.motion.state = {motion.number("v_r", 0.0), motion.number("delta_f", 0.0),
                          motion.number("l", 1.0), motion.number("heading", 0.0)};
      cfg.motion.dt = motion.number("dt", cfg.motion.dt);
      validate(cfg.motion.state);
      if (!(cfg.motion.dt > 0.0)) throw ConfigError("'config.motion.dt' must be positive");
    } else {
      throw ConfigError("'config.motion.kind' must be \"displacement\" or \"velocity\"");
    }
  }

  cfg.scene.camera = cfg.camera;
  cfg.scene.mount = cfg.mount;
  if (root.has("scene")) {
    const Section scene = root.child("scene");
    scene.allow({"width", "height", "lateral_extent", "z_min", "z_max", "grid_spacing",
                 "sparse"});
    cfg.scene.size = {scene.integer("width", 1242), scene.integer("height", 375)};
    cfg.scene.lateral_extent = scene.number("lateral_extent", cfg.scene.lateral_extent);
    cfg.scene.z_min = scene.number("z_min", cfg.scene.z_min);
    cfg.scene.z_max = scene.number("z_max", cfg.scene.z_max);
    cfg.scene.grid_spacing = scene.number("grid_spacing", cfg.scene.grid_spacing);
    cfg.scene.sparse = scene.boolean("sparse", cfg.scene.sparse);
  } else {
    cfg.scene.size = {1242, 375};
  }
  validate(cfg.scene);

  if (root.has("noise")) {
    const Section noise = root.child("noise");
    noise.allow({"sigma", "seed"});
    cfg.noise.sigma = noise.number("sigma", 0.0);
    cfg.noise.seed = noise.unsigned_integer("seed", 0);
    if (!(cfg.noise.sigma >= 0.0)) throw ConfigError("'config.noise.sigma' must be >= 0");
  }

  if (root.has("pso")) {
    const Section pso = root.child("pso");
    pso.allow({"swarm_size", "max_iterations", "inertia", "cognitive", "social",
               "tolerance", "stall_window", "seed", "bounds"});
    PoseSearchConfig& p = cfg.pso;
    p.swarm_size = pso.integer("swarm_size", p.swarm_size);
    p.max_iterations = pso.integer("max_iterations", p.max_iterations);
    p.inertia = pso.number("inertia", p.inertia);
    p.cognitive = pso.number("cognitive", p.cognitive);
    p.social = pso.number("social", p.social);
    p.tolerance = pso.number("tolerance", p.tolerance);
    p.stall_window = pso.integer("stall_window", p.stall_window);
    p.seed = pso.unsigned_integer("seed", p.seed);
    if (pso.has("bounds")) {
      const Section bounds = pso.child("bounds");
      bounds.allow({"x_d", "z_d", "phi"});
      p.x_d = bounds.interval("x_d", p.x_d);
      p.z_d = bounds.interval("z_d", p.z_d);
      p.phi = bounds.interval("phi", p.phi);
    }
    validate(p);
  }

  if (root.has("fit")) {
    const Section fit = root.child("fit");
    fit.allow({"bin_w", "min_row_support", "tau", "kind"});
    cfg.fit.bin_w = fit.number("bin_w", cfg.fit.bin_w);
    cfg.fit.min_row_support = fit.integer("min_row_support", cfg.fit.min_row_support);
    cfg.fit.tau = fit.number("tau", cfg.fit.tau);
    if (fit.has("kind")) cfg.fit.kind = parse_fit_kind(fit.string("kind", ""));
    validate(cfg.fit);
  }
  return cfg;
}

RunConfig parse_config(std::string_view text) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config is not valid JSON");
  return parse_config(doc);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  const json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("'" + path.string() + "' is not valid JSON");
  return parse_config(doc);
}

json to_json(const RunConfig& cfg) {
  json motion;
  if (cfg.motion.kind == MotionKind::kDisplacement) {
    motion = {{"kind", "displacement"},
              {"x_d", cfg.motion.pose.x_d},
              {"z_d", cfg.motion.pose.z_d},
              {"phi", cfg.motion.pose.phi}};
  } else {
    motion = {{"kind", "velocity"},
              {"v_r", cfg.motion.state.v_r},
              {"delta_f", cfg.motion.state.delta_f},
              {"l", cfg.motion.state.l},
              {"heading", cfg.motion.state.heading},
              {"dt", cfg.motion.dt}};
  }
  const PoseSearchConfig& p = cfg.pso;
  return {
      {"camera",
       {{"fx", cfg.camera.fx}, {"fy", cfg.camera.fy}, {"u0", cfg.camera.u0}, {"v0", cfg.camera.v0}}},
      {"mount", {{"h", cfg.mount.h}, {"theta", cfg.mount.theta}}},
      {"motion", motion},
      {"scene",
       {{"width", cfg.scene.size.width},
        {"height", cfg.scene.size.height},
        {"lateral_extent", cfg.scene.lateral_extent},
        {"z_min", cfg.scene.z_min},
        {"z_max", cfg.scene.z_max},
        {"grid_spacing", cfg.scene.grid_spacing},
        {"sparse", cfg.scene.sparse}}},
      {"noise", {{"sigma", cfg.noise.sigma}, {"seed", cfg.noise.seed}}},
      {"pso",
       {{"swarm_size", p.swarm_size},
        {"max_iterations", p.max_iterations},
        {"inertia", p.inertia},
        {"cognitive", p.cognitive},
        {"social", p.social},
        {"tolerance", p.tolerance},
        {"stall_window", p.stall_window},
        {"seed", p.seed},
        {"bounds",
         {{"x_d", interval_json(p.x_d)},
          {"z_d", interval_json(p.z_d)},
          {"phi", interval_json(p.phi)}}}}},
      {"fit",
       {{"bin_w", cfg.fit.bin_w},
        {"min_row_support", cfg.fit.min_row_support},
        {"tau", cfg.fit.tau},
        {"kind", std::string(to_string(cfg.fit.kind))}}},
  };
}

json to_json(const MetricsReport& report) {
  return {{"e_A", report.e_A}, {"e_E", report.e_E}, {"e_U", report.e_U},
          {"e_V", report.e_V}, {"n", report.n},     {"units", std::string(to_string(report.units))}};
}

json to_json(const PoseEstimate& estimate) {
  return {{"pose",
           {{"x_d", estimate.pose.x_d}, {"z_d", estimate.pose.z_d}, {"phi", estimate.pose.phi}}},
          {"cost", estimate.cost},
          {"iterations", estimate.iterations},
          {"converged", estimate.converged}};
}

json to_json(const CurveFit& fit) {
  return {{"kind", std::string(to_string(fit.kind))},
          {"k", fit.k},
          {"a", fit.a},
          {"b", fit.b},
          {"c", fit.c},
          {"v0", fit.v0},
          {"residual_rms", fit.residual_rms},
          {"inliers", fit.inliers},
          {"units", std::string(to_string(fit.units))}};
}

CurveFit curve_fit_from_json(const json& doc) {
  const Section s(doc, "fit");
  s.allow({"kind", "k", "a", "b", "c", "v0", "residual_rms", "inliers", "units"});
  CurveFit fit;
  fit.kind = parse_fit_kind(s.string("kind", "rational-displacement"));
  fit.k = s.number("k", 0.0);
  fit.a = s.number("a", 0.0);
  fit.b = s.number("b", 0.0);
  fit.c = s.number("c", 0.0);
  fit.v0 = s.number("v0", 0.0);
  fit.residual_rms = s.number("residual_rms", 0.0);
  fit.inliers = s.integer("inliers", 0);
  fit.units = parse_flow_units(s.string("units", "px"));
  return fit;
}

}  // namespace fsof
