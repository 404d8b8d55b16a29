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

// fsof: command-line front end for the road-plane flow library.
//
// Every subcommand prints a JSON summary on stdout and exits 0; failures
// print {"error": <code>, "message": <text>} on stderr and exit nonzero.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsof/config.hpp"
#include "fsof/errors.hpp"
#include "fsof/fitting.hpp"
#include "fsof/flow_io.hpp"
#include "fsof/flow_models.hpp"
#include "fsof/metrics.hpp"
#include "fsof/pose_estimation.hpp"
#include "fsof/runtime.hpp"
#include "fsof/scene_synth.hpp"
#include "fsof/visualize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2 };

void emit_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << '\n';
}

void write_json(const json& doc, const std::string& path) {
  if (path.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw fsof::IoError("cannot write '" + path + "'");
}

void warn_saturation(const fsof::WriteReport& report, const std::string& path) {
  if (report.saturated > 0) {
    std::cerr << json{{"warning", "saturated"},
                      {"path", path},
                      {"samples", report.saturated},
                      {"message", "flow outside the KITTI range [-512, 512) was clipped"}}
                     .dump()
              << '\n';
  }
}

fs::path visualization_path(const fs::path& flow_path) {
  fs::path viz = flow_path;
  viz.replace_filename(flow_path.stem().string() + "_viz.png");
  return viz;
}

fsof::FlowModel model_from_name(const std::string& name, const fsof::MotionConfig& motion) {
  const bool velocity = motion.kind == fsof::MotionKind::kVelocity;
  if (name == "full-disp") return fsof::FullDisplacement{motion.displacement()};
  if (name == "full-vel") {
    if (!velocity) throw fsof::ConfigError("--model full-vel needs a velocity motion section");
    return fsof::FullVelocity{motion.state};
  }
  if (name == "simple-disp") return fsof::SimplifiedDisplacement{motion.displacement().z_d};
  if (name == "simple-vel") {
    if (!velocity) throw fsof::ConfigError("--model simple-vel needs a velocity motion section");
    return fsof::SimplifiedVelocity{motion.state.v_r};
  }
  if (name == "simplest") {
    if (velocity) return fsof::SimplestVelocity{motion.state.v_r};
    return fsof::SimplestDisplacement{motion.pose.z_d};
  }
  throw fsof::ConfigError("unknown model '" + name + "'");
}

struct ObstacleArg {
  fsof::PixelRect rect;
  fsof::FlowVector offset;
};

ObstacleArg parse_obstacle(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw fsof::ConfigError("--obstacle: '" + item + "' is not a number");
    }
  }
  if (values.size() != 6) {
    throw fsof::ConfigError("--obstacle expects u,v,width,height,du,dv");
  }
  return {{static_cast<int>(values[0]), static_cast<int>(values[1]),
           static_cast<int>(values[2]), static_cast<int>(values[3])},
          {values[4], values[5]}};
}

fsof::FreespaceMask mask_or_all(const std::string& path, fsof::ImageSize size) {
  if (path.empty()) return fsof::FreespaceMask(size, true);
  return fsof::read_mask_png(path);
}

// ---------------------------------------------------------------------------

struct ModelArgs {
  std::string config, model = "full-disp", out, viz;
};

int run_model(const ModelArgs& a) {
  const fsof::RunConfig cfg = fsof::load_config(a.config);
  const fsof::FlowModel model = model_from_name(a.model, cfg.motion);
  const fsof::FlowMap flow =
      fsof::render_flow_map(model, cfg.camera, cfg.mount, cfg.scene.size);
  const fsof::WriteReport report = fsof::write_flow(flow, a.out);
  warn_saturation(report, a.out);
  const fs::path viz = a.viz.empty() ? visualization_path(a.out) : fs::path(a.viz);
  fsof::write_flow_visualization(flow, viz);
  write_json({{"model", a.model},
              {"units", std::string(fsof::to_string(flow.units()))},
              {"width", flow.width()},
              {"height", flow.height()},
              {"valid", flow.valid_count()},
              {"max_magnitude", fsof::max_flow_magnitude(flow)},
              {"flow", a.out},
              {"visualization", viz.string()}},
             "");
  return kOk;
}

struct SynthArgs {
  std::string config, out_flow, out_mask, obstacle;
  std::optional<double> noise_sigma;
};

int run_synth(const SynthArgs& a) {
  const fsof::RunConfig cfg = fsof::load_config(a.config);
  const fsof::PoseDelta pose = cfg.motion.displacement();
  fsof::FlowMap flow = fsof::synth_ground_truth(cfg.scene, pose);
  fsof::NoiseSpec noise = cfg.noise;
  if (a.noise_sigma) noise.sigma = *a.noise_sigma;
  if (!(noise.sigma >= 0.0)) throw fsof::InvalidArgument("--noise-sigma must be >= 0");
  flow = fsof::add_noise(flow, noise);

  fsof::FreespaceMask freespace(flow.size(), false);
  for (std::size_t i = 0; i < flow.size().area(); ++i) {
    freespace.data()[i] = flow.valid_data()[i];
  }
  if (!a.obstacle.empty()) {
    const ObstacleArg obstacle = parse_obstacle(a.obstacle);
    fsof::ObstacleScene scene = fsof::insert_obstacle(flow, obstacle.rect, obstacle.offset);
    flow = std::move(scene.flow);
    freespace = std::move(scene.freespace);
  }

  const fsof::WriteReport report = fsof::write_flow(flow, a.out_flow);
  warn_saturation(report, a.out_flow);
  if (!a.out_mask.empty()) fsof::write_mask_png(freespace, a.out_mask);
  write_json({{"pose", {{"x_d", pose.x_d}, {"z_d", pose.z_d}, {"phi", pose.phi}}},
              {"valid", flow.valid_count()},
              {"freespace", freespace.count()},
              {"noise",
               {{"sigma", noise.sigma},
                {"seed", noise.seed},
                {"generator", std::string(fsof::kNoiseGenerator)}}}},
             "");
  return kOk;
}

struct FitArgs {
  std::string flow, mask, config, out_fit_json, out_fitted_flow;
};

int run_fit(const FitArgs& a) {
  const fsof::RunConfig cfg = fsof::load_config(a.config);
  const fsof::FlowMap flow = fsof::read_flow(a.flow);
  const fsof::FreespaceMask mask = mask_or_all(a.mask, flow.size());
  const fsof::RowProjection rp = fsof::row_projection(flow, mask, cfg.fit);
  const fsof::CurveFit fit = fsof::fit_fv_curve(rp, cfg.camera, cfg.fit.kind);
  json doc = fsof::to_json(fit);
  doc["populated_rows"] = rp.populated_count();
  if (!a.out_fitted_flow.empty()) {
    const fsof::FlowMap fitted = fsof::render_fitted_fv(fit, flow.size(), cfg.camera);
    warn_saturation(fsof::write_flow(fitted, a.out_fitted_flow), a.out_fitted_flow);
    const fsof::MetricsReport agreement = fsof::evaluate(flow, fitted, mask);
    doc["max_abs_fv_error"] = [&] {
      double worst = 0.0;
      for (int v = 0; v < flow.height(); ++v) {
        for (int u = 0; u < flow.width(); ++u) {
          if (flow.valid(u, v) && fitted.valid(u, v) && mask.at(u, v)) {
            worst = std::max(worst, std::abs(flow.fv(u, v) - fitted.fv(u, v)));
          }
        }
      }
      return worst;
    }();
    doc["mean_abs_fv_error"] = agreement.e_V;
  }
  write_json(doc, a.out_fit_json);
  return kOk;
}

struct SegmentArgs {
  std::string flow, fitted, out_mask;
  double tau = 1.0;
};

int run_segment(const SegmentArgs& a) {
  const fsof::FlowMap observed = fsof::read_flow(a.flow);
  const fsof::FlowMap fitted = fsof::read_flow(a.fitted);
  const fsof::FreespaceMask mask = fsof::segment_freespace(observed, fitted, a.tau);
  fsof::write_mask_png(mask, a.out_mask);
  write_json({{"tau", a.tau}, {"freespace", mask.count()}, {"valid", observed.valid_count()}},
             "");
  return kOk;
}

struct PoseArgs {
  std::string flow, mask, config, out_json;
};

int run_estimate_pose(const PoseArgs& a) {
  const fsof::RunConfig cfg = fsof::load_config(a.config);
  const fsof::FlowMap flow = fsof::read_flow(a.flow);
  if (flow.units() != fsof::FlowUnits::kPixels) {
    throw fsof::UnitsMismatch("pose estimation needs displacement flow in px");
  }
  const fsof::FreespaceMask mask = mask_or_all(a.mask, flow.size());
  const fsof::PoseEstimate estimate =
      fsof::estimate_pose(flow, mask, cfg.camera, cfg.mount, cfg.pso);
  json doc = fsof::to_json(estimate);
  doc["seed"] = cfg.pso.seed;
  write_json(doc, a.out_json);
  return kOk;
}

struct EvalArgs {
  std::string gt, est, mask, out_json, out_heatmap;
};

int run_eval(const EvalArgs& a) {
  const fsof::FlowMap gt = fsof::read_flow(a.gt);
  const fsof::FlowMap est = fsof::read_flow(a.est);
  const fsof::FreespaceMask mask = mask_or_all(a.mask, gt.size());
  const fsof::MetricsReport report = fsof::evaluate(gt, est, mask);
  if (!a.out_heatmap.empty()) fsof::write_error_heatmap(gt, est, a.out_heatmap);
  write_json(fsof::to_json(report), a.out_json);
  return kOk;
}

struct BenchArgs {
  int width = 1242, height = 375, frames = 100;
};

int run_bench(const BenchArgs& a) {
  if (a.width < 1 || a.height < 1) throw fsof::InvalidArgument("image size must be positive");
  const fsof::ImageSize size{a.width, a.height};
  const fsof::ThroughputResult r = fsof::measure_render_throughput(
      fsof::benchmark_model(), fsof::benchmark_camera(size), fsof::benchmark_mount(), size,
      a.frames);
  write_json({{"width", a.width},
              {"height", a.height},
              {"frames", r.frames},
              {"threads", r.threads},
              {"ms_per_frame", r.ms_per_frame()},
              {"fps", r.fps()},
              {"environment", fsof::environment_json()}},
             "");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form road-plane optical flow: model, synthesise, fit, segment, "
               "estimate pose, evaluate, benchmark."};
  app.require_subcommand(1);
  std::optional<int> threads;
  app.add_option("--threads", threads, "OpenMP thread cap (default: $FSOF_THREADS)")
      ->check(CLI::PositiveNumber);

  const std::string model_names = "full-disp|full-vel|simple-disp|simple-vel|simplest";

  ModelArgs model;
  auto* model_cmd = app.add_subcommand("model", "Render a closed-form flow map");
  model_cmd->add_option("--config", model.config, "JSON config")->required()->check(CLI::ExistingFile);
  model_cmd->add_option("--model", model.model, model_names)
      ->check(CLI::IsMember({"full-disp", "full-vel", "simple-disp", "simple-vel", "simplest"}));
  model_cmd->add_option("--out", model.out, "Output flow (.png KITTI or .flo)")->required();
  model_cmd->add_option("--viz", model.viz, "Colour-wheel PNG (default <out>_viz.png)");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Synthesise virtual road-plane ground truth");
  synth_cmd->add_option("--config", synth.config, "JSON config")->required()->check(CLI::ExistingFile);
  synth_cmd->add_option("--out-flow", synth.out_flow, "Output flow (.png or .flo)")->required();
  synth_cmd->add_option("--out-mask", synth.out_mask, "Output freespace mask PNG");
  synth_cmd->add_option("--noise-sigma", synth.noise_sigma, "Override noise std dev (px)");
  synth_cmd->add_option("--obstacle", synth.obstacle, "Obstacle u,v,width,height,du,dv");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the V-flow curve");
  fit_cmd->add_option("--flow", fit.flow, "Observed flow")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--mask", fit.mask, "Mask PNG restricting the fit")->check(CLI::ExistingFile);
  fit_cmd->add_option("--config", fit.config, "JSON config")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--out-fit-json", fit.out_fit_json, "Fit report (default stdout)");
  fit_cmd->add_option("--out-fitted-flow", fit.out_fitted_flow, "Fitted Fv map");

  SegmentArgs segment;
  auto* segment_cmd = app.add_subcommand("segment", "Segment freespace against a fitted map");
  segment_cmd->add_option("--flow", segment.flow, "Observed flow")->required()->check(CLI::ExistingFile);
  segment_cmd->add_option("--fitted", segment.fitted, "Fitted flow")->required()->check(CLI::ExistingFile);
  segment_cmd->add_option("--tau", segment.tau, "Threshold, px")->check(CLI::NonNegativeNumber);
  segment_cmd->add_option("--out-mask", segment.out_mask, "Output mask PNG")->required();

  PoseArgs pose;
  auto* pose_cmd = app.add_subcommand("estimate-pose", "Estimate (x_d, z_d, phi) by PSO");
  pose_cmd->add_option("--flow", pose.flow, "Observed flow")->required()->check(CLI::ExistingFile);
  pose_cmd->add_option("--mask", pose.mask, "Freespace mask PNG")->check(CLI::ExistingFile);
  pose_cmd->add_option("--config", pose.config, "JSON config")->required()->check(CLI::ExistingFile);
  pose_cmd->add_option("--out-json", pose.out_json, "Estimate (default stdout)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Compute e_A, e_E, e_U, e_V");
  eval_cmd->add_option("--gt", eval.gt, "Ground-truth flow")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--est", eval.est, "Estimated flow")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--mask", eval.mask, "Evaluation mask PNG")->check(CLI::ExistingFile);
  eval_cmd->add_option("--out-json", eval.out_json, "Report (default stdout)");
  eval_cmd->add_option("--out-heatmap", eval.out_heatmap, "End-point error heat map PNG");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Measure render_flow_map throughput");
  bench_cmd->add_option("--width", bench.width, "Image width")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--height", bench.height, "Image height")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--frames", bench.frames, "Timed frames")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--threads", threads, "OpenMP thread cap")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("UsageError", e.what());
    return kUsage;
  }

  try {
    fsof::configure_threads(threads);
    if (*model_cmd) return run_model(model);
    if (*synth_cmd) return run_synth(synth);
    if (*fit_cmd) return run_fit(fit);
    if (*segment_cmd) return run_segment(segment);
    if (*pose_cmd) return run_estimate_pose(pose);
    if (*eval_cmd) return run_eval(eval);
    if (*bench_cmd) return run_bench(bench);
  } catch (const fsof::Error& e) {
    emit_error(e.code(), e.what());
    return kFailure;
  } catch (const std::exception& e) {
    emit_error("InternalError", e.what());
    return kFailure;
  }
  return kFailure;
}
