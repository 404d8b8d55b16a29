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

#include "fsof/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "fsof/errors.hpp"

namespace fsof {

std::string_view to_string(FitKind kind) {
  switch (kind) {
    case FitKind::kRationalDisplacement:
      return "rational-displacement";
    case FitKind::kQuadraticVelocity:
      return "quadratic-velocity";
    case FitKind::kGenericQuadratic:
      return "generic-quadratic";
  }
  return "unknown";
}

FitKind parse_fit_kind(std::string_view text) {
  for (FitKind kind : {FitKind::kRationalDisplacement, FitKind::kQuadraticVelocity,
                       FitKind::kGenericQuadratic}) {
    if (text == to_string(kind)) return kind;
  }
  throw ConfigError("unknown fit kind '" + std::string(text) + "'");
}

void validate(const FitConfig& cfg) {
  if (!(cfg.bin_w > 0.0)) throw InvalidArgument("bin width must be positive");
  if (cfg.min_row_support < 1) throw InvalidArgument("min_row_support must be >= 1");
  if (!(cfg.tau >= 0.0)) throw InvalidArgument("tau must be >= 0");
}

int RowProjection::populated_count() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(),
                                        [](const RowSample& r) { return r.populated; }));
}

namespace detail {

// Mode of one row. `values` must be sorted ascending; the result depends
// only on the multiset of values.
RowSample summarise_row(std::span<const double> values, const FitConfig& cfg) {
  RowSample out;
  if (values.empty()) return out;

  // Histogram mode; sorted input makes equal bins contiguous.
  double best_bin = std::floor(values.front() / cfg.bin_w);
  std::size_t best_count = 0;
  std::size_t i = 0;
  while (i < values.size()) {
    const double bin = std::floor(values[i] / cfg.bin_w);
    std::size_t j = i;
    while (j < values.size() && std::floor(values[j] / cfg.bin_w) == bin) ++j;
    if (j - i > best_count) {
      best_count = j - i;
      best_bin = bin;
    }
    i = j;
  }

  // Flat-kernel mean shift from the mode bin centre.
  const double half = 1.5 * cfg.bin_w;
  double centre = (best_bin + 0.5) * cfg.bin_w;
  std::size_t count = 0;
  for (int iter = 0; iter < 20; ++iter) {
    const auto lo = std::lower_bound(values.begin(), values.end(), centre - half);
    const auto hi = std::upper_bound(values.begin(), values.end(), centre + half);
    count = static_cast<std::size_t>(hi - lo);
    if (count == 0) break;
    double sum = 0.0;
    for (auto it = lo; it != hi; ++it) sum += *it;
    const double next = sum / static_cast<double>(count);
    const bool settled = next == centre;
    centre = next;
    if (settled) break;
  }
  out.support = static_cast<int>(count);
  out.value = centre;
  out.populated = out.support >= cfg.min_row_support;
  return out;
}

}  // namespace detail

namespace {

RowProjection project_rows(const FlowMap& flow, const FreespaceMask* mask,
                           const FitConfig& cfg) {
  validate(cfg);
  if (mask) require_same_size(flow.size(), mask->size(), "row_projection");
  RowProjection rp{flow.size(), flow.units(),
                   std::vector<RowSample>(static_cast<std::size_t>(flow.height()))};
  std::size_t total = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : total)
  for (int v = 0; v < flow.height(); ++v) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(flow.width()));
    for (int u = 0; u < flow.width(); ++u) {
      if (!flow.valid(u, v) || (mask && !mask->at(u, v))) continue;
      values.push_back(flow.fv(u, v));
    }
    total += values.size();
    std::sort(values.begin(), values.end());
    rp.rows[static_cast<std::size_t>(v)] = detail::summarise_row(values, cfg);
  }
  if (total == 0) throw EmptyInput("row_projection: no valid pixels");
  return rp;
}

struct Sample {
  double v;
  double y;
};

int required_rows(FitKind kind) {
  return kind == FitKind::kGenericQuadratic ? 3 : 1;
}

double model_value(FitKind kind, double k, double s) {
  return kind == FitKind::kRationalDisplacement ? k * s * s / (1.0 - k * s)
                                                : k * s * s;
}

// Weighted one-parameter fit in s = v - v0.
double fit_single(FitKind kind, std::span<const Sample> samples,
                  std::span<const double> w, double v0, double k_start,
                  bool warm) {
  if (kind == FitKind::kQuadraticVelocity) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double s = samples[i].v - v0;
      num += w[i] * samples[i].y * s * s;
      den += w[i] * s * s * s * s;
    }
    if (!(den > 0.0)) throw DegenerateFit("quadratic fit: no usable rows");
    return num / den;
  }

  double s_max = 0.0;
  for (const Sample& p : samples) s_max = std::max(s_max, p.v - v0);
  const auto feasible = [&](double k) { return 1.0 - k * s_max > 0.0; };
  const auto cost = [&](double k) {
    double c = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double r = samples[i].y - model_value(kind, k, samples[i].v - v0);
      c += w[i] * r * r;
    }
    return c;
  };

  double k = k_start;
  if (!warm) {
    // y (1 - k s) = k s^2  =>  y = k (s^2 + y s): linear in k.
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double s = samples[i].v - v0;
      const double g = s * s + samples[i].y * s;
      num += w[i] * samples[i].y * g;
      den += w[i] * g * g;
    }
    if (!(den > 0.0)) throw DegenerateFit("rational fit: singular normal equation");
    k = num / den;
  }
  if (!feasible(k)) k = 0.5 / s_max;

  // Gauss-Newton on the true residual with step halving.
  double current = cost(k);
  for (int iter = 0; iter < 100; ++iter) {
    double jr = 0.0;
    double jj = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double s = samples[i].v - v0;
      const double d = 1.0 - k * s;
      const double jac = s * s / (d * d);
      const double r = samples[i].y - model_value(kind, k, s);
      jr += w[i] * jac * r;
      jj += w[i] * jac * jac;
    }
    if (!(jj > 0.0)) throw DegenerateFit("rational fit: zero Jacobian");
    double step = jr / jj;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      const double trial = k + step;
      if (feasible(trial)) {
        const double trial_cost = cost(trial);
        if (trial_cost <= current) {
          accepted = trial != k;
          k = trial;
          current = trial_cost;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted || std::abs(step) <= 1e-15 * std::max(std::abs(k), 1e-300)) break;
  }
  return k;
}

CurveFit fit_weighted(FitKind kind, std::span<const Sample> samples,
                      std::span<const double> w, double v0,
                      const CurveFit* warm) {
  CurveFit fit;
  fit.kind = kind;
  fit.v0 = v0;
  if (kind == FitKind::kGenericQuadratic) {
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sw = std::sqrt(w[static_cast<std::size_t>(i)]);
      const double v = samples[static_cast<std::size_t>(i)].v;
      A(i, 0) = sw * v * v;
      A(i, 1) = sw * v;
      A(i, 2) = sw;
      y(i) = sw * samples[static_cast<std::size_t>(i)].y;
    }
    // Column scaling keeps the rank test meaningful for large v.
    const Eigen::Vector3d scale = A.colwise().norm().transpose().cwiseMax(1e-300);
    const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(As);
    qr.setThreshold(1e-12);
    if (qr.rank() < 3) throw DegenerateFit("generic quadratic: rank-deficient design");
    const Eigen::Vector3d x = qr.solve(y).cwiseQuotient(scale);
    fit.a = x(0);
    fit.b = x(1);
    fit.c = x(2);
  } else {
    fit.k = fit_single(kind, samples, w, v0, warm ? warm->k : 0.0, warm != nullptr);
  }
  return fit;
}

double residual(const CurveFit& fit, const Sample& p) {
  if (fit.kind == FitKind::kGenericQuadratic) {
    return p.y - (fit.a * p.v * p.v + fit.b * p.v + fit.c);
  }
  return p.y - model_value(fit.kind, fit.k, p.v - fit.v0);
}

}  // namespace

RowProjection row_projection(const FlowMap& flow, const FitConfig& cfg) {
  return project_rows(flow, nullptr, cfg);
}

RowProjection row_projection(const FlowMap& flow, const FreespaceMask& mask,
                             const FitConfig& cfg) {
  return project_rows(flow, &mask, cfg);
}

std::optional<double> CurveFit::evaluate(double v) const {
  if (kind == FitKind::kGenericQuadratic) return a * v * v + b * v + c;
  const double s = v - v0;
  if (!(s > 0.0)) return std::nullopt;
  if (kind == FitKind::kRationalDisplacement && !(1.0 - k * s > 0.0)) {
    return std::nullopt;
  }
  return model_value(kind, k, s);
}

CurveFit fit_fv_curve(const RowProjection& rp, const CameraIntrinsics& k,
                      FitKind kind) {
  validate(k);
  std::vector<Sample> samples;
  for (std::size_t v = 0; v < rp.rows.size(); ++v) {
    const RowSample& row = rp.rows[v];
    if (!row.populated) continue;
    const auto vv = static_cast<double>(v);
    if (kind != FitKind::kGenericQuadratic && !((vv - k.v0) / k.fy > kHorizonEpsilon)) {
      continue;
    }
    samples.push_back({vv, row.value});
  }
  const int needed = required_rows(kind);
  if (static_cast<int>(samples.size()) < needed) {
    throw InsufficientRows("fit needs at least " + std::to_string(needed) +
                           " populated rows, got " + std::to_string(samples.size()));
  }

  std::vector<double> weights(samples.size(), 1.0);
  CurveFit fit = fit_weighted(kind, samples, weights, k.v0, nullptr);

  double sq = 0.0;
  for (const Sample& p : samples) sq += residual(fit, p) * residual(fit, p);
  const double rms = std::sqrt(sq / static_cast<double>(samples.size()));
  if (rms > 0.0) {
    const double c = 3.0 * rms;
    int kept = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double r = residual(fit, samples[i]) / c;
      weights[i] = std::abs(r) < 1.0 ? (1.0 - r * r) * (1.0 - r * r) : 0.0;
      kept += weights[i] > 0.0 ? 1 : 0;
    }
    if (kept >= needed) {
      try {
        fit = fit_weighted(kind, samples, weights, k.v0, &fit);
      } catch (const DegenerateFit&) {
        std::fill(weights.begin(), weights.end(), 1.0);
      }
    } else {
      std::fill(weights.begin(), weights.end(), 1.0);
    }
  }

  sq = 0.0;
  int inliers = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(weights[i] > 0.0)) continue;
    sq += residual(fit, samples[i]) * residual(fit, samples[i]);
    ++inliers;
  }
  fit.inliers = inliers;
  fit.residual_rms = std::sqrt(sq / static_cast<double>(inliers));
  fit.units = rp.units;
  return fit;
}

FlowMap render_fitted_fv(const CurveFit& fit, ImageSize size,
                         const CameraIntrinsics& k) {
  validate(k);
  FlowMap out(size, fit.units);
  for (int v = 0; v < size.height; ++v) {
    const std::optional<double> value = fit.evaluate(static_cast<double>(v));
    if (!value || !std::isfinite(*value)) continue;
    for (int u = 0; u < size.width; ++u) out.set(u, v, {0.0, *value});
  }
  return out;
}

FreespaceMask segment_freespace(const FlowMap& observed, const FlowMap& fitted,
                                double tau) {
  require_same_size(observed.size(), fitted.size(), "segment_freespace");
  require_same_units(observed.units(), fitted.units(), "segment_freespace");
  if (!(tau >= 0.0)) throw InvalidArgument("tau must be >= 0");
  FreespaceMask mask(observed.size(), false);
  const auto n = static_cast<long>(observed.size().area());
  const auto& ov = observed.valid_data();
  const auto& fvld = fitted.valid_data();
  const auto& ofv = observed.fv_data();
  const auto& ffv = fitted.fv_data();
  auto& out = mask.data();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    out[i] = (ov[i] && fvld[i] && std::abs(ofv[i] - ffv[i]) <= tau) ? 1 : 0;
  }
  return mask;
}

namespace reference {

RowProjection row_projection(const FlowMap& flow, const FreespaceMask& mask,
                             const FitConfig& cfg) {
  validate(cfg);
  require_same_size(flow.size(), mask.size(), "row_projection");
  RowProjection rp{flow.size(), flow.units(), {}};
  std::size_t total = 0;
  for (int v = 0; v < flow.height(); ++v) {
    std::vector<double> values;
    for (int u = 0; u < flow.width(); ++u) {
      if (flow.valid(u, v) && mask.at(u, v)) values.push_back(flow.fv(u, v));
    }
    total += values.size();
    std::sort(values.begin(), values.end());
    rp.rows.push_back(detail::summarise_row(values, cfg));
  }
  if (total == 0) throw EmptyInput("row_projection: no valid pixels");
  return rp;
}

}  // namespace reference

}  // namespace fsof
