/*
 Copyright 2026 The lkcert Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "lkcert/road.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lkcert/errors.hpp"

namespace lkcert {

namespace {

void check_steps(int steps) {
  if (steps < 0) throw Error(ErrorKind::Parameter, "road: negative step count");
}

RoadProfile from_curvature(const VehicleParams& params, std::vector<double> kappa) {
  RoadProfile r;
  r.Vx.reserve(kappa.size());
  for (double k : kappa) r.Vx.push_back(speed_for_curvature(params, k));
  r.kappa = std::move(kappa);
  return r;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

double speed_for_curvature(const VehicleParams& params, double kappa, double kappa_ref) {
  const double s = std::clamp(1.0 - 2.0 * std::abs(kappa) / kappa_ref, -1.0, 1.0);
  return params.V_nom + 0.95 * params.dV_max * s;
}

RoadProfile road_straight(const VehicleParams& params, int steps) {
  check_steps(steps);
  return from_curvature(params, std::vector<double>(static_cast<std::size_t>(steps), 0.0));
}

RoadProfile road_constant_radius(const VehicleParams& params, int steps, double kappa, int lead) {
  check_steps(steps);
  std::vector<double> k(static_cast<std::size_t>(steps), 0.0);
  for (int i = std::max(lead, 0); i < steps; ++i) k[static_cast<std::size_t>(i)] = kappa;
  return from_curvature(params, std::move(k));
}

RoadProfile road_s_curve(const VehicleParams& params, int steps, double kappa_max, int period) {
  check_steps(steps);
  if (period <= 0) throw Error(ErrorKind::Parameter, "road: s_curve period must be > 0");
  std::vector<double> k(static_cast<std::size_t>(steps), 0.0);
  for (int i = 0; i < std::min(steps, period); ++i) {
    k[static_cast<std::size_t>(i)] = kappa_max * std::sin(2.0 * std::numbers::pi * i / period);
  }
  return from_curvature(params, std::move(k));
}

RoadProfile road_clothoid_ramp(const VehicleParams& params, int steps, double kappa_max, int ramp) {
  check_steps(steps);
  if (ramp <= 0) throw Error(ErrorKind::Parameter, "road: clothoid ramp length must be > 0");
  std::vector<double> k(static_cast<std::size_t>(steps), 0.0);
  const int hold = std::max(0, steps - 3 * ramp);
  for (int i = 0; i < steps; ++i) {
    double v = 0.0;
    if (i < ramp) v = static_cast<double>(i) / ramp;
    else if (i < ramp + hold) v = 1.0;
    else if (i < 2 * ramp + hold) v = 1.0 - static_cast<double>(i - ramp - hold) / ramp;
    k[static_cast<std::size_t>(i)] = kappa_max * v;
  }
  return from_curvature(params, std::move(k));
}

RoadProfile road_random_training(const VehicleParams& params, int steps, std::mt19937_64& rng) {
  check_steps(steps);
  double a[3], f[3], ph[3];
  for (double& v : a) v = uniform(rng, -1e-3, 1e-3);
  for (double& v : f) v = uniform(rng, 0.02, 0.15);
  for (double& v : ph) v = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  std::vector<double> k(static_cast<std::size_t>(steps), 0.0);
  for (int i = 0; i < steps; ++i) {
    const double t = i * params.T;
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += a[j] * std::sin(2.0 * std::numbers::pi * f[j] * t + ph[j]) / 1.5;
    k[static_cast<std::size_t>(i)] = s;
  }
  return from_curvature(params, std::move(k));
}

RoadProfile road_random_shaped(const VehicleParams& params, int steps, std::mt19937_64& rng) {
  check_steps(steps);
  const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
  const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
  const double kmax = sign * uniform(rng, 2e-4, 1.5e-3);
  const int span = std::max(steps, 8);
  RoadProfile r;
  switch (kind) {
    case 0:
      r = road_straight(params, steps);
      break;
    case 1:
      r = road_constant_radius(params, steps, kmax,
                               std::uniform_int_distribution<int>(0, span / 4)(rng));
      break;
    case 2:
      r = road_s_curve(params, steps, kmax,
                       std::uniform_int_distribution<int>(span / 4, span)(rng));
      break;
    default:
      r = road_clothoid_ramp(params, steps, kmax,
                             std::uniform_int_distribution<int>(span / 8, span / 3)(rng));
      break;
  }
  // Speed walk, independent of curvature, reflected at the band edges.
  double v = uniform(rng, params.v_min(), params.v_max());
  const double dv = 0.5 * params.T;  // at most 0.5 m/s^2
  for (int i = 0; i < steps; ++i) {
    v += uniform(rng, -dv, dv);
    if (v > params.v_max()) v = 2.0 * params.v_max() - v;
    if (v < params.v_min()) v = 2.0 * params.v_min() - v;
    v = std::clamp(v, params.v_min(), params.v_max());
    r.Vx[static_cast<std::size_t>(i)] = v;
  }
  return r;
}

namespace {

RoadProfile road_shape_from_json(const VehicleParams& params, int steps, const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("kind")) {
    throw Error(ErrorKind::Format, "road: missing \"kind\"");
  }
  const std::string kind = spec.at("kind").get<std::string>();
  auto num = [&spec](const char* key, double def) {
    return spec.contains(key) ? spec.at(key).get<double>() : def;
  };
  auto integer = [&spec](const char* key, int def) {
    return spec.contains(key) ? spec.at(key).get<int>() : def;
  };
  try {
    if (kind == "straight") return road_straight(params, steps);
    if (kind == "constant_radius") {
      return road_constant_radius(params, steps, num("kappa", 1e-3), integer("lead", 0));
    }
    if (kind == "s_curve") {
      return road_s_curve(params, steps, num("kappa_max", 1e-3), integer("period", steps));
    }
    if (kind == "clothoid_ramp") {
      return road_clothoid_ramp(params, steps, num("kappa_max", 1e-3), integer("ramp", std::max(1, steps / 4)));
    }
    if (kind == "random_training" || kind == "random_shaped") {
      std::mt19937_64 rng(spec.contains("seed") ? spec.at("seed").get<std::uint64_t>() : 0ULL);
      return kind == "random_training" ? road_random_training(params, steps, rng)
                                       : road_random_shaped(params, steps, rng);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("road: ") + e.what());
  }
  throw Error(ErrorKind::Format, "road: unknown kind \"" + kind + "\"");
}

}  // namespace

RoadProfile road_from_json(const VehicleParams& params, int steps, const nlohmann::json& spec) {
  RoadProfile r = road_shape_from_json(params, steps, spec);
  if (spec.contains("speed_kmh")) {
    double v = 0.0;
    try {
      v = spec.at("speed_kmh").get<double>() * kKmhToMs;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Format, std::string("road: ") + e.what());
    }
    if (!(v > 0.0)) throw Error(ErrorKind::Parameter, "road: speed_kmh must be > 0");
    std::fill(r.Vx.begin(), r.Vx.end(), v);
  }
  return r;
}

int clamp_to_band(const VehicleParams& params, RoadProfile& road) {
  int moved = 0;
  for (double& v : road.Vx) {
    const double c = std::clamp(v, params.v_min(), params.v_max());
    if (c != v) {
      v = c;
      ++moved;
    }
  }
  return moved;
}

}  // namespace lkcert
