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
#ifndef LKCERT_ROAD_HPP
#define LKCERT_ROAD_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "lkcert/vehicle_model.hpp"

namespace lkcert {

// Synthetic per-step road: curvature [1/m] and longitudinal speed [m/s].
// None of these shapes are measured data.
struct RoadProfile {
  std::vector<double> kappa;
  std::vector<double> Vx;

  int steps() const { return static_cast<int>(kappa.size()); }
};

// Speed tied to curvature: V_nom + 0.95 dV_max on straight sections, falling
// linearly to V_nom - 0.95 dV_max at |kappa| = kappa_ref.
double speed_for_curvature(const VehicleParams& params, double kappa, double kappa_ref = 1e-3);

RoadProfile road_straight(const VehicleParams& params, int steps);
// Straight lead-in of lead steps, then constant curvature.
RoadProfile road_constant_radius(const VehicleParams& params, int steps, double kappa, int lead);
// Full-period sine in curvature with the given period in steps.
RoadProfile road_s_curve(const VehicleParams& params, int steps, double kappa_max, int period);
// Linear curvature ramp (clothoid), hold, then ramp back down.
RoadProfile road_clothoid_ramp(const VehicleParams& params, int steps, double kappa_max, int ramp);
// Training family: sum of three random sinusoids, |kappa| < 1e-3.
RoadProfile road_random_training(const VehicleParams& params, int steps, std::mt19937_64& rng);
// Held-out family for containment runs: one of the four shaped profiles
// with random parameters plus an independent random speed walk in the band.
RoadProfile road_random_shaped(const VehicleParams& params, int steps, std::mt19937_64& rng);

// {"kind": "straight" | "constant_radius" | "s_curve" | "clothoid_ramp" |
//  "random_training" | "random_shaped", ...shape parameters, "seed"}.
// An optional "speed_kmh" replaces the curvature-tied speed with a constant,
// which may lie outside the certified band.
RoadProfile road_from_json(const VehicleParams& params, int steps, const nlohmann::json& spec);

// Clamp speeds into [v_min, v_max]. Returns the number of samples moved.
int clamp_to_band(const VehicleParams& params, RoadProfile& road);

}  // namespace lkcert

#endif  // LKCERT_ROAD_HPP
