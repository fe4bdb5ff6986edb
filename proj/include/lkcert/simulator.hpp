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
#ifndef LKCERT_SIMULATOR_HPP
#define LKCERT_SIMULATOR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lkcert/certify.hpp"
#include "lkcert/io.hpp"
#include "lkcert/reach_monitor.hpp"
#include "lkcert/rnn_controller.hpp"
#include "lkcert/road.hpp"
#include "lkcert/vehicle_model.hpp"

namespace lkcert {

enum class DisturbancePolicy { None, BoundedRandom, WorstCaseCorner };

std::string policy_name(DisturbancePolicy p);
DisturbancePolicy policy_from_name(const std::string& name);

struct Scenario {
  std::string name;
  RoadProfile road;
  DisturbancePolicy policy = DisturbancePolicy::None;
  std::uint64_t seed = 0;
  Eigen::Vector2d d_max = Eigen::Vector2d::Zero();
  Eigen::Vector4d x0 = Eigen::Vector4d::Zero();

  int steps() const { return road.steps(); }
  double duration(const VehicleParams& p) const { return steps() * p.T; }
};

// {"name", "duration" [s], "road": {...}, "policy", "seed", "d_max", "x0"}.
// Speeds outside the band are kept as given; see certify_consistent.
Scenario scenario_from_json(const VehicleParams& params, const std::string& text);
std::string scenario_hash(const Scenario& s);

// Clamps the speed profile into the certified band. Returns the number of
// clamped samples so the caller can warn.
int certify_consistent(const VehicleParams& params, Scenario& s);

// phi = (Vx kappa, kappa L): desired yaw rate and the heading change over the
// look-ahead arc at constant curvature.
Eigen::Vector2d phi_from_road(double Vx, double kappa, const VehicleParams& params);

struct StepRecord {
  int k = 0;
  double Vx = 0.0, kappa = 0.0;
  Eigen::Vector4d x;
  Eigen::VectorXd xi;
  double u = 0.0;
  Eigen::Vector2d phi, d, y;
  double e_yL() const { return x(0); }
};

struct Trajectory {
  std::vector<StepRecord> steps;  // state before the step and the inputs applied
  std::string scenario_hash;
  std::string controller_hash;
};

// Steps build_nominal_plant(params, Vx(k)) with the RNN in feedback; the
// disturbance is added to phi. Throws ErrorKind::Divergence past 1e6.
Trajectory simulate(const Scenario& s, const RnnController& rnn, const VehicleParams& params);

// Same run through the augmented system with w = delta v, q = Phi~(p).
// Requires every speed inside the band (delta in [-1, 1]).
Trajectory simulate_augmented(const Scenario& s, const RnnController& rnn, const VehicleParams& params);

io::CsvTable trajectory_to_csv(const Trajectory& t);
// Inverse of trajectory_to_csv for the columns monitor needs.
Trajectory trajectory_from_csv(const io::CsvTable& t);

struct ContainmentReport {
  int runs = 0;
  long steps = 0;
  int violations = 0;           // runs with some |e_yL| > bound
  int dominance_failures = 0;   // steps where sigma_bar >= sigma >= V(zeta) fails
  double min_margin = 0.0;      // min over runs and steps of bound - |e_yL|
  double max_abs_eyL = 0.0;
  double max_bound = 0.0;
  int clamped_samples = 0;
};

// Per-run monitor replay of one trajectory; appended to the report.
struct MonitorRow {
  int k = 0;
  double sigma = 0.0, sigma_bar = 0.0, bound = 0.0, eyL = 0.0, V = 0.0;
};
std::vector<MonitorRow> replay_monitor(const Trajectory& t, const ReachCertificate& cert,
                                       const Eigen::Vector2d& d_max);

// Run `index` of the containment family: shaped held-out road, speeds
// clamped into the band, bounded-random disturbance, small random x0.
Scenario containment_scenario(const VehicleParams& params, const Eigen::Vector2d& d_max, int steps,
                              std::uint64_t seed, int index, int* clamped = nullptr);

// Runs N admissible realizations: shaped held-out roads, speeds inside the
// band, bounded-random disturbances, small random x0. Run i uses a generator
// seeded from (seed, i), so the result does not depend on scheduling.
// Throws ErrorKind::StaleCertificate if the hashes differ.
ContainmentReport monte_carlo_containment(const VehicleParams& params, const RnnController& rnn,
                                          const ReachCertificate& cert, const Eigen::Vector2d& d_max,
                                          int runs, int steps, std::uint64_t seed,
                                          const std::string& config_hash,
                                          const std::string& cert_config_hash);

std::uint64_t run_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace lkcert

#endif  // LKCERT_SIMULATOR_HPP
