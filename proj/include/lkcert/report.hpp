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
#ifndef LKCERT_REPORT_HPP
#define LKCERT_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lkcert/datagen.hpp"
#include "lkcert/simulator.hpp"

namespace lkcert {

struct ImitationRun {
  RoadProfile road;
  Vec4 x0 = Vec4::Zero();
  Episode expert;
  Trajectory rnn;
  double rms_expert = 0.0;
  double rms_rnn = 0.0;
};

struct ImitationSummary {
  std::vector<ImitationRun> runs;
  double rms_expert = 0.0;  // pooled over every step of every run
  double rms_rnn = 0.0;
  double ratio() const { return rms_rnn / rms_expert; }
};

// Expert and RNN on the same road and x0, no disturbance. Roads and x0 are
// drawn like generate_dataset draws them, from run_seed(seed, i); pass a seed
// different from the dataset seed to get held-out scenarios.
ImitationSummary compare_imitation(const VehicleParams& params, const ExpertConfig& expert, const RnnController& rnn,
                                   const DatagenConfig& draw, int scenarios, std::uint64_t seed);

// Columns: k, t, Vx_kmh, kappa, eyL_expert, eyL_rnn, u_expert, u_rnn.
io::CsvTable imitation_to_csv(const ImitationRun& run, const VehicleParams& params);
// Columns: k, t, Vx_kmh, kappa, eyL, bound, sigma, sigma_bar, V.
io::CsvTable containment_to_csv(const Trajectory& t, const std::vector<MonitorRow>& rows,
                                const VehicleParams& params);

}  // namespace lkcert

#endif  // LKCERT_REPORT_HPP
