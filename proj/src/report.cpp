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
#include "lkcert/report.hpp"

#include <cmath>
#include <random>

#include "lkcert/errors.hpp"

namespace lkcert {

ImitationSummary compare_imitation(const VehicleParams& params, const ExpertConfig& expert, const RnnController& rnn,
                                   const DatagenConfig& draw, int scenarios, std::uint64_t seed) {
  if (scenarios < 1) throw Error(ErrorKind::Parameter, "compare_imitation: need at least one scenario");
  ImitationSummary s;
  double se = 0.0, sr = 0.0;
  long n = 0;
  for (int i = 0; i < scenarios; ++i) {
    ImitationRun run;
    std::mt19937_64 rng(run_seed(seed, static_cast<std::uint64_t>(i)));
    run.road = road_random_training(params, draw.steps, rng);
    clamp_to_band(params, run.road);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int j = 0; j < 4; ++j) run.x0(j) = draw.x0_scale(j) * u(rng);
    run.expert = expert_rollout(params, expert, run.road, run.x0);
    Scenario sc;
    sc.name = "imitation";
    sc.road = run.road;
    sc.x0 = run.x0;
    run.rnn = simulate(sc, rnn, params);
    std::vector<Vec4> xr;
    xr.reserve(run.rnn.steps.size());
    for (const auto& r : run.rnn.steps) xr.push_back(r.x);
    run.rms_expert = rms_eyL(run.expert.x);
    run.rms_rnn = rms_eyL(xr);
    const auto len = static_cast<double>(xr.size());
    se += run.rms_expert * run.rms_expert * len;
    sr += run.rms_rnn * run.rms_rnn * len;
    n += static_cast<long>(xr.size());
    s.runs.push_back(std::move(run));
  }
  s.rms_expert = std::sqrt(se / static_cast<double>(n));
  s.rms_rnn = std::sqrt(sr / static_cast<double>(n));
  return s;
}

io::CsvTable imitation_to_csv(const ImitationRun& run, const VehicleParams& params) {
  io::CsvTable t;
  t.header = {"k", "t", "Vx_kmh", "kappa", "eyL_expert", "eyL_rnn", "u_expert", "u_rnn"};
  const std::size_t n = std::min(run.expert.x.size(), run.rnn.steps.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& r = run.rnn.steps[k];
    t.rows.push_back({static_cast<double>(k), static_cast<double>(k) * params.T, r.Vx / kKmhToMs, r.kappa,
                      run.expert.x[k](0), r.x(0), run.expert.u[k], r.u});
  }
  return t;
}

io::CsvTable containment_to_csv(const Trajectory& t, const std::vector<MonitorRow>& rows,
                                const VehicleParams& params) {
  io::CsvTable c;
  c.header = {"k", "t", "Vx_kmh", "kappa", "eyL", "bound", "sigma", "sigma_bar", "V"};
  const std::size_t n = std::min(t.steps.size(), rows.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = t.steps[k];
    const auto& m = rows[k];
    c.rows.push_back({static_cast<double>(m.k), static_cast<double>(m.k) * params.T, s.Vx / kKmhToMs, s.kappa,
                      m.eyL, m.bound, m.sigma, m.sigma_bar, m.V});
  }
  return c;
}

}  // namespace lkcert
