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
#ifndef LKCERT_CONFIG_HPP
#define LKCERT_CONFIG_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lkcert/certify.hpp"
#include "lkcert/datagen.hpp"
#include "lkcert/train.hpp"
#include "lkcert/vehicle_model.hpp"

namespace lkcert {

struct CertifySection {
  double rho = 0.9;
  double margin = 1e-6;
  double main_margin = 0.0;
  double mu_d = 1.0;
  double mu_phi = 1.0;
  double mu_grid_lo = 1e-2;
  double mu_grid_hi = 1e2;
  int mu_grid_points = 5;
  Eigen::Vector2d d_max = Eigen::Vector2d(0.01, 0.01);

  CertifyOptions options() const;
};

struct SimulateSection {
  int runs = 1000;
  int steps = 300;
  std::uint64_t seed = 1;
};

struct RunConfig {
  VehicleParams vehicle;
  RnnArch rnn;
  CertifySection certify;
  ExpertConfig expert;
  DatagenConfig datagen;
  TrainConfig train;
  int train_attempts = 5;  // reseeds until the controller certifies
  SimulateSection simulate;
  std::vector<std::string> scenarios;  // resolved against the config directory
  std::string output_dir = "out";
  std::string base_dir;                // directory of the config file

  void validate() const;
  // Hash over the sections a certificate depends on: vehicle, rnn, certify.
  std::string hash() const;
  std::string resolve(const std::string& path) const;
};

// Vehicle speeds are given in km/h (V_nom_kmh, dV_max_kmh) and stored in m/s.
// Unknown keys are rejected. Throws ErrorKind::Config with the offending key or path.
RunConfig config_from_json(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& c);

}  // namespace lkcert

#endif  // LKCERT_CONFIG_HPP
