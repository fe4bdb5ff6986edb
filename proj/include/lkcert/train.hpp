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
#ifndef LKCERT_TRAIN_HPP
#define LKCERT_TRAIN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lkcert/datagen.hpp"
#include "lkcert/rnn_controller.hpp"
#include "lkcert/vehicle_model.hpp"

namespace lkcert {

struct TrainConfig {
  double lr = 1e-4;        // Adam step size; 0 leaves the weights unchanged
  int epochs = 60;
  int batch_size = 20;     // episodes per update
  int truncation = 150;    // BPTT window in steps
  std::uint64_t seed = 0;
  double init_scale = 1e-3;
  std::string init = "observer";  // "observer" or "random"
  double observer_qn = 100.0;
  double observer_rn = 0.01;

  void validate() const;
};

struct RnnArch {
  int n_xi = 8;
  int n_phi = 8;
  Activation activation = Activation::Tanh;
};

// Gradient of the loss with respect to every weight matrix of the core.
struct Gradients {
  Eigen::MatrixXd A, B1, B2, C1, D11, D12, C2, D22;

  static Gradients zeros_like(const RnnController& rnn);
  double max_abs() const;
  bool all_finite() const;
};

// Teacher-forced mean squared error over every step of every episode,
// sum (u_rnn - u_expert)^2 / total_steps, with the hidden state carried from
// step to step. Gradients flow back through at most `truncation` steps:
// episodes are cut into windows and the state entering a window is treated as
// a constant. truncation >= episode length gives the exact gradient.
double bptt_gradients(const RnnController& rnn, const std::vector<const Episode*>& batch, int truncation,
                      Gradients& grad);
double dataset_loss(const RnnController& rnn, const Dataset& data);

// Model-based warm start: current-estimator Kalman filter plus the expert's
// infinite-horizon LQR gain at V_nom, written into the first four hidden
// states; then every entry gets init_scale * N(0, 1) noise.
// "random" uses only the noise term.
RnnController initial_controller(const VehicleParams& params, const ExpertConfig& expert, const RnnArch& arch,
                                 const TrainConfig& cfg);

struct LossPoint {
  int epoch = 0;
  double loss = 0.0;
  double best = 0.0;
};

struct TrainResult {
  RnnController rnn;
  std::vector<LossPoint> curve;  // entry e is the loss before update e; the last is after training
  bool aborted = false;          // non-finite loss; rnn holds the last finite weights
  std::string message;
};

TrainResult train(const RnnController& init, const Dataset& data, const TrainConfig& cfg);

io::CsvTable loss_curve_to_csv(const std::vector<LossPoint>& curve);

struct CertifiedTraining {
  TrainResult result;
  std::uint64_t seed = 0;  // seed that produced the accepted controller
  int attempts = 0;
  bool certified = false;
};

// Trains with seeds cfg.seed, cfg.seed + 1, ... until `accept` returns true
// or max_attempts is reached. Stability is checked after training; the
// training objective itself is unconstrained.
CertifiedTraining train_until_accepted(const VehicleParams& params, const ExpertConfig& expert,
                                       const RnnArch& arch, const Dataset& data, const TrainConfig& cfg,
                                       int max_attempts,
                                       const std::function<bool(const RnnController&)>& accept);

}  // namespace lkcert

#endif  // LKCERT_TRAIN_HPP
