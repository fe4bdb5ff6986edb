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
#ifndef LKCERT_TESTS_TEST_UTIL_HPP
#define LKCERT_TESTS_TEST_UTIL_HPP

#include <Eigen/Dense>
#include <random>
#include <string>

#include "lkcert/certify.hpp"
#include "lkcert/closed_loop.hpp"
#include "lkcert/io.hpp"
#include "lkcert/rnn_controller.hpp"
#include "lkcert/vehicle_model.hpp"

namespace lkcert::testing {

inline std::string data_path(const std::string& rel) { return io::join_path(LKCERT_DATA_DIR, rel); }

// Hand-check parameter set used by the worked examples: T=0.02, L=10, eps=0.1.
inline VehicleParams worked_example_params() {
  VehicleParams p;
  p.T = 0.02;
  p.L = 10.0;
  p.eps = 0.1;
  p.tau_psi = 0.2;
  p.V_nom = 23.6;
  p.dV_max = 4.17;
  return p;
}

inline Eigen::MatrixXd randn(int r, int c, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::MatrixXd m(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) m(i, j) = n(rng);
  return m;
}

inline RnnController random_rnn(int n_xi, int n_phi, std::mt19937_64& rng, double scale = 0.3,
                                Activation act = Activation::Tanh) {
  RnnController r = RnnController::zeros(n_xi, n_phi, act);
  r.A = randn(n_xi, n_xi, rng, scale);
  r.B1 = randn(n_xi, n_phi, rng, scale);
  r.B2 = randn(n_xi, 2, rng, scale);
  r.C1 = randn(1, n_xi, rng, scale);
  r.D11 = randn(1, n_phi, rng, scale);
  r.D12 = randn(1, 2, rng, scale);
  r.C2 = randn(n_phi, n_xi, rng, scale);
  r.D22 = randn(n_phi, 2, rng, scale);
  return r;
}

inline RnnController shipped_rnn() { return load_weights(data_path("fixture/weights.json")); }

inline AugmentedSystem shipped_augmented(const VehicleParams& p = VehicleParams{}) {
  return assemble(build_uncertain_plant(p), loop_transform(shipped_rnn()));
}

}  // namespace lkcert::testing

#endif  // LKCERT_TESTS_TEST_UTIL_HPP
