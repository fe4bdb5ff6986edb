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
#ifndef LKCERT_RNN_CONTROLLER_HPP
#define LKCERT_RNN_CONTROLLER_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>

namespace lkcert {

enum class Activation { Tanh, Relu, Custom };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Global sector [alpha, beta] per neuron. Custom activations have no
// built-in sector and throw ErrorKind::Parameter.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sector_bounds(Activation a, int n_phi);

// LTI core P_pi in feedback with a static activation:
//   p = C2 xi + D22 y,  q = Phi(p),
//   u = C1 xi + D11 q + D12 y,  xi+ = A xi + B1 q + B2 y.
// p does not depend on q, so the interconnection is always well posed.
struct RnnController {
  Eigen::MatrixXd A, B1, B2, C1, D11, D12, C2, D22;
  Activation activation = Activation::Tanh;
  Eigen::VectorXd alpha, beta;
  std::function<double(double)> custom;  // only for Activation::Custom

  static RnnController zeros(int n_xi, int n_phi, Activation act = Activation::Tanh);

  int n_xi() const { return static_cast<int>(A.rows()); }
  int n_phi() const { return static_cast<int>(C2.rows()); }

  void validate() const;
  double phi(double p) const;
  double phi_prime(double p) const;
  Eigen::VectorXd activate(const Eigen::VectorXd& p) const;
};

// Loop-transformed controller with the activation shifted to sector [-1, 1].
struct TransformedRnn {
  Eigen::MatrixXd At, B1t, B2t, C1t, D11t, D12t, C2, D22;
  Eigen::VectorXd K1, K2;  // diagonals
  RnnController base;

  int n_xi() const { return static_cast<int>(At.rows()); }
  int n_phi() const { return static_cast<int>(C2.rows()); }
};

TransformedRnn loop_transform(const RnnController& rnn);

// q = K2^{-1} (Phi(p) - K1 p), elementwise inside [-|p|, |p|].
Eigen::VectorXd transformed_activation(const TransformedRnn& t, const Eigen::VectorXd& p);

struct RnnStep {
  Eigen::VectorXd xi_next;
  double u = 0.0;
  Eigen::VectorXd p, q;
};

RnnStep rnn_step(const RnnController& rnn, const Eigen::VectorXd& xi, const Eigen::Vector2d& y);
RnnStep rnn_step(const TransformedRnn& t, const Eigen::VectorXd& xi, const Eigen::Vector2d& y);

void save_weights(const RnnController& rnn, const std::string& path);
RnnController load_weights(const std::string& path);
std::string weights_to_json(const RnnController& rnn);
RnnController weights_from_json(const std::string& text);

}  // namespace lkcert

#endif  // LKCERT_RNN_CONTROLLER_HPP
