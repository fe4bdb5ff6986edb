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
#ifndef LKCERT_CLOSED_LOOP_HPP
#define LKCERT_CLOSED_LOOP_HPP

#include <Eigen/Dense>
#include <string>

#include "lkcert/rnn_controller.hpp"
#include "lkcert/vehicle_model.hpp"

namespace lkcert {

struct AugmentedDims {
  int n_zeta = 0;  // 4 + n_xi
  int n_phi = 0;   // neurons
  int n_w = 3;
  int n_ext = 2;   // external input phi
  int n_d = 2;
};

// zeta = (x, xi).
//   zeta+ = A zeta + B1 phi + B2 q + B3 w + B4 d
//   r = C1 zeta + D12 q                     r = (p, q)
//   s = C2 zeta + D21 phi + D22 q + D23 w + D24 d    s = (v, w)
struct AugmentedSystem {
  Eigen::MatrixXd A, B1, B2, B3, B4;
  Eigen::MatrixXd C1, D12;
  Eigen::MatrixXd C2, D21, D22, D23, D24;
  AugmentedDims dims;
};

// Stacking selectors: r = D_rp p + D_rq q, s = D_sv v + D_sw w.
Eigen::MatrixXd selector_first(int n);   // [I; 0]
Eigen::MatrixXd selector_second(int n);  // [0; I]

AugmentedSystem assemble(const UncertainPlant& up, const TransformedRnn& t);

struct AugmentedStep {
  Eigen::VectorXd zeta_next, r, s;
};

AugmentedStep augmented_step(const AugmentedSystem& aug, const Eigen::VectorXd& zeta,
                             const Eigen::Vector2d& phi, const Eigen::VectorXd& q,
                             const Eigen::Vector3d& w, const Eigen::Vector2d& d);

// One step with q and w resolved from the state: q = transformed activation
// of p, w = delta * v with |delta| <= 1. Used by replay and consistency checks.
struct ConsistentStep {
  Eigen::VectorXd zeta_next, p, q;
  Eigen::Vector3d v, w;
  Eigen::VectorXd r, s;
};

ConsistentStep consistent_step(const AugmentedSystem& aug, const TransformedRnn& t,
                               const Eigen::VectorXd& zeta, const Eigen::Vector2d& phi,
                               const Eigen::Vector2d& d, double delta);

double spectral_radius(const Eigen::MatrixXd& M);

std::string dump_blocks(const AugmentedSystem& aug);

}  // namespace lkcert

#endif  // LKCERT_CLOSED_LOOP_HPP
