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
#ifndef LKCERT_REACH_MONITOR_HPP
#define LKCERT_REACH_MONITOR_HPP

#include <Eigen/Dense>
#include <optional>

#include "lkcert/certify.hpp"

namespace lkcert {

// Online ellipsoid-size recursion for zeta' P zeta <= sigma.
//   sigma_bar uses |d_max|^2 and is the deployable bound.
//   sigma uses the realized disturbance and exists only for testing; it is
//   not available on a vehicle because d is unmeasured.
struct MonitorState {
  double sigma = 0.0;
  double sigma_bar = 0.0;
  int k = 0;
  double rho = 0.0;
  double mu_d = 0.0;
  double mu_phi = 0.0;
  double P_eyL = 0.0;
  Eigen::Vector2d d_max = Eigen::Vector2d::Zero();
};

// sigma = sigma_bar = zeta0' P zeta0. Throws ErrorKind::Shape on a size mismatch.
MonitorState monitor_init(const ReachCertificate& cert, const Eigen::VectorXd& zeta0,
                          const Eigen::Vector2d& d_max);

// At deployment zeta0 is the measured plant state with the RNN state at rest.
Eigen::VectorXd zeta_at_rest(const Eigen::Vector4d& x0, int n_xi);

MonitorState monitor_step(const MonitorState& ms, const Eigen::Vector2d& phi,
                          const std::optional<Eigen::Vector2d>& d = std::nullopt);

// sqrt(sigma_bar / P_eyL).
double eyL_bound(const MonitorState& ms);

// Experimental: Schur complement of P for state index i (i = 0 gives P_eyL).
// The same argument bounds |zeta_i| by sqrt(sigma_bar / metric).
double state_metric(const Eigen::MatrixXd& P, int i);

}  // namespace lkcert

#endif  // LKCERT_REACH_MONITOR_HPP
