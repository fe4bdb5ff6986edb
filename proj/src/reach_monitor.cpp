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
#include "lkcert/reach_monitor.hpp"

#include <cmath>

#include "lkcert/errors.hpp"

namespace lkcert {

MonitorState monitor_init(const ReachCertificate& cert, const Eigen::VectorXd& zeta0,
                          const Eigen::Vector2d& d_max) {
  const auto& P = cert.stab.P;
  if (zeta0.size() != P.rows()) {
    throw Error(ErrorKind::Shape, "monitor_init: zeta0 has length " + std::to_string(zeta0.size()) +
                                      ", certificate expects " + std::to_string(P.rows()));
  }
  if (!(cert.P_eyL > 0.0)) throw Error(ErrorKind::Certificate, "monitor_init: P_eyL must be > 0");
  MonitorState ms;
  ms.sigma = zeta0.dot(P * zeta0);
  ms.sigma_bar = ms.sigma;
  ms.rho = cert.stab.rho;
  ms.mu_d = cert.mu_d;
  ms.mu_phi = cert.mu_phi;
  ms.P_eyL = cert.P_eyL;
  ms.d_max = d_max.cwiseAbs();
  return ms;
}

Eigen::VectorXd zeta_at_rest(const Eigen::Vector4d& x0, int n_xi) {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(4 + n_xi);
  z.head<4>() = x0;
  return z;
}

MonitorState monitor_step(const MonitorState& ms, const Eigen::Vector2d& phi,
                          const std::optional<Eigen::Vector2d>& d) {
  MonitorState n = ms;
  const double r2 = ms.rho * ms.rho;
  const double ext = ms.mu_phi * phi.squaredNorm();
  n.sigma_bar = r2 * ms.sigma_bar + ms.mu_d * ms.d_max.squaredNorm() + ext;
  const double dd = d ? d->squaredNorm() : ms.d_max.squaredNorm();
  n.sigma = r2 * ms.sigma + ms.mu_d * dd + ext;
  n.k = ms.k + 1;
  return n;
}

double eyL_bound(const MonitorState& ms) {
  return std::sqrt(std::max(ms.sigma_bar, 0.0) / ms.P_eyL);
}

double state_metric(const Eigen::MatrixXd& P, int i) {
  const auto n = static_cast<int>(P.rows());
  if (i < 0 || i >= n) throw Error(ErrorKind::Shape, "state_metric: index out of range");
  // Move state i to the front and reuse the first-state extraction.
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
  for (int j = 0; j < n; ++j) perm.indices()(j) = j;
  std::swap(perm.indices()(0), perm.indices()(i));
  const Eigen::MatrixXd Q = perm.transpose() * P * perm;
  return extract_error_metric(Q);
}

}  // namespace lkcert
