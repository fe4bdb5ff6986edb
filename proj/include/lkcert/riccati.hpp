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
#ifndef LKCERT_RICCATI_HPP
#define LKCERT_RICCATI_HPP

#include <Eigen/Dense>

namespace lkcert {

// Stabilizing solution X of X = A'XA - A'XB (R + B'XB)^{-1} B'XA + Q by the
// structure-preserving doubling iteration. Throws ErrorKind::Parameter if R
// is not positive definite and ErrorKind::Divergence if it does not converge.
Eigen::MatrixXd solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

// K with u = -K x.
Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

// Steady-state filter gain M for xhat_{k|k} = xhat_{k|k-1} + M (y - C xhat_{k|k-1})
// with process covariance Qn and measurement covariance Rn.
Eigen::MatrixXd kalman_filter_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                                   const Eigen::MatrixXd& Qn, const Eigen::MatrixXd& Rn);

}  // namespace lkcert

#endif  // LKCERT_RICCATI_HPP
