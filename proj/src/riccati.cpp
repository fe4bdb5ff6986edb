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
#include "lkcert/riccati.hpp"

#include "lkcert/errors.hpp"

namespace lkcert {

using Eigen::MatrixXd;

MatrixXd solve_dare(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q, const MatrixXd& R) {
  const auto n = A.rows();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != B.cols() ||
      R.cols() != B.cols()) {
    throw Error(ErrorKind::Shape, "solve_dare: inconsistent dimensions");
  }
  Eigen::LLT<MatrixXd> rl(R);
  if (rl.info() != Eigen::Success) throw Error(ErrorKind::Parameter, "solve_dare: R must be positive definite");
  MatrixXd Ak = A;
  MatrixXd G = B * rl.solve(B.transpose());
  MatrixXd H = Q;
  const MatrixXd I = MatrixXd::Identity(n, n);
  for (int it = 0; it < 100; ++it) {
    const Eigen::PartialPivLU<MatrixXd> W(I + G * H);
    const MatrixXd WA = W.solve(Ak);
    const MatrixXd WG = W.solve(G);
    const MatrixXd Hn = H + Ak.transpose() * H * WA;
    G = G + Ak * WG * Ak.transpose();
    Ak = Ak * WA;
    const double change = (Hn - H).norm();
    H = 0.5 * (Hn + Hn.transpose());
    G = 0.5 * (G + G.transpose());
    if (!H.allFinite()) break;
    if (change <= 1e-14 * std::max(1.0, H.norm())) return H;
  }
  throw Error(ErrorKind::Divergence, "solve_dare: doubling iteration did not converge");
}

MatrixXd lqr_gain(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q, const MatrixXd& R) {
  const MatrixXd X = solve_dare(A, B, Q, R);
  return (R + B.transpose() * X * B).ldlt().solve(B.transpose() * X * A);
}

MatrixXd kalman_filter_gain(const MatrixXd& A, const MatrixXd& C, const MatrixXd& Qn, const MatrixXd& Rn) {
  // Prediction covariance from the dual control problem.
  const MatrixXd Pp = solve_dare(A.transpose(), C.transpose(), Qn, Rn);
  const MatrixXd S = C * Pp * C.transpose() + Rn;
  return S.ldlt().solve(C * Pp).transpose();
}

}  // namespace lkcert
