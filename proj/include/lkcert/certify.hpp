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
#ifndef LKCERT_CERTIFY_HPP
#define LKCERT_CERTIFY_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "lkcert/closed_loop.hpp"
#include "lkcert/sdp.hpp"

namespace lkcert {

struct CertifyOptions {
  double margin = 1e-6;       // on P and on the two QC couplings
  double main_margin = 0.0;   // on the decrease inequality
  // The reach SDP is solved with (mu, margin) multiplied by K and the result
  // divided back; every block except the Schur one is homogeneous, so this is
  // an exact change of variables. Candidates are tried in order.
  std::vector<double> reach_scales = {1e3, 1e2, 1e4, 1.0};
  sdp::Options sdp;
};

struct StabilityCertificate {
  double rho = 0.0;
  Eigen::MatrixXd P;
  Eigen::VectorXd Lambda;
  Eigen::MatrixXd M1, M2;
  double lambda2 = 0.0;
  double condP = 0.0;
};

struct ReachCertificate {
  StabilityCertificate stab;
  double mu_d = 1.0;
  double mu_phi = 1.0;
  double gamma = 0.0;
  double P_eyL = 0.0;
};

// Indices of the decision variables inside an sdp::Problem.
struct CertVariables {
  int n_zeta = 0;
  int n_phi = 0;
  std::vector<int> P;  // upper triangle, row-major
  std::vector<int> Lambda;
  std::vector<int> M1, M2;
  int lambda2 = -1;
  int gamma = -1;

  static int tri_index(int n, int i, int j);
};

struct CertProblem {
  sdp::Problem prob;
  CertVariables vars;
};

// Decrease inequality with phi = d = 0:
//   [I 0 0; A B2 B3; C1 D12 0; C2 D22 D23]' blkdiag(-rho^2 P, P, M1, M2) [..] <= 0
// plus M1 - blkdiag(Lambda, -Lambda) >= m I, M2 - lambda2 blkdiag(I, -I) >= m I,
// P >= m I, lambda2 >= m, Lambda >= 0.
CertProblem build_stability_lmi(const AugmentedSystem& aug, double rho,
                                const CertifyOptions& opts = {});

// Same variables plus gamma; the inequality gains the phi and d columns with
// -mu_d I and -mu_phi I, and [[P22, P21, 0], [P21', P11, 1], [0, 1, gamma]] >= 0.
// Objective: minimize gamma.
CertProblem build_reach_sdp(const AugmentedSystem& aug, double rho, double mu_d, double mu_phi,
                            const CertifyOptions& opts = {});

struct StabilityResult {
  sdp::Status status = sdp::Status::NumericalFailure;
  std::optional<StabilityCertificate> cert;
  sdp::Solution solution;
};

struct ReachResult {
  sdp::Status status = sdp::Status::NumericalFailure;
  std::optional<ReachCertificate> cert;
  sdp::Solution solution;
};

StabilityResult verify_stability(const AugmentedSystem& aug, double rho,
                                 const CertifyOptions& opts = {});
ReachResult compute_reach(const AugmentedSystem& aug, double rho, double mu_d, double mu_phi,
                          const CertifyOptions& opts = {});

// P11 - P21' P22^{-1} P21 for the first state. Throws ErrorKind::Certificate
// if P is not positive definite.
double extract_error_metric(const Eigen::MatrixXd& P);

// Smallest rho on the grid {step, 2 step, ..., 1} that certifies, assuming
// feasibility is monotone in rho. Empty if rho = 1 fails.
std::optional<double> min_certifiable_rho(const AugmentedSystem& aug, double step = 0.005,
                                          const CertifyOptions& opts = {});

struct MuGridResult {
  ReachResult best;
  std::vector<std::pair<double, double>> tried;  // (mu_d, mu_phi)
  std::vector<double> gammas;                    // NaN when not Optimal
};

// Log-spaced grid over [lo, hi]^2 for (mu_d, mu_phi); keeps the smallest gamma.
MuGridResult mu_grid_search(const AugmentedSystem& aug, double rho, double lo, double hi,
                            int points, const CertifyOptions& opts = {});

std::string certificate_to_json(const StabilityCertificate& c, const std::string& config_hash,
                                const std::string& weights_hash);
std::string certificate_to_json(const ReachCertificate& c, const std::string& config_hash,
                                const std::string& weights_hash);

struct LoadedCertificate {
  std::string kind;  // "stability" or "reach"
  StabilityCertificate stab;
  std::optional<ReachCertificate> reach;
  std::string config_hash;
  std::string weights_hash;
};

LoadedCertificate certificate_from_json(const std::string& text);

}  // namespace lkcert

#endif  // LKCERT_CERTIFY_HPP
