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
#ifndef LKCERT_DATAGEN_HPP
#define LKCERT_DATAGEN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lkcert/io.hpp"
#include "lkcert/road.hpp"
#include "lkcert/vehicle_model.hpp"

namespace lkcert {

// Unconstrained preview LTV-LQR; stands in for a constrained MPC expert.
struct ExpertConfig {
  Eigen::Vector4d Q_diag = Eigen::Vector4d::Ones();
  double R = 1.0;
  int N = 50;

  void validate() const;
};

// Horizon data for one solve: x_{j+1} = A_j x_j + B_j u_j + E_j phi_j, j < N.
struct PreviewHorizon {
  std::vector<Mat4> A;
  std::vector<Mat41> B;
  std::vector<Mat42> E;
  std::vector<Vec2> phi;

  int length() const { return static_cast<int>(A.size()); }
};

// u_j = -K_j x_j - ff_j minimizes sum_{j<N} R u_j^2 + sum_{1<=j<=N} x_j' Q x_j.
struct PreviewSolution {
  std::vector<Eigen::RowVector4d> K;
  std::vector<double> ff;
  std::vector<double> u;  // open-loop optimal sequence from x0
};

PreviewSolution preview_lqr(const PreviewHorizon& h, const Eigen::Matrix4d& Q, double R, const Vec4& x0);
double preview_cost(const PreviewHorizon& h, const Eigen::Matrix4d& Q, double R, const Vec4& x0,
                    const std::vector<double>& u);

// Receding-horizon window starting at step k; speeds and curvature past the
// end of the road repeat the last sample.
PreviewHorizon preview_window(const VehicleParams& params, const RoadProfile& road, int k, int N);

struct Episode {
  std::vector<Vec2> y;
  std::vector<Vec2> phi;
  std::vector<double> u;
  std::vector<Vec4> x;  // expert state, kept for imitation statistics

  int length() const { return static_cast<int>(u.size()); }
};

struct Dataset {
  std::vector<Episode> episodes;
};

struct DatagenConfig {
  int episodes = 20;
  int steps = 150;
  Eigen::Vector4d x0_scale = Eigen::Vector4d(1.0, 0.1, 0.05, 0.02);
  std::uint64_t seed = 0;
};

// Closed-loop expert rollout on the true time-varying plant.
// Throws ErrorKind::Divergence if the state leaves |x| < 1e3.
Episode expert_rollout(const VehicleParams& params, const ExpertConfig& expert, const RoadProfile& road,
                       const Vec4& x0);

// Episode i draws its road and x0 from run_seed(seed, i). Divergent expert
// rollouts are skipped with a diagnostic in `rejected`.
Dataset generate_dataset(const VehicleParams& params, const ExpertConfig& expert, const DatagenConfig& cfg,
                         std::vector<std::string>* rejected = nullptr);

// Columns: episode, k, y1, y2, phi1, phi2, u.
io::CsvTable dataset_to_csv(const Dataset& d);
Dataset dataset_from_csv(const io::CsvTable& t);

double rms_eyL(const std::vector<Vec4>& x);

}  // namespace lkcert

#endif  // LKCERT_DATAGEN_HPP
