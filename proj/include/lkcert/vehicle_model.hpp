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
#ifndef LKCERT_VEHICLE_MODEL_HPP
#define LKCERT_VEHICLE_MODEL_HPP

#include <Eigen/Dense>

namespace lkcert {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Mat41 = Eigen::Matrix<double, 4, 1>;
using Mat42 = Eigen::Matrix<double, 4, 2>;
using Mat43 = Eigen::Matrix<double, 4, 3>;
using Mat24 = Eigen::Matrix<double, 2, 4>;
using Mat34 = Eigen::Matrix<double, 3, 4>;
using Mat31 = Eigen::Matrix<double, 3, 1>;
using Mat32 = Eigen::Matrix<double, 3, 2>;

inline constexpr double kKmhToMs = 1.0 / 3.6;

// Lateral kinematics parameters. Speeds in m/s.
struct VehicleParams {
  double T = 0.2;        // sample time [s]
  double L = 5.0;        // look-ahead distance [m]
  double eps = 0.2;      // relaxation factor, 0 <= eps <= 1
  double tau_psi = 0.2;  // yaw time constant [s]
  double l_f = 1.4;
  double l_r = 1.6;
  double V_nom = 85.0 * kKmhToMs;
  double dV_max = 15.0 * kKmhToMs;

  void validate() const;
  double wheelbase() const { return l_f + l_r; }
  double v_min() const { return V_nom - dV_max; }
  double v_max() const { return V_nom + dV_max; }
};

// State (e_yL, de_y, e_psi, psi_dot), input steering delta,
// external input phi = (psi_dot_des, e_psiL - e_psi), output (e_yL, e_psi).
struct PlantLTI {
  Mat4 A;
  Mat41 B1;
  Mat42 B2;
  Mat24 C;
};

// Speed-offset uncertainty as w = Delta * v with |Delta| <= 1.
struct UncertaintyLFT {
  static constexpr int n_w = 3;
  Mat43 B3;
  Mat34 C1;
  Mat31 D11;
  Mat32 D12;
};

// Nominal plant at V_nom plus uncertainty and disturbance channels.
// The disturbance enters exactly like phi, so B4 = plant.B2 and D14 = lft.D12.
struct UncertainPlant {
  PlantLTI plant;
  UncertaintyLFT lft;
  Mat42 B4;
  Mat32 D14;
};

struct DeltaMatrices {
  Mat4 dA;
  Mat41 dB1;
  Mat42 dB2;
};

struct PlantStep {
  Vec4 x_next;
  Vec3 v;
  Vec2 y;
};

PlantLTI build_nominal_plant(const VehicleParams& params, double Vx);
UncertaintyLFT build_uncertainty_lft(const VehicleParams& params);
UncertainPlant build_uncertain_plant(const VehicleParams& params);

// Perturbation of build_nominal_plant when the speed moves from V_nom to
// V_nom + dVx. Throws ErrorKind::Bound if |dVx| > dV_max.
DeltaMatrices delta_matrices(const VehicleParams& params, double dVx);

PlantStep plant_step(const UncertainPlant& up, const Vec4& x, double u,
                     const Vec2& phi, const Vec3& w, const Vec2& d);

}  // namespace lkcert

#endif  // LKCERT_VEHICLE_MODEL_HPP
