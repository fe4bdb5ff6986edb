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
#include "lkcert/vehicle_model.hpp"

#include <cmath>
#include <sstream>

#include "lkcert/errors.hpp"

namespace lkcert {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::Parameter, std::string("invalid vehicle parameter: ") + what);
}

}  // namespace

void VehicleParams::validate() const {
  require(std::isfinite(T) && T > 0.0, "T must be > 0");
  require(std::isfinite(L) && L > 0.0, "L must be > 0");
  require(std::isfinite(eps) && eps >= 0.0 && eps <= 1.0, "eps must lie in [0, 1]");
  require(std::isfinite(tau_psi) && tau_psi > 0.0, "tau_psi must be > 0");
  require(std::isfinite(l_f) && l_f > 0.0, "l_f must be > 0");
  require(std::isfinite(l_r) && l_r > 0.0, "l_r must be > 0");
  require(std::isfinite(V_nom) && V_nom > 0.0, "V_nom must be > 0");
  require(std::isfinite(dV_max) && dV_max >= 0.0, "dV_max must be >= 0");
}

PlantLTI build_nominal_plant(const VehicleParams& p, double Vx) {
  p.validate();
  if (!(std::isfinite(Vx) && Vx > 0.0)) {
    throw Error(ErrorKind::Parameter, "speed must be > 0");
  }
  const double l = p.wheelbase();
  PlantLTI g;
  g.A << 1.0, p.T, 0.0, -p.T * p.L,
         0.0, 1.0 - p.eps, p.eps * Vx, 0.0,
         0.0, 0.0, 1.0, -p.T,
         0.0, 0.0, 0.0, 1.0 - p.T / p.tau_psi;
  g.B1 << 0.0, -p.eps * p.l_r / l * Vx, 0.0, p.T * Vx / (l * p.tau_psi);
  g.B2 << p.T * p.L, p.T * Vx,
          0.0, 0.0,
          p.T, 0.0,
          0.0, 0.0;
  g.C << 1.0, 0.0, 0.0, 0.0,
         0.0, 0.0, 1.0, 0.0;
  return g;
}

UncertaintyLFT build_uncertainty_lft(const VehicleParams& p) {
  p.validate();
  const double l = p.wheelbase();
  const double dv = p.dV_max;
  UncertaintyLFT f;
  f.B3 << 1.0, 0.0, 0.0,
          0.0, 1.0, 0.0,
          0.0, 0.0, 0.0,
          0.0, 0.0, 1.0;
  f.C1.setZero();
  f.C1(1, 2) = p.eps * dv;
  f.D11 << 0.0, -p.eps * p.l_r / l * dv, p.T / (l * p.tau_psi) * dv;
  f.D12.setZero();
  f.D12(0, 1) = p.T * dv;
  return f;
}

UncertainPlant build_uncertain_plant(const VehicleParams& p) {
  UncertainPlant up;
  up.plant = build_nominal_plant(p, p.V_nom);
  up.lft = build_uncertainty_lft(p);
  up.B4 = up.plant.B2;
  up.D14 = up.lft.D12;
  return up;
}

DeltaMatrices delta_matrices(const VehicleParams& p, double dVx) {
  p.validate();
  if (!(std::abs(dVx) <= p.dV_max)) {
    std::ostringstream os;
    os << "speed offset " << dVx << " exceeds bound " << p.dV_max;
    throw Error(ErrorKind::Bound, os.str());
  }
  const double l = p.wheelbase();
  DeltaMatrices dm;
  dm.dA.setZero();
  dm.dA(1, 2) = p.eps * dVx;
  dm.dB1 << 0.0, -p.eps * p.l_r / l * dVx, 0.0, p.T / (l * p.tau_psi) * dVx;
  dm.dB2.setZero();
  dm.dB2(0, 1) = p.T * dVx;
  return dm;
}

PlantStep plant_step(const UncertainPlant& up, const Vec4& x, double u, const Vec2& phi,
                     const Vec3& w, const Vec2& d) {
  PlantStep s;
  s.x_next = up.plant.A * x + up.plant.B1 * u + up.plant.B2 * phi + up.lft.B3 * w + up.B4 * d;
  s.v = up.lft.C1 * x + up.lft.D11 * u + up.lft.D12 * phi + up.D14 * d;
  s.y = up.plant.C * x;
  return s;
}

}  // namespace lkcert
