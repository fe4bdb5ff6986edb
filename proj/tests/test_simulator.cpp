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
#include <gtest/gtest.h>

#include <cmath>

#include "lkcert/errors.hpp"
#include "lkcert/simulator.hpp"
#include "test_util.hpp"

namespace lkcert {
namespace {

using Eigen::Vector2d;
using Eigen::Vector4d;

ReachCertificate shipped_reach() {
  const LoadedCertificate l = certificate_from_json(io::read_file(testing::data_path("fixture/reach_certificate.json")));
  return *l.reach;
}

std::string shipped_config_hash() {
  return certificate_from_json(io::read_file(testing::data_path("fixture/reach_certificate.json"))).config_hash;
}

Scenario straight_scenario(const VehicleParams& p, int steps, const Vector4d& x0) {
  Scenario s;
  s.name = "straight";
  s.road = road_straight(p, steps);
  s.x0 = x0;
  return s;
}

TEST(Simulator, PhiFromRoad) {
  VehicleParams p;
  p.L = 5.0;
  const Vector2d phi = phi_from_road(10.0, 0.02, p);
  EXPECT_DOUBLE_EQ(phi(0), 0.2);
  EXPECT_DOUBLE_EQ(phi(1), 0.1);
  EXPECT_EQ(phi_from_road(10.0, -0.02, p), -phi);
}

TEST(Simulator, EquilibriumStaysAtZero) {
  const VehicleParams p;
  const Trajectory t = simulate(straight_scenario(p, 100, Vector4d::Zero()), testing::shipped_rnn(), p);
  ASSERT_EQ(t.steps.size(), 100u);
  for (const auto& r : t.steps) {
    ASSERT_TRUE(r.x.isZero());
    ASSERT_TRUE(r.xi.isZero());
    ASSERT_EQ(r.u, 0.0);
  }
}

TEST(Simulator, OpenLoopMatchesMatrixPower) {
  const VehicleParams p;
  const Vector4d x0(0.5, 0.1, -0.02, 0.01);
  const Scenario s = straight_scenario(p, 40, x0);
  const Trajectory t = simulate(s, RnnController::zeros(3, 3), p);
  const Eigen::Matrix4d A = build_nominal_plant(p, s.road.Vx[0]).A;
  Eigen::Matrix4d Ak = Eigen::Matrix4d::Identity();
  for (const auto& r : t.steps) {
    ASSERT_LE((r.x - Ak * x0).norm(), 1e-12 * (1.0 + x0.norm()));
    Ak = A * Ak;
  }
}

TEST(Simulator, AugmentedPathAgrees) {
  const VehicleParams p;
  const RnnController rnn = testing::shipped_rnn();
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const Scenario s = containment_scenario(p, Vector2d(0.01, 0.01), 200, 11, trial);
    const Trajectory a = simulate(s, rnn, p);
    const Trajectory b = simulate_augmented(s, rnn, p);
    ASSERT_EQ(a.steps.size(), b.steps.size());
    double scale = 1.0;
    for (const auto& r : a.steps) scale = std::max(scale, r.x.cwiseAbs().maxCoeff());
    for (std::size_t k = 0; k < a.steps.size(); ++k) {
      ASSERT_LE((a.steps[k].x - b.steps[k].x).cwiseAbs().maxCoeff(), 1e-10 * scale) << "step " << k;
      ASSERT_LE((a.steps[k].xi - b.steps[k].xi).cwiseAbs().maxCoeff(), 1e-10 * scale);
      ASSERT_EQ(a.steps[k].d, b.steps[k].d);
    }
  }
}

TEST(Simulator, AugmentedRejectsOutOfBandSpeed) {
  const VehicleParams p;
  Scenario s = straight_scenario(p, 10, Vector4d::Zero());
  s.road.Vx[3] = p.V_nom + 2.0 * p.dV_max;
  try {
    simulate_augmented(s, testing::shipped_rnn(), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Bound);
  }
  EXPECT_EQ(certify_consistent(p, s), 1);
  EXPECT_DOUBLE_EQ(s.road.Vx[3], p.V_nom + p.dV_max);
  EXPECT_NO_THROW(simulate_augmented(s, testing::shipped_rnn(), p));
}

TEST(Simulator, Deterministic) {
  const VehicleParams p;
  const Scenario s = containment_scenario(p, Vector2d(0.01, 0.01), 150, 3, 7);
  const io::CsvTable a = trajectory_to_csv(simulate(s, testing::shipped_rnn(), p));
  const io::CsvTable b = trajectory_to_csv(simulate(s, testing::shipped_rnn(), p));
  EXPECT_EQ(io::csv_to_string(a), io::csv_to_string(b));
}

TEST(Simulator, WorstCaseCornerPushesOutward) {
  const VehicleParams p;
  Scenario s = straight_scenario(p, 50, Vector4d(0.2, 0, 0, 0));
  s.policy = DisturbancePolicy::WorstCaseCorner;
  s.d_max = Vector2d(0.01, 0.02);
  const Trajectory t = simulate(s, testing::shipped_rnn(), p);
  for (const auto& r : t.steps) {
    const double sgn = r.x(0) < 0.0 ? -1.0 : 1.0;
    ASSERT_EQ(r.d, sgn * s.d_max);
  }
}

TEST(Simulator, DivergenceIsReported) {
  const VehicleParams p;
  RnnController r = RnnController::zeros(1, 1);
  r.D12 << 50.0, 50.0;  // large positive feedback
  try {
    simulate(straight_scenario(p, 500, Vector4d(0.1, 0, 0, 0)), r, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Divergence);
  }
}

TEST(Simulator, CsvRoundTrip) {
  const VehicleParams p;
  const Scenario s = containment_scenario(p, Vector2d(0.01, 0.01), 30, 4, 0);
  const Trajectory t = simulate(s, testing::shipped_rnn(), p);
  const Trajectory u = trajectory_from_csv(io::csv_from_string(io::csv_to_string(trajectory_to_csv(t))));
  EXPECT_EQ(u.scenario_hash, t.scenario_hash);
  EXPECT_EQ(u.controller_hash, t.controller_hash);
  ASSERT_EQ(u.steps.size(), t.steps.size());
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    ASSERT_EQ(u.steps[k].x, t.steps[k].x);
    ASSERT_EQ(u.steps[k].xi, t.steps[k].xi);
    ASSERT_EQ(u.steps[k].u, t.steps[k].u);
    ASSERT_EQ(u.steps[k].phi, t.steps[k].phi);
    ASSERT_EQ(u.steps[k].d, t.steps[k].d);
  }
}

TEST(Simulator, ScenarioJsonErrors) {
  const VehicleParams p;
  EXPECT_THROW(scenario_from_json(p, "{"), Error);
  EXPECT_THROW(scenario_from_json(p, R"({"road": {"kind": "straight"}})"), Error);
  EXPECT_THROW(scenario_from_json(p, R"({"duration": 1, "road": {"kind": "straight"}, "policy": "x"})"), Error);
  const Scenario s = scenario_from_json(p, R"({"duration": 2, "road": {"kind": "straight"}})");
  EXPECT_EQ(s.steps(), static_cast<int>(std::lround(2.0 / p.T)));
}

TEST(Simulator, ShippedScenariosLoad) {
  const VehicleParams p;
  for (const char* n : {"s_curve", "constant_radius", "clothoid", "straight_offset", "out_of_band"}) {
    const Scenario s =
        scenario_from_json(p, io::read_file(testing::data_path(std::string("scenarios/") + n + ".json")));
    EXPECT_GT(s.steps(), 0) << n;
  }
}

TEST(Containment, ZeroDisturbanceBoundHolds) {
  const VehicleParams p;
  const ReachCertificate c = shipped_reach();
  const std::string h = shipped_config_hash();
  const ContainmentReport r =
      monte_carlo_containment(p, testing::shipped_rnn(), c, Vector2d::Zero(), 20, 200, 9, h, h);
  EXPECT_EQ(r.runs, 20);
  EXPECT_EQ(r.steps, 20 * 200);
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(r.dominance_failures, 0);
  EXPECT_GT(r.min_margin, 0.0);
}

TEST(Containment, ShrunkCertificateIsCaught) {
  const VehicleParams p;
  ReachCertificate c = shipped_reach();
  c.stab.P *= 1e-4;  // bound shrinks 100x while P_eyL is left alone
  const std::string h = shipped_config_hash();
  const ContainmentReport r =
      monte_carlo_containment(p, testing::shipped_rnn(), c, Vector2d(0.01, 0.01), 20, 300, 9, h, h);
  EXPECT_GT(r.violations, 0);
  EXPECT_LT(r.min_margin, 0.0);
}

TEST(Containment, StaleHashThrows) {
  const VehicleParams p;
  try {
    monte_carlo_containment(p, testing::shipped_rnn(), shipped_reach(), Vector2d::Zero(), 1, 10, 1, "a", "b");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StaleCertificate);
  }
}

TEST(Containment, IndependentOfRunOrder) {
  const VehicleParams p;
  const Scenario a = containment_scenario(p, Vector2d(0.01, 0.01), 100, 5, 3);
  containment_scenario(p, Vector2d(0.01, 0.01), 100, 5, 2);
  const Scenario b = containment_scenario(p, Vector2d(0.01, 0.01), 100, 5, 3);
  EXPECT_EQ(scenario_hash(a), scenario_hash(b));
  EXPECT_NE(scenario_hash(a), scenario_hash(containment_scenario(p, Vector2d(0.01, 0.01), 100, 5, 4)));
  for (double v : a.road.Vx) {
    EXPECT_LE(std::abs(v - p.V_nom), p.dV_max + 1e-12);
  }
}

}  // namespace
}  // namespace lkcert
