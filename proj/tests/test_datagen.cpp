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
#include <random>

#include "lkcert/config.hpp"
#include "lkcert/datagen.hpp"
#include "lkcert/errors.hpp"
#include "lkcert/riccati.hpp"
#include "test_util.hpp"

namespace lkcert {
namespace {

PreviewHorizon constant_horizon(const VehicleParams& p, int N, const Vec2& phi) {
  const PlantLTI G = build_nominal_plant(p, p.V_nom);
  PreviewHorizon h;
  for (int j = 0; j < N; ++j) {
    h.A.push_back(G.A);
    h.B.push_back(G.B1);
    h.E.push_back(G.B2);
    h.phi.push_back(phi);
  }
  return h;
}

TEST(Expert, ZeroStateZeroPreviewGivesZeroInput) {
  const VehicleParams p;
  const PreviewSolution s = preview_lqr(constant_horizon(p, 20, Vec2::Zero()), Mat4::Identity(), 1.0, Vec4::Zero());
  for (double u : s.u) EXPECT_EQ(u, 0.0);
}

TEST(Expert, OneStepClosedForm) {
  // N = 1: minimize R u^2 + x1' Q x1 with x1 = A x0 + B u + E phi.
  const VehicleParams p;
  const Vec2 phi(0.02, 0.005);
  const PreviewHorizon h = constant_horizon(p, 1, phi);
  const Vec4 x0(0.3, -0.1, 0.02, 0.01);
  const Mat4 Q = Eigen::Vector4d(1.0, 2.0, 3.0, 4.0).asDiagonal();
  const double R = 0.5;
  const Vec4 c = h.A[0] * x0 + h.E[0] * phi;
  const double bqb = (h.B[0].transpose() * Q * h.B[0])(0, 0);
  const double expected = -(h.B[0].transpose() * Q * c)(0, 0) / (R + bqb);
  const PreviewSolution s = preview_lqr(h, Q, R, x0);
  EXPECT_NEAR(s.u[0], expected, 1e-14 * (1.0 + std::abs(expected)));
}

TEST(Expert, LongHorizonApproachesRiccatiGain) {
  const VehicleParams p;
  const PreviewSolution s = preview_lqr(constant_horizon(p, 400, Vec2::Zero()), Mat4::Identity(), 1.0, Vec4::Zero());
  const PlantLTI G = build_nominal_plant(p, p.V_nom);
  const Eigen::MatrixXd K = lqr_gain(G.A, G.B1, Mat4::Identity(), Eigen::MatrixXd::Identity(1, 1));
  EXPECT_LE((s.K.front() - K).cwiseAbs().maxCoeff(), 1e-8 * (1.0 + K.cwiseAbs().maxCoeff()));
}

TEST(Expert, PerturbationsCostMore) {
  const VehicleParams p;
  std::mt19937_64 rng(12);
  const RoadProfile road = road_random_training(p, 80, rng);
  const PreviewHorizon h = preview_window(p, road, 10, 30);
  const Vec4 x0(0.4, 0.05, -0.01, 0.02);
  const Mat4 Q = Mat4::Identity();
  const PreviewSolution s = preview_lqr(h, Q, 1.0, x0);
  const double J = preview_cost(h, Q, 1.0, x0, s.u);
  std::normal_distribution<double> n(0.0, 1e-3);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v = s.u;
    for (double& e : v) e += n(rng);
    ASSERT_GT(preview_cost(h, Q, 1.0, x0, v), J);
  }
}

TEST(Expert, StraightRoadAtRest) {
  const VehicleParams p;
  const Episode ep = expert_rollout(p, ExpertConfig{}, road_straight(p, 50), Vec4::Zero());
  ASSERT_EQ(ep.length(), 50);
  for (double u : ep.u) EXPECT_EQ(u, 0.0);
}

TEST(Expert, InvalidWeights) {
  ExpertConfig e;
  e.R = 0.0;
  EXPECT_THROW(e.validate(), Error);
  e.R = 1.0;
  e.Q_diag(2) = -1.0;
  EXPECT_THROW(e.validate(), Error);
  e.Q_diag(2) = 1.0;
  e.N = 0;
  EXPECT_THROW(e.validate(), Error);
  EXPECT_THROW(preview_lqr(constant_horizon(VehicleParams{}, 3, Vec2::Zero()), Mat4::Identity(), -1.0, Vec4::Zero()),
               Error);
}

TEST(Expert, PreviewWindowRepeatsLastSample) {
  const VehicleParams p;
  RoadProfile road = road_constant_radius(p, 5, 5e-4, 2);
  const PreviewHorizon h = preview_window(p, road, 3, 6);
  ASSERT_EQ(h.length(), 6);
  for (int j = 2; j < 6; ++j) EXPECT_EQ(h.phi[static_cast<std::size_t>(j)], h.phi[1]);
}

TEST(Dataset, ReproducibleAndRoundTrips) {
  const VehicleParams p;
  DatagenConfig cfg;
  cfg.episodes = 3;
  cfg.steps = 40;
  cfg.seed = 5;
  const Dataset a = generate_dataset(p, ExpertConfig{}, cfg);
  const Dataset b = generate_dataset(p, ExpertConfig{}, cfg);
  const std::string sa = io::csv_to_string(dataset_to_csv(a));
  EXPECT_EQ(sa, io::csv_to_string(dataset_to_csv(b)));
  const Dataset c = dataset_from_csv(io::csv_from_string(sa));
  ASSERT_EQ(c.episodes.size(), 3u);
  EXPECT_EQ(io::csv_to_string(dataset_to_csv(c)), sa);
}

TEST(Dataset, ShippedFixtureRegenerates) {
  const RunConfig cfg = load_config(testing::data_path("default_config.json"));
  const Dataset d = generate_dataset(cfg.vehicle, cfg.expert, cfg.datagen);
  const io::CsvTable shipped = io::csv_from_string(io::read_file(testing::data_path("fixture/dataset.csv")));
  const io::CsvTable fresh = dataset_to_csv(d);
  EXPECT_EQ(fresh.header, shipped.header);
  EXPECT_EQ(fresh.rows, shipped.rows);
}

TEST(Dataset, MissingColumn) {
  io::CsvTable t;
  t.header = {"episode", "k", "y1", "y2", "phi1", "u"};
  try {
    dataset_from_csv(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Format);
    EXPECT_NE(std::string(e.what()).find("phi2"), std::string::npos);
  }
}

TEST(Dataset, ExpertKeepsTrainingRoadsClose) {
  const VehicleParams p;
  DatagenConfig cfg;
  cfg.episodes = 5;
  cfg.seed = 1;
  const Dataset d = generate_dataset(p, ExpertConfig{}, cfg);
  ASSERT_EQ(d.episodes.size(), 5u);
  for (const Episode& ep : d.episodes) EXPECT_LT(rms_eyL(ep.x), 0.5);
}

}  // namespace
}  // namespace lkcert
