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

#include "lkcert/errors.hpp"
#include "lkcert/reach_monitor.hpp"
#include "test_util.hpp"

namespace lkcert {
namespace {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

ReachCertificate toy_cert(int n, double rho, double mu_d, double mu_phi) {
  ReachCertificate c;
  c.stab.rho = rho;
  c.stab.P = MatrixXd::Identity(n, n);
  c.mu_d = mu_d;
  c.mu_phi = mu_phi;
  c.P_eyL = 1.0;
  return c;
}

TEST(Monitor, InitIsQuadraticForm) {
  ReachCertificate c = toy_cert(3, 0.9, 1.0, 1.0);
  c.stab.P(0, 1) = c.stab.P(1, 0) = 0.5;
  const VectorXd z = (VectorXd(3) << 1.0, 2.0, -1.0).finished();
  const MonitorState ms = monitor_init(c, z, Vector2d(0.1, 0.1));
  EXPECT_DOUBLE_EQ(ms.sigma, 1.0 + 4.0 + 1.0 + 2.0);
  EXPECT_DOUBLE_EQ(ms.sigma_bar, ms.sigma);
  EXPECT_EQ(ms.k, 0);
}

TEST(Monitor, PureDecay) {
  const ReachCertificate c = toy_cert(2, 0.9, 1.0, 1.0);
  MonitorState ms = monitor_init(c, Vector2d(1.0, 0.0), Vector2d::Zero());
  for (int k = 0; k < 10; ++k) ms = monitor_step(ms, Vector2d::Zero(), Vector2d::Zero());
  EXPECT_NEAR(ms.sigma, std::pow(0.81, 10), 1e-15);
  EXPECT_NEAR(ms.sigma_bar, std::pow(0.81, 10), 1e-15);
  EXPECT_EQ(ms.k, 10);
}

TEST(Monitor, SteadyStateUnderConstantInput) {
  // sigma* = c / (1 - rho^2) with c = mu_d |d_max|^2 + mu_phi |phi|^2.
  const ReachCertificate c = toy_cert(2, 0.9, 2.0, 3.0);
  const Vector2d dmax(0.1, 0.2), phi(0.05, -0.05);
  MonitorState ms = monitor_init(c, Vector2d::Zero(), dmax);
  for (int k = 0; k < 2000; ++k) ms = monitor_step(ms, phi);
  const double cst = 2.0 * 0.05 + 3.0 * 0.005;
  EXPECT_NEAR(ms.sigma_bar, cst / 0.19, 1e-12);
  EXPECT_NEAR(ms.sigma, ms.sigma_bar, 1e-12);  // no realized d: falls back to d_max
}

TEST(Monitor, SingleStepHandValue) {
  const ReachCertificate c = toy_cert(2, 0.9, 1.0, 1.0);
  const MonitorState ms0 = monitor_init(c, Vector2d::Zero(), Vector2d(0.01, 0.01));
  const MonitorState ms1 = monitor_step(ms0, Vector2d::Zero(), Vector2d::Zero());
  EXPECT_NEAR(ms1.sigma_bar, 2e-4, 1e-18);
  EXPECT_EQ(ms1.sigma, 0.0);
}

TEST(Monitor, RealizedNeverExceedsWorstCase) {
  const ReachCertificate c = toy_cert(2, 0.95, 1.5, 0.7);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vector2d dmax(0.02, 0.03);
  MonitorState ms = monitor_init(c, Vector2d(0.3, -0.2), dmax);
  for (int k = 0; k < 500; ++k) {
    ms = monitor_step(ms, Vector2d(u(rng), u(rng)) * 0.01, Vector2d(dmax(0) * u(rng), dmax(1) * u(rng)));
    ASSERT_LE(ms.sigma, ms.sigma_bar);
  }
}

TEST(Monitor, BoundFromSigmaBar) {
  ReachCertificate c = toy_cert(2, 0.9, 1.0, 1.0);
  c.P_eyL = 0.25;
  const MonitorState ms = monitor_init(c, Vector2d(1.0, 0.0), Vector2d::Zero());
  EXPECT_DOUBLE_EQ(eyL_bound(ms), 2.0);
}

TEST(Monitor, ShapeMismatch) {
  const ReachCertificate c = toy_cert(3, 0.9, 1.0, 1.0);
  try {
    monitor_init(c, Vector2d::Zero(), Vector2d::Zero());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Shape);
  }
}

TEST(Monitor, ZetaAtRest) {
  const VectorXd z = zeta_at_rest(Eigen::Vector4d(1, 2, 3, 4), 3);
  ASSERT_EQ(z.size(), 7);
  EXPECT_EQ(z.head<4>(), Eigen::Vector4d(1, 2, 3, 4));
  EXPECT_TRUE(z.tail(3).isZero());
}

TEST(StateMetric, FirstIndexMatchesErrorMetric) {
  std::mt19937_64 rng(6);
  const MatrixXd G = testing::randn(5, 5, rng);
  const MatrixXd P = G * G.transpose() + MatrixXd::Identity(5, 5);
  EXPECT_DOUBLE_EQ(state_metric(P, 0), extract_error_metric(P));
  // Diagonal P: the metric is the diagonal entry itself.
  const MatrixXd D = (Eigen::VectorXd(3) << 2.0, 3.0, 5.0).finished().asDiagonal();
  EXPECT_NEAR(state_metric(D, 2), 5.0, 1e-14);
  EXPECT_THROW(state_metric(D, 3), Error);
}

// |zeta_i| <= sqrt(zeta' P zeta / metric_i) for every i and random zeta.
TEST(StateMetric, BoundsEveryCoordinate) {
  std::mt19937_64 rng(7);
  const MatrixXd G = testing::randn(6, 6, rng);
  const MatrixXd P = G * G.transpose() + 0.05 * MatrixXd::Identity(6, 6);
  for (int t = 0; t < 200; ++t) {
    const VectorXd z = testing::randn(6, 1, rng);
    const double V = z.dot(P * z);
    for (int i = 0; i < 6; ++i) ASSERT_LE(std::abs(z(i)), std::sqrt(V / state_metric(P, i)) * (1 + 1e-12));
  }
}

}  // namespace
}  // namespace lkcert
