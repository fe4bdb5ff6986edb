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
#include <filesystem>
#include <random>

#include "lkcert/errors.hpp"
#include "lkcert/io.hpp"
#include "lkcert/rnn_controller.hpp"
#include "test_util.hpp"

namespace lkcert {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using testing::random_rnn;

TEST(SectorBounds, TanhAndRelu) {
  for (Activation a : {Activation::Tanh, Activation::Relu}) {
    auto [al, be] = sector_bounds(a, 3);
    EXPECT_EQ(al, VectorXd::Zero(3));
    EXPECT_EQ(be, VectorXd::Ones(3));
  }
  EXPECT_THROW(sector_bounds(Activation::Custom, 2), Error);
}

TEST(SectorBounds, TanhRatioInsideSector) {
  for (double p = -20.0; p <= 20.0; p += 0.013) {
    if (p == 0.0) continue;
    const double r = std::tanh(p) / p;
    EXPECT_GT(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(LoopTransform, UnitSectorGivesHalves) {
  std::mt19937_64 rng(1);
  const TransformedRnn t = loop_transform(random_rnn(3, 4, rng));
  EXPECT_EQ(t.K1, VectorXd::Constant(4, 0.5));
  EXPECT_EQ(t.K2, VectorXd::Constant(4, 0.5));
}

TEST(LoopTransform, SymmetricSectorIsIdentity) {
  std::mt19937_64 rng(2);
  RnnController r = random_rnn(3, 2, rng, 0.5, Activation::Custom);
  r.custom = [](double p) { return std::tanh(p); };
  r.alpha = VectorXd::Constant(2, -1.0);
  r.beta = VectorXd::Constant(2, 1.0);
  const TransformedRnn t = loop_transform(r);
  EXPECT_EQ(t.K1, VectorXd::Zero(2));
  EXPECT_EQ(t.K2, VectorXd::Ones(2));
  EXPECT_EQ(t.At, r.A);
  EXPECT_EQ(t.B1t, r.B1);
  EXPECT_EQ(t.B2t, r.B2);
  EXPECT_EQ(t.C1t, r.C1);
  EXPECT_EQ(t.D11t, r.D11);
  EXPECT_EQ(t.D12t, r.D12);
}

TEST(LoopTransform, DegenerateSectorRejected) {
  std::mt19937_64 rng(3);
  RnnController r = random_rnn(2, 2, rng);
  r.beta(1) = r.alpha(1);
  EXPECT_THROW(loop_transform(r), Error);
}

TEST(TransformedActivation, ScalarHandValue) {
  RnnController r = RnnController::zeros(1, 1);
  const TransformedRnn t = loop_transform(r);
  const VectorXd q = transformed_activation(t, VectorXd::Constant(1, 2.0));
  EXPECT_NEAR(q(0), 2.0 * std::tanh(2.0) - 2.0, 1e-15);
  EXPECT_NEAR(q(0), -0.07194, 5e-6);
  EXPECT_EQ(transformed_activation(t, VectorXd::Zero(1))(0), 0.0);
}

TEST(TransformedActivation, NormalizedSectorOnSamples) {
  for (Activation a : {Activation::Tanh, Activation::Relu}) {
    const TransformedRnn t = loop_transform(RnnController::zeros(1, 4, a));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int s = 0; s < 10000; ++s) {
      VectorXd p(4);
      for (int i = 0; i < 4; ++i) p(i) = u(rng);
      const VectorXd q = transformed_activation(t, p);
      for (int i = 0; i < 4; ++i) ASSERT_LE(std::abs(q(i)), std::abs(p(i)) + 1e-15);
    }
  }
}

TEST(RnnStep, ZeroWeights) {
  const RnnController r = RnnController::zeros(4, 3);
  const RnnStep s = rnn_step(r, VectorXd::Ones(4), Eigen::Vector2d(0.4, -2.0));
  EXPECT_EQ(s.u, 0.0);
  EXPECT_TRUE(s.xi_next.isZero(0.0));
}

TEST(RnnStep, FeedthroughOnly) {
  std::mt19937_64 rng(5);
  RnnController r = random_rnn(3, 2, rng);
  r.D22.setZero();
  const Eigen::Vector2d y(0.7, -0.2);
  const RnnStep s = rnn_step(r, VectorXd::Zero(3), y);
  EXPECT_TRUE(s.p.isZero(0.0));
  EXPECT_TRUE(s.q.isZero(0.0));
  EXPECT_DOUBLE_EQ(s.u, (r.D12 * y)(0));
}

TEST(RnnStep, MatchesScalarReimplementation) {
  std::mt19937_64 rng(6);
  const RnnController r = random_rnn(5, 4, rng);
  std::vector<double> xi(5, 0.0);
  VectorXd x = VectorXd::Zero(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const Eigen::Vector2d y(n(rng), n(rng));
    std::vector<double> q(4);
    for (int i = 0; i < 4; ++i) {
      double p = r.D22(i, 0) * y(0) + r.D22(i, 1) * y(1);
      for (int j = 0; j < 5; ++j) p += r.C2(i, j) * xi[j];
      q[i] = std::tanh(p);
    }
    double u = r.D12(0, 0) * y(0) + r.D12(0, 1) * y(1);
    for (int j = 0; j < 5; ++j) u += r.C1(0, j) * xi[j];
    for (int i = 0; i < 4; ++i) u += r.D11(0, i) * q[i];
    std::vector<double> nx(5);
    for (int i = 0; i < 5; ++i) {
      double v = r.B2(i, 0) * y(0) + r.B2(i, 1) * y(1);
      for (int j = 0; j < 5; ++j) v += r.A(i, j) * xi[j];
      for (int j = 0; j < 4; ++j) v += r.B1(i, j) * q[j];
      nx[i] = v;
    }
    const RnnStep s = rnn_step(r, x, y);
    ASSERT_NEAR(s.u, u, 1e-12);
    for (int i = 0; i < 5; ++i) ASSERT_NEAR(s.xi_next(i), nx[i], 1e-12);
    xi = nx;
    x = s.xi_next;
  }
}

double closed_loop_gap(const RnnController& r, int steps, std::mt19937_64& rng) {
  const TransformedRnn t = loop_transform(r);
  std::normal_distribution<double> n(0.0, 1.0);
  VectorXd a = VectorXd::Zero(r.n_xi()), b = a;
  double worst = 0.0;
  for (int k = 0; k < steps; ++k) {
    const Eigen::Vector2d y(n(rng), n(rng));
    const RnnStep s1 = rnn_step(r, a, y);
    const RnnStep s2 = rnn_step(t, b, y);
    worst = std::max(worst, std::abs(s1.u - s2.u));
    // u is compared absolutely; xi relative to its size, since random
    // controllers may have an unstable A and grow xi to 1e5 in 100 steps.
    const double xs = std::max(1.0, s1.xi_next.cwiseAbs().maxCoeff());
    worst = std::max(worst, (s1.xi_next - s2.xi_next).cwiseAbs().maxCoeff() / xs);
    a = s1.xi_next;
    b = s2.xi_next;
  }
  return worst;
}

TEST(LoopTransform, TwoNeuronEquivalence) {
  std::mt19937_64 rng(7);
  EXPECT_LT(closed_loop_gap(random_rnn(2, 2, rng), 50, rng), 1e-10);
}

TEST(LoopTransform, EquivalenceOnManyControllers) {
  std::mt19937_64 rng(8);
  for (int c = 0; c < 50; ++c) {
    ASSERT_LT(closed_loop_gap(random_rnn(6, 5, rng, 0.3), 100, rng), 1e-10) << "controller " << c;
  }
}

TEST(QuadraticConstraints, SectorConstraintNonnegative) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-8.0, 8.0), lam(0.0, 5.0);
  for (Activation a : {Activation::Tanh, Activation::Relu}) {
    const RnnController r = RnnController::zeros(1, 3, a);
    for (int s = 0; s < 10000; ++s) {
      VectorXd p(3), L(3);
      for (int i = 0; i < 3; ++i) {
        p(i) = u(rng);
        L(i) = lam(rng);
      }
      const VectorXd q = r.activate(p);
      const VectorXd A = r.alpha, B = r.beta;
      // [p;q]' [[-2 A B L, (A+B) L], [(A+B) L, -2 L]] [p;q]
      double v = 0.0;
      for (int i = 0; i < 3; ++i) {
        v += -2.0 * A(i) * B(i) * L(i) * p(i) * p(i) + 2.0 * (A(i) + B(i)) * L(i) * p(i) * q(i) -
             2.0 * L(i) * q(i) * q(i);
      }
      ASSERT_GE(v, -1e-12);
    }
  }
}

TEST(QuadraticConstraints, NormalizedSectorNonnegative) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-8.0, 8.0), lam(0.0, 5.0);
  const TransformedRnn t = loop_transform(RnnController::zeros(1, 3));
  for (int s = 0; s < 10000; ++s) {
    VectorXd p(3), L(3);
    for (int i = 0; i < 3; ++i) {
      p(i) = u(rng);
      L(i) = lam(rng);
    }
    const VectorXd q = transformed_activation(t, p);
    ASSERT_GE(p.dot(L.asDiagonal() * p) - q.dot(L.asDiagonal() * q), -1e-12);
  }
}

TEST(Weights, RoundTripIsBitwise) {
  std::mt19937_64 rng(11);
  const RnnController r = random_rnn(8, 8, rng);
  const auto path = (std::filesystem::temp_directory_path() / "lkcert_weights_roundtrip.json").string();
  save_weights(r, path);
  const RnnController s = load_weights(path);
  EXPECT_EQ(r.A, s.A);
  EXPECT_EQ(r.B1, s.B1);
  EXPECT_EQ(r.B2, s.B2);
  EXPECT_EQ(r.C1, s.C1);
  EXPECT_EQ(r.D11, s.D11);
  EXPECT_EQ(r.D12, s.D12);
  EXPECT_EQ(r.C2, s.C2);
  EXPECT_EQ(r.D22, s.D22);
  EXPECT_EQ(r.activation, s.activation);
  std::filesystem::remove(path);
}

TEST(Weights, MissingMatrixNamed) {
  std::mt19937_64 rng(12);
  auto j = io::json::parse(weights_to_json(random_rnn(3, 2, rng)));
  j.erase("C2");
  try {
    weights_from_json(j.dump());
    FAIL() << "expected a format error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Format);
    EXPECT_NE(std::string(e.what()).find("C2"), std::string::npos);
  }
}

TEST(Weights, ShapeMismatchAndUnknownActivation) {
  std::mt19937_64 rng(13);
  auto j = io::json::parse(weights_to_json(random_rnn(3, 2, rng)));
  auto bad = j;
  bad["B1"] = io::matrix_to_json(MatrixXd::Zero(3, 5));
  EXPECT_THROW(weights_from_json(bad.dump()), Error);
  bad = j;
  bad["activation"] = "sigmoid";
  EXPECT_THROW(weights_from_json(bad.dump()), Error);
}

TEST(Weights, ShippedFixtureDimensions) {
  const RnnController r = testing::shipped_rnn();
  EXPECT_EQ(r.n_xi(), 8);
  EXPECT_EQ(r.n_phi(), 8);
  EXPECT_EQ(r.activation, Activation::Tanh);
}

}  // namespace
}  // namespace lkcert
