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
#include <limits>
#include <random>

#include "lkcert/config.hpp"
#include "lkcert/errors.hpp"
#include "lkcert/train.hpp"
#include "test_util.hpp"

namespace lkcert {
namespace {

using Eigen::MatrixXd;

Episode random_episode(int K, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Episode ep;
  for (int k = 0; k < K; ++k) {
    ep.y.emplace_back(n(rng), 0.3 * n(rng));
    ep.phi.emplace_back(0.0, 0.0);
    ep.u.push_back(0.5 * n(rng));
    ep.x.push_back(Vec4::Zero());
  }
  return ep;
}

double loss_of(const RnnController& r, const std::vector<const Episode*>& batch) {
  Gradients g;
  return bptt_gradients(r, batch, 1 << 20, g);
}

// Central differences on every weight of a 3-neuron controller.
TEST(Bptt, MatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  const RnnController rnn = testing::random_rnn(3, 3, rng, 0.4);
  const Episode e1 = random_episode(15, rng), e2 = random_episode(9, rng);
  const std::vector<const Episode*> batch = {&e1, &e2};
  Gradients g;
  bptt_gradients(rnn, batch, 100, g);
  const double h = 1e-5;
  auto check = [&](MatrixXd RnnController::*w, const MatrixXd& gw, const char* name) {
    for (Eigen::Index i = 0; i < gw.rows(); ++i) {
      for (Eigen::Index j = 0; j < gw.cols(); ++j) {
        RnnController a = rnn, b = rnn;
        (a.*w)(i, j) += h;
        (b.*w)(i, j) -= h;
        const double fd = (loss_of(a, batch) - loss_of(b, batch)) / (2 * h);
        const double err = std::abs(fd - gw(i, j));
        EXPECT_LE(err, 1e-5 * std::max(std::abs(fd), 1e-3)) << name << "(" << i << "," << j << ")";
      }
    }
  };
  check(&RnnController::A, g.A, "A");
  check(&RnnController::B1, g.B1, "B1");
  check(&RnnController::B2, g.B2, "B2");
  check(&RnnController::C1, g.C1, "C1");
  check(&RnnController::D11, g.D11, "D11");
  check(&RnnController::D12, g.D12, "D12");
  check(&RnnController::C2, g.C2, "C2");
  check(&RnnController::D22, g.D22, "D22");
}

TEST(Bptt, TruncationAtLengthIsExact) {
  std::mt19937_64 rng(22);
  const RnnController rnn = testing::random_rnn(4, 3, rng);
  const Episode e = random_episode(30, rng);
  Gradients a, b;
  const double la = bptt_gradients(rnn, {&e}, 30, a);
  const double lb = bptt_gradients(rnn, {&e}, 1000, b);
  EXPECT_EQ(la, lb);
  EXPECT_EQ(a.A, b.A);
  EXPECT_EQ(a.C2, b.C2);
  // Truncation never changes the forward loss.
  Gradients c;
  EXPECT_EQ(bptt_gradients(rnn, {&e}, 5, c), la);
  EXPECT_NE(c.A, a.A);
}

TEST(Bptt, EmptyBatchAndZeroLoss) {
  std::mt19937_64 rng(23);
  const RnnController rnn = testing::random_rnn(3, 2, rng);
  Gradients g;
  EXPECT_EQ(bptt_gradients(rnn, {}, 10, g), 0.0);
  EXPECT_EQ(g.max_abs(), 0.0);
  const Episode empty;
  EXPECT_EQ(bptt_gradients(rnn, {&empty}, 10, g), 0.0);

  // Targets equal to the controller's own output: zero loss, zero gradient.
  Episode e = random_episode(12, rng);
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(3);
  for (int k = 0; k < e.length(); ++k) {
    const RnnStep s = rnn_step(rnn, xi, e.y[static_cast<std::size_t>(k)]);
    e.u[static_cast<std::size_t>(k)] = s.u;
    xi = s.xi_next;
  }
  EXPECT_LE(bptt_gradients(rnn, {&e}, 12, g), 1e-28);
  EXPECT_LE(g.max_abs(), 1e-14);
}

TEST(Train, ZeroLearningRateKeepsWeights) {
  std::mt19937_64 rng(24);
  const RnnController rnn = testing::random_rnn(3, 3, rng);
  Dataset d;
  for (int i = 0; i < 4; ++i) d.episodes.push_back(random_episode(20, rng));
  TrainConfig cfg;
  cfg.lr = 0.0;
  cfg.epochs = 3;
  cfg.batch_size = 2;
  cfg.truncation = 10;
  const TrainResult r = train(rnn, d, cfg);
  EXPECT_FALSE(r.aborted);
  EXPECT_EQ(r.rnn.A, rnn.A);
  EXPECT_EQ(r.rnn.D22, rnn.D22);
  ASSERT_EQ(r.curve.size(), 4u);
  for (const auto& pt : r.curve) EXPECT_EQ(pt.loss, r.curve.front().loss);
}

TEST(Train, BestSoFarIsMonotone) {
  std::mt19937_64 rng(25);
  const RnnController rnn = testing::random_rnn(3, 3, rng);
  Dataset d;
  for (int i = 0; i < 6; ++i) d.episodes.push_back(random_episode(25, rng));
  TrainConfig cfg;
  cfg.lr = 1e-2;
  cfg.epochs = 20;
  cfg.batch_size = 3;
  cfg.truncation = 25;
  const TrainResult r = train(rnn, d, cfg);
  ASSERT_FALSE(r.aborted);
  for (std::size_t i = 1; i < r.curve.size(); ++i) {
    EXPECT_LE(r.curve[i].best, r.curve[i - 1].best);
    EXPECT_LE(r.curve[i].best, r.curve[i].loss);
  }
  EXPECT_LT(r.curve.back().loss, r.curve.front().loss);
}

TEST(Train, NonFiniteDataAborts) {
  std::mt19937_64 rng(26);
  const RnnController rnn = testing::random_rnn(2, 2, rng);
  Dataset d;
  d.episodes.push_back(random_episode(10, rng));
  d.episodes.front().u[4] = std::numeric_limits<double>::quiet_NaN();
  TrainConfig cfg;
  cfg.truncation = 10;
  const TrainResult r = train(rnn, d, cfg);
  EXPECT_TRUE(r.aborted);
  EXPECT_EQ(r.rnn.A, rnn.A);
}

TEST(Train, InvalidConfig) {
  TrainConfig cfg;
  cfg.lr = -1.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = TrainConfig{};
  cfg.init = "xavier";
  EXPECT_THROW(cfg.validate(), Error);
  cfg = TrainConfig{};
  cfg.truncation = 0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Train, ObserverWarmStartShape) {
  const VehicleParams p;
  TrainConfig cfg;
  cfg.init_scale = 0.0;
  const RnnController r = initial_controller(p, ExpertConfig{}, RnnArch{}, cfg);
  EXPECT_EQ(r.n_xi(), 8);
  EXPECT_EQ(r.n_phi(), 8);
  // Only the first four hidden states carry the estimator.
  EXPECT_TRUE(r.A.bottomRows(4).isZero());
  EXPECT_TRUE(r.A.rightCols(4).isZero());
  EXPECT_FALSE(r.A.topLeftCorner(4, 4).isZero());
  cfg.init = "random";
  cfg.init_scale = 0.0;
  EXPECT_TRUE(initial_controller(p, ExpertConfig{}, RnnArch{}, cfg).A.isZero());
}

// Reproduces the shipped training run and its loss reduction.
TEST(Train, ShippedRunReducesLossTenfold) {
  const RunConfig cfg = load_config(testing::data_path("default_config.json"));
  const Dataset d = dataset_from_csv(io::csv_from_string(io::read_file(testing::data_path("fixture/dataset.csv"))));
  const io::json meta = io::json::parse(io::read_file(testing::data_path("fixture/train.json")));
  TrainConfig tc = cfg.train;
  tc.seed = meta.at("seed").get<std::uint64_t>();
  const TrainResult r = train(initial_controller(cfg.vehicle, cfg.expert, cfg.rnn, tc), d, tc);
  ASSERT_FALSE(r.aborted);
  EXPECT_LE(r.curve.back().loss, 0.1 * r.curve.front().loss);
  EXPECT_EQ(weights_to_json(r.rnn), weights_to_json(testing::shipped_rnn()));
}

}  // namespace
}  // namespace lkcert
