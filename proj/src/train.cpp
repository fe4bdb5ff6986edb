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
#include "lkcert/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lkcert/errors.hpp"
#include "lkcert/riccati.hpp"

namespace lkcert {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void TrainConfig::validate() const {
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw Error(ErrorKind::Parameter, "train: lr must be >= 0");
  if (epochs < 0) throw Error(ErrorKind::Parameter, "train: epochs must be >= 0");
  if (batch_size < 1) throw Error(ErrorKind::Parameter, "train: batch_size must be >= 1");
  if (truncation < 1) throw Error(ErrorKind::Parameter, "train: truncation must be >= 1");
  if (!(init_scale >= 0.0)) throw Error(ErrorKind::Parameter, "train: init_scale must be >= 0");
  if (init != "observer" && init != "random") {
    throw Error(ErrorKind::Parameter, "train: init must be \"observer\" or \"random\"");
  }
  if (!(observer_qn > 0.0) || !(observer_rn > 0.0)) {
    throw Error(ErrorKind::Parameter, "train: observer covariances must be > 0");
  }
}

namespace {

// Visits the eight weight matrices in a fixed order.
template <class R, class G, class F>
void for_each_pair(R& rnn, G& g, F&& f) {
  f(rnn.A, g.A);
  f(rnn.B1, g.B1);
  f(rnn.B2, g.B2);
  f(rnn.C1, g.C1);
  f(rnn.D11, g.D11);
  f(rnn.D12, g.D12);
  f(rnn.C2, g.C2);
  f(rnn.D22, g.D22);
}

struct Adam {
  Gradients m, v;
  int t = 0;
  static constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;

  explicit Adam(const RnnController& rnn) : m(Gradients::zeros_like(rnn)), v(Gradients::zeros_like(rnn)) {}

  void step(RnnController& rnn, const Gradients& g, double lr) {
    ++t;
    const double c1 = 1.0 - std::pow(b1, t);
    const double c2 = 1.0 - std::pow(b2, t);
    auto upd = [&](MatrixXd& w, const MatrixXd& gw, MatrixXd& mw, MatrixXd& vw) {
      mw = b1 * mw + (1.0 - b1) * gw;
      vw = b2 * vw + (1.0 - b2) * gw.cwiseProduct(gw);
      w.array() -= lr * (mw.array() / c1) / ((vw.array() / c2).sqrt() + eps);
    };
    upd(rnn.A, g.A, m.A, v.A);
    upd(rnn.B1, g.B1, m.B1, v.B1);
    upd(rnn.B2, g.B2, m.B2, v.B2);
    upd(rnn.C1, g.C1, m.C1, v.C1);
    upd(rnn.D11, g.D11, m.D11, v.D11);
    upd(rnn.D12, g.D12, m.D12, v.D12);
    upd(rnn.C2, g.C2, m.C2, v.C2);
    upd(rnn.D22, g.D22, m.D22, v.D22);
  }
};

}  // namespace

Gradients Gradients::zeros_like(const RnnController& rnn) {
  Gradients g;
  g.A = MatrixXd::Zero(rnn.A.rows(), rnn.A.cols());
  g.B1 = MatrixXd::Zero(rnn.B1.rows(), rnn.B1.cols());
  g.B2 = MatrixXd::Zero(rnn.B2.rows(), rnn.B2.cols());
  g.C1 = MatrixXd::Zero(rnn.C1.rows(), rnn.C1.cols());
  g.D11 = MatrixXd::Zero(rnn.D11.rows(), rnn.D11.cols());
  g.D12 = MatrixXd::Zero(rnn.D12.rows(), rnn.D12.cols());
  g.C2 = MatrixXd::Zero(rnn.C2.rows(), rnn.C2.cols());
  g.D22 = MatrixXd::Zero(rnn.D22.rows(), rnn.D22.cols());
  return g;
}

double Gradients::max_abs() const {
  double m = 0.0;
  for (const MatrixXd* x : {&A, &B1, &B2, &C1, &D11, &D12, &C2, &D22}) {
    if (x->size() > 0) m = std::max(m, x->cwiseAbs().maxCoeff());
  }
  return m;
}

bool Gradients::all_finite() const {
  for (const MatrixXd* x : {&A, &B1, &B2, &C1, &D11, &D12, &C2, &D22}) {
    if (!x->allFinite()) return false;
  }
  return true;
}

double bptt_gradients(const RnnController& rnn, const std::vector<const Episode*>& batch, int truncation,
                      Gradients& grad) {
  rnn.validate();
  if (truncation < 1) throw Error(ErrorKind::Parameter, "bptt: truncation must be >= 1");
  grad = Gradients::zeros_like(rnn);
  long total = 0;
  for (const Episode* ep : batch) total += ep->length();
  if (total == 0) return 0.0;
  const double scale = 1.0 / static_cast<double>(total);
  const int n = rnn.n_xi();
  const int m = rnn.n_phi();

  double loss = 0.0;
  std::vector<VectorXd> xi, p, q;
  for (const Episode* ep : batch) {
    const int K = ep->length();
    xi.assign(static_cast<std::size_t>(K + 1), VectorXd::Zero(n));
    p.assign(static_cast<std::size_t>(K), VectorXd::Zero(m));
    q.assign(static_cast<std::size_t>(K), VectorXd::Zero(m));
    std::vector<double> err(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
      const auto i = static_cast<std::size_t>(k);
      const Eigen::Vector2d& y = ep->y[i];
      p[i] = rnn.C2 * xi[i] + rnn.D22 * y;
      q[i] = rnn.activate(p[i]);
      const double u = (rnn.C1 * xi[i] + rnn.D11 * q[i] + rnn.D12 * y)(0);
      err[i] = u - ep->u[i];
      loss += err[i] * err[i];
      xi[i + 1] = rnn.A * xi[i] + rnn.B1 * q[i] + rnn.B2 * y;
    }
    for (int end = K; end > 0; end -= truncation) {
      const int start = std::max(0, end - truncation);
      VectorXd gxi = VectorXd::Zero(n);  // dL/dxi_{k+1}
      for (int k = end - 1; k >= start; --k) {
        const auto i = static_cast<std::size_t>(k);
        const Eigen::Vector2d& y = ep->y[i];
        const double gu = 2.0 * err[i] * scale;
        grad.C1 += gu * xi[i].transpose();
        grad.D11 += gu * q[i].transpose();
        grad.D12 += gu * y.transpose();
        grad.A += gxi * xi[i].transpose();
        grad.B1 += gxi * q[i].transpose();
        grad.B2 += gxi * y.transpose();
        VectorXd gq = rnn.D11.transpose() * gu + rnn.B1.transpose() * gxi;
        VectorXd gp(m);
        for (int j = 0; j < m; ++j) gp(j) = gq(j) * rnn.phi_prime(p[i](j));
        grad.C2 += gp * xi[i].transpose();
        grad.D22 += gp * y.transpose();
        gxi = rnn.C1.transpose() * gu + rnn.A.transpose() * gxi + rnn.C2.transpose() * gp;
      }
    }
  }
  return loss * scale;
}

double dataset_loss(const RnnController& rnn, const Dataset& data) {
  double loss = 0.0;
  long total = 0;
  for (const Episode& ep : data.episodes) {
    VectorXd xi = VectorXd::Zero(rnn.n_xi());
    for (int k = 0; k < ep.length(); ++k) {
      const auto i = static_cast<std::size_t>(k);
      const RnnStep s = rnn_step(rnn, xi, ep.y[i]);
      const double e = s.u - ep.u[i];
      loss += e * e;
      xi = s.xi_next;
    }
    total += ep.length();
  }
  return total ? loss / static_cast<double>(total) : 0.0;
}

RnnController initial_controller(const VehicleParams& params, const ExpertConfig& expert, const RnnArch& arch,
                                 const TrainConfig& cfg) {
  cfg.validate();
  if (arch.n_xi < 1 || arch.n_phi < 1) throw Error(ErrorKind::Parameter, "architecture sizes must be >= 1");
  RnnController rnn = RnnController::zeros(arch.n_xi, arch.n_phi, arch.activation);
  if (cfg.init == "observer") {
    if (arch.n_xi < 4) throw Error(ErrorKind::Parameter, "observer init needs n_xi >= 4");
    expert.validate();
    const PlantLTI G = build_nominal_plant(params, params.V_nom);
    const MatrixXd A = G.A, B = G.B1, C = G.C;
    const MatrixXd K = lqr_gain(A, B, MatrixXd(expert.Q_diag.asDiagonal()), MatrixXd::Constant(1, 1, expert.R));
    const MatrixXd M = kalman_filter_gain(A, C, cfg.observer_qn * MatrixXd::Identity(4, 4),
                                          cfg.observer_rn * MatrixXd::Identity(2, 2));
    // xi holds the one-step prediction; xhat = xi + M (y - C xi), u = -K xhat.
    const MatrixXd IMC = MatrixXd::Identity(4, 4) - M * C;
    const MatrixXd Acl = A - B * K;
    rnn.A.topLeftCorner(4, 4) = Acl * IMC;
    rnn.B2.topRows(4) = Acl * M;
    rnn.C1.leftCols(4) = -K * IMC;
    rnn.D12 = -K * M;
  }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  for_each_pair(rnn, rnn, [&](MatrixXd& w, MatrixXd&) {
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) += cfg.init_scale * nd(rng);
  });
  return rnn;
}

TrainResult train(const RnnController& init, const Dataset& data, const TrainConfig& cfg) {
  cfg.validate();
  init.validate();
  for (const Episode& ep : data.episodes) {
    if (ep.length() > 0 && cfg.truncation > ep.length()) {
      throw Error(ErrorKind::Parameter, "train: truncation exceeds an episode length");
    }
  }
  TrainResult res;
  res.rnn = init;
  const auto E = data.episodes.size();
  std::vector<std::size_t> order(E);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed ^ 0x5bd1e995ULL);
  Adam adam(init);
  double best = std::numeric_limits<double>::infinity();
  auto record = [&](int epoch, double loss) {
    best = std::min(best, loss);
    res.curve.push_back({epoch, loss, best});
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double epoch_loss = dataset_loss(res.rnn, data);
    if (!std::isfinite(epoch_loss)) {
      res.aborted = true;
      res.message = "non-finite loss at epoch " + std::to_string(epoch);
      return res;
    }
    record(epoch, epoch_loss);
    if (static_cast<std::size_t>(cfg.batch_size) < E) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t b = 0; b < E; b += static_cast<std::size_t>(cfg.batch_size)) {
      std::vector<const Episode*> batch;
      for (std::size_t i = b; i < std::min(E, b + static_cast<std::size_t>(cfg.batch_size)); ++i) {
        batch.push_back(&data.episodes[order[i]]);
      }
      Gradients g;
      const double l = bptt_gradients(res.rnn, batch, cfg.truncation, g);
      if (!std::isfinite(l) || !g.all_finite()) {
        res.aborted = true;
        res.message = "non-finite gradient at epoch " + std::to_string(epoch);
        return res;
      }
      const RnnController keep = res.rnn;
      adam.step(res.rnn, g, cfg.lr);
      bool finite = true;
      for_each_pair(res.rnn, res.rnn, [&](MatrixXd& w, MatrixXd&) { finite = finite && w.allFinite(); });
      if (!finite) {
        res.rnn = keep;
        res.aborted = true;
        res.message = "non-finite weights at epoch " + std::to_string(epoch);
        return res;
      }
    }
  }
  const double final_loss = dataset_loss(res.rnn, data);
  if (!std::isfinite(final_loss)) {
    res.aborted = true;
    res.message = "non-finite final loss";
    return res;
  }
  record(cfg.epochs, final_loss);
  res.message = "ok";
  return res;
}

io::CsvTable loss_curve_to_csv(const std::vector<LossPoint>& curve) {
  io::CsvTable t;
  t.header = {"epoch", "loss", "best"};
  for (const auto& p : curve) t.rows.push_back({static_cast<double>(p.epoch), p.loss, p.best});
  return t;
}

CertifiedTraining train_until_accepted(const VehicleParams& params, const ExpertConfig& expert,
                                       const RnnArch& arch, const Dataset& data, const TrainConfig& cfg,
                                       int max_attempts,
                                       const std::function<bool(const RnnController&)>& accept) {
  if (max_attempts < 1) throw Error(ErrorKind::Parameter, "train: max_attempts must be >= 1");
  CertifiedTraining out;
  for (int a = 0; a < max_attempts; ++a) {
    TrainConfig c = cfg;
    c.seed = cfg.seed + static_cast<std::uint64_t>(a);
    TrainResult r = train(initial_controller(params, expert, arch, c), data, c);
    out.attempts = a + 1;
    out.seed = c.seed;
    const bool ok = !r.aborted && accept(r.rnn);
    out.result = std::move(r);
    if (ok) {
      out.certified = true;
      return out;
    }
  }
  return out;
}

}  // namespace lkcert
