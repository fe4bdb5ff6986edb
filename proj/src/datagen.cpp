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
#include "lkcert/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lkcert/errors.hpp"
#include "lkcert/simulator.hpp"

namespace lkcert {

void ExpertConfig::validate() const {
  if (!(R > 0.0)) throw Error(ErrorKind::Parameter, "expert: R must be > 0");
  if ((Q_diag.array() < 0.0).any()) throw Error(ErrorKind::Parameter, "expert: Q must be PSD");
  if (N < 1) throw Error(ErrorKind::Parameter, "expert: horizon N must be >= 1");
}

PreviewSolution preview_lqr(const PreviewHorizon& h, const Eigen::Matrix4d& Q, double R, const Vec4& x0) {
  if (!(R > 0.0)) throw Error(ErrorKind::Parameter, "preview_lqr: R must be > 0");
  const int N = h.length();
  if (static_cast<int>(h.B.size()) != N || static_cast<int>(h.E.size()) != N ||
      static_cast<int>(h.phi.size()) != N) {
    throw Error(ErrorKind::Shape, "preview_lqr: horizon sequences differ in length");
  }
  PreviewSolution sol;
  sol.K.resize(static_cast<std::size_t>(N));
  sol.ff.resize(static_cast<std::size_t>(N));
  Mat4 P = Q;
  Vec4 s = Vec4::Zero();
  for (int j = N - 1; j >= 0; --j) {
    const auto J = static_cast<std::size_t>(j);
    const Mat4& A = h.A[J];
    const Mat41& B = h.B[J];
    const double S = R + (B.transpose() * P * B)(0, 0);
    const Eigen::RowVector4d K = (B.transpose() * P * A) / S;
    const Vec4 g = P * h.E[J] * h.phi[J] + s;
    sol.K[J] = K;
    sol.ff[J] = (B.transpose() * g)(0, 0) / S;
    s = (A - B * K).transpose() * g;
    P = Q + A.transpose() * P * A - A.transpose() * P * B * K;
    P = 0.5 * (P + P.transpose()).eval();
  }
  Vec4 x = x0;
  sol.u.resize(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    const auto J = static_cast<std::size_t>(j);
    const double u = -(sol.K[J] * x)(0, 0) - sol.ff[J];
    sol.u[J] = u;
    x = h.A[J] * x + h.B[J] * u + h.E[J] * h.phi[J];
  }
  return sol;
}

double preview_cost(const PreviewHorizon& h, const Eigen::Matrix4d& Q, double R, const Vec4& x0,
                    const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != h.length()) throw Error(ErrorKind::Shape, "preview_cost: wrong input length");
  Vec4 x = x0;
  double J = 0.0;
  for (int j = 0; j < h.length(); ++j) {
    const auto i = static_cast<std::size_t>(j);
    J += R * u[i] * u[i];
    x = h.A[i] * x + h.B[i] * u[i] + h.E[i] * h.phi[i];
    J += x.dot(Q * x);
  }
  return J;
}

PreviewHorizon preview_window(const VehicleParams& params, const RoadProfile& road, int k, int N) {
  if (road.steps() == 0) throw Error(ErrorKind::Parameter, "preview_window: empty road");
  PreviewHorizon h;
  for (int j = k; j < k + N; ++j) {
    const auto jj = static_cast<std::size_t>(std::min(j, road.steps() - 1));
    const PlantLTI G = build_nominal_plant(params, road.Vx[jj]);
    h.A.push_back(G.A);
    h.B.push_back(G.B1);
    h.E.push_back(G.B2);
    h.phi.push_back(phi_from_road(road.Vx[jj], road.kappa[jj], params));
  }
  return h;
}

Episode expert_rollout(const VehicleParams& params, const ExpertConfig& expert, const RoadProfile& road,
                       const Vec4& x0) {
  expert.validate();
  const Eigen::Matrix4d Q = expert.Q_diag.asDiagonal();
  Episode ep;
  Vec4 x = x0;
  for (int k = 0; k < road.steps(); ++k) {
    const PreviewHorizon h = preview_window(params, road, k, expert.N);
    const PreviewSolution sol = preview_lqr(h, Q, expert.R, x);
    const double u = sol.u.front();
    const PlantLTI G = build_nominal_plant(params, road.Vx[static_cast<std::size_t>(k)]);
    ep.x.push_back(x);
    ep.y.push_back(G.C * x);
    ep.phi.push_back(h.phi.front());
    ep.u.push_back(u);
    x = G.A * x + G.B1 * u + G.B2 * h.phi.front();
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e3) {
      throw Error(ErrorKind::Divergence, "expert rollout diverged at step " + std::to_string(k));
    }
  }
  return ep;
}

Dataset generate_dataset(const VehicleParams& params, const ExpertConfig& expert, const DatagenConfig& cfg,
                         std::vector<std::string>* rejected) {
  params.validate();
  expert.validate();
  if (cfg.episodes < 0 || cfg.steps < 0) throw Error(ErrorKind::Parameter, "datagen: negative size");
  Dataset d;
  for (int i = 0; i < cfg.episodes; ++i) {
    std::mt19937_64 rng(run_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    RoadProfile road = road_random_training(params, cfg.steps, rng);
    clamp_to_band(params, road);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec4 x0;
    for (int j = 0; j < 4; ++j) x0(j) = cfg.x0_scale(j) * u(rng);
    try {
      d.episodes.push_back(expert_rollout(params, expert, road, x0));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Divergence) throw;
      if (rejected) rejected->push_back("episode " + std::to_string(i) + ": " + e.what());
    }
  }
  return d;
}

io::CsvTable dataset_to_csv(const Dataset& d) {
  io::CsvTable t;
  t.header = {"episode", "k", "y1", "y2", "phi1", "phi2", "u"};
  for (std::size_t e = 0; e < d.episodes.size(); ++e) {
    const Episode& ep = d.episodes[e];
    for (int k = 0; k < ep.length(); ++k) {
      const auto K = static_cast<std::size_t>(k);
      t.rows.push_back({static_cast<double>(e), static_cast<double>(k), ep.y[K](0), ep.y[K](1),
                        ep.phi[K](0), ep.phi[K](1), ep.u[K]});
    }
  }
  return t;
}

Dataset dataset_from_csv(const io::CsvTable& t) {
  const char* need[] = {"episode", "k", "y1", "y2", "phi1", "phi2", "u"};
  int c[7];
  for (int i = 0; i < 7; ++i) {
    c[i] = t.column(need[i]);
    if (c[i] < 0) throw Error(ErrorKind::Format, std::string("dataset: missing column \"") + need[i] + "\"");
  }
  Dataset d;
  long current = -1;
  for (const auto& row : t.rows) {
    auto at = [&row](int col) { return row[static_cast<std::size_t>(col)]; };
    const long e = std::lround(at(c[0]));
    if (e != current) {
      if (e != current + 1) throw Error(ErrorKind::Format, "dataset: episode ids must be consecutive from 0");
      d.episodes.emplace_back();
      current = e;
    }
    Episode& ep = d.episodes.back();
    if (std::lround(at(c[1])) != ep.length()) throw Error(ErrorKind::Format, "dataset: step index out of order");
    ep.y.emplace_back(at(c[2]), at(c[3]));
    ep.phi.emplace_back(at(c[4]), at(c[5]));
    ep.u.push_back(at(c[6]));
  }
  return d;
}

double rms_eyL(const std::vector<Vec4>& x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (const auto& v : x) s += v(0) * v(0);
  return std::sqrt(s / static_cast<double>(x.size()));
}

}  // namespace lkcert
