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
#include "lkcert/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lkcert/closed_loop.hpp"
#include "lkcert/errors.hpp"

namespace lkcert {

using Eigen::VectorXd;

namespace {

constexpr double kBlowUp = 1e6;

class DisturbanceSource {
 public:
  DisturbanceSource(DisturbancePolicy p, std::uint64_t seed, const Eigen::Vector2d& d_max)
      : policy_(p), rng_(seed), d_max_(d_max.cwiseAbs()) {}

  Eigen::Vector2d next(double e_yL) {
    switch (policy_) {
      case DisturbancePolicy::None:
        return Eigen::Vector2d::Zero();
      case DisturbancePolicy::BoundedRandom: {
        // Box |d_i| <= d_max_i, which implies |d| <= |d_max|.
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double a = u(rng_);
        const double b = u(rng_);
        return {a * d_max_(0), b * d_max_(1)};
      }
      case DisturbancePolicy::WorstCaseCorner: {
        // Both channels push e_yL further from the lane center.
        const double s = e_yL < 0.0 ? -1.0 : 1.0;
        return s * d_max_;
      }
    }
    return Eigen::Vector2d::Zero();
  }

 private:
  DisturbancePolicy policy_;
  std::mt19937_64 rng_;
  Eigen::Vector2d d_max_;
};

void check_finite(const StepRecord& r, int k) {
  const bool bad = !r.x.allFinite() || !r.xi.allFinite() || !std::isfinite(r.u) ||
                   r.x.cwiseAbs().maxCoeff() > kBlowUp ||
                   (r.xi.size() > 0 && r.xi.cwiseAbs().maxCoeff() > kBlowUp) || std::abs(r.u) > kBlowUp;
  if (bad) throw Error(ErrorKind::Divergence, "simulation diverged at step " + std::to_string(k));
}

void check_scenario(const Scenario& s) {
  if (s.road.Vx.size() != s.road.kappa.size()) {
    throw Error(ErrorKind::Shape, "scenario: speed and curvature profiles differ in length");
  }
  for (std::size_t i = 0; i < s.road.Vx.size(); ++i) {
    if (!(s.road.Vx[i] > 0.0) || !std::isfinite(s.road.kappa[i])) {
      throw Error(ErrorKind::Parameter, "scenario: speed must be > 0 and curvature finite at step " +
                                            std::to_string(i));
    }
  }
}

}  // namespace

std::string policy_name(DisturbancePolicy p) {
  switch (p) {
    case DisturbancePolicy::None: return "none";
    case DisturbancePolicy::BoundedRandom: return "bounded_random";
    case DisturbancePolicy::WorstCaseCorner: return "worst_case_corner";
  }
  return "none";
}

DisturbancePolicy policy_from_name(const std::string& name) {
  if (name == "none") return DisturbancePolicy::None;
  if (name == "bounded_random") return DisturbancePolicy::BoundedRandom;
  if (name == "worst_case_corner") return DisturbancePolicy::WorstCaseCorner;
  throw Error(ErrorKind::Format, "unknown disturbance policy \"" + name + "\"");
}

Scenario scenario_from_json(const VehicleParams& params, const std::string& text) {
  io::json j;
  try {
    j = io::json::parse(text);
  } catch (const io::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("scenario: ") + e.what());
  }
  Scenario s;
  try {
    s.name = j.value("name", std::string("scenario"));
    if (!j.contains("duration")) throw Error(ErrorKind::Format, "scenario: missing \"duration\"");
    const double duration = j.at("duration").get<double>();
    if (!(duration >= 0.0)) throw Error(ErrorKind::Parameter, "scenario: duration must be >= 0");
    const int steps = static_cast<int>(std::lround(duration / params.T));
    if (!j.contains("road")) throw Error(ErrorKind::Format, "scenario: missing \"road\"");
    s.road = road_from_json(params, steps, j.at("road"));
    s.policy = policy_from_name(j.value("policy", std::string("none")));
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("d_max")) s.d_max = io::vector_from_json(j, "d_max", 2);
    if (j.contains("x0")) s.x0 = io::vector_from_json(j, "x0", 4);
  } catch (const io::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("scenario: ") + e.what());
  }
  check_scenario(s);
  return s;
}

std::string scenario_hash(const Scenario& s) {
  std::string buf = s.name + "|" + policy_name(s.policy) + "|" + std::to_string(s.seed);
  auto put = [&buf](double v) { buf += "|" + io::fmt_double(v); };
  for (int i = 0; i < 2; ++i) put(s.d_max(i));
  for (int i = 0; i < 4; ++i) put(s.x0(i));
  for (double v : s.road.Vx) put(v);
  for (double v : s.road.kappa) put(v);
  return io::hex64(io::fnv1a64(buf));
}

int certify_consistent(const VehicleParams& params, Scenario& s) {
  return clamp_to_band(params, s.road);
}

Eigen::Vector2d phi_from_road(double Vx, double kappa, const VehicleParams& params) {
  return {Vx * kappa, kappa * params.L};
}

Trajectory simulate(const Scenario& s, const RnnController& rnn, const VehicleParams& params) {
  params.validate();
  rnn.validate();
  check_scenario(s);
  Trajectory tr;
  tr.scenario_hash = scenario_hash(s);
  tr.controller_hash = io::hex64(io::fnv1a64(weights_to_json(rnn)));
  tr.steps.reserve(static_cast<std::size_t>(s.steps()));
  DisturbanceSource dist(s.policy, s.seed, s.d_max);
  Eigen::Vector4d x = s.x0;
  VectorXd xi = VectorXd::Zero(rnn.n_xi());
  for (int k = 0; k < s.steps(); ++k) {
    StepRecord r;
    r.k = k;
    r.Vx = s.road.Vx[static_cast<std::size_t>(k)];
    r.kappa = s.road.kappa[static_cast<std::size_t>(k)];
    const PlantLTI G = build_nominal_plant(params, r.Vx);
    r.x = x;
    r.xi = xi;
    r.y = G.C * x;
    const RnnStep c = rnn_step(rnn, xi, r.y);
    r.u = c.u;
    r.phi = phi_from_road(r.Vx, r.kappa, params);
    r.d = dist.next(x(0));
    check_finite(r, k);
    x = G.A * x + G.B1 * r.u + G.B2 * (r.phi + r.d);
    xi = c.xi_next;
    tr.steps.push_back(std::move(r));
  }
  return tr;
}

Trajectory simulate_augmented(const Scenario& s, const RnnController& rnn, const VehicleParams& params) {
  params.validate();
  check_scenario(s);
  const UncertainPlant up = build_uncertain_plant(params);
  const TransformedRnn t = loop_transform(rnn);
  const AugmentedSystem aug = assemble(up, t);
  Trajectory tr;
  tr.scenario_hash = scenario_hash(s);
  tr.controller_hash = io::hex64(io::fnv1a64(weights_to_json(rnn)));
  DisturbanceSource dist(s.policy, s.seed, s.d_max);
  VectorXd zeta = zeta_at_rest(s.x0, rnn.n_xi());
  for (int k = 0; k < s.steps(); ++k) {
    StepRecord r;
    r.k = k;
    r.Vx = s.road.Vx[static_cast<std::size_t>(k)];
    r.kappa = s.road.kappa[static_cast<std::size_t>(k)];
    const double dv = r.Vx - params.V_nom;
    double delta = 0.0;
    if (params.dV_max > 0.0) delta = dv / params.dV_max;
    // Band edges produced by clamp_to_band can round to |delta| = 1 + ulp.
    if (std::abs(delta) > 1.0 + 1e-12 || (params.dV_max == 0.0 && dv != 0.0)) {
      throw Error(ErrorKind::Bound, "simulate_augmented: speed outside the band at step " + std::to_string(k));
    }
    delta = std::clamp(delta, -1.0, 1.0);
    r.x = zeta.head<4>();
    r.xi = zeta.tail(rnn.n_xi());
    r.y = up.plant.C * r.x;
    r.u = rnn_step(t, r.xi, r.y).u;
    r.phi = phi_from_road(r.Vx, r.kappa, params);
    r.d = dist.next(r.x(0));
    check_finite(r, k);
    zeta = consistent_step(aug, t, zeta, r.phi, r.d, delta).zeta_next;
    tr.steps.push_back(std::move(r));
  }
  return tr;
}

io::CsvTable trajectory_to_csv(const Trajectory& t) {
  io::CsvTable c;
  c.comments = {"scenario_hash=" + t.scenario_hash, "controller_hash=" + t.controller_hash};
  c.header = {"k", "Vx", "kappa", "e_yL", "de_y", "e_psi", "psi_dot", "u",
              "phi1", "phi2", "d1", "d2", "y1", "y2"};
  const int nxi = t.steps.empty() ? 0 : static_cast<int>(t.steps.front().xi.size());
  for (int i = 0; i < nxi; ++i) c.header.push_back("xi" + std::to_string(i));
  for (const auto& r : t.steps) {
    std::vector<double> row = {static_cast<double>(r.k), r.Vx, r.kappa, r.x(0), r.x(1), r.x(2), r.x(3), r.u,
                               r.phi(0), r.phi(1), r.d(0), r.d(1), r.y(0), r.y(1)};
    for (int i = 0; i < nxi; ++i) row.push_back(r.xi(i));
    c.rows.push_back(std::move(row));
  }
  return c;
}

Trajectory trajectory_from_csv(const io::CsvTable& t) {
  const char* need[] = {"k", "Vx", "kappa", "e_yL", "de_y", "e_psi", "psi_dot", "u",
                        "phi1", "phi2", "d1", "d2", "y1", "y2"};
  int col[14];
  for (int i = 0; i < 14; ++i) {
    col[i] = t.column(need[i]);
    if (col[i] < 0) throw Error(ErrorKind::Format, std::string("trajectory: missing column \"") + need[i] + "\"");
  }
  std::vector<int> xic;
  for (int i = 0;; ++i) {
    const int c = t.column("xi" + std::to_string(i));
    if (c < 0) break;
    xic.push_back(c);
  }
  Trajectory tr;
  tr.scenario_hash = t.meta("scenario_hash");
  tr.controller_hash = t.meta("controller_hash");
  for (const auto& row : t.rows) {
    StepRecord r;
    r.k = static_cast<int>(row[static_cast<std::size_t>(col[0])]);
    auto at = [&row](int c) { return row[static_cast<std::size_t>(c)]; };
    r.Vx = at(col[1]);
    r.kappa = at(col[2]);
    r.x << at(col[3]), at(col[4]), at(col[5]), at(col[6]);
    r.u = at(col[7]);
    r.phi << at(col[8]), at(col[9]);
    r.d << at(col[10]), at(col[11]);
    r.y << at(col[12]), at(col[13]);
    r.xi.resize(static_cast<Eigen::Index>(xic.size()));
    for (std::size_t i = 0; i < xic.size(); ++i) r.xi(static_cast<Eigen::Index>(i)) = at(xic[i]);
    tr.steps.push_back(std::move(r));
  }
  return tr;
}

std::vector<MonitorRow> replay_monitor(const Trajectory& t, const ReachCertificate& cert,
                                       const Eigen::Vector2d& d_max) {
  std::vector<MonitorRow> out;
  if (t.steps.empty()) return out;
  auto zeta_of = [](const StepRecord& r) {
    VectorXd z(4 + r.xi.size());
    z << r.x, r.xi;
    return z;
  };
  MonitorState ms = monitor_init(cert, zeta_of(t.steps.front()), d_max);
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& r = t.steps[i];
    const VectorXd z = zeta_of(r);
    out.push_back({r.k, ms.sigma, ms.sigma_bar, eyL_bound(ms), r.e_yL(), z.dot(cert.stab.P * z)});
    ms = monitor_step(ms, r.phi, r.d);
  }
  return out;
}

std::uint64_t run_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Scenario containment_scenario(const VehicleParams& params, const Eigen::Vector2d& d_max, int steps,
                              std::uint64_t seed, int index, int* clamped) {
  std::mt19937_64 rng(run_seed(seed, static_cast<std::uint64_t>(index)));
  Scenario s;
  s.name = "mc" + std::to_string(index);
  s.road = road_random_shaped(params, steps, rng);
  const int c = certify_consistent(params, s);
  if (clamped) *clamped = c;
  s.policy = DisturbancePolicy::BoundedRandom;
  s.seed = rng();
  s.d_max = d_max;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Eigen::Vector4d scale(0.5, 0.05, 0.02, 0.01);
  for (int j = 0; j < 4; ++j) s.x0(j) = scale(j) * u(rng);
  return s;
}

ContainmentReport monte_carlo_containment(const VehicleParams& params, const RnnController& rnn,
                                          const ReachCertificate& cert, const Eigen::Vector2d& d_max,
                                          int runs, int steps, std::uint64_t seed,
                                          const std::string& config_hash,
                                          const std::string& cert_config_hash) {
  if (config_hash != cert_config_hash) {
    throw Error(ErrorKind::StaleCertificate, "certificate config hash " + cert_config_hash +
                                                 " does not match current config " + config_hash);
  }
  if (runs < 0 || steps < 0) throw Error(ErrorKind::Parameter, "containment: runs and steps must be >= 0");
  ContainmentReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < runs; ++i) {
    int clamped = 0;
    const Scenario s = containment_scenario(params, d_max, steps, seed, i, &clamped);
    rep.clamped_samples += clamped;
    const Trajectory tr = simulate(s, rnn, params);
    bool violated = false;
    for (const MonitorRow& m : replay_monitor(tr, cert, d_max)) {
      ++rep.steps;
      const double margin = m.bound - std::abs(m.eyL);
      rep.min_margin = std::min(rep.min_margin, margin);
      rep.max_abs_eyL = std::max(rep.max_abs_eyL, std::abs(m.eyL));
      rep.max_bound = std::max(rep.max_bound, m.bound);
      if (margin < 0.0) violated = true;
      const double tol = 1e-9 * std::max(1.0, m.sigma_bar);
      if (m.sigma_bar < m.sigma - tol || m.sigma < m.V - tol) ++rep.dominance_failures;
    }
    rep.violations += violated ? 1 : 0;
    ++rep.runs;
  }
  if (rep.steps == 0) rep.min_margin = 0.0;
  return rep;
}

}  // namespace lkcert
