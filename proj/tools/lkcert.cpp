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
// lkcert: datagen, train, verify, reach, simulate, monitor, report.
//
// Exit codes: 0 success, 1 other runtime failure, 2 configuration or input
// error (including stale certificates), 3 infeasible, 4 solver failure,
// 5 containment violation.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lkcert/certify.hpp"
#include "lkcert/closed_loop.hpp"
#include "lkcert/config.hpp"
#include "lkcert/datagen.hpp"
#include "lkcert/errors.hpp"
#include "lkcert/io.hpp"
#include "lkcert/reach_monitor.hpp"
#include "lkcert/report.hpp"
#include "lkcert/rnn_controller.hpp"
#include "lkcert/simulator.hpp"
#include "lkcert/svg_plot.hpp"
#include "lkcert/train.hpp"

namespace {

using namespace lkcert;

enum Exit : int {
  kOk = 0,
  kRuntime = 1,
  kConfig = 2,
  kInfeasible = 3,
  kSolver = 4,
  kViolation = 5,
};

struct Args {
  std::string config;
  std::string weights;
  std::string cert;
  std::string scenario;
  std::string data;
  std::string trajectory;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> rho, mu_d, mu_phi;
  std::optional<int> runs;
  bool max_rho = false;
  bool mu_grid = false;
  bool certified = false;
};

struct Context {
  RunConfig cfg;
  std::string out;

  std::string path(const std::string& name) const { return io::join_path(out, name); }
};

Context load(const Args& a) {
  Context c;
  c.cfg = load_config(a.config);
  if (a.rho) c.cfg.certify.rho = *a.rho;
  if (a.mu_d) c.cfg.certify.mu_d = *a.mu_d;
  if (a.mu_phi) c.cfg.certify.mu_phi = *a.mu_phi;
  if (a.runs) c.cfg.simulate.runs = *a.runs;
  try {
    c.cfg.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
  c.out = a.out.empty() ? c.cfg.output_dir : a.out;
  io::ensure_dir(c.out);
  return c;
}

std::string weights_hash(const RnnController& rnn) { return io::hex64(io::fnv1a64(weights_to_json(rnn))); }

std::string num(double v) { return io::fmt_double(v); }

void write_csv(const Context& c, const std::string& name, io::CsvTable t) {
  t.comments.insert(t.comments.begin(), "config_hash=" + c.cfg.hash());
  io::write_file(c.path(name), io::csv_to_string(t));
}

RnnController load_rnn(const Context& c, const Args& a) {
  const std::string p = a.weights.empty() ? c.path("weights.json") : a.weights;
  if (!std::filesystem::exists(p)) throw Error(ErrorKind::Config, "weights file not found: \"" + p + "\"");
  return load_weights(p);
}

AugmentedSystem augmented(const Context& c, const RnnController& rnn) {
  return assemble(build_uncertain_plant(c.cfg.vehicle), loop_transform(rnn));
}

LoadedCertificate load_cert(const Args& a, const Context& c, const std::string& fallback) {
  const std::string p = a.cert.empty() ? c.path(fallback) : a.cert;
  if (!std::filesystem::exists(p)) throw Error(ErrorKind::Config, "certificate not found: \"" + p + "\"");
  return certificate_from_json(io::read_file(p));
}

// Refuses certificates produced under a different config or for other weights.
void check_binding(const LoadedCertificate& lc, const Context& c, const std::string& wh) {
  if (lc.config_hash != c.cfg.hash()) {
    throw Error(ErrorKind::StaleCertificate, "stale certificate: config hash " + lc.config_hash +
                                                 " differs from current " + c.cfg.hash());
  }
  if (!wh.empty() && lc.weights_hash != wh) {
    throw Error(ErrorKind::StaleCertificate, "stale certificate: weights hash " + lc.weights_hash +
                                                 " differs from current " + wh);
  }
}

const ReachCertificate& require_reach(const LoadedCertificate& lc) {
  if (!lc.reach) throw Error(ErrorKind::Config, "a reach certificate is required (got \"" + lc.kind + "\")");
  return *lc.reach;
}

int status_exit(sdp::Status s) {
  switch (s) {
    case sdp::Status::Feasible:
    case sdp::Status::Optimal: return kOk;
    case sdp::Status::Infeasible: return kInfeasible;
    case sdp::Status::NumericalFailure: return kSolver;
  }
  return kSolver;
}

int count_out_of_band(const Trajectory& t, const VehicleParams& p) {
  int n = 0;
  for (const auto& r : t.steps) n += (r.Vx < p.v_min() - 1e-12 || r.Vx > p.v_max() + 1e-12) ? 1 : 0;
  return n;
}

// ---------------------------------------------------------------- commands

int cmd_datagen(const Args& a) {
  Context c = load(a);
  if (a.seed) c.cfg.datagen.seed = *a.seed;
  std::vector<std::string> rejected;
  const Dataset d = generate_dataset(c.cfg.vehicle, c.cfg.expert, c.cfg.datagen, &rejected);
  for (const auto& r : rejected) std::cerr << "warning: rejected " << r << "\n";
  io::CsvTable t = dataset_to_csv(d);
  t.comments.push_back("seed=" + std::to_string(c.cfg.datagen.seed));
  write_csv(c, "dataset.csv", t);
  std::cout << "episodes " << d.episodes.size() << " (rejected " << rejected.size() << ")\n";
  std::cout << "wrote " << c.path("dataset.csv") << "\n";
  return kOk;
}

int cmd_train(const Args& a) {
  Context c = load(a);
  if (a.seed) c.cfg.train.seed = *a.seed;
  const std::string dp = a.data.empty() ? c.path("dataset.csv") : a.data;
  if (!std::filesystem::exists(dp)) throw Error(ErrorKind::Config, "dataset not found: \"" + dp + "\"");
  const Dataset data = dataset_from_csv(io::csv_from_string(io::read_file(dp)));
  const UncertainPlant up = build_uncertain_plant(c.cfg.vehicle);
  const double rho = c.cfg.certify.rho;
  const CertifyOptions opts = c.cfg.certify.options();
  auto accept = [&](const RnnController& rnn) {
    const StabilityResult r = verify_stability(assemble(up, loop_transform(rnn)), rho, opts);
    std::cerr << "  verify at rho=" << num(rho) << ": " << sdp::status_name(r.status) << "\n";
    return r.status == sdp::Status::Feasible;
  };
  const CertifiedTraining ct = train_until_accepted(c.cfg.vehicle, c.cfg.expert, c.cfg.rnn, data, c.cfg.train,
                                                    c.cfg.train_attempts, accept);
  const TrainResult& tr = ct.result;
  save_weights(tr.rnn, c.path("weights.json"));
  write_csv(c, "loss.csv", loss_curve_to_csv(tr.curve));
  io::json s{{"config_hash", c.cfg.hash()},
             {"weights_hash", weights_hash(tr.rnn)},
             {"seed", ct.seed},
             {"attempts", ct.attempts},
             {"certified_at_rho", ct.certified ? io::json(rho) : io::json(nullptr)},
             {"initial_loss", tr.curve.empty() ? 0.0 : tr.curve.front().loss},
             {"final_loss", tr.curve.empty() ? 0.0 : tr.curve.back().loss},
             {"aborted", tr.aborted}};
  io::write_file(c.path("train.json"), s.dump(2) + "\n");
  if (!tr.curve.empty()) {
    std::cout << "loss " << num(tr.curve.front().loss) << " -> " << num(tr.curve.back().loss) << "\n";
  }
  std::cout << "seed " << ct.seed << " after " << ct.attempts << " attempt(s)\n";
  if (tr.aborted) std::cerr << "warning: training aborted: " << tr.message << "\n";
  if (!ct.certified) {
    std::cout << "not certified at rho=" << num(rho) << "\n";
    return kInfeasible;
  }
  std::cout << "certified at rho=" << num(rho) << "\n";
  return kOk;
}

int cmd_verify(const Args& a) {
  Context c = load(a);
  const RnnController rnn = load_rnn(c, a);
  const AugmentedSystem aug = augmented(c, rnn);
  const CertifyOptions opts = c.cfg.certify.options();
  if (a.max_rho) {
    const auto r = min_certifiable_rho(aug, 0.005, opts);
    if (!r) {
      std::cout << "no rho <= 1 certifies on the 0.005 grid\n";
      return kInfeasible;
    }
    std::cout << "smallest certifiable rho: " << num(*r) << "\n";
    return kOk;
  }
  const double rho = c.cfg.certify.rho;
  const StabilityResult r = verify_stability(aug, rho, opts);
  if (r.status == sdp::Status::Feasible) {
    std::cout << "Feasible\n";
    std::cout << "rho " << num(rho) << "\n";
    std::cout << "condP " << num(r.cert->condP) << "\n";
    io::write_file(c.path("certificate.json"), certificate_to_json(*r.cert, c.cfg.hash(), weights_hash(rnn)));
    std::cout << "wrote " << c.path("certificate.json") << "\n";
    return kOk;
  }
  if (r.status == sdp::Status::Infeasible) {
    std::cout << "Infeasible\n";
  } else {
    std::cout << "NumericalFailure: " << r.solution.message << "\n";
  }
  return status_exit(r.status);
}

int cmd_reach(const Args& a) {
  Context c = load(a);
  const RnnController rnn = load_rnn(c, a);
  const AugmentedSystem aug = augmented(c, rnn);
  const CertifyOptions opts = c.cfg.certify.options();
  const auto& cs = c.cfg.certify;
  ReachResult r;
  if (a.mu_grid) {
    MuGridResult g = mu_grid_search(aug, cs.rho, cs.mu_grid_lo, cs.mu_grid_hi, cs.mu_grid_points, opts);
    io::CsvTable t;
    t.header = {"mu_d", "mu_phi", "gamma"};
    for (std::size_t i = 0; i < g.tried.size(); ++i) t.rows.push_back({g.tried[i].first, g.tried[i].second, g.gammas[i]});
    write_csv(c, "mu_grid.csv", t);
    r = std::move(g.best);
  } else {
    r = compute_reach(aug, cs.rho, cs.mu_d, cs.mu_phi, opts);
  }
  if (!r.cert) {
    std::cout << sdp::status_name(r.status) << (r.solution.message.empty() ? "" : ": " + r.solution.message) << "\n";
    return r.status == sdp::Status::Infeasible ? kInfeasible : kSolver;
  }
  const ReachCertificate& rc = *r.cert;
  std::cout << "Optimal\n";
  std::cout << "rho " << num(rc.stab.rho) << " mu_d " << num(rc.mu_d) << " mu_phi " << num(rc.mu_phi) << "\n";
  std::cout << "gamma " << num(rc.gamma) << "\n";
  std::cout << "P_eyL " << num(rc.P_eyL) << "\n";
  io::write_file(c.path("reach_certificate.json"), certificate_to_json(rc, c.cfg.hash(), weights_hash(rnn)));
  std::cout << "wrote " << c.path("reach_certificate.json") << "\n";
  return kOk;
}

Panel trajectory_panel(const Trajectory& t, const VehicleParams& p, const std::vector<MonitorRow>* rows) {
  Panel e{"lateral offset at look-ahead", "t [s]", "e_yL [m]", {}};
  Series s{"e_yL", {}, {}, "#1f77b4", false};
  for (const auto& r : t.steps) {
    s.x.push_back(r.k * p.T);
    s.y.push_back(r.e_yL());
  }
  e.series.push_back(s);
  if (rows) {
    Series up{"+bound", {}, {}, "#d62728", true}, lo{"-bound", {}, {}, "#d62728", true};
    for (const auto& m : *rows) {
      up.x.push_back(m.k * p.T);
      up.y.push_back(m.bound);
      lo.x.push_back(m.k * p.T);
      lo.y.push_back(-m.bound);
    }
    e.series.push_back(up);
    e.series.push_back(lo);
  }
  return e;
}

std::vector<Panel> road_panels(const std::vector<const StepRecord*>& steps, const VehicleParams& p) {
  Panel v{"longitudinal speed", "t [s]", "V_x [km/h]", {}};
  Panel k{"road curvature (synthetic)", "t [s]", "kappa [1/m]", {}};
  Series sv{"V_x", {}, {}, "#2ca02c", false}, sk{"kappa", {}, {}, "#9467bd", false};
  for (const StepRecord* r : steps) {
    sv.x.push_back(r->k * p.T);
    sv.y.push_back(r->Vx / kKmhToMs);
    sk.x.push_back(r->k * p.T);
    sk.y.push_back(r->kappa);
  }
  v.series.push_back(sv);
  k.series.push_back(sk);
  return {v, k};
}

std::vector<const StepRecord*> step_ptrs(const Trajectory& t) {
  std::vector<const StepRecord*> v;
  for (const auto& r : t.steps) v.push_back(&r);
  return v;
}

int cmd_simulate(const Args& a) {
  Context c = load(a);
  if (a.seed) c.cfg.simulate.seed = *a.seed;
  const RnnController rnn = load_rnn(c, a);
  std::optional<ReachCertificate> reach;
  if (a.certified || !a.cert.empty()) {
    const LoadedCertificate lc = load_cert(a, c, "reach_certificate.json");
    if (a.certified) check_binding(lc, c, weights_hash(rnn));
    reach = require_reach(lc);
  }
  std::vector<std::string> paths;
  if (!a.scenario.empty()) paths.push_back(a.scenario);
  else for (const auto& s : c.cfg.scenarios) paths.push_back(c.cfg.resolve(s));
  if (paths.empty()) throw Error(ErrorKind::Config, "no scenario given (--scenario or config \"scenarios\")");
  for (const auto& p : paths) {
    if (!std::filesystem::exists(p)) throw Error(ErrorKind::Config, "scenario not found: \"" + p + "\"");
    Scenario s = scenario_from_json(c.cfg.vehicle, io::read_file(p));
    if (a.seed) s.seed = run_seed(*a.seed, io::fnv1a64(s.name));
    if (a.certified) {
      const int n = certify_consistent(c.cfg.vehicle, s);
      if (n > 0) std::cerr << "warning: " << n << " speed samples clamped into the certified band\n";
    }
    const Trajectory t = simulate(s, rnn, c.cfg.vehicle);
    const int oob = count_out_of_band(t, c.cfg.vehicle);
    if (oob > 0) {
      std::cerr << "warning: scenario \"" << s.name << "\" has " << oob
                << " samples outside the certified speed band; containment is not claimed\n";
    }
    write_csv(c, "trajectory_" + s.name + ".csv", trajectory_to_csv(t));
    std::vector<MonitorRow> rows;
    if (reach) rows = replay_monitor(t, *reach, c.cfg.certify.d_max);
    std::vector<Panel> panels{trajectory_panel(t, c.cfg.vehicle, reach ? &rows : nullptr)};
    for (auto& q : road_panels(step_ptrs(t), c.cfg.vehicle)) panels.push_back(std::move(q));
    io::write_file(c.path("trajectory_" + s.name + ".svg"), render_svg(panels));
    std::cout << "scenario " << s.name << ": " << t.steps.size() << " steps, wrote "
              << c.path("trajectory_" + s.name + ".csv") << "\n";
  }
  return kOk;
}

int cmd_monitor(const Args& a) {
  Context c = load(a);
  if (a.trajectory.empty()) throw Error(ErrorKind::Config, "monitor needs --trajectory");
  if (!std::filesystem::exists(a.trajectory)) {
    throw Error(ErrorKind::Config, "trajectory not found: \"" + a.trajectory + "\"");
  }
  const io::CsvTable table = io::csv_from_string(io::read_file(a.trajectory));
  const Trajectory t = trajectory_from_csv(table);
  const LoadedCertificate lc = load_cert(a, c, "reach_certificate.json");
  std::string wh;
  if (!a.weights.empty()) wh = weights_hash(load_weights(a.weights));
  else if (!t.controller_hash.empty()) wh = t.controller_hash;
  check_binding(lc, c, wh);
  const ReachCertificate& rc = require_reach(lc);
  const int oob = count_out_of_band(t, c.cfg.vehicle);
  if (oob > 0) {
    std::cerr << "warning: " << oob
              << " samples lie outside the certified speed band; the bound is not guaranteed there\n";
  }
  const std::vector<MonitorRow> rows = replay_monitor(t, rc, c.cfg.certify.d_max);
  io::CsvTable out;
  out.header = {"k", "sigma", "sigma_bar", "bound", "actual_eyL"};
  int first = -1, violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (const auto& m : rows) {
    out.rows.push_back({static_cast<double>(m.k), m.sigma, m.sigma_bar, m.bound, m.eyL});
    const double margin = m.bound - std::abs(m.eyL);
    min_margin = std::min(min_margin, margin);
    if (margin < 0.0) {
      ++violations;
      if (first < 0) first = m.k;
    }
  }
  write_csv(c, "monitor.csv", out);
  std::cout << "steps " << rows.size() << " min margin " << num(rows.empty() ? 0.0 : min_margin) << "\n";
  if (violations > 0) {
    std::cout << "VIOLATION: " << violations << " step(s) with |e_yL| > bound, first at k=" << first << "\n";
    return kViolation;
  }
  std::cout << "contained\n";
  return kOk;
}

int cmd_report(const Args& a) {
  Context c = load(a);
  if (a.seed) c.cfg.simulate.seed = *a.seed;
  const RnnController rnn = load_rnn(c, a);
  const LoadedCertificate lc = load_cert(a, c, "reach_certificate.json");
  check_binding(lc, c, weights_hash(rnn));
  const ReachCertificate& rc = require_reach(lc);
  const auto& vp = c.cfg.vehicle;
  const auto& sim = c.cfg.simulate;

  const ContainmentReport mc = monte_carlo_containment(vp, rnn, rc, c.cfg.certify.d_max, sim.runs, sim.steps,
                                                       sim.seed, c.cfg.hash(), lc.config_hash);
  const Scenario example = containment_scenario(vp, c.cfg.certify.d_max, sim.steps, sim.seed, 0);
  const Trajectory et = simulate(example, rnn, vp);
  const std::vector<MonitorRow> erows = replay_monitor(et, rc, c.cfg.certify.d_max);
  write_csv(c, "containment.csv", containment_to_csv(et, erows, vp));

  // Held-out draws from the training distribution: a separate seed stream.
  const std::uint64_t imit_seed = run_seed(c.cfg.datagen.seed, 0x1000000ULL);
  const ImitationSummary im = compare_imitation(vp, c.cfg.expert, rnn, c.cfg.datagen, 10, imit_seed);
  write_csv(c, "imitation.csv", imitation_to_csv(im.runs.front(), vp));

  io::CsvTable summary;
  summary.header = {"rho", "gamma", "P_eyL", "runs", "steps", "violations", "dominance_failures", "min_margin",
                    "max_abs_eyL", "max_bound", "clamped_samples", "rms_expert", "rms_rnn", "rms_ratio"};
  summary.rows.push_back({rc.stab.rho, rc.gamma, rc.P_eyL, static_cast<double>(mc.runs),
                          static_cast<double>(mc.steps), static_cast<double>(mc.violations),
                          static_cast<double>(mc.dominance_failures), mc.min_margin, mc.max_abs_eyL, mc.max_bound,
                          static_cast<double>(mc.clamped_samples), im.rms_expert, im.rms_rnn, im.ratio()});
  write_csv(c, "report.csv", summary);

  const ImitationRun& ir = im.runs.front();
  Panel pa{"imitation: e_yL of expert and RNN (training distribution, held out)", "t [s]", "e_yL [m]", {}};
  Series se{"expert", {}, {}, "#ff7f0e", true}, sr{"RNN", {}, {}, "#1f77b4", false};
  for (std::size_t k = 0; k < ir.rnn.steps.size() && k < ir.expert.x.size(); ++k) {
    se.x.push_back(static_cast<double>(k) * vp.T);
    se.y.push_back(ir.expert.x[k](0));
    sr.x.push_back(static_cast<double>(k) * vp.T);
    sr.y.push_back(ir.rnn.steps[k].x(0));
  }
  pa.series = {se, sr};
  std::vector<Panel> panels{pa};
  for (auto& q : road_panels(step_ptrs(ir.rnn), vp)) panels.push_back(std::move(q));
  Panel pc = trajectory_panel(et, vp, &erows);
  pc.title = "containment: e_yL and the monitor bound (held-out road, bounded disturbance)";
  panels.push_back(pc);
  for (auto& q : road_panels(step_ptrs(et), vp)) panels.push_back(std::move(q));
  io::write_file(c.path("report.svg"), render_svg(panels));

  std::cout << "containment: runs " << mc.runs << " violations " << mc.violations << " dominance failures "
            << mc.dominance_failures << " min margin " << num(mc.min_margin) << "\n";
  std::cout << "imitation: rms expert " << num(im.rms_expert) << " rms rnn " << num(im.rms_rnn) << " ratio "
            << num(im.ratio()) << "\n";
  std::cout << "wrote " << c.path("report.csv") << " and " << c.path("report.svg") << "\n";
  return (mc.violations > 0 || mc.dominance_failures > 0) ? kViolation : kOk;
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Config:
    case ErrorKind::StaleCertificate:
    case ErrorKind::Format:
    case ErrorKind::Shape:
    case ErrorKind::Parameter:
    case ErrorKind::Bound: return kConfig;
    case ErrorKind::Certificate: return kSolver;
    case ErrorKind::Divergence: return kRuntime;
  }
  return kRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certification toolkit for an RNN lane-keeping controller"};
  app.require_subcommand(1);
  Args a;

  auto common = [&a](CLI::App* s) {
    s->add_option("--config", a.config, "run configuration (JSON)")->required();
    s->add_option("--out", a.out, "output directory (default: config output_dir)");
  };
  auto* datagen = app.add_subcommand("datagen", "generate expert demonstrations");
  common(datagen);
  datagen->add_option("--seed", a.seed, "dataset seed");

  auto* train_cmd = app.add_subcommand("train", "behavior-clone the RNN and reseed until it certifies");
  common(train_cmd);
  train_cmd->add_option("--data", a.data, "dataset CSV (default: <out>/dataset.csv)");
  train_cmd->add_option("--seed", a.seed, "first training seed");
  train_cmd->add_option("--rho", a.rho, "decay rate used for acceptance");

  auto* verify = app.add_subcommand("verify", "robust stability certificate");
  common(verify);
  verify->add_option("--weights", a.weights, "weights JSON (default: <out>/weights.json)");
  verify->add_option("--rho", a.rho, "decay rate");
  verify->add_flag("--max-rho", a.max_rho, "search the tightest certifiable rho on a 0.005 grid");

  auto* reach = app.add_subcommand("reach", "reachable-set certificate (min gamma)");
  common(reach);
  reach->add_option("--weights", a.weights, "weights JSON (default: <out>/weights.json)");
  reach->add_option("--rho", a.rho, "decay rate");
  reach->add_option("--mu-d", a.mu_d, "disturbance weight");
  reach->add_option("--mu-phi", a.mu_phi, "road-input weight");
  reach->add_flag("--mu-grid", a.mu_grid, "search the config mu grid and keep the smallest gamma");

  auto* simulate_cmd = app.add_subcommand("simulate", "closed-loop simulation of scenarios");
  common(simulate_cmd);
  simulate_cmd->add_option("--weights", a.weights, "weights JSON (default: <out>/weights.json)");
  simulate_cmd->add_option("--scenario", a.scenario, "scenario JSON (default: config scenarios)");
  simulate_cmd->add_option("--cert", a.cert, "reach certificate, adds the bound to the plot");
  simulate_cmd->add_option("--seed", a.seed, "overrides scenario disturbance seeds");
  simulate_cmd->add_option("--rho", a.rho, "decay rate (must match the certificate)");
  simulate_cmd->add_option("--mu-d", a.mu_d, "disturbance weight (must match the certificate)");
  simulate_cmd->add_option("--mu-phi", a.mu_phi, "road-input weight (must match the certificate)");
  simulate_cmd->add_flag("--certified", a.certified, "refuse stale certificates and clamp speeds into the band");

  auto* monitor = app.add_subcommand("monitor", "replay a trajectory CSV against a reach certificate");
  common(monitor);
  monitor->add_option("--trajectory", a.trajectory, "trajectory CSV")->required();
  monitor->add_option("--cert", a.cert, "reach certificate (default: <out>/reach_certificate.json)");
  monitor->add_option("--weights", a.weights, "weights JSON; checked against the certificate");
  monitor->add_option("--rho", a.rho, "decay rate (must match the certificate)");
  monitor->add_option("--mu-d", a.mu_d, "disturbance weight (must match the certificate)");
  monitor->add_option("--mu-phi", a.mu_phi, "road-input weight (must match the certificate)");

  auto* report = app.add_subcommand("report", "Monte Carlo containment and imitation comparison");
  common(report);
  report->add_option("--weights", a.weights, "weights JSON (default: <out>/weights.json)");
  report->add_option("--cert", a.cert, "reach certificate (default: <out>/reach_certificate.json)");
  report->add_option("--runs", a.runs, "Monte Carlo runs");
  report->add_option("--seed", a.seed, "Monte Carlo seed");
  report->add_option("--rho", a.rho, "decay rate (must match the certificate)");
  report->add_option("--mu-d", a.mu_d, "disturbance weight (must match the certificate)");
  report->add_option("--mu-phi", a.mu_phi, "road-input weight (must match the certificate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*datagen) return cmd_datagen(a);
    if (*train_cmd) return cmd_train(a);
    if (*verify) return cmd_verify(a);
    if (*reach) return cmd_reach(a);
    if (*simulate_cmd) return cmd_simulate(a);
    if (*monitor) return cmd_monitor(a);
    if (*report) return cmd_report(a);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kRuntime;
}
