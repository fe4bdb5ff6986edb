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
#include "lkcert/config.hpp"

#include <filesystem>
#include <set>

#include "lkcert/errors.hpp"
#include "lkcert/io.hpp"

namespace lkcert {

using io::json;

CertifyOptions CertifySection::options() const {
  CertifyOptions o;
  o.margin = margin;
  o.main_margin = main_margin;
  return o;
}

namespace {

void only_keys(const json& j, const std::string& section, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "config: section \"" + section + "\" must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw Error(ErrorKind::Config, "config: unknown key \"" + section + "." + it.key() + "\"");
    }
  }
}

template <class T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json vehicle_json(const VehicleParams& v) {
  return json{{"T", v.T},
              {"L", v.L},
              {"eps", v.eps},
              {"tau_psi", v.tau_psi},
              {"l_f", v.l_f},
              {"l_r", v.l_r},
              {"V_nom_kmh", v.V_nom / kKmhToMs},
              {"dV_max_kmh", v.dV_max / kKmhToMs}};
}

json rnn_json(const RnnArch& a) {
  return json{{"n_xi", a.n_xi}, {"n_phi", a.n_phi}, {"activation", activation_name(a.activation)}};
}

json certify_json(const CertifySection& c) {
  return json{{"rho", c.rho},
              {"margin", c.margin},
              {"main_margin", c.main_margin},
              {"mu_d", c.mu_d},
              {"mu_phi", c.mu_phi},
              {"mu_grid", {{"lo", c.mu_grid_lo}, {"hi", c.mu_grid_hi}, {"points", c.mu_grid_points}}},
              {"d_max", {c.d_max(0), c.d_max(1)}}};
}

}  // namespace

void RunConfig::validate() const {
  try {
    vehicle.validate();
    expert.validate();
    train.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, std::string("config: ") + e.what());
  }
  if (rnn.n_xi < 1 || rnn.n_phi < 1) throw Error(ErrorKind::Config, "config: rnn sizes must be >= 1");
  if (!(certify.rho > 0.0 && certify.rho <= 1.0)) throw Error(ErrorKind::Config, "config: certify.rho must lie in (0, 1]");
  if (!(certify.margin >= 0.0) || !(certify.main_margin >= 0.0)) {
    throw Error(ErrorKind::Config, "config: certify margins must be >= 0");
  }
  if (!(certify.mu_d > 0.0) || !(certify.mu_phi > 0.0)) {
    throw Error(ErrorKind::Config, "config: certify.mu_d and certify.mu_phi must be > 0");
  }
  if (!(certify.mu_grid_lo > 0.0 && certify.mu_grid_hi >= certify.mu_grid_lo && certify.mu_grid_points >= 1)) {
    throw Error(ErrorKind::Config, "config: bad certify.mu_grid");
  }
  if ((certify.d_max.array() < 0.0).any()) throw Error(ErrorKind::Config, "config: certify.d_max must be >= 0");
  if (datagen.episodes < 1 || datagen.steps < 1) throw Error(ErrorKind::Config, "config: datagen sizes must be >= 1");
  if (train.truncation > datagen.steps) {
    throw Error(ErrorKind::Config, "config: train.truncation exceeds datagen.steps");
  }
  if (simulate.runs < 0 || simulate.steps < 1) throw Error(ErrorKind::Config, "config: bad simulate section");
  if (train_attempts < 1) throw Error(ErrorKind::Config, "config: train.attempts must be >= 1");
}

std::string RunConfig::hash() const {
  const json j{{"vehicle", vehicle_json(vehicle)}, {"rnn", rnn_json(rnn)}, {"certify", certify_json(certify)}};
  return io::hex64(io::fnv1a64(j.dump()));
}

std::string RunConfig::resolve(const std::string& path) const {
  if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
  return io::join_path(base_dir.empty() ? "." : base_dir, path);
}

RunConfig config_from_json(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config: parse error: ") + e.what());
  }
  RunConfig c;
  c.base_dir = base_dir;
  try {
    only_keys(j, "", {"vehicle", "rnn", "certify", "expert", "datagen", "train", "simulate", "scenarios",
                      "output_dir"});
    if (j.contains("vehicle")) {
      const json& v = j.at("vehicle");
      only_keys(v, "vehicle", {"T", "L", "eps", "tau_psi", "l_f", "l_r", "V_nom_kmh", "dV_max_kmh"});
      get_if(v, "T", c.vehicle.T);
      get_if(v, "L", c.vehicle.L);
      get_if(v, "eps", c.vehicle.eps);
      get_if(v, "tau_psi", c.vehicle.tau_psi);
      get_if(v, "l_f", c.vehicle.l_f);
      get_if(v, "l_r", c.vehicle.l_r);
      if (v.contains("V_nom_kmh")) c.vehicle.V_nom = v.at("V_nom_kmh").get<double>() * kKmhToMs;
      if (v.contains("dV_max_kmh")) c.vehicle.dV_max = v.at("dV_max_kmh").get<double>() * kKmhToMs;
    }
    if (j.contains("rnn")) {
      const json& r = j.at("rnn");
      only_keys(r, "rnn", {"n_xi", "n_phi", "activation"});
      get_if(r, "n_xi", c.rnn.n_xi);
      get_if(r, "n_phi", c.rnn.n_phi);
      if (r.contains("activation")) c.rnn.activation = activation_from_name(r.at("activation").get<std::string>());
    }
    if (j.contains("certify")) {
      const json& r = j.at("certify");
      only_keys(r, "certify", {"rho", "margin", "main_margin", "mu_d", "mu_phi", "mu_grid", "d_max"});
      get_if(r, "rho", c.certify.rho);
      get_if(r, "margin", c.certify.margin);
      get_if(r, "main_margin", c.certify.main_margin);
      get_if(r, "mu_d", c.certify.mu_d);
      get_if(r, "mu_phi", c.certify.mu_phi);
      if (r.contains("mu_grid")) {
        const json& g = r.at("mu_grid");
        only_keys(g, "certify.mu_grid", {"lo", "hi", "points"});
        get_if(g, "lo", c.certify.mu_grid_lo);
        get_if(g, "hi", c.certify.mu_grid_hi);
        get_if(g, "points", c.certify.mu_grid_points);
      }
      if (r.contains("d_max")) c.certify.d_max = io::vector_from_json(r, "d_max", 2);
    }
    if (j.contains("expert")) {
      const json& r = j.at("expert");
      only_keys(r, "expert", {"Q", "R", "N"});
      if (r.contains("Q")) c.expert.Q_diag = io::vector_from_json(r, "Q", 4);
      get_if(r, "R", c.expert.R);
      get_if(r, "N", c.expert.N);
    }
    if (j.contains("datagen")) {
      const json& r = j.at("datagen");
      only_keys(r, "datagen", {"episodes", "steps", "x0_scale", "seed"});
      get_if(r, "episodes", c.datagen.episodes);
      get_if(r, "steps", c.datagen.steps);
      if (r.contains("x0_scale")) c.datagen.x0_scale = io::vector_from_json(r, "x0_scale", 4);
      get_if(r, "seed", c.datagen.seed);
    }
    if (j.contains("train")) {
      const json& r = j.at("train");
      only_keys(r, "train", {"lr", "epochs", "batch_size", "truncation", "seed", "init", "init_scale",
                             "observer_qn", "observer_rn", "attempts"});
      get_if(r, "lr", c.train.lr);
      get_if(r, "epochs", c.train.epochs);
      get_if(r, "batch_size", c.train.batch_size);
      get_if(r, "truncation", c.train.truncation);
      get_if(r, "seed", c.train.seed);
      get_if(r, "init", c.train.init);
      get_if(r, "init_scale", c.train.init_scale);
      get_if(r, "observer_qn", c.train.observer_qn);
      get_if(r, "observer_rn", c.train.observer_rn);
      get_if(r, "attempts", c.train_attempts);
    }
    if (j.contains("simulate")) {
      const json& r = j.at("simulate");
      only_keys(r, "simulate", {"runs", "steps", "seed"});
      get_if(r, "runs", c.simulate.runs);
      get_if(r, "steps", c.simulate.steps);
      get_if(r, "seed", c.simulate.seed);
    }
    if (j.contains("scenarios")) c.scenarios = j.at("scenarios").get<std::vector<std::string>>();
    get_if(j, "output_dir", c.output_dir);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    throw Error(ErrorKind::Config, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error&) {
    throw Error(ErrorKind::Config, "config: cannot read \"" + path + "\"");
  }
  const auto parent = std::filesystem::path(path).parent_path().string();
  return config_from_json(text, parent.empty() ? "." : parent);
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["vehicle"] = vehicle_json(c.vehicle);
  j["rnn"] = rnn_json(c.rnn);
  j["certify"] = certify_json(c.certify);
  j["expert"] = {{"Q", {c.expert.Q_diag(0), c.expert.Q_diag(1), c.expert.Q_diag(2), c.expert.Q_diag(3)}},
                 {"R", c.expert.R},
                 {"N", c.expert.N}};
  j["datagen"] = {{"episodes", c.datagen.episodes},
                  {"steps", c.datagen.steps},
                  {"x0_scale", {c.datagen.x0_scale(0), c.datagen.x0_scale(1), c.datagen.x0_scale(2),
                                c.datagen.x0_scale(3)}},
                  {"seed", c.datagen.seed}};
  j["train"] = {{"lr", c.train.lr},
                {"epochs", c.train.epochs},
                {"batch_size", c.train.batch_size},
                {"truncation", c.train.truncation},
                {"seed", c.train.seed},
                {"init", c.train.init},
                {"init_scale", c.train.init_scale},
                {"observer_qn", c.train.observer_qn},
                {"observer_rn", c.train.observer_rn},
                {"attempts", c.train_attempts}};
  j["simulate"] = {{"runs", c.simulate.runs}, {"steps", c.simulate.steps}, {"seed", c.simulate.seed}};
  j["scenarios"] = c.scenarios;
  j["output_dir"] = c.output_dir;
  return j.dump(2);
}

}  // namespace lkcert
