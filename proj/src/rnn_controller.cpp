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
#include "lkcert/rnn_controller.hpp"

#include <cmath>

#include "lkcert/errors.hpp"
#include "lkcert/io.hpp"

namespace lkcert {

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
    case Activation::Custom: return "custom";
  }
  return "custom";
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::Relu;
  if (name == "custom") return Activation::Custom;
  throw Error(ErrorKind::Format, "unknown activation \"" + name + "\"");
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> sector_bounds(Activation a, int n_phi) {
  if (a == Activation::Custom) {
    throw Error(ErrorKind::Parameter, "custom activation requires a user-supplied sector");
  }
  return {Eigen::VectorXd::Zero(n_phi), Eigen::VectorXd::Ones(n_phi)};
}

RnnController RnnController::zeros(int n_xi, int n_phi, Activation act) {
  RnnController r;
  r.A = Eigen::MatrixXd::Zero(n_xi, n_xi);
  r.B1 = Eigen::MatrixXd::Zero(n_xi, n_phi);
  r.B2 = Eigen::MatrixXd::Zero(n_xi, 2);
  r.C1 = Eigen::MatrixXd::Zero(1, n_xi);
  r.D11 = Eigen::MatrixXd::Zero(1, n_phi);
  r.D12 = Eigen::MatrixXd::Zero(1, 2);
  r.C2 = Eigen::MatrixXd::Zero(n_phi, n_xi);
  r.D22 = Eigen::MatrixXd::Zero(n_phi, 2);
  r.activation = act;
  if (act != Activation::Custom) {
    auto [al, be] = sector_bounds(act, n_phi);
    r.alpha = al;
    r.beta = be;
  }
  return r;
}

void RnnController::validate() const {
  const auto nx = A.rows();
  const auto nf = C2.rows();
  auto check = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::Shape, "RNN shape mismatch: " + what);
  };
  check(A.cols() == nx, "A must be square");
  check(B1.rows() == nx && B1.cols() == nf, "B1");
  check(B2.rows() == nx && B2.cols() == 2, "B2");
  check(C1.rows() == 1 && C1.cols() == nx, "C1");
  check(D11.rows() == 1 && D11.cols() == nf, "D11");
  check(D12.rows() == 1 && D12.cols() == 2, "D12");
  check(C2.cols() == nx, "C2");
  check(D22.rows() == nf && D22.cols() == 2, "D22");
  check(alpha.size() == nf && beta.size() == nf, "sector vectors");
  for (Eigen::Index i = 0; i < nf; ++i) {
    if (!(alpha(i) < beta(i))) {
      throw Error(ErrorKind::Parameter, "degenerate sector at neuron " + std::to_string(i));
    }
  }
  if (activation == Activation::Custom && !custom) {
    throw Error(ErrorKind::Parameter, "custom activation has no callable");
  }
}

double RnnController::phi(double p) const {
  switch (activation) {
    case Activation::Tanh: return std::tanh(p);
    case Activation::Relu: return p > 0.0 ? p : 0.0;
    case Activation::Custom: return custom(p);
  }
  return 0.0;
}

double RnnController::phi_prime(double p) const {
  switch (activation) {
    case Activation::Tanh: {
      const double t = std::tanh(p);
      return 1.0 - t * t;
    }
    case Activation::Relu: return p > 0.0 ? 1.0 : 0.0;
    case Activation::Custom: {
      const double h = 1e-6;
      return (custom(p + h) - custom(p - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

Eigen::VectorXd RnnController::activate(const Eigen::VectorXd& p) const {
  Eigen::VectorXd q(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) q(i) = phi(p(i));
  return q;
}

TransformedRnn loop_transform(const RnnController& rnn) {
  rnn.validate();
  TransformedRnn t;
  t.K1 = 0.5 * (rnn.alpha + rnn.beta);
  t.K2 = 0.5 * (rnn.beta - rnn.alpha);
  const auto K1 = t.K1.asDiagonal();
  const auto K2 = t.K2.asDiagonal();
  t.At = rnn.A + rnn.B1 * K1 * rnn.C2;
  t.B1t = rnn.B1 * K2;
  t.B2t = rnn.B2 + rnn.B1 * K1 * rnn.D22;
  t.C1t = rnn.C1 + rnn.D11 * K1 * rnn.C2;
  t.D11t = rnn.D11 * K2;
  t.D12t = rnn.D12 + rnn.D11 * K1 * rnn.D22;
  t.C2 = rnn.C2;
  t.D22 = rnn.D22;
  t.base = rnn;
  return t;
}

Eigen::VectorXd transformed_activation(const TransformedRnn& t, const Eigen::VectorXd& p) {
  Eigen::VectorXd q(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    q(i) = (t.base.phi(p(i)) - t.K1(i) * p(i)) / t.K2(i);
  }
  return q;
}

RnnStep rnn_step(const RnnController& rnn, const Eigen::VectorXd& xi, const Eigen::Vector2d& y) {
  RnnStep s;
  s.p = rnn.C2 * xi + rnn.D22 * y;
  s.q = rnn.activate(s.p);
  s.u = (rnn.C1 * xi + rnn.D11 * s.q + rnn.D12 * y)(0);
  s.xi_next = rnn.A * xi + rnn.B1 * s.q + rnn.B2 * y;
  return s;
}

RnnStep rnn_step(const TransformedRnn& t, const Eigen::VectorXd& xi, const Eigen::Vector2d& y) {
  RnnStep s;
  s.p = t.C2 * xi + t.D22 * y;
  s.q = transformed_activation(t, s.p);
  s.u = (t.C1t * xi + t.D11t * s.q + t.D12t * y)(0);
  s.xi_next = t.At * xi + t.B1t * s.q + t.B2t * y;
  return s;
}

std::string weights_to_json(const RnnController& rnn) {
  io::json j;
  j["activation"] = activation_name(rnn.activation);
  j["A"] = io::matrix_to_json(rnn.A);
  j["B1"] = io::matrix_to_json(rnn.B1);
  j["B2"] = io::matrix_to_json(rnn.B2);
  j["C1"] = io::matrix_to_json(rnn.C1);
  j["D11"] = io::matrix_to_json(rnn.D11);
  j["D12"] = io::matrix_to_json(rnn.D12);
  j["C2"] = io::matrix_to_json(rnn.C2);
  j["D22"] = io::matrix_to_json(rnn.D22);
  j["alpha"] = io::vector_to_json(rnn.alpha);
  j["beta"] = io::vector_to_json(rnn.beta);
  return j.dump(1) + "\n";
}

RnnController weights_from_json(const std::string& text) {
  io::json j;
  try {
    j = io::json::parse(text);
  } catch (const io::json::parse_error& e) {
    throw Error(ErrorKind::Format, std::string("weights file does not parse: ") + e.what());
  }
  if (!j.contains("activation") || !j["activation"].is_string()) {
    throw Error(ErrorKind::Format, "missing \"activation\"");
  }
  RnnController r;
  r.activation = activation_from_name(j["activation"].get<std::string>());
  r.A = io::matrix_from_json(j, "A");
  r.B1 = io::matrix_from_json(j, "B1");
  r.B2 = io::matrix_from_json(j, "B2");
  r.C1 = io::matrix_from_json(j, "C1");
  r.D11 = io::matrix_from_json(j, "D11");
  r.D12 = io::matrix_from_json(j, "D12");
  r.C2 = io::matrix_from_json(j, "C2");
  r.D22 = io::matrix_from_json(j, "D22");
  const int nf = static_cast<int>(r.C2.rows());
  if (j.contains("alpha") || j.contains("beta")) {
    r.alpha = io::vector_from_json(j, "alpha");
    r.beta = io::vector_from_json(j, "beta");
  } else {
    auto [al, be] = sector_bounds(r.activation, nf);
    r.alpha = al;
    r.beta = be;
  }
  if (r.activation == Activation::Custom) {
    // The callable cannot be serialized; the caller attaches it.
    if (r.alpha.size() != nf) throw Error(ErrorKind::Format, "custom activation needs alpha/beta");
    return r;
  }
  r.validate();
  return r;
}

void save_weights(const RnnController& rnn, const std::string& path) {
  io::write_file(path, weights_to_json(rnn));
}

RnnController load_weights(const std::string& path) {
  return weights_from_json(io::read_file(path));
}

}  // namespace lkcert
