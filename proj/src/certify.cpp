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
#include "lkcert/certify.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "lkcert/errors.hpp"
#include "lkcert/io.hpp"

namespace lkcert {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int CertVariables::tri_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // Row i of the upper triangle starts after sum_{r<i} (n - r) entries.
  return i * n - i * (i - 1) / 2 + (j - i);
}

namespace {

std::vector<int> add_sym(sdp::Problem& prob, const std::string& name, int n) {
  std::vector<int> ids;
  ids.reserve(static_cast<std::size_t>(n * (n + 1) / 2));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      ids.push_back(prob.add_variable(name + "[" + std::to_string(i) + "," + std::to_string(j) + "]"));
  return ids;
}

MatrixXd sym_value(const std::vector<int>& ids, int n, const VectorXd& x) {
  MatrixXd S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      S(i, j) = x(ids[static_cast<std::size_t>(CertVariables::tri_index(n, i, j))]);
      S(j, i) = S(i, j);
    }
  return S;
}

// Adds coef * O' S O for a symmetric matrix variable S.
void add_congruence(sdp::Problem& prob, int block, const std::vector<int>& ids, int n,
                    const MatrixXd& O, double coef) {
  for (int i = 0; i < n; ++i) {
    const VectorXd ai = O.row(i).transpose();
    for (int j = i; j < n; ++j) {
      const VectorXd aj = O.row(j).transpose();
      MatrixXd F = (i == j) ? MatrixXd(ai * ai.transpose())
                            : MatrixXd(ai * aj.transpose() + aj * ai.transpose());
      if (F.cwiseAbs().maxCoeff() == 0.0) continue;
      prob.add_term(block, ids[static_cast<std::size_t>(CertVariables::tri_index(n, i, j))], coef * F);
    }
  }
}

// Adds coef * S directly (S embedded at offset).
void add_identity_embedding(sdp::Problem& prob, int block, const std::vector<int>& ids, int n,
                            int dim, int offset, double coef) {
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      MatrixXd F = MatrixXd::Zero(dim, dim);
      F(offset + i, offset + j) = coef;
      F(offset + j, offset + i) = coef;
      prob.add_term(block, ids[static_cast<std::size_t>(CertVariables::tri_index(n, i, j))], F);
    }
}

void check_rho(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw Error(ErrorKind::Parameter, "rho must lie in (0, 1]");
}

// Shared variables and the QC coupling constraints.
CertProblem base_problem(const AugmentedSystem& aug, const CertifyOptions& opts) {
  CertProblem cp;
  auto& prob = cp.prob;
  auto& v = cp.vars;
  const int nz = aug.dims.n_zeta;
  const int nf = aug.dims.n_phi;
  const int nw = aug.dims.n_w;
  v.n_zeta = nz;
  v.n_phi = nf;
  v.P = add_sym(prob, "P", nz);
  for (int i = 0; i < nf; ++i) v.Lambda.push_back(prob.add_variable("Lambda[" + std::to_string(i) + "]", sdp::Sign::NonNeg));
  v.M1 = add_sym(prob, "M1", 2 * nf);
  v.M2 = add_sym(prob, "M2", 2 * nw);
  v.lambda2 = prob.add_variable("lambda2");

  const int bP = prob.add_block("P_pos", nz, opts.margin);
  add_identity_embedding(prob, bP, v.P, nz, nz, 0, 1.0);

  const int b1 = prob.add_block("M1_coupling", 2 * nf, opts.margin);
  add_identity_embedding(prob, b1, v.M1, 2 * nf, 2 * nf, 0, 1.0);
  for (int i = 0; i < nf; ++i) {
    MatrixXd F = MatrixXd::Zero(2 * nf, 2 * nf);
    F(i, i) = -1.0;
    F(nf + i, nf + i) = 1.0;
    prob.add_term(b1, v.Lambda[static_cast<std::size_t>(i)], F);
  }

  const int b2 = prob.add_block("M2_coupling", 2 * nw, opts.margin);
  add_identity_embedding(prob, b2, v.M2, 2 * nw, 2 * nw, 0, 1.0);
  {
    MatrixXd F = MatrixXd::Zero(2 * nw, 2 * nw);
    F.topLeftCorner(nw, nw) = -MatrixXd::Identity(nw, nw);
    F.bottomRightCorner(nw, nw) = MatrixXd::Identity(nw, nw);
    prob.add_term(b2, v.lambda2, F);
  }

  const int bl = prob.add_block("lambda2_pos", 1, opts.margin);
  prob.add_term(bl, v.lambda2, MatrixXd::Identity(1, 1));
  return cp;
}

StabilityCertificate extract_stability(const CertVariables& v, const VectorXd& x, double rho) {
  StabilityCertificate c;
  c.rho = rho;
  c.P = sym_value(v.P, v.n_zeta, x);
  c.Lambda.resize(v.n_phi);
  for (int i = 0; i < v.n_phi; ++i) c.Lambda(i) = x(v.Lambda[static_cast<std::size_t>(i)]);
  c.M1 = sym_value(v.M1, 2 * v.n_phi, x);
  c.M2 = sym_value(v.M2, 6, x);
  c.lambda2 = x(v.lambda2);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(c.P, Eigen::EigenvaluesOnly);
  c.condP = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  return c;
}

}  // namespace

CertProblem build_stability_lmi(const AugmentedSystem& aug, double rho, const CertifyOptions& opts) {
  check_rho(rho);
  CertProblem cp = base_problem(aug, opts);
  const int nz = aug.dims.n_zeta;
  const int nf = aug.dims.n_phi;
  const int nw = aug.dims.n_w;
  const int n = nz + nf + nw;

  MatrixXd R0 = MatrixXd::Zero(nz, n);
  R0.leftCols(nz).setIdentity();
  MatrixXd R1(nz, n);
  R1 << aug.A, aug.B2, aug.B3;
  MatrixXd R2(2 * nf, n);
  R2 << aug.C1, aug.D12, MatrixXd::Zero(2 * nf, nw);
  MatrixXd R3(2 * nw, n);
  R3 << aug.C2, aug.D22, aug.D23;

  const int bm = cp.prob.add_block("decrease", n, opts.main_margin);
  add_congruence(cp.prob, bm, cp.vars.P, nz, R0, rho * rho);
  add_congruence(cp.prob, bm, cp.vars.P, nz, R1, -1.0);
  add_congruence(cp.prob, bm, cp.vars.M1, 2 * nf, R2, -1.0);
  add_congruence(cp.prob, bm, cp.vars.M2, 2 * nw, R3, -1.0);
  return cp;
}

CertProblem build_reach_sdp(const AugmentedSystem& aug, double rho, double mu_d, double mu_phi,
                            const CertifyOptions& opts) {
  check_rho(rho);
  if (!(mu_d > 0.0) || !(mu_phi > 0.0)) throw Error(ErrorKind::Parameter, "mu_d and mu_phi must be > 0");
  CertProblem cp = base_problem(aug, opts);
  const int nz = aug.dims.n_zeta;
  const int nf = aug.dims.n_phi;
  const int nw = aug.dims.n_w;
  const int ne = aug.dims.n_ext;
  const int nd = aug.dims.n_d;
  // Columns: zeta, phi, q, w, d.
  const int n = nz + ne + nf + nw + nd;
  const int cphi = nz, cq = nz + ne, cw = cq + nf, cd = cw + nw;

  MatrixXd R0 = MatrixXd::Zero(nz, n);
  R0.leftCols(nz).setIdentity();
  MatrixXd R1 = MatrixXd::Zero(nz, n);
  R1.leftCols(nz) = aug.A;
  R1.middleCols(cphi, ne) = aug.B1;
  R1.middleCols(cq, nf) = aug.B2;
  R1.middleCols(cw, nw) = aug.B3;
  R1.middleCols(cd, nd) = aug.B4;
  MatrixXd R2 = MatrixXd::Zero(2 * nf, n);
  R2.leftCols(nz) = aug.C1;
  R2.middleCols(cq, nf) = aug.D12;
  MatrixXd R3 = MatrixXd::Zero(2 * nw, n);
  R3.leftCols(nz) = aug.C2;
  R3.middleCols(cphi, ne) = aug.D21;
  R3.middleCols(cq, nf) = aug.D22;
  R3.middleCols(cw, nw) = aug.D23;
  R3.middleCols(cd, nd) = aug.D24;
  MatrixXd R4 = MatrixXd::Zero(nd, n);
  R4.middleCols(cd, nd).setIdentity();
  MatrixXd R5 = MatrixXd::Zero(ne, n);
  R5.middleCols(cphi, ne).setIdentity();

  const int bm = cp.prob.add_block("decrease", n, opts.main_margin);
  add_congruence(cp.prob, bm, cp.vars.P, nz, R0, rho * rho);
  add_congruence(cp.prob, bm, cp.vars.P, nz, R1, -1.0);
  add_congruence(cp.prob, bm, cp.vars.M1, 2 * nf, R2, -1.0);
  add_congruence(cp.prob, bm, cp.vars.M2, 2 * nw, R3, -1.0);
  cp.prob.add_constant(bm, mu_d * R4.transpose() * R4 + mu_phi * R5.transpose() * R5);

  // Schur block ordered (states 1..nz-1, state 0, gamma).
  cp.vars.gamma = cp.prob.add_variable("gamma");
  const int ns = nz + 1;
  const int bs = cp.prob.add_block("eyL_schur", ns, 0.0);
  auto pos = [nz](int s) { return s == 0 ? nz - 1 : s - 1; };
  for (int i = 0; i < nz; ++i)
    for (int j = i; j < nz; ++j) {
      MatrixXd F = MatrixXd::Zero(ns, ns);
      F(pos(i), pos(j)) = 1.0;
      F(pos(j), pos(i)) = 1.0;
      cp.prob.add_term(bs, cp.vars.P[static_cast<std::size_t>(CertVariables::tri_index(nz, i, j))], F);
    }
  MatrixXd F0 = MatrixXd::Zero(ns, ns);
  F0(nz - 1, nz) = 1.0;
  F0(nz, nz - 1) = 1.0;
  cp.prob.add_constant(bs, F0);
  MatrixXd Fg = MatrixXd::Zero(ns, ns);
  Fg(nz, nz) = 1.0;
  cp.prob.add_term(bs, cp.vars.gamma, Fg);
  cp.prob.set_objective(cp.vars.gamma, 1.0);
  return cp;
}

StabilityResult verify_stability(const AugmentedSystem& aug, double rho, const CertifyOptions& opts) {
  CertProblem cp = build_stability_lmi(aug, rho, opts);
  StabilityResult r;
  r.solution = sdp::solve(cp.prob, opts.sdp);
  r.status = r.solution.status;
  if (r.status == sdp::Status::Feasible || r.status == sdp::Status::Optimal) {
    r.cert = extract_stability(cp.vars, r.solution.x, rho);
  }
  return r;
}

namespace {

constexpr double kGammaBisectionTol = 1e-4;

// Smallest gamma cap for which the feasibility phase finds a verified point,
// by bisection. The feasibility solver stops at the first strictly feasible
// iterate, so it copes with thin feasible sets where the objective IPM stalls.
std::optional<VectorXd> bisect_gamma(CertProblem cp, const sdp::Options& sdp_opts) {
  cp.prob.objective = VectorXd();
  std::optional<VectorXd> best;
  sdp::Solution s = sdp::solve(cp.prob, sdp_opts);
  if (s.status != sdp::Status::Feasible) return best;
  best = s.x;
  double hi = s.x(cp.vars.gamma);
  double lo = 0.0;
  const int cap = cp.prob.add_block("gamma_cap", 1, 0.0);
  cp.prob.add_term(cap, cp.vars.gamma, -MatrixXd::Identity(1, 1));
  for (int it = 0; it < 40 && hi - lo > kGammaBisectionTol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    cp.prob.blocks[static_cast<std::size_t>(cap)].F0(0, 0) = mid;
    s = sdp::solve(cp.prob, sdp_opts);
    if (s.status == sdp::Status::Feasible) {
      best = s.x;
      hi = std::min(mid, s.x(cp.vars.gamma));
    } else {
      lo = mid;
    }
  }
  return best;
}

}  // namespace

ReachResult compute_reach(const AugmentedSystem& aug, double rho, double mu_d, double mu_phi,
                          const CertifyOptions& opts) {
  const CertProblem orig = build_reach_sdp(aug, rho, mu_d, mu_phi, opts);
  if (opts.reach_scales.empty()) throw Error(ErrorKind::Parameter, "reach_scales is empty");
  for (const double K : opts.reach_scales) {
    if (!(K > 0.0)) throw Error(ErrorKind::Parameter, "reach scale must be > 0");
  }
  auto scaled = [&](double K) {
    CertifyOptions so = opts;
    so.margin = opts.margin * K;
    so.main_margin = opts.main_margin * K;
    return build_reach_sdp(aug, rho, mu_d * K, mu_phi * K, so);
  };
  ReachResult r;
  // Maps a solution of the problem scaled by K back and verifies it on the
  // original data.
  auto accept = [&](const CertProblem& cp, const VectorXd& xs, double K, sdp::Solution sol) {
    VectorXd x = xs / K;
    x(cp.vars.gamma) = xs(cp.vars.gamma) * K;
    const sdp::VerifyReport rep = sdp::verify(orig.prob, x, opts.sdp.verify_tol);
    if (!rep.pass) return false;
    sol.x = x;
    sol.status = sdp::Status::Optimal;
    sol.objective = x(cp.vars.gamma);
    sol.min_eig.clear();
    for (std::size_t i = 0; i < orig.prob.blocks.size(); ++i) sol.min_eig.push_back(rep.blocks[i].min_eig);
    r.solution = std::move(sol);
    r.status = sdp::Status::Optimal;
    ReachCertificate c;
    c.stab = extract_stability(cp.vars, x, rho);
    c.mu_d = mu_d;
    c.mu_phi = mu_phi;
    c.gamma = x(cp.vars.gamma);
    c.P_eyL = extract_error_metric(c.stab.P);
    r.cert = c;
    return true;
  };

  for (const double K : opts.reach_scales) {
    const CertProblem cp = scaled(K);
    sdp::Solution sol = sdp::solve(cp.prob, opts.sdp);
    if (sol.status != sdp::Status::Optimal) {
      if (r.solution.message.empty() || sol.status == sdp::Status::Infeasible) r.solution = sol;
      r.status = sol.status;
      if (sol.status == sdp::Status::Infeasible) return r;
      continue;
    }
    const VectorXd xs = sol.x;
    if (accept(cp, xs, K, std::move(sol))) return r;
    r.status = sdp::Status::NumericalFailure;
    r.solution.message = "rescaled solution failed verification";
  }

  // The objective IPM failed on every scale without an infeasibility proof.
  for (const double K : opts.reach_scales) {
    const CertProblem cp = scaled(K);
    const std::optional<VectorXd> xs = bisect_gamma(cp, opts.sdp);
    if (!xs) continue;
    sdp::Solution sol;
    sol.message = "gamma by feasibility bisection";
    if (accept(cp, *xs, K, std::move(sol))) return r;
  }
  return r;
}

double extract_error_metric(const MatrixXd& P) {
  const auto n = P.rows();
  if (n < 1 || P.cols() != n) throw Error(ErrorKind::Certificate, "P must be square");
  Eigen::LLT<MatrixXd> llt(P);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::Certificate, "P is not positive definite");
  if (n == 1) return P(0, 0);
  const MatrixXd P22 = P.bottomRightCorner(n - 1, n - 1);
  const VectorXd P21 = P.col(0).tail(n - 1);
  const double s = P(0, 0) - P21.dot(P22.llt().solve(P21));
  if (!(s > 0.0)) throw Error(ErrorKind::Certificate, "Schur complement of P is not positive");
  return s;
}

std::optional<double> min_certifiable_rho(const AugmentedSystem& aug, double step,
                                          const CertifyOptions& opts) {
  const int top = static_cast<int>(std::lround(1.0 / step));
  auto ok = [&](int k) {
    const double rho = std::min(1.0, k * step);
    return verify_stability(aug, rho, opts).status == sdp::Status::Feasible;
  };
  if (!ok(top)) return std::nullopt;
  int lo = 0, hi = top;  // lo fails (or is rho = 0), hi passes
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (ok(mid)) hi = mid;
    else lo = mid;
  }
  return std::min(1.0, hi * step);
}

MuGridResult mu_grid_search(const AugmentedSystem& aug, double rho, double lo, double hi, int points,
                            const CertifyOptions& opts) {
  if (!(lo > 0.0 && hi >= lo && points >= 1)) throw Error(ErrorKind::Parameter, "bad mu grid");
  MuGridResult out;
  double best = std::numeric_limits<double>::infinity();
  auto at = [&](int i) {
    if (points == 1) return lo;
    return lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  };
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      const double md = at(i), mp = at(j);
      ReachResult r = compute_reach(aug, rho, md, mp, opts);
      out.tried.emplace_back(md, mp);
      out.gammas.push_back(r.cert ? r.cert->gamma : std::numeric_limits<double>::quiet_NaN());
      if (r.cert && r.cert->gamma < best) {
        best = r.cert->gamma;
        out.best = std::move(r);
      }
    }
  }
  return out;
}

namespace {

io::json stability_json(const StabilityCertificate& c) {
  io::json j;
  j["rho"] = c.rho;
  j["P"] = io::matrix_to_json(c.P);
  j["Lambda"] = io::vector_to_json(c.Lambda);
  j["M1"] = io::matrix_to_json(c.M1);
  j["M2"] = io::matrix_to_json(c.M2);
  j["lambda2"] = c.lambda2;
  j["condP"] = c.condP;
  return j;
}

StabilityCertificate stability_from(const io::json& j) {
  StabilityCertificate c;
  if (!j.contains("rho")) throw Error(ErrorKind::Format, "certificate missing \"rho\"");
  c.rho = j.at("rho").get<double>();
  c.P = io::matrix_from_json(j, "P");
  c.Lambda = io::vector_from_json(j, "Lambda");
  c.M1 = io::matrix_from_json(j, "M1");
  c.M2 = io::matrix_from_json(j, "M2");
  c.lambda2 = j.value("lambda2", 0.0);
  c.condP = j.value("condP", 0.0);
  return c;
}

}  // namespace

std::string certificate_to_json(const StabilityCertificate& c, const std::string& config_hash,
                                const std::string& weights_hash) {
  io::json j = stability_json(c);
  j["kind"] = "stability";
  j["config_hash"] = config_hash;
  j["weights_hash"] = weights_hash;
  return j.dump(1) + "\n";
}

std::string certificate_to_json(const ReachCertificate& c, const std::string& config_hash,
                                const std::string& weights_hash) {
  io::json j = stability_json(c.stab);
  j["kind"] = "reach";
  j["mu_d"] = c.mu_d;
  j["mu_phi"] = c.mu_phi;
  j["gamma"] = c.gamma;
  j["P_eyL"] = c.P_eyL;
  j["config_hash"] = config_hash;
  j["weights_hash"] = weights_hash;
  return j.dump(1) + "\n";
}

LoadedCertificate certificate_from_json(const std::string& text) {
  io::json j;
  try {
    j = io::json::parse(text);
  } catch (const io::json::parse_error& e) {
    throw Error(ErrorKind::Format, std::string("certificate does not parse: ") + e.what());
  }
  LoadedCertificate lc;
  lc.kind = j.value("kind", std::string());
  if (lc.kind != "stability" && lc.kind != "reach") throw Error(ErrorKind::Format, "unknown certificate kind");
  lc.config_hash = j.value("config_hash", std::string());
  lc.weights_hash = j.value("weights_hash", std::string());
  lc.stab = stability_from(j);
  if (lc.kind == "reach") {
    ReachCertificate rc;
    rc.stab = lc.stab;
    rc.mu_d = j.at("mu_d").get<double>();
    rc.mu_phi = j.at("mu_phi").get<double>();
    rc.gamma = j.at("gamma").get<double>();
    rc.P_eyL = j.at("P_eyL").get<double>();
    lc.reach = rc;
  }
  return lc;
}

}  // namespace lkcert
