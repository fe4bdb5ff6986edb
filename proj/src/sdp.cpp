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
// Primal-dual interior point for block-diagonal SDPs in the form
//
//   primal:  min <C, X>   s.t. <A_i, X> = b_i,  X >= 0
//   dual:    max b'y      s.t. Z = C - sum_i y_i A_i >= 0
//
// The user LMI F0 + sum x_i F_i >= margin I is the dual constraint with
// y = x, C = F0 - margin I, A_i = -F_i. Search directions are HKM with a
// Mehrotra predictor-corrector; the start point is infeasible.
#include "lkcert/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <sstream>

#include "lkcert/errors.hpp"

namespace lkcert::sdp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int Problem::add_variable(const std::string& name, Sign sign) {
  vars.push_back({name, sign});
  if (objective.size() > 0) {
    objective.conservativeResize(num_vars());
    objective(num_vars() - 1) = 0.0;
  }
  return num_vars() - 1;
}

int Problem::add_block(const std::string& name, int dim, double margin) {
  LmiBlock b;
  b.name = name;
  b.F0 = MatrixXd::Zero(dim, dim);
  b.margin = margin;
  blocks.push_back(std::move(b));
  return static_cast<int>(blocks.size()) - 1;
}

void Problem::add_term(int block, int var, const MatrixXd& F) {
  LmiBlock& b = blocks.at(static_cast<std::size_t>(block));
  if (F.rows() != b.dim() || F.cols() != b.dim()) {
    throw Error(ErrorKind::Shape, "term dimension mismatch in block " + b.name);
  }
  for (auto& t : b.terms) {
    if (t.var == var) {
      t.F += F;
      return;
    }
  }
  b.terms.push_back({var, F});
}

void Problem::add_constant(int block, const MatrixXd& F) {
  LmiBlock& b = blocks.at(static_cast<std::size_t>(block));
  if (F.rows() != b.dim() || F.cols() != b.dim()) {
    throw Error(ErrorKind::Shape, "constant dimension mismatch in block " + b.name);
  }
  b.F0 += F;
}

void Problem::set_objective(int var, double c) {
  if (objective.size() != num_vars()) {
    VectorXd o = VectorXd::Zero(num_vars());
    if (objective.size() > 0) o.head(objective.size()) = objective;
    objective = o;
  }
  objective(var) = c;
}

void Problem::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Parameter, "SDP: " + msg); };
  if (num_vars() > kMaxVariables) fail("more than " + std::to_string(kMaxVariables) + " variables");
  if (objective.size() != 0 && objective.size() != num_vars()) fail("objective length mismatch");
  std::vector<bool> used(vars.size(), false);
  for (const auto& b : blocks) {
    const int n = b.dim();
    if (n < 1 || b.F0.cols() != n) fail("block " + b.name + " is not square");
    if (n > kMaxBlockDim) fail("block " + b.name + " exceeds " + std::to_string(kMaxBlockDim));
    if (!(b.margin >= 0.0)) fail("block " + b.name + " has a negative margin");
    const double s0 = std::max(1.0, b.F0.cwiseAbs().maxCoeff());
    if ((b.F0 - b.F0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * s0) {
      fail("block " + b.name + " F0 not symmetric");
    }
    for (const auto& t : b.terms) {
      if (t.var < 0 || t.var >= num_vars()) fail("block " + b.name + " references a bad variable");
      if (t.F.rows() != n || t.F.cols() != n) fail("block " + b.name + " term shape");
      const double s = std::max(1.0, t.F.cwiseAbs().maxCoeff());
      if ((t.F - t.F.transpose()).cwiseAbs().maxCoeff() > 1e-12 * s) {
        fail("block " + b.name + " term for " + vars[static_cast<std::size_t>(t.var)].name +
             " not symmetric");
      }
      used[static_cast<std::size_t>(t.var)] = true;
    }
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!used[i] && vars[i].sign == Sign::Free) fail("variable " + vars[i].name + " appears in no block");
  }
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Feasible: return "Feasible";
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::NumericalFailure: return "NumericalFailure";
  }
  return "NumericalFailure";
}

VerifyReport verify(const Problem& prob, const VectorXd& x, double tol) {
  if (x.size() != prob.num_vars()) throw Error(ErrorKind::Shape, "verify: x has the wrong length");
  VerifyReport rep;
  rep.pass = true;
  for (const auto& b : prob.blocks) {
    MatrixXd F = b.F0;
    for (const auto& t : b.terms) F += x(t.var) * t.F;
    F.diagonal().array() -= b.margin;
    F = 0.5 * (F + F.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(F, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    const bool ok = std::isfinite(lmin) && lmin >= -tol;
    rep.blocks.push_back({b.name, lmin, ok});
    rep.pass = rep.pass && ok;
    rep.worst = std::min(rep.worst, lmin);
  }
  for (int i = 0; i < prob.num_vars(); ++i) {
    if (prob.vars[static_cast<std::size_t>(i)].sign != Sign::NonNeg) continue;
    const bool ok = std::isfinite(x(i)) && x(i) >= -tol;
    rep.blocks.push_back({"sign:" + prob.vars[static_cast<std::size_t>(i)].name, x(i), ok});
    rep.pass = rep.pass && ok;
    rep.worst = std::min(rep.worst, x(i));
  }
  return rep;
}

namespace {

struct StdBlock {
  int n = 0;
  MatrixXd C;
  std::vector<int> idx;       // dual variable indices
  std::vector<MatrixXd> A;    // matching coefficient matrices
};

struct StdForm {
  int m = 0;
  VectorXd b;
  std::vector<StdBlock> blocks;
};

enum class Outcome { Converged, Stopped, PrimalRay, MaxIter, Failure };

struct IpmResult {
  Outcome outcome = Outcome::Failure;
  VectorXd y;
  int iterations = 0;
  double pobj = 0.0, dobj = 0.0;
  std::string message;
};

double frob_dot(const MatrixXd& a, const MatrixXd& b) { return a.cwiseProduct(b).sum(); }

MatrixXd sym(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

// Largest alpha with X + alpha dX >= 0 (infinity if unbounded).
double max_step(const MatrixXd& X, const MatrixXd& dX) {
  if (X.rows() == 1) {
    return dX(0, 0) < 0.0 ? -X(0, 0) / dX(0, 0) : std::numeric_limits<double>::infinity();
  }
  Eigen::LLT<MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const MatrixXd T = llt.matrixL().solve(dX);
  const MatrixXd W = sym(llt.matrixL().solve(T.transpose()));
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(W, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

VectorXd apply_A(const StdForm& sf, const std::vector<MatrixXd>& G) {
  VectorXd r = VectorXd::Zero(sf.m);
  for (std::size_t k = 0; k < sf.blocks.size(); ++k) {
    const auto& blk = sf.blocks[k];
    for (std::size_t a = 0; a < blk.idx.size(); ++a) r(blk.idx[a]) += frob_dot(blk.A[a], G[k]);
  }
  return r;
}

std::vector<MatrixXd> apply_At(const StdForm& sf, const VectorXd& y) {
  std::vector<MatrixXd> out;
  out.reserve(sf.blocks.size());
  for (const auto& blk : sf.blocks) {
    MatrixXd S = MatrixXd::Zero(blk.n, blk.n);
    for (std::size_t a = 0; a < blk.idx.size(); ++a) S += y(blk.idx[a]) * blk.A[a];
    out.push_back(std::move(S));
  }
  return out;
}

IpmResult run_ipm(const StdForm& sf, const Options& opts,
                  const std::function<bool(const VectorXd&)>& stop) {
  const std::size_t K = sf.blocks.size();
  const int m = sf.m;
  IpmResult res;

  double normC = 0.0;
  double normb = sf.b.norm();
  int ntot = 0;
  std::vector<MatrixXd> X(K), Z(K);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& blk = sf.blocks[k];
    ntot += blk.n;
    normC += blk.C.squaredNorm();
    double maxA = 0.0, xi_b = 0.0;
    for (std::size_t a = 0; a < blk.idx.size(); ++a) {
      const double na = blk.A[a].norm();
      maxA = std::max(maxA, na);
      xi_b = std::max(xi_b, (1.0 + std::abs(sf.b(blk.idx[a]))) / (1.0 + na));
    }
    const double sn = std::sqrt(static_cast<double>(blk.n));
    const double xi0 = std::max({10.0, sn, sn * xi_b});
    const double eta0 = std::max({10.0, sn, maxA, blk.C.norm()});
    X[k] = xi0 * MatrixXd::Identity(blk.n, blk.n);
    Z[k] = eta0 * MatrixXd::Identity(blk.n, blk.n);
  }
  normC = std::sqrt(normC);
  VectorXd y = VectorXd::Zero(m);

  std::vector<MatrixXd> Zinv(K), Rd(K), dXp(K), dZp(K), dX(K), dZ(K);
  int stall = 0;
  int flat = 0;  // consecutive iterations without gap or pinf progress
  double best_gap = std::numeric_limits<double>::infinity();
  double best_pinf = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iter; ++it) {
    res.iterations = it;
    const std::vector<MatrixXd> Aty = apply_At(sf, y);
    double gap = 0.0, pobj = 0.0, rdn = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      Eigen::LLT<MatrixXd> llt(Z[k]);
      if (llt.info() != Eigen::Success) {
        res.outcome = Outcome::Failure;
        res.message = "lost positive definiteness of Z";
        res.y = y;
        return res;
      }
      Zinv[k] = llt.solve(MatrixXd::Identity(sf.blocks[k].n, sf.blocks[k].n));
      Zinv[k] = sym(Zinv[k]);
      Rd[k] = sf.blocks[k].C - Z[k] - Aty[k];
      gap += frob_dot(X[k], Z[k]);
      pobj += frob_dot(sf.blocks[k].C, X[k]);
      rdn += Rd[k].squaredNorm();
    }
    const VectorXd AX = apply_A(sf, X);
    const VectorXd rp = sf.b - AX;
    const double dobj = sf.b.dot(y);
    const double mu = gap / ntot;
    const double relgap = std::abs(gap) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double pinf = rp.norm() / (1.0 + normb);
    const double dinf = std::sqrt(rdn) / (1.0 + normC);
    res.pobj = pobj;
    res.dobj = dobj;
    res.y = y;
    if (opts.verbose) {
      std::fprintf(stderr, "%3d pobj % .6e dobj % .6e gap %.2e pinf %.2e dinf %.2e\n", it, pobj,
                   dobj, relgap, pinf, dinf);
    }
    if (stop && stop(y)) {
      res.outcome = Outcome::Stopped;
      return res;
    }
    if (relgap < opts.tol && pinf < opts.tol && dinf < opts.tol) {
      res.outcome = Outcome::Converged;
      return res;
    }
    // Reduced accuracy: y is dual feasible and the gap is closed, but the
    // primal residual no longer moves. The caller still verifies y.
    if (relgap < best_gap * 0.5 || pinf < best_pinf * 0.5) {
      flat = 0;
      best_gap = std::min(best_gap, relgap);
      best_pinf = std::min(best_pinf, pinf);
    } else {
      ++flat;
    }
    if (flat >= 8 && relgap < std::sqrt(opts.tol) && dinf < opts.tol && pinf < 1e-3) {
      res.outcome = Outcome::Converged;
      res.message = "converged with reduced primal accuracy";
      return res;
    }
    // Primal ray: A(X) ~ 0 with <C, X> < 0 proves the dual constraint set empty.
    if (pobj < 0.0) {
      double xnorm = 0.0;
      for (const auto& Xk : X) xnorm += Xk.trace();
      if (AX.norm() / -pobj < 1e-8 && xnorm > 1e8) {
        res.outcome = Outcome::PrimalRay;
        res.message = "primal ray found";
        return res;
      }
    }

    // Schur complement M_ij = sum_k tr(A_i X A_j Z^{-1}).
    MatrixXd M = MatrixXd::Zero(m, m);
    for (std::size_t k = 0; k < K; ++k) {
      const auto& blk = sf.blocks[k];
      const std::size_t nv = blk.idx.size();
      if (blk.n == 1) {
        const double s = X[k](0, 0) * Zinv[k](0, 0);
        for (std::size_t a = 0; a < nv; ++a) {
          for (std::size_t c = 0; c < nv; ++c) {
            M(blk.idx[a], blk.idx[c]) += s * blk.A[a](0, 0) * blk.A[c](0, 0);
          }
        }
        continue;
      }
      for (std::size_t a = 0; a < nv; ++a) {
        const MatrixXd T = X[k] * blk.A[a] * Zinv[k];
        for (std::size_t c = a; c < nv; ++c) {
          const double v = frob_dot(blk.A[c], T);
          M(blk.idx[a], blk.idx[c]) += v;
          if (c != a) M(blk.idx[c], blk.idx[a]) += v;
        }
      }
    }
    M = sym(M);
    Eigen::LLT<MatrixXd> Mllt(M);
    Eigen::LDLT<MatrixXd> Mldlt;
    bool use_ldlt = false;
    if (Mllt.info() != Eigen::Success) {
      const double reg = 1e-14 * std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
      M.diagonal().array() += reg;
      Mllt.compute(M);
      if (Mllt.info() != Eigen::Success) {
        Mldlt.compute(M);
        use_ldlt = true;
      }
    }
    auto solveM = [&](const VectorXd& r) -> VectorXd {
      return use_ldlt ? VectorXd(Mldlt.solve(r)) : VectorXd(Mllt.solve(r));
    };

    std::vector<MatrixXd> XRdZi(K);
    for (std::size_t k = 0; k < K; ++k) XRdZi[k] = X[k] * Rd[k] * Zinv[k];
    const VectorXd hRd = apply_A(sf, XRdZi);

    // Predictor (sigma = 0).
    VectorXd dy = solveM(sf.b + hRd);
    std::vector<MatrixXd> Atdy = apply_At(sf, dy);
    double ap = std::numeric_limits<double>::infinity();
    double ad = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
      dZp[k] = Rd[k] - Atdy[k];
      dXp[k] = sym(-X[k] - X[k] * dZp[k] * Zinv[k]);
      ap = std::min(ap, max_step(X[k], dXp[k]));
      ad = std::min(ad, max_step(Z[k], dZp[k]));
    }
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double gap_aff = 0.0;
    for (std::size_t k = 0; k < K; ++k) gap_aff += frob_dot(X[k] + ap * dXp[k], Z[k] + ad * dZp[k]);
    double sigma = std::clamp(gap_aff / gap, 0.0, 1.0);
    sigma = sigma * sigma * sigma;

    // Corrector.
    std::vector<MatrixXd> G(K);
    for (std::size_t k = 0; k < K; ++k) {
      G[k] = sigma * mu * Zinv[k] - X[k] - dXp[k] * dZp[k] * Zinv[k];
    }
    dy = solveM(rp - apply_A(sf, G) + hRd);
    Atdy = apply_At(sf, dy);
    ap = std::numeric_limits<double>::infinity();
    ad = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
      dZ[k] = Rd[k] - Atdy[k];
      dX[k] = sym(G[k] - X[k] * dZ[k] * Zinv[k]);
      ap = std::min(ap, max_step(X[k], dX[k]));
      ad = std::min(ad, max_step(Z[k], dZ[k]));
    }
    const double gamma = 0.9 + 0.09 * std::min(std::min(1.0, ap), std::min(1.0, ad));
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    if (!std::isfinite(ap) || !std::isfinite(ad) || !dy.allFinite()) {
      res.outcome = Outcome::Failure;
      res.message = "non-finite search direction";
      return res;
    }
    for (std::size_t k = 0; k < K; ++k) {
      X[k] += ap * dX[k];
      Z[k] += ad * dZ[k];
    }
    y += ad * dy;
    stall = (std::max(ap, ad) < 1e-8) ? stall + 1 : 0;
    if (stall >= 5) {
      res.outcome = Outcome::Failure;
      res.message = "step lengths collapsed";
      res.y = y;
      return res;
    }
  }
  res.outcome = Outcome::MaxIter;
  res.iterations = opts.max_iter;
  res.message = "iteration cap reached";
  return res;
}

void add_user_blocks(const Problem& prob, StdForm& sf, int t_index) {
  for (const auto& b : prob.blocks) {
    StdBlock sb;
    sb.n = b.dim();
    sb.C = b.F0;
    sb.C.diagonal().array() -= b.margin;
    for (const auto& t : b.terms) {
      sb.idx.push_back(t.var);
      sb.A.push_back(-t.F);
    }
    if (t_index >= 0) {
      sb.idx.push_back(t_index);
      sb.A.push_back(MatrixXd::Identity(sb.n, sb.n));
    }
    sf.blocks.push_back(std::move(sb));
  }
  for (int i = 0; i < prob.num_vars(); ++i) {
    if (prob.vars[static_cast<std::size_t>(i)].sign != Sign::NonNeg) continue;
    StdBlock sb;
    sb.n = 1;
    sb.C = MatrixXd::Zero(1, 1);
    sb.idx.push_back(i);
    sb.A.push_back(-MatrixXd::Identity(1, 1));
    if (t_index >= 0) {
      sb.idx.push_back(t_index);
      sb.A.push_back(MatrixXd::Identity(1, 1));
    }
    sf.blocks.push_back(std::move(sb));
  }
}

Solution finish(const Problem& prob, const VectorXd& x, Status status, int iters,
                const std::string& msg, double tol) {
  Solution sol;
  sol.x = x;
  sol.iterations = iters;
  sol.message = msg;
  const VerifyReport rep = verify(prob, x, tol);
  for (std::size_t i = 0; i < prob.blocks.size(); ++i) sol.min_eig.push_back(rep.blocks[i].min_eig);
  if ((status == Status::Feasible || status == Status::Optimal) && !rep.pass) {
    sol.status = Status::NumericalFailure;
    std::ostringstream os;
    os << "solver converged but verification failed (worst eigenvalue " << rep.worst << ")";
    sol.message = os.str();
  } else {
    sol.status = status;
  }
  if (prob.has_objective()) sol.objective = prob.objective.dot(x);
  return sol;
}

Solution solve_feasibility(const Problem& prob, const Options& opts) {
  const int m = prob.num_vars();
  StdForm sf;
  sf.m = m + 1;
  sf.b = VectorXd::Zero(sf.m);
  sf.b(m) = 1.0;  // maximize t
  add_user_blocks(prob, sf, m);
  for (int i = 0; i < m; ++i) {
    for (double sgn : {1.0, -1.0}) {
      StdBlock sb;
      sb.n = 1;
      sb.C = MatrixXd::Constant(1, 1, opts.box);
      sb.idx.push_back(i);
      sb.A.push_back(MatrixXd::Constant(1, 1, sgn));
      sf.blocks.push_back(std::move(sb));
    }
  }
  // Stop as soon as the current x passes strict verification.
  auto stop = [&](const VectorXd& y) {
    if (y(m) < 0.0) return false;
    return verify(prob, y.head(m), 0.0).pass;
  };
  const IpmResult r = run_ipm(sf, opts, stop);
  const VectorXd x = r.y.size() == sf.m ? VectorXd(r.y.head(m)) : VectorXd::Zero(m);
  switch (r.outcome) {
    case Outcome::Stopped:
      return finish(prob, x, Status::Feasible, r.iterations, "strictly feasible point found", 0.0);
    case Outcome::Converged: {
      if (verify(prob, x, 0.0).pass) {
        return finish(prob, x, Status::Feasible, r.iterations, "feasible at optimum", 0.0);
      }
      std::ostringstream os;
      os << "max-slack optimum t* = " << r.y(m) << " < 0";
      return finish(prob, x, Status::Infeasible, r.iterations, os.str(), 0.0);
    }
    case Outcome::PrimalRay:
      return finish(prob, x, Status::Infeasible, r.iterations, r.message, 0.0);
    case Outcome::MaxIter:
    case Outcome::Failure:
      break;
  }
  return finish(prob, x, Status::NumericalFailure, r.iterations, r.message, 0.0);
}

Solution solve_objective(const Problem& prob, const Options& opts) {
  const int m = prob.num_vars();
  StdForm sf;
  sf.m = m;
  sf.b = -prob.objective;
  add_user_blocks(prob, sf, -1);
  const IpmResult r = run_ipm(sf, opts, nullptr);
  const VectorXd x = r.y.size() == m ? r.y : VectorXd::Zero(m);
  switch (r.outcome) {
    case Outcome::Converged:
      return finish(prob, x, Status::Optimal, r.iterations,
                    r.message.empty() ? "converged" : r.message, opts.verify_tol);
    case Outcome::PrimalRay:
      return finish(prob, x, Status::Infeasible, r.iterations, r.message, opts.verify_tol);
    case Outcome::Stopped:
    case Outcome::MaxIter:
    case Outcome::Failure:
      break;
  }
  return finish(prob, x, Status::NumericalFailure, r.iterations, r.message, opts.verify_tol);
}

}  // namespace

Solution solve(const Problem& prob, const Options& opts) {
  prob.validate();
  if (prob.num_vars() == 0) {
    const VerifyReport rep = verify(prob, VectorXd(), 0.0);
    Solution sol;
    sol.x = VectorXd();
    for (const auto& b : rep.blocks) sol.min_eig.push_back(b.min_eig);
    sol.status = rep.pass ? (prob.has_objective() ? Status::Optimal : Status::Feasible)
                          : Status::Infeasible;
    sol.objective = 0.0;
    return sol;
  }
  return prob.has_objective() ? solve_objective(prob, opts) : solve_feasibility(prob, opts);
}

std::string dump(const Problem& prob) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "vars " << prob.num_vars() << "\n";
  for (int i = 0; i < prob.num_vars(); ++i) {
    const auto& v = prob.vars[static_cast<std::size_t>(i)];
    os << "var " << i << " " << v.name << " " << (v.sign == Sign::NonNeg ? "nonneg" : "free") << "\n";
  }
  int nnz = 0;
  for (Eigen::Index i = 0; i < prob.objective.size(); ++i) nnz += prob.objective(i) != 0.0;
  os << "objective " << nnz << "\n";
  for (Eigen::Index i = 0; i < prob.objective.size(); ++i) {
    if (prob.objective(i) != 0.0) os << i << " " << prob.objective(i) << "\n";
  }
  auto put = [&os](int var, const MatrixXd& F) {
    int cnt = 0;
    for (Eigen::Index r = 0; r < F.rows(); ++r)
      for (Eigen::Index c = r; c < F.cols(); ++c) cnt += F(r, c) != 0.0;
    os << "F " << var << " " << cnt << "\n";
    for (Eigen::Index r = 0; r < F.rows(); ++r)
      for (Eigen::Index c = r; c < F.cols(); ++c)
        if (F(r, c) != 0.0) os << r << " " << c << " " << F(r, c) << "\n";
  };
  for (const auto& b : prob.blocks) {
    os << "block " << b.name << " " << b.dim() << " " << b.margin << " " << b.terms.size() + 1 << "\n";
    put(-1, b.F0);
    for (const auto& t : b.terms) put(t.var, t.F);
  }
  return os.str();
}

}  // namespace lkcert::sdp
