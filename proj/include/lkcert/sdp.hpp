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
#ifndef LKCERT_SDP_HPP
#define LKCERT_SDP_HPP

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

namespace lkcert::sdp {

inline constexpr int kMaxVariables = 500;
inline constexpr int kMaxBlockDim = 100;

enum class Sign { Free, NonNeg };

struct Variable {
  std::string name;
  Sign sign = Sign::Free;
};

struct Term {
  int var = 0;
  Eigen::MatrixXd F;
};

// F0 + sum_i x_i F_i >= margin * I.
struct LmiBlock {
  std::string name;
  Eigen::MatrixXd F0;
  std::vector<Term> terms;  // at most one term per variable
  double margin = 0.0;

  int dim() const { return static_cast<int>(F0.rows()); }
};

struct Problem {
  std::vector<Variable> vars;
  std::vector<LmiBlock> blocks;
  Eigen::VectorXd objective;  // minimize c'x; empty means feasibility

  int add_variable(const std::string& name, Sign sign = Sign::Free);
  int add_block(const std::string& name, int dim, double margin);
  // Accumulates into the existing coefficient of var in block.
  void add_term(int block, int var, const Eigen::MatrixXd& F);
  void add_constant(int block, const Eigen::MatrixXd& F);
  void set_objective(int var, double c);

  int num_vars() const { return static_cast<int>(vars.size()); }
  bool has_objective() const { return objective.size() > 0; }
  // Throws ErrorKind::Parameter on malformed input or size limits.
  void validate() const;
};

enum class Status { Feasible, Optimal, Infeasible, NumericalFailure };
std::string status_name(Status s);

struct Options {
  double tol = 1e-9;          // relative gap and residual target
  int max_iter = 150;
  double verify_tol = 1e-8;   // accepted negative eigenvalue slack on Optimal results
  double box = 1e4;           // |x_i| <= box in the feasibility phase
  bool verbose = false;
};

struct BlockReport {
  std::string name;
  double min_eig = 0.0;  // of F(x) - margin I, or x_i for sign checks
  bool pass = false;
};

struct VerifyReport {
  std::vector<BlockReport> blocks;
  bool pass = false;
  double worst = std::numeric_limits<double>::infinity();
};

struct Solution {
  Status status = Status::NumericalFailure;
  Eigen::VectorXd x;
  std::vector<double> min_eig;  // per user block, from verify
  double objective = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  std::string message;
};

// Feasible/Optimal is only returned after verify() passes on x.
Solution solve(const Problem& prob, const Options& opts = {});

// Recomputes each block from the problem data and eigen-decomposes it.
VerifyReport verify(const Problem& prob, const Eigen::VectorXd& x, double tol);

// Text format:
//   vars <m>
//   var <index> <name> free|nonneg
//   objective <nnz>      followed by "<index> <value>" lines
//   block <name> <dim> <margin> <count>
//   F <var|-1> <nnz>     followed by "<row> <col> <value>" lines, upper triangle
std::string dump(const Problem& prob);

}  // namespace lkcert::sdp

#endif  // LKCERT_SDP_HPP
