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
#include "lkcert/closed_loop.hpp"

#include <Eigen/Eigenvalues>
#include <iomanip>
#include <sstream>

#include "lkcert/errors.hpp"

namespace lkcert {

using Eigen::MatrixXd;

MatrixXd selector_first(int n) {
  MatrixXd S = MatrixXd::Zero(2 * n, n);
  S.topRows(n).setIdentity();
  return S;
}

MatrixXd selector_second(int n) {
  MatrixXd S = MatrixXd::Zero(2 * n, n);
  S.bottomRows(n).setIdentity();
  return S;
}

AugmentedSystem assemble(const UncertainPlant& up, const TransformedRnn& t) {
  if (t.B2t.cols() != up.plant.C.rows() || t.D22.cols() != up.plant.C.rows()) {
    throw Error(ErrorKind::Shape, "assembly: RNN input width differs from plant output (B2/D22)");
  }
  if (t.C1t.rows() != 1 || t.D12t.rows() != 1) {
    throw Error(ErrorKind::Shape, "assembly: RNN output must be scalar (C1/D12)");
  }
  const int nx = t.n_xi();
  const int nf = t.n_phi();
  const int nz = 4 + nx;
  const auto& G = up.plant;
  const auto& F = up.lft;
  const MatrixXd CG = G.C;

  AugmentedSystem a;
  a.dims.n_zeta = nz;
  a.dims.n_phi = nf;

  a.A.resize(nz, nz);
  a.A.topLeftCorner(4, 4) = G.A + G.B1 * t.D12t * CG;
  a.A.topRightCorner(4, nx) = G.B1 * t.C1t;
  a.A.bottomLeftCorner(nx, 4) = t.B2t * CG;
  a.A.bottomRightCorner(nx, nx) = t.At;

  a.B1 = MatrixXd::Zero(nz, 2);
  a.B1.topRows(4) = G.B2;
  a.B2.resize(nz, nf);
  a.B2.topRows(4) = G.B1 * t.D11t;
  a.B2.bottomRows(nx) = t.B1t;
  a.B3 = MatrixXd::Zero(nz, 3);
  a.B3.topRows(4) = F.B3;
  a.B4 = MatrixXd::Zero(nz, 2);
  a.B4.topRows(4) = up.B4;

  const MatrixXd Drp = selector_first(nf);
  const MatrixXd Drq = selector_second(nf);
  a.C1.resize(2 * nf, nz);
  a.C1.leftCols(4) = Drp * t.D22 * CG;
  a.C1.rightCols(nx) = Drp * t.C2;
  a.D12 = Drq;

  const MatrixXd Dsv = selector_first(3);
  const MatrixXd Dsw = selector_second(3);
  a.C2.resize(6, nz);
  a.C2.leftCols(4) = Dsv * (F.C1 + F.D11 * t.D12t * CG);
  a.C2.rightCols(nx) = Dsv * F.D11 * t.C1t;
  a.D21 = Dsv * F.D12;
  a.D22 = Dsv * F.D11 * t.D11t;
  a.D23 = Dsw;
  a.D24 = Dsv * up.D14;
  return a;
}

AugmentedStep augmented_step(const AugmentedSystem& a, const Eigen::VectorXd& zeta,
                             const Eigen::Vector2d& phi, const Eigen::VectorXd& q,
                             const Eigen::Vector3d& w, const Eigen::Vector2d& d) {
  if (zeta.size() != a.dims.n_zeta || q.size() != a.dims.n_phi) {
    throw Error(ErrorKind::Shape, "augmented_step: zeta or q has the wrong length");
  }
  AugmentedStep s;
  s.zeta_next = a.A * zeta + a.B1 * phi + a.B2 * q + a.B3 * w + a.B4 * d;
  s.r = a.C1 * zeta + a.D12 * q;
  s.s = a.C2 * zeta + a.D21 * phi + a.D22 * q + a.D23 * w + a.D24 * d;
  return s;
}

ConsistentStep consistent_step(const AugmentedSystem& a, const TransformedRnn& t,
                               const Eigen::VectorXd& zeta, const Eigen::Vector2d& phi,
                               const Eigen::Vector2d& d, double delta) {
  const int nf = a.dims.n_phi;
  ConsistentStep c;
  // p is the top half of r and does not depend on q.
  c.p = (a.C1 * zeta).head(nf);
  c.q = transformed_activation(t, c.p);
  // v is the top half of s and does not depend on w.
  c.v = (a.C2 * zeta + a.D21 * phi + a.D22 * c.q + a.D24 * d).head(3);
  c.w = delta * c.v;
  AugmentedStep s = augmented_step(a, zeta, phi, c.q, c.w, d);
  c.zeta_next = std::move(s.zeta_next);
  c.r = std::move(s.r);
  c.s = std::move(s.s);
  return c;
}

double spectral_radius(const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<MatrixXd> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::string dump_blocks(const AugmentedSystem& a) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# augmented system n_zeta=" << a.dims.n_zeta << " n_phi=" << a.dims.n_phi
     << " n_w=" << a.dims.n_w << " n_ext=" << a.dims.n_ext << " n_d=" << a.dims.n_d << "\n";
  auto put = [&os](const char* name, const MatrixXd& m) {
    os << name << " " << m.rows() << " " << m.cols() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
      os << "\n";
    }
  };
  put("calA", a.A);
  put("calB1", a.B1);
  put("calB2", a.B2);
  put("calB3", a.B3);
  put("calB4", a.B4);
  put("calC1", a.C1);
  put("calD12", a.D12);
  put("calC2", a.C2);
  put("calD21", a.D21);
  put("calD22", a.D22);
  put("calD23", a.D23);
  put("calD24", a.D24);
  return os.str();
}

}  // namespace lkcert
