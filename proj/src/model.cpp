#include "curvhom/model.hpp"

#include "curvhom/errors.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace curvhom {

namespace {

void require_symmetric(const BilForm& phi) {
  if (phi.rows() != phi.cols()) throw std::invalid_argument("bilinear form must be square");
  const double scale = std::max(1.0, phi.cwiseAbs().maxCoeff());
  if ((phi - phi.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale) {
    throw std::invalid_argument("bilinear form must be symmetric");
  }
}

// Seed from 3x3 principal blocks. On a triple T the minors of phi_T are
// entries of R, so adj(phi_T) is known; det(adj) = det(phi_T)^2.
std::optional<BilForm> adjugate_seed(const AlgCurv& R) {
  const int r = R.dim();
  BilForm sum = BilForm::Zero(r, r);
  Eigen::MatrixXi count = Eigen::MatrixXi::Zero(r, r);
  for (int a = 0; a < r; ++a) {
    for (int b = a + 1; b < r; ++b) {
      for (int c = b + 1; c < r; ++c) {
        const std::array<int, 3> t{a, b, c};
        Eigen::Matrix3d adj;
        for (int u = 0; u < 3; ++u) {
          for (int v = 0; v < 3; ++v) {
            // Rows other than u, columns other than v.
            const int r1 = t[u == 0 ? 1 : 0], r2 = t[u == 2 ? 1 : 2];
            const int c1 = t[v == 0 ? 1 : 0], c2 = t[v == 2 ? 1 : 2];
            const double minor = -R(r1, r2, c1, c2);
            adj(v, u) = ((u + v) % 2 == 0 ? 1.0 : -1.0) * minor;
          }
        }
        const double det_adj = adj.determinant();
        if (!(det_adj > 0.0)) return std::nullopt;
        const Eigen::Matrix3d block = std::sqrt(det_adj) * adj.inverse();
        for (int u = 0; u < 3; ++u) {
          for (int v = 0; v < 3; ++v) {
            sum(t[u], t[v]) += block(u, v);
            ++count(t[u], t[v]);
          }
        }
      }
    }
  }
  BilForm phi = sum.array() / count.cast<double>().array();
  return BilForm(0.5 * (phi + phi.transpose()));
}

// d_i^2 = R_ijji R_ikki / R_jkkj, exact for diagonal phi.
BilForm diagonal_seed(const AlgCurv& R) {
  const int r = R.dim();
  BilForm phi = BilForm::Zero(r, r);
  for (int i = 0; i < r; ++i) {
    std::array<int, 2> jk{};
    int found = 0;
    for (int m = 0; m < r && found < 2; ++m) {
      if (m != i) jk[found++] = m;
    }
    const int j = jk[0], k = jk[1];
    const double ratio = R(i, j, j, i) * R(i, k, k, i) / R(j, k, k, j);
    phi(i, i) = (std::isfinite(ratio) && ratio > 0.0) ? std::sqrt(ratio) : 1.0;
  }
  return phi;
}

struct Residual {
  Eigen::VectorXd values;
  double max_abs = 0.0;
};

Residual residual(const BilForm& phi, const AlgCurv& target) {
  const AlgCurv R = build_R_phi(phi);
  Residual res;
  res.values.resize(static_cast<Eigen::Index>(R.size()));
  for (std::size_t q = 0; q < R.size(); ++q) {
    res.values(static_cast<Eigen::Index>(q)) = R.data()[q] - target.data()[q];
  }
  res.max_abs = res.values.size() ? res.values.cwiseAbs().maxCoeff() : 0.0;
  return res;
}

// Jacobian of vec(R_{C C^T}) with respect to the lower-triangular entries of C.
Eigen::MatrixXd jacobian(const Eigen::MatrixXd& C) {
  const int r = static_cast<int>(C.rows());
  const BilForm phi = C * C.transpose();
  const int n_params = r * (r + 1) / 2;
  const int n_res = r * r * r * r;
  Eigen::MatrixXd J(n_res, n_params);
  int col = 0;
  for (int m = 0; m < r; ++m) {
    for (int n = 0; n <= m; ++n, ++col) {
      // d phi = E_mn C^T + C E_nm
      BilForm dphi = BilForm::Zero(r, r);
      dphi.row(m) += C.col(n).transpose();
      dphi.col(m) += C.col(n);
      int row = 0;
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          for (int k = 0; k < r; ++k)
            for (int l = 0; l < r; ++l, ++row) {
              J(row, col) = dphi(i, l) * phi(j, k) + phi(i, l) * dphi(j, k) -
                            dphi(i, k) * phi(j, l) - phi(i, k) * dphi(j, l);
            }
    }
  }
  return J;
}

Eigen::MatrixXd from_params(const Eigen::VectorXd& theta, int r) {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(r, r);
  int q = 0;
  for (int m = 0; m < r; ++m)
    for (int n = 0; n <= m; ++n) C(m, n) = theta(q++);
  return C;
}

Eigen::VectorXd to_params(const Eigen::MatrixXd& C) {
  const int r = static_cast<int>(C.rows());
  Eigen::VectorXd theta(r * (r + 1) / 2);
  int q = 0;
  for (int m = 0; m < r; ++m)
    for (int n = 0; n <= m; ++n) theta(q++) = C(m, n);
  return theta;
}

}  // namespace

AlgCurv build_R_phi(const BilForm& phi) {
  require_symmetric(phi);
  return curvature_gauss(phi);
}

SymmetryReport check_act_symmetries(const AlgCurv& R, double tol) {
  SymmetryReport rep;
  rep.violation = curvature_symmetry(R);
  rep.tolerance = tol;
  rep.pass = rep.violation.max() < tol;
  return rep;
}

Recovery recover_phi(const AlgCurv& R, const RecoverOptions& options) {
  const int r = R.dim();
  if (r <= 2) {
    throw std::invalid_argument("recover_phi: dimension " + std::to_string(r) +
                                " too small, R_phi determines phi only in dimension >= 3");
  }
  BilForm seed = adjugate_seed(R).value_or(BilForm());
  std::optional<Eigen::MatrixXd> C0 = seed.size() ? cholesky_factor(seed, 0.0) : std::nullopt;
  if (!C0) C0 = cholesky_factor(diagonal_seed(R), 0.0);
  if (!C0) C0 = Eigen::MatrixXd::Identity(r, r);

  Eigen::VectorXd theta = to_params(*C0);
  Eigen::MatrixXd C = *C0;
  Residual res = residual(C * C.transpose(), R);
  double cost = res.values.squaredNorm();
  double lambda = 1e-6;
  const double scale = std::max(1.0, R.max_abs());
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (res.max_abs <= 1e-15 * scale) break;
    const Eigen::MatrixXd J = jacobian(C);
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd grad = J.transpose() * res.values;
    bool accepted = false;
    double previous = cost;
    for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal() += lambda * (JtJ.diagonal().array() + 1e-12).matrix();
      const Eigen::VectorXd trial = theta + A.ldlt().solve(-grad);
      const Eigen::MatrixXd Ct = from_params(trial, r);
      Residual rt = residual(Ct * Ct.transpose(), R);
      const double ct = rt.values.squaredNorm();
      if (ct < cost) {
        theta = trial;
        C = Ct;
        res = std::move(rt);
        cost = ct;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
      } else {
        lambda *= 4.0;
      }
    }
    // Stalled: no decrease, or a decrease below rounding level.
    if (!accepted || cost > previous * (1.0 - 1e-10)) break;
  }

  Recovery out;
  out.phi = C * C.transpose();
  out.residual = res.max_abs;
  out.iterations = it;
  if (out.residual > options.residual_tol * scale) {
    throw FitError("recover_phi: tensor is not of the form R_phi for a definite phi (residual " +
                       std::to_string(out.residual) + ")",
                   out.residual);
  }
  return out;
}

std::pair<BilForm, BilForm> dim2_counterexample() {
  BilForm a = BilForm::Identity(2, 2);
  BilForm b = BilForm::Zero(2, 2);
  b(0, 0) = 2.0;
  b(1, 1) = 0.5;
  return {a, b};
}

ModelSpace model_space(int p) {
  if (p < 1) throw std::invalid_argument("model_space: p must be >= 1");
  ModelSpace m;
  m.p = p;
  m.inner_product = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  m.inner_product.topRightCorner(p, p).setIdentity();
  m.inner_product.bottomLeftCorner(p, p).setIdentity();
  m.curvature = extend_by_zero(curvature_gauss(Eigen::MatrixXd::Identity(p, p)), 2 * p);
  return m;
}

}  // namespace curvhom
