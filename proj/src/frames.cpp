#include "curvhom/frames.hpp"

#include "curvhom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace curvhom {

namespace {

constexpr double kAdmissibleTolerance = 1e-9;

Eigen::MatrixXd hyperbolic_form(int p) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  h.topRightCorner(p, p).setIdentity();
  h.bottomLeftCorner(p, p).setIdentity();
  return h;
}

std::string describe(const Point& P) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < P.x.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(P.x(i));
  }
  return s + ")";
}

}  // namespace

AdmissibleBasis admissible_basis(const FieldSpec& field, const Point& P) {
  std::vector<int> order(static_cast<std::size_t>(field.p()));
  std::iota(order.begin(), order.end(), 0);
  return admissible_basis(field, P, order);
}

AdmissibleBasis admissible_basis(const FieldSpec& field, const Point& P,
                                 std::span<const int> order) {
  const int p = field.p();
  std::vector<int> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  bool valid = static_cast<int>(sorted.size()) == p;
  for (int i = 0; valid && i < p; ++i) valid = sorted[static_cast<std::size_t>(i)] == i;
  if (!valid) throw std::invalid_argument("pivot order must be a permutation of 0..p-1");

  const MetricValue g = metric_at(field, P);
  const SecondFF L = second_ff(field, P);

  Eigen::MatrixXd permuted(p, p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) permuted(a, b) = L.L(order[a], order[b]);
  const auto factor = cholesky_factor(permuted);
  if (!factor) {
    throw HypothesisError("second fundamental form is not positive definite at x = " + describe(P));
  }
  // L = C C^T with C = Pi^T C'.
  Eigen::MatrixXd C(p, p);
  for (int a = 0; a < p; ++a) C.row(order[a]) = factor->row(a);
  const Eigen::MatrixXd a = C.inverse();

  const Eigen::VectorXd v = a * g.grad;  // v_i = df(Xbar_i)
  const Eigen::MatrixXd G = v * v.transpose();

  AdmissibleBasis B{field, P, Eigen::MatrixXd::Zero(2 * p, 2 * p)};
  B.basis.topLeftCorner(p, p) = a.transpose();
  B.basis.bottomLeftCorner(p, p) = -0.5 * C * G;
  B.basis.bottomRightCorner(p, p) = C;
  return B;
}

AdmissibilityReport is_admissible(const Eigen::MatrixXd& basis, const FieldSpec& field,
                                  const Point& P, double tol) {
  const int p = field.p();
  if (basis.rows() != 2 * p || basis.cols() != 2 * p) {
    throw std::invalid_argument("basis must be 2p x 2p");
  }
  AdmissibilityReport rep;
  rep.tolerance = tol;
  const MetricValue g = metric_at(field, P);
  rep.metric = (basis.transpose() * g.g * basis - hyperbolic_form(p)).cwiseAbs().maxCoeff();

  const Tensor4 R = pullback_x_block(curvature_gauss(second_ff(field, P)), basis);
  R.for_each_index([&](const std::array<int, 4>& idx) {
    const double r = R.at(idx);
    if (std::any_of(idx.begin(), idx.end(), [p](int k) { return k >= p; })) {
      rep.y_slots = std::max(rep.y_slots, std::abs(r));
    } else {
      const auto [i, j, k, l] = idx;
      const double target = (i == l && j == k ? 1.0 : 0.0) - (i == k && j == l ? 1.0 : 0.0);
      rep.curvature = std::max(rep.curvature, std::abs(r - target));
    }
  });
  rep.admissible = rep.metric < tol && rep.curvature < tol && rep.y_slots < tol;
  return rep;
}

AdmissibleBasis mix_admissible(const AdmissibleBasis& B, const Eigen::MatrixXd& orthogonal) {
  const int p = B.p();
  if (orthogonal.rows() != p || orthogonal.cols() != p) {
    throw std::invalid_argument("mixing matrix must be p x p");
  }
  AdmissibleBasis out = B;
  out.basis.leftCols(p) = B.X() * orthogonal.transpose();
  out.basis.rightCols(p) = B.Y() * orthogonal.transpose();
  return out;
}

AdmissibleBasis random_admissible(const AdmissibleBasis& B, std::uint64_t seed) {
  if (!is_admissible(B.basis, B.field, B.point, kAdmissibleTolerance).admissible) {
    throw std::invalid_argument("random_admissible: input basis is not admissible");
  }
  const int p = B.p();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) m(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < p; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return mix_admissible(B, q);
}

Eigen::MatrixXd homogeneity_map(const FieldSpec& field, const Point& P, const Point& Q) {
  const AdmissibleBasis at_p = admissible_basis(field, P);
  const AdmissibleBasis at_q = admissible_basis(field, Q);
  // Psi B_P = B_Q.
  return at_p.basis.transpose().partialPivLu().solve(at_q.basis.transpose()).transpose();
}

PullbackResiduals pullback_residuals(const FieldSpec& field, const Point& P, const Point& Q,
                                     const Eigen::MatrixXd& psi) {
  const int n = 2 * field.p();
  const Jet3 jp = jet3(field, std::span<const double>(P.x.data(), P.x.size()));
  const Jet3 jq = jet3(field, std::span<const double>(Q.x.data(), Q.x.size()));
  PullbackResiduals res;
  const Eigen::MatrixXd gp = metric_from_jet(jp).g;
  const Eigen::MatrixXd gq = metric_from_jet(jq).g;
  res.metric = (psi.transpose() * gq * psi - gp).cwiseAbs().maxCoeff();

  const Tensor4 Rq = pullback_x_block(curvature_gauss(jq.hess), psi);
  res.curvature = max_abs_diff(Rq, extend_by_zero(curvature_gauss(jp.hess), n));

  const Tensor5 Dq = pullback_x_block(nabla_curvature_from_jet(jq), psi);
  res.nabla = max_abs_diff(Dq, extend_by_zero(nabla_curvature_from_jet(jp), n));
  return res;
}

}  // namespace curvhom
