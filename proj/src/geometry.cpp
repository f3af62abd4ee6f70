#include "curvhom/geometry.hpp"

#include "curvhom/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace curvhom {

namespace {

Jet3 jet_at(const FieldSpec& field, const Point& P) {
  if (P.p() != field.p() || P.y.size() != P.x.size()) {
    throw std::invalid_argument("point dimension does not match the field (expected 2p = " +
                                std::to_string(2 * field.p()) + " coordinates)");
  }
  return jet3(field, std::span<const double>(P.x.data(), P.x.size()));
}

}  // namespace

Point Point::from_coordinates(std::span<const double> coords) {
  if (coords.empty() || coords.size() % 2 != 0) {
    throw std::invalid_argument("a point needs 2p coordinates");
  }
  const auto p = static_cast<Eigen::Index>(coords.size() / 2);
  Point P;
  P.x = Eigen::Map<const Eigen::VectorXd>(coords.data(), p);
  P.y = Eigen::Map<const Eigen::VectorXd>(coords.data() + p, p);
  return P;
}

Eigen::MatrixXd MetricValue::inverse() const {
  const int n = p();
  Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  inv.topRightCorner(n, n).setIdentity();
  inv.bottomLeftCorner(n, n).setIdentity();
  inv.bottomRightCorner(n, n) = -grad * grad.transpose();
  return inv;
}

Eigen::MatrixXd Embedding::pullback_metric() const {
  return tangents.transpose() * inner_product * tangents;
}

std::optional<Eigen::MatrixXd> cholesky_factor(const Eigen::MatrixXd& a, double pivot_tol) {
  const auto n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("cholesky_factor: matrix must be square");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double pivot = a(j, j) - c.row(j).head(j).squaredNorm();
    if (!(pivot > pivot_tol)) return std::nullopt;
    c(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      c(i, j) = (a(i, j) - c.row(i).head(j).dot(c.row(j).head(j))) / c(j, j);
    }
  }
  return c;
}

std::pair<int, int> signature(const Eigen::MatrixXd& sym, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double scale = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  int pos = 0, neg = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) > tol * scale) ++pos;
    if (ev(k) < -tol * scale) ++neg;
  }
  return {pos, neg};
}

MetricValue metric_from_jet(const Jet3& jet) {
  const int p = jet.dim();
  MetricValue m;
  m.grad = jet.grad;
  m.g = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  m.g.topLeftCorner(p, p) = jet.grad * jet.grad.transpose();
  m.g.topRightCorner(p, p).setIdentity();
  m.g.bottomLeftCorner(p, p).setIdentity();
  return m;
}

MetricValue metric_at(const FieldSpec& field, const Point& P) {
  return metric_from_jet(jet_at(field, P));
}

Embedding embed_and_normal(const FieldSpec& field, const Point& P) {
  const Jet3 jet = jet_at(field, P);
  const int p = field.p();
  const int w = 2 * p;  // index of the unit normal direction of the ambient space
  Embedding e;
  e.position = Eigen::VectorXd::Zero(2 * p + 1);
  e.position.head(p) = P.x;
  e.position.segment(p, p) = P.y;
  e.position(w) = jet.value;

  e.normal = Eigen::VectorXd::Zero(2 * p + 1);
  e.normal.segment(p, p) = -jet.grad;
  e.normal(w) = 1.0;

  e.tangents = Eigen::MatrixXd::Zero(2 * p + 1, 2 * p);
  for (int i = 0; i < p; ++i) {
    e.tangents(i, i) = 1.0;
    e.tangents(w, i) = jet.grad(i);
    e.tangents(p + i, p + i) = 1.0;
  }

  e.inner_product = Eigen::MatrixXd::Zero(2 * p + 1, 2 * p + 1);
  for (int i = 0; i < p; ++i) e.inner_product(i, p + i) = e.inner_product(p + i, i) = 1.0;
  e.inner_product(w, w) = 1.0;
  return e;
}

SecondFF second_ff_from_jet(const Jet3& jet) {
  SecondFF s;
  s.L = jet.hess;
  s.positive_definite = cholesky_factor(s.L).has_value();
  return s;
}

SecondFF second_ff(const FieldSpec& field, const Point& P) {
  return second_ff_from_jet(jet_at(field, P));
}

Tensor3 christoffel(const FieldSpec& field, const Point& P) {
  const Jet3 jet = jet_at(field, P);
  const int p = field.p();
  const auto& f1 = jet.grad;
  const auto& f2 = jet.hess;
  // d_k g_ij for g_ij = f_i f_j.
  Tensor3 dg(p);
  for (int k = 0; k < p; ++k)
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) dg(k, i, j) = f2(i, k) * f1(j) + f1(i) * f2(j, k);
  Tensor3 gamma(p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < p; ++k) gamma(i, j, k) = 0.5 * (dg(i, j, k) + dg(j, i, k) - dg(k, i, j));
  return gamma;
}

Curv4 curvature_gauss(const Eigen::MatrixXd& L) {
  const int p = static_cast<int>(L.rows());
  Curv4 R(p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < p; ++k)
        for (int l = 0; l < p; ++l) R(i, j, k, l) = L(i, l) * L(j, k) - L(i, k) * L(j, l);
  return R;
}

Curv4 curvature_gauss(const SecondFF& L) { return curvature_gauss(L.L); }

FullConnection full_connection(const FieldSpec& field, const Point& P) {
  const Jet3 jet = jet_at(field, P);
  const int p = field.p();
  const int n = 2 * p;
  const auto& f1 = jet.grad;
  const auto& f2 = jet.hess;
  const auto& f3 = jet.third;
  auto is_x = [p](int a) { return a < p; };

  FullConnection c;
  // Only the xx-block g_ij = f_i f_j varies, and only along x.
  c.dg = Tensor3(n);
  c.ddg = Tensor4(n);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!(is_x(a) && is_x(i) && is_x(j))) continue;
        c.dg(a, i, j) = f2(i, a) * f1(j) + f1(i) * f2(j, a);
        for (int b = 0; b < p; ++b) {
          c.ddg(b, a, i, j) = f3(i, a, b) * f1(j) + f2(i, a) * f2(j, b) + f2(i, b) * f2(j, a) +
                              f1(i) * f3(j, a, b);
        }
      }
    }
  }

  const Eigen::MatrixXd ginv = metric_from_jet(jet).inverse();
  c.gamma = Tensor3(n);
  c.gamma_up = Tensor3(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < n; ++e)
        c.gamma(a, b, e) = 0.5 * (c.dg(a, b, e) + c.dg(b, a, e) - c.dg(e, a, b));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < n; ++e) {
        double s = 0.0;
        for (int f = 0; f < n; ++f) s += ginv(e, f) * c.gamma(a, b, f);
        c.gamma_up(a, b, e) = s;
      }

  // d_a gamma(b,c,d)
  auto dgamma = [&](int a, int b, int cc, int d) {
    return 0.5 * (c.ddg(a, b, cc, d) + c.ddg(a, cc, b, d) - c.ddg(a, d, b, cc));
  };
  c.riemann = Curv4(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          double quad = 0.0;
          for (int e = 0; e < n; ++e) {
            quad += c.gamma_up(a, cc, e) * c.gamma(b, d, e) - c.gamma_up(b, cc, e) * c.gamma(a, d, e);
          }
          c.riemann(a, b, cc, d) = dgamma(a, b, cc, d) - dgamma(b, a, cc, d) + quad;
        }
  return c;
}

Curv4 curvature_levi_civita(const FieldSpec& field, const Point& P) {
  return leading_block(full_connection(field, P).riemann, field.p());
}

Curv5 nabla_curvature_from_jet(const Jet3& jet) {
  const int p = jet.dim();
  const auto& f2 = jet.hess;
  const auto& f3 = jet.third;
  Curv5 D(p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < p; ++k)
        for (int l = 0; l < p; ++l)
          for (int n = 0; n < p; ++n)
            D(i, j, k, l, n) = f3(i, l, n) * f2(j, k) + f2(i, l) * f3(j, k, n) -
                               f3(i, k, n) * f2(j, l) - f2(i, k) * f3(j, l, n);
  return D;
}

Curv5 nabla_curvature(const FieldSpec& field, const Point& P) {
  return nabla_curvature_from_jet(jet_at(field, P));
}

CurvatureSymmetry curvature_symmetry(const Tensor4& R) {
  const int n = R.dim();
  CurvatureSymmetry s;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double r = R(i, j, k, l);
          s.antisymmetry = std::max({s.antisymmetry, std::abs(r + R(j, i, k, l)),
                                     std::abs(r + R(i, j, l, k))});
          s.pair_swap = std::max(s.pair_swap, std::abs(r - R(k, l, i, j)));
          s.bianchi = std::max(s.bianchi, std::abs(r + R(j, k, i, l) + R(k, i, j, l)));
        }
  return s;
}

Tensor4 pullback_x_block(const Tensor4& x_block, const Eigen::MatrixXd& m) {
  return pullback(x_block, m.topRows(x_block.dim()));
}

Tensor5 pullback_x_block(const Tensor5& x_block, const Eigen::MatrixXd& m) {
  return pullback(x_block, m.topRows(x_block.dim()));
}

}  // namespace curvhom
