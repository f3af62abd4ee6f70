// Evaluation of field expressions: plain values, third-order Taylor jets and
// the finite-difference reference jet.

#include "curvhom/errors.hpp"
#include "curvhom/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace curvhom {

namespace {

using Kind = Expr::Kind;

template <typename T>
T int_power(T u, int n) {
  T r = 1;
  for (int k = 0; k < n; ++k) r *= u;
  return r;
}

// Scalar evaluation in double or long double.
template <typename T>
T eval_scalar(const Expr& e, std::span<const T> x) {
  switch (e.kind) {
    case Kind::Number: return static_cast<T>(e.number);
    case Kind::Var: return x[e.index];
    case Kind::Add: return eval_scalar(*e.lhs, x) + eval_scalar(*e.rhs, x);
    case Kind::Sub: return eval_scalar(*e.lhs, x) - eval_scalar(*e.rhs, x);
    case Kind::Mul: return eval_scalar(*e.lhs, x) * eval_scalar(*e.rhs, x);
    case Kind::Div: {
      const T num = eval_scalar(*e.lhs, x);
      const T den = eval_scalar(*e.rhs, x);
      if (den == 0) throw DomainError("division by zero");
      return num / den;
    }
    case Kind::Pow: {
      const T u = eval_scalar(*e.lhs, x);
      if (e.index >= 0) return int_power(u, e.index);
      if (u == 0) throw DomainError("negative power of zero");
      return T(1) / int_power(u, -e.index);
    }
    case Kind::Neg: return -eval_scalar(*e.lhs, x);
    case Kind::Sin: return std::sin(eval_scalar(*e.lhs, x));
    case Kind::Cos: return std::cos(eval_scalar(*e.lhs, x));
    case Kind::Exp: return std::exp(eval_scalar(*e.lhs, x));
    case Kind::Log: {
      const T u = eval_scalar(*e.lhs, x);
      if (!(u > 0)) throw DomainError("log of a non-positive value");
      return std::log(u);
    }
  }
  throw std::logic_error("unknown expression kind");
}

// Truncated multivariate Taylor arithmetic through order three. Only the
// sorted slots hess(i,j), i<=j, and third(i,j,k), i<=j<=k, are maintained;
// the full symmetric arrays are filled by mirroring at the end, so symmetry
// holds bit-for-bit.
class Taylor3 {
 public:
  explicit Taylor3(int p, double v = 0.0)
      : p_(p), v_(v), g_(p, 0.0), h_(p * p, 0.0), t_(p * p * p, 0.0) {}

  static Taylor3 variable(int p, int index, double v) {
    Taylor3 r(p, v);
    r.g_[index] = 1.0;
    return r;
  }

  double value() const { return v_; }

  friend Taylor3 operator+(const Taylor3& a, const Taylor3& b) { return a.combine(b, 1.0); }
  friend Taylor3 operator-(const Taylor3& a, const Taylor3& b) { return a.combine(b, -1.0); }

  friend Taylor3 operator*(const Taylor3& a, const Taylor3& b) {
    const int p = a.p_;
    Taylor3 r(p, a.v_ * b.v_);
    for (int i = 0; i < p; ++i) r.g_[i] = a.g_[i] * b.v_ + a.v_ * b.g_[i];
    for (int i = 0; i < p; ++i) {
      for (int j = i; j < p; ++j) {
        r.h(i, j) = a.h(i, j) * b.v_ + a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i] + a.v_ * b.h(i, j);
        for (int k = j; k < p; ++k) {
          r.t(i, j, k) = a.t(i, j, k) * b.v_ + a.h(i, j) * b.g_[k] + a.h(i, k) * b.g_[j] +
                         a.h(j, k) * b.g_[i] + a.g_[i] * b.h(j, k) + a.g_[j] * b.h(i, k) +
                         a.g_[k] * b.h(i, j) + a.v_ * b.t(i, j, k);
        }
      }
    }
    return r;
  }

  Taylor3 operator-() const {
    Taylor3 r = *this;
    r.scale(-1.0);
    return r;
  }

  // phi(u) given phi and its first three derivatives at u.
  Taylor3 compose(double d0, double d1, double d2, double d3) const {
    const int p = p_;
    Taylor3 r(p, d0);
    for (int i = 0; i < p; ++i) r.g_[i] = d1 * g_[i];
    for (int i = 0; i < p; ++i) {
      for (int j = i; j < p; ++j) {
        r.h(i, j) = d2 * g_[i] * g_[j] + d1 * h(i, j);
        for (int k = j; k < p; ++k) {
          r.t(i, j, k) = d3 * g_[i] * g_[j] * g_[k] +
                         d2 * (h(i, j) * g_[k] + h(i, k) * g_[j] + h(j, k) * g_[i]) +
                         d1 * t(i, j, k);
        }
      }
    }
    return r;
  }

  Jet3 to_jet() const {
    const int p = p_;
    Jet3 jet;
    jet.value = v_;
    jet.grad = Eigen::Map<const Eigen::VectorXd>(g_.data(), p);
    jet.hess = Eigen::MatrixXd::Zero(p, p);
    jet.third = Tensor3(p);
    for (int i = 0; i < p; ++i) {
      for (int j = i; j < p; ++j) {
        jet.hess(i, j) = jet.hess(j, i) = h(i, j);
        for (int k = j; k < p; ++k) {
          const double v = t(i, j, k);
          jet.third(i, j, k) = jet.third(i, k, j) = jet.third(j, i, k) = v;
          jet.third(j, k, i) = jet.third(k, i, j) = jet.third(k, j, i) = v;
        }
      }
    }
    return jet;
  }

 private:
  double& h(int i, int j) { return h_[i * p_ + j]; }
  double h(int i, int j) const { return h_[i * p_ + j]; }
  double& t(int i, int j, int k) { return t_[(i * p_ + j) * p_ + k]; }
  double t(int i, int j, int k) const { return t_[(i * p_ + j) * p_ + k]; }

  Taylor3 combine(const Taylor3& b, double sign) const {
    Taylor3 r = *this;
    r.v_ += sign * b.v_;
    for (std::size_t k = 0; k < g_.size(); ++k) r.g_[k] += sign * b.g_[k];
    for (std::size_t k = 0; k < h_.size(); ++k) r.h_[k] += sign * b.h_[k];
    for (std::size_t k = 0; k < t_.size(); ++k) r.t_[k] += sign * b.t_[k];
    return r;
  }

  void scale(double s) {
    v_ *= s;
    for (double& v : g_) v *= s;
    for (double& v : h_) v *= s;
    for (double& v : t_) v *= s;
  }

  int p_;
  double v_;
  std::vector<double> g_, h_, t_;
};

Taylor3 integer_power(const Taylor3& u, int n) {
  const double v = u.value();
  if (n < 0 && v == 0.0) throw DomainError("negative power of zero");
  // Coefficients n(n-1)...(n-m+1) v^(n-m); a zero coefficient short-circuits
  // so that v = 0 never produces 0 * inf.
  std::array<double, 4> d{};
  double coef = 1.0;
  for (int m = 0; m < 4; ++m) {
    if (coef == 0.0) {
      d[m] = 0.0;
    } else {
      const int e = n - m;
      d[m] = coef * (e >= 0 ? int_power(v, e) : 1.0 / int_power(v, -e));
    }
    coef *= static_cast<double>(n - m);
  }
  return u.compose(d[0], d[1], d[2], d[3]);
}

Taylor3 eval_taylor(const Expr& e, std::span<const double> x, int p) {
  switch (e.kind) {
    case Kind::Number: return Taylor3(p, e.number);
    case Kind::Var: return Taylor3::variable(p, e.index, x[e.index]);
    case Kind::Add: return eval_taylor(*e.lhs, x, p) + eval_taylor(*e.rhs, x, p);
    case Kind::Sub: return eval_taylor(*e.lhs, x, p) - eval_taylor(*e.rhs, x, p);
    case Kind::Mul: return eval_taylor(*e.lhs, x, p) * eval_taylor(*e.rhs, x, p);
    case Kind::Div: {
      const Taylor3 num = eval_taylor(*e.lhs, x, p);
      const Taylor3 den = eval_taylor(*e.rhs, x, p);
      const double v = den.value();
      if (v == 0.0) throw DomainError("division by zero");
      const double r = 1.0 / v;
      return num * den.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
    }
    case Kind::Pow: return integer_power(eval_taylor(*e.lhs, x, p), e.index);
    case Kind::Neg: return -eval_taylor(*e.lhs, x, p);
    case Kind::Sin: {
      const Taylor3 u = eval_taylor(*e.lhs, x, p);
      const double s = std::sin(u.value()), c = std::cos(u.value());
      return u.compose(s, c, -s, -c);
    }
    case Kind::Cos: {
      const Taylor3 u = eval_taylor(*e.lhs, x, p);
      const double s = std::sin(u.value()), c = std::cos(u.value());
      return u.compose(c, -s, -c, s);
    }
    case Kind::Exp: {
      const Taylor3 u = eval_taylor(*e.lhs, x, p);
      const double v = std::exp(u.value());
      return u.compose(v, v, v, v);
    }
    case Kind::Log: {
      const Taylor3 u = eval_taylor(*e.lhs, x, p);
      const double v = u.value();
      if (!(v > 0.0)) throw DomainError("log of a non-positive value");
      const double r = 1.0 / v;
      return u.compose(std::log(v), r, -r * r, 2.0 * r * r * r);
    }
  }
  throw std::logic_error("unknown expression kind");
}

void check_point(const FieldSpec& field, std::size_t n) {
  if (n != static_cast<std::size_t>(field.p())) {
    throw std::invalid_argument("point has " + std::to_string(n) + " coordinates, field expects " +
                                std::to_string(field.p()));
  }
}

void check_finite(const Jet3& jet) {
  bool ok = std::isfinite(jet.value) && jet.grad.allFinite() && jet.hess.allFinite();
  for (double v : jet.third.data()) ok = ok && std::isfinite(v);
  if (!ok) throw DomainError("non-finite derivative");
}

// 1-D central stencils: (offset in units of h, weight) for derivative orders 1..3.
struct StencilPoint {
  int offset;
  long double weight;
};

const std::vector<StencilPoint>& stencil(int order) {
  static const std::vector<StencilPoint> first{{-1, -0.5L}, {1, 0.5L}};
  static const std::vector<StencilPoint> second{{-1, 1.0L}, {0, -2.0L}, {1, 1.0L}};
  static const std::vector<StencilPoint> third{{-2, -0.5L}, {-1, 1.0L}, {1, -1.0L}, {2, 0.5L}};
  switch (order) {
    case 1: return first;
    case 2: return second;
    case 3: return third;
    default: throw std::logic_error("unsupported stencil order");
  }
}

// Derivative along the multiset `axes` (each axis listed once per order) by
// the tensor product of the per-axis stencils.
long double fd_derivative(const FieldSpec& field, std::span<const double> x,
                          std::span<const int> axes, long double h) {
  std::vector<std::pair<int, int>> orders;  // (axis, order)
  for (int a : axes) {
    auto it = std::find_if(orders.begin(), orders.end(), [a](const auto& o) { return o.first == a; });
    if (it == orders.end()) {
      orders.emplace_back(a, 1);
    } else {
      ++it->second;
    }
  }
  std::vector<long double> pt(x.begin(), x.end());
  long double total = 0.0L;
  // Iterate over the tensor product of stencils with an odometer.
  std::vector<std::size_t> pos(orders.size(), 0);
  for (;;) {
    long double w = 1.0L;
    for (std::size_t q = 0; q < orders.size(); ++q) {
      const auto& s = stencil(orders[q].second)[pos[q]];
      pt[orders[q].first] = static_cast<long double>(x[orders[q].first]) + s.offset * h;
      w *= s.weight;
    }
    total += w * field.value_extended(pt);
    std::size_t q = 0;
    for (; q < orders.size(); ++q) {
      if (++pos[q] < stencil(orders[q].second).size()) break;
      pos[q] = 0;
    }
    if (q == orders.size()) break;
  }
  long double scale = 1.0L;
  for (std::size_t k = 0; k < axes.size(); ++k) scale *= h;
  return total / scale;
}

double richardson(const FieldSpec& field, std::span<const double> x, std::span<const int> axes,
                  double h) {
  const long double coarse = fd_derivative(field, x, axes, h);
  const long double fine = fd_derivative(field, x, axes, 0.5L * h);
  return static_cast<double>((4.0L * fine - coarse) / 3.0L);
}

}  // namespace

double FieldSpec::value(std::span<const double> x) const {
  check_point(*this, x.size());
  return eval_scalar<double>(*body_, x);
}

long double FieldSpec::value_extended(std::span<const long double> x) const {
  check_point(*this, x.size());
  return eval_scalar<long double>(*body_, x);
}

Jet3 jet3(const FieldSpec& field, std::span<const double> x) {
  check_point(field, x.size());
  Jet3 jet = eval_taylor(field.body(), x, field.p()).to_jet();
  check_finite(jet);
  return jet;
}

Jet3 jet3_fd(const FieldSpec& field, std::span<const double> x, double h) {
  check_point(field, x.size());
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const int p = field.p();
  Jet3 jet;
  jet.value = field.value(x);
  jet.grad = Eigen::VectorXd::Zero(p);
  jet.hess = Eigen::MatrixXd::Zero(p, p);
  jet.third = Tensor3(p);
  for (int i = 0; i < p; ++i) {
    const std::array<int, 1> a1{i};
    jet.grad(i) = richardson(field, x, a1, h);
    for (int j = i; j < p; ++j) {
      const std::array<int, 2> a2{i, j};
      jet.hess(i, j) = jet.hess(j, i) = richardson(field, x, a2, h);
      for (int k = j; k < p; ++k) {
        const std::array<int, 3> a3{i, j, k};
        const double v = richardson(field, x, a3, h);
        jet.third(i, j, k) = jet.third(i, k, j) = jet.third(j, i, k) = v;
        jet.third(j, k, i) = jet.third(k, i, j) = jet.third(k, j, i) = v;
      }
    }
  }
  check_finite(jet);
  return jet;
}

}  // namespace curvhom
