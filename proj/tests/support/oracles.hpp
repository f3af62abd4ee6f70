#pragma once

// Reference computations that avoid the code paths they are used to check.

#include "curvhom/field.hpp"
#include "curvhom/geometry.hpp"
#include "curvhom/tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace curvhom::testing {

/// nabla R on the x-block equals the plain x-derivative of R: every
/// Christoffel symbol with an upper x-index vanishes for g_f. Differentiates
/// the Gauss curvature of the exact Hessian by a Richardson-extrapolated
/// central difference.
inline Tensor5 nabla_curvature_by_differences(const FieldSpec& field, const Eigen::VectorXd& x,
                                              double h = 1e-3) {
  const int p = field.p();
  Tensor5 out(p);
  const auto R_at = [&](const Eigen::VectorXd& z) {
    return curvature_gauss(jet3(field, std::vector<double>(z.data(), z.data() + z.size())).hess);
  };
  for (int n = 0; n < p; ++n) {
    const auto central = [&](double step) {
      Eigen::VectorXd plus = x, minus = x;
      plus(n) += step;
      minus(n) -= step;
      const Tensor4 a = R_at(plus), b = R_at(minus);
      std::vector<double> d(a.size());
      for (std::size_t q = 0; q < a.size(); ++q) d[q] = (a.data()[q] - b.data()[q]) / (2 * step);
      return d;
    };
    const auto coarse = central(h);
    const auto fine = central(h / 2);
    std::size_t q = 0;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k)
          for (int l = 0; l < p; ++l, ++q) out(i, j, k, l, n) = (4 * fine[q] - coarse[q]) / 3;
  }
  return out;
}

/// Sum of squares of nabla R with every slot raised by L^-1, by explicit
/// index loops (no frame construction).
inline double alpha_by_contraction(const Tensor5& D, const Eigen::MatrixXd& L) {
  const int p = D.dim();
  const Eigen::MatrixXd Li = L.inverse();
  // Raise one slot at a time.
  Tensor5 cur = D;
  for (int slot = 0; slot < 5; ++slot) {
    Tensor5 next(p);
    next.for_each_index([&](const std::array<int, 5>& idx) {
      double s = 0.0;
      std::array<int, 5> src = idx;
      for (int m = 0; m < p; ++m) {
        src[slot] = m;
        s += Li(idx[slot], m) * cur.at(src);
      }
      next.at(idx) = s;
    });
    cur = std::move(next);
  }
  double a = 0.0;
  for (std::size_t q = 0; q < D.size(); ++q) a += D.data()[q] * cur.data()[q];
  return a;
}

/// Closed-form alpha for Theta = 1/2 sin(x1), with the derivatives written out.
inline double alpha_half_sine(double x1, int p) {
  const double t2 = -0.5 * std::sin(x1);
  const double t3 = -0.5 * std::cos(x1);
  return 4.0 * (p - 1) * t3 * t3 / std::pow(1.0 + t2, 3);
}

/// R_phi by the defining formula, written independently of the library.
inline Tensor4 r_phi(const Eigen::MatrixXd& phi) {
  const int r = static_cast<int>(phi.rows());
  Tensor4 R(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k)
        for (int l = 0; l < r; ++l)
          R(i, j, k, l) = phi(i, l) * phi(j, k) - phi(i, k) * phi(j, l);
  return R;
}

/// Relative disagreement of two jets with the absolute floor used by the
/// derivative contract: max over entries of |a - b| / max(1e-5 |a|, 1e-8),
/// so a value <= 1 means agreement.
inline double jet_disagreement(const Jet3& exact, const Jet3& approx) {
  double worst = 0.0;
  const auto cmp = [&](double a, double b) {
    worst = std::max(worst, std::abs(a - b) / std::max(1e-5 * std::abs(a), 1e-8));
  };
  const int p = exact.dim();
  cmp(exact.value, approx.value);
  for (int i = 0; i < p; ++i) {
    cmp(exact.grad(i), approx.grad(i));
    for (int j = 0; j < p; ++j) {
      cmp(exact.hess(i, j), approx.hess(i, j));
      for (int k = 0; k < p; ++k) cmp(exact.third(i, j, k), approx.third(i, j, k));
    }
  }
  return worst;
}

}  // namespace curvhom::testing
