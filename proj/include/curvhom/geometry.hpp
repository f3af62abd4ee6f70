#pragma once

#include "curvhom/field.hpp"
#include "curvhom/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <span>
#include <utility>

namespace curvhom {

/// A point (x, y) of O x R^p. Tensors of g_f do not depend on y.
struct Point {
  Eigen::VectorXd x;
  Eigen::VectorXd y;

  int p() const noexcept { return static_cast<int>(x.size()); }

  static Point at_x(const Eigen::VectorXd& x) { return {x, Eigen::VectorXd::Zero(x.size())}; }
  /// From 2p coordinates, x-part first.
  static Point from_coordinates(std::span<const double> coords);
};

/// g_f in the coordinate frame (d/dx_1..d/dx_p, d/dy_1..d/dy_p):
/// [[grad grad^T, I], [I, 0]].
struct MetricValue {
  Eigen::MatrixXd g;
  Eigen::VectorXd grad;

  int p() const noexcept { return static_cast<int>(grad.size()); }
  /// Closed-form inverse [[0, I], [I, -grad grad^T]].
  Eigen::MatrixXd inverse() const;
};

/// Second fundamental form restricted to the x-distribution, L(i,j) = f_ij.
struct SecondFF {
  Eigen::MatrixXd L;
  bool positive_definite = false;
};

/// Image of the embedding and the unit normal, in the basis
/// (u_1..u_p, v_1..v_p, w) of the flat ambient space.
struct Embedding {
  Eigen::VectorXd position;
  Eigen::VectorXd normal;
  /// Column a is dF/dz_a for the 2p coordinates z = (x, y).
  Eigen::MatrixXd tangents;
  /// Ambient inner product: <u_i, v_j> = delta_ij, <w, w> = 1, all else 0.
  Eigen::MatrixXd inner_product;

  /// Induced metric tangents^T * inner_product * tangents.
  Eigen::MatrixXd pullback_metric() const;
};

using Curv4 = Tensor4;
using Curv5 = Tensor5;

inline constexpr double kPivotTolerance = 1e-12;

/// Cholesky factor A = C C^T with lower-triangular C, processed in natural
/// index order. Returns nullopt as soon as a pivot is <= `pivot_tol`.
std::optional<Eigen::MatrixXd> cholesky_factor(const Eigen::MatrixXd& a,
                                               double pivot_tol = kPivotTolerance);

/// Number of positive and negative eigenvalues of a symmetric matrix;
/// eigenvalues with |lambda| <= tol * max|lambda| count as neither.
std::pair<int, int> signature(const Eigen::MatrixXd& sym, double tol = 1e-12);

MetricValue metric_at(const FieldSpec& field, const Point& P);
MetricValue metric_from_jet(const Jet3& jet);

Embedding embed_and_normal(const FieldSpec& field, const Point& P);

SecondFF second_ff(const FieldSpec& field, const Point& P);
SecondFF second_ff_from_jet(const Jet3& jet);

/// Gamma(i,j,k) = 1/2 (d_i g_jk + d_j g_ik - d_k g_ij) on the x-block, with
/// the metric derivatives taken from the product rule on g_ij = f_i f_j.
Tensor3 christoffel(const FieldSpec& field, const Point& P);

/// R(i,j,k,l) = L(i,l) L(j,k) - L(i,k) L(j,l).
Curv4 curvature_gauss(const SecondFF& L);
Curv4 curvature_gauss(const Eigen::MatrixXd& L);

/// x-block of the Levi-Civita curvature computed from the full 2p-dimensional
/// metric, its first and second derivatives, and the Christoffel symbols
/// (including the quadratic terms). Independent of curvature_gauss.
Curv4 curvature_levi_civita(const FieldSpec& field, const Point& P);

/// Full 2p-dimensional Levi-Civita data, used to confirm that every component
/// with a y-index vanishes.
struct FullConnection {
  Tensor3 dg;          ///< dg(a,b,c) = d_a g_bc
  Tensor4 ddg;         ///< ddg(a,b,c,d) = d_a d_b g_cd
  Tensor3 gamma;       ///< gamma(a,b,c) = g(nabla_a d_b, d_c)
  Tensor3 gamma_up;    ///< gamma_up(a,b,e): nabla_a d_b = gamma_up(a,b,e) d_e
  Curv4 riemann;       ///< R(d_a, d_b, d_c, d_d)
};
FullConnection full_connection(const FieldSpec& field, const Point& P);

/// nabla R(i,j,k,l;n) = f_iln f_jk + f_il f_jkn - f_ikn f_jl - f_ik f_jln.
Curv5 nabla_curvature(const FieldSpec& field, const Point& P);
Curv5 nabla_curvature_from_jet(const Jet3& jet);

/// Max violation of the curvature symmetries of a rank-4 tensor.
struct CurvatureSymmetry {
  double antisymmetry = 0.0;  ///< |R_ijkl + R_jikl| (and |R_ijkl + R_ijlk|)
  double pair_swap = 0.0;     ///< |R_ijkl - R_klij|
  double bianchi = 0.0;       ///< |R_ijkl + R_jkil + R_kijl|

  double max() const { return std::max({antisymmetry, pair_swap, bianchi}); }
};
CurvatureSymmetry curvature_symmetry(const Tensor4& R);

/// Pulled-back 2p-dimensional tensors: T(M., M., ...) for a 2p x 2p map M,
/// where `x_block` holds the x-components and all y-slots vanish.
Tensor4 pullback_x_block(const Tensor4& x_block, const Eigen::MatrixXd& m);
Tensor5 pullback_x_block(const Tensor5& x_block, const Eigen::MatrixXd& m);

}  // namespace curvhom
