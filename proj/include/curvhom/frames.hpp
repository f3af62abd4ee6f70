#pragma once

#include "curvhom/field.hpp"
#include "curvhom/geometry.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>

namespace curvhom {

/// A frame {X_1..X_p, Y_1..Y_p} of T_P M with
///   g(X_i,X_j) = 0, g(X_i,Y_j) = delta_ij, g(Y_i,Y_j) = 0,
///   R(X_i,X_j,X_k,X_l) = delta_il delta_jk - delta_ik delta_jl,
///   R = 0 whenever an argument is some Y_i.
/// Columns of `basis` are the frame vectors in coordinates (d/dx, d/dy);
/// columns 0..p-1 are the X_i, columns p..2p-1 the Y_i.
struct AdmissibleBasis {
  FieldSpec field;
  Point point;
  Eigen::MatrixXd basis;

  int p() const noexcept { return field.p(); }
  auto X() const { return basis.leftCols(p()); }
  auto Y() const { return basis.rightCols(p()); }
};

/// Residuals of the three normalization families.
struct AdmissibilityReport {
  double metric = 0.0;     ///< max |g(B_a, B_b) - hyperbolic normal form|
  double curvature = 0.0;  ///< max |R(X_i,X_j,X_k,X_l) - (d_il d_jk - d_ik d_jl)|
  double y_slots = 0.0;    ///< max |R| over components with at least one Y argument
  double tolerance = 0.0;
  bool admissible = false;
};

/// Builds the frame by factoring L = C C^T (natural pivot order), setting
/// Xbar_i = sum_j (C^-1)_ij d/dx_j, Ybar_i = sum_j C_ji d/dy_j, and
/// X_i = Xbar_i - 1/2 sum_j g(Xbar_i, Xbar_j) Ybar_j, Y_i = Ybar_i.
/// Throws HypothesisError if L is not positive definite at P.
AdmissibleBasis admissible_basis(const FieldSpec& field, const Point& P);

/// Same construction with the factorization pivoted in `order` (a
/// permutation of 0..p-1). Gives an independently derived admissible frame.
AdmissibleBasis admissible_basis(const FieldSpec& field, const Point& P,
                                 std::span<const int> order);

AdmissibilityReport is_admissible(const Eigen::MatrixXd& basis, const FieldSpec& field,
                                  const Point& P, double tol);

/// X'_i = sum_j O_ij X_j, Y'_i = sum_j O_ij Y_j for a Haar-random orthogonal O
/// drawn from `seed`. Throws std::invalid_argument if B is not admissible.
AdmissibleBasis random_admissible(const AdmissibleBasis& B, std::uint64_t seed);

/// Mixes B with a given orthogonal matrix.
AdmissibleBasis mix_admissible(const AdmissibleBasis& B, const Eigen::MatrixXd& orthogonal);

/// Linear map T_P M -> T_Q M (coordinate matrix) sending the admissible
/// frame at P to the admissible frame at Q.
Eigen::MatrixXd homogeneity_map(const FieldSpec& field, const Point& P, const Point& Q);

struct PullbackResiduals {
  double metric = 0.0;     ///< ||Psi^* g_Q - g_P||_inf
  double curvature = 0.0;  ///< ||Psi^* R_Q - R_P||_inf over full 2p-dimensional tensors
  double nabla = 0.0;      ///< ||Psi^* (nabla R)_Q - (nabla R)_P||_inf
};
PullbackResiduals pullback_residuals(const FieldSpec& field, const Point& P, const Point& Q,
                                     const Eigen::MatrixXd& psi);

}  // namespace curvhom
