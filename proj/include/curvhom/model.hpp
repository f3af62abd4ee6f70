#pragma once

#include "curvhom/geometry.hpp"
#include "curvhom/tensor.hpp"

#include <Eigen/Dense>

#include <utility>

namespace curvhom {

/// Symmetric bilinear form on an r-dimensional space.
using BilForm = Eigen::MatrixXd;
/// Rank-4 tensor with the Riemann symmetries on an r-dimensional space.
using AlgCurv = Tensor4;

/// R_phi(v1,v2,v3,v4) = phi(v1,v4) phi(v2,v3) - phi(v1,v3) phi(v2,v4).
/// Throws std::invalid_argument if phi is not square and symmetric.
AlgCurv build_R_phi(const BilForm& phi);

struct SymmetryReport {
  CurvatureSymmetry violation;
  double tolerance = 0.0;
  bool pass = false;
};
SymmetryReport check_act_symmetries(const AlgCurv& R, double tol);

struct RecoverOptions {
  /// Accept the fit when max|R_phi - R| <= residual_tol * max(1, max|R|).
  double residual_tol = 1e-6;
  int max_iterations = 200;
};

struct Recovery {
  BilForm phi;
  double residual = 0.0;  ///< max|build_R_phi(phi) - R|
  int iterations = 0;
};

/// Positive semidefinite phi with R_phi closest to R in least squares.
///
/// The seed comes from 3x3 principal blocks: on each index triple, the 2x2
/// minors of phi are entries of R, so they form the adjugate of the block,
/// and phi_T = sqrt(det adj) * adj^-1. The seed is then refined by damped
/// Gauss-Newton over a lower-triangular factor phi = C C^T.
///
/// Throws std::invalid_argument for r <= 2 (phi is not determined by R_phi
/// there) and FitError when the final residual exceeds the threshold.
Recovery recover_phi(const AlgCurv& R, const RecoverOptions& options = {});

/// Two distinct positive definite forms on R^2 with the same R_phi:
/// diag(1,1) and diag(2,1/2). In dimension 2, R_phi only sees det(phi).
std::pair<BilForm, BilForm> dim2_counterexample();

/// The pointwise model (V, <.,.>, R) on V = span(u_1..u_p, v_1..v_p) with
/// <u_i, v_j> = delta_ij and R(u_i,u_j,u_k,u_l) = delta_il delta_jk - delta_ik delta_jl.
struct ModelSpace {
  int p = 0;
  Eigen::MatrixXd inner_product;
  AlgCurv curvature;
};
ModelSpace model_space(int p);

}  // namespace curvhom
