#pragma once

#include "curvhom/field.hpp"
#include "curvhom/geometry.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace curvhom {

/// Endomorphism of T_P M in the coordinate frame (2p x 2p).
using Operator = Eigen::MatrixXd;

/// Metric and curvature at one point, shared by every operator built there.
struct PointCurvature {
  MetricValue metric;
  Eigen::MatrixXd g_inv;
  Curv4 R;      ///< x-block; components with a y-slot vanish
  Curv5 nabla;  ///< x-block
  int p() const noexcept { return metric.p(); }
  /// g(u, v) for 2p-vectors.
  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
};

PointCurvature point_curvature(const FieldSpec& field, const Point& P);

inline constexpr double kOrthonormalTolerance = 1e-10;

/// g(J(X)U, V) = R(U, X, X, V).
Operator jacobi(const PointCurvature& pc, const Eigen::VectorXd& X);
Operator jacobi(const FieldSpec& field, const Point& P, const Eigen::VectorXd& X);

/// g(S(X)U, V) = nabla R(U, X, X, V; X).
Operator szabo(const PointCurvature& pc, const Eigen::VectorXd& X);
Operator szabo(const FieldSpec& field, const Point& P, const Eigen::VectorXd& X);

/// g(R(pi)U, V) = R(Y, Z, U, V) for an orthonormal pair spanning pi.
/// Throws std::invalid_argument unless g(Y,Y) = g(Z,Z) = +-1 and g(Y,Z) = 0.
Operator skew_curv(const PointCurvature& pc, const Eigen::VectorXd& Y, const Eigen::VectorXd& Z);
Operator skew_curv(const FieldSpec& field, const Point& P, const Eigen::VectorXd& Y,
                   const Eigen::VectorXd& Z);

/// J(pi) = sum_i g(E_i, E_i) J(E_i) over a g-orthonormal basis E of pi.
/// Throws std::invalid_argument for a degenerate or non-orthonormal basis.
Operator higher_jacobi(const PointCurvature& pc, const std::vector<Eigen::VectorXd>& basis);
Operator higher_jacobi(const FieldSpec& field, const Point& P,
                       const std::vector<Eigen::VectorXd>& basis);

/// max |g A - (g A)^T| and max |g A + (g A)^T|.
double self_adjoint_residual(const Operator& A, const Eigen::MatrixXd& g);
double skew_adjoint_residual(const Operator& A, const Eigen::MatrixXd& g);

/// Numerical stand-in for the Jordan normal form: eigenvalues together with
/// the rank sequence rank(A^0), rank(A^1), ... up to stabilization.
struct Fingerprint {
  std::vector<std::complex<double>> eigenvalues;  ///< sorted by (real, imag)
  std::vector<int> ranks;
};

inline constexpr double kRankRelTolerance = 1e-8;
inline constexpr double kZeroOperatorNorm = 1e-12;
inline constexpr double kEigenvalueTolerance = 1e-7;

/// Ranks count singular values of A^k above kRankRelTolerance * s^k with
/// s = max(||A||, reference_norm); A is the zero operator when ||A|| is below
/// kRankRelTolerance * reference_norm or kZeroOperatorNorm. Pass the size of
/// the terms A was summed from as `reference_norm` so cancellation noise is
/// not mistaken for rank. The n - rank(A^inf) eigenvalues of least modulus
/// span the generalized null space and are set to exactly 0.
Fingerprint fingerprint(const Operator& A, double reference_norm = 0.0);

/// Eigenvalue multisets agree within `tol` and, if `compare_ranks`, the rank
/// sequences are identical.
bool same_fingerprint(const Fingerprint& a, const Fingerprint& b, double tol, bool compare_ranks);

enum class SpectralFamily { Jacobi, Szabo, Skew, HigherJacobi };

struct SpectralKind {
  SpectralFamily family = SpectralFamily::Jacobi;
  int sign = 1;  ///< +1 spacelike, -1 timelike (unused for HigherJacobi)
  int r = 0;     ///< HigherJacobi: spacelike dimension
  int s = 0;     ///< HigherJacobi: timelike dimension

  std::string name() const;
};

/// Accepts jacobi-spacelike, jacobi-timelike, szabo-spacelike, szabo-timelike,
/// skew-spacelike, skew-timelike and higher-jacobi(r,s).
SpectralKind parse_kind(const std::string& text);

/// Random Z with g(Z, Z) = sign: x-part uniform on the unit sphere, y-part
/// standard normal, then shifted along the x-part to fix the norm.
Eigen::VectorXd sample_unit_vector(const MetricValue& g, int sign, std::mt19937_64& rng);

/// Random g-orthonormal family with `r` spacelike then `s` timelike vectors.
std::vector<Eigen::VectorXd> sample_orthonormal(const MetricValue& g, int r, int s,
                                                std::mt19937_64& rng);

struct FingerprintClass {
  Fingerprint representative;
  int count = 0;
};

struct SpectralReport {
  SpectralKind kind;
  int n = 0;
  std::uint64_t seed = 0;
  double tolerance = kEigenvalueTolerance;
  std::vector<FingerprintClass> classes;  ///< in order of first appearance

  int num_distinct() const { return static_cast<int>(classes.size()); }
};

/// Samples n operators of the given kind at P and clusters their
/// fingerprints (eigenvalues within kEigenvalueTolerance, identical rank
/// sequences). Throws HypothesisError if L is not positive definite at P and
/// std::invalid_argument for an unrealizable (r, s).
SpectralReport sample_constancy(const SpectralKind& kind, const FieldSpec& field, const Point& P,
                                int n, std::uint64_t seed,
                                double tolerance = kEigenvalueTolerance);

}  // namespace curvhom
