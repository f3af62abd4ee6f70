#pragma once

#include "curvhom/field.hpp"
#include "curvhom/frames.hpp"
#include "curvhom/geometry.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace curvhom {

/// Sum of squares of nabla R(X_i,X_j,X_k,X_l;X_n) over all five indices in
/// the admissible frame built at P. Throws HypothesisError if L is not
/// positive definite at P.
double alpha(const FieldSpec& field, const Point& P);

/// The same sum evaluated in a caller-supplied admissible frame.
double alpha_in_basis(const AdmissibleBasis& B);

/// ||nabla R||^2 with all indices raised by phi^-1, where phi is recovered
/// from the x-block of R (requires p >= 3).
double alpha_via_phi(const FieldSpec& field, const Point& P);

/// 4 (p-1) theta'''(x1)^2 / (1 + theta''(x1))^3 for f = 1/2 |x|^2 + theta(x1).
/// Throws HypothesisError when 1 + theta''(x1) <= 0.
double alpha_closed_form(const FieldSpec& theta, double x1, int p);

struct GridAxis {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  double at(int k) const;
};

/// Axes for x1..xp; missing trailing axes are held at 0.
struct Grid {
  std::vector<GridAxis> axes;

  std::size_t size() const;
  /// Grid point number `flat`, x1 varying slowest.
  Eigen::VectorXd point(std::size_t flat, int p) const;
};

enum class Verdict { NotLocallyHomogeneous, Inconclusive };
std::string to_string(Verdict v);

inline constexpr double kConstancyThreshold = 1e-6;
inline constexpr double kSpreadFloor = 1e-12;

struct AlphaSample {
  Eigen::VectorXd x;
  double alpha = 0.0;
};

struct SkippedPoint {
  Eigen::VectorXd x;
  std::string reason;
};

struct AlphaScan {
  std::vector<AlphaSample> samples;  ///< grid order
  std::vector<SkippedPoint> skipped;
  double min = 0.0;
  double max = 0.0;
  /// (max - min) / max(|max|, kSpreadFloor); 0 when fewer than one sample.
  double spread = 0.0;
  double threshold = kConstancyThreshold;
  Verdict verdict = Verdict::Inconclusive;
};

/// Evaluates alpha over the grid (y = 0). Points where L is not positive
/// definite or the field is undefined are reported in `skipped`. The verdict
/// never claims homogeneity: a constant alpha is only inconclusive.
AlphaScan scan_alpha(const FieldSpec& field, const Grid& grid,
                     double threshold = kConstancyThreshold);

}  // namespace curvhom
