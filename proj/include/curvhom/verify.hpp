#pragma once

#include "curvhom/field.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace curvhom {

struct VerifyConfig {
  FieldSpec field;
  /// Set when the field came from theta; enables the closed-form alpha check.
  std::optional<FieldSpec> theta;
  std::uint64_t seed = 0;
  /// Replaces every per-check tolerance when set.
  std::optional<double> tol;
  int points = 10;
};

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string note;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

/// Cross-checks at `points` seeded random points of [-1, 1]^p (y = 0):
///   dual_route_curvature   Gauss vs Levi-Civita, max entrywise     1e-10
///   curvature_symmetries   antisymmetry, pair swap, first Bianchi  1e-10
///   derivative_oracle      exact jet vs finite differences (ratio)  1
///   admissible_normal_form frame normalizations                     1e-9
///   basis_independence     relative spread of alpha, 20 mixings     1e-9
///   closed_form_alpha      relative error on x1 in [-1,1] x 21      1e-8
///   pullback_metric        ||Psi^* g_Q - g_P||, consecutive points  1e-10
///   pullback_curvature     ||Psi^* R_Q - R_P||                      1e-9
///   phi_round_trip         recover L from its R_phi                 1e-6
/// Points where L is not positive definite are excluded from the frame
/// based checks. The round-trip is skipped for p < 3, closed_form_alpha when
/// no theta is given.
VerifyReport run_verify(const VerifyConfig& config);

}  // namespace curvhom
