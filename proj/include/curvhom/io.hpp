#pragma once

#include "curvhom/frames.hpp"
#include "curvhom/invariant.hpp"
#include "curvhom/model.hpp"
#include "curvhom/spectral.hpp"

#include "json.hpp"

#include <string>

namespace curvhom {

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);

nlohmann::json to_json(const Eigen::MatrixXd& m);
nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Tensor4& t);
nlohmann::json to_json(const Tensor5& t);

/// {"p", "point", "metric", "L", "R", "nablaR"}; R and nablaR are the full
/// 2p-dimensional coordinate tensors, nested row-major.
nlohmann::json tensor_dump(const FieldSpec& field, const Point& P);

/// Model space of dimension 2p: {"r", "point", "metric", "L", "R", "nablaR"}
/// with "metric" the inner product, "L" the form phi = I, "nablaR" zero.
nlohmann::json model_dump(const ModelSpace& model);

/// {"P", "basis", "checks"}.
nlohmann::json basis_dump(const AdmissibleBasis& B, const AdmissibilityReport& report);

/// Header x1,...,xp,alpha then one row per evaluated grid point.
std::string alpha_csv(const AlphaScan& scan, int p);
/// {"min", "max", "spread", "threshold", "verdict", "evaluated", "skipped"}.
nlohmann::json alpha_summary(const AlphaScan& scan);

/// {"kind", "n", "seed", "num_distinct_fingerprints", "fingerprints", ...}.
nlohmann::json spectral_json(const SpectralReport& report);

}  // namespace curvhom
