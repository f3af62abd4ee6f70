#include "curvhom/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace curvhom {

namespace {

template <std::size_t Rank>
nlohmann::json nest(const DenseTensor<Rank>& t, std::array<int, Rank>& idx, std::size_t depth) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < t.dim(); ++i) {
    idx[depth] = i;
    if (depth + 1 == Rank) {
      out.push_back(t.at(idx));
    } else {
      out.push_back(nest(t, idx, depth + 1));
    }
  }
  return out;
}

nlohmann::json point_json(const Point& P) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < P.x.size(); ++i) out.push_back(P.x(i));
  for (Eigen::Index i = 0; i < P.y.size(); ++i) out.push_back(P.y(i));
  return out;
}

nlohmann::json fingerprint_json(const Fingerprint& fp) {
  nlohmann::json ev = nlohmann::json::array();
  for (const auto& z : fp.eigenvalues) ev.push_back({z.real(), z.imag()});
  return {{"eigenvalues", ev}, {"ranks", fp.ranks}};
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const Eigen::MatrixXd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

nlohmann::json to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

nlohmann::json to_json(const Tensor4& t) {
  std::array<int, 4> idx{};
  return nest(t, idx, 0);
}

nlohmann::json to_json(const Tensor5& t) {
  std::array<int, 5> idx{};
  return nest(t, idx, 0);
}

nlohmann::json tensor_dump(const FieldSpec& field, const Point& P) {
  const int p = field.p();
  const Jet3 jet = jet3(field, std::span<const double>(P.x.data(), P.x.size()));
  return {{"p", p},
          {"field", field.to_string()},
          {"point", point_json(P)},
          {"metric", to_json(metric_from_jet(jet).g)},
          {"L", to_json(jet.hess)},
          {"R", to_json(extend_by_zero(curvature_gauss(jet.hess), 2 * p))},
          {"nablaR", to_json(extend_by_zero(nabla_curvature_from_jet(jet), 2 * p))}};
}

nlohmann::json model_dump(const ModelSpace& model) {
  const int n = 2 * model.p;
  return {{"r", n},
          {"point", to_json(Eigen::VectorXd(Eigen::VectorXd::Zero(n)))},
          {"metric", to_json(model.inner_product)},
          {"L", to_json(Eigen::MatrixXd(Eigen::MatrixXd::Identity(model.p, model.p)))},
          {"R", to_json(model.curvature)},
          {"nablaR", to_json(Tensor5(n))}};
}

nlohmann::json basis_dump(const AdmissibleBasis& B, const AdmissibilityReport& report) {
  return {{"P", point_json(B.point)},
          {"basis", to_json(B.basis)},
          {"checks",
           {{"metric", report.metric},
            {"curvature", report.curvature},
            {"y_slots", report.y_slots},
            {"tolerance", report.tolerance},
            {"admissible", report.admissible}}}};
}

std::string alpha_csv(const AlphaScan& scan, int p) {
  std::ostringstream os;
  for (int i = 1; i <= p; ++i) os << 'x' << i << ',';
  os << "alpha\n";
  for (const auto& s : scan.samples) {
    for (Eigen::Index i = 0; i < s.x.size(); ++i) os << format_double(s.x(i)) << ',';
    os << format_double(s.alpha) << '\n';
  }
  return os.str();
}

nlohmann::json alpha_summary(const AlphaScan& scan) {
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& s : scan.skipped) skipped.push_back({{"x", to_json(s.x)}, {"reason", s.reason}});
  return {{"min", scan.min},
          {"max", scan.max},
          {"spread", scan.spread},
          {"threshold", scan.threshold},
          {"verdict", to_string(scan.verdict)},
          {"evaluated", scan.samples.size()},
          {"skipped", skipped}};
}

nlohmann::json spectral_json(const SpectralReport& report) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : report.classes) {
    nlohmann::json entry = fingerprint_json(c.representative);
    entry["count"] = c.count;
    classes.push_back(std::move(entry));
  }
  return {{"kind", report.kind.name()},
          {"n", report.n},
          {"seed", report.seed},
          {"eigenvalue_tolerance", report.tolerance},
          {"num_distinct_fingerprints", report.num_distinct()},
          {"fingerprints", classes}};
}

}  // namespace curvhom
