#include "curvhom/invariant.hpp"

#include "curvhom/errors.hpp"
#include "curvhom/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curvhom {

double alpha_in_basis(const AdmissibleBasis& B) {
  const Jet3 jet = jet3(B.field, std::span<const double>(B.point.x.data(), B.point.x.size()));
  // nabla R vanishes on Y, so only the x-components of the X_i enter.
  const Eigen::MatrixXd xs = B.X().topRows(B.p());
  return pullback(nabla_curvature_from_jet(jet), xs).squared_norm();
}

double alpha(const FieldSpec& field, const Point& P) {
  return alpha_in_basis(admissible_basis(field, P));
}

double alpha_via_phi(const FieldSpec& field, const Point& P) {
  const Jet3 jet = jet3(field, std::span<const double>(P.x.data(), P.x.size()));
  const SecondFF L = second_ff_from_jet(jet);
  if (!L.positive_definite) {
    throw HypothesisError("second fundamental form is not positive definite");
  }
  const Eigen::MatrixXd phi = recover_phi(curvature_gauss(L)).phi;
  const Eigen::MatrixXd phi_inv = phi.inverse();
  const Tensor5 lower = nabla_curvature_from_jet(jet);
  // Raise every slot: upper = lower(phi^-1 ., ..., phi^-1 .).
  const Tensor5 upper = pullback(lower, phi_inv);
  double s = 0.0;
  for (std::size_t q = 0; q < lower.size(); ++q) s += lower.data()[q] * upper.data()[q];
  return s;
}

double alpha_closed_form(const FieldSpec& theta, double x1, int p) {
  if (theta.max_variable() > 1) throw std::invalid_argument("theta must depend on x1 only");
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  std::vector<double> x(static_cast<std::size_t>(theta.p()), 0.0);
  x[0] = x1;
  const Jet3 jet = jet3(theta, x);
  const double t2 = jet.hess(0, 0);
  const double t3 = jet.third(0, 0, 0);
  const double denom = 1.0 + t2;
  if (!(denom > 0.0)) {
    throw HypothesisError("1 + theta''(x1) <= 0 at x1 = " + std::to_string(x1));
  }
  return 4.0 * (p - 1) * t3 * t3 / (denom * denom * denom);
}

double GridAxis::at(int k) const {
  if (count <= 1) return start;
  return start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1);
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= static_cast<std::size_t>(std::max(a.count, 0));
  return n;
}

Eigen::VectorXd Grid::point(std::size_t flat, int p) const {
  if (static_cast<int>(axes.size()) > p) throw std::invalid_argument("grid has more axes than p");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  for (int a = static_cast<int>(axes.size()) - 1; a >= 0; --a) {
    const auto c = static_cast<std::size_t>(axes[a].count);
    x(a) = axes[a].at(static_cast<int>(flat % c));
    flat /= c;
  }
  return x;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NotLocallyHomogeneous: return "NOT locally homogeneous (alpha non-constant)";
    case Verdict::Inconclusive: return "inconclusive (alpha constant on sampled set)";
  }
  return "unknown";
}

AlphaScan scan_alpha(const FieldSpec& field, const Grid& grid, double threshold) {
  for (const auto& a : grid.axes) {
    if (a.count < 1) throw std::invalid_argument("grid counts must be >= 1");
  }
  AlphaScan scan;
  scan.threshold = threshold;
  const std::size_t n = grid.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::VectorXd x = grid.point(k, field.p());
    try {
      scan.samples.push_back({x, alpha(field, Point::at_x(x))});
    } catch (const HypothesisError& e) {
      scan.skipped.push_back({x, e.what()});
    } catch (const DomainError& e) {
      scan.skipped.push_back({x, e.what()});
    }
  }
  if (!scan.samples.empty()) {
    const auto [lo, hi] = std::minmax_element(
        scan.samples.begin(), scan.samples.end(),
        [](const AlphaSample& a, const AlphaSample& b) { return a.alpha < b.alpha; });
    scan.min = lo->alpha;
    scan.max = hi->alpha;
    scan.spread = (scan.max - scan.min) / std::max(std::abs(scan.max), kSpreadFloor);
  }
  scan.verdict = scan.spread > threshold ? Verdict::NotLocallyHomogeneous : Verdict::Inconclusive;
  return scan;
}

}  // namespace curvhom
