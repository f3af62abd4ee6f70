#include "curvhom/spectral.hpp"

#include "curvhom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <stdexcept>

namespace curvhom {

namespace {

constexpr int kMaxResamples = 1000;
// Gram-Schmidt remainders with |g(Z,Z)| below this are resampled.
constexpr double kMinRemainderNorm = 1e-3;

void require_tangent(const PointCurvature& pc, const Eigen::VectorXd& v) {
  if (v.size() != 2 * pc.p()) throw std::invalid_argument("tangent vector must have 2p entries");
}

// The operator with g(A U, V) = M(U, V), M supported on the x-block.
Operator raise(const PointCurvature& pc, const Eigen::MatrixXd& m_x) {
  const int p = pc.p();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  M.topLeftCorner(p, p) = m_x;
  return pc.g_inv * M.transpose();
}

}  // namespace

double PointCurvature::inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  return u.dot(metric.g * v);
}

PointCurvature point_curvature(const FieldSpec& field, const Point& P) {
  const Jet3 jet = jet3(field, std::span<const double>(P.x.data(), P.x.size()));
  PointCurvature pc;
  pc.metric = metric_from_jet(jet);
  pc.g_inv = pc.metric.inverse();
  pc.R = curvature_gauss(jet.hess);
  pc.nabla = nabla_curvature_from_jet(jet);
  return pc;
}

Operator jacobi(const PointCurvature& pc, const Eigen::VectorXd& X) {
  require_tangent(pc, X);
  const int p = pc.p();
  const Eigen::VectorXd a = X.head(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (int u = 0; u < p; ++u)
    for (int v = 0; v < p; ++v)
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) m(u, v) += pc.R(u, i, j, v) * a(i) * a(j);
  return raise(pc, m);
}

Operator szabo(const PointCurvature& pc, const Eigen::VectorXd& X) {
  require_tangent(pc, X);
  const int p = pc.p();
  const Eigen::VectorXd a = X.head(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (int u = 0; u < p; ++u)
    for (int v = 0; v < p; ++v)
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
          for (int k = 0; k < p; ++k) m(u, v) += pc.nabla(u, i, j, v, k) * a(i) * a(j) * a(k);
  return raise(pc, m);
}

Operator skew_curv(const PointCurvature& pc, const Eigen::VectorXd& Y, const Eigen::VectorXd& Z) {
  require_tangent(pc, Y);
  require_tangent(pc, Z);
  const double yy = pc.inner(Y, Y), zz = pc.inner(Z, Z), yz = pc.inner(Y, Z);
  const bool unit = std::abs(std::abs(yy) - 1.0) < kOrthonormalTolerance &&
                    std::abs(zz - yy) < kOrthonormalTolerance;
  if (!unit || std::abs(yz) >= kOrthonormalTolerance) {
    throw std::invalid_argument("skew_curv: {Y, Z} is not an orthonormal pair of one causal type");
  }
  const int p = pc.p();
  const Eigen::VectorXd y = Y.head(p), z = Z.head(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for (int u = 0; u < p; ++u)
    for (int v = 0; v < p; ++v)
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) m(u, v) += pc.R(i, j, u, v) * y(i) * z(j);
  return raise(pc, m);
}

Operator higher_jacobi(const PointCurvature& pc, const std::vector<Eigen::VectorXd>& basis) {
  if (basis.empty()) throw std::invalid_argument("higher_jacobi: empty basis");
  const int n = 2 * pc.p();
  Operator sum = Operator::Zero(n, n);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    require_tangent(pc, basis[i]);
    const double ii = pc.inner(basis[i], basis[i]);
    if (std::abs(std::abs(ii) - 1.0) >= kOrthonormalTolerance) {
      throw std::invalid_argument("higher_jacobi: basis vector " + std::to_string(i) +
                                  " does not have g-norm +-1");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(pc.inner(basis[i], basis[j])) >= kOrthonormalTolerance) {
        throw std::invalid_argument("higher_jacobi: basis is not g-orthogonal");
      }
    }
    sum += (ii > 0.0 ? 1.0 : -1.0) * jacobi(pc, basis[i]);
  }
  return sum;
}

Operator jacobi(const FieldSpec& field, const Point& P, const Eigen::VectorXd& X) {
  return jacobi(point_curvature(field, P), X);
}
Operator szabo(const FieldSpec& field, const Point& P, const Eigen::VectorXd& X) {
  return szabo(point_curvature(field, P), X);
}
Operator skew_curv(const FieldSpec& field, const Point& P, const Eigen::VectorXd& Y,
                   const Eigen::VectorXd& Z) {
  return skew_curv(point_curvature(field, P), Y, Z);
}
Operator higher_jacobi(const FieldSpec& field, const Point& P,
                       const std::vector<Eigen::VectorXd>& basis) {
  return higher_jacobi(point_curvature(field, P), basis);
}

double self_adjoint_residual(const Operator& A, const Eigen::MatrixXd& g) {
  const Eigen::MatrixXd gA = g * A;
  return (gA - gA.transpose()).cwiseAbs().maxCoeff();
}

double skew_adjoint_residual(const Operator& A, const Eigen::MatrixXd& g) {
  const Eigen::MatrixXd gA = g * A;
  return (gA + gA.transpose()).cwiseAbs().maxCoeff();
}

Fingerprint fingerprint(const Operator& A, double reference_norm) {
  const int n = static_cast<int>(A.rows());
  Fingerprint fp;
  fp.ranks.push_back(n);
  const double norm = n ? Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()(0) : 0.0;
  const double scale = std::max(norm, reference_norm);
  const bool zero = norm < kZeroOperatorNorm || norm < kRankRelTolerance * reference_norm;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    power = power * A;
    int rank = 0;
    if (!zero) {
      const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(power).singularValues();
      const double cut = kRankRelTolerance * std::pow(scale, k);
      rank = static_cast<int>((sv.array() > cut).count());
    }
    if (rank == fp.ranks.back()) break;
    fp.ranks.push_back(rank);
    if (rank == 0) break;
  }

  std::vector<std::complex<double>> ev(static_cast<std::size_t>(n));
  if (n) {
    const Eigen::VectorXcd values = Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues();
    for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = values(i);
  }
  std::sort(ev.begin(), ev.end(),
            [](const auto& a, const auto& b) { return std::abs(a) < std::abs(b); });
  const int nullity = n - fp.ranks.back();
  for (int i = 0; i < nullity; ++i) ev[static_cast<std::size_t>(i)] = 0.0;
  std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  fp.eigenvalues = std::move(ev);
  return fp;
}

bool same_fingerprint(const Fingerprint& a, const Fingerprint& b, double tol, bool compare_ranks) {
  if (compare_ranks && a.ranks != b.ranks) return false;
  if (a.eigenvalues.size() != b.eigenvalues.size()) return false;
  std::vector<bool> used(b.eigenvalues.size(), false);
  for (const auto& x : a.eigenvalues) {
    bool matched = false;
    for (std::size_t j = 0; j < b.eigenvalues.size() && !matched; ++j) {
      if (!used[j] && std::abs(x - b.eigenvalues[j]) <= tol) {
        used[j] = true;
        matched = true;
      }
    }
    if (!matched) return false;
  }
  return true;
}

std::string SpectralKind::name() const {
  const std::string causal = sign > 0 ? "spacelike" : "timelike";
  switch (family) {
    case SpectralFamily::Jacobi: return "jacobi-" + causal;
    case SpectralFamily::Szabo: return "szabo-" + causal;
    case SpectralFamily::Skew: return "skew-" + causal;
    case SpectralFamily::HigherJacobi:
      return "higher-jacobi(" + std::to_string(r) + "," + std::to_string(s) + ")";
  }
  return "unknown";
}

SpectralKind parse_kind(const std::string& text) {
  static const std::regex simple(R"((jacobi|szabo|skew)-(spacelike|timelike))");
  static const std::regex higher(R"(higher-jacobi\((\d+),(\d+)\))");
  std::smatch m;
  SpectralKind kind;
  if (std::regex_match(text, m, simple)) {
    kind.family = m[1] == "jacobi"  ? SpectralFamily::Jacobi
                  : m[1] == "szabo" ? SpectralFamily::Szabo
                                    : SpectralFamily::Skew;
    kind.sign = m[2] == "spacelike" ? 1 : -1;
    return kind;
  }
  if (std::regex_match(text, m, higher)) {
    kind.family = SpectralFamily::HigherJacobi;
    kind.r = std::stoi(m[1]);
    kind.s = std::stoi(m[2]);
    return kind;
  }
  throw std::invalid_argument("unknown operator kind '" + text + "'");
}

Eigen::VectorXd sample_unit_vector(const MetricValue& g, int sign, std::mt19937_64& rng) {
  const int p = g.p();
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd a(p), b(p);
  do {
    for (int i = 0; i < p; ++i) a(i) = normal(rng);
  } while (a.norm() < 1e-12);
  a.normalize();
  for (int i = 0; i < p; ++i) b(i) = normal(rng);
  // g(Z,Z) = (a.grad)^2 + 2 a.b; moving b by t a adds 2t|a|^2 = 2t.
  const double da = a.dot(g.grad);
  const double t = (sign - da * da - 2.0 * a.dot(b)) / 2.0;
  b += t * a;
  Eigen::VectorXd Z(2 * p);
  Z << a, b;
  return Z;
}

std::vector<Eigen::VectorXd> sample_orthonormal(const MetricValue& g, int r, int s,
                                                std::mt19937_64& rng) {
  const int p = g.p();
  if (r < 0 || s < 0 || r > p || s > p || r + s == 0) {
    throw std::invalid_argument("no non-degenerate subspace of type (" + std::to_string(r) + "," +
                                std::to_string(s) + ") in signature (" + std::to_string(p) + "," +
                                std::to_string(p) + ")");
  }
  std::vector<Eigen::VectorXd> basis;
  std::vector<int> signs;
  for (int slot = 0; slot < r + s; ++slot) {
    const int sign = slot < r ? 1 : -1;
    bool done = false;
    for (int attempt = 0; attempt < kMaxResamples && !done; ++attempt) {
      Eigen::VectorXd z = sample_unit_vector(g, sign, rng);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        z -= signs[k] * basis[k].dot(g.g * z) * basis[k];
      }
      const double nz = z.dot(g.g * z);
      if (nz * sign > kMinRemainderNorm) {
        basis.push_back(z / std::sqrt(std::abs(nz)));
        signs.push_back(sign);
        done = true;
      }
    }
    if (!done) throw std::runtime_error("sample_orthonormal: resampling limit reached");
  }
  return basis;
}

SpectralReport sample_constancy(const SpectralKind& kind, const FieldSpec& field, const Point& P,
                                int n, std::uint64_t seed, double tolerance) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  if (!second_ff(field, P).positive_definite) {
    throw HypothesisError("second fundamental form is not positive definite at the sample point");
  }
  const PointCurvature pc = point_curvature(field, P);
  SpectralReport report;
  report.kind = kind;
  report.n = n;
  report.seed = seed;
  report.tolerance = tolerance;

  std::mt19937_64 rng(seed);
  for (int k = 0; k < n; ++k) {
    Operator A;
    double reference = 0.0;
    switch (kind.family) {
      case SpectralFamily::Jacobi:
        A = jacobi(pc, sample_unit_vector(pc.metric, kind.sign, rng));
        break;
      case SpectralFamily::Szabo:
        A = szabo(pc, sample_unit_vector(pc.metric, kind.sign, rng));
        break;
      case SpectralFamily::Skew: {
        const auto pair = sample_orthonormal(pc.metric, kind.sign > 0 ? 2 : 0,
                                             kind.sign > 0 ? 0 : 2, rng);
        A = skew_curv(pc, pair[0], pair[1]);
        break;
      }
      case SpectralFamily::HigherJacobi: {
        const auto basis = sample_orthonormal(pc.metric, kind.r, kind.s, rng);
        A = higher_jacobi(pc, basis);
        for (const auto& e : basis) {
          reference += Eigen::JacobiSVD<Eigen::MatrixXd>(jacobi(pc, e)).singularValues()(0);
        }
        break;
      }
    }
    const Fingerprint fp = fingerprint(A, reference);
    auto it = std::find_if(report.classes.begin(), report.classes.end(), [&](const auto& c) {
      return same_fingerprint(c.representative, fp, report.tolerance, true);
    });
    if (it == report.classes.end()) {
      report.classes.push_back({fp, 1});
    } else {
      ++it->count;
    }
  }
  return report;
}

}  // namespace curvhom
