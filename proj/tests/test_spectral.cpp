#include "curvhom/errors.hpp"
#include "curvhom/spectral.hpp"

#include "doctest.h"
#include "support/generators.hpp"

#include <cmath>

using namespace curvhom;
using curvhom::testing::base_seed;

namespace {

const FieldSpec& half_sine() {
  static const FieldSpec f = canonical_f(parse_field("0.5*sin(x1)", 1), 3);
  return f;
}

const FieldSpec& quadratic() {
  static const FieldSpec f = canonical_f(parse_field("0", 1), 3);
  return f;
}

Point sample_point(std::mt19937_64& rng) {
  Point P = Point::at_x(testing::random_vector(rng, 3));
  P.y = testing::random_vector(rng, 3);
  return P;
}

}  // namespace

TEST_CASE("sampled vectors have the requested causal type") {
  std::mt19937_64 rng(base_seed() + 50);
  const PointCurvature pc = point_curvature(half_sine(), sample_point(rng));
  for (int k = 0; k < 100; ++k) {
    for (int sign : {1, -1}) {
      const Eigen::VectorXd Z = sample_unit_vector(pc.metric, sign, rng);
      CHECK(std::abs(pc.inner(Z, Z) - sign) < 1e-12);
      CHECK(std::abs(Z.head(3).norm() - 1.0) < 1e-15);
    }
  }
}

TEST_CASE("sampled orthonormal families") {
  std::mt19937_64 rng(base_seed() + 51);
  const PointCurvature pc = point_curvature(half_sine(), sample_point(rng));
  for (auto [r, s] : {std::pair{1, 1}, std::pair{2, 0}, std::pair{0, 3}, std::pair{3, 3}}) {
    const auto E = sample_orthonormal(pc.metric, r, s, rng);
    REQUIRE(static_cast<int>(E.size()) == r + s);
    for (int i = 0; i < r + s; ++i)
      for (int j = 0; j < r + s; ++j) {
        const double expected = i != j ? 0.0 : (i < r ? 1.0 : -1.0);
        CHECK(std::abs(pc.inner(E[i], E[j]) - expected) < 1e-10);
      }
  }
  CHECK_THROWS_AS(sample_orthonormal(pc.metric, 4, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_orthonormal(pc.metric, 0, 0, rng), std::invalid_argument);
}

TEST_CASE("property: Jacobi and Szabo operators are self-adjoint, skew operators skew-adjoint") {
  std::mt19937_64 rng(base_seed() + 52);
  for (int k = 0; k < 50; ++k) {
    const PointCurvature pc = point_curvature(half_sine(), sample_point(rng));
    const Eigen::VectorXd X = testing::random_vector(rng, 6, -2, 2);
    CHECK(self_adjoint_residual(jacobi(pc, X), pc.metric.g) < 1e-10);
    CHECK(self_adjoint_residual(szabo(pc, X), pc.metric.g) < 1e-10);
    const auto pair = sample_orthonormal(pc.metric, k % 2 ? 2 : 0, k % 2 ? 0 : 2, rng);
    CHECK(skew_adjoint_residual(skew_curv(pc, pair[0], pair[1]), pc.metric.g) < 1e-10);
  }
}

TEST_CASE("Jacobi operator defining identity") {
  std::mt19937_64 rng(base_seed() + 53);
  const Point P = sample_point(rng);
  const PointCurvature pc = point_curvature(half_sine(), P);
  const Eigen::VectorXd X = testing::random_vector(rng, 6);
  const Operator J = jacobi(pc, X);
  const Curv4 R = extend_by_zero(pc.R, 6);
  for (int u = 0; u < 6; ++u)
    for (int v = 0; v < 6; ++v) {
      double r = 0.0;
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) r += R(u, a, b, v) * X(a) * X(b);
      const double lhs = Eigen::VectorXd::Unit(6, v).dot(pc.metric.g * J.col(u));
      CHECK(lhs == doctest::Approx(r).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("property: J(tX) = t^2 J(X)") {
  std::mt19937_64 rng(base_seed() + 54);
  for (int k = 0; k < 20; ++k) {
    const PointCurvature pc = point_curvature(half_sine(), sample_point(rng));
    const Eigen::VectorXd X = testing::random_vector(rng, 6);
    const double t = testing::uniform(rng, -3, 3);
    const Operator a = jacobi(pc, t * X), b = t * t * jacobi(pc, X);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, b.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("skew operator vanishes on the Y distribution") {
  std::mt19937_64 rng(base_seed() + 55);
  const PointCurvature pc = point_curvature(half_sine(), sample_point(rng));
  // The Y distribution is totally null, so it holds no orthonormal pair and
  // skew_curv rejects one; the vanishing is a statement about R itself.
  Eigen::VectorXd Y = Eigen::VectorXd::Zero(6), Z = Eigen::VectorXd::Zero(6);
  Y(3) = 1.0;
  Z(4) = 1.0;
  CHECK_THROWS_AS(skew_curv(pc, Y, Z), std::invalid_argument);
  // Curvature with both slots in Y is zero.
  const Curv4 R = extend_by_zero(pc.R, 6);
  for (int u = 0; u < 6; ++u)
    for (int v = 0; v < 6; ++v) CHECK(R(3, 4, u, v) == 0.0);
}

TEST_CASE("higher-order Jacobi operator") {
  std::mt19937_64 rng(base_seed() + 56);
  const PointCurvature pc = point_curvature(half_sine(), sample_point(rng));

  const Eigen::VectorXd X = sample_unit_vector(pc.metric, 1, rng);
  CHECK((higher_jacobi(pc, {X}) - jacobi(pc, X)).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::VectorXd T = sample_unit_vector(pc.metric, -1, rng);
  CHECK((higher_jacobi(pc, {T}) + jacobi(pc, T)).cwiseAbs().maxCoeff() == 0.0);

  // Whole tangent space of the quadratic field against the signed sum
  // written out term by term.
  const PointCurvature q = point_curvature(quadratic(), sample_point(rng));
  const auto E = sample_orthonormal(q.metric, 3, 3, rng);
  Operator brute = Operator::Zero(6, 6);
  for (std::size_t i = 0; i < E.size(); ++i) brute += (i < 3 ? 1.0 : -1.0) * jacobi(q, E[i]);
  CHECK((higher_jacobi(q, E) - brute).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(higher_jacobi(pc, {}), std::invalid_argument);
  CHECK_THROWS_AS(higher_jacobi(pc, {2.0 * X}), std::invalid_argument);
  CHECK_THROWS_AS(higher_jacobi(pc, {X, X}), std::invalid_argument);
}

TEST_CASE("property: J(pi) does not depend on the orthonormal basis of pi") {
  std::mt19937_64 rng(base_seed() + 57);
  const PointCurvature pc = point_curvature(half_sine(), sample_point(rng));
  for (auto [r, s] : {std::pair{2, 0}, std::pair{1, 1}, std::pair{2, 1}}) {
    const auto E = sample_orthonormal(pc.metric, r, s, rng);
    const Operator A = higher_jacobi(pc, E);
    const Fingerprint fa = fingerprint(A);
    for (int k = 0; k < 20; ++k) {
      // Re-base inside pi: a random element of O(r) x O(s) composed with a
      // boost mixing one spacelike and one timelike vector.
      std::vector<Eigen::VectorXd> F(E.size());
      const Eigen::MatrixXd Or = testing::random_orthogonal(rng, r);
      for (int i = 0; i < r; ++i) {
        F[i] = Eigen::VectorXd::Zero(6);
        for (int j = 0; j < r; ++j) F[i] += Or(i, j) * E[j];
      }
      for (int i = r; i < r + s; ++i) F[i] = E[i];
      if (s > 0) {
        const double t = testing::uniform(rng, -1, 1);
        const Eigen::VectorXd a = F[0], b = F[r];
        F[0] = std::cosh(t) * a + std::sinh(t) * b;
        F[r] = std::sinh(t) * a + std::cosh(t) * b;
      }
      const Operator B = higher_jacobi(pc, F);
      CHECK((A - B).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(same_fingerprint(fa, fingerprint(B), 1e-8, true));
    }
  }
}

TEST_CASE("fingerprints") {
  const Fingerprint zero = fingerprint(Operator::Zero(4, 4));
  CHECK(zero.ranks == std::vector<int>{4, 0});
  const Fingerprint id = fingerprint(Operator::Identity(4, 4));
  CHECK(id.ranks == std::vector<int>{4});
  Operator nil = Operator::Zero(4, 4);
  nil(1, 0) = 1.0;
  nil(2, 1) = 1.0;
  const Fingerprint n = fingerprint(nil);
  CHECK(n.ranks == std::vector<int>{4, 2, 1, 0});
  for (const auto& z : n.eigenvalues) CHECK(z == std::complex<double>(0.0, 0.0));
  CHECK_FALSE(same_fingerprint(n, zero, 1e-7, true));
  CHECK(same_fingerprint(n, zero, 1e-7, false));

  Operator rot = Operator::Zero(2, 2);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  const Fingerprint r = fingerprint(rot);
  CHECK(std::abs(r.eigenvalues[0] - std::complex<double>(0, -1)) < 1e-12);
  CHECK(std::abs(r.eigenvalues[1] - std::complex<double>(0, 1)) < 1e-12);

  // Cancellation noise is not rank when measured against the summands.
  Operator noise = Operator::Zero(3, 3);
  noise(0, 0) = 1e-11;
  CHECK(fingerprint(noise).ranks == std::vector<int>{3, 1});
  CHECK(fingerprint(noise, 100.0).ranks == std::vector<int>{3, 0});
}

TEST_CASE("property: rank sequences are non-increasing") {
  std::mt19937_64 rng(base_seed() + 58);
  for (int k = 0; k < 50; ++k) {
    const PointCurvature pc = point_curvature(half_sine(), sample_point(rng));
    const Fingerprint fp = fingerprint(jacobi(pc, testing::random_vector(rng, 6)));
    for (std::size_t i = 1; i < fp.ranks.size(); ++i) CHECK(fp.ranks[i] <= fp.ranks[i - 1]);
  }
}

TEST_CASE("operator kinds") {
  CHECK(parse_kind("jacobi-spacelike").family == SpectralFamily::Jacobi);
  CHECK(parse_kind("szabo-timelike").sign == -1);
  const SpectralKind h = parse_kind("higher-jacobi(2,1)");
  CHECK(h.family == SpectralFamily::HigherJacobi);
  CHECK(h.r == 2);
  CHECK(h.s == 1);
  for (const char* k : {"jacobi-spacelike", "skew-timelike", "higher-jacobi(1,1)"})
    CHECK(parse_kind(k).name() == k);
  CHECK_THROWS_AS(parse_kind("jacobi"), std::invalid_argument);
  CHECK_THROWS_AS(parse_kind("higher-jacobi(1)"), std::invalid_argument);
}

TEST_CASE("positive constancy claims at sampled points") {
  std::mt19937_64 rng(base_seed() + 59);
  for (int k = 0; k < 2; ++k) {
    const Point P = sample_point(rng);
    for (const char* kind : {"jacobi-spacelike", "jacobi-timelike", "szabo-spacelike",
                             "szabo-timelike", "skew-spacelike", "skew-timelike",
                             "higher-jacobi(1,0)", "higher-jacobi(0,2)", "higher-jacobi(3,2)",
                             "higher-jacobi(2,3)"}) {
      CAPTURE(kind);
      CHECK(sample_constancy(parse_kind(kind), half_sine(), P, 30, rng()).num_distinct() == 1);
    }
  }
}

TEST_CASE("Szabo operator of the quadratic field is zero") {
  const SpectralReport rep = sample_constancy(parse_kind("szabo-timelike"), quadratic(),
                                              Point::at_x(Eigen::Vector3d(0.2, 0.4, -0.1)), 50, 3);
  REQUIRE(rep.num_distinct() == 1);
  CHECK(rep.classes[0].representative.ranks == std::vector<int>{6, 0});
  CHECK(rep.classes[0].count == 50);
}

TEST_CASE("sampling is reproducible and checks its hypothesis") {
  const Point P = Point::at_x(Eigen::Vector3d(0.1, 0.2, 0.3));
  const SpectralReport a = sample_constancy(parse_kind("higher-jacobi(1,1)"), half_sine(), P, 40, 9);
  const SpectralReport b = sample_constancy(parse_kind("higher-jacobi(1,1)"), half_sine(), P, 40, 9);
  REQUIRE(a.num_distinct() == b.num_distinct());
  for (int i = 0; i < a.num_distinct(); ++i) CHECK(a.classes[i].count == b.classes[i].count);

  const FieldSpec bad = parse_field("-0.5*(x1^2+x2^2+x3^2)", 3);
  CHECK_THROWS_AS(sample_constancy(parse_kind("jacobi-spacelike"), bad, P, 5, 1), HypothesisError);
  CHECK_THROWS_AS(sample_constancy(parse_kind("jacobi-spacelike"), half_sine(), P, 0, 1),
                  std::invalid_argument);
}
