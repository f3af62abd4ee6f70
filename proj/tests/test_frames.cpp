#include "curvhom/errors.hpp"
#include "curvhom/frames.hpp"

#include "doctest.h"
#include "support/generators.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

using namespace curvhom;
using curvhom::testing::base_seed;

namespace {

FieldSpec random_canonical(std::mt19937_64& rng, int p) {
  return canonical_f(parse_field(testing::random_theta(rng), 1), p);
}

Point random_point(std::mt19937_64& rng, int p) {
  Point P = Point::at_x(testing::random_vector(rng, p));
  P.y = testing::random_vector(rng, p, -5, 5);
  return P;
}

}  // namespace

TEST_CASE("admissible frame at the origin of the quadratic field") {
  const FieldSpec f0 = canonical_f(parse_field("0", 1), 3);
  const AdmissibleBasis B = admissible_basis(f0, Point::at_x(Eigen::Vector3d::Zero()));
  // grad f = 0 and L = I there: the coordinate frame is already admissible.
  CHECK(B.basis == Eigen::MatrixXd::Identity(6, 6));
}

TEST_CASE("property: admissible frames at random points of random fields") {
  std::mt19937_64 rng(base_seed() + 30);
  for (int k = 0; k < 40; ++k) {
    const int p = testing::uniform_int(rng, 1, 5);
    const FieldSpec f = random_canonical(rng, p);
    const Point P = random_point(rng, p);
    const AdmissibleBasis B = admissible_basis(f, P);
    const AdmissibilityReport rep = is_admissible(B.basis, f, P, 1e-9);
    CAPTURE(rep.metric);
    CAPTURE(rep.curvature);
    CHECK(rep.admissible);
  }
}

TEST_CASE("property: general fields with positive definite Hessian") {
  std::mt19937_64 rng(base_seed() + 31);
  int tried = 0;
  while (tried < 30) {
    const int p = testing::uniform_int(rng, 2, 4);
    const FieldSpec f =
        parse_field("0.5*(" + std::string("x1^2") + [&] {
          std::string s;
          for (int i = 2; i <= p; ++i) s += "+x" + std::to_string(i) + "^2";
          return s;
        }() + ")+0.1*(" + testing::random_expression(rng, p, 2) + ")", p);
    const Point P = random_point(rng, p);
    if (!second_ff(f, P).positive_definite) continue;
    ++tried;
    CHECK(is_admissible(admissible_basis(f, P).basis, f, P, 1e-9).admissible);
  }
}

TEST_CASE("permuted pivots give another admissible frame") {
  std::mt19937_64 rng(base_seed() + 32);
  const FieldSpec f = random_canonical(rng, 4);
  const Point P = random_point(rng, 4);
  std::vector<int> order(4);
  std::iota(order.begin(), order.end(), 0);
  const AdmissibleBasis natural = admissible_basis(f, P);
  int distinct = 0;
  do {
    const AdmissibleBasis B = admissible_basis(f, P, order);
    CHECK(is_admissible(B.basis, f, P, 1e-9).admissible);
    if ((B.basis - natural.basis).cwiseAbs().maxCoeff() > 1e-6) ++distinct;
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(distinct > 0);
  CHECK_THROWS_AS(admissible_basis(f, P, std::vector<int>{0, 0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(admissible_basis(f, P, std::vector<int>{0, 1, 2}), std::invalid_argument);
}

TEST_CASE("orthogonal mixing preserves admissibility") {
  std::mt19937_64 rng(base_seed() + 33);
  for (int k = 0; k < 20; ++k) {
    const int p = testing::uniform_int(rng, 2, 5);
    const FieldSpec f = random_canonical(rng, p);
    const Point P = random_point(rng, p);
    const AdmissibleBasis B = admissible_basis(f, P);
    CHECK(is_admissible(random_admissible(B, rng()).basis, f, P, 1e-9).admissible);
    CHECK(is_admissible(mix_admissible(B, testing::random_orthogonal(rng, p)).basis, f, P, 1e-9)
              .admissible);
  }
}

TEST_CASE("random_admissible is seeded") {
  const FieldSpec f = canonical_f(parse_field("0.5*sin(x1)", 1), 3);
  const AdmissibleBasis B = admissible_basis(f, Point::at_x(Eigen::Vector3d(0.3, 0, 0)));
  CHECK(random_admissible(B, 5).basis == random_admissible(B, 5).basis);
  CHECK(random_admissible(B, 5).basis != random_admissible(B, 6).basis);
}

TEST_CASE("non-admissible input and hypothesis violations") {
  const FieldSpec f = canonical_f(parse_field("0.5*sin(x1)", 1), 3);
  AdmissibleBasis B = admissible_basis(f, Point::at_x(Eigen::Vector3d::Zero()));
  B.basis(0, 0) *= 2.0;
  CHECK_FALSE(is_admissible(B.basis, f, B.point, 1e-9).admissible);
  CHECK_THROWS_AS(random_admissible(B, 1), std::invalid_argument);
  // Non-square mixing matrix.
  CHECK_THROWS_AS(mix_admissible(B, Eigen::MatrixXd::Identity(2, 3)), std::invalid_argument);

  // 1 + theta'' = 1 - 2 = -1 < 0.
  const FieldSpec bad = canonical_f(parse_field("-x1^2", 1), 3);
  CHECK_THROWS_AS(admissible_basis(bad, Point::at_x(Eigen::Vector3d::Zero())), HypothesisError);
}

TEST_CASE("property: homogeneity map pulls back g and R but not nabla R") {
  std::mt19937_64 rng(base_seed() + 34);
  const FieldSpec f = canonical_f(parse_field("0.5*sin(x1)", 1), 3);
  double nabla = 0.0;
  for (int k = 0; k < 30; ++k) {
    const Point P = random_point(rng, 3), Q = random_point(rng, 3);
    const PullbackResiduals r = pullback_residuals(f, P, Q, homogeneity_map(f, P, Q));
    CHECK(r.metric < 1e-10);
    CHECK(r.curvature < 1e-9);
    nabla = std::max(nabla, r.nabla);
  }
  CHECK(nabla > 1e-3);
}

TEST_CASE("homogeneity map of the quadratic field preserves nabla R = 0") {
  std::mt19937_64 rng(base_seed() + 35);
  const FieldSpec f0 = canonical_f(parse_field("0", 1), 3);
  const Point P = random_point(rng, 3), Q = random_point(rng, 3);
  const PullbackResiduals r = pullback_residuals(f0, P, Q, homogeneity_map(f0, P, Q));
  CHECK(r.metric < 1e-12);
  CHECK(r.curvature < 1e-12);
  CHECK(r.nabla == 0.0);
}
