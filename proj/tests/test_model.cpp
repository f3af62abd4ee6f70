#include "curvhom/errors.hpp"
#include "curvhom/model.hpp"

#include "doctest.h"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace curvhom;
using curvhom::testing::base_seed;

TEST_CASE("build_R_phi matches the defining formula") {
  std::mt19937_64 rng(base_seed() + 20);
  for (int r = 1; r <= 6; ++r) {
    const BilForm phi = testing::random_spd(rng, r);
    CHECK(max_abs_diff(build_R_phi(phi), testing::r_phi(phi)) == 0.0);
  }
  CHECK_THROWS_AS(build_R_phi(Eigen::MatrixXd::Ones(2, 3)), std::invalid_argument);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(3, 3);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(build_R_phi(asym), std::invalid_argument);
}

TEST_CASE("R_phi for the identity is the model normal form") {
  const AlgCurv R = build_R_phi(Eigen::MatrixXd::Identity(3, 3));
  R.for_each_index([&](const std::array<int, 4>& idx) {
    const auto [i, j, k, l] = idx;
    const double expected = (i == l && j == k ? 1.0 : 0.0) - (i == k && j == l ? 1.0 : 0.0);
    CHECK(R.at(idx) == expected);
  });
}

TEST_CASE("property: R_phi satisfies the curvature symmetries") {
  std::mt19937_64 rng(base_seed() + 21);
  for (int k = 0; k < 50; ++k) {
    const int r = testing::uniform_int(rng, 2, 6);
    // Symmetric, not necessarily definite.
    Eigen::MatrixXd m(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) m(i, j) = testing::uniform(rng, -2, 2);
    const BilForm phi = m + m.transpose();
    CHECK(check_act_symmetries(build_R_phi(phi), 1e-13).pass);
  }
}

TEST_CASE("symmetry check flags a tensor without the symmetries") {
  AlgCurv R(3);
  R(0, 1, 1, 0) = 1.0;
  const SymmetryReport rep = check_act_symmetries(R, 1e-10);
  CHECK_FALSE(rep.pass);
  CHECK(rep.violation.antisymmetry == 1.0);
}

TEST_CASE("recover_phi: diagonal example") {
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(3, 3);
  phi.diagonal() << 1.0, 2.0, 3.0;
  const Recovery rec = recover_phi(build_R_phi(phi));
  CHECK((rec.phi - phi).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("property: recover_phi round-trips random positive definite forms") {
  std::mt19937_64 rng(base_seed() + 22);
  for (int r = 3; r <= 6; ++r) {
    double worst = 0.0;
    for (int k = 0; k < 25; ++k) {
      const BilForm phi = testing::random_spd(rng, r);
      worst = std::max(worst, (recover_phi(build_R_phi(phi)).phi - phi).cwiseAbs().maxCoeff());
    }
    CAPTURE(r);
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("recover_phi rejects small dimensions and non-R_phi tensors") {
  CHECK_THROWS_AS(recover_phi(build_R_phi(Eigen::MatrixXd::Identity(2, 2))),
                  std::invalid_argument);
  // A curvature tensor that is not of the form R_phi: R_phi + R_psi.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(4, 4);
  b(0, 0) = b(1, 1) = 1.0;
  const AlgCurv Ra = build_R_phi(a), Rb = build_R_phi(b);
  AlgCurv sum(4);
  for (std::size_t q = 0; q < sum.size(); ++q) sum.data()[q] = Ra.data()[q] - 3.0 * Rb.data()[q];
  CHECK_THROWS_AS(recover_phi(sum), FitError);
}

TEST_CASE("dimension two counterexample") {
  const auto [a, b] = dim2_counterexample();
  CHECK((a - b).cwiseAbs().maxCoeff() > 0.5);
  CHECK(cholesky_factor(a).has_value());
  CHECK(cholesky_factor(b).has_value());
  CHECK(max_abs_diff(build_R_phi(a), build_R_phi(b)) < 1e-15);
}

TEST_CASE("model space") {
  const ModelSpace m = model_space(3);
  CHECK(m.p == 3);
  CHECK(m.inner_product.rows() == 6);
  CHECK(signature(m.inner_product) == std::pair<int, int>{3, 3});
  CHECK(m.curvature(0, 1, 1, 0) == 1.0);
  CHECK(m.curvature(3, 1, 1, 0) == 0.0);
  CHECK(check_act_symmetries(m.curvature, 1e-15).pass);
  CHECK_THROWS_AS(model_space(0), std::invalid_argument);
}
