#include <doctest.h>

#include "povmkit/noise.hpp"
#include "povmkit/robustness.hpp"
#include "test_helpers.hpp"

using namespace povmkit;
using namespace povmkit::testing;

namespace {

Povm diagonal_example() {
  ComplexMatrix a0 = ComplexMatrix::Zero(3, 3);
  a0(0, 0) = 1.0 / 3.0;
  a0(1, 1) = 2.0 / 3.0;
  ComplexMatrix a1 = ComplexMatrix::Identity(3, 3) - a0;
  return validate_povm({a0, a1});
}

}  // namespace

TEST_CASE("validate_povm accepts valid POVMs") {
  ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
  Povm p = validate_povm({half, half});
  CHECK(p.dim == 2);
  CHECK(p.outcomes() == 2);

  CHECK(diagonal_example().dim == 3);
}

TEST_CASE("validate_povm rejects bad input") {
  ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  try {
    validate_povm({id2, id2});
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::sum_not_identity);
  }
  try {
    validate_povm({-0.1 * id2, 1.1 * id2});
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::effect_not_psd);
  }
  try {
    validate_povm({id2, ComplexMatrix::Identity(3, 3)});
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
  }
  CHECK_THROWS_AS(validate_povm({}), Error);
}

TEST_CASE("trivial weights sum to one for every model") {
  Rng rng(51);
  for (int trial = 0; trial < 12; ++trial) {
    int d = 2 + static_cast<int>(rng.next() % 3);
    int n = 2 + static_cast<int>(rng.next() % 3);
    Povm povm = sample_random_povm(d, n, rng);
    for (NoiseKind kind :
         {NoiseKind::uniform, NoiseKind::depolarizing, NoiseKind::physical}) {
      auto t = trivial_weights(povm, kind);
      double sum = 0.0;
      for (double w : t) {
        CHECK(w >= -1e-12);
        sum += w;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("physical weights: swapped traces for two outcomes") {
  Povm a = diagonal_example();
  auto t = trivial_weights(a, NoiseKind::physical);
  // 1 - Tr A_0 / 3 = Tr A_1 / 3 and vice versa.
  CHECK(t[0] == doctest::Approx(a.effect(1).trace().real() / 3.0));
  CHECK(t[1] == doctest::Approx(a.effect(0).trace().real() / 3.0));
}

TEST_CASE("apply_noise endpoints and the physical two-outcome formula") {
  Povm a = diagonal_example();
  Povm same = apply_noise(a, NoiseKind::depolarizing, 1.0);
  for (int i = 0; i < 2; ++i)
    CHECK(entry_distance(same.effect(i), a.effect(i)) < 1e-15);

  ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
  Povm u = apply_noise(validate_povm({half, half}), NoiseKind::uniform, 0.0);
  for (int i = 0; i < 2; ++i) CHECK(entry_distance(u.effect(i), half) < 1e-15);

  double beta00 = 0.4;
  Povm noisy = apply_noise(a, NoiseKind::physical, beta00);
  ComplexMatrix expect0 =
      beta00 * a.effect(0) + (1.0 - beta00) * (a.effect(1).trace().real() / 3.0) *
                                 ComplexMatrix::Identity(3, 3);
  CHECK(entry_distance(noisy.effect(0), expect0) < 1e-14);
}

TEST_CASE("apply_noise errors") {
  Povm a = diagonal_example();
  CHECK_THROWS_AS(apply_noise(a, NoiseKind::uniform, 1.5), Error);
  Povm one = validate_povm({ComplexMatrix::Identity(2, 2)});
  try {
    apply_noise(one, NoiseKind::physical, 0.5);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::physical_needs_two_outcomes);
  }
}

TEST_CASE("noisy POVMs stay valid across models and levels") {
  Rng rng(53);
  for (int trial = 0; trial < 8; ++trial) {
    Povm povm = sample_random_povm(3, 3, rng);
    for (NoiseKind kind :
         {NoiseKind::uniform, NoiseKind::depolarizing, NoiseKind::physical})
      for (double level : {0.0, 0.3, 0.7, 1.0})
        CHECK_NOTHROW(apply_noise(povm, kind, level));
  }
}

TEST_CASE("the three channels coincide on unbiased qubit POVMs") {
  Povm povm = unbiased_qubit_povm(Eigen::Vector3d(0.6, 0.0, 0.5));
  Povm nu = apply_noise(povm, NoiseKind::uniform, 0.42);
  Povm nd = apply_noise(povm, NoiseKind::depolarizing, 0.42);
  Povm np = apply_noise(povm, NoiseKind::physical, 0.42);
  for (int i = 0; i < 2; ++i) {
    CHECK(entry_distance(nu.effect(i), nd.effect(i)) < 1e-14);
    CHECK(entry_distance(nu.effect(i), np.effect(i)) < 1e-14);
  }
}

TEST_CASE("born probabilities") {
  Povm a = diagonal_example();
  RealVector p = born_probabilities(a, maximally_mixed_state(3));
  CHECK(p[0] == doctest::Approx(1.0 / 3.0));
  CHECK(p[1] == doctest::Approx(2.0 / 3.0));

  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  Povm sharp = validate_povm({ground, excited});
  RealVector q = born_probabilities(sharp, make_state(ground));
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(q[1] == doctest::Approx(0.0));

  CHECK_THROWS_AS(born_probabilities(a, maximally_mixed_state(2)), Error);
}

TEST_CASE("born probabilities sum to one on a random corpus") {
  Rng rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 2 + static_cast<int>(rng.next() % 3);
    Povm povm = sample_random_povm(d, 2 + static_cast<int>(rng.next() % 3), rng);
    ComplexMatrix g = random_complex(d, d, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    RealVector p = born_probabilities(povm, make_state(rho));
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-9));
    for (int i = 0; i < p.size(); ++i) CHECK(p[i] > -1e-10);
  }
}

TEST_CASE("check_marginals on diagonal joints") {
  Povm a = diagonal_example();
  JointPovm diag;
  diag.dim = 3;
  diag.rows = 2;
  diag.cols = 2;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      diag.grid.push_back(i == j ? a.effect(i)
                                 : ComplexMatrix::Zero(3, 3));
  MarginalReport r = check_marginals(diag, a, a, 1e-9);
  CHECK(r.pass);

  // Product joint of commuting diagonal POVMs.
  ComplexMatrix b0 = ComplexMatrix::Zero(3, 3);
  b0(0, 0) = 0.2;
  b0(1, 1) = 0.9;
  b0(2, 2) = 0.4;
  Povm b = validate_povm({b0, ComplexMatrix::Identity(3, 3) - b0});
  JointPovm prod;
  prod.dim = 3;
  prod.rows = 2;
  prod.cols = 2;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      prod.grid.push_back(a.effect(i) * b.effect(j));
  CHECK(check_marginals(prod, a, b, 1e-9).pass);

  prod.at(0, 1)(0, 0) += 1e-3;
  CHECK_FALSE(check_marginals(prod, a, b, 1e-6).pass);
}

TEST_CASE("busch criterion on sharp and scaled pairs") {
  Povm z1 = unbiased_qubit_povm(Eigen::Vector3d(0, 0, 1));
  Povm z2 = unbiased_qubit_povm(Eigen::Vector3d(0, 0, 1));
  CHECK(busch_compatibility(z1, z2));

  Povm x = unbiased_qubit_povm(Eigen::Vector3d(1, 0, 0));
  CHECK_FALSE(busch_compatibility(x, z1));

  double critical = 1.0 / std::sqrt(2.0);
  auto scaled = [](double alpha, const Eigen::Vector3d& axis) {
    return unbiased_qubit_povm(alpha * axis);
  };
  CHECK(busch_compatibility(scaled(critical - 1e-3, {1, 0, 0}),
                            scaled(critical - 1e-3, {0, 0, 1})));
  CHECK_FALSE(busch_compatibility(scaled(critical + 1e-3, {1, 0, 0}),
                                  scaled(critical + 1e-3, {0, 0, 1})));
}

TEST_CASE("busch criterion rejects non-qubit and biased input") {
  Povm a = diagonal_example();
  try {
    busch_compatibility(a, a);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_qubit);
  }
  ComplexMatrix biased = ComplexMatrix::Zero(2, 2);
  biased(0, 0) = 0.9;
  biased(1, 1) = 0.4;
  Povm b = validate_povm({biased, ComplexMatrix::Identity(2, 2) - biased});
  try {
    busch_compatibility(b, b);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_unbiased);
  }
}
