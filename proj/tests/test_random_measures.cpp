#include <doctest.h>

#include "povmkit/robustness.hpp"
#include "test_helpers.hpp"

using namespace povmkit;
using namespace povmkit::testing;

TEST_CASE("rng is deterministic and split streams are independent") {
  Rng a(2024), b(2024);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  Rng base(7);
  Rng s0 = base.split(0);
  Rng s1 = base.split(1);
  CHECK(s0.next() != s1.next());
  CHECK(base.split(0).next() == base.split(0).next());
}

TEST_CASE("haar sample is unitary, scalar case has unit modulus") {
  Rng rng(1);
  CHECK(std::abs(std::abs(sample_haar_unitary(1, rng)(0, 0)) - 1.0) < 1e-12);
  for (int d : {2, 3, 4, 7}) {
    ComplexMatrix u = sample_haar_unitary(d, rng);
    CHECK(is_unitary(u, 1e-10));
  }
}

TEST_CASE("haar sampler passes centered moment tests") {
  const long long m = 20000;
  for (int d : {2, 3, 4}) {
    ComplexMatrix x = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) x(i, i) = i + 1.0;
    HaarMomentReport r = haar_moment_check(d, x, m, 300 + d);
    double root = std::sqrt(static_cast<double>(m));
    CHECK(r.mean_norm <= 4.0 / root);
    CHECK(r.mean_adjoint_norm <= 4.0 * max_abs(x) / root);
    CHECK(r.conjugation_dev <= 5.0 / root);
  }
}

TEST_CASE("nice sampler stays inside the dilation set") {
  Rng rng(11);
  Povm povm = sample_random_povm(3, 3, rng);
  BlockUnitary u0 = complete_dilation(povm);

  CHECK(entry_distance(sample_nice_unitary(complete_dilation(validate_povm(
                                               {ComplexMatrix::Identity(2, 2)})),
                                           rng)
                           .matrix,
                       ComplexMatrix::Identity(2, 2)) == 0.0);

  for (int trial = 0; trial < 20; ++trial) {
    BlockUnitary u = sample_nice_unitary(u0, rng);
    CHECK(is_unitary(u.matrix, 1e-9));
    CHECK(membership_check(u, povm, 1e-9));
    // Block column 0 is untouched, not merely close.
    CHECK(entry_distance(u.matrix.leftCols(3), u0.matrix.leftCols(3)) == 0.0);
  }
}

TEST_CASE("nice sampler zero moments vanish at the statistical rate") {
  Rng rng(13);
  Povm povm = sample_random_povm(3, 3, rng);
  ZeroMomentReport r = nice_zero_moment_check(complete_dilation(povm), 10000, 99);
  CHECK(r.threshold == doctest::Approx(5.0 / std::sqrt(10000.0)));
  CHECK(r.max_norm <= r.threshold);
  CHECK(r.pass);
}

TEST_CASE("sampler factories validate their input") {
  Rng rng(17);
  Povm povm3 = sample_random_povm(3, 3, rng);
  CHECK_THROWS_AS(UnitarySampler::haar_two_outcome(povm3, 1), Error);

  Povm other = sample_random_povm(3, 3, rng);
  BlockUnitary u0 = complete_dilation(povm3);
  try {
    UnitarySampler::nice(u0, other, 1);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_member);
  }
}

TEST_CASE("monte carlo with a basis probe reproduces the POVM exactly") {
  Povm a = fourier_example().first;
  UnitarySampler sampler = UnitarySampler::haar_two_outcome(a, 5);
  MonteCarloReport r =
      monte_carlo_average(sampler, probe_state(ProbeKind::basis, 0.0, 2), 200);
  CHECK(r.max_deviation <= 1e-12);
  CHECK(r.pass);
}

TEST_CASE("two-outcome monte carlo converges to the averaged channel") {
  Povm a = fourier_example().first;
  UnitarySampler sampler = UnitarySampler::haar_two_outcome(a, 42);
  MonteCarloReport r = monte_carlo_average(
      sampler, probe_state(ProbeKind::probabilistic, 0.3), 20000);
  CHECK(r.pass);
  CHECK(r.max_deviation < 0.05);
  // The closed form is the physical channel at level beta_00 = 0.7.
  Povm closed = apply_noise(a, NoiseKind::physical, 0.7);
  for (int i = 0; i < 2; ++i)
    CHECK(entry_distance(r.closed_form[static_cast<size_t>(i)],
                         closed.effect(i)) == 0.0);
}

TEST_CASE("randomizing V and W leaves the average unchanged") {
  Povm a = fourier_example().first;
  UnitarySampler sampler = UnitarySampler::haar_two_outcome(a, 43, true);
  MonteCarloReport r = monte_carlo_average(
      sampler, probe_state(ProbeKind::probabilistic, 0.25), 20000);
  CHECK(r.pass);
}

TEST_CASE("general monte carlo converges under the nice measure") {
  Rng rng(19);
  Povm povm = sample_random_povm(3, 3, rng);
  UnitarySampler sampler =
      UnitarySampler::nice(complete_dilation(povm), povm, 77);
  ComplexMatrix beta = ComplexMatrix::Zero(3, 3);
  beta(0, 0) = 0.8;
  beta(1, 1) = 0.1;
  beta(2, 2) = 0.1;
  MonteCarloReport r = monte_carlo_average(sampler, probe_state(beta), 20000);
  CHECK(r.pass);
  CHECK(r.max_deviation < 0.05);

  // Gamma normalization holds deterministically.
  for (int c = 0; c < 3; ++c)
    CHECK(r.gamma_hat.col(c).sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("monte carlo reports are bitwise reproducible") {
  Povm a = fourier_example().first;
  UnitarySampler s1 = UnitarySampler::haar_two_outcome(a, 4242);
  UnitarySampler s2 = UnitarySampler::haar_two_outcome(a, 4242);
  MonteCarloReport r1 = monte_carlo_average(
      s1, probe_state(ProbeKind::probabilistic, 0.4), 3000);
  MonteCarloReport r2 = monte_carlo_average(
      s2, probe_state(ProbeKind::probabilistic, 0.4), 3000);
  CHECK(r1.max_deviation == r2.max_deviation);
  CHECK(r1.max_std_error == r2.max_std_error);
  for (size_t i = 0; i < r1.mean_effects.size(); ++i)
    CHECK(entry_distance(r1.mean_effects[i], r2.mean_effects[i]) == 0.0);
}

TEST_CASE("monte carlo rejects tiny sample counts") {
  Povm a = fourier_example().first;
  UnitarySampler sampler = UnitarySampler::haar_two_outcome(a, 1);
  CHECK_THROWS_AS(
      monte_carlo_average(sampler, probe_state(ProbeKind::basis, 0.0, 2), 50),
      Error);
}

TEST_CASE("probe equivalence: probabilistic vs cat") {
  Povm a = fourier_example().first;
  ProbeEquivalenceReport r0 = probe_equivalence_check(a, 0.0, 500, 21);
  CHECK(r0.max_difference <= 1e-12);
  CHECK(r0.pass);

  ProbeEquivalenceReport r1 = probe_equivalence_check(a, 1.0, 5000, 22);
  CHECK(r1.pass);

  ProbeEquivalenceReport r = probe_equivalence_check(a, 0.4, 20000, 23);
  CHECK(r.pass);
  CHECK(r.max_difference < 0.05);
}

TEST_CASE("random POVM corpus generator is valid and reproducible") {
  Rng rng(23);
  Povm p = sample_random_povm(4, 3, rng);
  CHECK(p.dim == 4);
  CHECK(p.outcomes() == 3);
  Rng rng2(23);
  Povm q = sample_random_povm(4, 3, rng2);
  for (int i = 0; i < 3; ++i)
    CHECK(entry_distance(p.effect(i), q.effect(i)) == 0.0);
}
