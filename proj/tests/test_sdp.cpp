#include <doctest.h>

#include "povmkit/robustness.hpp"
#include "test_helpers.hpp"

using namespace povmkit;
using namespace povmkit::testing;

namespace {

// min Tr X s.t. diag(X) = (1, 1), X >= 0 on a single 2x2 block.
SdpProblem diag_problem() {
  SdpProblem p;
  p.block_dims = {2};
  p.objective = {RealMatrix::Identity(2, 2)};
  for (int i = 0; i < 2; ++i) {
    SdpConstraint con;
    RealMatrix e = RealMatrix::Zero(2, 2);
    e(i, i) = 1.0;
    con.terms.push_back({0, e});
    con.rhs = 1.0;
    p.constraints.push_back(std::move(con));
  }
  return p;
}

// max alpha s.t. alpha + slack = 1 over two 1x1 blocks.
SdpProblem cap_problem() {
  SdpProblem p;
  p.block_dims = {1, 1};
  p.objective = {-RealMatrix::Identity(1, 1), RealMatrix::Zero(1, 1)};
  SdpConstraint con;
  con.terms.push_back({0, RealMatrix::Identity(1, 1)});
  con.terms.push_back({1, RealMatrix::Identity(1, 1)});
  con.rhs = 1.0;
  p.constraints.push_back(std::move(con));
  return p;
}

}  // namespace

TEST_CASE("identity is optimal for the diagonal-constrained trace problem") {
  SdpSolution sol = solve(diag_problem());
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK(sol.primal_objective == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(entry_distance(ComplexMatrix(sol.x[0].cast<Complex>()),
                       ComplexMatrix::Identity(2, 2)) < 1e-6);
  CHECK(sol.gap <= 1e-7);
  CHECK(sol.primal_residual <= 1e-8);
  CHECK(sol.dual_residual <= 1e-8);
}

TEST_CASE("scalar cap problem maximizes to the bound") {
  SdpSolution sol = solve(cap_problem());
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK(sol.x[0](0, 0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("verify_solution accepts the solver output and catches tampering") {
  SdpProblem p = diag_problem();
  SdpSolution sol = solve(p);
  REQUIRE(sol.status == SdpStatus::optimal);
  CertificateReport cert = verify_solution(p, sol);
  CHECK(cert.pass);
  CHECK(cert.min_eig_x >= -1e-9);
  CHECK(cert.min_eig_s >= -1e-9);

  SdpSolution tampered = sol;
  tampered.x[0](0, 0) += 1e-4;
  CertificateReport bad = verify_solution(p, tampered);
  CHECK_FALSE(bad.pass);
  CHECK(bad.primal_residual > 1e-8);
}

TEST_CASE("rank-deficient constraints are rejected at assembly") {
  SdpProblem p = diag_problem();
  SdpConstraint dup = p.constraints[0];
  dup.rhs = 1.0;
  p.constraints.push_back(dup);  // exact duplicate
  try {
    solve(p);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::bad_problem);
  }
}

TEST_CASE("malformed problems are rejected") {
  SdpProblem p;
  CHECK_THROWS_AS(p.validate(), Error);

  p = diag_problem();
  p.constraints[0].terms[0].second(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("weak duality on assembled robustness problems") {
  Rng rng(301);
  for (int trial = 0; trial < 6; ++trial) {
    Povm a = sample_random_povm(2, 2, rng);
    Povm b = sample_random_povm(2, 2, rng);
    NoiseKind model = trial % 2 == 0 ? NoiseKind::uniform : NoiseKind::physical;
    SdpSolution sol = solve(build_primal(a, b, model));
    REQUIRE(sol.status == SdpStatus::optimal);
    CHECK(sol.dual_objective <= sol.primal_objective + 1e-9);
  }
}

TEST_CASE("solver is deterministic") {
  Povm a = qubit_mub_example().first;
  Povm b = qubit_mub_example().second;
  SdpProblem p = build_primal(a, b, NoiseKind::uniform);
  SdpSolution s1 = solve(p);
  SdpSolution s2 = solve(p);
  REQUIRE(s1.trace.size() == s2.trace.size());
  for (size_t i = 0; i < s1.trace.size(); ++i)
    for (int j = 0; j < 4; ++j) CHECK(s1.trace[i][j] == s2.trace[i][j]);
  CHECK(s1.primal_objective == s2.primal_objective);
}

TEST_CASE("positive rescaling of the objective keeps the argmax") {
  auto [a, b] = qubit_mub_example();
  SdpProblem p = build_primal(a, b, NoiseKind::uniform);
  SdpSolution s1 = solve(p);
  SdpProblem scaled = p;
  for (auto& c : scaled.objective) c *= 7.5;
  SdpSolution s2 = solve(scaled);
  REQUIRE(s1.status == SdpStatus::optimal);
  REQUIRE(s2.status == SdpStatus::optimal);
  const size_t alpha_block = 4;
  CHECK(std::abs(s1.x[alpha_block](0, 0) - s2.x[alpha_block](0, 0)) < 1e-7);
}

TEST_CASE("robustness primal reproduces the qubit closed form") {
  auto [a, b] = qubit_mub_example();
  SdpSolution sol = solve(build_primal(a, b, NoiseKind::uniform));
  REQUIRE(sol.status == SdpStatus::optimal);
  double alpha = sol.x[4](0, 0);
  CHECK(std::abs(alpha - 1.0 / std::sqrt(2.0)) < 1e-5);
  CHECK(verify_solution(build_primal(a, b, NoiseKind::uniform), sol).pass);
}
