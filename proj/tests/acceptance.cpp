// Acceptance suite: end-to-end checks of the averaged-channel closed forms,
// the dilation constructions and the robustness SDPs at fixed tolerances.
// Prints one line per criterion and exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "povmkit/random_measures.hpp"
#include "povmkit/region.hpp"
#include "povmkit/robustness.hpp"

using namespace povmkit;

namespace {

constexpr std::uint64_t kSeed = 20250810;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

Povm seeded_three_outcome_povm() {
  Rng rng(kSeed);
  return sample_random_povm(3, 3, rng);
}

bool criterion_two_outcome_averaging(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  Povm a = fourier_example().first;
  UnitarySampler sampler = UnitarySampler::haar_two_outcome(a, kSeed);
  MonteCarloReport r = monte_carlo_average(
      sampler, probe_state(ProbeKind::probabilistic, 0.3), 50000);
  double elapsed = seconds_since(start);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max deviation %.2e (limit 2e-2), %.1f s",
                r.max_deviation, elapsed);
  detail = buf;
  return r.max_deviation <= 0.02 && elapsed <= 60.0;
}

bool criterion_general_averaging(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  Povm povm = seeded_three_outcome_povm();
  UnitarySampler sampler =
      UnitarySampler::nice(complete_dilation(povm), povm, kSeed + 1);
  ComplexMatrix beta = ComplexMatrix::Zero(3, 3);
  beta(0, 0) = 0.8;
  beta(1, 1) = 0.1;
  beta(2, 2) = 0.1;
  MonteCarloReport r = monte_carlo_average(sampler, probe_state(beta), 50000);

  // The comparison target is 0.8 A_i + 0.1 (1 - Tr A_i / 3) I.
  double form_dev = 0.0;
  for (int i = 0; i < 3; ++i) {
    ComplexMatrix target =
        0.8 * povm.effect(i) +
        0.1 * (1.0 - povm.effect(i).trace().real() / 3.0) *
            ComplexMatrix::Identity(3, 3);
    form_dev = std::max(
        form_dev,
        max_abs(ComplexMatrix(r.closed_form[static_cast<size_t>(i)] - target)));
  }
  double elapsed = seconds_since(start);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "max deviation %.2e (limit 2e-2), closed-form check %.1e, %.1f s",
                r.max_deviation, form_dev, elapsed);
  detail = buf;
  return r.max_deviation <= 0.02 && form_dev <= 1e-12 && elapsed <= 120.0;
}

bool criterion_zero_moments(std::string& detail) {
  Povm povm = seeded_three_outcome_povm();
  ZeroMomentReport r =
      nice_zero_moment_check(complete_dilation(povm), 10000, kSeed + 2);
  char buf[120];
  std::snprintf(buf, sizeof(buf), "max cross moment %.2e (limit %.2e)",
                r.max_norm, r.threshold);
  detail = buf;
  return r.pass;
}

bool criterion_probe_equivalence(std::string& detail) {
  Povm a = fourier_example().first;
  double worst = 0.0;
  int stream = 3;
  for (double t : {0.2, 0.5, 0.8}) {
    ProbeEquivalenceReport r =
        probe_equivalence_check(a, t, 50000, kSeed + stream++);
    worst = std::max(worst, r.max_difference);
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "max probe difference %.2e (limit 2e-2)", worst);
  detail = buf;
  return worst <= 0.02;
}

bool criterion_dilation_roundtrip(std::string& detail) {
  Rng rng(kSeed + 10);
  double worst_roundtrip = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    int d = 2 + trial % 3;
    int outcomes = 2 + (trial / 3) % 3;
    Povm povm = sample_random_povm(d, outcomes, rng);
    Povm back = induced_povm(complete_dilation(povm));
    for (int i = 0; i < outcomes; ++i)
      worst_roundtrip = std::max(
          worst_roundtrip,
          max_abs(ComplexMatrix(back.effect(i) - povm.effect(i))));
  }

  bool all_members = true;
  double worst_unitarity = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    int d = 2 + trial % 3;
    Povm povm = sample_random_povm(d, 2, rng);
    TwoOutcomeDilationParams params{sample_haar_unitary(d, rng),
                                    sample_haar_unitary(d, rng),
                                    sample_haar_unitary(d, rng)};
    BlockUnitary u =
        build_two_outcome_unitary(povm.effect(0), povm.effect(1), params);
    ComplexMatrix gram = u.matrix.adjoint() * u.matrix;
    gram -= ComplexMatrix::Identity(2 * d, 2 * d);
    worst_unitarity = std::max(worst_unitarity, max_abs(gram));
    all_members = all_members && membership_check(u, povm, 1e-9);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "roundtrip %.1e, unitarity %.1e (limits 1e-9), membership %s",
                worst_roundtrip, worst_unitarity, all_members ? "ok" : "FAILED");
  detail = buf;
  return worst_roundtrip <= 1e-9 && worst_unitarity <= 1e-9 && all_members;
}

bool criterion_robustness_oracle(std::string& detail) {
  auto [x, z] = qubit_mub_example();
  const double target = 1.0 / std::sqrt(2.0);
  double worst_mub = 0.0;
  double worst_compatible = 0.0;
  for (NoiseKind model :
       {NoiseKind::uniform, NoiseKind::depolarizing, NoiseKind::physical}) {
    worst_mub = std::max(
        worst_mub, std::abs(robustness(x, z, model).alpha_star - target));

    Povm a = fourier_example().first;
    worst_compatible = std::max(
        worst_compatible, std::abs(robustness(a, a, model).alpha_star - 1.0));
    ComplexMatrix c0 = ComplexMatrix::Zero(3, 3);
    c0(0, 0) = 0.8;
    c0(1, 1) = 0.25;
    c0(2, 2) = 0.5;
    Povm commuting =
        validate_povm({c0, ComplexMatrix::Identity(3, 3) - c0});
    worst_compatible = std::max(
        worst_compatible,
        std::abs(robustness(a, commuting, model).alpha_star - 1.0));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "|alpha - 1/sqrt(2)| = %.1e (limit 1e-4), compatible pairs "
                "|alpha - 1| = %.1e (limit 1e-6)",
                worst_mub, worst_compatible);
  detail = buf;
  return worst_mub <= 1e-4 && worst_compatible <= 1e-6;
}

bool criterion_strong_duality(std::string& detail) {
  double worst_gap = 0.0;
  bool certificates = true;
  auto check_pair = [&](const Povm& a, const Povm& b, NoiseKind model) {
    SdpProblem primal_problem = build_primal(a, b, model);
    SdpSolution primal_sol = solve(primal_problem);
    if (primal_sol.status != SdpStatus::optimal) {
      certificates = false;
      return;
    }
    certificates =
        certificates && verify_solution(primal_problem, primal_sol).pass;
    double alpha_primal =
        extract_primal_result(a, b, model, primal_sol).alpha_star;

    SdpProblem dual_problem = build_dual(a, b, model);
    SdpSolution dual_sol = solve(dual_problem);
    if (dual_sol.status != SdpStatus::optimal) {
      certificates = false;
      return;
    }
    certificates = certificates && verify_solution(dual_problem, dual_sol).pass;
    double alpha_dual = 1.0 - dual_sol.dual_objective;
    worst_gap = std::max(worst_gap, std::abs(alpha_primal - alpha_dual));
  };

  auto [fa, fb] = fourier_example();
  for (NoiseKind model :
       {NoiseKind::uniform, NoiseKind::depolarizing, NoiseKind::physical})
    check_pair(fa, fb, model);

  Rng rng(kSeed + 20);
  for (int pair = 0; pair < 20; ++pair) {
    int d = 2 + pair % 2;
    int outcomes = 2 + (pair / 2) % 2;
    Povm a = sample_random_povm(d, outcomes, rng);
    Povm b = sample_random_povm(d, 2, rng);
    for (NoiseKind model :
         {NoiseKind::uniform, NoiseKind::depolarizing, NoiseKind::physical})
      check_pair(a, b, model);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "max |primal - dual| = %.2e (limit 1e-6), certificates %s",
                worst_gap, certificates ? "ok" : "FAILED");
  detail = buf;
  return worst_gap <= 1e-6 && certificates;
}

bool criterion_region_reproduction(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  auto [a, b] = fourier_example();
  const int resolution = 101;
  std::vector<CompatibilityRegion> regions;
  for (NoiseKind model :
       {NoiseKind::uniform, NoiseKind::depolarizing, NoiseKind::physical})
    regions.push_back(compatibility_region(a, b, model, resolution, 0));

  // Boundaries restricted to [0, 0.7]^2 agree across models.
  double boundary_dev = 0.0;
  for (int pi = 0; pi < resolution; ++pi) {
    double p = regions[0].grid_value(pi);
    if (p > 0.7) break;
    double b0 = std::min(regions[0].boundary[static_cast<size_t>(pi)], 0.7);
    double b1 = std::min(regions[1].boundary[static_cast<size_t>(pi)], 0.7);
    double b2 = std::min(regions[2].boundary[static_cast<size_t>(pi)], 0.7);
    boundary_dev = std::max({boundary_dev, std::abs(b0 - b1), std::abs(b0 - b2),
                             std::abs(b1 - b2)});
  }

  // The physical region contains the union of the other two (up to ties).
  int containment_violations = 0;
  int corner_violations = 0;  // same check restricted to [0.7, 1]^2
  double first_p = 0.0, first_q = 0.0, first_margin = 0.0;
  for (int pi = 0; pi < resolution; ++pi) {
    for (int qi = 0; qi < resolution; ++qi) {
      bool other =
          regions[0].at(pi, qi) || regions[1].at(pi, qi);
      if (other && !regions[2].at(pi, qi) &&
          regions[2].margin_at(pi, qi) < -1e-6) {
        if (containment_violations == 0) {
          first_p = regions[2].grid_value(pi);
          first_q = regions[2].grid_value(qi);
          first_margin = regions[2].margin_at(pi, qi);
        }
        ++containment_violations;
        if (regions[2].grid_value(pi) >= 0.7 && regions[2].grid_value(qi) >= 0.7)
          ++corner_violations;
      }
    }
  }
  bool monotone = region_is_monotone(regions[0]) &&
                  region_is_monotone(regions[1]) &&
                  region_is_monotone(regions[2]);
  double elapsed = seconds_since(start);
  char buf[320];
  if (containment_violations == 0) {
    std::snprintf(buf, sizeof(buf),
                  "boundary agreement %.3f (limit 0.02) on [0,0.7], containment "
                  "holds, monotone %s, %.0f s (limit 600)",
                  boundary_dev, monotone ? "yes" : "NO", elapsed);
  } else {
    std::snprintf(buf, sizeof(buf),
                  "boundary agreement %.3f (limit 0.02) on [0,0.7]; containment "
                  "violated at %d of %d grid points, first (p,q)=(%.2f,%.2f) "
                  "physical margin %.1e; on [0.7,1]^2 violations: %d; monotone "
                  "%s, %.0f s (limit 600)",
                  boundary_dev, containment_violations, resolution * resolution,
                  first_p, first_q, first_margin, corner_violations,
                  monotone ? "yes" : "NO", elapsed);
  }
  detail = buf;
  return boundary_dev <= 0.02 && containment_violations == 0 && monotone &&
         elapsed <= 600.0;
}

bool criterion_sdp_oracle_agreement(std::string& detail) {
  Rng rng(kSeed + 30);
  int checked = 0;
  int mismatches = 0;
  for (int pair = 0; pair < 20; ++pair) {
    Eigen::Vector3d ra(rng.normal(), rng.normal(), rng.normal());
    Eigen::Vector3d rb(rng.normal(), rng.normal(), rng.normal());
    ra.normalize();
    rb.normalize();
    Povm a = unbiased_qubit_povm(ra);
    Povm b = unbiased_qubit_povm(rb);
    for (double level : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      double busch_margin =
          2.0 - (level * (ra + rb)).norm() - (level * (ra - rb)).norm();
      if (std::abs(busch_margin) < 1e-5) continue;  // boundary excluded
      bool oracle = busch_margin > 0.0;
      CompatibilityVerdict verdict =
          compatible_at(a, b, NoiseKind::uniform, level, level);
      ++checked;
      if (verdict.compatible != oracle) ++mismatches;
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "%d verdicts compared, %d mismatches",
                checked, mismatches);
  detail = buf;
  return mismatches == 0 && checked >= 90;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> run;
  };
  std::vector<Criterion> criteria = {
      {"two-outcome averaging matches the closed-form channel",
       criterion_two_outcome_averaging},
      {"general averaging under the right-invariant measure",
       criterion_general_averaging},
      {"cross moments of dilation blocks vanish", criterion_zero_moments},
      {"probabilistic and cat probes average identically",
       criterion_probe_equivalence},
      {"dilation constructions roundtrip at 1e-9", criterion_dilation_roundtrip},
      {"robustness oracle values (qubit pair, compatible pairs)",
       criterion_robustness_oracle},
      {"strong duality and certificates", criterion_strong_duality},
      {"region sweep: boundary agreement and physical containment",
       criterion_region_reproduction},
      {"SDP verdicts match the closed-form qubit oracle",
       criterion_sdp_oracle_agreement},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %zu: %s — %s\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures > 0)
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  else
    std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
