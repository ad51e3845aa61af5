#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "povmkit/dilation.hpp"
#include "povmkit/noise.hpp"

namespace povmkit {

// Deterministic 64-bit-seeded generator. Sub-streams come from
// split(stream): the child seed is splitmix64(seed ^ GOLDEN * (stream + 1)),
// so batches can be computed independently and merged in index order with
// results independent of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  Rng split(std::uint64_t stream) const;

  std::uint64_t next();
  double uniform();         // [0, 1)
  double normal();          // standard normal, Box-Muller
  Complex complex_normal(); // complex standard normal, E|z|^2 = 1

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

// Haar-distributed unitary: Ginibre matrix, QR, then the Q columns are
// rephased by the diagonal of R (plain QR is not Haar without this fix).
ComplexMatrix sample_haar_unitary(int d, Rng& rng);

// One draw from the right-invariant measure on the dilations of a fixed
// POVM: u0 * diag(I, V_1, ..., V_N) with independent Haar blocks V_i.
// Leaves the first block column untouched. N = 0 returns u0 itself.
BlockUnitary sample_nice_unitary(const BlockUnitary& u0, Rng& rng);

// Source of random dilations of a fixed POVM for the Monte Carlo engine.
class UnitarySampler {
 public:
  enum class Kind {
    haar_two_outcome,  // Z Haar, V and W fixed (seeded) or redrawn per sample
    nice,              // u0 * diag(I, V_1, ..., V_N)
  };

  static UnitarySampler haar_two_outcome(const Povm& povm, std::uint64_t seed,
                                         bool randomize_vw = false,
                                         const Tolerances& tol = default_tolerances());
  static UnitarySampler nice(const BlockUnitary& u0, const Povm& povm,
                             std::uint64_t seed,
                             const Tolerances& tol = default_tolerances());

  BlockUnitary draw(Rng& rng) const;

  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  const Povm& povm() const { return povm_; }
  int levels() const { return levels_; }

 private:
  UnitarySampler() = default;

  Kind kind_ = Kind::nice;
  std::uint64_t seed_ = 0;
  Povm povm_;
  int levels_ = 0;
  bool randomize_vw_ = false;
  ComplexMatrix fixed_v_, fixed_w_;  // two-outcome case
  BlockUnitary u0_;                  // nice case
};

struct MonteCarloReport {
  long long samples = 0;
  std::vector<ComplexMatrix> mean_effects;
  std::vector<ComplexMatrix> closed_form;
  std::vector<RealMatrix> std_errors;  // per effect, per entry
  std::vector<double> per_effect_deviation;
  double max_deviation = 0.0;
  double max_std_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool wide_tolerance = false;  // flagged when the sample count is too small
                                // for the tolerance to mean much
  Eigen::MatrixXd gamma_hat;    // empirical (1/d) Tr E[U_{ic}* U_{ic}]
};

// Empirical mean of effective_noisy_povm over `samples` draws, compared
// entrywise against the closed form level*A_i + (1-level)*t_i*I of the
// physical channel at level = beta_00. The statistical tolerance defaults to
// 4 * (largest per-entry standard error).
MonteCarloReport monte_carlo_average(const UnitarySampler& sampler,
                                     const ProbeState& beta, long long samples,
                                     double sigma_multiplier = 4.0);

struct ProbeEquivalenceReport {
  double t = 0.0;
  long long samples = 0;
  double max_difference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  MonteCarloReport probabilistic;
  MonteCarloReport cat;
};

// Runs the two-outcome Monte Carlo under sigma_t and gamma_t on independent
// sub-streams; the averages agree because the probes share a diagonal.
ProbeEquivalenceReport probe_equivalence_check(const Povm& povm, double t,
                                               long long samples,
                                               std::uint64_t seed);

struct ZeroMomentReport {
  long long samples = 0;
  double max_norm = 0.0;   // max over i, k != 0 of ||mean U_{ik}* U_{i0}||_max
  double threshold = 0.0;  // 5 / sqrt(M)
  bool pass = false;
};

// Empirical check that E[U_{ik}* U_{i0}] = 0 for k != 0 under the nice
// measure seeded from u0.
ZeroMomentReport nice_zero_moment_check(const BlockUnitary& u0,
                                        long long samples, std::uint64_t seed);

// Random full-rank POVM: Wishart matrices G_i G_i* renormalized by the
// inverse square root of their sum. Used to build seeded test corpora.
Povm sample_random_povm(int d, int outcomes, Rng& rng);

struct HaarMomentReport {
  long long samples = 0;
  double mean_norm = 0.0;         // ||E[Z]||_max
  double mean_adjoint_norm = 0.0; // ||E[Z* X]||_max
  double conjugation_dev = 0.0;   // ||E[Z X Z*] - (Tr X / d) I||_max
};

// First- and second-moment statistics of the Haar sampler against a fixed
// test matrix X.
HaarMomentReport haar_moment_check(int d, const ComplexMatrix& x,
                                   long long samples, std::uint64_t seed);

}  // namespace povmkit
