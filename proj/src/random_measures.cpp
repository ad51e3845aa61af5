#include "povmkit/random_measures.hpp"

#include <Eigen/QR>
#include <cmath>

namespace povmkit {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr double kTau = 6.283185307179586;
constexpr long long kBatchSize = 2048;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), state_(splitmix64(seed)) {
  if (state_ == 0) state_ = kGolden;
}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ (kGolden * (stream + 1))));
}

std::uint64_t Rng::next() {
  // xorshift64*, deterministic across platforms.
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1Dull;
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTau * u2);
}

Complex Rng::complex_normal() {
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double r = std::sqrt(-std::log(u1));  // E|z|^2 = 1
  return Complex(r * std::cos(kTau * u2), r * std::sin(kTau * u2));
}

ComplexMatrix sample_haar_unitary(int d, Rng& rng) {
  if (d < 1) throw Error(Errc::bad_parameter, "dimension must be >= 1");
  ComplexMatrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  Eigen::VectorXcd diag = qr.matrixQR().diagonal();
  for (int j = 0; j < d; ++j) {
    double mag = std::abs(diag[j]);
    Complex phase = mag > 0.0 ? diag[j] / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

BlockUnitary sample_nice_unitary(const BlockUnitary& u0, Rng& rng) {
  if (u0.levels <= 1) return u0;
  const int d = u0.dim;
  ComplexMatrix u = u0.matrix;
  // Right multiplication by diag(I, V_1, ..., V_N) acts on block columns.
  for (int j = 1; j < u0.levels; ++j) {
    ComplexMatrix v = sample_haar_unitary(d, rng);
    u.middleCols(j * d, d) = u.middleCols(j * d, d) * v;
  }
  return BlockUnitary{d, u0.levels, u};
}

UnitarySampler UnitarySampler::haar_two_outcome(const Povm& povm,
                                                std::uint64_t seed,
                                                bool randomize_vw,
                                                const Tolerances& tol) {
  if (povm.outcomes() != 2)
    throw Error(Errc::bad_parameter, "sampler requires a two-outcome POVM");
  validate_povm(povm.effects, tol);
  UnitarySampler s;
  s.kind_ = Kind::haar_two_outcome;
  s.seed_ = seed;
  s.povm_ = povm;
  s.levels_ = 2;
  s.randomize_vw_ = randomize_vw;
  Rng fixed = Rng(seed).split(~0ull);
  s.fixed_v_ = sample_haar_unitary(povm.dim, fixed);
  s.fixed_w_ = sample_haar_unitary(povm.dim, fixed);
  return s;
}

UnitarySampler UnitarySampler::nice(const BlockUnitary& u0, const Povm& povm,
                                    std::uint64_t seed, const Tolerances& tol) {
  if (!membership_check(u0, povm, tol.unitary_block))
    throw Error(Errc::not_member,
                "base unitary is not a dilation of the target POVM");
  UnitarySampler s;
  s.kind_ = Kind::nice;
  s.seed_ = seed;
  s.povm_ = povm;
  s.levels_ = u0.levels;
  s.u0_ = u0;
  return s;
}

BlockUnitary UnitarySampler::draw(Rng& rng) const {
  if (kind_ == Kind::haar_two_outcome) {
    TwoOutcomeDilationParams params;
    if (randomize_vw_) {
      params.v = sample_haar_unitary(povm_.dim, rng);
      params.w = sample_haar_unitary(povm_.dim, rng);
    } else {
      params.v = fixed_v_;
      params.w = fixed_w_;
    }
    params.z = sample_haar_unitary(povm_.dim, rng);
    return build_two_outcome_unitary(povm_.effect(0), povm_.effect(1), params);
  }
  return sample_nice_unitary(u0_, rng);
}

namespace {

struct Accumulator {
  std::vector<ComplexMatrix> sum;
  std::vector<RealMatrix> sum_sq;  // per-entry sum of |x|^2
  Eigen::MatrixXd gamma_sum;
  long long count = 0;

  Accumulator(int outcomes, int d, int levels)
      : sum(static_cast<size_t>(outcomes), ComplexMatrix::Zero(d, d)),
        sum_sq(static_cast<size_t>(outcomes), RealMatrix::Zero(d, d)),
        gamma_sum(Eigen::MatrixXd::Zero(levels, levels)) {}

  void add(const Povm& effective, const BlockUnitary& u) {
    for (int i = 0; i < effective.outcomes(); ++i) {
      sum[static_cast<size_t>(i)] += effective.effect(i);
      sum_sq[static_cast<size_t>(i)] += effective.effect(i).cwiseAbs2();
    }
    const double d = static_cast<double>(u.dim);
    for (int i = 0; i < u.levels; ++i)
      for (int c = 0; c < u.levels; ++c)
        gamma_sum(i, c) +=
            (u.block(i, c).adjoint() * u.block(i, c)).trace().real() / d;
    ++count;
  }

  void merge(const Accumulator& other) {
    for (size_t i = 0; i < sum.size(); ++i) {
      sum[i] += other.sum[i];
      sum_sq[i] += other.sum_sq[i];
    }
    gamma_sum += other.gamma_sum;
    count += other.count;
  }
};

}  // namespace

MonteCarloReport monte_carlo_average(const UnitarySampler& sampler,
                                     const ProbeState& beta, long long samples,
                                     double sigma_multiplier) {
  if (samples < 100)
    throw Error(Errc::bad_parameter, "need at least 100 Monte Carlo samples");
  const Povm& povm = sampler.povm();
  const int d = povm.dim;
  const int outcomes = povm.outcomes();

  Rng base(sampler.seed());
  Accumulator total(outcomes, d, sampler.levels());
  long long done = 0;
  std::uint64_t batch_index = 0;
  while (done < samples) {
    long long batch = std::min(kBatchSize, samples - done);
    Rng rng = base.split(batch_index++);
    Accumulator acc(outcomes, d, sampler.levels());
    for (long long s = 0; s < batch; ++s) {
      BlockUnitary u = sampler.draw(rng);
      acc.add(effective_noisy_povm(u, beta), u);
    }
    total.merge(acc);
    done += batch;
  }

  MonteCarloReport report;
  report.samples = samples;
  const double m = static_cast<double>(samples);
  double level = beta.entry(0, 0).real();
  Povm closed = apply_noise(povm, NoiseKind::physical, level);
  report.closed_form = closed.effects;
  report.gamma_hat = total.gamma_sum / m;
  for (int i = 0; i < outcomes; ++i) {
    ComplexMatrix mean = total.sum[static_cast<size_t>(i)] / m;
    report.mean_effects.push_back(mean);
    double dev = max_abs(ComplexMatrix(mean - closed.effect(i)));
    report.per_effect_deviation.push_back(dev);
    report.max_deviation = std::max(report.max_deviation, dev);
    RealMatrix var =
        (total.sum_sq[static_cast<size_t>(i)] / m - mean.cwiseAbs2()).cwiseMax(0.0);
    report.std_errors.push_back(RealMatrix((var / m).cwiseSqrt()));
    report.max_std_error =
        std::max(report.max_std_error, std::sqrt(var.maxCoeff() / m));
  }
  report.tolerance = sigma_multiplier * report.max_std_error + 1e-12;
  report.wide_tolerance = report.tolerance > 0.02;
  report.pass = report.max_deviation <= report.tolerance;
  return report;
}

ProbeEquivalenceReport probe_equivalence_check(const Povm& povm, double t,
                                               long long samples,
                                               std::uint64_t seed) {
  if (t < 0.0 || t > 1.0)
    throw Error(Errc::bad_parameter, "probe parameter t must lie in [0, 1]");
  ProbeEquivalenceReport report;
  report.t = t;
  report.samples = samples;
  UnitarySampler s_prob =
      UnitarySampler::haar_two_outcome(povm, Rng(seed).split(0).seed());
  UnitarySampler s_cat =
      UnitarySampler::haar_two_outcome(povm, Rng(seed).split(1).seed());
  report.probabilistic =
      monte_carlo_average(s_prob, probe_state(ProbeKind::probabilistic, t), samples);
  report.cat = monte_carlo_average(s_cat, probe_state(ProbeKind::cat, t), samples);
  for (size_t i = 0; i < report.probabilistic.mean_effects.size(); ++i) {
    double diff = max_abs(ComplexMatrix(report.probabilistic.mean_effects[i] -
                                        report.cat.mean_effects[i]));
    report.max_difference = std::max(report.max_difference, diff);
  }
  double se = std::hypot(report.probabilistic.max_std_error,
                         report.cat.max_std_error);
  report.tolerance = 4.0 * se + 1e-12;
  report.pass = report.max_difference <= report.tolerance;
  return report;
}

ZeroMomentReport nice_zero_moment_check(const BlockUnitary& u0,
                                        long long samples, std::uint64_t seed) {
  if (samples < 100)
    throw Error(Errc::bad_parameter, "need at least 100 Monte Carlo samples");
  const int d = u0.dim;
  const int levels = u0.levels;
  std::vector<ComplexMatrix> sums(
      static_cast<size_t>(levels * levels), ComplexMatrix::Zero(d, d));

  Rng base(seed);
  long long done = 0;
  std::uint64_t batch_index = 0;
  while (done < samples) {
    long long batch = std::min(kBatchSize, samples - done);
    Rng rng = base.split(batch_index++);
    for (long long s = 0; s < batch; ++s) {
      BlockUnitary u = sample_nice_unitary(u0, rng);
      for (int i = 0; i < levels; ++i)
        for (int k = 1; k < levels; ++k)
          sums[static_cast<size_t>(i * levels + k)] +=
              u.block(i, k).adjoint() * u.block(i, 0);
    }
    done += batch;
  }

  ZeroMomentReport report;
  report.samples = samples;
  report.threshold = 5.0 / std::sqrt(static_cast<double>(samples));
  for (int i = 0; i < levels; ++i)
    for (int k = 1; k < levels; ++k)
      report.max_norm = std::max(
          report.max_norm,
          max_abs(ComplexMatrix(sums[static_cast<size_t>(i * levels + k)] /
                                static_cast<double>(samples))));
  report.pass = report.max_norm <= report.threshold;
  return report;
}

Povm sample_random_povm(int d, int outcomes, Rng& rng) {
  if (d < 1 || outcomes < 1)
    throw Error(Errc::bad_parameter, "POVM needs d >= 1 and >= 1 outcomes");
  std::vector<ComplexMatrix> wishart;
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < outcomes; ++i) {
    ComplexMatrix g(d, d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) g(r, c) = rng.complex_normal();
    ComplexMatrix w = g * g.adjoint();
    total += w;
    wishart.push_back(std::move(w));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(total);
  ComplexMatrix inv_root = es.eigenvectors() *
                           es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                           es.eigenvectors().adjoint();
  std::vector<ComplexMatrix> effects;
  effects.reserve(wishart.size());
  for (const auto& w : wishart) {
    ComplexMatrix e = inv_root * w * inv_root;
    effects.push_back(ComplexMatrix(0.5 * (e + e.adjoint())));
  }
  return validate_povm(effects);
}

HaarMomentReport haar_moment_check(int d, const ComplexMatrix& x,
                                   long long samples, std::uint64_t seed) {
  if (x.rows() != d || x.cols() != d)
    throw Error(Errc::dimension_mismatch, "test matrix has wrong size");
  ComplexMatrix sum_z = ComplexMatrix::Zero(d, d);
  ComplexMatrix sum_zadj_x = ComplexMatrix::Zero(d, d);
  ComplexMatrix sum_conj = ComplexMatrix::Zero(d, d);
  Rng base(seed);
  long long done = 0;
  std::uint64_t batch_index = 0;
  while (done < samples) {
    long long batch = std::min(kBatchSize, samples - done);
    Rng rng = base.split(batch_index++);
    for (long long s = 0; s < batch; ++s) {
      ComplexMatrix z = sample_haar_unitary(d, rng);
      sum_z += z;
      sum_zadj_x += z.adjoint() * x;
      sum_conj += z * x * z.adjoint();
    }
    done += batch;
  }
  const double m = static_cast<double>(samples);
  HaarMomentReport report;
  report.samples = samples;
  report.mean_norm = max_abs(ComplexMatrix(sum_z / m));
  report.mean_adjoint_norm = max_abs(ComplexMatrix(sum_zadj_x / m));
  ComplexMatrix target =
      (x.trace() / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
  report.conjugation_dev = max_abs(ComplexMatrix(sum_conj / m - target));
  return report;
}

}  // namespace povmkit
