#include "povmkit/noise.hpp"

namespace povmkit {

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::uniform: return "uniform";
    case NoiseKind::depolarizing: return "depolarizing";
    case NoiseKind::physical: return "physical";
  }
  return "unknown";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "uniform") return NoiseKind::uniform;
  if (name == "depolarizing") return NoiseKind::depolarizing;
  if (name == "physical") return NoiseKind::physical;
  throw Error(Errc::bad_parameter, "unknown noise model '" + name + "'");
}

std::vector<double> trivial_weights(const Povm& povm, NoiseKind kind) {
  const int n = povm.outcomes();
  const double d = static_cast<double>(povm.dim);
  std::vector<double> t(static_cast<size_t>(n), 0.0);
  switch (kind) {
    case NoiseKind::uniform:
      for (auto& w : t) w = 1.0 / n;
      break;
    case NoiseKind::depolarizing:
      for (int i = 0; i < n; ++i)
        t[static_cast<size_t>(i)] = povm.effect(i).trace().real() / d;
      break;
    case NoiseKind::physical:
      if (n < 2)
        throw Error(Errc::physical_needs_two_outcomes,
                    "physical noise needs at least two outcomes");
      for (int i = 0; i < n; ++i)
        t[static_cast<size_t>(i)] =
            (1.0 - povm.effect(i).trace().real() / d) / (n - 1);
      break;
  }
  return t;
}

Povm apply_noise(const Povm& povm, NoiseKind kind, double level,
                 const Tolerances& tol) {
  if (level < 0.0 || level > 1.0)
    throw Error(Errc::level_out_of_range, "noise level must lie in [0, 1]");
  std::vector<double> t = trivial_weights(povm, kind);
  std::vector<ComplexMatrix> noisy;
  noisy.reserve(povm.effects.size());
  ComplexMatrix id = ComplexMatrix::Identity(povm.dim, povm.dim);
  for (int i = 0; i < povm.outcomes(); ++i)
    noisy.push_back(level * povm.effect(i) +
                    (1.0 - level) * t[static_cast<size_t>(i)] * id);
  return validate_povm(noisy, tol);
}

}  // namespace povmkit
