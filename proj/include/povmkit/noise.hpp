#pragma once

#include <string>
#include <vector>

#include "povmkit/povm.hpp"

namespace povmkit {

enum class NoiseKind { uniform, depolarizing, physical };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

// Weights t_i of the trivial POVM (t_0 I, ..., t_N I) mixed in by each noise
// channel:
//   uniform:       t_i = 1/n
//   depolarizing:  t_i = Tr[A_i]/d
//   physical:      t_i = (1 - Tr[A_i]/d) / (n - 1), n >= 2
// All three sum to 1. The physical weights reduce to the swapped traces
// Tr[A_{1-i}]/d for n = 2.
std::vector<double> trivial_weights(const Povm& povm, NoiseKind kind);

// A_i -> level * A_i + (1 - level) * t_i * I. level = 1 is the original
// POVM; the amount of noise is 1 - level.
Povm apply_noise(const Povm& povm, NoiseKind kind, double level,
                 const Tolerances& tol = default_tolerances());

}  // namespace povmkit
