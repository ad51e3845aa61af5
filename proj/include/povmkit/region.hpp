#pragma once

#include <string>

#include "povmkit/robustness.hpp"

namespace povmkit {

// Feasibility of a joint POVM for the pair (A^p, B^q) at fixed noise levels.
// Decided through the ray program max{lambda : (lambda p, lambda q) admits a
// joint, lambda <= 2}: the noise-level square is down-closed, so the point
// is compatible exactly when the optimum reaches 1. The program is strictly
// feasible on both sides for any pair, so the solver never has to detect
// infeasibility, and the verdict compares a well-conditioned optimum against
// 1 instead of testing feasibility at an exact boundary.
struct CompatibilityVerdict {
  bool compatible = false;
  double margin = 0.0;  // lambda* - 1; how far along the ray the pair stays compatible
  double marginal_deviation = 0.0;  // worst marginal error of the solved grid
  SdpStatus status = SdpStatus::numerical_failure;
};

CompatibilityVerdict compatible_at(const Povm& a, const Povm& b,
                                   NoiseKind model, double p, double q,
                                   const SdpOptions& options = {});

struct CompatibilityRegion {
  int resolution = 0;
  NoiseKind model = NoiseKind::uniform;
  std::vector<std::uint8_t> grid;  // row-major over (p index, q index)
  std::vector<double> margins;
  std::vector<double> marginal_deviations;
  std::vector<double> boundary;  // per p row: sup{q : compatible}, bisected

  bool at(int pi, int qi) const {
    return grid[static_cast<size_t>(pi * resolution + qi)] != 0;
  }
  double margin_at(int pi, int qi) const {
    return margins[static_cast<size_t>(pi * resolution + qi)];
  }
  double marginal_deviation_at(int pi, int qi) const {
    return marginal_deviations[static_cast<size_t>(pi * resolution + qi)];
  }
  double grid_value(int index) const {
    return static_cast<double>(index) / (resolution - 1);
  }
};

// Sweeps the (p, q) grid with one feasibility solve per point and estimates
// the per-row boundary by bisection to 1e-3. Rows are independent jobs
// distributed over `threads` workers; results are written by grid index, so
// the output does not depend on scheduling.
CompatibilityRegion compatibility_region(const Povm& a, const Povm& b,
                                         NoiseKind model, int resolution,
                                         int threads = 0,
                                         const SdpOptions& options = {});

// Down-closedness of the computed grid: adding noise never breaks
// compatibility.
bool region_is_monotone(const CompatibilityRegion& region);

// "p,q,compatible" header plus resolution^2 rows, p-major.
std::string region_to_csv(const CompatibilityRegion& region);

}  // namespace povmkit
