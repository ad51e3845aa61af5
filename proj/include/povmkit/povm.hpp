#pragma once

#include <string>
#include <vector>

#include "povmkit/matrix_ops.hpp"

namespace povmkit {

// Ordered tuple of Hermitian PSD effects summing to the identity.
// Construct through validate_povm; the raw constructor is for internal use
// by code that has already established the invariants.
struct Povm {
  int dim = 0;
  std::vector<ComplexMatrix> effects;

  int outcomes() const { return static_cast<int>(effects.size()); }
  const ComplexMatrix& effect(int i) const { return effects[static_cast<size_t>(i)]; }
};

Povm validate_povm(const std::vector<ComplexMatrix>& effects,
                   const Tolerances& tol = default_tolerances());
Povm validate_povm(const std::vector<ComplexMatrix>& effects, double psd_tol,
                   double sum_tol, const Tolerances& tol = default_tolerances());

// (N_a x N_b) grid of PSD matrices C_ij summing to the identity; the joint
// measurement whose marginals are checked against a pair of POVMs.
struct JointPovm {
  int dim = 0;
  int rows = 0;
  int cols = 0;
  std::vector<ComplexMatrix> grid;  // row-major

  const ComplexMatrix& at(int i, int j) const {
    return grid[static_cast<size_t>(i * cols + j)];
  }
  ComplexMatrix& at(int i, int j) {
    return grid[static_cast<size_t>(i * cols + j)];
  }
};

JointPovm validate_joint(const JointPovm& joint,
                         const Tolerances& tol = default_tolerances());

struct QuantumState {
  int dim = 0;
  ComplexMatrix matrix;
};

QuantumState make_state(const ComplexMatrix& rho,
                        const Tolerances& tol = default_tolerances());
QuantumState maximally_mixed_state(int d);

RealVector born_probabilities(const Povm& povm, const QuantumState& state,
                              const Tolerances& tol = default_tolerances());

struct MarginalReport {
  double max_row_deviation = 0.0;  // row sums vs first POVM
  double max_col_deviation = 0.0;  // column sums vs second POVM
  double tol = 0.0;
  bool pass = false;

  double max_deviation() const {
    return std::max(max_row_deviation, max_col_deviation);
  }
};

MarginalReport check_marginals(const JointPovm& joint, const Povm& a,
                               const Povm& b, double tol);

// Closed-form compatibility test for a pair of unbiased two-outcome qubit
// POVMs with effects (I +- r.sigma)/2: compatible exactly when
// |r_a + r_b| + |r_a - r_b| <= 2. Used as an independent oracle for the SDP.
bool busch_compatibility(const Povm& a, const Povm& b,
                         const Tolerances& tol = default_tolerances());

// Bloch vector of the first effect of an unbiased qubit POVM.
Eigen::Vector3d bloch_vector(const Povm& povm,
                             const Tolerances& tol = default_tolerances());

// Two-outcome qubit POVM with effects (I +- r.sigma)/2.
Povm unbiased_qubit_povm(const Eigen::Vector3d& bloch);

}  // namespace povmkit
