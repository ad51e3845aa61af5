#pragma once

#include "povmkit/noise.hpp"
#include "povmkit/sdp.hpp"

namespace povmkit {

// Primal program: maximize the mixing level alpha over joint POVMs of the
// noisy pair,
//   max alpha  s.t.  sum_j C_ij = alpha A_i + (1-alpha) s_i I
//                    sum_i C_ij = alpha B_j + (1-alpha) r_j I
//                    C_ij >= 0, 0 <= alpha <= 1,
// with s, r the trivial weights of the chosen noise model. Encoded in
// standard min form: one real-embedded block per C_ij, two scalar blocks for
// alpha and its slack, one redundant column-marginal family dropped.
SdpProblem build_primal(const Povm& a, const Povm& b, NoiseKind model);

// Dual program, as a standard-form problem whose Lagrangian dual is
//   min 1 + sum_i <X_i, A_i> + sum_j <Y_j, B_j>
//   s.t. X_i + Y_j >= 0 for all i, j
//        1 + sum_i <X_i, A_i> + sum_j <Y_j, B_j>
//            >= sum_i s_i Tr X_i + sum_j r_j Tr Y_j,
// over Hermitian X_i, Y_j with the gauge Y_last = 0 fixed (the objective and
// constraints are invariant under X_i -> X_i + G, Y_j -> Y_j - G). The
// multiplier vector of the solved problem holds the coordinates of the X_i
// and Y_j; the program's optimal value is 1 - (solver objective).
SdpProblem build_dual(const Povm& a, const Povm& b, NoiseKind model);

struct DualVariables {
  std::vector<ComplexMatrix> x;  // one per outcome of the first POVM
  std::vector<ComplexMatrix> y;  // one per outcome of the second POVM
};

struct RobustnessResult {
  NoiseKind model = NoiseKind::uniform;
  double alpha_star = 0.0;
  JointPovm joint;        // optimal joint of the noisy pair
  DualVariables dual;     // multipliers extracted from the primal solve
  double gap = 0.0;       // relative primal-dual gap reported by the solver
  SdpStatus status = SdpStatus::numerical_failure;
  int iterations = 0;
};

// Solves the primal and extracts the optimum, the joint and the dual
// certificate. Throws Errc::solver_failure when the solver does not reach
// optimality.
RobustnessResult robustness(const Povm& a, const Povm& b, NoiseKind model,
                            const SdpOptions& options = {});

// Value of the dual program from a solution of build_dual: 1 - b^T y at the
// solver's multipliers, together with the dual variables it encodes.
struct DualSolveResult {
  double value = 0.0;
  DualVariables vars;
  SdpStatus status = SdpStatus::numerical_failure;
  double gap = 0.0;
};
DualSolveResult solve_dual(const Povm& a, const Povm& b, NoiseKind model,
                           const SdpOptions& options = {});

// Extracts (alpha, joint, duals) from a solved primal; exposed for tests.
RobustnessResult extract_primal_result(const Povm& a, const Povm& b,
                                       NoiseKind model,
                                       const SdpSolution& solution);

// The worked pair on C^3: a diagonal two-outcome POVM against the rank-(2,1)
// projectors onto Fourier-basis directions.
std::pair<Povm, Povm> fourier_example();

// Sharp x/z qubit pair (mutually unbiased bases).
std::pair<Povm, Povm> qubit_mub_example();

}  // namespace povmkit
