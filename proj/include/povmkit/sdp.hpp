#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "povmkit/matrix_ops.hpp"

namespace povmkit {

// Standard-form semidefinite program over a block-diagonal variable:
//   minimize    sum_b <C_b, X_b>
//   subject to  sum_b <A_{k,b}, X_b> = rhs_k   for k = 0..m-1
//               X_b  positive semidefinite.
// Constraint matrices are stored sparsely as (block, dense symmetric matrix)
// terms; 1 x 1 blocks encode scalar variables.
struct SdpConstraint {
  std::vector<std::pair<int, RealMatrix>> terms;
  double rhs = 0.0;
};

struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<RealMatrix> objective;  // one (possibly zero) matrix per block
  std::vector<SdpConstraint> constraints;

  int num_blocks() const { return static_cast<int>(block_dims.size()); }
  int num_constraints() const { return static_cast<int>(constraints.size()); }
  int total_dim() const;

  // Shape/symmetry checks plus a linear-independence test on the constraint
  // matrices (Gram-matrix eigenvalues, relative tolerance 1e-10). Throws
  // Errc::bad_problem.
  void validate() const;
};

struct SdpOptions {
  double residual_tol = 1e-8;
  double gap_tol = 1e-7;
  int max_iter = 100;
  double step_fraction = 0.98;  // fraction-to-boundary
  bool validate_problem = true;
};

enum class SdpStatus { optimal, max_iterations, numerical_failure };

std::string to_string(SdpStatus status);

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  std::vector<RealMatrix> x;  // primal blocks
  Eigen::VectorXd y;          // dual multipliers
  std::vector<RealMatrix> s;  // dual slack blocks
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;  // relative primal-dual gap
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  // One row per iteration: mu, primal residual, dual residual, relative gap.
  std::vector<std::array<double, 4>> trace;
};

// Primal-dual path-following solver with Nesterov-Todd scaling and a
// Mehrotra predictor-corrector step. Deterministic: the iterate sequence is
// a function of the problem and the options alone.
SdpSolution solve(const SdpProblem& problem, const SdpOptions& options = {});

struct CertificateReport {
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  double min_eig_x = 0.0;
  double min_eig_s = 0.0;
  double complementarity = 0.0;  // <X, S> / total dimension
  bool pass = false;
};

// Recomputes feasibility residuals, the duality gap and PSD margins from the
// problem data and the returned solution, without touching solver internals.
CertificateReport verify_solution(const SdpProblem& problem,
                                  const SdpSolution& solution,
                                  const SdpOptions& options = {});

}  // namespace povmkit
