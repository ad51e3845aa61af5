#pragma once

namespace povmkit {

// All numeric tolerances used across the library, collected in one record so
// they can be overridden consistently. Defaults reflect the accuracy the
// linear algebra and the SDP solver actually deliver at dimensions <= ~20.
struct Tolerances {
  // Relative Hermitian symmetry check: max |M_ij - conj(M_ji)| <= hermitian * (1 + ||M||_max).
  double hermitian = 1e-12;
  // Eigenvalues in [-eig_clamp, 0) are treated as exact zeros for square roots.
  double eig_clamp = 1e-10;
  // An eigenvalue below -psd_reject fails a positive-semidefiniteness check.
  double psd_reject = 1e-8;
  // Candidate basis vectors whose orthogonal residual falls below this are
  // rejected during isometry/unitary completion.
  double completion_reject = 1e-8;
  // T*T = I check for isometry inputs.
  double isometry = 1e-8;
  // Unitarity of individual d x d parameter matrices (V, W, Z).
  double unitary_param = 1e-10;
  // Unitarity of assembled block unitaries.
  double unitary_block = 1e-9;
  // POVM effect positivity and completeness for validated inputs.
  double povm_psd = 1e-9;
  double povm_sum = 1e-9;
  // Joint POVMs coming out of the SDP carry solver-level noise.
  double joint_psd = 1e-8;
  double joint_sum = 1e-7;
  // Density matrices: trace one and positivity.
  double state = 1e-10;
  // Marginal reproduction for joints at a robustness optimum.
  double marginal = 1e-6;
  // SDP solver exit thresholds.
  double sdp_residual = 1e-8;
  double sdp_gap = 1e-7;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace povmkit
