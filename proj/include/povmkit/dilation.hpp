#pragma once

#include "povmkit/povm.hpp"

namespace povmkit {

// Unitary on C^{(N+1)d} addressed through d x d blocks U_ij, stored so that
// block (i, j) occupies rows [i*d, (i+1)*d) and columns [j*d, (j+1)*d) of the
// assembled matrix, matching the layout U = [[U_00, U_01], [U_10, U_11]].
// Index i runs over probe levels, the blocks act on the system.
struct BlockUnitary {
  int dim = 0;     // system dimension d
  int levels = 0;  // probe levels N+1
  ComplexMatrix matrix;

  ComplexMatrix block(int i, int j) const {
    return matrix.block(i * dim, j * dim, dim, dim);
  }
  int total_dim() const { return dim * levels; }
};

BlockUnitary make_block_unitary(int dim, int levels, const ComplexMatrix& u,
                                const Tolerances& tol = default_tolerances());

struct TwoOutcomeDilationParams {
  ComplexMatrix v, w, z;  // d x d unitaries
};

// U = [[V sqrt(A0), V sqrt(A1) Z*], [W sqrt(A1), -W sqrt(A0) Z*]]. Every
// unitary whose first block column squares to (A0, A1) has this form.
BlockUnitary build_two_outcome_unitary(const ComplexMatrix& a0,
                                       const ComplexMatrix& a1,
                                       const TwoOutcomeDilationParams& params,
                                       const Tolerances& tol = default_tolerances());

// True when U_{i0}* U_{i0} reproduces every effect of `povm` within tol.
bool membership_check(const BlockUnitary& u, const Povm& povm, double tol);

// Canonical dilation with U_{i0} = sqrt(A_i): stacks the square roots as the
// first block column (orthonormal because the effects sum to the identity)
// and completes deterministically.
BlockUnitary complete_dilation(const Povm& povm,
                               const Tolerances& tol = default_tolerances());

// POVM measured on the system when the probe starts in |0><0|:
// A_i = U_{i0}* U_{i0}.
Povm induced_povm(const BlockUnitary& u,
                  const Tolerances& tol = default_tolerances());

enum class ProbeKind { basis, probabilistic, cat, custom };

// (N+1)-level probe state; the preparation imperfection that drives the
// noise model.
struct ProbeState {
  int levels = 0;
  ComplexMatrix matrix;

  Complex entry(int i, int j) const { return matrix(i, j); }
};

// basis:          |0><0| on `levels` levels (t ignored)
// probabilistic:  sigma_t = (1-t)|0><0| + t|1><1|
// cat:            gamma_t = |l_t><l_t|, |l_t> = sqrt(1-t)|0> + sqrt(t)|1>
ProbeState probe_state(ProbeKind kind, double t, int levels = 2,
                       const Tolerances& tol = default_tolerances());
ProbeState probe_state(const ComplexMatrix& density,
                       const Tolerances& tol = default_tolerances());

// Effective POVM of an indirect measurement with probe state beta:
// A_i^beta = sum_{c,k} beta_{ck} U_{ik}* U_{ic}. With beta = |0><0| this is
// induced_povm(u).
Povm effective_noisy_povm(const BlockUnitary& u, const ProbeState& beta,
                          const Tolerances& tol = default_tolerances());

}  // namespace povmkit
