#include "povmkit/dilation.hpp"

#include <cmath>

namespace povmkit {

BlockUnitary make_block_unitary(int dim, int levels, const ComplexMatrix& u,
                                const Tolerances& tol) {
  if (u.rows() != dim * levels || u.cols() != dim * levels)
    throw Error(Errc::dimension_mismatch, "block unitary has wrong size");
  if (!is_unitary(u, tol.unitary_block))
    throw Error(Errc::not_unitary, "matrix is not unitary within tolerance");
  return BlockUnitary{dim, levels, u};
}

BlockUnitary build_two_outcome_unitary(const ComplexMatrix& a0,
                                       const ComplexMatrix& a1,
                                       const TwoOutcomeDilationParams& params,
                                       const Tolerances& tol) {
  Povm povm = [&] {
    try {
      return validate_povm({a0, a1}, tol);
    } catch (const Error& e) {
      throw Error(Errc::invalid_povm, std::string("invalid two-outcome POVM: ") + e.what());
    }
  }();
  const int d = povm.dim;
  for (const ComplexMatrix* p : {&params.v, &params.w, &params.z}) {
    if (p->rows() != d || p->cols() != d || !is_unitary(*p, tol.unitary_param))
      throw Error(Errc::non_unitary_param, "dilation parameter is not a d x d unitary");
  }
  ComplexMatrix r0 = hermitian_sqrt(a0, tol);
  ComplexMatrix r1 = hermitian_sqrt(a1, tol);
  ComplexMatrix u(2 * d, 2 * d);
  u.topLeftCorner(d, d) = params.v * r0;
  u.topRightCorner(d, d) = params.v * r1 * params.z.adjoint();
  u.bottomLeftCorner(d, d) = params.w * r1;
  u.bottomRightCorner(d, d) = -params.w * r0 * params.z.adjoint();
  return BlockUnitary{d, 2, u};
}

bool membership_check(const BlockUnitary& u, const Povm& povm, double tol) {
  if (u.dim != povm.dim || u.levels != povm.outcomes())
    throw Error(Errc::dimension_mismatch,
                "block structure does not match the POVM outcome count");
  for (int i = 0; i < u.levels; ++i) {
    ComplexMatrix b = u.block(i, 0);
    if (max_abs(ComplexMatrix(b.adjoint() * b - povm.effect(i))) > tol)
      return false;
  }
  return true;
}

BlockUnitary complete_dilation(const Povm& povm, const Tolerances& tol) {
  const int d = povm.dim;
  const int levels = povm.outcomes();
  ComplexMatrix first_column(levels * d, d);
  for (int i = 0; i < levels; ++i)
    first_column.block(i * d, 0, d, d) = hermitian_sqrt(povm.effect(i), tol);
  ComplexMatrix u = complete_isometry(first_column, 0, tol);
  return BlockUnitary{d, levels, u};
}

Povm induced_povm(const BlockUnitary& u, const Tolerances& tol) {
  if (!is_unitary(u.matrix, tol.unitary_block))
    throw Error(Errc::not_unitary, "block matrix is not unitary");
  std::vector<ComplexMatrix> effects;
  effects.reserve(static_cast<size_t>(u.levels));
  for (int i = 0; i < u.levels; ++i) {
    ComplexMatrix b = u.block(i, 0);
    ComplexMatrix e = b.adjoint() * b;
    effects.push_back(ComplexMatrix(0.5 * (e + e.adjoint())));
  }
  return validate_povm(effects, tol);
}

ProbeState probe_state(ProbeKind kind, double t, int levels,
                       const Tolerances& tol) {
  (void)tol;
  switch (kind) {
    case ProbeKind::basis: {
      if (levels < 1) throw Error(Errc::bad_parameter, "probe needs >= 1 level");
      ComplexMatrix m = ComplexMatrix::Zero(levels, levels);
      m(0, 0) = 1.0;
      return ProbeState{levels, m};
    }
    case ProbeKind::probabilistic: {
      if (t < 0.0 || t > 1.0)
        throw Error(Errc::bad_parameter, "probe parameter t must lie in [0, 1]");
      ComplexMatrix m = ComplexMatrix::Zero(2, 2);
      m(0, 0) = 1.0 - t;
      m(1, 1) = t;
      return ProbeState{2, m};
    }
    case ProbeKind::cat: {
      if (t < 0.0 || t > 1.0)
        throw Error(Errc::bad_parameter, "probe parameter t must lie in [0, 1]");
      Eigen::Vector2cd psi(std::sqrt(1.0 - t), std::sqrt(t));
      ComplexMatrix m = psi * psi.adjoint();
      return ProbeState{2, m};
    }
    case ProbeKind::custom:
      throw Error(Errc::bad_parameter,
                  "custom probes take a density matrix, not a scalar");
  }
  throw Error(Errc::bad_parameter, "unknown probe kind");
}

ProbeState probe_state(const ComplexMatrix& density, const Tolerances& tol) {
  QuantumState state = [&] {
    try {
      return make_state(density, tol);
    } catch (const Error& e) {
      throw Error(Errc::invalid_density_matrix, e.what());
    }
  }();
  return ProbeState{state.dim, state.matrix};
}

Povm effective_noisy_povm(const BlockUnitary& u, const ProbeState& beta,
                          const Tolerances& tol) {
  if (beta.levels != u.levels)
    throw Error(Errc::dimension_mismatch,
                "probe level count does not match the block count");
  const int d = u.dim;
  std::vector<ComplexMatrix> effects;
  effects.reserve(static_cast<size_t>(u.levels));
  for (int i = 0; i < u.levels; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    for (int c = 0; c < u.levels; ++c) {
      for (int k = 0; k < u.levels; ++k) {
        Complex coeff = beta.entry(c, k);
        if (coeff == Complex(0.0, 0.0)) continue;
        e += coeff * (u.block(i, k).adjoint() * u.block(i, c));
      }
    }
    effects.push_back(ComplexMatrix(0.5 * (e + e.adjoint())));
  }
  return validate_povm(effects, tol);
}

}  // namespace povmkit
