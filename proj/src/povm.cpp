#include "povmkit/povm.hpp"

#include <cmath>

namespace povmkit {

Povm validate_povm(const std::vector<ComplexMatrix>& effects,
                   const Tolerances& tol) {
  return validate_povm(effects, tol.povm_psd, tol.povm_sum, tol);
}

Povm validate_povm(const std::vector<ComplexMatrix>& effects, double psd_tol,
                   double sum_tol, const Tolerances& tol) {
  if (effects.empty())
    throw Error(Errc::invalid_povm, "a POVM needs at least one effect");
  const int d = static_cast<int>(effects[0].rows());
  for (size_t i = 0; i < effects.size(); ++i) {
    if (effects[i].rows() != d || effects[i].cols() != d)
      throw Error(Errc::dimension_mismatch,
                  "effect " + std::to_string(i) + " has mismatched dimensions");
    if (!is_hermitian(effects[i], tol))
      throw Error(Errc::effect_not_psd,
                  "effect " + std::to_string(i) + " is not Hermitian");
    double lo = min_eigenvalue(effects[i]);
    if (lo < -psd_tol)
      throw Error(Errc::effect_not_psd,
                  "effect " + std::to_string(i) + " has eigenvalue " +
                      std::to_string(lo));
  }
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& e : effects) sum += e;
  sum -= ComplexMatrix::Identity(d, d);
  double dev = max_abs(sum);
  if (dev > sum_tol)
    throw Error(Errc::sum_not_identity,
                "effects sum deviates from identity by " + std::to_string(dev));
  return Povm{d, effects};
}

JointPovm validate_joint(const JointPovm& joint, const Tolerances& tol) {
  if (joint.rows <= 0 || joint.cols <= 0 ||
      joint.grid.size() != static_cast<size_t>(joint.rows * joint.cols))
    throw Error(Errc::dimension_mismatch, "joint grid shape is inconsistent");
  ComplexMatrix sum = ComplexMatrix::Zero(joint.dim, joint.dim);
  for (const auto& c : joint.grid) {
    if (c.rows() != joint.dim || c.cols() != joint.dim)
      throw Error(Errc::dimension_mismatch, "joint entry dimension mismatch");
    if (!is_hermitian(c, tol) || min_eigenvalue(c) < -tol.joint_psd)
      throw Error(Errc::effect_not_psd, "joint entry is not PSD");
    sum += c;
  }
  sum -= ComplexMatrix::Identity(joint.dim, joint.dim);
  if (max_abs(sum) > tol.joint_sum)
    throw Error(Errc::sum_not_identity, "joint entries do not sum to identity");
  return joint;
}

QuantumState make_state(const ComplexMatrix& rho, const Tolerances& tol) {
  if (rho.rows() != rho.cols())
    throw Error(Errc::dimension_mismatch, "density matrix must be square");
  if (!is_hermitian(rho, tol))
    throw Error(Errc::invalid_density_matrix, "density matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > tol.state ||
      std::abs(rho.trace().imag()) > tol.state)
    throw Error(Errc::invalid_density_matrix, "density matrix trace is not 1");
  if (min_eigenvalue(rho) < -tol.state)
    throw Error(Errc::invalid_density_matrix, "density matrix is not PSD");
  return QuantumState{static_cast<int>(rho.rows()), rho};
}

QuantumState maximally_mixed_state(int d) {
  return QuantumState{d, ComplexMatrix::Identity(d, d) / static_cast<double>(d)};
}

RealVector born_probabilities(const Povm& povm, const QuantumState& state,
                              const Tolerances&) {
  if (povm.dim != state.dim)
    throw Error(Errc::dimension_mismatch, "state and POVM dimensions differ");
  RealVector p(povm.outcomes());
  for (int i = 0; i < povm.outcomes(); ++i)
    p[i] = (state.matrix * povm.effect(i)).trace().real();
  return p;
}

MarginalReport check_marginals(const JointPovm& joint, const Povm& a,
                               const Povm& b, double tol) {
  if (joint.dim != a.dim || joint.dim != b.dim || joint.rows != a.outcomes() ||
      joint.cols != b.outcomes())
    throw Error(Errc::dimension_mismatch, "joint shape does not match the POVM pair");
  MarginalReport report;
  report.tol = tol;
  for (int i = 0; i < joint.rows; ++i) {
    ComplexMatrix row = ComplexMatrix::Zero(joint.dim, joint.dim);
    for (int j = 0; j < joint.cols; ++j) row += joint.at(i, j);
    report.max_row_deviation =
        std::max(report.max_row_deviation, max_abs(ComplexMatrix(row - a.effect(i))));
  }
  for (int j = 0; j < joint.cols; ++j) {
    ComplexMatrix col = ComplexMatrix::Zero(joint.dim, joint.dim);
    for (int i = 0; i < joint.rows; ++i) col += joint.at(i, j);
    report.max_col_deviation =
        std::max(report.max_col_deviation, max_abs(ComplexMatrix(col - b.effect(j))));
  }
  report.pass = report.max_deviation() <= tol;
  return report;
}

namespace {

const ComplexMatrix& pauli(int k) {
  static const ComplexMatrix sx = [] {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
  }();
  static const ComplexMatrix sy = [] {
    ComplexMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
  }();
  static const ComplexMatrix sz = [] {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
  }();
  switch (k) {
    case 0: return sx;
    case 1: return sy;
    default: return sz;
  }
}

}  // namespace

Eigen::Vector3d bloch_vector(const Povm& povm, const Tolerances& tol) {
  if (povm.dim != 2) throw Error(Errc::not_qubit, "POVM is not on a qubit");
  if (povm.outcomes() != 2)
    throw Error(Errc::not_qubit, "expected a two-outcome qubit POVM");
  for (int i = 0; i < 2; ++i) {
    if (std::abs(povm.effect(i).trace().real() - 1.0) > tol.povm_psd)
      throw Error(Errc::not_unbiased, "effect trace is not 1");
  }
  Eigen::Vector3d r;
  for (int k = 0; k < 3; ++k)
    r[k] = (povm.effect(0) * pauli(k)).trace().real();
  return r;
}

bool busch_compatibility(const Povm& a, const Povm& b, const Tolerances& tol) {
  Eigen::Vector3d ra = bloch_vector(a, tol);
  Eigen::Vector3d rb = bloch_vector(b, tol);
  double value = (ra + rb).norm() + (ra - rb).norm();
  return value <= 2.0 + 1e-12;
}

Povm unbiased_qubit_povm(const Eigen::Vector3d& bloch) {
  ComplexMatrix dot = bloch[0] * pauli(0) + bloch[1] * pauli(1) + bloch[2] * pauli(2);
  ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  return validate_povm({0.5 * (id + dot), 0.5 * (id - dot)});
}

}  // namespace povmkit
