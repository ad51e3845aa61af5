#include "povmkit/robustness.hpp"

#include <cmath>

namespace povmkit {

namespace {

void require_same_dim(const Povm& a, const Povm& b) {
  if (a.dim != b.dim)
    throw Error(Errc::dimension_mismatch, "POVM pair lives on different spaces");
}

}  // namespace

SdpProblem build_primal(const Povm& a, const Povm& b, NoiseKind model) {
  require_same_dim(a, b);
  const int d = a.dim;
  const int na = a.outcomes();
  const int nb = b.outcomes();
  std::vector<double> s = trivial_weights(a, model);
  std::vector<double> r = trivial_weights(b, model);
  std::vector<ComplexMatrix> basis = hermitian_basis(d);

  SdpProblem problem;
  const int alpha_block = na * nb;
  const int slack_block = alpha_block + 1;
  for (int i = 0; i < na * nb; ++i) problem.block_dims.push_back(2 * d);
  problem.block_dims.push_back(1);
  problem.block_dims.push_back(1);
  for (int i = 0; i < na * nb; ++i)
    problem.objective.push_back(RealMatrix::Zero(2 * d, 2 * d));
  problem.objective.push_back(-RealMatrix::Identity(1, 1));  // max alpha
  problem.objective.push_back(RealMatrix::Zero(1, 1));

  std::vector<RealMatrix> half_basis;
  half_basis.reserve(basis.size());
  for (const auto& e : basis) half_basis.push_back(0.5 * real_embedding(e));

  // Row marginals, all i. The alpha coefficient moves the noisy target to
  // the right-hand side: <E_k, sum_j C_ij> + alpha <E_k, s_i I - A_i> = s_i Tr E_k.
  for (int i = 0; i < na; ++i) {
    for (size_t k = 0; k < basis.size(); ++k) {
      SdpConstraint con;
      for (int j = 0; j < nb; ++j)
        con.terms.push_back({i * nb + j, half_basis[k]});
      double coeff = s[static_cast<size_t>(i)] * basis[k].trace().real() -
                     herm_inner(basis[k], a.effect(i));
      con.terms.push_back({alpha_block, coeff * RealMatrix::Identity(1, 1)});
      con.rhs = s[static_cast<size_t>(i)] * basis[k].trace().real();
      problem.constraints.push_back(std::move(con));
    }
  }
  // Column marginals for all but the last outcome of b; the dropped family
  // is implied by the rows.
  for (int j = 0; j + 1 < nb; ++j) {
    for (size_t k = 0; k < basis.size(); ++k) {
      SdpConstraint con;
      for (int i = 0; i < na; ++i)
        con.terms.push_back({i * nb + j, half_basis[k]});
      double coeff = r[static_cast<size_t>(j)] * basis[k].trace().real() -
                     herm_inner(basis[k], b.effect(j));
      con.terms.push_back({alpha_block, coeff * RealMatrix::Identity(1, 1)});
      con.rhs = r[static_cast<size_t>(j)] * basis[k].trace().real();
      problem.constraints.push_back(std::move(con));
    }
  }
  // alpha + slack = 1 pins alpha to [0, 1].
  SdpConstraint cap;
  cap.terms.push_back({alpha_block, RealMatrix::Identity(1, 1)});
  cap.terms.push_back({slack_block, RealMatrix::Identity(1, 1)});
  cap.rhs = 1.0;
  problem.constraints.push_back(std::move(cap));
  return problem;
}

SdpProblem build_dual(const Povm& a, const Povm& b, NoiseKind model) {
  require_same_dim(a, b);
  const int d = a.dim;
  const int na = a.outcomes();
  const int nb = b.outcomes();
  std::vector<double> s = trivial_weights(a, model);
  std::vector<double> r = trivial_weights(b, model);
  std::vector<ComplexMatrix> basis = hermitian_basis(d);

  SdpProblem problem;
  const int scalar_block = na * nb;
  for (int i = 0; i < na * nb; ++i) problem.block_dims.push_back(2 * d);
  problem.block_dims.push_back(1);
  for (int i = 0; i < na * nb; ++i)
    problem.objective.push_back(RealMatrix::Zero(2 * d, 2 * d));
  problem.objective.push_back(RealMatrix::Identity(1, 1));

  std::vector<RealMatrix> emb_basis;
  emb_basis.reserve(basis.size());
  for (const auto& e : basis) emb_basis.push_back(real_embedding(e));

  // One constraint per coordinate of the dual variables. X_i coordinates
  // touch the whole block row (i, *); Y_j coordinates the column (*, j).
  // The last Y is gauge-fixed to zero and gets no coordinates.
  for (int i = 0; i < na; ++i) {
    for (size_t k = 0; k < basis.size(); ++k) {
      SdpConstraint con;
      for (int j = 0; j < nb; ++j)
        con.terms.push_back({i * nb + j, -emb_basis[k]});
      double coeff = -(herm_inner(basis[k], a.effect(i)) -
                       s[static_cast<size_t>(i)] * basis[k].trace().real());
      con.terms.push_back({scalar_block, coeff * RealMatrix::Identity(1, 1)});
      con.rhs = -herm_inner(basis[k], a.effect(i));
      problem.constraints.push_back(std::move(con));
    }
  }
  for (int j = 0; j + 1 < nb; ++j) {
    for (size_t k = 0; k < basis.size(); ++k) {
      SdpConstraint con;
      for (int i = 0; i < na; ++i)
        con.terms.push_back({i * nb + j, -emb_basis[k]});
      double coeff = -(herm_inner(basis[k], b.effect(j)) -
                       r[static_cast<size_t>(j)] * basis[k].trace().real());
      con.terms.push_back({scalar_block, coeff * RealMatrix::Identity(1, 1)});
      con.rhs = -herm_inner(basis[k], b.effect(j));
      problem.constraints.push_back(std::move(con));
    }
  }
  return problem;
}

namespace {

DualVariables dual_from_coordinates(const Eigen::VectorXd& y, int d, int na,
                                    int nb, double scale) {
  std::vector<ComplexMatrix> basis = hermitian_basis(d);
  const int dd = static_cast<int>(basis.size());
  DualVariables vars;
  for (int i = 0; i < na; ++i) {
    ComplexMatrix xi = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < dd; ++k) xi += scale * y[i * dd + k] * basis[static_cast<size_t>(k)];
    vars.x.push_back(xi);
  }
  for (int j = 0; j + 1 < nb; ++j) {
    ComplexMatrix yj = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < dd; ++k)
      yj += scale * y[(na + j) * dd + k] * basis[static_cast<size_t>(k)];
    vars.y.push_back(yj);
  }
  vars.y.push_back(ComplexMatrix::Zero(d, d));  // gauge-fixed last Y
  return vars;
}

}  // namespace

RobustnessResult extract_primal_result(const Povm& a, const Povm& b,
                                       NoiseKind model,
                                       const SdpSolution& solution) {
  const int d = a.dim;
  const int na = a.outcomes();
  const int nb = b.outcomes();
  RobustnessResult result;
  result.model = model;
  result.status = solution.status;
  result.gap = solution.gap;
  result.iterations = solution.iterations;
  result.alpha_star = solution.x[static_cast<size_t>(na * nb)](0, 0);
  result.joint.dim = d;
  result.joint.rows = na;
  result.joint.cols = nb;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      result.joint.grid.push_back(
          from_real_embedding(solution.x[static_cast<size_t>(i * nb + j)]));
  result.dual = dual_from_coordinates(solution.y, d, na, nb, -1.0);
  return result;
}

RobustnessResult robustness(const Povm& a, const Povm& b, NoiseKind model,
                            const SdpOptions& options) {
  SdpProblem problem = build_primal(a, b, model);
  SdpSolution solution = solve(problem, options);
  if (solution.status != SdpStatus::optimal)
    throw Error(Errc::solver_failure,
                "robustness solve ended with status " +
                    to_string(solution.status) + " after " +
                    std::to_string(solution.iterations) +
                    " iterations (primal residual " +
                    std::to_string(solution.primal_residual) + ", gap " +
                    std::to_string(solution.gap) + ")");
  return extract_primal_result(a, b, model, solution);
}

DualSolveResult solve_dual(const Povm& a, const Povm& b, NoiseKind model,
                           const SdpOptions& options) {
  SdpProblem problem = build_dual(a, b, model);
  SdpSolution solution = solve(problem, options);
  if (solution.status != SdpStatus::optimal)
    throw Error(Errc::solver_failure,
                "dual robustness solve ended with status " +
                    to_string(solution.status));
  DualSolveResult result;
  result.status = solution.status;
  result.gap = solution.gap;
  result.value = 1.0 - solution.dual_objective;
  result.vars =
      dual_from_coordinates(solution.y, a.dim, a.outcomes(), b.outcomes(), 1.0);
  return result;
}

std::pair<Povm, Povm> fourier_example() {
  ComplexMatrix a0 = ComplexMatrix::Zero(3, 3);
  a0(0, 0) = 1.0 / 3.0;
  a0(1, 1) = 2.0 / 3.0;
  ComplexMatrix a1 = ComplexMatrix::Identity(3, 3) - a0;
  Povm a = validate_povm({a0, a1});

  const double s = 1.0 / std::sqrt(3.0);
  const Complex omega = std::polar(1.0, 2.0 * M_PI / 3.0);
  ComplexMatrix f(3, 3);
  f(0, 0) = s; f(0, 1) = s; f(0, 2) = s;
  f(1, 0) = s; f(1, 1) = s * omega; f(1, 2) = s * omega * omega;
  f(2, 0) = s; f(2, 1) = s * omega * omega; f(2, 2) = s * omega;
  ComplexMatrix b0 = f.col(0) * f.col(0).adjoint() + f.col(1) * f.col(1).adjoint();
  ComplexMatrix b1 = f.col(2) * f.col(2).adjoint();
  Povm b = validate_povm({b0, b1});
  return {a, b};
}

std::pair<Povm, Povm> qubit_mub_example() {
  return {unbiased_qubit_povm(Eigen::Vector3d(1, 0, 0)),
          unbiased_qubit_povm(Eigen::Vector3d(0, 0, 1))};
}

}  // namespace povmkit
