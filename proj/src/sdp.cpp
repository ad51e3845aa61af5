#include "povmkit/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace povmkit {

int SdpProblem::total_dim() const {
  int n = 0;
  for (int d : block_dims) n += d;
  return n;
}

void SdpProblem::validate() const {
  if (block_dims.empty())
    throw Error(Errc::bad_problem, "problem has no blocks");
  for (int d : block_dims)
    if (d < 1) throw Error(Errc::bad_problem, "block dimension must be >= 1");
  if (objective.size() != block_dims.size())
    throw Error(Errc::bad_problem, "objective must have one matrix per block");
  auto check_sym = [&](const RealMatrix& m, int block, const char* what) {
    int d = block_dims[static_cast<size_t>(block)];
    if (m.rows() != d || m.cols() != d)
      throw Error(Errc::bad_problem, std::string(what) + " has wrong block size");
    if (max_abs(RealMatrix(m - m.transpose())) > 1e-12 * (1.0 + max_abs(m)))
      throw Error(Errc::bad_problem, std::string(what) + " is not symmetric");
  };
  for (int b = 0; b < num_blocks(); ++b)
    check_sym(objective[static_cast<size_t>(b)], b, "objective matrix");
  for (const auto& con : constraints) {
    if (con.terms.empty())
      throw Error(Errc::bad_problem, "constraint with no terms");
    for (const auto& [b, m] : con.terms) {
      if (b < 0 || b >= num_blocks())
        throw Error(Errc::bad_problem, "constraint references unknown block");
      check_sym(m, b, "constraint matrix");
    }
  }

  // Linear independence of the constraint matrices via their Gram matrix.
  const int m = num_constraints();
  if (m == 0) return;
  RealMatrix gram = RealMatrix::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    for (int l = k; l < m; ++l) {
      double dot = 0.0;
      for (const auto& [bk, mk] : constraints[static_cast<size_t>(k)].terms)
        for (const auto& [bl, ml] : constraints[static_cast<size_t>(l)].terms)
          if (bk == bl) dot += (mk.cwiseProduct(ml)).sum();
      gram(k, l) = dot;
      gram(l, k) = dot;
    }
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (lo <= 1e-10 * std::max(1.0, hi))
    throw Error(Errc::bad_problem,
                "constraint matrices are linearly dependent (Gram eigenvalue " +
                    std::to_string(lo) + ")");
}

std::string to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::max_iterations: return "max_iterations";
    case SdpStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

using Blocks = std::vector<RealMatrix>;

struct Workspace {
  const SdpProblem& p;
  int m;
  Eigen::VectorXd rhs;
  double rhs_norm_inf;
  double data_norm;
  // constraints touching each block, as (constraint index, term matrix ref)
  std::vector<std::vector<std::pair<int, const RealMatrix*>>> by_block;

  explicit Workspace(const SdpProblem& problem)
      : p(problem), m(problem.num_constraints()) {
    rhs.resize(m);
    for (int k = 0; k < m; ++k)
      rhs[k] = p.constraints[static_cast<size_t>(k)].rhs;
    rhs_norm_inf = m > 0 ? rhs.cwiseAbs().maxCoeff() : 0.0;
    by_block.resize(static_cast<size_t>(p.num_blocks()));
    double norm = 0.0;
    for (int k = 0; k < m; ++k)
      for (const auto& [b, mat] : p.constraints[static_cast<size_t>(k)].terms) {
        by_block[static_cast<size_t>(b)].push_back({k, &mat});
        norm = std::max(norm, max_abs(mat));
      }
    for (const auto& c : p.objective) norm = std::max(norm, max_abs(c));
    data_norm = std::max(1.0, norm);
  }

  Eigen::VectorXd apply_A(const Blocks& x) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    for (int b = 0; b < p.num_blocks(); ++b)
      for (const auto& [k, mat] : by_block[static_cast<size_t>(b)])
        out[k] += (mat->cwiseProduct(x[static_cast<size_t>(b)])).sum();
    return out;
  }

  Blocks apply_At(const Eigen::VectorXd& y) const {
    Blocks out;
    out.reserve(p.block_dims.size());
    for (int b = 0; b < p.num_blocks(); ++b) {
      int d = p.block_dims[static_cast<size_t>(b)];
      RealMatrix acc = RealMatrix::Zero(d, d);
      for (const auto& [k, mat] : by_block[static_cast<size_t>(b)])
        acc += y[k] * (*mat);
      out.push_back(std::move(acc));
    }
    return out;
  }

  double inner_obj(const Blocks& x) const {
    double v = 0.0;
    for (int b = 0; b < p.num_blocks(); ++b)
      v += (p.objective[static_cast<size_t>(b)]
                .cwiseProduct(x[static_cast<size_t>(b)]))
               .sum();
    return v;
  }
};

RealMatrix sym(const RealMatrix& m) { return 0.5 * (m + m.transpose()); }

// Symmetric PSD square root and its inverse from one eigendecomposition.
void sym_sqrt(const RealMatrix& m, RealMatrix& root, RealMatrix& inv_root) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
  RealVector vals = es.eigenvalues().cwiseMax(1e-300);
  RealVector r = vals.cwiseSqrt();
  root = es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
  inv_root = es.eigenvectors() * r.cwiseInverse().asDiagonal() *
             es.eigenvectors().transpose();
}

// Largest step length t such that x + t*dx stays PSD, capped at 1.
double max_step(const RealMatrix& x, const RealMatrix& dx) {
  Eigen::LLT<RealMatrix> llt(x);
  RealMatrix l = llt.matrixL();
  RealMatrix n = l.triangularView<Eigen::Lower>().solve(dx);
  n = l.triangularView<Eigen::Lower>().solve(RealMatrix(n.transpose()));
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym(n), Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  if (lo >= -1e-14) return 1.0;
  return std::min(1.0, -1.0 / lo);
}

struct NtScaling {
  Blocks w;       // scaling point, W S W = X
  Blocks g;       // W^{1/2}
  Blocks g_inv;   // W^{-1/2}
  Blocks v;       // G S G = G^{-1} X G^{-1}
};

NtScaling compute_scaling(const Blocks& x, const Blocks& s) {
  NtScaling nt;
  const size_t nb = x.size();
  nt.w.resize(nb);
  nt.g.resize(nb);
  nt.g_inv.resize(nb);
  nt.v.resize(nb);
  for (size_t b = 0; b < nb; ++b) {
    RealMatrix s_half, s_half_inv;
    sym_sqrt(s[b], s_half, s_half_inv);
    RealMatrix t = sym(s_half * x[b] * s_half);
    RealMatrix t_half, t_half_inv;
    sym_sqrt(t, t_half, t_half_inv);
    nt.w[b] = sym(s_half_inv * t_half * s_half_inv);
    sym_sqrt(nt.w[b], nt.g[b], nt.g_inv[b]);
    nt.v[b] = sym(nt.g[b] * s[b] * nt.g[b]);
  }
  return nt;
}

// Solves (V M + M V)/2 = r in the eigenbasis of V.
RealMatrix lyapunov_solve(const RealMatrix& v, const RealMatrix& r) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(v);
  const RealMatrix& q = es.eigenvectors();
  RealVector th = es.eigenvalues().cwiseMax(1e-300);
  RealMatrix rt = q.transpose() * r * q;
  for (int i = 0; i < rt.rows(); ++i)
    for (int j = 0; j < rt.cols(); ++j) rt(i, j) *= 2.0 / (th[i] + th[j]);
  return sym(q * rt * q.transpose());
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options) {
  if (options.validate_problem) problem.validate();
  Workspace ws(problem);
  const int nb = problem.num_blocks();
  const int m = ws.m;
  const double n_total = static_cast<double>(problem.total_dim());

  SdpSolution sol;
  sol.status = SdpStatus::max_iterations;
  sol.y = Eigen::VectorXd::Zero(m);

  // Identity start scaled by the problem norm.
  double eta = std::max({10.0, std::sqrt(n_total), ws.rhs_norm_inf, ws.data_norm});
  Blocks x, s;
  for (int b = 0; b < nb; ++b) {
    int d = problem.block_dims[static_cast<size_t>(b)];
    x.push_back(eta * RealMatrix::Identity(d, d));
    s.push_back(eta * RealMatrix::Identity(d, d));
  }

  double best_merit = std::numeric_limits<double>::infinity();
  int stall = 0;

  auto measure = [&](const Blocks& xx, const Blocks& ss,
                     const Eigen::VectorXd& yy, double& pres, double& dres,
                     double& relgap, double& pobj, double& dobj) {
    Eigen::VectorXd rp = ws.rhs - ws.apply_A(xx);
    pres = rp.norm() / (1.0 + ws.rhs_norm_inf);
    Blocks aty = ws.apply_At(yy);
    double dr = 0.0;
    for (int b = 0; b < nb; ++b) {
      RealMatrix rd = problem.objective[static_cast<size_t>(b)] -
                      aty[static_cast<size_t>(b)] - ss[static_cast<size_t>(b)];
      dr = std::max(dr, max_abs(rd));
    }
    dres = dr / (1.0 + ws.data_norm);
    pobj = ws.inner_obj(xx);
    dobj = ws.rhs.dot(yy);
    relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  };

  for (int iter = 0; iter < options.max_iter; ++iter) {
    double pres, dres, relgap, pobj, dobj;
    measure(x, s, sol.y, pres, dres, relgap, pobj, dobj);
    double mu = 0.0;
    for (int b = 0; b < nb; ++b)
      mu += (x[static_cast<size_t>(b)].cwiseProduct(s[static_cast<size_t>(b)])).sum();
    mu /= n_total;
    sol.trace.push_back({mu, pres, dres, relgap});

    if (pres <= options.residual_tol && dres <= options.residual_tol &&
        relgap <= options.gap_tol) {
      sol.status = SdpStatus::optimal;
      sol.iterations = iter;
      break;
    }
    double merit = std::max({pres, dres, relgap});
    if (merit < best_merit * (1.0 - 1e-4)) {
      best_merit = merit;
      stall = 0;
    } else if (++stall >= 25) {
      sol.status = SdpStatus::numerical_failure;
      sol.iterations = iter;
      break;
    }

    NtScaling nt = compute_scaling(x, s);

    // Schur complement M_kl = sum_b <A_k, W A_l W>.
    RealMatrix schur = RealMatrix::Zero(m, m);
    for (int b = 0; b < nb; ++b) {
      const auto& members = ws.by_block[static_cast<size_t>(b)];
      const RealMatrix& w = nt.w[static_cast<size_t>(b)];
      for (size_t ki = 0; ki < members.size(); ++ki) {
        RealMatrix t = w * (*members[ki].second) * w;
        for (size_t li = 0; li <= ki; ++li) {
          double v = (t.cwiseProduct(*members[li].second)).sum();
          schur(members[ki].first, members[li].first) += v;
          if (li != ki)
            schur(members[li].first, members[ki].first) += v;
        }
      }
    }
    Eigen::LLT<RealMatrix> schur_llt;
    double ridge = 0.0;
    bool factorized = false;
    for (int attempt = 0; attempt < 5; ++attempt) {
      RealMatrix reg = schur;
      if (ridge > 0.0) reg += ridge * RealMatrix::Identity(m, m);
      schur_llt.compute(reg);
      if (schur_llt.info() == Eigen::Success) {
        factorized = true;
        break;
      }
      ridge = ridge == 0.0 ? 1e-14 * schur.trace() / m : ridge * 100.0;
    }
    if (!factorized) {
      sol.status = SdpStatus::numerical_failure;
      sol.iterations = iter;
      break;
    }

    Eigen::VectorXd rp = ws.rhs - ws.apply_A(x);
    Blocks aty = ws.apply_At(sol.y);
    Blocks rd(static_cast<size_t>(nb));
    for (int b = 0; b < nb; ++b)
      rd[static_cast<size_t>(b)] = problem.objective[static_cast<size_t>(b)] -
                                   aty[static_cast<size_t>(b)] -
                                   s[static_cast<size_t>(b)];

    // One Newton solve for a given scaled complementarity target.
    auto newton = [&](const Blocks& rc, Blocks& dx, Eigen::VectorXd& dy,
                      Blocks& ds) {
      Eigen::VectorXd h = rp;
      Blocks wrw(static_cast<size_t>(nb));
      for (int b = 0; b < nb; ++b) {
        const RealMatrix& w = nt.w[static_cast<size_t>(b)];
        wrw[static_cast<size_t>(b)] = sym(w * rd[static_cast<size_t>(b)] * w);
      }
      h += ws.apply_A(wrw);
      h -= ws.apply_A(rc);
      dy = schur_llt.solve(h);
      Blocks atdy = ws.apply_At(dy);
      dx.resize(static_cast<size_t>(nb));
      ds.resize(static_cast<size_t>(nb));
      for (int b = 0; b < nb; ++b) {
        ds[static_cast<size_t>(b)] =
            rd[static_cast<size_t>(b)] - atdy[static_cast<size_t>(b)];
        const RealMatrix& w = nt.w[static_cast<size_t>(b)];
        dx[static_cast<size_t>(b)] = sym(
            rc[static_cast<size_t>(b)] - w * ds[static_cast<size_t>(b)] * w);
      }
    };

    // Predictor: aim at mu = 0.
    Blocks rc_aff(static_cast<size_t>(nb));
    for (int b = 0; b < nb; ++b)
      rc_aff[static_cast<size_t>(b)] = -x[static_cast<size_t>(b)];
    Blocks dx_aff, ds_aff;
    Eigen::VectorXd dy_aff;
    newton(rc_aff, dx_aff, dy_aff, ds_aff);

    double ap_aff = 1.0, ad_aff = 1.0;
    for (int b = 0; b < nb; ++b) {
      ap_aff = std::min(ap_aff, max_step(x[static_cast<size_t>(b)],
                                         dx_aff[static_cast<size_t>(b)]));
      ad_aff = std::min(ad_aff, max_step(s[static_cast<size_t>(b)],
                                         ds_aff[static_cast<size_t>(b)]));
    }
    double mu_aff = 0.0;
    for (int b = 0; b < nb; ++b) {
      RealMatrix xa = x[static_cast<size_t>(b)] + ap_aff * dx_aff[static_cast<size_t>(b)];
      RealMatrix sa = s[static_cast<size_t>(b)] + ad_aff * ds_aff[static_cast<size_t>(b)];
      mu_aff += (xa.cwiseProduct(sa)).sum();
    }
    mu_aff /= n_total;
    double sigma = std::pow(std::max(0.0, std::min(1.0, mu_aff / mu)), 3.0);

    // Corrector: recenter to sigma*mu and subtract the second-order term,
    // assembled in the scaled space where X and S coincide.
    Blocks rc(static_cast<size_t>(nb));
    for (int b = 0; b < nb; ++b) {
      const size_t sb = static_cast<size_t>(b);
      const RealMatrix& g = nt.g[sb];
      const RealMatrix& gi = nt.g_inv[sb];
      const RealMatrix& v = nt.v[sb];
      RealMatrix dxh = gi * dx_aff[sb] * gi;
      RealMatrix dsh = g * ds_aff[sb] * g;
      RealMatrix rhat =
          sigma * mu * RealMatrix::Identity(v.rows(), v.cols()) - v * v -
          sym(RealMatrix(dxh * dsh));
      rc[sb] = sym(g * lyapunov_solve(v, rhat) * g);
    }
    Blocks dx, ds;
    Eigen::VectorXd dy;
    newton(rc, dx, dy, ds);

    double ap = 1.0, ad = 1.0;
    for (int b = 0; b < nb; ++b) {
      ap = std::min(ap, options.step_fraction *
                            max_step(x[static_cast<size_t>(b)],
                                     dx[static_cast<size_t>(b)]));
      ad = std::min(ad, options.step_fraction *
                            max_step(s[static_cast<size_t>(b)],
                                     ds[static_cast<size_t>(b)]));
    }
    ap = std::min(ap, 1.0);
    ad = std::min(ad, 1.0);
    for (int b = 0; b < nb; ++b) {
      x[static_cast<size_t>(b)] += ap * dx[static_cast<size_t>(b)];
      s[static_cast<size_t>(b)] += ad * ds[static_cast<size_t>(b)];
    }
    sol.y += ad * dy;
    sol.iterations = iter + 1;
  }

  double pres, dres, relgap, pobj, dobj;
  measure(x, s, sol.y, pres, dres, relgap, pobj, dobj);
  sol.primal_objective = pobj;
  sol.dual_objective = dobj;
  sol.gap = relgap;
  sol.primal_residual = pres;
  sol.dual_residual = dres;
  sol.x = std::move(x);
  sol.s = std::move(s);
  return sol;
}

CertificateReport verify_solution(const SdpProblem& problem,
                                  const SdpSolution& solution,
                                  const SdpOptions& options) {
  CertificateReport report;
  const int nb = problem.num_blocks();
  double rhs_inf = 0.0;
  double data_norm = 1.0;
  Eigen::VectorXd residual(problem.num_constraints());
  for (int k = 0; k < problem.num_constraints(); ++k) {
    const auto& con = problem.constraints[static_cast<size_t>(k)];
    double lhs = 0.0;
    for (const auto& [b, mat] : con.terms) {
      lhs += (mat.cwiseProduct(solution.x[static_cast<size_t>(b)])).sum();
      data_norm = std::max(data_norm, max_abs(mat));
    }
    residual[k] = con.rhs - lhs;
    rhs_inf = std::max(rhs_inf, std::abs(con.rhs));
  }
  report.primal_residual = residual.norm() / (1.0 + rhs_inf);

  double pobj = 0.0, dobj = 0.0;
  double dual_dev = 0.0;
  double xs = 0.0;
  for (int b = 0; b < nb; ++b) {
    const size_t sb = static_cast<size_t>(b);
    data_norm = std::max(data_norm, max_abs(problem.objective[sb]));
    RealMatrix aty = RealMatrix::Zero(problem.block_dims[sb], problem.block_dims[sb]);
    for (int k = 0; k < problem.num_constraints(); ++k)
      for (const auto& [bb, mat] : problem.constraints[static_cast<size_t>(k)].terms)
        if (bb == b) aty += solution.y[k] * mat;
    RealMatrix rd = problem.objective[sb] - aty - solution.s[sb];
    dual_dev = std::max(dual_dev, max_abs(rd));
    pobj += (problem.objective[sb].cwiseProduct(solution.x[sb])).sum();
    xs += (solution.x[sb].cwiseProduct(solution.s[sb])).sum();
    report.min_eig_x = std::min(report.min_eig_x, min_eigenvalue_sym(solution.x[sb]));
    report.min_eig_s = std::min(report.min_eig_s, min_eigenvalue_sym(solution.s[sb]));
  }
  for (int k = 0; k < problem.num_constraints(); ++k)
    dobj += problem.constraints[static_cast<size_t>(k)].rhs * solution.y[k];
  report.dual_residual = dual_dev / (1.0 + data_norm);
  report.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  report.complementarity = xs / problem.total_dim();
  report.pass = report.primal_residual <= options.residual_tol &&
                report.dual_residual <= options.residual_tol &&
                report.gap <= options.gap_tol && report.min_eig_x >= -1e-9 &&
                report.min_eig_s >= -1e-9;
  return report;
}

}  // namespace povmkit
