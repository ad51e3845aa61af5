#include "povmkit/region.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

namespace povmkit {

namespace {

// Ray program through (p, q): maximize lambda subject to the joint having
// the marginals of the pair noised at levels (lambda p, lambda q), with
// lambda capped at 2. The point is compatible exactly when the optimum
// reaches 1; the optimum varies smoothly through the boundary, so the
// decision never hinges on an exactly-zero margin even when effects are
// singular.
SdpProblem build_ray_problem(const Povm& a, const Povm& b, NoiseKind model,
                             double p, double q) {
  const int d = a.dim;
  const int ra = a.outcomes();
  const int rb = b.outcomes();
  std::vector<double> s = trivial_weights(a, model);
  std::vector<double> r = trivial_weights(b, model);
  std::vector<ComplexMatrix> basis = hermitian_basis(d);

  SdpProblem problem;
  const int lambda_block = ra * rb;
  const int slack_block = lambda_block + 1;
  for (int i = 0; i < ra * rb; ++i) problem.block_dims.push_back(2 * d);
  problem.block_dims.push_back(1);
  problem.block_dims.push_back(1);
  for (int i = 0; i < ra * rb; ++i)
    problem.objective.push_back(RealMatrix::Zero(2 * d, 2 * d));
  problem.objective.push_back(-RealMatrix::Identity(1, 1));  // max lambda
  problem.objective.push_back(RealMatrix::Zero(1, 1));

  std::vector<RealMatrix> half_basis;
  half_basis.reserve(basis.size());
  for (const auto& e : basis) half_basis.push_back(0.5 * real_embedding(e));

  for (int i = 0; i < ra; ++i) {
    for (size_t k = 0; k < basis.size(); ++k) {
      SdpConstraint con;
      for (int j = 0; j < rb; ++j)
        con.terms.push_back({i * rb + j, half_basis[k]});
      double coeff = p * (s[static_cast<size_t>(i)] * basis[k].trace().real() -
                          herm_inner(basis[k], a.effect(i)));
      if (coeff != 0.0)
        con.terms.push_back({lambda_block, coeff * RealMatrix::Identity(1, 1)});
      con.rhs = s[static_cast<size_t>(i)] * basis[k].trace().real();
      problem.constraints.push_back(std::move(con));
    }
  }
  for (int j = 0; j + 1 < rb; ++j) {
    for (size_t k = 0; k < basis.size(); ++k) {
      SdpConstraint con;
      for (int i = 0; i < ra; ++i)
        con.terms.push_back({i * rb + j, half_basis[k]});
      double coeff = q * (r[static_cast<size_t>(j)] * basis[k].trace().real() -
                          herm_inner(basis[k], b.effect(j)));
      if (coeff != 0.0)
        con.terms.push_back({lambda_block, coeff * RealMatrix::Identity(1, 1)});
      con.rhs = r[static_cast<size_t>(j)] * basis[k].trace().real();
      problem.constraints.push_back(std::move(con));
    }
  }
  SdpConstraint cap;
  cap.terms.push_back({lambda_block, RealMatrix::Identity(1, 1)});
  cap.terms.push_back({slack_block, RealMatrix::Identity(1, 1)});
  cap.rhs = 2.0;
  problem.constraints.push_back(std::move(cap));
  return problem;
}

CompatibilityVerdict margin_solve(const Povm& a, const Povm& b,
                                  NoiseKind model, double p, double q,
                                  const SdpOptions& options) {
  SdpProblem problem = build_ray_problem(a, b, model, p, q);
  SdpOptions opts = options;
  opts.validate_problem = false;  // fixed template, validated in tests
  SdpSolution solution = solve(problem, opts);
  CompatibilityVerdict verdict;
  verdict.status = solution.status;
  if (solution.status != SdpStatus::optimal)
    throw Error(Errc::solver_failure,
                "feasibility solve at (p, q) = (" + std::to_string(p) + ", " +
                    std::to_string(q) + ") ended with status " +
                    to_string(solution.status));
  const int ra = a.outcomes();
  const int rb = b.outcomes();
  const int d = a.dim;
  double lambda = solution.x[static_cast<size_t>(ra * rb)](0, 0);
  verdict.margin = lambda - 1.0;
  verdict.compatible = verdict.margin >= -1e-7;

  // The solved joint belongs to the (lambda p, lambda q) pair. For
  // compatible points, mixing it back with the trivial product joint gives a
  // joint of the requested pair; re-check its marginals.
  JointPovm joint;
  joint.dim = d;
  joint.rows = ra;
  joint.cols = rb;
  std::vector<double> s = trivial_weights(a, model);
  std::vector<double> r = trivial_weights(b, model);
  double mix = verdict.compatible ? 1.0 / std::max(lambda, 1.0) : 1.0;
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < rb; ++j) {
      ComplexMatrix c =
          from_real_embedding(solution.x[static_cast<size_t>(i * rb + j)]);
      joint.grid.push_back(mix * c + (1.0 - mix) * s[static_cast<size_t>(i)] *
                                         r[static_cast<size_t>(j)] *
                                         ComplexMatrix::Identity(d, d));
    }
  double level_p = verdict.compatible ? p : lambda * p;
  double level_q = verdict.compatible ? q : lambda * q;
  verdict.marginal_deviation =
      check_marginals(joint, apply_noise(a, model, std::min(level_p, 1.0)),
                      apply_noise(b, model, std::min(level_q, 1.0)), 1e-6)
          .max_deviation();
  return verdict;
}

}  // namespace

CompatibilityVerdict compatible_at(const Povm& a, const Povm& b,
                                   NoiseKind model, double p, double q,
                                   const SdpOptions& options) {
  if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0)
    throw Error(Errc::level_out_of_range, "noise levels must lie in [0, 1]");
  return margin_solve(a, b, model, p, q, options);
}

CompatibilityRegion compatibility_region(const Povm& a, const Povm& b,
                                         NoiseKind model, int resolution,
                                         int threads,
                                         const SdpOptions& options) {
  if (resolution < 2)
    throw Error(Errc::bad_parameter, "grid resolution must be >= 2");
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;

  CompatibilityRegion region;
  region.resolution = resolution;
  region.model = model;
  region.grid.assign(static_cast<size_t>(resolution) * resolution, 0);
  region.margins.assign(static_cast<size_t>(resolution) * resolution, 0.0);
  region.marginal_deviations.assign(static_cast<size_t>(resolution) * resolution,
                                    0.0);
  region.boundary.assign(static_cast<size_t>(resolution), 0.0);

  std::atomic<int> next_row{0};
  std::atomic<bool> failed{false};
  std::string failure_message;
  std::mutex failure_mutex;

  auto run_row = [&](int pi) {
    double p = region.grid_value(pi);
    int last_compatible = -1;
    for (int qi = 0; qi < resolution; ++qi) {
      double q = region.grid_value(qi);
      CompatibilityVerdict verdict = margin_solve(a, b, model, p, q, options);
      region.grid[static_cast<size_t>(pi * resolution + qi)] =
          verdict.compatible ? 1 : 0;
      region.margins[static_cast<size_t>(pi * resolution + qi)] = verdict.margin;
      region.marginal_deviations[static_cast<size_t>(pi * resolution + qi)] =
          verdict.marginal_deviation;
      if (verdict.compatible) last_compatible = qi;
    }
    // Boundary by bisection between the last compatible grid point and the
    // first incompatible one.
    if (last_compatible == resolution - 1) {
      region.boundary[static_cast<size_t>(pi)] = 1.0;
      return;
    }
    if (last_compatible < 0) {
      region.boundary[static_cast<size_t>(pi)] = 0.0;
      return;
    }
    double lo = region.grid_value(last_compatible);
    double hi = region.grid_value(last_compatible + 1);
    while (hi - lo > 1e-3) {
      double mid = 0.5 * (lo + hi);
      if (margin_solve(a, b, model, p, mid, options).compatible)
        lo = mid;
      else
        hi = mid;
    }
    region.boundary[static_cast<size_t>(pi)] = 0.5 * (lo + hi);
  };

  auto worker = [&] {
    for (;;) {
      int pi = next_row.fetch_add(1);
      if (pi >= resolution || failed.load()) return;
      try {
        run_row(pi);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true);
        if (failure_message.empty()) failure_message = e.what();
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load())
    throw Error(Errc::solver_failure, "region sweep failed: " + failure_message);
  return region;
}

bool region_is_monotone(const CompatibilityRegion& region) {
  const int r = region.resolution;
  for (int pi = 0; pi < r; ++pi) {
    for (int qi = 0; qi < r; ++qi) {
      if (!region.at(pi, qi)) continue;
      if (pi > 0 && !region.at(pi - 1, qi)) return false;
      if (qi > 0 && !region.at(pi, qi - 1)) return false;
    }
  }
  return true;
}

std::string region_to_csv(const CompatibilityRegion& region) {
  std::string out = "p,q,compatible\n";
  char line[64];
  for (int pi = 0; pi < region.resolution; ++pi) {
    for (int qi = 0; qi < region.resolution; ++qi) {
      std::snprintf(line, sizeof(line), "%.6f,%.6f,%d\n",
                    region.grid_value(pi), region.grid_value(qi),
                    region.at(pi, qi) ? 1 : 0);
      out += line;
    }
  }
  return out;
}

}  // namespace povmkit
