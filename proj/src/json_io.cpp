#include "povmkit/json_io.hpp"

#include <fstream>

namespace povmkit {

json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json re_row = json::array();
    json im_row = json::array();
    for (int j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw Error(Errc::parse_error, "matrix entry needs 're' and 'im' arrays");
  const json& re = j.at("re");
  const json& im = j.at("im");
  if (!re.is_array() || !im.is_array() || re.size() != im.size() || re.empty())
    throw Error(Errc::parse_error, "matrix parts must be equal-sized nonempty arrays");
  const size_t rows = re.size();
  const size_t cols = re.at(0).size();
  ComplexMatrix m(static_cast<int>(rows), static_cast<int>(cols));
  for (size_t i = 0; i < rows; ++i) {
    const json& re_row = re.at(i);
    const json& im_row = im.at(i);
    if (!re_row.is_array() || re_row.size() != cols || im_row.size() != cols)
      throw Error(Errc::parse_error, "ragged matrix rows");
    for (size_t j2 = 0; j2 < cols; ++j2) {
      if (!re_row.at(j2).is_number() || !im_row.at(j2).is_number())
        throw Error(Errc::parse_error, "matrix entries must be numbers");
      m(static_cast<int>(i), static_cast<int>(j2)) =
          Complex(re_row.at(j2).get<double>(), im_row.at(j2).get<double>());
    }
  }
  return m;
}

json povm_to_json(const Povm& povm) {
  json effects = json::array();
  for (const auto& e : povm.effects) effects.push_back(matrix_to_json(e));
  return json{{"d", povm.dim}, {"effects", std::move(effects)}};
}

Povm povm_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("effects"))
    throw Error(Errc::parse_error, "POVM JSON needs 'd' and 'effects'");
  if (!j.at("d").is_number_integer())
    throw Error(Errc::parse_error, "'d' must be an integer");
  const int d = j.at("d").get<int>();
  if (!j.at("effects").is_array() || j.at("effects").empty())
    throw Error(Errc::parse_error, "'effects' must be a nonempty array");
  std::vector<ComplexMatrix> effects;
  for (const auto& entry : j.at("effects")) {
    ComplexMatrix m = matrix_from_json(entry);
    if (m.rows() != d || m.cols() != d)
      throw Error(Errc::parse_error, "effect size does not match 'd'");
    if (!is_hermitian(m))
      throw Error(Errc::parse_error, "effect is not Hermitian within 1e-9");
    effects.push_back(std::move(m));
  }
  return validate_povm(effects);
}

Povm load_povm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open POVM file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error,
                "invalid JSON in " + path + ": " + e.what());
  }
  return povm_from_json(j);
}

void save_povm_file(const Povm& povm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::parse_error, "cannot write POVM file " + path);
  out << povm_to_json(povm).dump(2) << "\n";
}

json report_to_json(const MonteCarloReport& report) {
  return json{{"M", report.samples},
              {"max_deviation", report.max_deviation},
              {"tolerance", report.tolerance},
              {"pass", report.pass},
              {"wide_tolerance", report.wide_tolerance},
              {"max_std_error", report.max_std_error},
              {"per_effect_deviations", report.per_effect_deviation}};
}

json report_to_json(const ProbeEquivalenceReport& report) {
  return json{{"t", report.t},
              {"M", report.samples},
              {"max_difference", report.max_difference},
              {"tolerance", report.tolerance},
              {"pass", report.pass}};
}

json report_to_json(const ZeroMomentReport& report) {
  return json{{"M", report.samples},
              {"max_norm", report.max_norm},
              {"threshold", report.threshold},
              {"pass", report.pass}};
}

json robustness_to_json(const RobustnessResult& result) {
  return json{{"model", to_string(result.model)},
              {"alpha_star", result.alpha_star},
              {"gap", result.gap},
              {"status", to_string(result.status)}};
}

json sdp_problem_to_json(const SdpProblem& problem) {
  json constraints = json::array();
  for (const auto& con : problem.constraints) {
    json terms = json::array();
    for (const auto& [b, m] : con.terms) {
      json rows = json::array();
      for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
      }
      terms.push_back(json{{"block", b}, {"matrix", std::move(rows)}});
    }
    constraints.push_back(json{{"terms", std::move(terms)}, {"rhs", con.rhs}});
  }
  return json{{"blocks", problem.block_dims},
              {"num_constraints", problem.num_constraints()},
              {"constraints", std::move(constraints)}};
}

json sdp_solution_to_json(const SdpSolution& solution) {
  json iterates = json::array();
  for (const auto& row : solution.trace)
    iterates.push_back(json{{"mu", row[0]},
                            {"primal_residual", row[1]},
                            {"dual_residual", row[2]},
                            {"gap", row[3]}});
  return json{{"status", to_string(solution.status)},
              {"primal_objective", solution.primal_objective},
              {"dual_objective", solution.dual_objective},
              {"gap", solution.gap},
              {"primal_residual", solution.primal_residual},
              {"dual_residual", solution.dual_residual},
              {"iterations", solution.iterations},
              {"iterates", std::move(iterates)}};
}

}  // namespace povmkit
