#pragma once

#include <string>

#include <json.hpp>

#include "povmkit/random_measures.hpp"
#include "povmkit/region.hpp"
#include "povmkit/robustness.hpp"

namespace povmkit {

using nlohmann::json;

// POVM wire format: {"d": int, "effects": [{"re": [[...]], "im": [[...]]}]}.
// Parsing validates squareness, Hermiticity (1e-9) and the POVM invariants.
json povm_to_json(const Povm& povm);
Povm povm_from_json(const json& j);
Povm load_povm_file(const std::string& path);
void save_povm_file(const Povm& povm, const std::string& path);

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

// {M, max_deviation, tolerance, pass, per_effect_deviations, ...}
json report_to_json(const MonteCarloReport& report);
json report_to_json(const ProbeEquivalenceReport& report);
json report_to_json(const ZeroMomentReport& report);

// {model, alpha_star, gap, status}
json robustness_to_json(const RobustnessResult& result);

// Debug dumps for the SDP layer.
json sdp_problem_to_json(const SdpProblem& problem);
json sdp_solution_to_json(const SdpSolution& solution);

}  // namespace povmkit
