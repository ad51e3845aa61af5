#pragma once

#include <stdexcept>
#include <string>

namespace povmkit {

enum class Errc {
  not_hermitian,
  not_psd,
  not_isometry,
  not_unitary,
  dimension_mismatch,
  effect_not_psd,
  sum_not_identity,
  level_out_of_range,
  physical_needs_two_outcomes,
  not_qubit,
  not_unbiased,
  invalid_povm,
  non_unitary_param,
  bad_parameter,
  invalid_density_matrix,
  not_member,
  bad_problem,
  solver_failure,
  parse_error,
};

// Single exception type for the whole library; the code discriminates the
// failure, the message carries diagnostics (indices, deviations).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace povmkit
