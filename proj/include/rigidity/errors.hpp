#pragma once

#include <stdexcept>
#include <string>

namespace rigidity {

// Domain error kinds surfaced through the C API as RL_E_DOMAIN with a code
// string, and by the CLI as exit code 2.
enum class errc {
  non_square,
  tolerance_out_of_range,
  not_hyperbolic,
  margin_too_large,
  not_unimodular,
  dimension_mismatch,
  invalid_rank,
  not_dominant,
  not_integral,
  empty_weight_set,
  not_nilpotent,
  jacobi_violation,
  bracket_not_preserved,
  lattice_not_preserved,
  level_out_of_range,
  not_invertible,
  budget,
  insufficient_samples,
  transversality_failure,
  no_finite_power,
  cone_violation,
  unknown_generator,
  unsolvable,
  bad_input,
};

const char* errc_name(errc c);

class domain_error : public std::runtime_error {
 public:
  domain_error(errc code, std::string detail)
      : std::runtime_error(std::string(errc_name(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code),
        detail_(std::move(detail)) {}

  errc code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  errc code_;
  std::string detail_;
};

[[noreturn]] inline void fail(errc code, std::string detail = "") {
  throw domain_error(code, std::move(detail));
}

}  // namespace rigidity
