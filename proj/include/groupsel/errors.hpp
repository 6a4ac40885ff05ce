#pragma once

#include <stdexcept>
#include <string>

namespace groupsel {

enum class Errc {
  empty_group,
  index_out_of_range,
  uncovered_element,
  duplicate_index,
  duplicate_group,
  dimension_mismatch,
  not_loopless_pairwise,
  budget_out_of_range,
  instance_too_large,
  numerical_failure,
  fractional_solution,
  not_power_of_two,
  non_convergence,
  parse_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace groupsel
