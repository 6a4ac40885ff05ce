#include "groupsel/errors.hpp"

namespace groupsel {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::empty_group: return "EmptyGroup";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::uncovered_element: return "UncoveredElement";
    case Errc::duplicate_index: return "DuplicateIndex";
    case Errc::duplicate_group: return "DuplicateGroup";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::not_loopless_pairwise: return "NotLooplessPairwise";
    case Errc::budget_out_of_range: return "BudgetOutOfRange";
    case Errc::instance_too_large: return "InstanceTooLarge";
    case Errc::numerical_failure: return "NumericalFailure";
    case Errc::fractional_solution: return "FractionalSolution";
    case Errc::not_power_of_two: return "NotPowerOfTwo";
    case Errc::non_convergence: return "NonConvergence";
    case Errc::parse_error: return "ParseError";
  }
  return "Error";
}

}  // namespace groupsel
