#pragma once

#include <stdexcept>
#include <string>

namespace genjac {

enum class Errc {
  division_by_zero,
  invalid_input,
  invalid_class,
  not_coprime,
  budget_exceeded,
  no_canonical_map,
  degree_bound_violation,
  trivial_character,
  numerical_failure,
  incomplete_bundle,
  carrier_too_small,
  carrier_mismatch,
  injectivity_violation,
  invalid_comparison,
  no_twist_found,
  hypothesis_violated,
  invalid_curve,
  evaluation_at_support,
  parse_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::division_by_zero: return "DivisionByZero";
    case Errc::invalid_input: return "InvalidInput";
    case Errc::invalid_class: return "InvalidClass";
    case Errc::not_coprime: return "NotCoprime";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::no_canonical_map: return "NoCanonicalMap";
    case Errc::degree_bound_violation: return "DegreeBoundViolation";
    case Errc::trivial_character: return "TrivialCharacter";
    case Errc::numerical_failure: return "NumericalFailure";
    case Errc::incomplete_bundle: return "IncompleteBundle";
    case Errc::carrier_too_small: return "CarrierTooSmall";
    case Errc::carrier_mismatch: return "CarrierMismatch";
    case Errc::injectivity_violation: return "InjectivityViolation";
    case Errc::invalid_comparison: return "InvalidComparison";
    case Errc::no_twist_found: return "NoTwistFound";
    case Errc::hypothesis_violated: return "HypothesisViolated";
    case Errc::invalid_curve: return "InvalidCurve";
    case Errc::evaluation_at_support: return "EvaluationAtSupport";
    case Errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace genjac
