#ifndef GPDEXT_ERROR_HPP_
#define GPDEXT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gpdext {

  //! Every failure raised by the library carries one of these codes so that
  //! front ends can map errors to exit statuses without string matching.
  enum class ErrorCode {
    unresolved_id,
    empty_object_set,
    not_composable,
    invalid_groupoid,
    invalid_group,
    invalid_ring,
    invalid_bundle,
    not_a_block,
    domain_mismatch,
    search_space_too_large,
    not_a_cocycle,
    structural_violation,
    invalid_factor_system,
    not_a_section,
    not_normalized,
    kernel_mismatch,
    invalid_input,
    f1_violated,
    not_outer,
    not_central_cocycle,
    carrier_mismatch,
    tau_not_unit,
    not_star_factor_system,
    component_mismatch,
    system_mismatch,
    parse_error,
    c1_violated,
    not_central_unit_cocycle
  };

  inline char const* to_string(ErrorCode code) noexcept {
    switch (code) {
      case ErrorCode::unresolved_id: return "UnresolvedId";
      case ErrorCode::empty_object_set: return "EmptyObjectSet";
      case ErrorCode::not_composable: return "NotComposable";
      case ErrorCode::invalid_groupoid: return "InvalidGroupoid";
      case ErrorCode::invalid_group: return "InvalidGroup";
      case ErrorCode::invalid_ring: return "InvalidRing";
      case ErrorCode::invalid_bundle: return "InvalidBundle";
      case ErrorCode::not_a_block: return "NotABlock";
      case ErrorCode::domain_mismatch: return "DomainMismatch";
      case ErrorCode::search_space_too_large: return "SearchSpaceTooLarge";
      case ErrorCode::not_a_cocycle: return "NotACocycle";
      case ErrorCode::structural_violation: return "StructuralViolation";
      case ErrorCode::invalid_factor_system: return "InvalidFactorSystem";
      case ErrorCode::not_a_section: return "NotASection";
      case ErrorCode::not_normalized: return "NotNormalized";
      case ErrorCode::kernel_mismatch: return "KernelMismatch";
      case ErrorCode::invalid_input: return "InvalidInput";
      case ErrorCode::f1_violated: return "F1Violated";
      case ErrorCode::not_outer: return "NotOuter";
      case ErrorCode::not_central_cocycle: return "NotCentralCocycle";
      case ErrorCode::carrier_mismatch: return "CarrierMismatch";
      case ErrorCode::tau_not_unit: return "TauNotUnit";
      case ErrorCode::not_star_factor_system: return "NotStarFactorSystem";
      case ErrorCode::component_mismatch: return "ComponentMismatch";
      case ErrorCode::system_mismatch: return "SystemMismatch";
      case ErrorCode::parse_error: return "ParseError";
      case ErrorCode::c1_violated: return "C1Violated";
      case ErrorCode::not_central_unit_cocycle: return "NotCentralUnitCocycle";
    }
    return "Unknown";
  }

  class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, std::string const& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          _code(code) {}

    ErrorCode code() const noexcept {
      return _code;
    }

   private:
    ErrorCode _code;
  };

  //! Thrown when an exhaustive search would exceed the configured bound.
  //! The computed cardinality is kept as a string since it may not fit in
  //! any machine integer.
  class SearchSpaceTooLarge : public Error {
   public:
    SearchSpaceTooLarge(std::string const& what_space,
                        std::string cardinality,
                        std::string bound)
        : Error(ErrorCode::search_space_too_large,
                what_space + " has " + cardinality
                    + " candidates (bound " + bound + ")"),
          _cardinality(std::move(cardinality)) {}

    std::string const& cardinality() const noexcept {
      return _cardinality;
    }

   private:
    std::string _cardinality;
  };

  [[noreturn]] inline void fail(ErrorCode code, std::string const& what) {
    throw Error(code, what);
  }

}  // namespace gpdext

#endif  // GPDEXT_ERROR_HPP_
