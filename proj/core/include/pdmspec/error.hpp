#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdmspec {

enum class ErrorCode {
  syntax,
  unknown_function,
  domain,
  nonpositive_mass,
  nonpositive_f,
  non_monotone_map,
  quadrature_failure,
  out_of_range,
  bad_params,
  no_convergence,
  singular_shift,
  grid_mismatch,
  missing_state,
};

const char* to_string(ErrorCode code) noexcept;

/// Base of every error thrown by the library. The code drives CLI exit
/// statuses; the message is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <ErrorCode C>
class CodedError : public Error {
 public:
  explicit CodedError(const std::string& what) : Error(C, what) {}
};

using UnknownFunction = CodedError<ErrorCode::unknown_function>;
using DomainError = CodedError<ErrorCode::domain>;
using NonpositiveMass = CodedError<ErrorCode::nonpositive_mass>;
using NonpositiveF = CodedError<ErrorCode::nonpositive_f>;
using NonMonotoneMap = CodedError<ErrorCode::non_monotone_map>;
using QuadratureFailure = CodedError<ErrorCode::quadrature_failure>;
using OutOfRange = CodedError<ErrorCode::out_of_range>;
using BadParams = CodedError<ErrorCode::bad_params>;
using NoConvergence = CodedError<ErrorCode::no_convergence>;
using SingularShift = CodedError<ErrorCode::singular_shift>;
using GridMismatch = CodedError<ErrorCode::grid_mismatch>;
using MissingState = CodedError<ErrorCode::missing_state>;

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::string expected, const std::string& text);

  /// Byte offset into the parsed text where the problem was detected.
  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

}  // namespace pdmspec
