#include "pdmspec/error.hpp"

#include <sstream>

namespace pdmspec {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::syntax: return "SyntaxError";
    case ErrorCode::unknown_function: return "UnknownFunction";
    case ErrorCode::domain: return "DomainError";
    case ErrorCode::nonpositive_mass: return "NonpositiveMass";
    case ErrorCode::nonpositive_f: return "NonpositiveF";
    case ErrorCode::non_monotone_map: return "NonMonotoneMap";
    case ErrorCode::quadrature_failure: return "QuadratureFailure";
    case ErrorCode::out_of_range: return "OutOfRange";
    case ErrorCode::bad_params: return "BadParams";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::singular_shift: return "SingularShift";
    case ErrorCode::grid_mismatch: return "GridMismatch";
    case ErrorCode::missing_state: return "MissingState";
  }
  return "Error";
}

namespace {

std::string syntax_message(std::size_t offset, const std::string& expected,
                           const std::string& text) {
  std::ostringstream msg;
  msg << "syntax error at offset " << offset << ": expected " << expected
      << "\n  " << text << "\n  " << std::string(offset, ' ') << '^';
  return msg.str();
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::string expected,
                         const std::string& text)
    : Error(ErrorCode::syntax, syntax_message(offset, expected, text)),
      offset_(offset),
      expected_(std::move(expected)) {}

}  // namespace pdmspec
