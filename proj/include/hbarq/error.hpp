#pragma once
#include <stdexcept>
#include <string>

namespace hbarq {

//! Failure categories; mirrored one-to-one by the C API status codes.
enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,
  forbidden_region = 3,
  wkb_invalid = 4,
  no_convergence = 5,
  sign_violation = 6,
  unresolved_resonance = 7,
  io = 8,
  buffer_too_small = 9,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) {
  throw Error(code, what);
}

} // namespace hbarq
