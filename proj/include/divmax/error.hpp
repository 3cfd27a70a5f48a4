#pragma once

#include <stdexcept>
#include <string>

namespace divmax {

enum class ErrorCode {
  argument,     // precondition on a value failed
  domain,       // input outside the mathematical domain (e.g. zero vector under cosine)
  shape,        // dimension / representation mismatch
  parse,        // malformed input file
  config,       // unsatisfiable run configuration
  consistency,  // two inputs that must agree do not
  io,           // file system failure
  unsupported,  // algorithm/measure combination not defined
  internal,     // invariant that should be unbreakable broke
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

}  // namespace divmax
