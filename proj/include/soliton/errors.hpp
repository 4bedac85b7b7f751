#pragma once

#include <stdexcept>
#include <string>

namespace soliton {

enum class ErrorKind {
  parameter,   // bad argument or malformed input structure
  validation,  // input violates a documented invariant
  numerical,   // solver did not converge or hit a conditioning guard
  io,          // file missing or unreadable
};

// Every failure raised by the library is an Error. `code` is a short stable
// identifier (e.g. "singular_synthesis") that tests and the CLI can match on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& code, const std::string& message);

// CLI exit code for an error kind: parameter/validation 1, numerical 2, io 3.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace soliton
