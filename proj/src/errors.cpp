#include "soliton/errors.hpp"

namespace soliton {

Error::Error(ErrorKind kind, std::string code, const std::string& message)
    : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

void fail(ErrorKind kind, const std::string& code, const std::string& message) {
  throw Error(kind, code, message);
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parameter:
    case ErrorKind::validation:
      return 1;
    case ErrorKind::numerical:
      return 2;
    case ErrorKind::io:
      return 3;
  }
  return 2;
}

}  // namespace soliton
