#pragma once

#include <stdexcept>
#include <string>

namespace fddb360 {

enum class ErrorCode {
  invalid_argument,
  parse,
  domain,
  io,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_domain(const std::string& what) {
  throw Error(ErrorCode::domain, what);
}

[[noreturn]] inline void throw_parse(const std::string& what, int line_no) {
  throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + what);
}

[[noreturn]] inline void throw_io(const std::string& what) {
  throw Error(ErrorCode::io, what);
}

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorCode::invalid_argument, what);
}

}  // namespace fddb360
