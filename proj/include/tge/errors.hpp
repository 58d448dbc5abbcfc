#pragma once

#include <stdexcept>
#include <string>

namespace tge {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind {
  usage = 1,    // bad flags, bad config
  data = 2,     // malformed input, infeasible request
  numeric = 3,  // non-finite values, failed decomposition
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_usage(const std::string& msg) {
  throw Error(ErrorKind::usage, msg);
}
[[noreturn]] inline void throw_data(const std::string& msg) {
  throw Error(ErrorKind::data, msg);
}
[[noreturn]] inline void throw_numeric(const std::string& msg) {
  throw Error(ErrorKind::numeric, msg);
}

}  // namespace tge
