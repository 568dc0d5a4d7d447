#pragma once

#include <stdexcept>
#include <string>

namespace xfode {

// Exit-code-bearing error categories used by the command-line front end.
enum class ErrorKind { config = 1, data = 2, numeric = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

// Total upper firing too small to type-reduce.
class DegenerateFiring : public NumericError {
 public:
  explicit DegenerateFiring(const std::string& what) : NumericError(what) {}
};

}  // namespace xfode
