#pragma once

#include <stdexcept>
#include <string>

namespace gazekit {

/// Base of every error raised by the toolkit. The kind maps onto the CLI
/// exit status (usage 1, data 2, I/O 3).
class Error : public std::runtime_error {
 public:
  enum class Kind { Usage = 1, Data = 2, Io = 3 };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Malformed or inconsistent input data, or a violated precondition.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(Kind::Data, what) {}
};

/// Filesystem or stream failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(Kind::Io, what) {}
};

/// Bad command line.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(Kind::Usage, what) {}
};

}  // namespace gazekit
