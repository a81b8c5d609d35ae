#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace creditnet {

/// Base class of every exception thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition or contract violation: invalid node reference, empty input,
/// degenerate statistic, infeasible configuration.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failure (cannot open, cannot write).
class IoError : public Error {
 public:
  using Error::Error;
};

/// File-content validation failure. Loading is all-or-nothing: every
/// violation found in the file is collected before this is thrown.
class LoadError : public Error {
 public:
  LoadError(const std::string& path, std::vector<std::string> violations)
      : Error(summarize(path, violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string summarize(const std::string& path,
                               const std::vector<std::string>& violations) {
    std::string msg = path + ": " + std::to_string(violations.size()) +
                      " validation error(s)";
    for (const auto& v : violations) {
      msg += "\n  ";
      msg += v;
    }
    return msg;
  }

  std::vector<std::string> violations_;
};

}  // namespace creditnet
