#pragma once

#include <stdexcept>
#include <string>

namespace poemdiv {

/// Bad user input: unreadable files, malformed values, violated preconditions
/// that the caller controls. The CLI maps this to exit code 2; everything else
/// that escapes is an internal error (exit code 3).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace poemdiv
