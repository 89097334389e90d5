#pragma once

#include <stdexcept>
#include <string>

namespace segeval {

// Errors caused by user input (bad files, bad flags, contract violations on
// supplied data). The CLI maps these to exit code 2; everything else is an
// internal error (exit code 1).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace segeval
