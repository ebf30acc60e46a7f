#pragma once

#include <stdexcept>
#include <string>

namespace ibilab {

// Numerical failures (eigensolver non-convergence, singular equalizer at
// zero noise, ...). Domain/precondition violations throw std::invalid_argument.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ibilab
