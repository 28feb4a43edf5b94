#pragma once

#include <stdexcept>

namespace radsum {

/// An instance exceeds a configured enumeration cap (2^n atoms or paths).
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Conditional probability requested on an event of probability zero.
struct undefined_conditional_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace radsum
