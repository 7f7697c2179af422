#pragma once

#include <stdexcept>
#include <string>

namespace detsieve {

// error taxonomy mirrors the CLI exit codes: validation 2, budget 3, search exhaustion 4
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SearchExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace detsieve
