#pragma once

#include <stdexcept>
#include <string>

namespace bbiso {

// A partial operation returned Nothing where a value was required.
struct UndefinedOperation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnumerationBoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonAbelianInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LasVegasExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bbiso
