#pragma once

#include <stdexcept>
#include <string>

namespace dance {

// Bad invocation: missing flags, malformed option values. CLI exit code 1.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Input data violates a format or domain invariant. CLI exit code 2.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace dance
