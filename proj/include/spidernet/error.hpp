#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spidernet {

// Base of every error raised by the library. kind() is a stable identifier
// used by the CLI for machine-readable error output.
class Error : public std::runtime_error {
 public:
  Error(std::string_view kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define SPIDERNET_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  };

SPIDERNET_DEFINE_ERROR(InvalidParams)
SPIDERNET_DEFINE_ERROR(UnrealizableWiring)
SPIDERNET_DEFINE_ERROR(BudgetExceeded)
SPIDERNET_DEFINE_ERROR(BoundaryVertex)
SPIDERNET_DEFINE_ERROR(DimensionMismatch)
SPIDERNET_DEFINE_ERROR(RadiusTooSmall)
SPIDERNET_DEFINE_ERROR(ConvergenceFailure)
SPIDERNET_DEFINE_ERROR(ParamsOutOfRange)
SPIDERNET_DEFINE_ERROR(OutOfSupport)
SPIDERNET_DEFINE_ERROR(OutOfDomain)
SPIDERNET_DEFINE_ERROR(NotLocalized)

#undef SPIDERNET_DEFINE_ERROR

}  // namespace spidernet
