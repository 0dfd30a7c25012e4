#pragma once

#include <stdexcept>
#include <string>

namespace zll {

// Root of every failure the library reports. `kind()` is a stable
// machine-readable tag used by the CLI reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ZLL_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  };

ZLL_DEFINE_ERROR(DomainError)
ZLL_DEFINE_ERROR(PoleError)
ZLL_DEFINE_ERROR(RangeError)
ZLL_DEFINE_ERROR(NonConvergence)
ZLL_DEFINE_ERROR(BracketingFailure)
ZLL_DEFINE_ERROR(SearchWindowExhausted)
ZLL_DEFINE_ERROR(NoBracket)
ZLL_DEFINE_ERROR(DegenerateDenominator)
ZLL_DEFINE_ERROR(LayoutInvalid)
ZLL_DEFINE_ERROR(BoundaryRoot)
ZLL_DEFINE_ERROR(NotFound)
ZLL_DEFINE_ERROR(MismatchedInputs)
ZLL_DEFINE_ERROR(ConfigError)

#undef ZLL_DEFINE_ERROR

}  // namespace zll
