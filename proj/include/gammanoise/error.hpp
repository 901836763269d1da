#pragma once

#include <stdexcept>
#include <string>

namespace gammanoise {

//! Base of every exception raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

#define GAMMANOISE_DEFINE_ERROR(Name, tag)                                     \
  class Name : public Error {                                                  \
  public:                                                                      \
    using Error::Error;                                                        \
    const char* kind() const noexcept override { return tag; }                 \
  };

GAMMANOISE_DEFINE_ERROR(ParameterError, "parameter")
GAMMANOISE_DEFINE_ERROR(DimensionError, "dimension")
GAMMANOISE_DEFINE_ERROR(RangeError, "range")
GAMMANOISE_DEFINE_ERROR(ContractError, "contract")
GAMMANOISE_DEFINE_ERROR(ResourceError, "resource")
GAMMANOISE_DEFINE_ERROR(NotEvaluableError, "not-evaluable")
GAMMANOISE_DEFINE_ERROR(ConfigError, "config")
GAMMANOISE_DEFINE_ERROR(IoError, "io")

#undef GAMMANOISE_DEFINE_ERROR

template <class E = ParameterError>
inline void require(bool condition, const std::string& message) {
  if (!condition) throw E(message);
}

} // namespace gammanoise
