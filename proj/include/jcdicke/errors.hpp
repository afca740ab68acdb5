#pragma once

#include <stdexcept>
#include <string>

namespace jcdicke {

enum class errc {
  detuning_too_small,
  division_by_zero,
  non_positive_omega_a,
  invalid_params,
  domain_error,
  invalid_epsilon,
  path_error,
  cutoff_error,
  dimension_cap,
  config_error,
  io_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::detuning_too_small:   return "DetuningTooSmall";
    case errc::division_by_zero:     return "DivisionByZero";
    case errc::non_positive_omega_a: return "NonPositiveOmegaA";
    case errc::invalid_params:       return "InvalidParams";
    case errc::domain_error:         return "DomainError";
    case errc::invalid_epsilon:      return "InvalidEpsilon";
    case errc::path_error:           return "PathError";
    case errc::cutoff_error:         return "CutoffError";
    case errc::dimension_cap:        return "DimensionCap";
    case errc::config_error:         return "ConfigError";
    case errc::io_error:             return "IOError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace jcdicke
