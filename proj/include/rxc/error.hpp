#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rxc {

enum class errc {
  invalid_params,
  parse_error,
  invariant_violation,
  domain_error,
  resource_limit,
  instance_too_large,
  non_integral_overlap,
  cycle_too_long,
  divergent_series,
  bound_exceeded,
  config_invalid,
};

inline const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_params: return "invalid-params";
    case errc::parse_error: return "parse-error";
    case errc::invariant_violation: return "invariant-violation";
    case errc::domain_error: return "domain-error";
    case errc::resource_limit: return "resource-limit";
    case errc::instance_too_large: return "instance-too-large";
    case errc::non_integral_overlap: return "non-integral-overlap";
    case errc::cycle_too_long: return "cycle-too-long";
    case errc::divergent_series: return "divergent-series";
    case errc::bound_exceeded: return "bound-exceeded";
    case errc::config_invalid: return "config-invalid";
  }
  return "unknown";
}

/// Base exception for every failure the library reports. The code identifies
/// the error class; the message carries the human-readable detail.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

/// Raised by the instance reader; `line()` is 1-based.
class parse_error : public error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : error(errc::parse_error, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rxc
