#pragma once

#include <stdexcept>
#include <string>

namespace harmlat {

/// Failure categories surfaced by the library. CSV error cells and CLI
/// diagnostics use the stable snake_case names from errc_name().
enum class errc {
  even_side,
  non_positive_coupling,
  negative_trap,
  unsupported_dimension,
  zero_mode_divergence,
  bad_separation,
  domain_error,
  unsupported_separation,
  quadrature_failure,
  not_entangled,
  no_vanishing,
  not_orthogonal,
  too_large,
  cutoff_insufficient,
  unphysical,
  invalid_request,
  io_failure,
};

inline const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::even_side: return "even_side";
    case errc::non_positive_coupling: return "non_positive_coupling";
    case errc::negative_trap: return "negative_trap";
    case errc::unsupported_dimension: return "unsupported_dimension";
    case errc::zero_mode_divergence: return "zero_mode_divergence";
    case errc::bad_separation: return "bad_separation";
    case errc::domain_error: return "domain_error";
    case errc::unsupported_separation: return "unsupported_separation";
    case errc::quadrature_failure: return "quadrature_failure";
    case errc::not_entangled: return "not_entangled";
    case errc::no_vanishing: return "no_vanishing";
    case errc::not_orthogonal: return "not_orthogonal";
    case errc::too_large: return "too_large";
    case errc::cutoff_insufficient: return "cutoff_insufficient";
    case errc::unphysical: return "unphysical";
    case errc::invalid_request: return "invalid_request";
    case errc::io_failure: return "io_failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace harmlat
