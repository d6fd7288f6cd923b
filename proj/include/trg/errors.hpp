#pragma once

#include <stdexcept>
#include <string>

namespace trg {

enum class errc {
  not_transverse,
  not_invertible,
  not_symmetric,
  not_lagrangian,
  not_hyperbolic,
  construction_failed,
  zero_matrix,
  dimension_mismatch,
  singular,
  degenerate_coefficients,
  non_real_roots,
  signature_mismatch,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::not_transverse: return "NotTransverse";
    case errc::not_invertible: return "NotInvertible";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::not_lagrangian: return "NotLagrangian";
    case errc::not_hyperbolic: return "NotHyperbolic";
    case errc::construction_failed: return "ConstructionFailed";
    case errc::zero_matrix: return "ZeroMatrix";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::singular: return "Singular";
    case errc::degenerate_coefficients: return "DegenerateCoefficients";
    case errc::non_real_roots: return "NonRealRoots";
    case errc::signature_mismatch: return "SignatureMismatch";
  }
  return "Unknown";
}

// Domain error with a stable machine-readable name (used by the CLI).
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  errc code() const { return code_; }
  const char* name() const { return errc_name(code_); }
  const std::string& detail() const { return detail_; }

 private:
  errc code_;
  std::string detail_;
};

}  // namespace trg
