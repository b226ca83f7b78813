#pragma once

#include <string>

namespace plab {

enum class BoundStatus { Pass, Fail, NotApplicable };

const char* to_string(BoundStatus s);

/// One evaluated inequality (or identity). `lhs` is the side that should be
/// the larger one, so the check passes iff slack = lhs - rhs >= -tolerance.
/// Identities (kind Equality) pass iff |slack| <= tolerance.
struct BoundResult {
  enum class Kind { Inequality, Equality };

  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  Kind kind = Kind::Inequality;
  BoundStatus status = BoundStatus::NotApplicable;
  /// Free-text context, e.g. the unmet hypothesis for not_applicable results.
  std::string note;
  /// FNV-1a digest of the numeric inputs, hex.
  std::string inputs_digest;

  bool satisfied() const noexcept { return status == BoundStatus::Pass; }
};

/// Fill slack and status from lhs, rhs, tolerance and kind.
BoundResult& settle(BoundResult& r);
BoundResult not_applicable(std::string name, std::string why);

} // namespace plab
