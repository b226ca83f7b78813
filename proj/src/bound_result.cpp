#include "partition_lab/bound_result.hpp"

#include <cmath>

namespace plab {

const char* to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::Pass: return "pass";
    case BoundStatus::Fail: return "fail";
    case BoundStatus::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

BoundResult& settle(BoundResult& r) {
  r.slack = r.lhs - r.rhs;
  bool ok = false;
  if (std::isfinite(r.slack))
    ok = r.kind == BoundResult::Kind::Equality ? std::abs(r.slack) <= r.tolerance : r.slack >= -r.tolerance;
  r.status = ok ? BoundStatus::Pass : BoundStatus::Fail;
  return r;
}

BoundResult not_applicable(std::string name, std::string why) {
  BoundResult r;
  r.name = std::move(name);
  r.status = BoundStatus::NotApplicable;
  r.note = std::move(why);
  return r;
}

} // namespace plab
