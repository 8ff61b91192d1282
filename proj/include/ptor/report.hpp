#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ptor/errors.hpp"

namespace ptor {

enum class Relation { lt, le, eq, ge, gt };

inline const char* relation_name(Relation r) {
  switch (r) {
    case Relation::lt: return "<";
    case Relation::le: return "<=";
    case Relation::eq: return "=";
    case Relation::ge: return ">=";
    case Relation::gt: return ">";
  }
  return "?";
}

/// One verified claim: measured lhs/rhs, the expected relation, the
/// normalized margin (lhs - rhs) / max(|lhs|, |rhs|) and the verdict. The
/// verdict is always recomputable from the stored numbers; strict
/// relations whose margin is inside the strictness band are reported as
/// inconclusive (pass with a note), never as fail.
struct CheckReport {
  std::string claim_id;
  std::vector<std::pair<std::string, double>> inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::eq;
  double margin = 0.0;
  double tolerance = 0.0;
  double strictness = 0.0;
  bool pass = false;
  bool inconclusive = false;
  std::string notes;
};

inline double normalized_margin(double lhs, double rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  return (lhs - rhs) / scale;
}

/// Verdict from the stored numbers alone; used both to build reports and
/// to audit them.
inline bool evaluate_relation(Relation rel, double margin, double tolerance,
                              double strictness, bool* inconclusive = nullptr) {
  if (inconclusive) *inconclusive = false;
  switch (rel) {
    case Relation::eq:
      return std::abs(margin) <= tolerance;
    case Relation::ge:
      return margin >= -tolerance;
    case Relation::le:
      return margin <= tolerance;
    case Relation::gt:
      if (margin > strictness) return true;
      if (margin >= -strictness) {
        if (inconclusive) *inconclusive = true;
        return true;
      }
      return false;
    case Relation::lt:
      if (margin < -strictness) return true;
      if (margin <= strictness) {
        if (inconclusive) *inconclusive = true;
        return true;
      }
      return false;
  }
  return false;
}

inline CheckReport make_check(std::string claim_id, double lhs, double rhs,
                              Relation rel, double tolerance,
                              double strictness = 0.0, std::string notes = "") {
  CheckReport r;
  r.claim_id = std::move(claim_id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.relation = rel;
  r.margin = normalized_margin(lhs, rhs);
  r.tolerance = tolerance;
  r.strictness = strictness;
  r.pass = evaluate_relation(rel, r.margin, tolerance, strictness,
                             &r.inconclusive);
  r.notes = std::move(notes);
  if (r.inconclusive && r.notes.empty()) {
    r.notes = "inconclusive: margin within strictness band";
  }
  return r;
}

inline bool recompute_pass(const CheckReport& r) {
  return evaluate_relation(r.relation, r.margin, r.tolerance, r.strictness);
}

}  // namespace ptor
