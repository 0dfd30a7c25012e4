#pragma once

#include <cmath>
#include <string>

#include "json.hpp"
#include "zll/error.hpp"

namespace zll {

enum class EquationId {
  kFact_2_3,
  kFact_2_8,
  kFact_2_12,
  kFactUnit,
  kEchf1_3_2,
  kDiff_3_5,
  kEchf2_3_6,
  kAchf1_3_3,
  kAchf2_3_7,
  kThm1_4_19,
  kThm2_4_21,
  kCor1_5_1,
  kCor2_5_2,
  kCor3_5_3,
  kCor4_5_4,
  kSec_5_6,
};

inline const char* to_string(EquationId id) {
  switch (id) {
    case EquationId::kFact_2_3: return "FACT_2_3";
    case EquationId::kFact_2_8: return "FACT_2_8";
    case EquationId::kFact_2_12: return "FACT_2_12";
    case EquationId::kFactUnit: return "FACT_UNIT";
    case EquationId::kEchf1_3_2: return "ECHF1_3_2";
    case EquationId::kDiff_3_5: return "DIFF_3_5";
    case EquationId::kEchf2_3_6: return "ECHF2_3_6";
    case EquationId::kAchf1_3_3: return "ACHF1_3_3";
    case EquationId::kAchf2_3_7: return "ACHF2_3_7";
    case EquationId::kThm1_4_19: return "THM1_4_19";
    case EquationId::kThm2_4_21: return "THM2_4_21";
    case EquationId::kCor1_5_1: return "COR1_5_1";
    case EquationId::kCor2_5_2: return "COR2_5_2";
    case EquationId::kCor3_5_3: return "COR3_5_3";
    case EquationId::kCor4_5_4: return "COR4_5_4";
    case EquationId::kSec_5_6: return "SEC_5_6";
  }
  return "?";
}

// One evaluated identity lhs = rhs (exact) or lhs ~ rhs (asymptotic).
struct IdentityReport {
  EquationId id = EquationId::kEchf1_3_2;
  // Empty for the canonical form. "literal" marks the form exactly as
  // printed where it differs from the self-consistent one; literal
  // variants are informational and never gate a run.
  std::string variant;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string inputs_digest;

  bool gating() const { return variant.empty(); }
  std::string label() const {
    return variant.empty() ? to_string(id) : std::string(to_string(id)) + "[" + variant + "]";
  }
};

inline IdentityReport make_report(EquationId id, double lhs, double rhs, double tolerance,
                                  std::string digest, std::string variant = {}) {
  IdentityReport r;
  r.id = id;
  r.variant = std::move(variant);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = std::abs(lhs - rhs);
  r.tolerance = tolerance;
  r.pass = std::isfinite(r.residual) && r.residual <= tolerance;
  r.inputs_digest = std::move(digest);
  return r;
}

inline nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json j = {{"equation_id", to_string(r.id)},
                      {"lhs", r.lhs},
                      {"rhs", r.rhs},
                      {"residual", r.residual},
                      {"tolerance", r.tolerance},
                      {"verdict", r.pass ? "PASS" : "FAIL"},
                      {"inputs", r.inputs_digest}};
  if (!r.variant.empty()) j["variant"] = r.variant;
  return j;
}

}  // namespace zll
