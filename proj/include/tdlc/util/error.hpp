#pragma once

#include <stdexcept>
#include <string>

namespace tdlc {

// Closed taxonomy of failure modes; every throwing operation names one.
enum class errc {
  not_a_subgroup,
  infinite_index,
  incompatible_ranks,
  stage_budget_exceeded,
  not_computable,
  precision_escalation_failure,
  bound_exceeded,
  invalid_table,
  subgroup_not_invariant,
  unsupported_instance,
  no_projection_rule,
  undecidable_input,
  parse_error,
};

inline const char* errc_name(errc k) {
  switch (k) {
    case errc::not_a_subgroup: return "not-a-subgroup";
    case errc::infinite_index: return "infinite-index";
    case errc::incompatible_ranks: return "incompatible-ranks";
    case errc::stage_budget_exceeded: return "stage-budget-exceeded";
    case errc::not_computable: return "not-computable";
    case errc::precision_escalation_failure: return "precision-escalation-failure";
    case errc::bound_exceeded: return "bound-exceeded";
    case errc::invalid_table: return "invalid-table";
    case errc::subgroup_not_invariant: return "subgroup-not-invariant";
    case errc::unsupported_instance: return "unsupported-instance";
    case errc::no_projection_rule: return "no-projection-rule";
    case errc::undecidable_input: return "undecidable-input";
    case errc::parse_error: return "parse-error";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& what)
      : std::runtime_error(std::string(errc_name(kind)) + ": " + what), kind_(kind) {}
  errc kind() const { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& what) { throw error(kind, what); }

} // namespace tdlc
