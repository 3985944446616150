#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tdlc/finite/subgroup.hpp"
#include "tdlc/padic/lattice.hpp"
#include "tdlc/shift/window.hpp"
#include "tdlc/util/numbers.hpp"

namespace tdlc {

enum class ScaleMethod { exhaustive, newton_polygon, stage_stabilization, compact_trivial };

inline const char* scale_method_name(ScaleMethod m) {
  switch (m) {
    case ScaleMethod::exhaustive: return "exhaustive";
    case ScaleMethod::newton_polygon: return "newton-polygon";
    case ScaleMethod::stage_stabilization: return "stage-stabilization";
    case ScaleMethod::compact_trivial: return "compact-trivial";
  }
  return "?";
}

using SubgroupWitness = std::variant<FiniteSubgroup, Lattice, WindowedSubgroup>;

// s(alpha) together with a machine-checkable certificate: a subgroup whose
// displacement index equals the reported value.
struct ScaleResult {
  Int value = 1;
  ScaleMethod method = ScaleMethod::compact_trivial;
  SubgroupWitness witness;
  Int witness_displacement = 1;
};

// --- dynamical decomposition descriptors ---------------------------------

// Closed-form subgroups of full shifts that have no finite presentation.
enum class ShiftForm {
  trivial_group,
  whole_group,
  eventually_trivial,      // one-sided con: finitely supported tails, dense, not closed
  support_bounded_above,   // two-sided con
  support_bounded_below,   // two-sided con^-
};

inline const char* shift_form_name(ShiftForm f) {
  switch (f) {
    case ShiftForm::trivial_group: return "{e}";
    case ShiftForm::whole_group: return "G";
    case ShiftForm::eventually_trivial: return "eventually trivial (not closed)";
    case ShiftForm::support_bounded_above: return "support bounded above (not closed)";
    case ShiftForm::support_bounded_below: return "support bounded below (not closed)";
  }
  return "?";
}

inline bool shift_form_closed(ShiftForm f) {
  return f == ShiftForm::trivial_group || f == ShiftForm::whole_group;
}

struct DescNotComputed {
  std::string reason;
};

struct DescFiniteSet {
  FiniteSubgroup set;
};

// Column span over Q_p; certified means the slope split passed its margins.
struct DescSubspace {
  Mat basis;
  bool certified = true;
  long precision = VAL_INF; // exact when VAL_INF
};

struct DescShiftSymbolic {
  ShiftForm form;
};

using Descriptor = std::variant<DescNotComputed, DescFiniteSet, DescSubspace, DescShiftSymbolic>;

inline bool descriptor_computed(const Descriptor& d) {
  return !std::holds_alternative<DescNotComputed>(d);
}

// Whether the described subgroup is closed; nullopt when not computed.
inline std::optional<bool> descriptor_closed(const Descriptor& d) {
  if (std::holds_alternative<DescNotComputed>(d)) return std::nullopt;
  if (std::holds_alternative<DescFiniteSet>(d)) return true;
  if (std::holds_alternative<DescSubspace>(d)) return true;
  return shift_form_closed(std::get<DescShiftSymbolic>(d).form);
}

struct DynamicalDecomposition {
  Descriptor con, con_minus, par, par_minus, lev, nub, bik, omega;

  static DynamicalDecomposition all_not_computed(const std::string& reason) {
    DynamicalDecomposition d;
    d.con = d.con_minus = d.par = d.par_minus = d.lev = d.nub = d.bik = d.omega =
        DescNotComputed{reason};
    return d;
  }
};

// Diagnostic record of stage recursions.
struct StageRecord {
  int stage = 0;
  std::string subgroup;
  Int displacement = 1;
};

struct StageTrace {
  std::vector<StageRecord> records;
};

struct TidyAboveResult {
  int stage = 0;
  StageTrace trace;
};

struct TidyCertificate {
  bool tidy = false;
  Int displacement = 1;
  Int scale = 1;
};

} // namespace tdlc
