#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tdlc/core/types.hpp"
#include "tdlc/finite/backend.hpp"
#include "tdlc/padic/backend.hpp"
#include "tdlc/shift/backend.hpp"
#include "tdlc/util/error.hpp"

namespace tdlc {

// The universe every operation runs in.
struct GroupInstance {
  std::variant<FiniteInstance, PadicInstance, ShiftInstance> data;

  const std::string& name() const {
    return std::visit([](const auto& d) -> const std::string& { return d.name; }, data);
  }

  bool is_compact() const { return !std::holds_alternative<PadicInstance>(data); }

  bool is_automorphism() const {
    if (auto* f = std::get_if<FiniteInstance>(&data)) return f->endo.is_automorphism(f->group);
    if (auto* p = std::get_if<PadicInstance>(&data)) return determinant(p->A) != 0;
    return std::get<ShiftInstance>(data).index_set == IndexSet::two_sided;
  }
};

// --- generic stage algorithms over any backend ----------------------------

template <class B>
Int displacement_index(const B& b, const typename B::Subgroup& U) {
  auto img = b.image(U);
  return b.index(img, b.intersect(img, U));
}

// {x in U : alpha^j(x) in U for all j <= n}, every intermediate compact open.
template <class B>
typename B::Subgroup minus_stage(const B& b, const typename B::Subgroup& U, int n,
                                 StageTrace* trace = nullptr) {
  auto V = U;
  if (trace) trace->records.push_back({0, b.describe(V), displacement_index(b, V)});
  for (int k = 1; k <= n; ++k) {
    V = b.preimage_meet(V, U);
    if (trace) trace->records.push_back({k, b.describe(V), displacement_index(b, V)});
  }
  return V;
}

// U_{n,alpha}: U_0 = U, U_{k+1} = U cap alpha(U_k).
template <class B>
typename B::Subgroup plus_stage(const B& b, const typename B::Subgroup& U, int n,
                                StageTrace* trace = nullptr) {
  auto V = U;
  if (trace) trace->records.push_back({0, b.describe(V), displacement_index(b, V)});
  for (int k = 1; k <= n; ++k) {
    V = b.intersect(U, b.image(V));
    if (trace) trace->records.push_back({k, b.describe(V), displacement_index(b, V)});
  }
  return V;
}

// --- scale dispatch --------------------------------------------------------

struct ComputeOptions {
  int stage_budget = 64;      // l_max for tidy_above / stabilization loops
  long precision = 0;         // N_0 for the slope split; 0 = automatic
};

inline ScaleResult scale(const GroupInstance& inst, const ComputeOptions& opt = {}) {
  if (auto* f = std::get_if<FiniteInstance>(&inst.data)) {
    FiniteBackend b(*f);
    ScaleResult r;
    r.value = 1;
    r.method = ScaleMethod::compact_trivial;
    r.witness = b.whole();
    r.witness_displacement = displacement_index(b, b.whole());
    return r;
  }
  if (auto* s = std::get_if<ShiftInstance>(&inst.data)) return ShiftBackend(*s).scale();
  const auto& pi = std::get<PadicInstance>(inst.data);
  PadicBackend b(pi, SlopeSplitOptions{opt.precision, 6});
  return b.scale(opt.stage_budget);
}

// --- tidy above ------------------------------------------------------------

inline std::pair<FiniteSubgroup, TidyAboveResult> tidy_above(const FiniteBackend& b,
                                                             const FiniteSubgroup& U,
                                                             int l_max) {
  TidyAboveResult res;
  FiniteSubgroup V = U;
  for (int l = 0; l <= l_max; ++l) {
    if (l > 0) V = b.preimage_meet(V, U);
    res.trace.records.push_back({l, b.describe(V), displacement_index(b, V)});
    FiniteSubgroup plus = b.plus_limit(V);
    FiniteSubgroup minus = b.minus_limit(V);
    auto prod = product_set(b.group(), plus.bits(), minus.bits());
    if (prod == V.bits()) {
      res.stage = l;
      return {V, res};
    }
  }
  fail(errc::stage_budget_exceeded, "no tidy-above stage within budget");
}

inline std::pair<Lattice, TidyAboveResult> tidy_above(const PadicBackend& b, const Lattice& U,
                                                      int l_max) {
  // minimizing implies tidy implies tidy above; on vector groups every
  // tidy-above stage is in fact tidy, so the displacement test is exact.
  TidyAboveResult res;
  Int s = b.newton_scale();
  Lattice V = U;
  for (int l = 0; l <= l_max; ++l) {
    if (l > 0) V = b.preimage_meet(V, U);
    Int d = displacement_index(b, V);
    res.trace.records.push_back({l, b.describe(V), d});
    if (d == s) {
      res.stage = l;
      return {V, res};
    }
  }
  fail(errc::stage_budget_exceeded, "no tidy stage within budget");
}

inline std::pair<WindowedSubgroup, TidyAboveResult> tidy_above(const ShiftBackend& b,
                                                               const WindowedSubgroup& U,
                                                               int l_max) {
  (void)l_max;
  TidyAboveResult res;
  res.trace.records.push_back({0, b.describe(U), displacement_index(b, U)});
  if (b.identity_window_form(U)) {
    res.stage = 0;
    return {U, res};
  }
  fail(errc::stage_budget_exceeded,
       "no tidy-above certificate for general windowed constraints");
}

// --- tidiness --------------------------------------------------------------

template <class B>
TidyCertificate is_tidy_with(const B& b, const typename B::Subgroup& U, const Int& scale_value) {
  TidyCertificate c;
  c.scale = scale_value;
  c.displacement = displacement_index(b, U);
  c.tidy = c.displacement == c.scale;
  return c;
}

inline TidyCertificate is_tidy(const GroupInstance& inst, const SubgroupWitness& U,
                               const ComputeOptions& opt = {}) {
  Int s = scale(inst, opt).value;
  if (auto* f = std::get_if<FiniteInstance>(&inst.data))
    return is_tidy_with(FiniteBackend(*f), std::get<FiniteSubgroup>(U), s);
  if (auto* sh = std::get_if<ShiftInstance>(&inst.data))
    return is_tidy_with(ShiftBackend(*sh), std::get<WindowedSubgroup>(U), s);
  PadicBackend b(std::get<PadicInstance>(inst.data), SlopeSplitOptions{opt.precision, 6});
  return is_tidy_with(b, std::get<Lattice>(U), s);
}

// --- tidying procedure -----------------------------------------------------

// The four-step procedure, fully materialized by enumeration.
inline FiniteSubgroup tidying_procedure(const FiniteBackend& b, const FiniteSubgroup& U0,
                                        int l_max = 64) {
  const FiniteGroup& g = b.group();
  auto [U, ta] = tidy_above(b, U0, l_max);
  FiniteSubgroup plus = b.plus_limit(U);
  FiniteSubgroup minus = b.minus_limit(U);
  // L_U = {x : exists y in U_+, m,n >= 1 with alpha^m(y) = x, alpha^n(x) in U_-}
  std::vector<bool> Lbits(g.order(), false);
  for (unsigned y : plus.elements()) {
    unsigned x = y;
    for (unsigned m = 1; m <= g.order(); ++m) {
      x = b.endo()(x);
      unsigned z = x;
      for (unsigned n = 1; n <= g.order(); ++n) {
        z = b.endo()(z);
        if (minus.contains(z)) {
          Lbits[x] = true;
          break;
        }
      }
    }
  }
  // Utilde = {x in U : x L subset L U}
  auto LU = product_set(g, Lbits, U.bits());
  std::vector<bool> tilde(g.order(), false);
  for (unsigned x : U.elements()) {
    bool ok = true;
    for (unsigned l = 0; l < g.order() && ok; ++l)
      if (Lbits[l] && !LU[g.mul(x, l)]) ok = false;
    tilde[x] = ok;
  }
  auto result_bits = product_set(g, tilde, Lbits);
  std::vector<unsigned> elems;
  for (unsigned i = 0; i < g.order(); ++i)
    if (result_bits[i]) elems.push_back(i);
  return FiniteSubgroup::from_elements(g, elems, true);
}

inline Lattice tidying_procedure(const PadicBackend& b, const Lattice& U, int l_max = 64) {
  auto [V, ta] = tidy_above(b, U, l_max);
  return V; // displacement == scale certified by tidy_above
}

inline WindowedSubgroup tidying_procedure(const ShiftBackend& b, const WindowedSubgroup& U) {
  if (displacement_index(b, U) == 1) return U;
  return b.whole();
}

// --- decompose -------------------------------------------------------------

inline DynamicalDecomposition decompose(const GroupInstance& inst, const ComputeOptions& opt = {}) {
  if (auto* f = std::get_if<FiniteInstance>(&inst.data)) return FiniteBackend(*f).exact_sets();
  if (auto* s = std::get_if<ShiftInstance>(&inst.data))
    return ShiftBackend(*s).closed_form_decomposition();
  PadicBackend b(std::get<PadicInstance>(inst.data), SlopeSplitOptions{opt.precision, 6});
  return b.decompose();
}

// Structural invariants every explicit decomposition must satisfy.
inline std::vector<std::string> decomposition_violations(const GroupInstance& inst,
                                                         const DynamicalDecomposition& d) {
  std::vector<std::string> bad;
  if (auto* f = std::get_if<FiniteInstance>(&inst.data)) {
    FiniteBackend b(*f);
    auto get = [&](const Descriptor& x) { return std::get<DescFiniteSet>(x).set; };
    if (descriptor_computed(d.lev) && descriptor_computed(d.par) &&
        descriptor_computed(d.par_minus)) {
      if (get(d.lev) != get(d.par).meet(get(d.par_minus))) bad.push_back("lev != par cap par-");
    }
    if (descriptor_computed(d.bik) && descriptor_computed(d.nub)) {
      if (!get(d.bik).subset_of(get(d.nub))) bad.push_back("bik not inside nub");
    }
    if (descriptor_computed(d.con)) {
      if (!b.image(get(d.con)).subset_of(get(d.con))) bad.push_back("con not alpha-invariant");
    }
    if (descriptor_computed(d.par)) {
      if (!b.image(get(d.par)).subset_of(get(d.par))) bad.push_back("par not alpha-invariant");
    }
    for (auto [name, desc] : {std::pair<const char*, const Descriptor*>{"lev", &d.lev},
                              {"par-", &d.par_minus},
                              {"nub", &d.nub}}) {
      if (descriptor_computed(*desc)) {
        if (b.image(get(*desc)) != get(*desc)) bad.push_back(std::string(name) + " not alpha-stable");
      }
    }
  } else if (auto* pi = std::get_if<PadicInstance>(&inst.data)) {
    auto dim = [&](const Descriptor& x) { return std::get<DescSubspace>(x).basis.cols; };
    if (descriptor_computed(d.lev) && descriptor_computed(d.par) &&
        descriptor_computed(d.par_minus)) {
      int n = pi->n;
      if (dim(d.par) + dim(d.par_minus) - dim(d.lev) > n) bad.push_back("block dims exceed n");
    }
    if (descriptor_computed(d.bik) && descriptor_computed(d.nub)) {
      if (dim(d.bik) > dim(d.nub)) bad.push_back("bik not inside nub");
    }
  } else {
    auto form = [&](const Descriptor& x) { return std::get<DescShiftSymbolic>(x).form; };
    if (descriptor_computed(d.lev) && form(d.lev) != ShiftForm::whole_group)
      bad.push_back("lev of a full shift must be everything");
  }
  return bad;
}

// --- convergence modulo a subgroup ----------------------------------------

enum class TrajectoryKind { forward_orbit, regressive };

// finite backend: orbits are eventually periodic; tail in H iff the cycle is.
inline bool converges_mod(const FiniteBackend& b, unsigned x, const FiniteSubgroup& H,
                          TrajectoryKind kind) {
  if (!b.image(H).subset_of(H)) fail(errc::subgroup_not_invariant, "alpha(H) not inside H");
  const FiniteGroup& g = b.group();
  if (kind == TrajectoryKind::forward_orbit) {
    std::vector<int> seen(g.order(), -1);
    unsigned cur = x;
    int step = 0;
    while (seen[cur] < 0) {
      seen[cur] = step++;
      cur = b.endo()(cur);
    }
    // cycle = elements from seen[cur] onwards; tail lies in H iff cycle does
    unsigned probe = cur;
    do {
      if (!H.contains(probe)) return false;
      probe = b.endo()(probe);
    } while (probe != cur);
    return true;
  }
  auto t = b.regressive_search(x, H);
  return t.has_value();
}

// padic: decide whether the orbit of x tends to e modulo an exactly
// invariant subspace W (W may be empty for H = {0}).
inline bool converges_mod(const PadicBackend& b, const Mat& x, const Mat& W,
                          TrajectoryKind kind) {
  const Int& p = b.p();
  if (kind == TrajectoryKind::regressive)
    fail(errc::undecidable_input, "regressive trajectories handled per theorem check");
  bool zero = true;
  for (const Rat& v : x.a) zero = zero && v == 0;
  if (zero) return true;
  const SlopeSplit& s = b.split();
  if (!s.certified) fail(errc::not_computable, "slope split uncertified");
  Mat target = Mat::hstack(s.v_contract, W);
  bool inside;
  if (target.cols == 0) {
    inside = false;
  } else if (rank(target) == target.rows) {
    inside = true;
  } else {
    Mat C = block_coordinates(target, x);
    Mat resid = x - target * C;
    long rv = VAL_INF;
    for (const Rat& v : resid.a) rv = std::min(rv, valuation(v, p));
    if (s.precision == VAL_INF) {
      inside = rv == VAL_INF;
    } else if (rv >= s.precision / 2) {
      inside = true;
    } else if (rv <= s.precision / 4) {
      inside = false;
    } else {
      fail(errc::undecidable_input, "membership too close to working precision");
    }
  }
  // independent corroboration for the positive case: valuations must climb
  if (inside && W.cols == 0) {
    int n = b.dim();
    Mat y = x;
    long v0 = VAL_INF;
    for (int k = 0; k < 2 * n + 2; ++k) {
      if (k == n) {
        v0 = VAL_INF;
        for (const Rat& v : y.a) v0 = std::min(v0, valuation(v, p));
      }
      y = b.matrix() * y;
    }
    long v1 = VAL_INF;
    for (const Rat& v : y.a) v1 = std::min(v1, valuation(v, p));
    if (v1 != VAL_INF && v0 != VAL_INF && v1 < v0 + 1)
      fail(errc::not_computable, "orbit valuation trend contradicts block membership");
  }
  return inside;
}

// shift: finitely supported configurations always converge to e (forward
// orbits truncate or slide off every window; right shifts do the same).
inline bool converges_mod(const ShiftBackend& b, const FiniteSupportConfig& x,
                          TrajectoryKind kind) {
  (void)kind;
  (void)b;
  (void)x;
  return true;
}

// --- core part -------------------------------------------------------------

inline FiniteSubgroup core_part(const FiniteBackend& b, const FiniteSubgroup& K) {
  return b.intersect(b.plus_limit(K), b.minus_limit(K));
}

inline Lattice core_part(const PadicBackend& b, const Lattice& K, int budget = 64) {
  return b.core_part(K, budget);
}

inline WindowedSubgroup core_part(const ShiftBackend& b, const WindowedSubgroup& K) {
  if (K.is_whole()) return K;
  fail(errc::not_computable, "exact limits exist in closed form only for the whole group");
}

} // namespace tdlc
