#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tdlc/core/types.hpp"
#include "tdlc/shift/window.hpp"
#include "tdlc/util/error.hpp"
#include "tdlc/util/numbers.hpp"

namespace tdlc {

// Full shift group F^N or F^Z with the left shift endomorphism x_i -> x_{i+1}.
struct ShiftInstance {
  FiniteGroup structure;
  IndexSet index_set = IndexSet::two_sided;
  std::string name;
};

class ShiftBackend {
 public:
  using Subgroup = WindowedSubgroup;

  explicit ShiftBackend(const ShiftInstance& inst) : inst_(&inst) {}

  const ShiftInstance& instance() const { return *inst_; }
  const FiniteGroup& structure() const { return inst_->structure; }
  IndexSet index_set() const { return inst_->index_set; }

  Subgroup whole() const { return WindowedSubgroup::whole(structure(), index_set()); }

  // alpha(U): window slides left; at the boundary of N the constraint is
  // projected through the kernel coordinate.
  Subgroup image(const Subgroup& u) const {
    if (u.is_whole()) return u;
    if (index_set() == IndexSet::two_sided || u.lo() >= 2)
      return shifted(u, -1);
    // one-sided with lo == 1: project out the first window coordinate
    int w = u.width();
    if (w == 1) return whole();
    WindowGroup inner(structure(), w);
    WindowGroup smaller(structure(), w - 1);
    std::vector<bool> m(smaller.order(), false);
    for (unsigned x = 0; x < inner.order(); ++x) {
      if (!u.members()[x]) continue;
      auto c = inner.decode(x);
      std::vector<unsigned> d(c.begin() + 1, c.end());
      m[smaller.encode(d)] = true;
    }
    return WindowedSubgroup::make(structure(), index_set(), 1, u.hi() - 1, std::move(m));
  }

  Subgroup preimage(const Subgroup& u) const {
    if (u.is_whole()) return u;
    return shifted(u, +1);
  }

  Subgroup preimage_meet(const Subgroup& L, const Subgroup& M) const {
    return intersect(preimage(L), M);
  }

  Subgroup intersect(const Subgroup& a, const Subgroup& b) const {
    if (a.is_whole()) return b;
    if (b.is_whole()) return a;
    long lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    auto ma = a.extend_to(lo, hi);
    auto mb = b.extend_to(lo, hi);
    std::vector<bool> m(ma.size());
    for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] && mb[i];
    return WindowedSubgroup::make(structure(), index_set(), lo, hi, std::move(m));
  }

  bool contains(const Subgroup& inner, const Subgroup& outer) const {
    if (outer.is_whole()) return true;
    if (inner.is_whole()) return false; // outer proper
    long lo = std::min(inner.lo(), outer.lo()), hi = std::max(inner.hi(), outer.hi());
    auto mi = inner.extend_to(lo, hi);
    auto mo = outer.extend_to(lo, hi);
    for (size_t i = 0; i < mi.size(); ++i)
      if (mi[i] && !mo[i]) return false;
    return true;
  }

  bool equal(const Subgroup& a, const Subgroup& b) const { return a == b; }
  bool is_open(const Subgroup&) const { return true; }
  std::string describe(const Subgroup& u) const { return u.to_string(); }

  Int index(const Subgroup& K, const Subgroup& H) const {
    if (!contains(H, K)) fail(errc::not_a_subgroup, "H is not contained in K");
    if (K.is_whole() && H.is_whole()) return 1;
    long lo = H.is_whole() ? K.lo() : (K.is_whole() ? H.lo() : std::min(K.lo(), H.lo()));
    long hi = H.is_whole() ? K.hi() : (K.is_whole() ? H.hi() : std::max(K.hi(), H.hi()));
    auto mk = K.extend_to(lo, hi);
    auto mh = H.extend_to(lo, hi);
    unsigned long sk = 0, sh = 0;
    for (size_t i = 0; i < mk.size(); ++i) {
      sk += mk[i];
      sh += mh[i];
    }
    if (sh == 0 || sk % sh != 0) fail(errc::not_a_subgroup, "sizes do not divide");
    return Int(sk / sh);
  }

  // --- elements -----------------------------------------------------------

  FiniteSupportConfig shift_element(const FiniteSupportConfig& x, long by) const {
    if (x.is_identity()) return x;
    FiniteSupportConfig y = x;
    y.lo -= by;
    y.hi -= by;
    if (index_set() == IndexSet::one_sided) {
      while (y.lo < 1 && !y.values.empty()) {
        y.values.erase(y.values.begin());
        ++y.lo;
      }
      if (y.values.empty()) return FiniteSupportConfig::identity();
    }
    y.normalize(structure());
    return y;
  }

  bool member(const FiniteSupportConfig& x, const Subgroup& u) const {
    if (u.is_whole()) return true;
    WindowGroup wg(structure(), u.width());
    std::vector<unsigned> c(size_t(u.width()));
    for (long i = u.lo(); i <= u.hi(); ++i)
      c[size_t(i - u.lo())] = x.value_at(structure(), i);
    return u.members()[wg.encode(c)];
  }

  // --- closed-form dynamics ------------------------------------------------

  DynamicalDecomposition closed_form_decomposition() const {
    DynamicalDecomposition d;
    const bool one = index_set() == IndexSet::one_sided;
    d.par = DescShiftSymbolic{ShiftForm::whole_group};
    d.par_minus = DescShiftSymbolic{ShiftForm::whole_group};
    d.lev = DescShiftSymbolic{ShiftForm::whole_group};
    d.omega = DescShiftSymbolic{ShiftForm::whole_group};
    if (one) {
      d.con = DescShiftSymbolic{ShiftForm::eventually_trivial};
      d.con_minus = DescShiftSymbolic{ShiftForm::whole_group};
      d.bik = DescShiftSymbolic{ShiftForm::whole_group};
      d.nub = DescShiftSymbolic{ShiftForm::whole_group};
    } else {
      d.con = DescShiftSymbolic{ShiftForm::support_bounded_above};
      d.con_minus = DescShiftSymbolic{ShiftForm::support_bounded_below};
      d.bik = DescShiftSymbolic{ShiftForm::trivial_group};
      d.nub = DescNotComputed{"two-sided nub needs the ergodicity characterization"};
    }
    return d;
  }

  // Projection of a descriptor onto the window group F^{[a,b]}.
  FiniteSubgroup window_projection(const Descriptor& desc, long a, long b) const {
    if (index_set() == IndexSet::one_sided && a < 1)
      fail(errc::unsupported_instance, "window outside N");
    WindowGroup wg(structure(), int(b - a + 1));
    FiniteGroup wgrp = wg.as_group();
    if (auto* sym = std::get_if<DescShiftSymbolic>(&desc)) {
      switch (sym->form) {
        case ShiftForm::trivial_group:
          return FiniteSubgroup::trivial(wgrp);
        case ShiftForm::whole_group:
        case ShiftForm::eventually_trivial:
        case ShiftForm::support_bounded_above:
        case ShiftForm::support_bounded_below:
          // finitely supported configurations realize every window pattern
          return FiniteSubgroup::whole(wgrp);
      }
    }
    fail(errc::no_projection_rule, "descriptor has no projection rule");
  }

  FiniteSubgroup window_projection(const Subgroup& u, long a, long b) const {
    WindowGroup wg(structure(), int(b - a + 1));
    FiniteGroup wgrp = wg.as_group();
    if (u.is_whole()) return FiniteSubgroup::whole(wgrp);
    long lo = std::min(a, u.lo()), hi = std::max(b, u.hi());
    auto m = u.extend_to(lo, hi);
    WindowGroup big(structure(), int(hi - lo + 1));
    std::vector<bool> proj(wg.order(), false);
    for (unsigned x = 0; x < big.order(); ++x) {
      if (!m[x]) continue;
      auto c = big.decode(x);
      std::vector<unsigned> sub(size_t(b - a + 1));
      for (long i = a; i <= b; ++i) sub[size_t(i - a)] = c[size_t(i - lo)];
      proj[wg.encode(sub)] = true;
    }
    return FiniteSubgroup(wgrp, proj);
  }

  // Tidy-above certificate. The whole group is tidy above at stage 0; pure
  // identity-window constraints satisfy U = U_+ U_- at stage 0 by splitting a
  // configuration at the window. Other constraints are refused.
  bool identity_window_form(const Subgroup& u) const {
    if (u.is_whole()) return true;
    for (unsigned i = 0; i < u.members().size(); ++i)
      if (u.members()[i]) {
        WindowGroup wg(structure(), u.width());
        if (i != wg.identity()) return false;
      }
    return true;
  }

  ScaleResult scale() const {
    ScaleResult r;
    r.value = 1;
    r.method = ScaleMethod::compact_trivial;
    r.witness = whole();
    r.witness_displacement = 1;
    return r;
  }

 private:
  Subgroup shifted(const Subgroup& u, long by) const {
    if (u.is_whole()) return u;
    return WindowedSubgroup::make(structure(), index_set(), u.lo() + by, u.hi() + by,
                                  u.members());
  }

  const ShiftInstance* inst_;
};

} // namespace tdlc
