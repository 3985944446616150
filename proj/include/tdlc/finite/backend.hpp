#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "tdlc/core/types.hpp"
#include "tdlc/finite/group.hpp"
#include "tdlc/finite/subgroup.hpp"
#include "tdlc/util/error.hpp"
#include "tdlc/util/numbers.hpp"

namespace tdlc {

// Complete duplicate-free subgroup list, built by closing joins of cyclic
// subgroups to a fixpoint.
inline std::vector<FiniteSubgroup> all_subgroups(const FiniteGroup& g, unsigned bound = 64) {
  if (g.order() > bound) fail(errc::bound_exceeded, "order exceeds subgroup enumeration bound");
  std::vector<FiniteSubgroup> subs;
  auto add = [&](const FiniteSubgroup& s) {
    for (const auto& t : subs)
      if (t == s) return false;
    subs.push_back(s);
    return true;
  };
  add(FiniteSubgroup::trivial(g));
  for (unsigned x = 0; x < g.order(); ++x) add(FiniteSubgroup::generated(g, {x}));
  bool grew = true;
  while (grew) {
    grew = false;
    size_t m = subs.size();
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < i; ++j) {
        std::vector<unsigned> gens = subs[i].elements();
        auto ej = subs[j].elements();
        gens.insert(gens.end(), ej.begin(), ej.end());
        if (add(FiniteSubgroup::generated(g, gens))) grew = true;
      }
  }
  std::sort(subs.begin(), subs.end(), [](const FiniteSubgroup& a, const FiniteSubgroup& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.bits() < b.bits();
  });
  return subs;
}

namespace detail {

// Greedy generating set plus a word expression for every element, used to
// enumerate all endomorphisms by generator images.
struct GeneratorData {
  std::vector<unsigned> gens;
  // element -> (parent element, generator index); identity is the root
  std::vector<std::pair<unsigned, unsigned>> parent;
  std::vector<int> depth_order; // BFS order for evaluation
};

inline GeneratorData generator_data(const FiniteGroup& g) {
  GeneratorData d;
  d.parent.assign(g.order(), {g.order(), 0});
  std::vector<bool> reached(g.order(), false);
  reached[g.identity()] = true;
  std::vector<unsigned> frontier{g.identity()};
  d.depth_order.push_back(g.identity());
  auto expand = [&]() {
    for (size_t i = 0; i < frontier.size(); ++i)
      for (unsigned k = 0; k < d.gens.size(); ++k) {
        unsigned y = g.mul(frontier[i], d.gens[k]);
        if (!reached[y]) {
          reached[y] = true;
          d.parent[y] = {frontier[i], k};
          frontier.push_back(y);
          d.depth_order.push_back(int(y));
        }
      }
  };
  for (unsigned x = 0; x < g.order(); ++x) {
    if (reached[x]) continue;
    d.gens.push_back(x);
    d.parent[x] = {g.identity(), unsigned(d.gens.size() - 1)};
    expand();
  }
  return d;
}

} // namespace detail

// Every endomorphism, generated by assigning generator images and verifying
// the homomorphism law exhaustively.
inline std::vector<FiniteEndo> all_endomorphisms(const FiniteGroup& g, unsigned bound = 64) {
  if (g.order() > bound) fail(errc::bound_exceeded, "order exceeds endomorphism bound");
  auto gd = detail::generator_data(g);
  size_t k = gd.gens.size();
  std::vector<FiniteEndo> out;
  std::vector<unsigned> assign(k, 0);
  unsigned long total = 1;
  for (size_t i = 0; i < k; ++i) total *= g.order();
  for (unsigned long code = 0; code < total; ++code) {
    unsigned long c = code;
    for (size_t i = 0; i < k; ++i) {
      assign[i] = unsigned(c % g.order());
      c /= g.order();
    }
    std::vector<unsigned> img(g.order());
    img[g.identity()] = g.identity();
    bool ok = true;
    for (size_t idx = 1; idx < gd.depth_order.size(); ++idx) {
      unsigned x = unsigned(gd.depth_order[idx]);
      auto [par, gi] = gd.parent[x];
      img[x] = g.mul(img[par], assign[gi]);
    }
    for (unsigned a = 0; a < g.order() && ok; ++a)
      for (unsigned b = 0; b < g.order() && ok; ++b)
        ok = img[g.mul(a, b)] == g.mul(img[a], img[b]);
    if (ok) out.push_back(FiniteEndo(g, img, false));
  }
  return out;
}

// Product set A*B; returns the membership bitset (not necessarily a subgroup).
inline std::vector<bool> product_set(const FiniteGroup& g, const std::vector<bool>& A,
                                     const std::vector<bool>& B) {
  std::vector<bool> m(g.order(), false);
  for (unsigned a = 0; a < g.order(); ++a) {
    if (!A[a]) continue;
    for (unsigned b = 0; b < g.order(); ++b)
      if (B[b]) m[g.mul(a, b)] = true;
  }
  return m;
}

struct FiniteInstance {
  FiniteGroup group;
  FiniteEndo endo;
  std::string name;
};

// Backend primitives consumed by the generic stage/displacement algorithms.
class FiniteBackend {
 public:
  using Subgroup = FiniteSubgroup;

  explicit FiniteBackend(const FiniteInstance& inst) : inst_(&inst) {}

  const FiniteGroup& group() const { return inst_->group; }
  const FiniteEndo& endo() const { return inst_->endo; }

  Subgroup whole() const { return FiniteSubgroup::whole(group()); }
  Subgroup trivial() const { return FiniteSubgroup::trivial(group()); }
  Subgroup image(const Subgroup& u) const { return endo().image_subgroup(group(), u); }
  Subgroup preimage_meet(const Subgroup& L, const Subgroup& M) const {
    return endo().preimage_meet(group(), L, M);
  }
  Subgroup intersect(const Subgroup& a, const Subgroup& b) const { return a.meet(b); }
  bool equal(const Subgroup& a, const Subgroup& b) const { return a == b; }
  bool contains(const Subgroup& inner, const Subgroup& outer) const {
    return inner.subset_of(outer);
  }
  bool is_open(const Subgroup&) const { return true; }
  std::string describe(const Subgroup& s) const { return s.to_string(group()); }

  Int index(const Subgroup& K, const Subgroup& H) const {
    if (!H.subset_of(K)) fail(errc::not_a_subgroup, "H is not contained in K");
    if (H.size() == 0 || K.size() % H.size() != 0)
      fail(errc::not_a_subgroup, "sizes do not divide");
    return Int(K.size() / H.size());
  }

  // --- exhaustive dynamical sets ---------------------------------------

  // ker(alpha^m) stabilized: the contraction group of a discrete compact group.
  Subgroup con() const {
    const auto& g = group();
    Subgroup prev = trivial();
    for (unsigned m = 1; m <= g.order() + 1; ++m) {
      std::vector<bool> mem(g.order(), false);
      for (unsigned x = 0; x < g.order(); ++x)
        if (endo().iterate(g, x, m) == g.identity()) mem[x] = true;
      Subgroup cur(g, mem);
      if (cur == prev) break;
      prev = cur;
    }
    return prev;
  }

  // Stabilized image subgroup; equals par^-(alpha) = lev(alpha) here since
  // par(alpha) is the whole compact group.
  Subgroup stable_image() const {
    Subgroup cur = whole();
    for (unsigned m = 0; m <= group().order() + 1; ++m) {
      Subgroup next = image(cur);
      if (next == cur) break;
      cur = next;
    }
    return cur;
  }

  // {x : alpha^n(x) in H eventually}; requires alpha(H) <= H.
  Subgroup con_mod(const Subgroup& H) const {
    if (!image(H).subset_of(H)) fail(errc::subgroup_not_invariant, "alpha(H) not inside H");
    Subgroup cur = H;
    for (unsigned m = 0; m <= group().order() + 1; ++m) {
      // {x : alpha(x) in cur} = alpha^{-1}(cur), union accumulates as preimages grow
      Subgroup pre = preimage_meet(cur, whole());
      std::vector<bool> mem(group().order(), false);
      for (unsigned x = 0; x < group().order(); ++x)
        mem[x] = cur.contains(x) || pre.contains(x);
      Subgroup next(group(), mem);
      if (next == cur) break;
      cur = next;
    }
    return cur;
  }

  // Largest subgroup of H all of whose elements lie on trajectories inside H.
  Subgroup plus_limit(const Subgroup& H) const {
    Subgroup cur = H;
    while (true) {
      Subgroup next = intersect(H, image(cur));
      if (next == cur) return cur;
      cur = next;
    }
  }

  // {x in K : forward orbit stays in K}
  Subgroup minus_limit(const Subgroup& K) const {
    Subgroup cur = K;
    while (true) {
      Subgroup next = preimage_meet(cur, K);
      if (next == cur) return cur;
      cur = next;
    }
  }

  // con^-(alpha, H) = union over N of alpha^N(plus_limit(H)); requires
  // alpha(H) <= H so that trajectory tails live inside H.
  Subgroup con_minus_mod(const Subgroup& H) const {
    if (!image(H).subset_of(H)) fail(errc::subgroup_not_invariant, "alpha(H) not inside H");
    Subgroup core = plus_limit(H);
    std::vector<bool> mem = core.bits();
    Subgroup cur = core;
    for (unsigned m = 0; m <= group().order() + 1; ++m) {
      cur = image(cur);
      bool grew = false;
      for (unsigned x = 0; x < group().order(); ++x)
        if (cur.contains(x) && !mem[x]) {
          mem[x] = true;
          grew = true;
        }
      if (!grew) break;
    }
    return Subgroup(group(), mem);
  }

  struct Trajectory {
    std::vector<unsigned> prefix; // x_0, x_1, ..., entering the cycle
    std::vector<unsigned> cycle;  // repeated forever afterwards
    unsigned at(size_t n) const {
      if (n < prefix.size()) return prefix[n];
      return cycle[(n - prefix.size()) % cycle.size()];
    }
  };

  // A regressive trajectory for x whose tail lies in H, or nullopt. Depth is
  // bounded by pigeonhole: images of plus_limit(H) stabilize within |G| steps.
  std::optional<Trajectory> regressive_search(unsigned x, const Subgroup& H) const {
    if (!image(H).subset_of(H)) fail(errc::subgroup_not_invariant, "alpha(H) not inside H");
    const auto& g = group();
    Subgroup core = plus_limit(H);
    // find minimal N with x in alpha^N(core)
    Subgroup cur = core;
    std::optional<unsigned> found_n;
    for (unsigned n = 0; n <= g.order() + 1; ++n) {
      if (cur.contains(x)) {
        found_n = n;
        break;
      }
      cur = image(cur);
    }
    if (!found_n) return std::nullopt;
    unsigned N = *found_n;
    // walk back: find y in core with alpha^N(y) = x
    unsigned y = g.order();
    for (unsigned c : core.elements())
      if (endo().iterate(g, c, N) == x) {
        y = c;
        break;
      }
    Trajectory t;
    for (unsigned j = 0; j <= N; ++j) t.prefix.push_back(endo().iterate(g, y, N - j));
    // extend within core: follow preimages until an element repeats
    std::vector<int> seen_at(g.order(), -1);
    std::vector<unsigned> tail;
    unsigned curel = y;
    while (seen_at[curel] < 0) {
      seen_at[curel] = int(tail.size());
      tail.push_back(curel);
      unsigned next = g.order();
      for (unsigned c : core.elements())
        if (endo()(c) == curel) {
          next = c;
          break;
        }
      curel = next; // exists: core = H cap alpha(core)
    }
    int cstart = seen_at[curel];
    t.prefix.pop_back(); // y re-appears as tail[0]
    for (int i = 0; i < cstart; ++i) t.prefix.push_back(tail[size_t(i)]);
    for (size_t i = size_t(cstart); i < tail.size(); ++i) t.cycle.push_back(tail[i]);
    return t;
  }

  // All eight descriptors, every one explicit.
  DynamicalDecomposition exact_sets(unsigned subgroup_bound = 64) const {
    DynamicalDecomposition d;
    const auto& g = group();
    Subgroup c = con();
    Subgroup pm = stable_image();
    d.con = DescFiniteSet{c};
    d.con_minus = DescFiniteSet{trivial()};
    d.par = DescFiniteSet{whole()};
    d.par_minus = DescFiniteSet{pm};
    d.lev = DescFiniteSet{pm};
    d.bik = DescFiniteSet{intersect(pm, c)};
    // nub literally: intersection of all subgroups with displacement 1
    std::vector<bool> nub(g.order(), true);
    for (const auto& u : all_subgroups(g, subgroup_bound)) {
      if (!image(u).subset_of(u)) continue; // displacement > 1
      for (unsigned xx = 0; xx < g.order(); ++xx)
        if (!u.contains(xx)) nub[xx] = false;
    }
    d.nub = DescFiniteSet{Subgroup(g, nub)};
    auto omega_bits = product_set(g, c.bits(), pm.bits());
    d.omega = DescFiniteSet{Subgroup(g, omega_bits)};
    return d;
  }

 private:
  const FiniteInstance* inst_;
};

} // namespace tdlc
