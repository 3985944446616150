#pragma once

#include <string>
#include <vector>

#include "tdlc/finite/group.hpp"
#include "tdlc/finite/subgroup.hpp"
#include "tdlc/util/error.hpp"

namespace tdlc {

enum class IndexSet { one_sided, two_sided }; // N = {1,2,...} vs Z

// Direct power F^w with mixed-radix element encoding, coordinate 0 = leftmost.
class WindowGroup {
 public:
  WindowGroup() = default;
  WindowGroup(const FiniteGroup& f, int width) : f_(&f), width_(width) {
    unsigned n = 1;
    for (int i = 0; i < width; ++i) n *= f.order();
    order_ = n;
  }

  unsigned order() const { return order_; }
  int width() const { return width_; }
  const FiniteGroup& structure() const { return *f_; }

  std::vector<unsigned> decode(unsigned idx) const {
    std::vector<unsigned> c(width_);
    for (int i = 0; i < width_; ++i) {
      c[i] = idx % f_->order();
      idx /= f_->order();
    }
    return c;
  }

  unsigned encode(const std::vector<unsigned>& c) const {
    unsigned idx = 0, mult = 1;
    for (int i = 0; i < width_; ++i) {
      idx += c[i] * mult;
      mult *= f_->order();
    }
    return idx;
  }

  unsigned mul(unsigned a, unsigned b) const {
    auto x = decode(a), y = decode(b);
    std::vector<unsigned> z(width_);
    for (int i = 0; i < width_; ++i) z[i] = f_->mul(x[i], y[i]);
    return encode(z);
  }

  unsigned inv(unsigned a) const {
    auto x = decode(a);
    for (auto& v : x) v = f_->inv(v);
    return encode(x);
  }

  unsigned identity() const { return encode(std::vector<unsigned>(width_, f_->identity())); }

  FiniteGroup as_group() const {
    std::vector<std::vector<unsigned>> t(order_, std::vector<unsigned>(order_));
    for (unsigned a = 0; a < order_; ++a)
      for (unsigned b = 0; b < order_; ++b) t[a][b] = mul(a, b);
    return FiniteGroup::from_table(std::move(t));
  }

 private:
  const FiniteGroup* f_ = nullptr;
  int width_ = 0;
  unsigned order_ = 1;
};

// Compact open subgroup U(S,[a,b]) = {x : x|_[a,b] in S} of a full shift.
// Canonical form: the whole group is the empty window; otherwise edge
// coordinates on which S does not constrain anything are trimmed.
class WindowedSubgroup {
 public:
  WindowedSubgroup() = default;

  static WindowedSubgroup whole(const FiniteGroup& f, IndexSet ix) {
    WindowedSubgroup u;
    u.f_ = &f;
    u.ix_ = ix;
    u.lo_ = 1;
    u.hi_ = 0; // empty window
    return u;
  }

  // members: bitset over F^{hi-lo+1}, coordinate order lo..hi.
  static WindowedSubgroup make(const FiniteGroup& f, IndexSet ix, long lo, long hi,
                               std::vector<bool> members) {
    if (hi < lo) return whole(f, ix);
    if (ix == IndexSet::one_sided && lo < 1)
      fail(errc::unsupported_instance, "window outside N");
    WindowedSubgroup u;
    u.f_ = &f;
    u.ix_ = ix;
    u.lo_ = lo;
    u.hi_ = hi;
    u.members_ = std::move(members);
    WindowGroup wg(f, int(hi - lo + 1));
    if (u.members_.size() != wg.order()) fail(errc::invalid_table, "constraint size mismatch");
    // subgroup axioms on the window group
    if (!u.members_[wg.identity()]) fail(errc::not_a_subgroup, "constraint misses identity");
    for (unsigned x = 0; x < wg.order(); ++x) {
      if (!u.members_[x]) continue;
      if (!u.members_[wg.inv(x)]) fail(errc::not_a_subgroup, "constraint not inverse-closed");
      for (unsigned y = 0; y < wg.order(); ++y)
        if (u.members_[y] && !u.members_[wg.mul(x, y)])
          fail(errc::not_a_subgroup, "constraint not product-closed");
    }
    u.normalize();
    return u;
  }

  const FiniteGroup& structure() const { return *f_; }
  IndexSet index_set() const { return ix_; }
  bool is_whole() const { return hi_ < lo_; }
  long lo() const { return lo_; }
  long hi() const { return hi_; }
  int width() const { return is_whole() ? 0 : int(hi_ - lo_ + 1); }
  const std::vector<bool>& members() const { return members_; }

  // Restriction subgroup S as elements of F^{width}.
  std::vector<unsigned> constraint_elements() const {
    std::vector<unsigned> e;
    for (unsigned i = 0; i < members_.size(); ++i)
      if (members_[i]) e.push_back(i);
    return e;
  }

  bool operator==(const WindowedSubgroup& o) const {
    return ix_ == o.ix_ && lo_ == o.lo_ && hi_ == o.hi_ && members_ == o.members_;
  }
  bool operator!=(const WindowedSubgroup& o) const { return !(*this == o); }

  // Re-express the constraint on a larger window [lo,hi] containing this one.
  std::vector<bool> extend_to(long lo, long hi) const {
    WindowGroup wg(*f_, int(hi - lo + 1));
    std::vector<bool> m(wg.order(), false);
    for (unsigned x = 0; x < wg.order(); ++x) {
      auto c = wg.decode(x);
      if (is_whole()) {
        m[x] = true;
        continue;
      }
      std::vector<unsigned> sub(static_cast<size_t>(width()), 0u);
      for (int i = 0; i < width(); ++i) sub[size_t(i)] = c[size_t(lo_ - lo) + i];
      WindowGroup inner(*f_, width());
      m[x] = members_[inner.encode(sub)];
    }
    return m;
  }

  std::string to_string() const {
    if (is_whole()) return "G";
    std::string s = "U[" + std::to_string(lo_) + "," + std::to_string(hi_) + "]{";
    WindowGroup wg(*f_, width());
    bool first = true;
    for (unsigned x = 0; x < members_.size(); ++x) {
      if (!members_[x]) continue;
      auto c = wg.decode(x);
      if (!first) s += " ";
      first = false;
      for (int i = 0; i < width(); ++i) s += f_->label(c[i]) + (i + 1 < width() ? "." : "");
    }
    return s + "}";
  }

 private:
  void normalize() {
    // trim coordinates that are unconstrained (S = F x S' or S' x F splits)
    while (width() > 0 && coordinate_free(0)) drop_edge(true);
    while (width() > 0 && coordinate_free(width() - 1)) drop_edge(false);
    if (width() > 0) {
      WindowGroup wg(*f_, width());
      bool full = true;
      for (bool b : members_) full = full && b;
      if (full) {
        lo_ = 1;
        hi_ = 0;
        members_.clear();
      }
    }
  }

  bool coordinate_free(int k) const {
    WindowGroup wg(*f_, width());
    for (unsigned x = 0; x < wg.order(); ++x) {
      if (!members_[x]) continue;
      auto c = wg.decode(x);
      for (unsigned g = 0; g < f_->order(); ++g) {
        auto d = c;
        d[k] = g;
        if (!members_[wg.encode(d)]) return false;
      }
    }
    return true;
  }

  void drop_edge(bool left) {
    WindowGroup wg(*f_, width());
    WindowGroup smaller(*f_, width() - 1);
    std::vector<bool> m(smaller.order(), false);
    for (unsigned x = 0; x < wg.order(); ++x) {
      if (!members_[x]) continue;
      auto c = wg.decode(x);
      std::vector<unsigned> d(c.begin() + (left ? 1 : 0), c.end() - (left ? 0 : 1));
      m[smaller.encode(d)] = true;
    }
    members_ = std::move(m);
    if (left)
      ++lo_;
    else
      --hi_;
  }

  const FiniteGroup* f_ = nullptr;
  IndexSet ix_ = IndexSet::two_sided;
  long lo_ = 1, hi_ = 0;
  std::vector<bool> members_;
};

// Element of the shift group with finite support; identity off the window.
struct FiniteSupportConfig {
  long lo = 1, hi = 0;               // empty window = identity element
  std::vector<unsigned> values;      // element indices of F, coordinate lo..hi

  static FiniteSupportConfig identity() { return {}; }

  void normalize(const FiniteGroup& f) {
    while (!values.empty() && values.front() == f.identity()) {
      values.erase(values.begin());
      ++lo;
    }
    while (!values.empty() && values.back() == f.identity()) {
      values.pop_back();
      --hi;
    }
    if (values.empty()) {
      lo = 1;
      hi = 0;
    }
  }

  unsigned value_at(const FiniteGroup& f, long i) const {
    if (values.empty() || i < lo || i > hi) return f.identity();
    return values[size_t(i - lo)];
  }

  bool is_identity() const { return values.empty(); }
};

} // namespace tdlc
