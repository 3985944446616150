#pragma once

#include <string>
#include <vector>

#include "tdlc/finite/group.hpp"
#include "tdlc/util/error.hpp"

namespace tdlc {

// Subgroup of a FiniteGroup as a membership bitset. Canonical by
// construction: two subgroups are equal iff their bitsets are.
class FiniteSubgroup {
 public:
  FiniteSubgroup() = default;
  FiniteSubgroup(const FiniteGroup& g, std::vector<bool> member)
      : n_(g.order()), member_(std::move(member)) {
    size_ = 0;
    for (bool b : member_) size_ += b;
  }

  static FiniteSubgroup trivial(const FiniteGroup& g) {
    std::vector<bool> m(g.order(), false);
    m[g.identity()] = true;
    return FiniteSubgroup(g, std::move(m));
  }

  static FiniteSubgroup whole(const FiniteGroup& g) {
    return FiniteSubgroup(g, std::vector<bool>(g.order(), true));
  }

  // Subgroup generated by a set of elements (closure under product; inverses
  // come along since the group is finite).
  static FiniteSubgroup generated(const FiniteGroup& g, const std::vector<unsigned>& gens) {
    std::vector<bool> m(g.order(), false);
    m[g.identity()] = true;
    std::vector<unsigned> queue{g.identity()};
    for (unsigned x : gens)
      if (!m[x]) {
        m[x] = true;
        queue.push_back(x);
      }
    for (size_t i = 0; i < queue.size(); ++i) {
      for (size_t j = 0; j < queue.size(); ++j) {
        unsigned z = g.mul(queue[i], queue[j]);
        if (!m[z]) {
          m[z] = true;
          queue.push_back(z);
        }
      }
    }
    return FiniteSubgroup(g, std::move(m));
  }

  static FiniteSubgroup from_elements(const FiniteGroup& g, const std::vector<unsigned>& elems,
                                      bool verify = true) {
    std::vector<bool> m(g.order(), false);
    for (unsigned x : elems) {
      if (x >= g.order()) fail(errc::not_a_subgroup, "element index out of range");
      m[x] = true;
    }
    FiniteSubgroup s(g, std::move(m));
    if (verify && !s.is_subgroup(g)) fail(errc::not_a_subgroup, "set not closed");
    return s;
  }

  bool is_subgroup(const FiniteGroup& g) const {
    if (!member_[g.identity()]) return false;
    for (unsigned a = 0; a < n_; ++a) {
      if (!member_[a]) continue;
      if (!member_[g.inv(a)]) return false;
      for (unsigned b = 0; b < n_; ++b)
        if (member_[b] && !member_[g.mul(a, b)]) return false;
    }
    return true;
  }

  bool contains(unsigned x) const { return member_[x]; }
  unsigned size() const { return size_; }
  unsigned ambient_order() const { return n_; }
  const std::vector<bool>& bits() const { return member_; }

  bool operator==(const FiniteSubgroup& o) const { return member_ == o.member_; }
  bool operator!=(const FiniteSubgroup& o) const { return !(*this == o); }
  bool subset_of(const FiniteSubgroup& o) const {
    for (unsigned i = 0; i < n_; ++i)
      if (member_[i] && !o.member_[i]) return false;
    return true;
  }

  FiniteSubgroup meet(const FiniteSubgroup& o) const {
    std::vector<bool> m(n_);
    for (unsigned i = 0; i < n_; ++i) m[i] = member_[i] && o.member_[i];
    FiniteSubgroup s;
    s.n_ = n_;
    s.member_ = std::move(m);
    s.size_ = 0;
    for (bool b : s.member_) s.size_ += b;
    return s;
  }

  std::vector<unsigned> elements() const {
    std::vector<unsigned> e;
    for (unsigned i = 0; i < n_; ++i)
      if (member_[i]) e.push_back(i);
    return e;
  }

  bool is_normal(const FiniteGroup& g) const {
    for (unsigned x = 0; x < n_; ++x)
      for (unsigned h = 0; h < n_; ++h)
        if (member_[h] && !member_[g.mul(g.mul(x, h), g.inv(x))]) return false;
    return true;
  }

  std::string to_string(const FiniteGroup& g) const {
    std::string s = "{";
    bool first = true;
    for (unsigned i = 0; i < n_; ++i)
      if (member_[i]) {
        if (!first) s += ",";
        s += g.label(i);
        first = false;
      }
    return s + "}";
  }

 private:
  unsigned n_ = 0;
  unsigned size_ = 0;
  std::vector<bool> member_;
};

// Endomorphism as a full image array, checked against the homomorphism law.
class FiniteEndo {
 public:
  FiniteEndo() = default;
  FiniteEndo(const FiniteGroup& g, std::vector<unsigned> images, bool verify = true)
      : image_(std::move(images)) {
    if (image_.size() != g.order()) fail(errc::invalid_table, "image array size mismatch");
    if (verify) {
      for (unsigned a = 0; a < g.order(); ++a)
        for (unsigned b = 0; b < g.order(); ++b)
          if (image_[g.mul(a, b)] != g.mul(image_[a], image_[b]))
            fail(errc::invalid_table, "not a homomorphism");
    }
  }

  unsigned operator()(unsigned x) const { return image_[x]; }
  const std::vector<unsigned>& images() const { return image_; }

  unsigned iterate(const FiniteGroup& g, unsigned x, unsigned long k) const {
    (void)g;
    unsigned y = x;
    for (unsigned long i = 0; i < k; ++i) y = image_[y];
    return y;
  }

  bool is_automorphism(const FiniteGroup& g) const {
    std::vector<bool> seen(g.order(), false);
    for (unsigned x = 0; x < g.order(); ++x) {
      if (seen[image_[x]]) return false;
      seen[image_[x]] = true;
    }
    return true;
  }

  FiniteSubgroup image_subgroup(const FiniteGroup& g, const FiniteSubgroup& s) const {
    std::vector<bool> m(g.order(), false);
    for (unsigned x = 0; x < g.order(); ++x)
      if (s.contains(x)) m[image_[x]] = true;
    return FiniteSubgroup(g, std::move(m));
  }

  // {x in M : alpha(x) in L}
  FiniteSubgroup preimage_meet(const FiniteGroup& g, const FiniteSubgroup& L,
                               const FiniteSubgroup& M) const {
    std::vector<bool> m(g.order(), false);
    for (unsigned x = 0; x < g.order(); ++x)
      if (M.contains(x) && L.contains(image_[x])) m[x] = true;
    return FiniteSubgroup(g, std::move(m));
  }

 private:
  std::vector<unsigned> image_;
};

} // namespace tdlc
