#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "tdlc/util/error.hpp"

namespace tdlc {

// Finite group as an explicit multiplication table. Orders in this project
// stay tiny (catalog <= 9, window groups <= 3^5), so everything is checked
// and enumerated exhaustively.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  static FiniteGroup from_table(std::vector<std::vector<unsigned>> table,
                                std::vector<std::string> labels = {}) {
    FiniteGroup g;
    g.n_ = static_cast<unsigned>(table.size());
    if (g.n_ == 0) fail(errc::invalid_table, "empty table");
    g.table_.assign(size_t(g.n_) * g.n_, 0);
    for (unsigned i = 0; i < g.n_; ++i) {
      if (table[i].size() != g.n_) fail(errc::invalid_table, "ragged table");
      for (unsigned j = 0; j < g.n_; ++j) {
        if (table[i][j] >= g.n_) fail(errc::invalid_table, "index out of range");
        g.table_[size_t(i) * g.n_ + j] = table[i][j];
      }
    }
    g.labels_ = std::move(labels);
    if (g.labels_.empty()) {
      for (unsigned i = 0; i < g.n_; ++i) g.labels_.push_back("g" + std::to_string(i));
    }
    g.finish_checks();
    return g;
  }

  // Direct product of cyclic groups C_{f0} x C_{f1} x ...
  static FiniteGroup abelian(const std::vector<unsigned>& factors) {
    unsigned n = 1;
    for (unsigned f : factors) {
      if (f == 0) fail(errc::invalid_table, "zero cyclic factor");
      n *= f;
    }
    auto decode = [&](unsigned idx) {
      std::vector<unsigned> c(factors.size());
      for (size_t k = 0; k < factors.size(); ++k) {
        c[k] = idx % factors[k];
        idx /= factors[k];
      }
      return c;
    };
    auto encode = [&](const std::vector<unsigned>& c) {
      unsigned idx = 0, mult = 1;
      for (size_t k = 0; k < factors.size(); ++k) {
        idx += c[k] * mult;
        mult *= factors[k];
      }
      return idx;
    };
    std::vector<std::vector<unsigned>> t(n, std::vector<unsigned>(n));
    std::vector<std::string> labels(n);
    for (unsigned i = 0; i < n; ++i) {
      auto a = decode(i);
      std::string lab = "(";
      for (size_t k = 0; k < a.size(); ++k) lab += (k ? "," : "") + std::to_string(a[k]);
      labels[i] = lab + ")";
      for (unsigned j = 0; j < n; ++j) {
        auto b = decode(j);
        std::vector<unsigned> c(factors.size());
        for (size_t k = 0; k < factors.size(); ++k) c[k] = (a[k] + b[k]) % factors[k];
        t[i][j] = encode(c);
      }
    }
    return from_table(std::move(t), std::move(labels));
  }

  static FiniteGroup named(const std::string& name) {
    if (name == "S3") return symmetric3();
    if (name == "D4") return dihedral4();
    if (name == "Q8") return quaternion8();
    fail(errc::parse_error, "unknown named group '" + name + "'");
  }

  unsigned order() const { return n_; }
  unsigned identity() const { return id_; }
  unsigned mul(unsigned a, unsigned b) const { return table_[size_t(a) * n_ + b]; }
  unsigned inv(unsigned a) const { return inv_[a]; }
  const std::string& label(unsigned a) const { return labels_[a]; }
  bool abelian_flag() const { return abelian_; }

  unsigned power(unsigned a, unsigned long k) const {
    unsigned r = id_;
    for (unsigned long i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }

 private:
  void finish_checks() {
    // Identity
    id_ = n_;
    for (unsigned e = 0; e < n_; ++e) {
      bool ok = true;
      for (unsigned a = 0; a < n_ && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
      if (ok) {
        id_ = e;
        break;
      }
    }
    if (id_ == n_) fail(errc::invalid_table, "no identity element");

    // Inverses
    inv_.assign(n_, n_);
    for (unsigned a = 0; a < n_; ++a) {
      for (unsigned b = 0; b < n_; ++b)
        if (mul(a, b) == id_ && mul(b, a) == id_) {
          inv_[a] = b;
          break;
        }
      if (inv_[a] == n_) fail(errc::invalid_table, "missing inverse");
    }

    // Associativity: full check up to order 256, sampled beyond.
    if (n_ <= 256) {
      for (unsigned a = 0; a < n_; ++a)
        for (unsigned b = 0; b < n_; ++b)
          for (unsigned c = 0; c < n_; ++c)
            if (mul(mul(a, b), c) != mul(a, mul(b, c)))
              fail(errc::invalid_table, "associativity violated");
    } else {
      for (unsigned s = 0; s < 4096; ++s) {
        unsigned a = (s * 2654435761u) % n_, b = (s * 40503u + 1) % n_, c = (s * 69621u + 7) % n_;
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          fail(errc::invalid_table, "associativity violated");
      }
    }

    abelian_ = true;
    for (unsigned a = 0; a < n_ && abelian_; ++a)
      for (unsigned b = 0; b < a && abelian_; ++b) abelian_ = mul(a, b) == mul(b, a);
  }

  static FiniteGroup symmetric3() {
    // Permutations of {0,1,2} in one-line notation.
    std::vector<std::array<unsigned, 3>> perms;
    std::array<unsigned, 3> v{0, 1, 2};
    do {
      perms.push_back(v);
    } while (std::next_permutation(v.begin(), v.end()));
    unsigned n = 6;
    auto find = [&](const std::array<unsigned, 3>& q) {
      for (unsigned i = 0; i < n; ++i)
        if (perms[i] == q) return i;
      return n;
    };
    std::vector<std::vector<unsigned>> t(n, std::vector<unsigned>(n));
    std::vector<std::string> labels(n);
    for (unsigned i = 0; i < n; ++i) {
      labels[i] = "[" + std::to_string(perms[i][0]) + std::to_string(perms[i][1]) +
                  std::to_string(perms[i][2]) + "]";
      for (unsigned j = 0; j < n; ++j) {
        std::array<unsigned, 3> comp; // (p_i after p_j)(x) = p_i(p_j(x))
        for (unsigned x = 0; x < 3; ++x) comp[x] = perms[i][perms[j][x]];
        t[i][j] = find(comp);
      }
    }
    return from_table(std::move(t), std::move(labels));
  }

  static FiniteGroup dihedral4() {
    // r^4 = s^2 = e, s r s = r^-1; element k = r^(k%4) s^(k/4).
    unsigned n = 8;
    auto muld = [&](unsigned a, unsigned b) {
      unsigned ra = a % 4, sa = a / 4, rb = b % 4, sb = b / 4;
      // (r^ra s^sa)(r^rb s^sb) = r^(ra + (sa? -rb : rb)) s^(sa+sb)
      unsigned rr = sa ? (ra + 4 - rb) % 4 : (ra + rb) % 4;
      return rr + 4 * ((sa + sb) % 2);
    };
    std::vector<std::vector<unsigned>> t(n, std::vector<unsigned>(n));
    std::vector<std::string> labels = {"e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"};
    for (unsigned a = 0; a < n; ++a)
      for (unsigned b = 0; b < n; ++b) t[a][b] = muld(a, b);
    return from_table(std::move(t), std::move(labels));
  }

  static FiniteGroup quaternion8() {
    // {1,-1,i,-i,j,-j,k,-k} indexed 0..7 as 1,i,j,k with sign bit 4.
    auto pack = [](unsigned unit, bool neg) { return unit + (neg ? 4u : 0u); };
    auto mulq = [&](unsigned a, unsigned b) {
      unsigned ua = a & 3, ub = b & 3;
      bool na = a & 4, nb = b & 4;
      static const unsigned unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
      // i*j=k, j*k=i, k*i=j, i*i=-1; flip[ua][ub] true when the product picks a minus.
      static const bool flip[4][4] = {{false, false, false, false},
                                      {false, true, false, true},
                                      {false, true, true, false},
                                      {false, false, true, true}};
      return pack(unit[ua][ub], bool(na ^ nb) ^ flip[ua][ub]);
    };
    unsigned n = 8;
    std::vector<std::vector<unsigned>> t(n, std::vector<unsigned>(n));
    std::vector<std::string> labels = {"1", "i", "j", "k", "-1", "-i", "-j", "-k"};
    for (unsigned a = 0; a < n; ++a)
      for (unsigned b = 0; b < n; ++b) t[a][b] = mulq(a, b);
    return from_table(std::move(t), std::move(labels));
  }

  unsigned n_ = 0;
  unsigned id_ = 0;
  bool abelian_ = true;
  std::vector<unsigned> table_;
  std::vector<unsigned> inv_;
  std::vector<std::string> labels_;
};

} // namespace tdlc
