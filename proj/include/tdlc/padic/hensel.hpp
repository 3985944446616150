#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "tdlc/padic/newton.hpp"
#include "tdlc/util/error.hpp"
#include "tdlc/util/numbers.hpp"

namespace tdlc {

namespace hensel_detail {

using ZPoly = std::vector<Int>; // index i = coefficient of x^i, reduced mod m

inline void trim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline ZPoly reduce(ZPoly f, const Int& m) {
  for (auto& c : f) c = mod_reduce(c, m);
  trim(f);
  return f;
}

inline ZPoly add(const ZPoly& a, const ZPoly& b, const Int& m) {
  ZPoly r(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = mod_reduce(r[i] + b[i], m);
  trim(r);
  return r;
}

inline ZPoly sub(const ZPoly& a, const ZPoly& b, const Int& m) {
  ZPoly r(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = mod_reduce(r[i] - b[i], m);
  trim(r);
  return r;
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b, const Int& m) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = mod_reduce(r[i + j] + a[i] * b[j], m);
  }
  trim(r);
  return r;
}

// division by a monic divisor, everything mod m
inline std::pair<ZPoly, ZPoly> divmod_monic(ZPoly a, const ZPoly& b, const Int& m) {
  if (b.empty() || b.back() != 1) fail(errc::not_computable, "divisor must be monic");
  trim(a);
  ZPoly q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Int(0));
  while (a.size() >= b.size()) {
    Int c = a.back();
    size_t shift = a.size() - b.size();
    q[shift] = c;
    for (size_t i = 0; i + 1 < b.size(); ++i)
      a[shift + i] = mod_reduce(a[shift + i] - c * b[i], m);
    a.pop_back(); // the top coefficient cancels against c * (monic leading 1)
    trim(a);
  }
  trim(q);
  return {q, a};
}

// extended euclid in F_p[x] for coprime g, h: returns s with s*g == 1 mod (h, p)
inline ZPoly fp_inverse_mod(const ZPoly& g, const ZPoly& h, const Int& p) {
  // make h monic over F_p
  auto monicize = [&](ZPoly f) {
    trim(f);
    if (f.empty()) return f;
    Int inv = mod_inverse(f.back(), p);
    for (auto& c : f) c = mod_reduce(c * inv, p);
    return f;
  };
  ZPoly r0 = monicize(reduce(h, p)), r1 = reduce(g, p);
  // euclid with Bezout coefficients tracked for g only:
  // invariant: r0 = a0*g mod h, r1 = a1*g mod h (mod p)
  ZPoly a0 = {}, a1 = {Int(1)};
  while (true) {
    trim(r1);
    if (r1.empty()) fail(errc::not_computable, "factors not coprime mod p");
    if (r1.size() == 1) {
      Int inv = mod_inverse(r1[0], p);
      ZPoly s;
      for (auto& c : a1) s.push_back(mod_reduce(c * inv, p));
      trim(s);
      return s;
    }
    Int lead_inv = mod_inverse(r1.back(), p);
    ZPoly r1m = r1;
    for (auto& c : r1m) c = mod_reduce(c * lead_inv, p);
    auto [q, rem] = divmod_monic(r0, r1m, p);
    // r0 - (q*lead_inv)*r1 = rem
    ZPoly qli;
    for (auto& c : q) qli.push_back(mod_reduce(c * lead_inv, p));
    ZPoly a2 = sub(a0, mul(qli, a1, p), p);
    r0 = r1;
    a0 = a1;
    r1 = rem;
    a1 = a2;
  }
}

} // namespace hensel_detail

// Polynomial with rational coefficients that may only be known to finite
// p-adic precision. err is a conservative exponent: each coefficient agrees
// with the true factor modulo p^err * Z_(p). Exact polynomials use VAL_INF.
struct ApproxPoly {
  std::vector<Rat> c; // index i = coefficient of x^i, monic expected
  long err = VAL_INF;

  int degree() const { return int(c.size()) - 1; }
  bool exact() const { return err >= VAL_INF; }

  static ApproxPoly one() { return {{Rat(1)}, VAL_INF}; }
};

// Quadratic Hensel lift of the factorization F == x^j * u (mod p) for an
// integral monic F; returns monic factors (g, h), g == x^j with all roots of
// positive valuation, h with unit roots, both correct mod p^N.
inline std::pair<ApproxPoly, ApproxPoly> hensel_split_at_zero(const std::vector<Rat>& F,
                                                              const Int& p, int j, long N) {
  using namespace hensel_detail;
  int n = int(F.size()) - 1;
  if (j <= 0 || j >= n) fail(errc::not_computable, "split point must be interior");
  Int modN = pow_int(p, N);
  // integral rational coefficients -> residues mod p^N
  ZPoly f(size_t(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const Rat& x = F[size_t(i)];
    if (valuation(x, p) < 0) fail(errc::not_computable, "polynomial not integral at p");
    Int den = denominator(x);
    f[size_t(i)] = mod_reduce(numerator(x) * mod_inverse(mod_reduce(den, modN), modN), modN);
  }
  // initial factors mod p
  ZPoly g(size_t(j) + 1, Int(0));
  g[size_t(j)] = 1;
  ZPoly h(f.begin() + j, f.end());
  h = reduce(h, p);
  if (h.empty() || h[0] == 0) fail(errc::not_computable, "vertex coefficient not a unit");
  ZPoly s = fp_inverse_mod(g, h, p); // s*g == 1 mod (h, p)
  ZPoly t;
  {
    // t = (1 - s*g)/h mod p
    ZPoly one{Int(1)};
    auto num = sub(one, mul(s, g, p), p);
    auto [q, r] = divmod_monic(num, h, p);
    if (!r.empty()) fail(errc::not_computable, "bezout residue");
    t = q;
  }

  long e = 1;
  Int m = p;
  while (e < N) {
    long e2 = std::min(2 * e, N);
    Int M = pow_int(p, e2);
    // factor correction: g*dh + h*dg == e_f with deg dg < deg g
    ZPoly fm = reduce(f, M), gm = reduce(g, M), hm = reduce(h, M);
    ZPoly ef = sub(fm, mul(gm, hm, M), M);
    auto [qg, dg] = divmod_monic(mul(t, ef, M), gm, M);
    ZPoly dh = add(mul(s, ef, M), mul(hm, qg, M), M);
    // degree control: terms of dh at degree >= deg h must vanish mod M
    for (size_t i = hm.size() - 1; i < dh.size(); ++i)
      if (dh[i] != 0) fail(errc::not_computable, "hensel degree overflow");
    if (dh.size() >= hm.size()) dh.resize(hm.size() - 1);
    g = add(gm, dg, M);
    h = add(hm, dh, M);
    // refresh s to an inverse of g modulo (h, M) by a newton step, then t
    ZPoly two{Int(2)};
    ZPoly corr = sub(two, mul(g, s, M), M);
    s = mul(s, corr, M);
    s = divmod_monic(s, h, M).second;
    {
      ZPoly one{Int(1)};
      auto num = sub(one, mul(s, g, M), M);
      auto [q, r] = divmod_monic(num, h, M);
      if (!r.empty()) fail(errc::not_computable, "bezout refresh residue");
      t = q;
    }
    e = e2;
    m = M;
  }

  auto to_approx = [&](const ZPoly& z, int deg) {
    ApproxPoly a;
    a.c.assign(size_t(deg) + 1, Rat(0));
    for (size_t i = 0; i < z.size(); ++i) a.c[i] = Rat(z[i]);
    a.c[size_t(deg)] = 1; // monic by construction
    a.err = e;
    return a;
  };
  return {to_approx(g, j), to_approx(h, n - j)};
}

// --- coefficient-level transforms used by the sign-class ladder ----------

// reverse(f)(x) = x^deg f(1/x), then normalized monic by the old constant term.
inline ApproxPoly reverse_monic(const ApproxPoly& f, const Int& p) {
  ApproxPoly r;
  int n = f.degree();
  Rat c0 = f.c[0];
  if (c0 == 0) fail(errc::not_computable, "reversal needs a nonzero constant term");
  r.c.assign(size_t(n) + 1, Rat(0));
  for (int i = 0; i <= n; ++i) r.c[size_t(n - i)] = f.c[size_t(i)] / c0;
  long w = valuation(c0, p) < 0 ? -valuation(c0, p) : valuation(c0, p);
  r.err = f.exact() ? VAL_INF : f.err - 2 * w;
  return r;
}

// g_s(x) = p^{c*deg} g(x / p^c): shifts every root valuation by +c.
inline ApproxPoly scale_roots_up(const ApproxPoly& f, const Int& p, long cshift) {
  ApproxPoly r = f;
  int n = f.degree();
  for (int i = 0; i <= n; ++i) {
    long k = cshift * (n - i);
    Rat ppow = k >= 0 ? Rat(pow_int(p, k)) : Rat(1, pow_int(p, -k));
    r.c[size_t(i)] *= ppow;
  }
  if (!f.exact()) r.err = f.err + std::min<long>(0, cshift); // conservative
  return r;
}

inline ApproxPoly scale_roots_down(const ApproxPoly& f, const Int& p, long cshift) {
  ApproxPoly r = scale_roots_up(f, p, -cshift);
  if (!f.exact()) r.err = f.err - cshift * f.degree();
  return r;
}

// The three factors of a monic polynomial with nonzero constant term, split
// by the sign of the root valuations. reachable=false when no chain of
// reversals, integral scalings and mod-p Hensel splits separates the classes.
struct SignClassSplit {
  ApproxPoly contract = ApproxPoly::one(); // roots of valuation > 0
  ApproxPoly level = ApproxPoly::one();    // valuation = 0
  ApproxPoly expand = ApproxPoly::one();   // valuation < 0
  bool reachable = true;
};

namespace hensel_detail {

// equi-valued integer class valuation, or nullopt
inline std::optional<long> equi_integer_valuation(const std::vector<std::pair<Rat, int>>& vals,
                                                  bool positive) {
  std::optional<Rat> v;
  for (auto& [val, mult] : vals) {
    if ((positive && val > 0) || (!positive && val < 0)) {
      if (v && *v != val) return std::nullopt;
      v = val;
    }
  }
  if (!v || denominator(*v) != 1) return std::nullopt;
  return long(numerator(*v));
}

} // namespace hensel_detail

inline SignClassSplit sign_class_split(const std::vector<Rat>& g, const Int& p, long N) {
  NewtonPolygon np = newton_polygon(g, p);
  if (np.zero_multiplicity != 0) fail(errc::not_computable, "zero roots must be stripped first");
  auto cls = classify(np);
  int dc = cls.dim_contract, dl = cls.dim_level, de = cls.dim_expand;
  SignClassSplit out;
  ApproxPoly whole{g, VAL_INF};

  int nonzero_classes = (dc > 0) + (dl > 0) + (de > 0);
  if (nonzero_classes <= 1) {
    if (dc > 0)
      out.contract = whole;
    else if (de > 0)
      out.expand = whole;
    else
      out.level = whole;
    return out;
  }

  if (de == 0) {
    // integral polynomial: plain split at the unit vertex
    auto [gc, gl] = hensel_split_at_zero(g, p, dc, N);
    out.contract = gc;
    out.level = gl;
    return out;
  }

  if (dc == 0) {
    // reverse: expanding roots become the positive-valuation class
    ApproxPoly r = reverse_monic(whole, p);
    auto [re, rl] = hensel_split_at_zero(r.c, p, de, N);
    out.expand = reverse_monic(re, p);
    out.level = reverse_monic(rl, p);
    return out;
  }

  // both a contracting and an expanding class exist
  auto try_peel_expand = hensel_detail::equi_integer_valuation(cls.valuations, false);
  auto try_peel_contract = hensel_detail::equi_integer_valuation(cls.valuations, true);

  if (try_peel_expand) {
    long c = -*try_peel_expand; // > 0
    ApproxPoly scaled = scale_roots_up(whole, p, c);
    auto [rest_s, exp_s] = hensel_split_at_zero(scaled.c, p, dc + dl, N);
    out.expand = scale_roots_down(exp_s, p, c);
    ApproxPoly rest = scale_roots_down(rest_s, p, c);
    if (dl == 0) {
      out.contract = rest;
    } else if (rest.exact()) {
      auto sub = sign_class_split(rest.c, p, N);
      out.contract = sub.contract;
      out.level = sub.level;
      out.reachable = sub.reachable;
    } else {
      // rest is integral (all roots v >= 0) with an interior unit vertex
      if (rest.err < 4) fail(errc::not_computable, "insufficient precision for nested split");
      long nested = std::min<long>(N, rest.err);
      auto [gc, gl] = hensel_split_at_zero(rest.c, p, dc, nested);
      gc.err = std::min(gc.err, rest.err);
      gl.err = std::min(gl.err, rest.err);
      out.contract = gc;
      out.level = gl;
    }
    return out;
  }

  if (try_peel_contract) {
    long c = *try_peel_contract; // > 0
    ApproxPoly r = reverse_monic(whole, p);
    // reversed contract class sits at valuation -c; shift it to zero
    ApproxPoly scaled = scale_roots_up(r, p, c);
    auto [rest_s, con_s] = hensel_split_at_zero(scaled.c, p, de + dl, N);
    ApproxPoly con_r = scale_roots_down(con_s, p, c);
    out.contract = reverse_monic(con_r, p);
    ApproxPoly rest_r = scale_roots_down(rest_s, p, c);
    ApproxPoly rest = reverse_monic(rest_r, p); // expand + level classes of g
    if (dl == 0) {
      out.expand = rest;
    } else {
      // rest has classes {v<0, v=0}: reverse makes it integral
      ApproxPoly rr = reverse_monic(rest, p);
      if (!rr.exact() && rr.err < 4)
        fail(errc::not_computable, "insufficient precision for nested split");
      long nested = rr.exact() ? N : std::min<long>(N, rr.err);
      auto [re, rl] = hensel_split_at_zero(rr.c, p, de, nested);
      out.expand = reverse_monic(ApproxPoly{re.c, std::min(re.err, rr.err)}, p);
      out.level = reverse_monic(ApproxPoly{rl.c, std::min(rl.err, rr.err)}, p);
    }
    return out;
  }

  out.reachable = false;
  return out;
}

} // namespace tdlc
