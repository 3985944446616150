#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <limits>
#include <string>

#include "tdlc/util/error.hpp"

namespace tdlc {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int pow_int(const Int& base, long e) {
  Int r = 1, b = base;
  for (long k = e; k > 0; k >>= 1) {
    if (k & 1) r *= b;
    if (k > 1) b *= b;
  }
  return r;
}

constexpr long VAL_INF = std::numeric_limits<long>::max() / 4;

inline long valuation(const Int& n, const Int& p) {
  if (n == 0) return VAL_INF;
  Int m = n < 0 ? Int(-n) : n;
  long v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

// v_p of an exact rational; VAL_INF for zero.
inline long valuation(const Rat& x, const Int& p) {
  if (x == 0) return VAL_INF;
  return valuation(numerator(x), p) - valuation(denominator(x), p);
}

inline Int mod_reduce(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

inline Int mod_inverse(const Int& a, const Int& m) {
  Int old_r = mod_reduce(a, m), r = m;
  Int old_s = 1, s = 0;
  while (r != 0) {
    Int q = old_r / r;
    Int t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) fail(errc::not_computable, "element not invertible modulo " + m.str());
  return mod_reduce(old_s, m);
}

// Canonical representative of x in Z_(p)/p^d Z_(p), returned together with
// the cofactor t = (x - rep)/p^d, which lies in Z_(p).
struct PResidue {
  Rat rep;
  Rat cofactor;
};

inline PResidue reduce_mod_ppow(const Rat& x, const Int& p, long d) {
  Rat scale = d >= 0 ? Rat(pow_int(p, d)) : Rat(1, pow_int(p, -d));
  Rat y = x / scale; // reduce y mod Z_(p)
  Int num = numerator(y), den = denominator(y);
  long vden = valuation(den, p);
  if (vden == 0) return {Rat(0), y}; // y already in Z_(p)
  Int pk = pow_int(p, vden);
  Int denp = den / pk; // prime-to-p part, invertible mod pk
  Int r = mod_reduce(num * mod_inverse(denp, pk), pk);
  Rat rep = Rat(r, pk);
  return {rep * scale, y - rep};
}

inline std::string rat_str(const Rat& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) fail(errc::parse_error, "zero denominator in '" + s + "'");
    return Rat(num, den);
  } catch (const error&) {
    throw;
  } catch (const std::exception&) {
    fail(errc::parse_error, "bad rational '" + s + "'");
  }
}

} // namespace tdlc
