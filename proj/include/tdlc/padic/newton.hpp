#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "tdlc/padic/matrix.hpp"
#include "tdlc/util/error.hpp"
#include "tdlc/util/numbers.hpp"

namespace tdlc {

// Rational slope as an exact fraction; root valuations are negated slopes.
struct PolygonSegment {
  Rat slope;
  int multiplicity; // horizontal length
};

// Lower convex hull of {(i, v_p(a_i))}. Zero roots of the source polynomial
// are carried separately as zero_multiplicity (slope "+infinity").
struct NewtonPolygon {
  std::vector<PolygonSegment> segments; // slopes strictly increasing
  int zero_multiplicity = 0;
  std::vector<Rat> source; // the polynomial it was computed from

  // Multiset of root valuations (valuation, multiplicity), zero roots excluded.
  std::vector<std::pair<Rat, int>> root_valuations() const {
    std::vector<std::pair<Rat, int>> out;
    for (const auto& s : segments) out.emplace_back(-s.slope, s.multiplicity);
    std::sort(out.begin(), out.end());
    return out;
  }

  int degree_nonzero() const {
    int d = 0;
    for (const auto& s : segments) d += s.multiplicity;
    return d;
  }
};

// f given as coefficient vector, index i = coefficient of x^i, monic after
// normalization (we divide by the leading coefficient).
inline NewtonPolygon newton_polygon(std::vector<Rat> f, const Int& p) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  if (f.empty()) fail(errc::not_computable, "newton polygon of the zero polynomial");
  Rat lead = f.back();
  for (auto& c : f) c /= lead;

  NewtonPolygon np;
  np.source = f;
  int m = 0;
  while (f[m] == 0) ++m; // multiplicity of the root 0
  np.zero_multiplicity = m;
  int deg = int(f.size()) - 1;
  if (deg == m) return np; // pure power of x

  // points (i, v(a_i)) for i in [m, deg], a_m and a_deg nonzero
  std::vector<std::pair<long, Rat>> pts; // (abscissa, valuation) of hull vertices
  // Andrew-monotone lower hull over defined points
  std::vector<std::pair<long, Rat>> hull;
  for (int i = m; i <= deg; ++i) {
    if (f[i] == 0) continue;
    std::pair<long, Rat> q{i - m, Rat(valuation(f[i], p))};
    while (hull.size() >= 2) {
      auto& a = hull[hull.size() - 2];
      auto& b = hull[hull.size() - 1];
      // keep hull lower-convex: slope(a,b) must be < slope(a,q)
      if ((b.second - a.second) * (q.first - a.first) >=
          (q.second - a.second) * (b.first - a.first))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(q);
  }
  for (size_t k = 0; k + 1 < hull.size(); ++k) {
    Rat slope = (hull[k + 1].second - hull[k].second) / Rat(hull[k + 1].first - hull[k].first);
    np.segments.push_back({slope, int(hull[k + 1].first - hull[k].first)});
  }
  return np;
}

// p-adic valuations of the eigenvalues, zero eigenvalues as VAL_INF markers.
struct ValuationClasses {
  int dim_contract = 0;   // valuation > 0, including generalized zero eigenvalues
  int dim_level = 0;      // valuation = 0
  int dim_expand = 0;     // valuation < 0
  int zero_multiplicity = 0;
  long expansion_weight = 0; // sum of -valuation over the expanding class, an integer
  std::vector<std::pair<Rat, int>> valuations; // nonzero eigenvalues only
};

inline ValuationClasses classify(const NewtonPolygon& np) {
  ValuationClasses c;
  c.zero_multiplicity = np.zero_multiplicity;
  c.dim_contract = np.zero_multiplicity;
  c.valuations = np.root_valuations();
  Rat w = 0;
  for (auto& [v, mult] : c.valuations) {
    if (v > 0)
      c.dim_contract += mult;
    else if (v == 0)
      c.dim_level += mult;
    else {
      c.dim_expand += mult;
      w += -v * mult;
    }
  }
  if (denominator(w) != 1)
    fail(errc::not_computable, "expansion weight not integral"); // cannot happen: Galois-stable class
  c.expansion_weight = long(numerator(w));
  return c;
}

// s(alpha) for a linear map on Q_p^n: p^(sum of -v over eigenvalues with v < 0).
inline Int scale_from_polygon(const Mat& A, const Int& p) {
  auto np = newton_polygon(charpoly(A), p);
  auto cls = classify(np);
  return pow_int(p, cls.expansion_weight);
}

} // namespace tdlc
