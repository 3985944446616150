#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tdlc/padic/hensel.hpp"
#include "tdlc/padic/lattice.hpp"
#include "tdlc/padic/matrix.hpp"
#include "tdlc/padic/newton.hpp"
#include "tdlc/util/error.hpp"

namespace tdlc {

// The alpha-invariant decomposition Q_p^n = V_< + V_= + V_> by eigenvalue
// absolute value, with exact rational bases that are correct to the stated
// precision. The generalized 0-eigenspace is part of V_< and is exact.
struct SlopeSplit {
  Mat v_contract; // |lambda| < 1 (including nilpotent part)
  Mat v_level;    // |lambda| = 1
  Mat v_expand;   // |lambda| > 1
  long precision = VAL_INF;
  bool certified = false;
  ValuationClasses classes;
  std::vector<Rat> charpoly_coeffs;

  int dim_contract() const { return v_contract.cols; }
  int dim_level() const { return v_level.cols; }
  int dim_expand() const { return v_expand.cols; }
};

namespace slope_detail {

// Evaluate a polynomial at the matrix A with exact rational arithmetic.
inline Mat eval_poly(const std::vector<Rat>& f, const Mat& A) {
  int n = A.rows;
  Mat r(n, n);
  for (size_t k = f.size(); k-- > 0;) {
    r = r * A;
    for (int i = 0; i < n; ++i) r.at(i, i) += f[k];
  }
  return r;
}

// Kernel of M with an expected dimension, judged by the pivot-valuation gap
// of the local Smith form. For exact annihilators the pivots beyond the rank
// are genuinely zero and the gap is infinite.
struct GappedKernel {
  Mat basis;
  long gap = 0; // separation between "zero" pivots and the rest
  bool ok = false;
};

inline GappedKernel gapped_kernel(const Mat& M, const Int& p, int expect_dim, long threshold) {
  GappedKernel out;
  PSmith s = psmith(M, p);
  int n = M.cols;
  int zero_like = n - s.rank; // genuinely zero pivots
  std::vector<long> piv = s.pivots; // ascending
  // treat trailing pivots above the threshold as numerically zero
  int big = 0;
  while (big < int(piv.size()) && piv[size_t(piv.size() - 1 - big)] >= threshold) ++big;
  if (zero_like + big != expect_dim) return out;
  long small_max = 0;
  for (size_t i = 0; i + big < piv.size(); ++i) small_max = std::max(small_max, piv[i]);
  out.gap = (big > 0 || zero_like > 0)
                ? ((big > 0 ? piv[piv.size() - big] : VAL_INF) - small_max)
                : VAL_INF;
  if (zero_like > 0 && big == 0) out.gap = VAL_INF;
  out.basis = s.Vinv.cols_slice(n - expect_dim, n);
  out.ok = true;
  return out;
}

inline long matrix_min_valuation(const Mat& M, const Int& p) {
  long v = VAL_INF;
  for (const Rat& x : M.a) v = std::min(v, valuation(x, p));
  return v;
}

} // namespace slope_detail

struct SlopeSplitOptions {
  long initial_precision = 0; // 0 = derive from the coefficient spread
  int max_doublings = 6;
};

inline long default_initial_precision(const std::vector<Rat>& f, int n, const Int& p) {
  long vmin = VAL_INF, vmax = -VAL_INF;
  for (const Rat& c : f) {
    if (c == 0) continue;
    long v = valuation(c, p);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  long spread = (vmin == VAL_INF) ? 0 : vmax - vmin;
  return std::max<long>(8, 2 * (spread + n));
}

inline SlopeSplit slope_split(const Mat& A, const Int& p, SlopeSplitOptions opt = {}) {
  int n = A.rows;
  SlopeSplit out;
  out.charpoly_coeffs = charpoly(A);
  NewtonPolygon np = newton_polygon(out.charpoly_coeffs, p);
  out.classes = classify(np);

  // strip zero roots: the exact generalized 0-eigenspace
  int m = np.zero_multiplicity;
  std::vector<Rat> g(out.charpoly_coeffs.begin() + m, out.charpoly_coeffs.end());

  long N = opt.initial_precision > 0 ? opt.initial_precision
                                     : default_initial_precision(out.charpoly_coeffs, n, p);
  long a_slack = std::max<long>(0, -slope_detail::matrix_min_valuation(A, p)) * n;

  for (int attempt = 0; attempt <= opt.max_doublings; ++attempt, N *= 2) {
    SignClassSplit split;
    try {
      split = sign_class_split(g, p, N);
    } catch (const error& e) {
      if (e.kind() == errc::not_computable) continue; // escalate precision
      throw;
    }
    if (!split.reachable) break; // no route at any precision

    // assemble total factors; contraction picks up the x^m zero part
    ApproxPoly fc = split.contract;
    if (m > 0) {
      std::vector<Rat> shifted(size_t(m), Rat(0));
      shifted.insert(shifted.end(), fc.c.begin(), fc.c.end());
      fc.c = std::move(shifted);
    }

    long worst_err = VAL_INF;
    for (const ApproxPoly* f : {&fc, &split.level, &split.expand})
      worst_err = std::min(worst_err, f->err);
    long threshold = worst_err == VAL_INF ? 2 * N / 3 : (worst_err - a_slack) / 2;
    if (threshold < 4 && worst_err != VAL_INF) continue;
    if (worst_err == VAL_INF) threshold = std::max<long>(4, threshold);

    auto kc = slope_detail::gapped_kernel(slope_detail::eval_poly(fc.c, A), p,
                                          out.classes.dim_contract, threshold);
    auto kl = slope_detail::gapped_kernel(slope_detail::eval_poly(split.level.c, A), p,
                                          out.classes.dim_level, threshold);
    auto ke = slope_detail::gapped_kernel(slope_detail::eval_poly(split.expand.c, A), p,
                                          out.classes.dim_expand, threshold);
    if (!kc.ok || !kl.ok || !ke.ok) continue;

    // direct-sum margin: concatenated bases must form a basis with moderate
    // determinant valuation relative to the working precision
    Mat all = Mat::hstack(Mat::hstack(kc.basis, kl.basis), ke.basis);
    if (all.cols != n) continue;
    Rat det = determinant(all);
    if (det == 0) continue;
    long det_margin = valuation(det, p);
    if (det_margin < 0) det_margin = -det_margin;
    if (worst_err != VAL_INF && det_margin > threshold / 2) continue;

    // alpha-invariance residuals per block
    bool invariant = true;
    for (const Mat* B : {&kc.basis, &kl.basis, &ke.basis}) {
      if (B->cols == 0) continue;
      Mat AB = A * (*B);
      Mat C = block_coordinates(*B, AB);
      Mat resid = AB - (*B) * C;
      long rv = slope_detail::matrix_min_valuation(resid, p);
      if (worst_err != VAL_INF && rv < threshold / 2) {
        invariant = false;
        break;
      }
      if (worst_err == VAL_INF && rv != VAL_INF) {
        invariant = false;
        break;
      }
    }
    if (!invariant) continue;

    out.v_contract = kc.basis;
    out.v_level = kl.basis;
    out.v_expand = ke.basis;
    out.precision = worst_err;
    out.certified = true;
    return out;
  }

  out.certified = false;
  out.precision = 0;
  return out;
}

} // namespace tdlc
