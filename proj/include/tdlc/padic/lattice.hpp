#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdlc/padic/matrix.hpp"
#include "tdlc/util/error.hpp"
#include "tdlc/util/numbers.hpp"

namespace tdlc {

// Z_(p)-lattice in Q^n, i.e. the exact rational skeleton of a compact
// subgroup of Q_p^n. The basis is kept in a canonical column echelon form at
// p: pivots are exact powers of p, entries above a pivot vanish, and entries
// in a pivot row left of the pivot are reduced to the canonical residue mod
// the pivot. Two lattices are equal iff their canonical bases are.
class Lattice {
 public:
  Lattice() = default;

  static Lattice zero(int n) {
    Lattice L;
    L.n_ = n;
    L.basis_ = Mat(n, 0);
    return L;
  }

  static Lattice standard(int n, const Int& p) {
    return from_generators(Mat::identity(n), p).first;
  }

  // Canonicalize the column span of G over Z_(p).
  static std::pair<Lattice, int> from_generators(Mat G, const Int& p) {
    int n = G.rows, m = G.cols;
    int cur = 0;
    std::vector<int> pivot_rows;
    for (int i = 0; i < n && cur < m; ++i) {
      int bj = -1;
      long best = VAL_INF;
      for (int j = cur; j < m; ++j) {
        long v = valuation(G.at(i, j), p);
        if (v < best) {
          best = v;
          bj = j;
        }
      }
      if (bj < 0 || best == VAL_INF) continue;
      if (bj != cur)
        for (int r = 0; r < n; ++r) std::swap(G.at(r, cur), G.at(r, bj));
      Rat ppow = best >= 0 ? Rat(pow_int(p, best)) : Rat(1, pow_int(p, -best));
      Rat unit = G.at(i, cur) / ppow;
      for (int r = 0; r < n; ++r) G.at(r, cur) /= unit;
      // clear row i in later columns entirely, reduce earlier pivot columns
      for (int j = cur + 1; j < m; ++j) {
        Rat c = G.at(i, j) / ppow; // in Z_(p): pivot valuation is minimal in the row
        if (c == 0) continue;
        for (int r = 0; r < n; ++r) G.at(r, j) -= c * G.at(r, cur);
      }
      for (int j = 0; j < cur; ++j) {
        PResidue red = reduce_mod_ppow(G.at(i, j), p, best);
        if (red.cofactor == 0) continue;
        for (int r = 0; r < n; ++r) G.at(r, j) -= red.cofactor * G.at(r, cur);
      }
      pivot_rows.push_back(i);
      ++cur;
    }
    Lattice L;
    L.n_ = n;
    L.basis_ = G.cols_slice(0, cur);
    L.pivot_rows_ = pivot_rows;
    // reorder columns by pivot row ascending: already ascending by construction
    return {L, cur};
  }

  int ambient_dim() const { return n_; }
  int rank() const { return basis_.cols; }
  bool is_full_rank() const { return rank() == n_; }
  const Mat& basis() const { return basis_; }
  const std::vector<int>& pivot_rows() const { return pivot_rows_; }

  bool operator==(const Lattice& o) const { return n_ == o.n_ && basis_ == o.basis_; }
  bool operator!=(const Lattice& o) const { return !(*this == o); }

  // Membership of a single rational vector.
  bool contains(const Mat& x, const Int& p) const {
    auto c = solve_exact(basis_, x);
    if (!c) return false;
    if (!(basis_ * (*c) == x)) return false;
    for (const Rat& v : c->a)
      if (valuation(v, p) < 0) return false;
    return true;
  }

  bool subset_of(const Lattice& o, const Int& p) const {
    for (int j = 0; j < basis_.cols; ++j)
      if (!o.contains(basis_.col(j), p)) return false;
    return true;
  }

  std::string to_string() const { return basis_.to_string(); }

 private:
  int n_ = 0;
  Mat basis_;
  std::vector<int> pivot_rows_;
};

inline Lattice lattice_image(const Mat& A, const Lattice& L, const Int& p) {
  return Lattice::from_generators(A * L.basis(), p).first;
}

inline Lattice lattice_sum(const Lattice& L, const Lattice& M, const Int& p) {
  return Lattice::from_generators(Mat::hstack(L.basis(), M.basis()), p).first;
}

// L meet M via the saturated kernel of [B_L | -B_M].
inline Lattice lattice_intersect(const Lattice& L, const Lattice& M, const Int& p) {
  if (L.rank() == 0 || M.rank() == 0) return Lattice::zero(L.ambient_dim());
  Mat stacked = Mat::hstack(L.basis(), M.basis().scaled(Rat(-1)));
  Mat K = kernel(stacked, p); // (rL + rM) x dim
  // x = B_L * (top rL rows of kernel vectors)
  Mat top(L.rank(), K.cols);
  for (int i = 0; i < L.rank(); ++i)
    for (int j = 0; j < K.cols; ++j) top.at(i, j) = K.at(i, j);
  return Lattice::from_generators(L.basis() * top, p).first;
}

// {x in M : A x in L}
inline Lattice lattice_preimage_meet(const Mat& A, const Lattice& L, const Lattice& M,
                                     const Int& p) {
  if (M.rank() == 0) return Lattice::zero(M.ambient_dim());
  Mat AM = A * M.basis();
  if (L.rank() == 0) {
    // solutions of A x = 0 within M
    Mat K = kernel(AM, p);
    return Lattice::from_generators(M.basis() * K, p).first;
  }
  Mat stacked = Mat::hstack(AM, L.basis().scaled(Rat(-1)));
  Mat K = kernel(stacked, p);
  Mat top(M.rank(), K.cols);
  for (int i = 0; i < M.rank(); ++i)
    for (int j = 0; j < K.cols; ++j) top.at(i, j) = K.at(i, j);
  return Lattice::from_generators(M.basis() * top, p).first;
}

// [L : M] for M a finite-index sublattice of L; requires equal rank and
// containment, errors otherwise.
inline Int lattice_index(const Lattice& L, const Lattice& M, const Int& p) {
  if (M.rank() < L.rank()) fail(errc::infinite_index, "sublattice has deficient rank");
  if (M.rank() > L.rank()) fail(errc::not_a_subgroup, "ranks incompatible");
  if (L.rank() == 0) return 1;
  auto C = solve_exact(L.basis(), M.basis());
  if (!C || !(L.basis() * (*C) == M.basis()))
    fail(errc::not_a_subgroup, "not contained in the same span");
  long total = 0;
  PSmith s = psmith(*C, p);
  if (s.rank < C->cols) fail(errc::not_a_subgroup, "degenerate coefficient matrix");
  for (long d : s.pivots) {
    if (d < 0) fail(errc::not_a_subgroup, "not a sublattice");
    total += d;
  }
  return pow_int(p, total);
}

} // namespace tdlc
