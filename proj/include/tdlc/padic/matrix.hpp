#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdlc/util/error.hpp"
#include "tdlc/util/numbers.hpp"

namespace tdlc {

// Dense matrix over exact rationals. Sizes in this project are tiny
// (n <= 4 ambient, a handful of columns), so clarity wins over speed.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<Rat> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(size_t(r) * c, Rat(0)) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  Rat& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const Rat& at(int i, int j) const { return a[size_t(i) * cols + j]; }

  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

  Mat operator*(const Mat& o) const {
    Mat r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) {
        const Rat& x = at(i, k);
        if (x == 0) continue;
        for (int j = 0; j < o.cols; ++j) r.at(i, j) += x * o.at(k, j);
      }
    return r;
  }

  Mat operator+(const Mat& o) const {
    Mat r(rows, cols);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] + o.a[i];
    return r;
  }

  Mat operator-(const Mat& o) const {
    Mat r(rows, cols);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
    return r;
  }

  Mat scaled(const Rat& c) const {
    Mat r(rows, cols);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] * c;
    return r;
  }

  Mat col(int j) const {
    Mat r(rows, 1);
    for (int i = 0; i < rows; ++i) r.at(i, 0) = at(i, j);
    return r;
  }

  Mat cols_slice(int j0, int j1) const {
    Mat r(rows, j1 - j0);
    for (int i = 0; i < rows; ++i)
      for (int j = j0; j < j1; ++j) r.at(i, j - j0) = at(i, j);
    return r;
  }

  static Mat hstack(const Mat& x, const Mat& y) {
    if (x.cols == 0) return y;
    if (y.cols == 0) return x;
    Mat r(x.rows, x.cols + y.cols);
    for (int i = 0; i < x.rows; ++i) {
      for (int j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
      for (int j = 0; j < y.cols; ++j) r.at(i, x.cols + j) = y.at(i, j);
    }
    return r;
  }

  Rat trace() const {
    Rat t = 0;
    for (int i = 0; i < rows; ++i) t += at(i, i);
    return t;
  }

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < rows; ++i) {
      s += i ? "; " : "";
      for (int j = 0; j < cols; ++j) s += (j ? "," : "") + rat_str(at(i, j));
    }
    return s + "]";
  }
};

inline Mat mat_pow(const Mat& m, unsigned long k) {
  Mat r = Mat::identity(m.rows), b = m;
  while (k) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

// Row-reduced solve of A X = B over the rationals; nullopt when inconsistent.
// A need not be square; when the solution space is positive-dimensional the
// free variables are set to zero.
inline std::optional<Mat> solve_exact(Mat A, Mat B) {
  int m = A.rows, k = A.cols, j = B.cols;
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < k && r < m; ++c) {
    int pr = -1;
    for (int i = r; i < m; ++i)
      if (A.at(i, c) != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    for (int t = 0; t < k; ++t) std::swap(A.at(r, t), A.at(pr, t));
    for (int t = 0; t < j; ++t) std::swap(B.at(r, t), B.at(pr, t));
    Rat inv = Rat(1) / A.at(r, c);
    for (int t = 0; t < k; ++t) A.at(r, t) *= inv;
    for (int t = 0; t < j; ++t) B.at(r, t) *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      Rat f = A.at(i, c);
      if (f == 0) continue;
      for (int t = 0; t < k; ++t) A.at(i, t) -= f * A.at(r, t);
      for (int t = 0; t < j; ++t) B.at(i, t) -= f * B.at(r, t);
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < m; ++i)
    for (int t = 0; t < j; ++t)
      if (B.at(i, t) != 0) return std::nullopt;
  Mat X(k, j);
  for (int pi = 0; pi < r; ++pi)
    for (int t = 0; t < j; ++t) X.at(pivot_col[pi], t) = B.at(pi, t);
  return X;
}

inline std::optional<Mat> inverse(const Mat& A) {
  if (A.rows != A.cols) return std::nullopt;
  auto X = solve_exact(A, Mat::identity(A.rows));
  if (!X) return std::nullopt;
  // solve_exact returns some solution; verify it is a two-sided inverse
  if (!((*X) * A == Mat::identity(A.rows))) return std::nullopt;
  return X;
}

inline int rank(Mat A) {
  int m = A.rows, k = A.cols, r = 0;
  for (int c = 0; c < k && r < m; ++c) {
    int pr = -1;
    for (int i = r; i < m; ++i)
      if (A.at(i, c) != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    for (int t = 0; t < k; ++t) std::swap(A.at(r, t), A.at(pr, t));
    for (int i = r + 1; i < m; ++i) {
      Rat f = A.at(i, c) / A.at(r, c);
      for (int t = 0; t < k; ++t) A.at(i, t) -= f * A.at(r, t);
    }
    ++r;
  }
  return r;
}

inline Rat determinant(Mat A) {
  if (A.rows != A.cols) fail(errc::incompatible_ranks, "determinant of non-square matrix");
  int n = A.rows;
  Rat det = 1;
  for (int c = 0; c < n; ++c) {
    int pr = -1;
    for (int i = c; i < n; ++i)
      if (A.at(i, c) != 0) {
        pr = i;
        break;
      }
    if (pr < 0) return Rat(0);
    if (pr != c) {
      for (int t = 0; t < n; ++t) std::swap(A.at(c, t), A.at(pr, t));
      det = -det;
    }
    det *= A.at(c, c);
    for (int i = c + 1; i < n; ++i) {
      Rat f = A.at(i, c) / A.at(c, c);
      for (int t = c; t < n; ++t) A.at(i, t) -= f * A.at(c, t);
    }
  }
  return det;
}

// Characteristic polynomial by Faddeev-LeVerrier; exact rational
// coefficients, index i holds the coefficient of x^i, leading term monic.
inline std::vector<Rat> charpoly(const Mat& A) {
  int n = A.rows;
  std::vector<Rat> c(size_t(n) + 1, Rat(0));
  c[n] = 1;
  Mat M = Mat::identity(n);
  Mat Ak = A;
  for (int k = 1; k <= n; ++k) {
    if (k > 1) {
      // M <- A * (M + c_{n-k+1} I)
      Mat t = M;
      for (int i = 0; i < n; ++i) t.at(i, i) += c[n - k + 1];
      Ak = A * t;
    }
    c[n - k] = -Ak.trace() / k;
    M = Ak;
  }
  return c;
}

// Indices of a maximal set of linearly independent rows.
inline std::vector<int> independent_rows(const Mat& B) {
  Mat W = B;
  int m = W.rows, k = W.cols, r = 0;
  std::vector<int> rows;
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  for (int c = 0; c < k && r < m; ++c) {
    int pr = -1;
    for (int i = r; i < m; ++i)
      if (W.at(i, c) != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    if (pr != r) {
      for (int t = 0; t < k; ++t) std::swap(W.at(r, t), W.at(pr, t));
      std::swap(order[r], order[pr]);
    }
    rows.push_back(order[r]);
    for (int i = r + 1; i < m; ++i) {
      Rat f = W.at(i, c) / W.at(r, c);
      if (f == 0) continue;
      for (int t = 0; t < k; ++t) W.at(i, t) -= f * W.at(r, t);
    }
    ++r;
  }
  return rows;
}

// Coordinates of X in the column frame B, determined from a full set of
// pivot rows. When X does not lie exactly in span(B) the residual X - B*C is
// the caller's certification burden.
inline Mat block_coordinates(const Mat& B, const Mat& X) {
  auto rows = independent_rows(B);
  if (int(rows.size()) != B.cols) fail(errc::incompatible_ranks, "basis is column-deficient");
  int d = B.cols;
  Mat Bs(d, d), Xs(d, X.cols);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) Bs.at(i, j) = B.at(rows[size_t(i)], j);
    for (int j = 0; j < X.cols; ++j) Xs.at(i, j) = X.at(rows[size_t(i)], j);
  }
  auto C = solve_exact(Bs, Xs);
  if (!C) fail(errc::incompatible_ranks, "pivot system is singular");
  return *C;
}

// Smith-style normal form over the local ring Z_(p): X_orig = U * D * V with
// U, V invertible over Z_(p) and D diagonal with p-power pivots (valuations
// ascending). We keep U (for saturations) and V^{-1} (for kernels).
struct PSmith {
  Mat U;          // m x m
  Mat Vinv;       // k x k
  std::vector<long> pivots; // valuations of the diagonal, ascending
  int rank = 0;
};

inline PSmith psmith(Mat X, const Int& p) {
  int m = X.rows, k = X.cols;
  PSmith s;
  s.U = Mat::identity(m);
  s.Vinv = Mat::identity(k);
  int t = 0;
  while (t < m && t < k) {
    // pivot of minimal valuation in the remaining block
    long best = VAL_INF;
    int bi = -1, bj = -1;
    for (int i = t; i < m; ++i)
      for (int j = t; j < k; ++j) {
        long v = valuation(X.at(i, j), p);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0 || best == VAL_INF) break;
    if (bi != t) { // swap rows bi,t ; U cols bi,t
      for (int j = 0; j < k; ++j) std::swap(X.at(t, j), X.at(bi, j));
      for (int i = 0; i < m; ++i) std::swap(s.U.at(i, t), s.U.at(i, bi));
    }
    if (bj != t) { // swap cols ; Vinv cols
      for (int i = 0; i < m; ++i) std::swap(X.at(i, t), X.at(i, bj));
      for (int i = 0; i < k; ++i) std::swap(s.Vinv.at(i, t), s.Vinv.at(i, bj));
    }
    Rat ppow = best >= 0 ? Rat(pow_int(p, best)) : Rat(1, pow_int(p, -best));
    Rat unit = X.at(t, t) / ppow; // p-adic unit
    // scale row t by 1/unit; U col t by unit
    for (int j = 0; j < k; ++j) X.at(t, j) /= unit;
    for (int i = 0; i < m; ++i) s.U.at(i, t) *= unit;
    for (int i = t + 1; i < m; ++i) {
      Rat c = X.at(i, t) / ppow; // in Z_(p) as pivot has minimal valuation
      if (c == 0) continue;
      for (int j = 0; j < k; ++j) X.at(i, j) -= c * X.at(t, j);
      for (int r = 0; r < m; ++r) s.U.at(r, t) += c * s.U.at(r, i);
    }
    for (int j = t + 1; j < k; ++j) {
      Rat c = X.at(t, j) / ppow;
      if (c == 0) continue;
      for (int i = 0; i < m; ++i) X.at(i, j) -= c * X.at(i, t);
      for (int i = 0; i < k; ++i) s.Vinv.at(i, j) -= c * s.Vinv.at(i, t);
    }
    s.pivots.push_back(best);
    ++t;
  }
  s.rank = t;
  return s;
}

// Exact rational kernel (= saturated Z_(p)-kernel) as columns.
inline Mat kernel(const Mat& X, const Int& p) {
  PSmith s = psmith(X, p);
  return s.Vinv.cols_slice(s.rank, X.cols);
}

} // namespace tdlc
