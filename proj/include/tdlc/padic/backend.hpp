#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/core/types.hpp"
#include "tdlc/padic/lattice.hpp"
#include "tdlc/padic/matrix.hpp"
#include "tdlc/padic/newton.hpp"
#include "tdlc/padic/slope_split.hpp"
#include "tdlc/util/error.hpp"

namespace tdlc {

struct PadicInstance {
  Int p;
  int n = 1;
  Mat A; // n x n rational, singular allowed
  std::string name;
};

// {x in L : x in span(W)}
inline Lattice lattice_meet_subspace(const Lattice& L, const Mat& W, const Int& p) {
  if (W.cols == 0) return Lattice::zero(L.ambient_dim());
  if (L.rank() == 0) return L;
  Mat Wt(W.cols, W.rows);
  for (int i = 0; i < W.rows; ++i)
    for (int j = 0; j < W.cols; ++j) Wt.at(j, i) = W.at(i, j);
  Mat ann = kernel(Wt, p); // columns c with W^T c = 0, i.e. c^T W = 0
  if (ann.cols == 0) return L; // W spans everything
  Mat annT(ann.cols, ann.rows);
  for (int i = 0; i < ann.rows; ++i)
    for (int j = 0; j < ann.cols; ++j) annT.at(j, i) = ann.at(i, j);
  Mat constr = annT * L.basis(); // rows annihilate exactly the W-span part
  Mat K = kernel(constr, p);
  return Lattice::from_generators(L.basis() * K, p).first;
}

class PadicBackend {
 public:
  using Subgroup = Lattice;

  explicit PadicBackend(const PadicInstance& inst, SlopeSplitOptions opt = {})
      : inst_(&inst), opt_(opt) {}

  const PadicInstance& instance() const { return *inst_; }
  const Int& p() const { return inst_->p; }
  int dim() const { return inst_->n; }
  const Mat& matrix() const { return inst_->A; }

  Subgroup standard_lattice() const { return Lattice::standard(inst_->n, inst_->p); }
  Subgroup trivial() const { return Lattice::zero(inst_->n); }

  Subgroup image(const Subgroup& L) const { return lattice_image(inst_->A, L, inst_->p); }
  Subgroup preimage_meet(const Subgroup& L, const Subgroup& M) const {
    return lattice_preimage_meet(inst_->A, L, M, inst_->p);
  }
  Subgroup intersect(const Subgroup& a, const Subgroup& b) const {
    return lattice_intersect(a, b, inst_->p);
  }
  Int index(const Subgroup& K, const Subgroup& H) const {
    return lattice_index(K, H, inst_->p);
  }
  bool equal(const Subgroup& a, const Subgroup& b) const { return a == b; }
  bool contains(const Subgroup& inner, const Subgroup& outer) const {
    return inner.subset_of(outer, inst_->p);
  }
  bool is_open(const Subgroup& L) const { return L.is_full_rank(); }
  std::string describe(const Subgroup& L) const { return L.to_string(); }

  const SlopeSplit& split() const {
    if (!split_) split_ = slope_split(inst_->A, inst_->p, opt_);
    return *split_;
  }

  // Scale value straight off the Newton polygon; always exact.
  Int newton_scale() const {
    return pow_int(inst_->p, classify(newton_polygon(charpoly(inst_->A), inst_->p)).expansion_weight);
  }

  // Displacement-stabilized scale over minus stages of the standard lattice.
  // The displacement is eventually constant and equal to s(alpha).
  std::pair<Int, Subgroup> stage_stabilized_scale(int budget, StageTrace* trace = nullptr) const {
    Subgroup V = standard_lattice();
    std::optional<Int> prev;
    int stable = 0;
    for (int l = 0; l <= budget; ++l) {
      if (l > 0) V = preimage_meet(V, standard_lattice());
      Subgroup img = image(V);
      Int d = index(img, intersect(img, V));
      if (trace) trace->records.push_back({l, V.to_string(), d});
      if (prev && d == *prev) {
        if (++stable >= inst_->n + 1) return {d, V};
      } else {
        stable = 0;
      }
      prev = d;
    }
    fail(errc::stage_budget_exceeded,
         "displacement did not stabilize within " + std::to_string(budget) + " stages");
  }

  // Adapted tidy lattice assembled from action-ring closures of the certified
  // slope blocks; the caller checks the displacement certificate.
  Subgroup adapted_tidy_lattice() const {
    const SlopeSplit& s = split();
    if (!s.certified)
      fail(errc::precision_escalation_failure, "slope split could not be certified");
    const Int& p = inst_->p;
    Mat gens(inst_->n, 0);
    auto add_block = [&](const Mat& B, bool inverse_action) {
      if (B.cols == 0) return;
      Mat C = block_coordinates(B, inst_->A * B);
      if (inverse_action) {
        auto Ci = inverse(C);
        if (!Ci) fail(errc::not_computable, "expanding block not invertible");
        C = *Ci;
      }
      Mat module = Mat::identity(B.cols);
      Mat powers = Mat::identity(B.cols);
      for (int i = 1; i < B.cols; ++i) {
        powers = C * powers;
        module = Mat::hstack(module, powers);
      }
      gens = Mat::hstack(gens, B * module);
    };
    add_block(s.v_contract, false);
    add_block(s.v_level, false);
    add_block(s.v_expand, true);
    return Lattice::from_generators(gens, p).first;
  }

  ScaleResult scale(int stage_budget = 64) const {
    ScaleResult r;
    r.value = newton_scale();
    const SlopeSplit& s = split();
    if (s.certified) {
      Subgroup W = adapted_tidy_lattice();
      Subgroup img = image(W);
      Int d = index(img, intersect(img, W));
      if (d == r.value) {
        r.method = ScaleMethod::newton_polygon;
        r.witness = W;
        r.witness_displacement = d;
        return r;
      }
    }
    auto [d, V] = stage_stabilized_scale(stage_budget);
    if (d != r.value)
      fail(errc::precision_escalation_failure,
           "newton and stage-stabilized scale disagree: " + r.value.str() + " vs " + d.str());
    r.method = ScaleMethod::stage_stabilization;
    r.witness = V;
    r.witness_displacement = d;
    return r;
  }

  DynamicalDecomposition decompose() const {
    const SlopeSplit& s = split();
    if (!s.certified)
      return DynamicalDecomposition::all_not_computed("slope split uncertified");
    DynamicalDecomposition d;
    auto sub = [&](const Mat& B) {
      return Descriptor(DescSubspace{B, true, s.precision});
    };
    d.con = sub(s.v_contract);
    d.lev = sub(s.v_level);
    d.con_minus = sub(s.v_expand);
    d.par = sub(Mat::hstack(s.v_contract, s.v_level));
    d.par_minus = sub(Mat::hstack(s.v_level, s.v_expand));
    d.nub = sub(Mat(inst_->n, 0));
    d.bik = sub(Mat(inst_->n, 0));
    d.omega = sub(Mat::identity(inst_->n));
    return d;
  }

  // K_+ cap K_- for a compact K: stage iteration with fixpoint detection,
  // confined to the parabolic blocks first when a certified split exists.
  Subgroup core_part(const Subgroup& K, int budget = 64) const {
    Subgroup start = K;
    const SlopeSplit& s = split();
    Subgroup kminus = start;
    {
      Subgroup base = start;
      if (s.certified)
        base = lattice_meet_subspace(start, Mat::hstack(s.v_contract, s.v_level), inst_->p);
      kminus = stabilize_minus(base, budget);
    }
    Subgroup kplus = start;
    {
      Subgroup base = start;
      if (s.certified)
        base = lattice_meet_subspace(start, Mat::hstack(s.v_level, s.v_expand), inst_->p);
      kplus = stabilize_plus(base, budget);
    }
    Subgroup core = intersect(kplus, kminus);
    if (!equal(image(core), core)) fail(errc::not_computable, "core not alpha-stable");
    return core;
  }

  // Exactly invariant rational subspace -> restricted instance.
  PadicInstance restrict_to(const Mat& W, const std::string& suffix) const {
    if (W.cols == 0) return {inst_->p, 0, Mat(0, 0), inst_->name + suffix};
    Mat AW = inst_->A * W;
    Mat C = block_coordinates(W, AW);
    if (!(W * C == AW)) fail(errc::not_computable, "subspace not exactly invariant");
    return {inst_->p, W.cols, C, inst_->name + suffix};
  }

  // Quotient by an exactly invariant rational subspace: induced matrix on a
  // standard-vector complement.
  PadicInstance quotient_by(const Mat& W, const std::string& suffix) const {
    int n = inst_->n, d = W.cols;
    if (d == 0) return {inst_->p, n, inst_->A, inst_->name + suffix};
    auto rows = independent_rows(W);
    std::vector<bool> used(size_t(n), false);
    for (int r : rows) used[size_t(r)] = true;
    Mat T(n, n);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < n; ++i) T.at(i, j) = W.at(i, j);
    int k = d;
    for (int i = 0; i < n; ++i)
      if (!used[size_t(i)]) T.at(i, k++) = 1;
    auto Tinv = inverse(T);
    if (!Tinv) fail(errc::not_computable, "complement completion failed");
    Mat M = (*Tinv) * inst_->A * T;
    // invariance: lower-left block must vanish
    for (int i = d; i < n; ++i)
      for (int j = 0; j < d; ++j)
        if (M.at(i, j) != 0) fail(errc::not_computable, "subspace not exactly invariant");
    Mat Q(n - d, n - d);
    for (int i = d; i < n; ++i)
      for (int j = d; j < n; ++j) Q.at(i - d, j - d) = M.at(i, j);
    return {inst_->p, n - d, Q, inst_->name + suffix};
  }

 private:
  Subgroup stabilize_minus(const Subgroup& K, int budget) const {
    Subgroup cur = K;
    for (int i = 0; i < budget; ++i) {
      Subgroup next = preimage_meet(cur, K);
      if (equal(next, cur)) return cur;
      cur = next;
    }
    fail(errc::not_computable, "minus stages did not stabilize");
  }

  Subgroup stabilize_plus(const Subgroup& K, int budget) const {
    Subgroup cur = K;
    for (int i = 0; i < budget; ++i) {
      Subgroup next = intersect(K, image(cur));
      if (equal(next, cur)) return cur;
      cur = next;
    }
    fail(errc::not_computable, "plus stages did not stabilize");
  }

  const PadicInstance* inst_;
  SlopeSplitOptions opt_;
  mutable std::optional<SlopeSplit> split_;
};

} // namespace tdlc
