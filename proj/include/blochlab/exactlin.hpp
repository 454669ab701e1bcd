#pragma once

// Exact integer linear algebra: Smith/Hermite normal forms, saturated kernel
// lattices and finitely presented abelian groups with tracked coordinate maps.
// All entries are arbitrary-precision (GMP); no floating point anywhere.

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blochlab/errors.hpp"

namespace blochlab {

using Int = mpz_class;
using IntVec = std::vector<Int>;

class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(size_t(rows) * cols) {}

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMatrix from_columns(int rows, const std::vector<IntVec>& cols) {
    IntMatrix m(rows, int(cols.size()));
    for (int j = 0; j < int(cols.size()); ++j) {
      assert(int(cols[j].size()) == rows);
      for (int i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Int& at(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return e_[size_t(i) * cols_ + j];
  }
  const Int& at(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return e_[size_t(i) * cols_ + j];
  }

  IntVec column(int j) const {
    IntVec v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    assert(cols_ == o.rows_);
    IntMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Int& a = at(i, k);
        if (a == 0) continue;
        for (int j = 0; j < o.cols_; ++j)
          if (o.at(k, j) != 0) r.at(i, j) += a * o.at(k, j);
      }
    return r;
  }

  IntVec apply(const IntVec& v) const {
    assert(int(v.size()) == cols_);
    IntVec r(rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (at(i, j) != 0 && v[j] != 0) r[i] += at(i, j) * v[j];
    return r;
  }

  IntMatrix hstack(const IntMatrix& o) const {
    assert(rows_ == o.rows_);
    IntMatrix r(rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
      for (int j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
    }
    return r;
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }

  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
  }
  // row_i += q * row_j
  void add_row(int i, int j, const Int& q) {
    if (q == 0) return;
    for (int k = 0; k < cols_; ++k)
      if (at(j, k) != 0) at(i, k) += q * at(j, k);
  }
  void add_col(int i, int j, const Int& q) {
    if (q == 0) return;
    for (int k = 0; k < rows_; ++k)
      if (at(k, j) != 0) at(k, i) += q * at(k, j);
  }
  void negate_row(int i) {
    for (int k = 0; k < cols_; ++k) at(i, k) = -at(i, k);
  }
  void negate_col(int j) {
    for (int k = 0; k < rows_; ++k) at(k, j) = -at(k, j);
  }

private:
  int rows_ = 0, cols_ = 0;
  std::vector<Int> e_;
};

struct SmithForm {
  IntMatrix S;          // diagonal, divisibility order, nonnegative
  IntMatrix U, Uinv;    // unimodular row transform and its inverse
  IntMatrix V, Vinv;    // unimodular column transform and its inverse
  int rank = 0;         // number of nonzero diagonal entries
};

// U * m * V = S.  Smallest-nonzero-pivot heuristic keeps intermediate entries
// tame on the sparse boundary matrices this library produces.
inline SmithForm smith_normal_form(const IntMatrix& m) {
  SmithForm f;
  f.S = m;
  const int r = m.rows(), c = m.cols();
  f.U = IntMatrix::identity(r);
  f.Uinv = IntMatrix::identity(r);
  f.V = IntMatrix::identity(c);
  f.Vinv = IntMatrix::identity(c);
  IntMatrix& S = f.S;

  auto row_op = [&](int i, int j, const Int& q) {
    // row_i -= q row_j  (S and U); Uinv column j += q column i
    S.add_row(i, j, -q);
    f.U.add_row(i, j, -q);
    f.Uinv.add_col(j, i, q);
  };
  auto col_op = [&](int i, int j, const Int& q) {
    S.add_col(i, j, -q);
    f.V.add_col(i, j, -q);
    f.Vinv.add_row(j, i, q);
  };
  auto swap_r = [&](int i, int j) {
    S.swap_rows(i, j);
    f.U.swap_rows(i, j);
    f.Uinv.swap_cols(i, j);
  };
  auto swap_c = [&](int i, int j) {
    S.swap_cols(i, j);
    f.V.swap_cols(i, j);
    f.Vinv.swap_rows(i, j);
  };

  int t = 0;
  const int lim = std::min(r, c);
  while (t < lim) {
    // smallest nonzero pivot in the remaining block
    int pi = -1, pj = -1;
    for (int i = t; i < r; ++i)
      for (int j = t; j < c; ++j) {
        const Int& v = S.at(i, j);
        if (v == 0) continue;
        if (pi < 0 || mpz_cmpabs(v.get_mpz_t(), S.at(pi, pj).get_mpz_t()) < 0) {
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    swap_r(t, pi);
    swap_c(t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < r; ++i) {
        if (S.at(i, t) == 0) continue;
        Int q = S.at(i, t) / S.at(t, t); // truncated
        row_op(i, t, q);
        if (S.at(i, t) != 0) {
          swap_r(t, i); // remainder is smaller; use it as pivot
          clean = false;
        }
      }
      for (int j = t + 1; j < c; ++j) {
        if (S.at(t, j) == 0) continue;
        Int q = S.at(t, j) / S.at(t, t);
        col_op(j, t, q);
        if (S.at(t, j) != 0) {
          swap_c(t, j);
          clean = false;
        }
      }
    }

    // pivot must divide the rest of the block
    bool divides = true;
    for (int i = t + 1; i < r && divides; ++i)
      for (int j = t + 1; j < c && divides; ++j)
        if (S.at(i, j) % S.at(t, t) != 0) {
          row_op(t, i, Int(-1)); // fold the offending row in and redo
          divides = false;
        }
    if (divides) ++t;
  }

  for (int i = 0; i < lim; ++i)
    if (S.at(i, i) < 0) {
      S.negate_row(i);
      f.U.negate_row(i);
      f.Uinv.negate_col(i);
    }
  f.rank = 0;
  while (f.rank < lim && S.at(f.rank, f.rank) != 0) ++f.rank;
  return f;
}

// Column-style Hermite normal form of the span of the given columns.
// Zero columns are dropped; pivots positive, entries left of a pivot reduced
// into [0, pivot).  The result is the canonical basis of the spanned lattice.
inline std::vector<IntVec> hermite_columns(int ambient, std::vector<IntVec> cols) {
  for (auto& v : cols) assert(int(v.size()) == ambient);
  int ncols = int(cols.size());
  int done = 0;
  for (int row = 0; row < ambient && done < ncols; ++row) {
    int p = -1;
    for (int j = done; j < ncols; ++j)
      if (cols[j][row] != 0) {
        p = j;
        break;
      }
    if (p < 0) continue;
    std::swap(cols[done], cols[p]);
    // clear the row in the remaining columns by gcd steps
    for (int j = done + 1; j < ncols; ++j) {
      while (cols[j][row] != 0) {
        Int q = cols[j][row] / cols[done][row];
        if (q != 0)
          for (int i = 0; i < ambient; ++i) cols[j][i] -= q * cols[done][i];
        if (cols[j][row] != 0) std::swap(cols[done], cols[j]);
      }
    }
    if (cols[done][row] < 0)
      for (int i = 0; i < ambient; ++i) cols[done][i] = -cols[done][i];
    for (int j = 0; j < done; ++j) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), cols[j][row].get_mpz_t(), cols[done][row].get_mpz_t());
      if (q != 0)
        for (int i = 0; i < ambient; ++i) cols[j][i] -= q * cols[done][i];
    }
    ++done;
  }
  cols.resize(done);
  return cols;
}

// A sublattice of Z^ambient_rank with canonical (Hermite) basis, column-style.
class IntLattice {
public:
  IntLattice() = default;
  IntLattice(int ambient, std::vector<IntVec> generators)
      : ambient_(ambient), basis_(hermite_columns(ambient, std::move(generators))) {
    pivots_.reserve(basis_.size());
    for (const auto& b : basis_) {
      int p = 0;
      while (p < ambient_ && b[p] == 0) ++p;
      pivots_.push_back(p);
    }
  }

  int ambient_rank() const { return ambient_; }
  int rank() const { return int(basis_.size()); }
  const std::vector<IntVec>& basis() const { return basis_; }

  // Exact coordinates of v in the Hermite basis, or nullopt if v is outside.
  std::optional<IntVec> solve(const IntVec& v) const {
    assert(int(v.size()) == ambient_);
    IntVec rem = v;
    IntVec x(basis_.size());
    for (size_t j = 0; j < basis_.size(); ++j) {
      const int p = pivots_[j];
      if (rem[p] % basis_[j][p] != 0) return std::nullopt;
      x[j] = rem[p] / basis_[j][p];
      if (x[j] != 0)
        for (int i = p; i < ambient_; ++i) rem[i] -= x[j] * basis_[j][i];
    }
    for (const Int& e : rem)
      if (e != 0) return std::nullopt;
    return x;
  }

  bool contains(const IntVec& v) const { return solve(v).has_value(); }

  bool operator==(const IntLattice& o) const {
    return ambient_ == o.ambient_ && basis_ == o.basis_;
  }

private:
  int ambient_ = 0;
  std::vector<IntVec> basis_;
  std::vector<int> pivots_;
};

// Saturated integer kernel {v : m v = 0} of a matrix.
inline IntLattice kernel_lattice(const IntMatrix& m) {
  SmithForm f = smith_normal_form(m);
  std::vector<IntVec> gens;
  for (int j = f.rank; j < m.cols(); ++j) gens.push_back(f.V.column(j));
  return IntLattice(m.cols(), std::move(gens));
}

inline IntLattice column_lattice(const IntMatrix& m) {
  std::vector<IntVec> gens;
  for (int j = 0; j < m.cols(); ++j) gens.push_back(m.column(j));
  return IntLattice(m.rows(), std::move(gens));
}

// Finitely presented abelian group Z^n / <relation columns>.  Keeps the
// original generator coordinates alongside the canonical invariant-factor
// decomposition so distinguished elements stay expressible.
class FpAbGroup {
public:
  FpAbGroup() = default;
  FpAbGroup(int n_gens, IntMatrix relations)
      : n_(n_gens), rel_(std::move(relations)) {
    assert(rel_.rows() == n_ || rel_.cols() == 0);
    if (rel_.rows() != n_) rel_ = IntMatrix(n_, 0);
    SmithForm f = smith_normal_form(rel_);
    U_ = std::move(f.U);
    Uinv_ = std::move(f.Uinv);
    diag_.assign(n_, Int(0));
    for (int i = 0; i < f.rank; ++i) diag_[i] = f.S.at(i, i);
    for (int i = 0; i < n_; ++i) {
      if (diag_[i] == 0)
        ++free_rank_;
      else if (diag_[i] > 1)
        invf_.push_back(diag_[i]);
    }
  }

  int n_generators() const { return n_; }
  const IntMatrix& relation_matrix() const { return rel_; }
  const std::vector<Int>& invariant_factors() const { return invf_; }
  int free_rank() const { return free_rank_; }

  bool trivial() const { return invf_.empty() && free_rank_ == 0; }
  bool finite() const { return free_rank_ == 0; }
  Int order() const {
    assert(finite());
    Int o = 1;
    for (const Int& d : invf_) o *= d;
    return o;
  }

  bool same_isomorphism_type(const FpAbGroup& o) const {
    return invf_ == o.invf_ && free_rank_ == o.free_rank_;
  }

  // Canonical coordinates: y = U x with torsion coordinates reduced mod diag.
  IntVec canonical(const IntVec& x) const {
    assert(int(x.size()) == n_);
    IntVec y = U_.apply(x);
    for (int i = 0; i < n_; ++i)
      if (diag_[i] != 0) mpz_fdiv_r(y[i].get_mpz_t(), y[i].get_mpz_t(), diag_[i].get_mpz_t());
    return y;
  }

  IntVec from_canonical(const IntVec& y) const { return Uinv_.apply(y); }

  bool is_zero(const IntVec& x) const {
    IntVec y = canonical(x);
    return std::all_of(y.begin(), y.end(), [](const Int& e) { return e == 0; });
  }
  bool equal(const IntVec& x1, const IntVec& x2) const {
    return canonical(x1) == canonical(x2);
  }

  // Least n >= 1 with n v = 0; 0 encodes infinite order.
  Int element_order(const IntVec& v) const {
    IntVec y = canonical(v);
    Int ord = 1;
    for (int i = 0; i < n_; ++i) {
      if (diag_[i] == 0) {
        if (y[i] != 0) return 0;
      } else if (diag_[i] > 1 && y[i] != 0) {
        Int g = gcd(diag_[i], y[i]);
        Int o = diag_[i] / g;
        ord = lcm(ord, o);
      }
    }
    return ord;
  }

  // Generators (in group coordinates) of the torsion subgroup, one per
  // invariant factor.
  std::vector<IntVec> torsion_generators() const {
    std::vector<IntVec> out;
    for (int i = 0; i < n_; ++i)
      if (diag_[i] > 1) out.push_back(Uinv_.column(i));
    return out;
  }

  // Enumerate all elements of a finite group (canonical coordinates of the
  // torsion cyclic factors, mapped back to generator coordinates).
  std::vector<IntVec> all_elements() const {
    assert(finite());
    std::vector<int> tor_idx;
    for (int i = 0; i < n_; ++i)
      if (diag_[i] > 1) tor_idx.push_back(i);
    std::vector<IntVec> out;
    IntVec counter(tor_idx.size(), Int(0));
    while (true) {
      IntVec y(n_, Int(0));
      for (size_t k = 0; k < tor_idx.size(); ++k) y[tor_idx[k]] = counter[k];
      out.push_back(from_canonical(y));
      size_t k = 0;
      while (k < counter.size()) {
        counter[k] += 1;
        if (counter[k] < diag_[tor_idx[k]]) break;
        counter[k] = 0;
        ++k;
      }
      if (k == counter.size()) break;
    }
    return out;
  }

private:
  int n_ = 0;
  IntMatrix rel_;
  IntMatrix U_, Uinv_;
  std::vector<Int> diag_;
  std::vector<Int> invf_;
  int free_rank_ = 0;
};

inline FpAbGroup fp_group(int n_gens, const IntMatrix& relations) {
  return FpAbGroup(n_gens, relations);
}

inline FpAbGroup fp_free(int n_gens) { return FpAbGroup(n_gens, IntMatrix(n_gens, 0)); }

// Homomorphism between finitely presented abelian groups, given on
// generators; well-definedness (relations map to zero) checked up front.
class FpMap {
public:
  FpMap() = default;
  FpMap(FpAbGroup source, FpAbGroup target, IntMatrix generator_images,
        const std::string& label = "")
      : src_(std::move(source)), tgt_(std::move(target)), f_(std::move(generator_images)) {
    assert(f_.rows() == tgt_.n_generators() && f_.cols() == src_.n_generators());
    const IntMatrix& rs = src_.relation_matrix();
    for (int j = 0; j < rs.cols(); ++j)
      if (!tgt_.is_zero(f_.apply(rs.column(j))))
        throw IllDefined("relation " + std::to_string(j) + " has nonzero image" +
                         (label.empty() ? "" : " in " + label));
  }

  static FpMap identity(const FpAbGroup& g) {
    return FpMap(g, g, IntMatrix::identity(g.n_generators()));
  }

  const FpAbGroup& source() const { return src_; }
  const FpAbGroup& target() const { return tgt_; }
  const IntMatrix& matrix() const { return f_; }

  IntVec apply(const IntVec& v) const { return f_.apply(v); }

  FpMap compose_after(const FpMap& inner) const {
    // this o inner
    assert(inner.tgt_.n_generators() == src_.n_generators());
    return FpMap(inner.src_, tgt_, f_ * inner.f_);
  }

  bool equals(const FpMap& o) const {
    if (src_.n_generators() != o.src_.n_generators()) return false;
    for (int j = 0; j < f_.cols(); ++j)
      if (!tgt_.equal(f_.column(j), o.f_.column(j))) return false;
    return true;
  }

  bool is_zero_map() const {
    for (int j = 0; j < f_.cols(); ++j)
      if (!tgt_.is_zero(f_.column(j))) return false;
    return true;
  }

  FpAbGroup cokernel() const {
    return FpAbGroup(tgt_.n_generators(), f_.hstack(tgt_.relation_matrix()));
  }

  bool surjective() const { return cokernel().trivial(); }

private:
  FpAbGroup src_, tgt_;
  IntMatrix f_;
};

inline FpMap fp_map(const FpAbGroup& source, const FpAbGroup& target,
                    const IntMatrix& images, const std::string& label = "") {
  return FpMap(source, target, images, label);
}

namespace detail {

// Lattice of x in Z^m with F x = 0 in the target group (i.e. F x lies in the
// column span of the target relations).
inline IntLattice preimage_of_zero(const IntMatrix& F, const IntMatrix& target_rel) {
  const int m = F.cols();
  IntLattice ker = kernel_lattice(F.hstack(target_rel));
  std::vector<IntVec> proj;
  for (const IntVec& w : ker.basis()) proj.emplace_back(w.begin(), w.begin() + m);
  return IntLattice(m, std::move(proj));
}

} // namespace detail

// Kernel of f as a group with inclusion into f.source.
inline std::pair<FpAbGroup, FpMap> fp_kernel(const FpMap& f) {
  const int m = f.source().n_generators();
  IntLattice L = detail::preimage_of_zero(f.matrix(), f.target().relation_matrix());
  const int k = L.rank();
  const IntMatrix& rs = f.source().relation_matrix();
  IntMatrix rel(k, rs.cols());
  for (int j = 0; j < rs.cols(); ++j) {
    auto x = L.solve(rs.column(j));
    assert(x); // source relations map to zero, so they lie in L
    for (int i = 0; i < k; ++i) rel.at(i, j) = (*x)[i];
  }
  FpAbGroup kg(k, rel);
  IntMatrix incl = IntMatrix::from_columns(m, L.basis());
  return {kg, FpMap(kg, f.source(), incl)};
}

// Quotient of g by the subgroup generated by the given elements.
inline std::pair<FpAbGroup, FpMap> fp_quotient(const FpAbGroup& g,
                                               const std::vector<IntVec>& sub_generators) {
  const int n = g.n_generators();
  IntMatrix extra = IntMatrix::from_columns(n, sub_generators);
  FpAbGroup q(n, g.relation_matrix().hstack(extra));
  return {q, FpMap(g, q, IntMatrix::identity(n))};
}

// Subgroup of g generated by the given elements, with inclusion.
inline std::pair<FpAbGroup, FpMap> fp_subgroup(const FpAbGroup& g,
                                               const std::vector<IntVec>& generators) {
  const int n = g.n_generators();
  IntMatrix S = IntMatrix::from_columns(n, generators);
  // relations among the generators = lattice of coefficient vectors mapping to 0
  IntLattice K = detail::preimage_of_zero(S, g.relation_matrix());
  IntMatrix rel = IntMatrix::from_columns(int(generators.size()), K.basis());
  FpAbGroup h(int(generators.size()), rel);
  return {h, FpMap(h, g, S)};
}

// Is v in the subgroup of g generated by gens?
inline bool in_subgroup(const FpAbGroup& g, const std::vector<IntVec>& gens, const IntVec& v) {
  IntMatrix S = IntMatrix::from_columns(g.n_generators(), gens);
  IntLattice L = column_lattice(S.hstack(g.relation_matrix()));
  return L.contains(v);
}

// Equality of two subgroups given by generating sets.
inline bool same_subgroup(const FpAbGroup& g, const std::vector<IntVec>& a,
                          const std::vector<IntVec>& b) {
  for (const auto& v : a)
    if (!in_subgroup(g, b, v)) return false;
  for (const auto& v : b)
    if (!in_subgroup(g, a, v)) return false;
  return true;
}

inline bool injective(const FpMap& f) { return fp_kernel(f).first.trivial(); }
inline bool isomorphism(const FpMap& f) { return f.surjective() && injective(f); }

} // namespace blochlab
