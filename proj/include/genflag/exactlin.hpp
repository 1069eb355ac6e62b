#pragma once

// Exact rational linear algebra on finite-support vectors.
//
// Vectors are indexed by integer basis slots of the fixed basis E. In the
// isotropic layouts a slot is one of e_i (+i), e^i (-i) or e_0 (0).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "genflag/error.hpp"
#include "genflag/scalar.hpp"

namespace genflag {

using Slot = int64_t;

/// Finite-support coordinate vector relative to E. No stored coordinate is zero.
class VectorFS {
 public:
  VectorFS() = default;

  static VectorFS unit(Slot s, const Scalar& c = Scalar(1)) {
    VectorFS v;
    v.set(s, c);
    return v;
  }

  Scalar operator[](Slot s) const {
    auto it = coords_.find(s);
    return it == coords_.end() ? Scalar() : it->second;
  }

  void set(Slot s, const Scalar& c) {
    if (c.is_zero())
      coords_.erase(s);
    else
      coords_[s] = c;
  }

  void add(Slot s, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = coords_.try_emplace(s, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) coords_.erase(it);
    }
  }

  bool is_zero() const { return coords_.empty(); }
  const std::map<Slot, Scalar>& coords() const { return coords_; }
  size_t support_size() const { return coords_.size(); }

  Slot max_abs_slot() const {
    Slot m = 0;
    for (const auto& [s, c] : coords_) m = std::max<Slot>(m, s < 0 ? -s : s);
    return m;
  }

  VectorFS& operator+=(const VectorFS& o) {
    for (const auto& [s, c] : o.coords_) add(s, c);
    return *this;
  }
  VectorFS& operator-=(const VectorFS& o) {
    for (const auto& [s, c] : o.coords_) add(s, -c);
    return *this;
  }
  VectorFS& operator*=(const Scalar& k) {
    if (k.is_zero()) {
      coords_.clear();
      return *this;
    }
    for (auto& [s, c] : coords_) c *= k;
    return *this;
  }

  friend VectorFS operator+(VectorFS a, const VectorFS& b) { return a += b; }
  friend VectorFS operator-(VectorFS a, const VectorFS& b) { return a -= b; }
  friend VectorFS operator*(const Scalar& k, VectorFS v) { return v *= k; }
  friend bool operator==(const VectorFS&, const VectorFS&) = default;
  friend auto operator<=>(const VectorFS& a, const VectorFS& b) {
    return std::lexicographical_compare_three_way(a.coords_.begin(), a.coords_.end(), b.coords_.begin(),
                                                  b.coords_.end());
  }

 private:
  std::map<Slot, Scalar> coords_;
};

/// Dense rational matrix, row-major.
class MatrixQ {
 public:
  MatrixQ() = default;
  MatrixQ(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static MatrixQ identity(size_t n) {
    MatrixQ m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }

  static MatrixQ from_rows(const std::vector<std::vector<Scalar>>& rows) {
    MatrixQ m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) fail(ErrorCode::SemanticError, "ragged matrix rows");
      for (size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Scalar& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  friend MatrixQ operator*(const MatrixQ& a, const MatrixQ& b) {
    if (a.cols_ != b.rows_) fail(ErrorCode::SemanticError, "matrix shape mismatch");
    MatrixQ c(a.rows_, b.cols_);
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const MatrixQ&, const MatrixQ&) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// Which slots make up the level-n window V_n.
enum class Layout {
  Linear,  // e_1..e_n
  B,       // e_i, e^i for i <= n, plus e_0
  C,       // e_i, e^i for i <= n
  D,       // e_i, e^i for i <= n
};

inline bool in_window(Slot s, int64_t n, Layout layout) {
  switch (layout) {
    case Layout::Linear: return s >= 1 && s <= n;
    case Layout::B: return s >= -n && s <= n;
    case Layout::C:
    case Layout::D: return s != 0 && s >= -n && s <= n;
  }
  return false;
}

/// Slots of V_n in ascending order.
inline std::vector<Slot> window_slots(int64_t n, Layout layout) {
  std::vector<Slot> out;
  if (layout == Layout::Linear) {
    for (Slot s = 1; s <= n; ++s) out.push_back(s);
    return out;
  }
  for (Slot s = -n; s <= n; ++s)
    if (in_window(s, n, layout)) out.push_back(s);
  return out;
}

inline std::string slot_str(Slot s) {
  if (s < 0) return "e^" + std::to_string(-s);
  return "e" + std::to_string(s);
}

/// `e1 - 1/2*e^2`; the zero vector prints as `0`.
inline std::string vector_str(const VectorFS& v) {
  if (v.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [s, c] : v.coords()) {
    Scalar a = c.sign() < 0 ? -c : c;
    if (!first) out += c.sign() < 0 ? " - " : " + ";
    else if (c.sign() < 0) out += "-";
    if (a != Scalar(1)) out += a.str() + "*";
    out += slot_str(s);
    first = false;
  }
  return out;
}

inline bool supported_in(const VectorFS& v, int64_t n, Layout layout) {
  return std::all_of(v.coords().begin(), v.coords().end(),
                     [&](const auto& kv) { return in_window(kv.first, n, layout); });
}

namespace detail {

// Fraction-free elimination workspace: each row is a primitive integer vector
// over an explicit column order.
struct IntRows {
  std::vector<Slot> columns;
  std::vector<std::vector<Integer>> rows;
};

inline void make_primitive(std::vector<Integer>& row) {
  Integer g = 0;
  for (const auto& x : row)
    if (x != 0) g = gcd_of(g, x);
  if (g == 0 || g == 1) return;
  for (auto& x : row) x /= g;
}

inline IntRows to_int_rows(std::span<const VectorFS> vs, std::vector<Slot> columns) {
  std::map<Slot, size_t> pos;
  for (size_t j = 0; j < columns.size(); ++j) pos[columns[j]] = j;
  IntRows out;
  out.columns = std::move(columns);
  for (const auto& v : vs) {
    Integer den = 1;
    for (const auto& [s, c] : v.coords()) den = lcm_of(den, c.den());
    std::vector<Integer> row(out.columns.size());
    for (const auto& [s, c] : v.coords()) {
      auto it = pos.find(s);
      if (it == pos.end()) fail(ErrorCode::SemanticError, "slot missing from column order");
      row[it->second] = c.num() * (den / c.den());
    }
    make_primitive(row);
    out.rows.push_back(std::move(row));
  }
  return out;
}

inline std::vector<Slot> union_support(std::span<const VectorFS> vs) {
  std::vector<Slot> cols;
  for (const auto& v : vs)
    for (const auto& [s, c] : v.coords()) cols.push_back(s);
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  return cols;
}

// Reduces rows in place to reduced echelon form (integer-scaled). Returns the
// pivot column of each surviving row; zero rows are removed.
inline std::vector<size_t> reduce(IntRows& m) {
  std::vector<size_t> pivots;
  size_t r = 0;
  const size_t ncols = m.columns.size();
  for (size_t c = 0; c < ncols && r < m.rows.size(); ++c) {
    size_t p = r;
    while (p < m.rows.size() && m.rows[p][c] == 0) ++p;
    if (p == m.rows.size()) continue;
    std::swap(m.rows[r], m.rows[p]);
    for (size_t i = 0; i < m.rows.size(); ++i) {
      if (i == r || m.rows[i][c] == 0) continue;
      Integer a = m.rows[r][c];
      Integer b = m.rows[i][c];
      Integer g = gcd_of(a, b);
      a /= g;
      b /= g;
      for (size_t j = 0; j < ncols; ++j) m.rows[i][j] = a * m.rows[i][j] - b * m.rows[r][j];
      make_primitive(m.rows[i]);
    }
    pivots.push_back(c);
    ++r;
  }
  m.rows.resize(r);
  return pivots;
}

}  // namespace detail

/// Reduced row echelon basis of span(vs), pivots normalized to 1. Columns are
/// processed in `column_order` (defaults to ascending slot); every slot of
/// every input vector must appear in the order.
inline std::vector<VectorFS> rref(std::span<const VectorFS> vs, std::optional<std::vector<Slot>> column_order = {}) {
  std::vector<Slot> cols = column_order ? *column_order : detail::union_support(vs);
  auto m = detail::to_int_rows(vs, std::move(cols));
  auto pivots = detail::reduce(m);
  std::vector<VectorFS> out;
  out.reserve(m.rows.size());
  for (size_t i = 0; i < m.rows.size(); ++i) {
    const Integer& p = m.rows[i][pivots[i]];
    VectorFS v;
    for (size_t j = 0; j < m.columns.size(); ++j)
      if (m.rows[i][j] != 0) v.set(m.columns[j], Scalar(m.rows[i][j], p));
    out.push_back(std::move(v));
  }
  return out;
}

inline std::vector<VectorFS> rref(const std::vector<VectorFS>& vs) { return rref(std::span<const VectorFS>(vs)); }

/// Dimension of the span.
inline size_t rank(std::span<const VectorFS> vs) {
  auto m = detail::to_int_rows(vs, detail::union_support(vs));
  return detail::reduce(m).size();
}

inline size_t rank(const std::vector<VectorFS>& vs) { return rank(std::span<const VectorFS>(vs)); }

inline size_t rank(const MatrixQ& a) {
  std::vector<VectorFS> rows;
  for (size_t i = 0; i < a.rows(); ++i) {
    VectorFS v;
    for (size_t j = 0; j < a.cols(); ++j) v.set(static_cast<Slot>(j), a(i, j));
    rows.push_back(std::move(v));
  }
  return rank(rows);
}

inline bool in_span(const std::vector<VectorFS>& basis, const VectorFS& v) {
  if (v.is_zero()) return true;
  auto with = basis;
  with.push_back(v);
  return rank(with) == rank(basis);
}

/// Span inclusion A ⊆ B.
inline bool span_contains(const std::vector<VectorFS>& b, const std::vector<VectorFS>& a) {
  auto both = b;
  both.insert(both.end(), a.begin(), a.end());
  return rank(both) == rank(b);
}

inline bool same_span(const std::vector<VectorFS>& a, const std::vector<VectorFS>& b) {
  size_t ra = rank(a);
  return ra == rank(b) && span_contains(a, b);
}

inline bool independent(const std::vector<VectorFS>& vs) { return rank(vs) == vs.size(); }

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Scalar det(const MatrixQ& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::NonSquare, "determinant of a non-square matrix");
  const size_t n = m.rows();
  if (n == 0) return Scalar(1);
  // Clear denominators row by row; remember the scaling.
  std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
  Integer scale = 1;
  for (size_t i = 0; i < n; ++i) {
    Integer den = 1;
    for (size_t j = 0; j < n; ++j) den = lcm_of(den, m(i, j).den());
    scale *= den;
    for (size_t j = 0; j < n; ++j) a[i][j] = m(i, j).num() * (den / m(i, j).den());
  }
  int sign = 1;
  Integer prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return Scalar(0);
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return Scalar(Integer(sign * a[n - 1][n - 1]), scale);
}

/// Nullspace basis of a matrix (vectors indexed by column number from 0).
inline std::vector<std::vector<Scalar>> kernel(const MatrixQ& a) {
  std::vector<VectorFS> rows;
  std::vector<Slot> order;
  for (size_t j = 0; j < a.cols(); ++j) order.push_back(static_cast<Slot>(j));
  for (size_t i = 0; i < a.rows(); ++i) {
    VectorFS v;
    for (size_t j = 0; j < a.cols(); ++j) v.set(static_cast<Slot>(j), a(i, j));
    if (!v.is_zero()) rows.push_back(std::move(v));
  }
  auto red = rref(rows, order);
  std::vector<bool> is_pivot(a.cols(), false);
  std::vector<size_t> pivot_col;
  for (const auto& r : red) {
    size_t c = static_cast<size_t>(r.coords().begin()->first);
    is_pivot[c] = true;
    pivot_col.push_back(c);
  }
  std::vector<std::vector<Scalar>> out;
  for (size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> x(a.cols());
    x[f] = Scalar(1);
    for (size_t i = 0; i < red.size(); ++i) x[pivot_col[i]] = -red[i][static_cast<Slot>(f)];
    out.push_back(std::move(x));
  }
  return out;
}

/// Coefficients c with Σ c_k basis[k] = v, or nullopt if v is outside the span.
/// `basis` must be independent.
inline std::optional<std::vector<Scalar>> coordinates(const std::vector<VectorFS>& basis, const VectorFS& v) {
  std::vector<VectorFS> all = basis;
  all.push_back(v);
  auto slots = detail::union_support(all);
  MatrixQ m(slots.size(), basis.size() + 1);
  for (size_t r = 0; r < slots.size(); ++r) {
    for (size_t k = 0; k < basis.size(); ++k) m(r, k) = basis[k][slots[r]];
    m(r, basis.size()) = v[slots[r]];
  }
  for (const auto& x : kernel(m)) {
    if (x.back().is_zero()) continue;
    std::vector<Scalar> c(basis.size());
    for (size_t k = 0; k < basis.size(); ++k) c[k] = -x[k] / x.back();
    return c;
  }
  if (v.is_zero()) return std::vector<Scalar>(basis.size());
  return std::nullopt;
}

/// Basis of span(gens) ∩ V_n. Out-of-window coordinates are eliminated first;
/// rows whose pivot lands inside the window span the intersection.
inline std::vector<VectorFS> intersect_window(const std::vector<VectorFS>& gens, int64_t n,
                                              Layout layout = Layout::Linear) {
  if (n < 1) fail(ErrorCode::LevelTooSmall, "window level must be >= 1");
  auto slots = detail::union_support(gens);
  std::vector<Slot> order;
  for (Slot s : slots)
    if (!in_window(s, n, layout)) order.push_back(s);
  for (Slot s : slots)
    if (in_window(s, n, layout)) order.push_back(s);
  std::vector<VectorFS> out;
  for (auto& r : rref(gens, order))
    if (supported_in(r, n, layout)) out.push_back(std::move(r));
  return out;
}

/// Basis of span(a) ∩ span(b).
inline std::vector<VectorFS> intersect(const std::vector<VectorFS>& a, const std::vector<VectorFS>& b) {
  auto ba = rref(a);
  auto bb = rref(b);
  if (ba.empty() || bb.empty()) return {};
  std::vector<VectorFS> all = ba;
  all.insert(all.end(), bb.begin(), bb.end());
  auto slots = detail::union_support(all);
  MatrixQ m(slots.size(), ba.size() + bb.size());
  for (size_t r = 0; r < slots.size(); ++r) {
    for (size_t k = 0; k < ba.size(); ++k) m(r, k) = ba[k][slots[r]];
    for (size_t k = 0; k < bb.size(); ++k) m(r, ba.size() + k) = -bb[k][slots[r]];
  }
  std::vector<VectorFS> out;
  for (const auto& x : kernel(m)) {
    VectorFS v;
    for (size_t k = 0; k < ba.size(); ++k) v += x[k] * ba[k];
    out.push_back(std::move(v));
  }
  return rref(out);
}

inline size_t intersection_dim(const std::vector<VectorFS>& a, const std::vector<VectorFS>& b) {
  auto both = a;
  both.insert(both.end(), b.begin(), b.end());
  return rank(a) + rank(b) - rank(both);
}

/// Matrix whose columns are the given vectors expressed on `slots`.
inline MatrixQ column_matrix(const std::vector<VectorFS>& cols, const std::vector<Slot>& slots) {
  MatrixQ m(slots.size(), cols.size());
  for (size_t r = 0; r < slots.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c) m(r, c) = cols[c][slots[r]];
  return m;
}

inline MatrixQ inverse(const MatrixQ& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::NonSquare, "inverse of a non-square matrix");
  const size_t n = a.rows();
  std::vector<VectorFS> rows;
  std::vector<Slot> order;
  for (size_t j = 0; j < 2 * n; ++j) order.push_back(static_cast<Slot>(j));
  for (size_t i = 0; i < n; ++i) {
    VectorFS v;
    for (size_t j = 0; j < n; ++j) v.set(static_cast<Slot>(j), a(i, j));
    v.set(static_cast<Slot>(n + i), Scalar(1));
    rows.push_back(std::move(v));
  }
  auto red = rref(rows, order);
  if (red.size() != n || red.back().coords().begin()->first >= static_cast<Slot>(n))
    fail(ErrorCode::SingularBasis, "matrix is singular");
  MatrixQ inv(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv(i, j) = red[i][static_cast<Slot>(n + j)];
  return inv;
}

/// Applies a matrix acting on `slots` (identity elsewhere) to a vector.
inline VectorFS apply_block(const MatrixQ& g, const std::vector<Slot>& slots, const VectorFS& v) {
  std::map<Slot, size_t> pos;
  for (size_t i = 0; i < slots.size(); ++i) pos[slots[i]] = i;
  VectorFS out;
  for (const auto& [s, c] : v.coords()) {
    auto it = pos.find(s);
    if (it == pos.end()) {
      out.add(s, c);
      continue;
    }
    for (size_t r = 0; r < slots.size(); ++r) out.add(slots[r], g(r, it->second) * c);
  }
  return out;
}

}  // namespace genflag
