#pragma once

// Big cells C(F, E; L). A point is given by finite-rank maps Φ_b from F'_b to
// the span U_b of the class-b vectors of L. Γ is applied as the unipotent map
// (1 + Φ_p π_p) ∘ ... ∘ (1 + Φ_1 π_1), π_b the projection onto F'_b along
// span{l : label >= b}.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "genflag/tower.hpp"

namespace genflag {

struct CellMap {
  Label position;               // b
  std::vector<Slot> domain;     // slots of L with label < b
  std::vector<Slot> codomain;   // class-b slots of L
  MatrixQ matrix;               // codomain x domain, L coordinates
};

struct CellCoords {
  std::vector<CellMap> maps;  // nonzero maps only, increasing position
};

/// G''_k meets span{l : label > a_k} in dimension `dim` > 0.
struct NotInCell {
  Label position;
  size_t dim = 0;
};

struct CellResult {
  std::optional<CellCoords> coords;
  NotInCell certificate;
  explicit operator bool() const { return coords.has_value(); }
};

namespace detail {

inline void check_compatible(const GeneralizedFlagSpec& F, const BasisSpec& L) {
  check_basis(L);
  if (canonical(GeneralizedFlagSpec{L, F.coloring}) != canonical(F))
    fail(ErrorCode::TypeMismatch, "basis is not compatible with the reference flag");
}

// Coordinates of v in L as a vector keyed by slot.
inline VectorFS in_basis(const Frame& fr, const VectorFS& v, int64_t n) {
  VectorFS out;
  for (const auto& [s, c] : fr.coords_in_basis(v, n)) out.set(s, c);
  return out;
}

inline VectorFS restrict_to(const VectorFS& v, const std::vector<Slot>& slots) {
  VectorFS out;
  for (Slot s : slots) out.set(s, v[s]);
  return out;
}

}  // namespace detail

inline CellResult big_cell_coords(const GeneralizedFlagSpec& g, const BasisSpec& L, const GeneralizedFlagSpec& F) {
  detail::check_compatible(F, L);
  auto r = commensurable(F, g);
  if (!r) fail(ErrorCode::Incommensurable, r.refusal.detail);
  Frame fr{Layout::Linear, L, F.coloring, {}, {}};
  Frame gf = frame_of(g);
  const int64_t n = std::max({r.witness->level, fr.n_spec(), gf.n_spec()});
  auto classes = fr.classes(n);

  // u(l_i): the vector of G''_k equal to l_i plus higher classes.
  std::map<Slot, VectorFS> u;
  for (const auto& [a, slots] : classes) {
    std::vector<VectorFS> low, high, opp;
    std::vector<Slot> order;
    for (const auto& [b, sl] : classes)
      for (Slot s : sl) (b <= a ? low : high).push_back(VectorFS::unit(s));
    for (const auto& v : low) order.push_back(pivot_of(v));
    for (const auto& v : high) order.push_back(pivot_of(v)), opp.push_back(fr.basis.vec(pivot_of(v)));
    auto G = gf.below(r.witness->map(a), n, false);
    size_t d = intersection_dim(G, opp);
    if (d > 0) return {std::nullopt, NotInCell{a, d}};
    std::vector<VectorFS> coords;
    for (const auto& v : G) coords.push_back(detail::in_basis(fr, v, n));
    for (const auto& row : rref(coords, order)) {
      Slot p = *std::find_if(order.begin(), order.end(), [&](Slot s) { return !row[s].is_zero(); });
      if (fr.label(p) == a) u[p] = row;
    }
  }

  CellCoords out;
  for (const auto& [b, codomain] : classes) {
    std::vector<Slot> domain;
    for (const auto& [a, sl] : classes)
      if (a < b) domain.insert(domain.end(), sl.begin(), sl.end());
    if (domain.empty()) continue;
    std::vector<VectorFS> lower, target;
    for (Slot s : domain) {
      lower.push_back(detail::restrict_to(u[s], domain));
      target.push_back(detail::restrict_to(u[s], codomain));
    }
    MatrixQ q = column_matrix(target, codomain);
    bool zero = true;
    for (size_t i = 0; i < q.rows() && zero; ++i)
      for (size_t j = 0; j < q.cols() && zero; ++j) zero = q(i, j).is_zero();
    if (zero) continue;
    out.maps.push_back({b, domain, codomain, q * inverse(column_matrix(lower, domain))});
  }
  return {out, {}};
}

/// Γ as a matrix on L coordinates of the window slots (given in `slots`).
inline MatrixQ cell_gamma(const CellCoords& c, const std::vector<Slot>& slots) {
  std::map<Slot, size_t> at;
  for (size_t i = 0; i < slots.size(); ++i) at[slots[i]] = i;
  MatrixQ gamma = MatrixQ::identity(slots.size());
  for (const auto& m : c.maps) {
    MatrixQ step = MatrixQ::identity(slots.size());
    for (size_t r = 0; r < m.codomain.size(); ++r)
      for (size_t k = 0; k < m.domain.size(); ++k) step(at.at(m.codomain[r]), at.at(m.domain[k])) = m.matrix(r, k);
    gamma = step * gamma;
  }
  return gamma;
}

/// The flag Φ(F) in the presentation of F: basis Γ(l_i), same coloring.
inline GeneralizedFlagSpec cell_point(const CellCoords& c, const BasisSpec& L, const GeneralizedFlagSpec& F) {
  int64_t n = std::max<int64_t>({L.reach(), F.coloring.n0(), 1});
  for (const auto& m : c.maps) {
    n = std::max(n, *std::max_element(m.domain.begin(), m.domain.end()));
    n = std::max(n, *std::max_element(m.codomain.begin(), m.codomain.end()));
  }
  auto slots = window_slots(n, Layout::Linear);
  MatrixQ gamma = cell_gamma(c, slots);
  BasisSpec out;
  for (size_t k = 0; k < slots.size(); ++k) {
    VectorFS v;
    for (size_t i = 0; i < slots.size(); ++i)
      if (!gamma(i, k).is_zero()) v += gamma(i, k) * L.vec(slots[i]);
    out.replaced[slots[k]] = v;
  }
  return canonical(GeneralizedFlagSpec{drop_identity(out), F.coloring});
}

/// A basis L compatible with F whose big cell contains g. Builds the opposite
/// spaces O_k = span{l : label > a_k} from the top class down, keeping each
/// O_{k-1} transversal to both F_{k-1} and G_{k-1}.
inline BasisSpec find_covering_cell(const GeneralizedFlagSpec& g, const GeneralizedFlagSpec& F) {
  auto r = commensurable(F, g);
  if (!r) fail(ErrorCode::Incommensurable, r.refusal.detail);
  Frame ff = frame_of(F), gf = frame_of(g);
  const int64_t n = std::max({r.witness->level, ff.n_spec(), gf.n_spec()});
  auto classes = ff.classes(n);
  std::vector<Label> labs;
  for (const auto& [a, sl] : classes) labs.push_back(a);

  auto outside = [](std::vector<VectorFS> base, const VectorFS& v) { return !in_span(base, v); };
  auto with = [](std::vector<VectorFS> a, const std::vector<VectorFS>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  BasisSpec L;
  std::vector<VectorFS> O;
  for (size_t k = labs.size(); k-- > 0;) {
    auto Fk = ff.below(labs[k], n, false);
    std::vector<VectorFS> Fl = k ? ff.below(labs[k - 1], n, false) : std::vector<VectorFS>{};
    std::vector<VectorFS> Gl = k ? gf.below(r.witness->map(labs[k - 1]), n, false) : std::vector<VectorFS>{};
    std::vector<VectorFS> cands;
    for (Slot j = 1; j <= n; ++j)
      if (in_span(Fk, VectorFS::unit(j))) cands.push_back(VectorFS::unit(j));
    cands.insert(cands.end(), Fk.begin(), Fk.end());
    std::vector<VectorFS> U;
    while (U.size() < classes[labs[k]].size()) {
      auto A = with(Fl, O), B = with(Gl, O);
      std::optional<VectorFS> y, z, pick;
      for (const auto& v : cands) {
        bool a = outside(A, v), b = outside(B, v);
        if (a && b) {
          pick = v;
          break;
        }
        if (a && !y) y = v;
        if (b && !z) z = v;
      }
      if (!pick) {
        if (!y || !z) fail(ErrorCode::Incommensurable, "no transversal complement at " + labs[k].str());
        pick = *y + *z;  // y in B, z in A: the sum avoids both
      }
      U.push_back(*pick);
      O.push_back(*pick);
    }
    const auto& sl = classes[labs[k]];
    for (size_t j = 0; j < sl.size(); ++j) L.replaced[sl[j]] = U[j];
  }
  return drop_identity(L);
}

}  // namespace genflag
