#pragma once

// A frame is a basis L together with a labeling of its slots. Linear flags
// label slots 1, 2, ...; isotropic flags label e_i (+i), e^i (-i) and e_0.
// Everything at a finite level n is computed from the slots of V_n: once n
// covers the window and the basis modification, F ∩ V_n is spanned by the
// l_s with s in V_n and the right labels.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "genflag/basis.hpp"
#include "genflag/exactlin.hpp"
#include "genflag/labels.hpp"

namespace genflag {

struct Frame {
  Layout layout = Layout::Linear;
  BasisSpec basis;
  Coloring pos;     // label(e_i), i >= 1
  Coloring mirror;  // label(e^i), isotropic layouts only
  Label zero;       // label(e_0), type B only

  Label label(Slot s) const {
    if (s > 0) return pos.label(s);
    if (layout == Layout::Linear) fail(ErrorCode::SemanticError, "linear frames have no slot " + std::to_string(s));
    if (s < 0) return mirror.label(-s);
    if (layout != Layout::B) fail(ErrorCode::SemanticError, "slot 0 exists only for type B");
    return zero;
  }

  int64_t n_spec() const {
    int64_t n = std::max<int64_t>(pos.n0(), basis.reach());
    if (layout != Layout::Linear) n = std::max(n, mirror.n0());
    return std::max<int64_t>(n, 1);
  }

  std::vector<Slot> slots(int64_t n) const { return window_slots(n, layout); }

  /// Window slots grouped by label, in increasing label order.
  std::map<Label, std::vector<Slot>> classes(int64_t n) const {
    std::map<Label, std::vector<Slot>> out;
    for (Slot s : slots(n)) out[label(s)].push_back(s);
    return out;
  }

  /// Basis of F'_a ∩ V_n (strict) or F''_a ∩ V_n.
  std::vector<VectorFS> below(const Label& a, int64_t n, bool strict) const {
    std::vector<VectorFS> out;
    for (Slot s : slots(n)) {
      Label l = label(s);
      if (strict ? l < a : l <= a) out.push_back(basis.vec(s));
    }
    return out;
  }

  /// Coordinates of v in the basis l_s, s in V_n.
  std::map<Slot, Scalar> coords_in_basis(const VectorFS& v, int64_t n) const {
    if (!supported_in(v, n, layout)) fail(ErrorCode::LevelTooSmall, "vector escapes the level window");
    auto sl = slots(n);
    std::vector<VectorFS> ls;
    for (Slot s : sl) ls.push_back(basis.vec(s));
    auto c = coordinates(ls, v);
    if (!c) fail(ErrorCode::SingularBasis, "basis does not span the window");
    std::map<Slot, Scalar> out;
    for (size_t k = 0; k < sl.size(); ++k)
      if (!(*c)[k].is_zero()) out[sl[k]] = (*c)[k];
    return out;
  }

  /// The position a with v in F''_a \ F'_a.
  Label position_of(const VectorFS& v, int64_t n) const {
    if (v.is_zero()) fail(ErrorCode::ZeroVector, "the zero vector has no position");
    auto c = coords_in_basis(v, n);
    Label best = label(c.begin()->first);
    for (const auto& [s, x] : c) best = std::max(best, label(s));
    return best;
  }
};

/// Truncation at level n: the distinct F''_a ∩ V_n for the visible positions a.
struct FiniteFlag {
  int64_t level = 0;
  Layout layout = Layout::Linear;
  std::vector<Label> labels;                 // visible positions, increasing
  std::vector<std::vector<VectorFS>> steps;  // reduced echelon basis of each step

  std::vector<size_t> dims() const {
    std::vector<size_t> d{0};
    for (const auto& s : steps) d.push_back(s.size());
    return d;
  }

  friend bool operator==(const FiniteFlag&, const FiniteFlag&) = default;
};

inline FiniteFlag truncate_frame(const Frame& f, int64_t n) {
  if (n < f.n_spec()) fail(ErrorCode::LevelTooSmall, "level " + std::to_string(n) + " is below n_spec " +
                                                          std::to_string(f.n_spec()));
  FiniteFlag out{n, f.layout, {}, {}};
  std::vector<VectorFS> acc;
  for (const auto& [lab, slots] : f.classes(n)) {
    for (Slot s : slots) acc.push_back(f.basis.vec(s));
    out.labels.push_back(lab);
    out.steps.push_back(rref(acc));
  }
  return out;
}

/// Pivot (first slot) of a reduced echelon row.
inline Slot pivot_of(const VectorFS& v) { return v.coords().begin()->first; }

/// Rows of rref(upper) whose pivots are not pivots of rref(lower): a
/// complement of lower inside upper.
inline std::vector<VectorFS> new_pivot_rows(const std::vector<VectorFS>& lower_rref,
                                            const std::vector<VectorFS>& upper_rref) {
  std::vector<Slot> old;
  for (const auto& r : lower_rref) old.push_back(pivot_of(r));
  std::vector<VectorFS> out;
  for (const auto& r : upper_rref)
    if (std::find(old.begin(), old.end(), pivot_of(r)) == old.end()) out.push_back(r);
  return out;
}

/// A basis adapted to the given steps: class slots (ascending) of each step
/// receive the new-pivot rows of that step.
inline BasisSpec basis_from_steps(const std::vector<std::vector<VectorFS>>& steps,
                                  const std::vector<std::vector<Slot>>& class_slots) {
  BasisSpec b;
  std::vector<VectorFS> prev;
  for (size_t k = 0; k < steps.size(); ++k) {
    auto fresh = new_pivot_rows(prev, steps[k]);
    auto slots = class_slots[k];
    std::sort(slots.begin(), slots.end());
    if (fresh.size() != slots.size()) fail(ErrorCode::TypeMismatch, "step dimension does not match its class");
    for (size_t j = 0; j < slots.size(); ++j) b.replaced[slots[j]] = fresh[j];
    prev = steps[k];
  }
  return drop_identity(b);
}

/// The canonical basis of the flag presented by the frame.
inline BasisSpec canonical_basis(const Frame& f) {
  int64_t n = f.n_spec();
  auto t = truncate_frame(f, n);
  auto cls = f.classes(n);
  std::vector<std::vector<Slot>> slots;
  for (const auto& [lab, s] : cls) slots.push_back(s);
  return basis_from_steps(t.steps, slots);
}

inline std::string finite_flag_str(const FiniteFlag& f) {
  std::string s = "level " + std::to_string(f.level) + ":";
  for (size_t k = 0; k < f.steps.size(); ++k) s += " " + f.labels[k].str() + "[" + std::to_string(f.steps[k].size()) + "]";
  return s;
}

}  // namespace genflag
