#pragma once

// Bases L of V that differ from E in finitely many vectors.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "genflag/error.hpp"
#include "genflag/exactlin.hpp"

namespace genflag {

struct BasisSpec {
  std::map<Slot, VectorFS> replaced;  // l_s for s in S; l_s = e_s elsewhere

  VectorFS vec(Slot s) const {
    auto it = replaced.find(s);
    return it == replaced.end() ? VectorFS::unit(s) : it->second;
  }

  bool trivial() const { return replaced.empty(); }

  /// S together with every slot in a replacement's support.
  std::vector<Slot> touched() const {
    std::set<Slot> t;
    for (const auto& [s, v] : replaced) {
      t.insert(s);
      for (const auto& [k, c] : v.coords()) t.insert(k);
    }
    return {t.begin(), t.end()};
  }

  /// Largest |slot| touched by the modification (0 if none).
  int64_t reach() const {
    int64_t m = 0;
    for (Slot s : touched()) m = std::max<int64_t>(m, s < 0 ? -s : s);
    return m;
  }

  /// Determinant of the touched block: columns l_s, rows e_s, s in touched().
  Scalar block_det() const {
    auto t = touched();
    std::vector<VectorFS> cols;
    for (Slot s : t) cols.push_back(vec(s));
    return det(column_matrix(cols, t));
  }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

inline void check_slots(const BasisSpec& b, Layout layout) {
  for (Slot s : b.touched()) {
    bool ok = layout == Layout::Linear ? s >= 1 : (layout == Layout::B || s != 0);
    if (!ok) fail(ErrorCode::SemanticError, "slot " + std::to_string(s) + " is not a basis slot here");
  }
}

/// Throws SingularBasis unless the family is a basis; returns the block determinant.
inline Scalar check_basis(const BasisSpec& b, Layout layout = Layout::Linear) {
  check_slots(b, layout);
  for (const auto& [s, v] : b.replaced)
    if (v.is_zero()) fail(ErrorCode::SingularBasis, "replacement for slot " + std::to_string(s) + " is zero");
  Scalar d = b.block_det();
  if (d.is_zero()) fail(ErrorCode::SingularBasis, "replacement block is singular");
  return d;
}

/// Drops replacements that equal the unit vector they replace.
inline BasisSpec drop_identity(BasisSpec b) {
  for (auto it = b.replaced.begin(); it != b.replaced.end();) {
    if (it->second == VectorFS::unit(it->first))
      it = b.replaced.erase(it);
    else
      ++it;
  }
  return b;
}

}  // namespace genflag
