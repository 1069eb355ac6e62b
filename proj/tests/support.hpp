#pragma once

// Seeded random generators shared by the unit and acceptance suites.

#include <algorithm>
#include <random>
#include <vector>

#include "genflag/isotropic.hpp"

namespace gentest {

using namespace genflag;

inline int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Scalar small_scalar(std::mt19937_64& rng, int range = 3) {
  static const int dens[] = {1, 1, 1, 2, 3};
  return Scalar(Integer(uniform(rng, -range, range)), Integer(dens[uniform(rng, 0, 4)]));
}

inline Scalar nonzero_scalar(std::mt19937_64& rng, int range = 3) {
  Scalar s;
  while (s.is_zero()) s = small_scalar(rng, range);
  return s;
}

inline VectorFS random_vector(std::mt19937_64& rng, Slot lo, Slot hi, int terms) {
  VectorFS v;
  for (int t = 0; t < terms; ++t) v.add(uniform(rng, static_cast<int>(lo), static_cast<int>(hi)), small_scalar(rng));
  return v;
}

inline Label random_label(std::mt19937_64& rng) {
  return {uniform(rng, 0, 1), Scalar(Integer(uniform(rng, -4, 8)), Integer(uniform(rng, 1, 2)))};
}

enum class TailKind { Any, Periodic, Constant };

inline TailRule random_tail(std::mt19937_64& rng, TailKind kind) {
  int pick = kind == TailKind::Any ? uniform(rng, 0, 4) : 1;
  if (pick == 0) return DenseInTier{uniform(rng, 0, 1), uniform(rng, 0, 1) == 1};
  int64_t m = uniform(rng, 1, 3);
  ResidueAffine ra{m, {}};
  static const Scalar slopes[] = {Scalar(1), Scalar(-1), Scalar(0), Scalar(2), Scalar(1, 2), Scalar(0)};
  for (int64_t r = 0; r < m; ++r) {
    Scalar a = kind == TailKind::Constant ? Scalar(0) : slopes[uniform(rng, 0, 5)];
    ra.pieces.push_back({uniform(rng, 0, 1), a, Scalar(Integer(uniform(rng, -3, 6)), Integer(uniform(rng, 1, 2)))});
  }
  return ra;
}

inline Coloring random_coloring(std::mt19937_64& rng, int max_window, TailKind kind = TailKind::Any) {
  for (;;) {
    Coloring c;
    int w = uniform(rng, 0, max_window);
    for (int i = 0; i < w; ++i) c.window.push_back(random_label(rng));
    c.tail = random_tail(rng, kind);
    try {
      return canonical(c);
    } catch (const Error&) {
    }
  }
}

inline BasisSpec random_basis(std::mt19937_64& rng, int64_t hi, int max_replace = 2) {
  for (;;) {
    BasisSpec b;
    int k = uniform(rng, 0, max_replace);
    for (int j = 0; j < k; ++j) {
      Slot s = uniform(rng, 1, static_cast<int>(hi));
      b.replaced[s] = VectorFS::unit(s, nonzero_scalar(rng)) + random_vector(rng, 1, hi, uniform(rng, 0, 2));
    }
    try {
      if (!check_basis(b).is_zero()) return b;
    } catch (const Error&) {
    }
  }
}

inline GeneralizedFlagSpec random_spec(std::mt19937_64& rng, int max_window = 6, TailKind kind = TailKind::Any) {
  auto c = random_coloring(rng, max_window, kind);
  auto b = random_basis(rng, std::max<int64_t>(c.n0(), 1) + 2);
  return canonical(GeneralizedFlagSpec{b, c});
}

// Same tail, window labels permuted, fresh basis: commensurable with s.
inline GeneralizedFlagSpec shuffled_partner(std::mt19937_64& rng, const GeneralizedFlagSpec& s) {
  Coloring c = s.coloring;
  std::shuffle(c.window.begin(), c.window.end(), rng);
  for (;;) {
    try {
      return canonical(GeneralizedFlagSpec{random_basis(rng, std::max<int64_t>(c.n0(), 1) + 2), c});
    } catch (const Error&) {
    }
  }
}

// Moves one window-only label slightly without crossing any other label.
inline GeneralizedFlagSpec nudge_window_only(std::mt19937_64& rng, const GeneralizedFlagSpec& s) {
  const Coloring& c = s.coloring;
  int64_t n = std::max<int64_t>(n_spec(s), 1);
  std::vector<Label> labs(c.window.begin(), c.window.end());
  std::shuffle(labs.begin(), labs.end(), rng);
  for (const auto& a : labs) {
    if (tail_hits(c.tail, LabelInterval::point(a), c.n0())) continue;
    for (Scalar d : {Scalar(1, 7), Scalar(-1, 7)}) {
      Label b{a.tier, a.offset + d};
      LabelInterval iv = d.sign() > 0 ? LabelInterval{a, true, b, false} : LabelInterval{b, false, a, true};
      bool clear = !tail_hits(c.tail, iv, n);
      for (int64_t i = 1; i <= n && clear; ++i) clear = !iv.contains(c.label(i));
      if (!clear) continue;
      GeneralizedFlagSpec t = s;
      for (auto& l : t.coloring.window)
        if (l == a) l = b;
      return canonical(t);
    }
  }
  return s;
}

// Product of elementary isometries of the level-n window (det 1).
inline MatrixQ random_isometry(std::mt19937_64& rng, const FormSpec& w, int64_t n, int steps = 4) {
  auto slots = window_slots(n, w.kind);
  auto nonzero = [&] {
    Slot s = 0;
    while (s == 0) s = slots[static_cast<size_t>(uniform(rng, 0, static_cast<int>(slots.size()) - 1))];
    return s;
  };
  auto as_matrix = [&](auto&& map) {
    MatrixQ m(slots.size(), slots.size());
    for (size_t c = 0; c < slots.size(); ++c) {
      VectorFS img = map(VectorFS::unit(slots[c]));
      for (size_t r = 0; r < slots.size(); ++r) m(r, c) = img[slots[r]];
    }
    return m;
  };
  MatrixQ out = MatrixQ::identity(slots.size());
  for (int k = 0; k < steps; ++k) {
    int pick = uniform(rng, 0, 2);
    Scalar c = nonzero_scalar(rng, 2);
    if (pick == 0) {
      // Hyperbolic scaling e_i -> c e_i, e^i -> e^i / c.
      Slot i = std::abs(nonzero());
      out = as_matrix([&](const VectorFS& x) {
              VectorFS y = x;
              y.set(i, c * x[i]);
              y.set(-i, x[-i] / c);
              return y;
            }) * out;
    } else if (w.kind == Layout::C) {
      VectorFS u = VectorFS::unit(nonzero()) + small_scalar(rng) * VectorFS::unit(nonzero());
      out = as_matrix([&](const VectorFS& x) { return x + (c * form_eval(w, u, x)) * u; }) * out;
    } else {
      // Eichler map x -> x + w(x,u) v - w(x,v) u - w(v,v)/2 w(x,u) u, u isotropic, v ⊥ u.
      Slot i = nonzero(), j = nonzero();
      bool use_zero = w.kind == Layout::B && pick == 2;
      if (!use_zero && (std::abs(i) == std::abs(j))) continue;
      VectorFS u = VectorFS::unit(i), v = c * VectorFS::unit(use_zero ? 0 : j);
      Scalar vv = form_eval(w, v, v);
      out = as_matrix([&](const VectorFS& x) {
              return x + form_eval(w, x, u) * v - form_eval(w, x, v) * u - (vv / Scalar(2) * form_eval(w, x, u)) * u;
            }) * out;
    }
  }
  return out;
}

inline BasisSpec basis_from_matrix(const MatrixQ& m, const std::vector<Slot>& slots) {
  BasisSpec b;
  for (size_t c = 0; c < slots.size(); ++c) {
    VectorFS v;
    for (size_t r = 0; r < slots.size(); ++r) v.set(slots[r], m(r, c));
    b.replaced[slots[c]] = v;
  }
  return drop_identity(b);
}

inline IsotropicFlagSpec random_isotropic_spec(std::mt19937_64& rng, const FormSpec& w, int max_window = 4,
                                               TailKind kind = TailKind::Any) {
  auto pos = random_coloring(rng, max_window, kind);
  int64_t n = std::max<int64_t>(pos.n0(), 1) + uniform(rng, 0, 2);
  auto slots = window_slots(n, w.kind);
  return isotropic_spec(w, pos, basis_from_matrix(random_isometry(rng, w, n), slots));
}

}  // namespace gentest
