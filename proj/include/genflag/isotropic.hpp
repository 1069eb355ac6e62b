#pragma once

// Forms of type B, C, D in standard slot coordinates, isotropic flag specs,
// the involution τ(a) = -a on positions, isotropic Gram–Schmidt and the
// isotropic tower.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "genflag/tower.hpp"

namespace genflag {

/// w(e_i, e^j) = δ_ij, w(e^i, e_i) = ε (ε = -1 for C), w(e_0, e_0) = 1 for B.
struct FormSpec {
  Layout kind = Layout::C;
  friend bool operator==(const FormSpec&, const FormSpec&) = default;
};

inline Scalar epsilon(const FormSpec& w) { return w.kind == Layout::C ? Scalar(-1) : Scalar(1); }

inline void check_form(const FormSpec& w) {
  if (w.kind == Layout::Linear) fail(ErrorCode::SemanticError, "a form needs kind B, C or D");
}

inline Scalar pairing(const FormSpec& w, Slot s) {
  if (s > 0) return Scalar(1);
  if (s < 0) return epsilon(w);
  return Scalar(1);
}

inline Scalar form_eval(const FormSpec& w, const VectorFS& u, const VectorFS& v) {
  Scalar out;
  for (const auto& [s, c] : u.coords()) {
    if (s == 0 && w.kind != Layout::B) continue;
    Scalar d = v[-s];
    if (!d.is_zero()) out += c * d * pairing(w, s);
  }
  return out;
}

/// Basis of span(gens)^⊥ ∩ V_n.
inline std::vector<VectorFS> perp_truncated(const std::vector<VectorFS>& gens, int64_t n, const FormSpec& w) {
  auto slots = window_slots(n, w.kind);
  std::vector<std::vector<Scalar>> rows;
  for (const auto& g : gens) {
    std::vector<Scalar> r(slots.size());
    for (size_t k = 0; k < slots.size(); ++k) r[k] = form_eval(w, g, VectorFS::unit(slots[k]));
    rows.push_back(r);
  }
  std::vector<VectorFS> out;
  if (rows.empty()) {
    for (Slot s : slots) out.push_back(VectorFS::unit(s));
    return out;
  }
  for (const auto& x : kernel(MatrixQ::from_rows(rows))) {
    VectorFS v;
    for (size_t k = 0; k < slots.size(); ++k) v.set(slots[k], x[k]);
    out.push_back(v);
  }
  return out;
}

struct IsotropicFlagSpec {
  FormSpec form;
  BasisSpec basis;  // slots in ℤ (type B) or ℤ \ {0}
  Coloring pos;     // label(l_i), i >= 1
  Coloring mirror;  // label(l^i) = label(l_{-i})
  Label zero{0, Scalar(0)};
  friend bool operator==(const IsotropicFlagSpec&, const IsotropicFlagSpec&) = default;

  Frame frame() const { return Frame{form.kind, basis, pos, mirror, zero}; }
};

/// Mirrored coloring: label(e^i) = -label(e_i).
inline IsotropicFlagSpec isotropic_spec(const FormSpec& w, const Coloring& pos, BasisSpec basis = {}) {
  return {w, std::move(basis), pos, negate(pos), Label{0, Scalar(0)}};
}

inline int64_t n_spec(const IsotropicFlagSpec& s) { return s.frame().n_spec(); }

inline Label tau(const Label& a) { return -a; }

struct IsoReport {
  bool ok = true;
  std::string reason;
  std::optional<Label> position;
  std::vector<VectorFS> f_tau;  // basis of F'_τ ∩ V_n
  bool fixed_point = false;     // (0,0) is a position
};

inline IsoReport validate_isotropic(const IsotropicFlagSpec& s, int64_t n) {
  IsoReport r;
  auto bad = [&](std::string why, std::optional<Label> at = std::nullopt) {
    r.ok = false;
    r.reason = std::move(why);
    r.position = at;
    return r;
  };
  if (s.form.kind == Layout::Linear) return bad("form kind must be B, C or D");
  Frame f = s.frame();
  if (n < f.n_spec()) return bad("level below n_spec");
  for (int64_t i = 1; i <= std::max({n, s.pos.n0(), s.mirror.n0()}) + 2; ++i)
    if (s.mirror.label(i) != -s.pos.label(i)) return bad("label(e^" + std::to_string(i) + ") is not -label(e_" + std::to_string(i) + ")", s.pos.label(i));
  if (canonical(s.mirror) != canonical(negate(s.pos))) return bad("mirror tail is not the negated tail");
  if (s.form.kind == Layout::B && s.zero != Label{0, Scalar(0)}) return bad("label(e_0) must be (0,0)", s.zero);
  try {
    check_basis(s.basis, s.form.kind);
  } catch (const Error& e) {
    return bad(e.what());
  }
  for (const auto& [a, slots] : f.classes(n)) {
    if (a == Label{0, Scalar(0)}) r.fixed_point = true;
    auto lhs = perp_truncated(f.below(a, n, true), n, s.form);
    if (!same_span(lhs, f.below(tau(a), n, false))) return bad("(F')^perp differs from tau(F)''", a);
  }
  r.f_tau = f.below(Label{0, Scalar(0)}, n, true);
  return r;
}

inline FiniteFlag truncate_isotropic(const IsotropicFlagSpec& s, int64_t n) { return truncate_frame(s.frame(), n); }

/// Inserts e_{n+1} at its label and e^{n+1} at the mirrored label.
inline FiniteFlag embed_step_isotropic(const FiniteFlag& f, const IsotropicFlagSpec& s) {
  Frame fr = s.frame();
  if (f.level < fr.n_spec()) fail(ErrorCode::LevelTooSmall, "embedding needs level >= n_spec");
  check_type(f, fr);
  Slot k = f.level + 1;
  FiniteFlag g = insert_slot(f, k, fr.label(k));
  g = insert_slot(g, -k, fr.label(-k));
  g.level = k;
  return g;
}

}  // namespace genflag

#include "genflag/gram_schmidt.hpp"
