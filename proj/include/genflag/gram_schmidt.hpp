#pragma once

// Isotropic Gram–Schmidt: e = g - Σ (w(e_i, g) e^i + w(g, e^i) e_i), the
// partner taken from the class of τ(position of g) and corrected the same way.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "genflag/isotropic.hpp"

namespace genflag {

struct IsoPairs {
  std::optional<VectorFS> e0;  // type B only
  std::vector<VectorFS> e, f;  // w(e_k, f_k) = 1
};

inline std::optional<Scalar> rational_sqrt(const Scalar& x) {
  if (x.sign() < 0) return std::nullopt;
  Integer p = x.num(), q = x.den();
  if (!mpz_perfect_square_p(p.get_mpz_t()) || !mpz_perfect_square_p(q.get_mpz_t())) return std::nullopt;
  Integer rp, rq;
  mpz_sqrt(rp.get_mpz_t(), p.get_mpz_t());
  mpz_sqrt(rq.get_mpz_t(), q.get_mpz_t());
  return Scalar(rp, rq);
}

namespace detail {

inline int64_t gs_level(const IsotropicFlagSpec& s, const std::vector<VectorFS>& gs) {
  int64_t n = n_spec(s);
  for (const auto& g : gs)
    if (!g.is_zero()) n = std::max<int64_t>(n, g.max_abs_slot());
  return n;
}

}  // namespace detail

/// For type B the first element of gs is g_0 (the self-paired vector).
inline IsoPairs isotropic_gram_schmidt(const std::vector<VectorFS>& gs, const IsotropicFlagSpec& s) {
  const FormSpec& w = s.form;
  check_form(w);
  Frame fr = s.frame();
  const int64_t n = detail::gs_level(s, gs);
  const bool symmetric = w.kind != Layout::C;
  IsoPairs out;
  auto correct = [&](VectorFS v) {
    VectorFS c = v;
    for (size_t i = 0; i < out.e.size(); ++i) {
      c -= form_eval(w, out.e[i], v) * out.f[i];
      c -= form_eval(w, v, out.f[i]) * out.e[i];
    }
    if (out.e0) c -= form_eval(w, *out.e0, v) * *out.e0;
    return c;
  };
  size_t start = 0;
  if (w.kind == Layout::B) {
    if (gs.empty()) return out;
    Scalar c = form_eval(w, gs[0], gs[0]);
    if (c.is_zero()) fail(ErrorCode::DegeneratePrefix, "g_0 is isotropic");
    auto r = rational_sqrt(c);
    if (!r) fail(ErrorCode::FieldObstruction, "w(g_0, g_0) = " + c.str() + " is not a square in Q");
    out.e0 = (Scalar(1) / *r) * gs[0];
    start = 1;
  }
  for (size_t k = start; k < gs.size(); ++k) {
    VectorFS e = correct(gs[k]);
    if (e.is_zero()) fail(ErrorCode::DegeneratePrefix, "g_" + std::to_string(k + 1) + " lies in the span of earlier pairs");
    if (symmetric && !form_eval(w, e, e).is_zero())
      fail(ErrorCode::FieldObstruction, "g_" + std::to_string(k + 1) + " is not isotropic after correction");
    Label a = fr.position_of(gs[k], n);
    auto classes = fr.classes(n);
    if (a == Label{0, Scalar(0)} && w.kind == Layout::C && classes[a].size() % 2 == 1)
      fail(ErrorCode::DegeneratePrefix, "odd fixed block for a skew form");
    std::vector<Slot> cands = classes[tau(a)];
    std::sort(cands.begin(), cands.end(), [](Slot x, Slot y) {
      return std::make_pair(x < 0 ? -x : x, x) < std::make_pair(y < 0 ? -y : y, y);
    });
    std::optional<VectorFS> f;
    for (Slot t : cands) {
      VectorFS g = fr.basis.vec(t);
      if (form_eval(w, e, g).is_zero()) continue;
      f = correct(g);
      break;
    }
    if (!f) fail(ErrorCode::DegeneratePrefix, "no partner for g_" + std::to_string(k + 1) + " in class " + tau(a).str());
    *f *= Scalar(1) / form_eval(w, e, *f);
    if (symmetric) *f -= (form_eval(w, *f, *f) / Scalar(2)) * e;
    out.e.push_back(e);
    out.f.push_back(*f);
  }
  return out;
}

/// An isotropic basis compatible with s: lower-half slots (label < (0,0)) in
/// increasing label order, then the positive slots of the fixed class.
inline BasisSpec isotropic_basis(const IsotropicFlagSpec& s) {
  Frame fr = s.frame();
  const int64_t n = fr.n_spec();
  const Label mid{0, Scalar(0)};
  std::vector<Slot> order;
  for (const auto& [a, slots] : fr.classes(n))
    for (Slot t : slots)
      if (a < mid || (a == mid && t > 0)) order.push_back(t);
  std::vector<VectorFS> gs;
  if (s.form.kind == Layout::B) gs.push_back(fr.basis.vec(0));
  for (Slot t : order) gs.push_back(fr.basis.vec(t));
  IsoPairs p = isotropic_gram_schmidt(gs, s);
  BasisSpec out;
  if (p.e0) out.replaced[0] = *p.e0;
  for (size_t k = 0; k < order.size(); ++k) {
    Slot t = order[k];
    out.replaced[t] = p.e[k];
    out.replaced[-t] = t > 0 ? p.f[k] : epsilon(s.form) * p.f[k];
  }
  return drop_identity(out);
}

/// g in the isometry group with det 1 carrying s1 to s2 (same coloring).
inline GroupElement isotropic_mapping_element(const IsotropicFlagSpec& s1, const IsotropicFlagSpec& s2) {
  if (s1.form != s2.form || canonical(s1.pos) != canonical(s2.pos) || canonical(s1.mirror) != canonical(s2.mirror) ||
      s1.zero != s2.zero)
    fail(ErrorCode::Incommensurable, "isotropic specs with different colorings");
  const Layout kind = s1.form.kind;
  BasisSpec b1 = isotropic_basis(s1), b2 = isotropic_basis(s2);
  int64_t n = std::max({n_spec(s1), n_spec(s2), b1.reach(), b2.reach()});
  auto slots = window_slots(n, kind);
  std::vector<VectorFS> src, dst;
  for (Slot t : slots) src.push_back(b1.vec(t)), dst.push_back(b2.vec(t));
  auto column = [&](Slot t) { return static_cast<size_t>(std::find(slots.begin(), slots.end(), t) - slots.begin()); };
  if (det(column_matrix(dst, slots)) != det(column_matrix(src, slots))) {
    if (kind == Layout::B) {
      dst[column(0)] *= Scalar(-1);
    } else {
      // Swap l_i and l^i inside the fixed class (kind D).
      int64_t i = 1;
      const Label mid{0, Scalar(0)};
      while (i <= n + 16 && s1.pos.label(i) != mid) ++i;
      if (i > n + 16) fail(ErrorCode::Incommensurable, "the flags lie in different components (det -1)");
      if (i > n) {
        n = i;
        slots = window_slots(n, kind);
        src.clear(), dst.clear();
        for (Slot t : slots) src.push_back(b1.vec(t)), dst.push_back(b2.vec(t));
      }
      std::swap(dst[column(i)], dst[column(-i)]);
    }
  }
  MatrixQ m1 = column_matrix(src, slots), m2 = column_matrix(dst, slots);
  return {kind, n, m2 * inverse(m1)};
}

}  // namespace genflag
