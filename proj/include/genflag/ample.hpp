#pragma once

// Very ampleness (strictly increasing weights), projectivity, a strictly
// increasing witness for flags, and the transition determinants det_{L,M}.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "genflag/picard.hpp"

namespace genflag {

namespace detail {

inline Integer lcm_int(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

inline std::vector<const Coloring*> colorings_of(const PicBase& b) {
  if (const auto* s = std::get_if<GeneralizedFlagSpec>(&b)) return {&s->coloring};
  const auto& iso = std::get<IsotropicFlagSpec>(b);
  return {&iso.pos, &iso.mirror};
}

inline std::vector<Label> extra_labels(const PicBase& b) {
  if (const auto* iso = std::get_if<IsotropicFlagSpec>(&b))
    if (iso->form.kind == Layout::B) return {iso->zero};
  return {};
}

inline bool base_is_flag(const PicBase& b) { return embeds_in_integers(tier_profiles(colorings_of(b), extra_labels(b))); }

/// Smallest tail index > n0 in residue class r.
inline int64_t first_tail_index(const Coloring& c, int64_t r, int64_t m) {
  int64_t i = c.n0() + 1;
  while (i % m != r) ++i;
  return i;
}

/// Index i with label(i) = a, if any (window first, then the tail).
inline std::optional<int64_t> index_of(const Coloring& c, const Label& a) {
  for (int64_t i = 1; i <= c.n0(); ++i)
    if (c.label(i) == a) return i;
  if (const auto* ra = std::get_if<ResidueAffine>(&c.tail)) {
    for (int64_t r = 0; r < ra->modulus; ++r) {
      const auto& p = ra->pieces[static_cast<size_t>(r)];
      if (p.tier != a.tier) continue;
      if (p.a.is_zero()) {
        if (p.b == a.offset) return first_tail_index(c, r, ra->modulus);
        continue;
      }
      Scalar x = (a.offset - p.b) / p.a;
      if (x.den() == 1 && x.num() > c.n0() && mod_nonneg(x.num(), Integer(static_cast<long>(ra->modulus))) == r &&
          x.num().fits_slong_p())
        return x.num().get_si();
    }
    return std::nullopt;
  }
  const auto& d = std::get<DenseInTier>(c.tail);
  if (a.tier != d.tier || a.offset.is_zero() || (a.offset.sign() < 0) != d.reversed) return std::nullopt;
  Integer k = cw_index(d.reversed ? -a.offset : a.offset);
  if (k <= c.n0() || !k.fits_slong_p()) return std::nullopt;
  return k.get_si();
}

/// Level past which the weights repeat their pattern: two tail periods,
/// stretched by the slopes so every gap between two pieces occurs.
inline int64_t ample_check_level(const PicElement& p) {
  Integer nums(1), dens(1);
  int64_t m = 1, n = n_spec(p.base);
  for (const Coloring* c : colorings_of(p.base)) {
    n = std::max(n, c->n0());
    if (const auto* ra = std::get_if<ResidueAffine>(&c->tail)) {
      m = std::lcm(m, ra->modulus);
      for (const auto& pc : ra->pieces) {
        if (pc.a.is_zero()) continue;
        nums = lcm_int(nums, abs(pc.a.num()));
        dens = lcm_int(dens, pc.a.den());
      }
    }
    for (const auto& [a, _] : p.exceptions)
      if (auto i = index_of(*c, a)) n = std::max(n, *i);
  }
  Integer span = Integer(static_cast<long>(m)) * nums * dens;
  if (span > 5000) fail(ErrorCode::Unsupported, "tail periods too long for the very-ampleness check");
  return n + 4 * span.get_si() + 2 * m + 2;
}

}  // namespace detail

/// Whether F' -> m_{F'} is strictly increasing on all positions. Isotropic
/// elements are read as μ(a) on a < (0,0), 0 at (0,0) and -μ(τ(a)) above.
inline bool is_very_ample(const PicElement& p) {
  validate_pic(p);
  if (!detail::base_is_flag(p.base)) return false;
  const bool iso = is_isotropic(p.base);
  // Asymptotics: along each infinite piece the weight must follow the label
  // with a positive rate u/a, shared by the pieces of a tier and direction.
  std::map<std::pair<int64_t, int>, Scalar> rate;
  auto cols = detail::colorings_of(p.base);
  for (size_t c = 0; c < cols.size(); ++c) {
    const auto* ra = std::get_if<ResidueAffine>(&cols[c]->tail);
    if (!ra) continue;
    const auto& rules = c == 0 ? p.rules : p.mirror_rules;
    for (size_t r = 0; r < ra->pieces.size(); ++r) {
      const auto& pc = ra->pieces[r];
      if (pc.a.is_zero()) continue;
      if (iso && (pc.tier > 0 || (pc.tier == 0 && pc.a.sign() > 0))) continue;  // eventually above (0,0)
      Scalar lambda = Scalar(rules[r].u) / pc.a;
      if (lambda.sign() <= 0) return false;
      auto [it, fresh] = rate.emplace(std::make_pair(pc.tier, pc.a.sign()), lambda);
      if (!fresh && it->second != lambda) return false;
    }
  }
  const int64_t n = detail::ample_check_level(p);
  auto x = restrict_pic(p, n);
  return std::all_of(x.begin(), x.end(), [](const Integer& c) { return c > 0; });
}

inline bool is_projective(const GeneralizedFlagSpec& s) { return is_flag(s); }
inline bool is_projective(const IsotropicFlagSpec& s) { return detail::base_is_flag(PicBase{s}); }

namespace detail {

/// A strictly increasing integer function on the positions of a flag:
/// λ·offset + S_t on tiers with infinite pieces, consecutive integers on the
/// finite tiers.
struct IncreasingMap {
  Integer lambda;
  std::map<int64_t, Integer> shift;
  std::map<Label, Integer> finite;

  Integer operator()(const Label& a) const {
    if (auto it = shift.find(a.tier); it != shift.end()) return (Scalar(lambda) * a.offset).num() + it->second;
    return finite.at(a);
  }
};

inline IncreasingMap increasing_map(const PicBase& b) {
  if (!base_is_flag(b)) fail(ErrorCode::Unsupported, "no strictly increasing weights on a non-flag");
  auto cols = colorings_of(b);
  IncreasingMap out;
  Integer dens(1);
  std::map<int64_t, std::set<Label>> finite_part;  // per tier
  std::map<int64_t, std::pair<bool, bool>> dirs;    // tier -> (down, up)
  for (const auto& l : extra_labels(b)) finite_part[l.tier].insert(l), dens = lcm_int(dens, l.offset.den());
  for (const Coloring* c : cols) {
    for (const auto& l : c->window) finite_part[l.tier].insert(l), dens = lcm_int(dens, l.offset.den());
    const auto& ra = std::get<ResidueAffine>(c->tail);
    for (int64_t r = 0; r < ra.modulus; ++r) {
      const auto& pc = ra.pieces[static_cast<size_t>(r)];
      dens = lcm_int(lcm_int(dens, pc.a.den()), pc.b.den());
      finite_part[pc.tier].insert(tail_label(c->tail, first_tail_index(*c, r, ra.modulus)));
      if (pc.a.sign() < 0) dirs[pc.tier].first = true;
      if (pc.a.sign() > 0) dirs[pc.tier].second = true;
    }
  }
  out.lambda = dens;
  Integer running(0);
  for (const auto& [t, labels] : finite_part) {
    auto [down, up] = dirs[t];
    if (!down && !up) {
      for (const auto& l : labels) out.finite[l] = ++running;
      continue;
    }
    Integer lo = (Scalar(dens) * labels.begin()->offset).num(), hi = (Scalar(dens) * labels.rbegin()->offset).num();
    Integer s = down ? Integer(0) : Integer(running + 1 - lo);
    out.shift[t] = s;
    running = hi + s;  // only meaningful when the tier is bounded above
  }
  return out;
}

}  // namespace detail

/// A very ample element on a flag (type A) or isotropic flag.
inline PicElement very_ample_witness(const PicBase& b) {
  auto c = detail::increasing_map(b);
  PicElement p{b, {}, {}, {}};
  const bool iso = is_isotropic(b);
  auto mu = [&](const Label& a) -> Integer { return iso ? Integer(c(a) - c(tau(a))) : c(a); };
  auto cols = detail::colorings_of(b);
  for (size_t k = 0; k < cols.size(); ++k) {
    const auto& ra = std::get<ResidueAffine>(cols[k]->tail);
    auto& rules = k == 0 ? p.rules : p.mirror_rules;
    for (const auto& pc : ra.pieces) {
      if (pc.a.is_zero()) {
        Label l{pc.tier, pc.b};
        rules.push_back({Integer(0), iso && l >= Label{0, Scalar(0)} ? Integer(0) : mu(l)});
        continue;
      }
      // μ at index i is affine in i: evaluate at the two labels for i = 0, 1.
      Label l0{pc.tier, pc.b}, l1{pc.tier, pc.a + pc.b};
      Integer v = mu(l0);
      rules.push_back({Integer(mu(l1) - v), v});
    }
    for (const auto& l : cols[k]->window)
      if (!iso || l < Label{0, Scalar(0)}) p.exceptions[l] = mu(l);
  }
  return p;
}

/// det of the map induced by g_{L,M} (l_i -> m_i) on (F''_a ∩ V_n)/(F'_a ∩ V_n).
inline Scalar transition_det(const BasisSpec& L, const BasisSpec& M, const Label& a, int64_t n, const Frame& ref) {
  Frame fl = ref, fm = ref;
  fl.basis = L;
  fm.basis = M;
  if (n < std::max({fl.n_spec(), fm.n_spec()})) fail(ErrorCode::LevelTooSmall, "level does not cover the modifications");
  auto classes = fl.classes(n);
  auto it = classes.find(a);
  if (it == classes.end()) fail(ErrorCode::PositionInvisible, "position " + a.str() + " is not visible at level " + std::to_string(n));
  const auto& slots = it->second;
  MatrixQ t(slots.size(), slots.size());
  for (size_t j = 0; j < slots.size(); ++j) {
    auto c = fl.coords_in_basis(M.vec(slots[j]), n);
    for (const auto& [s, x] : c) {
      Label l = fl.label(s);
      if (a < l) fail(ErrorCode::TypeMismatch, "M is not compatible with the flag at " + a.str());
      if (l == a) t(static_cast<size_t>(std::find(slots.begin(), slots.end(), s) - slots.begin()), j) = x;
    }
  }
  return det(t);
}

inline Scalar transition_det(const BasisSpec& L, const BasisSpec& M, const Label& a, int64_t n, const GeneralizedFlagSpec& s) {
  return transition_det(L, M, a, n, frame_of(s));
}

inline Scalar transition_det(const BasisSpec& L, const BasisSpec& M, const Label& a, int64_t n, const IsotropicFlagSpec& s) {
  return transition_det(L, M, a, n, s.frame());
}

}  // namespace genflag
