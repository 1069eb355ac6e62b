#pragma once

// Picard lattices: integer weights on positions, the restriction maps φ_n to
// the finite flag varieties and a brute-force kernel check.
//
// Level-n coordinates for positions a_1 < ... < a_s visible at level n:
//   type A:      x_k = m(a_{k+1}) - m(a_k), k = 1..s-1 (the diagonal maps to 0)
//   isotropic:   positions a_1 < ... < a_k below (0,0), x_j = m(a_{j+1}) - m(a_j)
//                and x_k = -m(a_k).
// An element is very ample at level n iff every coordinate is positive.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "genflag/isotropic.hpp"

namespace genflag {

/// m(label(i)) = u*i + v for tail indices i in the rule's residue class.
struct WeightRule {
  Integer u, v;
  friend bool operator==(const WeightRule&, const WeightRule&) = default;
};

using PicBase = std::variant<GeneralizedFlagSpec, IsotropicFlagSpec>;

struct PicElement {
  PicBase base;
  std::map<Label, Integer> exceptions;   // take precedence over the rules
  std::vector<WeightRule> rules;         // one per tail piece of the coloring
  std::vector<WeightRule> mirror_rules;  // isotropic only: one per piece of the mirror coloring
  friend bool operator==(const PicElement&, const PicElement&) = default;
};

inline bool is_isotropic(const PicBase& b) { return std::holds_alternative<IsotropicFlagSpec>(b); }

inline Frame frame_of(const PicBase& b) {
  if (const auto* s = std::get_if<GeneralizedFlagSpec>(&b)) return frame_of(*s);
  return std::get<IsotropicFlagSpec>(b).frame();
}

inline int64_t n_spec(const PicBase& b) { return frame_of(b).n_spec(); }

namespace detail {

inline size_t piece_count(const TailRule& t) {
  if (const auto* ra = std::get_if<ResidueAffine>(&t)) return ra->pieces.size();
  return 1;
}

inline std::optional<Integer> tail_weight(const Coloring& c, const std::vector<WeightRule>& rules, const Label& a) {
  if (const auto* ra = std::get_if<ResidueAffine>(&c.tail)) {
    for (int64_t r = 0; r < ra->modulus; ++r) {
      const auto& p = ra->pieces[static_cast<size_t>(r)];
      const auto& w = rules[static_cast<size_t>(r)];
      if (p.tier != a.tier) continue;
      if (p.a.is_zero()) {
        if (a.offset == p.b) return w.v;
        continue;
      }
      Scalar x = (a.offset - p.b) / p.a;
      if (x.den() != 1 || x.num() <= c.n0()) continue;
      if (mod_nonneg(x.num(), Integer(static_cast<long>(ra->modulus))) != r) continue;
      return Integer(w.u * x.num() + w.v);
    }
    return std::nullopt;
  }
  const auto& d = std::get<DenseInTier>(c.tail);
  if (a.tier != d.tier || a.offset.is_zero() || (a.offset.sign() < 0) != d.reversed) return std::nullopt;
  Scalar q = d.reversed ? -a.offset : a.offset;
  if (cw_index(q) <= c.n0()) return std::nullopt;
  return rules[0].v;
}

inline void check_rules(const Coloring& c, const std::vector<WeightRule>& rules, const std::string& what) {
  if (rules.size() != piece_count(c.tail))
    fail(ErrorCode::InvalidWeights, what + " needs one rule per tail piece");
  if (const auto* ra = std::get_if<ResidueAffine>(&c.tail)) {
    for (size_t r = 0; r < rules.size(); ++r)
      if (ra->pieces[r].a.is_zero() && rules[r].u != 0)
        fail(ErrorCode::InvalidWeights, what + " rule " + std::to_string(r) + " must be constant on a constant piece");
  } else if (rules[0].u != 0) {
    fail(ErrorCode::InvalidWeights, "dense tails admit constant rules only");
  }
}

}  // namespace detail

/// Weight of the position a. Isotropic elements are weighted below (0,0) only.
inline Integer weight(const PicElement& p, const Label& a) {
  if (auto it = p.exceptions.find(a); it != p.exceptions.end()) return it->second;
  std::optional<Integer> w;
  if (const auto* s = std::get_if<GeneralizedFlagSpec>(&p.base)) {
    w = detail::tail_weight(s->coloring, p.rules, a);
  } else {
    const auto& iso = std::get<IsotropicFlagSpec>(p.base);
    if (a >= Label{0, Scalar(0)}) fail(ErrorCode::InvalidWeights, "isotropic weights live below (0,0), not at " + a.str());
    w = detail::tail_weight(iso.pos, p.rules, a);
    if (!w) w = detail::tail_weight(iso.mirror, p.mirror_rules, a);
  }
  if (!w) fail(ErrorCode::InvalidWeights, "no weight for position " + a.str());
  return *w;
}

/// Rule shapes match the tails and every window-only position has a weight.
inline void validate_pic(const PicElement& p) {
  if (const auto* s = std::get_if<GeneralizedFlagSpec>(&p.base)) {
    detail::check_rules(s->coloring, p.rules, "coloring");
    for (const auto& a : s->coloring.window) weight(p, a);
    return;
  }
  const auto& iso = std::get<IsotropicFlagSpec>(p.base);
  detail::check_rules(iso.pos, p.rules, "coloring");
  detail::check_rules(iso.mirror, p.mirror_rules, "mirror coloring");
  const Label mid{0, Scalar(0)};
  for (const auto& [a, _] : p.exceptions)
    if (a >= mid) fail(ErrorCode::InvalidWeights, "isotropic exception at " + a.str() + " is not below (0,0)");
  for (const auto* c : {&iso.pos, &iso.mirror})
    for (const auto& a : c->window)
      if (a < mid) weight(p, a);
}

/// Positions carrying a level-n generator, increasing.
inline std::vector<Label> pic_positions(const PicBase& b, int64_t n) {
  std::vector<Label> out;
  for (const auto& [a, _] : frame_of(b).classes(n))
    if (!is_isotropic(b) || a < Label{0, Scalar(0)}) out.push_back(a);
  return out;
}

/// Level-n lattice coordinates of the weights m on increasing positions.
inline std::vector<Integer> lattice_coords(const std::vector<Integer>& m, bool isotropic) {
  std::vector<Integer> x;
  for (size_t k = 0; k + 1 < m.size(); ++k) x.push_back(m[k + 1] - m[k]);
  if (isotropic && !m.empty()) x.push_back(-m.back());
  return x;
}

/// φ_n(p) in ℤ^{s_n - 1} (type A) or ℤ^{k_n} (isotropic).
inline std::vector<Integer> restrict_pic(const PicElement& p, int64_t n) {
  if (n < n_spec(p.base)) fail(ErrorCode::LevelTooSmall, "level below n_spec");
  std::vector<Integer> m;
  for (const auto& a : pic_positions(p.base, n)) m.push_back(weight(p, a));
  return lattice_coords(m, is_isotropic(p.base));
}

/// The restriction r_n: level-`from` coordinates to level-`to` coordinates.
inline std::vector<Integer> level_map(const std::vector<Integer>& x, const std::vector<Label>& from,
                                      const std::vector<Label>& to, bool isotropic) {
  std::vector<Integer> m(from.size());
  if (isotropic) {
    if (!m.empty()) m.back() = -x.back();
    for (size_t k = m.size(); k-- > 1;) m[k - 1] = m[k] - x[k - 1];
  } else {
    for (size_t k = 0; k + 1 < m.size(); ++k) m[k + 1] = m[k] + x[k];
  }
  std::map<Label, Integer> by_label;
  for (size_t k = 0; k < from.size(); ++k) by_label[from[k]] = m[k];
  std::vector<Integer> kept;
  for (const auto& a : to) {
    auto it = by_label.find(a);
    if (it == by_label.end()) fail(ErrorCode::PositionInvisible, "position " + a.str() + " is not visible at the upper level");
    kept.push_back(it->second);
  }
  return lattice_coords(kept, isotropic);
}

struct PicPresentation {
  bool isotropic = false;
  std::string generators;               // the index set
  std::string relation;                 // "diagonal" or "none"
  std::optional<std::vector<Label>> finite_positions;  // when the index set is finite
  std::optional<size_t> rank;           // rank of Pic when finite
};

namespace detail {

inline std::optional<std::vector<Label>> finite_label_set(const Coloring& c) {
  const auto* ra = std::get_if<ResidueAffine>(&c.tail);
  if (!ra) return std::nullopt;
  std::set<Label> out(c.window.begin(), c.window.end());
  for (int64_t r = 0; r < ra->modulus; ++r) {
    const auto& p = ra->pieces[static_cast<size_t>(r)];
    if (!p.a.is_zero()) return std::nullopt;
    out.insert(Label{p.tier, p.b});
  }
  return std::vector<Label>(out.begin(), out.end());
}

}  // namespace detail

inline PicPresentation pic_presentation(const GeneralizedFlagSpec& s) {
  PicPresentation p;
  p.generators = "gamma_a for positions a of " + coloring_str(s.coloring);
  p.relation = "diagonal";
  p.finite_positions = detail::finite_label_set(s.coloring);
  if (p.finite_positions) p.rank = p.finite_positions->size() - 1;
  return p;
}

inline PicPresentation pic_presentation(const IsotropicFlagSpec& s) {
  PicPresentation p;
  p.isotropic = true;
  p.generators = "gamma_a for positions a < (0,0) of " + coloring_str(s.pos) + " and its mirror";
  p.relation = "none";
  auto a = detail::finite_label_set(s.pos), b = detail::finite_label_set(s.mirror);
  if (a && b) {
    std::set<Label> lower;
    for (const auto* v : {&*a, &*b})
      for (const auto& l : *v)
        if (l < Label{0, Scalar(0)}) lower.insert(l);
    p.finite_positions = std::vector<Label>(lower.begin(), lower.end());
    p.rank = lower.size();
  }
  return p;
}

namespace detail {

/// Calls f on every vector in [-bound, bound]^len; stops when f returns false.
template <class F>
bool for_each_box(size_t len, int64_t bound, F&& f) {
  std::vector<Integer> m(len, Integer(-bound));
  for (;;) {
    if (!f(m)) return false;
    size_t k = 0;
    while (k < len && m[k] == bound) m[k++] = -bound;
    if (k == len) return true;
    m[k] += 1;
  }
}

inline void check_box(size_t len, int64_t bound) {
  double count = 1;
  for (size_t k = 0; k < len; ++k) count *= static_cast<double>(2 * bound + 1);
  if (count > 2e7) fail(ErrorCode::Unsupported, "kernel_check enumeration too large");
}

}  // namespace detail

/// Enumerates weights in [-bound, bound] on the positions visible at level
/// n+1 and checks that φ_n kills exactly the predicted kernel: weights
/// constant on the level-n positions (invisible positions are free).
inline bool kernel_check(const GeneralizedFlagSpec& s, int64_t n, int64_t bound) {
  if (n < n_spec(s)) fail(ErrorCode::LevelTooSmall, "level below n_spec");
  auto outer = pic_positions(PicBase{s}, n + 1), inner = pic_positions(PicBase{s}, n);
  std::vector<size_t> pick;
  for (const auto& a : inner) pick.push_back(static_cast<size_t>(std::find(outer.begin(), outer.end(), a) - outer.begin()));
  detail::check_box(outer.size(), bound);
  return detail::for_each_box(outer.size(), bound, [&](const std::vector<Integer>& m) {
    std::vector<Integer> v;
    for (size_t k : pick) v.push_back(m[k]);
    auto x = lattice_coords(v, false);
    bool zero = std::all_of(x.begin(), x.end(), [](const Integer& c) { return c == 0; });
    bool predicted = std::all_of(v.begin(), v.end(), [&](const Integer& c) { return c == v.front(); });
    return zero == predicted;
  });
}

/// Isotropic variant: weights on all positions (both halves and the fixed
/// one); φ_n sees m(a) - m(τ(a)) for a < (0,0), so the predicted kernel is
/// spanned by γ_a + γ_τ(a), the fixed position and the invisible positions.
inline bool kernel_check(const IsotropicFlagSpec& s, int64_t n, int64_t bound) {
  if (n < n_spec(s)) fail(ErrorCode::LevelTooSmall, "level below n_spec");
  std::vector<Label> outer;
  for (const auto& [a, _] : s.frame().classes(n + 1)) outer.push_back(a);
  auto inner = pic_positions(PicBase{s}, n);
  auto index = [&](const Label& a) { return static_cast<size_t>(std::find(outer.begin(), outer.end(), a) - outer.begin()); };
  std::vector<std::pair<size_t, size_t>> pairs;
  for (const auto& a : inner) pairs.push_back({index(a), index(tau(a))});
  detail::check_box(outer.size(), bound);
  return detail::for_each_box(outer.size(), bound, [&](const std::vector<Integer>& m) {
    std::vector<Integer> mu;
    for (auto [i, j] : pairs) mu.push_back(m[i] - m[j]);
    auto x = lattice_coords(mu, true);
    bool zero = std::all_of(x.begin(), x.end(), [](const Integer& c) { return c == 0; });
    bool predicted = std::all_of(mu.begin(), mu.end(), [](const Integer& c) { return c == 0; });
    return zero == predicted;
  });
}

}  // namespace genflag

#include "genflag/ample.hpp"
