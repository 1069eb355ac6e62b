#pragma once

// Generalized flags presented by a basis and a coloring; chains and the
// normalization map fl; maximality, flag and reconstruction checks; duality;
// compatible bases at a finite level.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "genflag/basis.hpp"
#include "genflag/frame.hpp"
#include "genflag/labels.hpp"

namespace genflag {

/// F'_a = span{l_i : label(i) < a}, F''_a = span{l_i : label(i) <= a}.
struct GeneralizedFlagSpec {
  BasisSpec basis;
  Coloring coloring;
  friend bool operator==(const GeneralizedFlagSpec&, const GeneralizedFlagSpec&) = default;
};

inline Frame frame_of(const GeneralizedFlagSpec& s) { return Frame{Layout::Linear, s.basis, s.coloring, {}, {}}; }

inline int64_t n_spec(const GeneralizedFlagSpec& s) { return frame_of(s).n_spec(); }

struct ValidatedSpec {
  GeneralizedFlagSpec spec;  // canonical form
  Scalar basis_det;          // determinant of the input's replacement block
};

inline ValidatedSpec validate_spec(const GeneralizedFlagSpec& s) {
  Scalar d = check_basis(s.basis, Layout::Linear);
  GeneralizedFlagSpec out{s.basis, canonical(s.coloring)};
  out.basis = canonical_basis(frame_of(out));
  out.coloring = canonical(out.coloring);
  return {out, d};
}

inline GeneralizedFlagSpec canonical(const GeneralizedFlagSpec& s) { return validate_spec(s).spec; }

inline bool is_maximal(const GeneralizedFlagSpec& s) { return is_injective(s.coloring); }

inline bool is_flag(const GeneralizedFlagSpec& s) { return embeds_in_integers(tier_profiles({&s.coloring})); }

/// Labels occurring among indices 1..n, sorted and distinct.
inline std::vector<Label> visible_labels(const Coloring& c, int64_t n) {
  std::set<Label> seen;
  for (int64_t i = 1; i <= n; ++i) seen.insert(c.label(i));
  return {seen.begin(), seen.end()};
}

/// Checks F' = ∪{G'' ⊊ F''} and F'' = ∩{G' ⊋ F'} at level n for every
/// visible position, computing each member from generators up to level 2n.
inline bool reconstruct_check(const GeneralizedFlagSpec& s, int64_t n) {
  Frame f = frame_of(s);
  if (n < f.n_spec()) fail(ErrorCode::LevelTooSmall, "level below n_spec");
  const int64_t m = 2 * n;
  auto member = [&](const Label& a, bool strict) {
    std::vector<VectorFS> gens;
    for (int64_t i = 1; i <= m; ++i) {
      Label l = s.coloring.label(i);
      if (strict ? l < a : l <= a) gens.push_back(s.basis.vec(i));
    }
    return intersect_window(gens, n);
  };
  auto labels = visible_labels(s.coloring, n);
  for (const auto& a : labels) {
    auto fp = member(a, true);
    auto fpp = member(a, false);
    std::vector<VectorFS> uni;
    for (const auto& b : labels) {
      if (b >= a) continue;
      auto g = member(b, false);
      uni.insert(uni.end(), g.begin(), g.end());
    }
    if (!same_span(uni, fp)) return false;
    std::optional<std::vector<VectorFS>> inter;
    for (const auto& b : labels) {
      if (b <= a) continue;
      auto g = member(b, true);
      inter = inter ? intersect(*inter, g) : rref(g);
    }
    auto full = inter ? *inter : rref([&] {
      std::vector<VectorFS> all;
      for (Slot sl : window_slots(n, Layout::Linear)) all.push_back(VectorFS::unit(sl));
      return all;
    }());
    if (!same_span(full, fpp)) return false;
  }
  return true;
}

/// The flag {F^c}: F^c = span{e in E, e not in F}. Requires E compatible.
inline GeneralizedFlagSpec dual(const GeneralizedFlagSpec& s) {
  auto c = canonical(s);
  if (!c.basis.trivial()) fail(ErrorCode::NontrivialBasis, "dual needs a flag compatible with E");
  return canonical(GeneralizedFlagSpec{{}, negate(c.coloring)});
}

// ---------------------------------------------------------------------------
// Chains

/// Indices i <= upto listed in `window`; beyond, i mod modulus in `residues`.
struct IndexSet {
  int64_t upto = 0;
  std::set<int64_t> window;
  int64_t modulus = 1;
  std::set<int64_t> residues;

  bool contains(int64_t i) const { return i <= upto ? window.count(i) > 0 : residues.count(i % modulus) > 0; }
  friend bool operator==(const IndexSet&, const IndexSet&) = default;
};

/// A down-set of labels: x < label, x <= label, or tier(x) <= tier.
struct LabelCut {
  enum class Kind { Below, Upto, Tier };
  Kind kind = Kind::Below;
  Label label;
  int64_t tier = 0;

  bool contains(const Label& x) const {
    switch (kind) {
      case Kind::Below: return x < label;
      case Kind::Upto: return x <= label;
      case Kind::Tier: return x.tier <= tier;
    }
    return false;
  }
  friend bool operator==(const LabelCut&, const LabelCut&) = default;
};

using ChainMember = std::variant<IndexSet, LabelCut>;

/// A finite chain of subspaces spanned by subsets of a basis L. Label cuts
/// refer to `skeleton`; `all_positions` adds every F'_a and F''_a of it.
struct ChainSpec {
  BasisSpec basis;
  std::optional<Coloring> skeleton;
  bool all_positions = false;
  std::vector<ChainMember> members;
  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;
};

/// The chain of all spaces of a generalized flag.
inline ChainSpec chain_of(const GeneralizedFlagSpec& s) { return ChainSpec{s.basis, s.coloring, true, {}}; }

namespace detail {

// Upper boundary of a cut as a Dedekind point, for sorting.
struct CutPoint {
  int64_t tier;
  bool tier_start;  // below every label of the tier
  Scalar offset;
  bool inclusive;
  friend std::strong_ordering operator<=>(const CutPoint& a, const CutPoint& b) {
    if (auto c = a.tier <=> b.tier; c != 0) return c;
    if (a.tier_start != b.tier_start) return a.tier_start ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.tier_start) return std::strong_ordering::equal;
    if (auto c = a.offset <=> b.offset; c != 0) return c;
    return a.inclusive <=> b.inclusive;
  }
  friend bool operator==(const CutPoint& a, const CutPoint& b) { return (a <=> b) == 0; }
};

inline CutPoint cut_point(const LabelCut& c) {
  switch (c.kind) {
    case LabelCut::Kind::Below: return {c.label.tier, false, c.label.offset, false};
    case LabelCut::Kind::Upto: return {c.label.tier, false, c.label.offset, true};
    case LabelCut::Kind::Tier: return {c.tier + 1, true, Scalar(), false};
  }
  return {};
}

// Labels above p and at most q (p < q as cut points).
inline LabelInterval between(const CutPoint& p, const CutPoint& q) {
  LabelInterval iv;
  iv.lo = Label{p.tier, p.offset};
  iv.lo_tier_start = p.tier_start;
  iv.lo_strict = p.inclusive;
  iv.hi = Label{q.tier, q.offset};
  iv.hi_tier_start = q.tier_start;
  iv.hi_strict = !q.inclusive;
  return iv;
}

inline int64_t lcm64(int64_t a, int64_t b) { return a / std::gcd(a, b) * b; }

// A coloring whose label at i is (0, t(i)), given t on indices; window up to
// `w`, constant per residue modulo m beyond.
template <class T>
Coloring rank_coloring(T&& t_of, int64_t w, int64_t m) {
  Coloring c;
  for (int64_t i = 1; i <= w; ++i) c.window.push_back({0, Scalar(static_cast<long>(t_of(i)))});
  ResidueAffine ra{m, {}};
  for (int64_t r = 0; r < m; ++r) {
    int64_t i = w + 1 + ((r - (w + 1)) % m + m) % m;
    ra.pieces.push_back({0, Scalar(0), Scalar(static_cast<long>(t_of(i)))});
  }
  c.tail = ra;
  return canonical(c);
}

}  // namespace detail

/// Validates nesting; returns member indices sorted by inclusion.
inline std::vector<size_t> chain_order(const ChainSpec& c) {
  std::vector<size_t> idx(c.members.size());
  std::iota(idx.begin(), idx.end(), 0);
  bool any_set = false, any_cut = false;
  for (const auto& m : c.members) (std::holds_alternative<IndexSet>(m) ? any_set : any_cut) = true;
  if (any_cut && !c.skeleton) fail(ErrorCode::NotAChain, "label cuts need a skeleton coloring");
  if (any_set && c.skeleton) fail(ErrorCode::Unsupported, "index-set members alongside a skeleton coloring");
  if (any_set) {
    int64_t w = 0, m = 1;
    for (const auto& mem : c.members) {
      const auto& s = std::get<IndexSet>(mem);
      if (s.modulus < 1) fail(ErrorCode::SemanticError, "member modulus must be >= 1");
      w = std::max(w, s.upto);
      m = detail::lcm64(m, s.modulus);
    }
    auto count = [&](size_t k) {
      int64_t n = 0;
      for (int64_t i = 1; i <= w + m; ++i) n += std::get<IndexSet>(c.members[k]).contains(i);
      return n;
    };
    auto subset = [&](size_t a, size_t b) {
      for (int64_t i = 1; i <= w + m; ++i)
        if (std::get<IndexSet>(c.members[a]).contains(i) && !std::get<IndexSet>(c.members[b]).contains(i))
          return false;
      return true;
    };
    std::vector<int64_t> sizes;
    for (size_t k = 0; k < c.members.size(); ++k) sizes.push_back(count(k));
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return sizes[a] < sizes[b]; });
    for (size_t k = 0; k + 1 < idx.size(); ++k)
      if (!subset(idx[k], idx[k + 1]) || subset(idx[k + 1], idx[k]))
        fail(ErrorCode::NotAChain, "members are not strictly nested");
    return idx;
  }
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return detail::cut_point(std::get<LabelCut>(c.members[a])) < detail::cut_point(std::get<LabelCut>(c.members[b]));
  });
  for (size_t k = 0; k + 1 < idx.size(); ++k) {
    auto p = detail::cut_point(std::get<LabelCut>(c.members[idx[k]]));
    auto q = detail::cut_point(std::get<LabelCut>(c.members[idx[k + 1]]));
    if (p == q || !image_hits(*c.skeleton, detail::between(p, q)))
      fail(ErrorCode::NotAChain, "two members span the same subspace");
  }
  return idx;
}

/// The unique generalized flag with the same vector partition as the chain.
inline GeneralizedFlagSpec fl(const ChainSpec& c) {
  check_basis(c.basis, Layout::Linear);
  auto order = chain_order(c);
  if (c.skeleton && c.all_positions) return canonical(GeneralizedFlagSpec{c.basis, *c.skeleton});
  if (!c.skeleton) {
    int64_t w = 0, m = 1;
    for (const auto& mem : c.members) {
      const auto& s = std::get<IndexSet>(mem);
      w = std::max(w, s.upto);
      m = detail::lcm64(m, s.modulus);
    }
    auto t_of = [&](int64_t i) -> int64_t {
      for (size_t k = 0; k < order.size(); ++k)
        if (std::get<IndexSet>(c.members[order[k]]).contains(i)) return static_cast<int64_t>(k) + 1;
      return static_cast<int64_t>(order.size()) + 1;
    };
    return canonical(GeneralizedFlagSpec{c.basis, detail::rank_coloring(t_of, w, m)});
  }
  // Cuts of a skeleton: the class of i is the first cut containing label(i).
  const Coloring& sk = *c.skeleton;
  auto t_label = [&](const Label& x) -> int64_t {
    for (size_t k = 0; k < order.size(); ++k)
      if (std::get<LabelCut>(c.members[order[k]]).contains(x)) return static_cast<int64_t>(k) + 1;
    return static_cast<int64_t>(order.size()) + 1;
  };
  int64_t w = sk.n0(), m = 1;
  if (const auto* ra = std::get_if<ResidueAffine>(&sk.tail)) {
    m = ra->modulus;
    for (const auto& mem : c.members) {
      const auto& cut = std::get<LabelCut>(mem);
      if (cut.kind == LabelCut::Kind::Tier) continue;
      for (const auto& p : ra->pieces) {
        if (p.tier != cut.label.tier || p.a.is_zero()) continue;
        Scalar cross = (cut.label.offset - p.b) / p.a;
        Integer bound = ceil_of(cross.sign() < 0 ? -cross : cross) + 1;
        w = std::max(w, to_i64(bound));
      }
    }
    w += m;
  } else {
    const auto& d = std::get<DenseInTier>(sk.tail);
    for (const auto& mem : c.members) {
      auto p = detail::cut_point(std::get<LabelCut>(mem));
      LabelInterval inside{std::nullopt, false, Label{p.tier, p.offset}, !p.inclusive, false, p.tier_start};
      LabelInterval outside{Label{p.tier, p.offset}, p.inclusive, std::nullopt, false, p.tier_start, false};
      if (tail_hits(d, inside, sk.n0()) && tail_hits(d, outside, sk.n0()))
        fail(ErrorCode::Unsupported, "a cut splits a dense tier");
    }
  }
  return canonical(GeneralizedFlagSpec{c.basis, detail::rank_coloring([&](int64_t i) { return t_label(sk.label(i)); }, w, m)});
}

/// Members (by position in the input list) containing v; for skeleton chains
/// also the position of v in the skeleton flag.
struct MembershipProfile {
  std::vector<size_t> members;
  std::optional<Label> position;
  friend bool operator==(const MembershipProfile&, const MembershipProfile&) = default;
};

inline MembershipProfile partition_class(const ChainSpec& c, const VectorFS& v) {
  if (v.is_zero()) fail(ErrorCode::ZeroVector, "partition class of the zero vector");
  chain_order(c);
  int64_t n = std::max<int64_t>({c.basis.reach(), v.max_abs_slot(), 1});
  if (c.skeleton) n = std::max(n, c.skeleton->n0());
  for (const auto& mem : c.members)
    if (const auto* s = std::get_if<IndexSet>(&mem)) n = std::max(n, s->upto);
  MembershipProfile out;
  if (!c.skeleton) {
    for (size_t k = 0; k < c.members.size(); ++k) {
      const auto& s = std::get<IndexSet>(c.members[k]);
      std::vector<VectorFS> gens;
      for (int64_t i = 1; i <= n; ++i)
        if (s.contains(i)) gens.push_back(c.basis.vec(i));
      if (in_span(gens, v)) out.members.push_back(k);
    }
    return out;
  }
  Frame f{Layout::Linear, c.basis, *c.skeleton, {}, {}};
  Label pos = f.position_of(v, n);
  for (size_t k = 0; k < c.members.size(); ++k)
    if (std::get<LabelCut>(c.members[k]).contains(pos)) out.members.push_back(k);
  out.position = pos;
  return out;
}

// ---------------------------------------------------------------------------
// Compatible bases at a finite level

/// Greedy basis e_1..e_n with span{l_1..l_k} = span{e_1..e_k}, each e_k sitting
/// in the lowest step reachable by adding earlier e_j.
inline std::vector<VectorFS> compatible_basis_finite(const std::vector<VectorFS>& ls, const FiniteFlag& f) {
  if (!independent(ls)) fail(ErrorCode::NotIndependent, "input vectors are dependent");
  for (const auto& l : ls)
    if (!supported_in(l, f.level, f.layout)) fail(ErrorCode::SemanticError, "vector outside the level window");
  std::vector<VectorFS> out;
  for (const auto& l : ls) {
    size_t t = 0;
    for (; t < f.steps.size(); ++t) {
      auto sum = f.steps[t];
      sum.insert(sum.end(), out.begin(), out.end());
      if (in_span(sum, l)) break;
    }
    if (t == f.steps.size()) fail(ErrorCode::SemanticError, "vector outside the top step");
    // Independent family: a basis of G_t, then earlier e_j outside G_t as needed.
    std::vector<VectorFS> fam = f.steps[t];
    std::vector<size_t> extra;
    for (size_t j = 0; j < out.size(); ++j) {
      if (in_span(f.steps[t], out[j])) continue;
      auto trial = fam;
      trial.push_back(out[j]);
      if (independent(trial)) {
        fam = std::move(trial);
        extra.push_back(j);
      }
    }
    auto c = coordinates(fam, l);
    VectorFS e = l;
    size_t base = f.steps[t].size();
    for (size_t k = 0; k < extra.size(); ++k) e -= (*c)[base + k] * out[extra[k]];
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace genflag
