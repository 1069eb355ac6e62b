#pragma once

// E-commensurability of two generalized flags presented by specs.

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "genflag/flagcore.hpp"

namespace genflag {

/// φ is the identity except on `exceptions`; U = V_level.
struct CommWitness {
  int64_t level = 0;
  std::vector<std::pair<Label, Label>> exceptions;  // window-only positions, increasing

  Label map(const Label& a) const {
    for (const auto& [x, y] : exceptions)
      if (x == a) return y;
    return a;
  }
  Label unmap(const Label& b) const {
    for (const auto& [x, y] : exceptions)
      if (y == b) return x;
    return b;
  }
};

struct CommRefusal {
  enum class Reason { TailMismatch, PositionMismatch, DimensionMismatch };
  Reason reason = Reason::TailMismatch;
  std::string detail;
};

inline std::string to_string(CommRefusal::Reason r) {
  switch (r) {
    case CommRefusal::Reason::TailMismatch: return "TailMismatch";
    case CommRefusal::Reason::PositionMismatch: return "PositionMismatch";
    case CommRefusal::Reason::DimensionMismatch: return "DimensionMismatch";
  }
  return "?";
}

struct CommResult {
  std::optional<CommWitness> witness;
  CommRefusal refusal;
  explicit operator bool() const { return witness.has_value(); }
};

namespace detail {

inline int64_t tail_period(const TailRule& t) {
  if (const auto* ra = std::get_if<ResidueAffine>(&t)) return ra->modulus;
  return 1;
}

// Same label at every index > n.
inline bool tails_agree(const TailRule& a, const TailRule& b, int64_t n) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<DenseInTier>(a)) return a == b;
  // Each residue class mod L is affine in i: two points per class decide it.
  int64_t L = std::lcm(tail_period(a), tail_period(b));
  for (int64_t i = n + 1; i <= n + 2 * L; ++i)
    if (tail_label(a, i) != tail_label(b, i)) return false;
  return true;
}

// #{i <= n : label(i) < a} (strict) or <= a.
inline int64_t count_below(const Coloring& c, int64_t n, const Label& a, bool strict) {
  int64_t k = 0;
  for (int64_t i = 1; i <= n; ++i) {
    Label l = c.label(i);
    if (strict ? l < a : l <= a) ++k;
  }
  return k;
}

}  // namespace detail

/// Decides commensurability with U = V_N, N the larger n_spec. Tails must
/// agree beyond N; φ fixes tail positions and matches window-only positions
/// in order between consecutive tail positions.
inline CommResult commensurable(const GeneralizedFlagSpec& s1, const GeneralizedFlagSpec& s2) {
  const Coloring& c1 = s1.coloring;
  const Coloring& c2 = s2.coloring;
  const int64_t N = std::max(n_spec(s1), n_spec(s2));
  CommResult out;
  auto refuse = [&](CommRefusal::Reason r, std::string d) {
    out.refusal = {r, std::move(d)};
    return out;
  };
  if (!detail::tails_agree(c1.tail, c2.tail, N))
    return refuse(CommRefusal::Reason::TailMismatch, "tail labels differ beyond level " + std::to_string(N));
  const TailRule& tail = c1.tail;
  auto in_tail = [&](const Label& a) { return tail_hits(tail, LabelInterval::point(a), N); };

  std::set<Label> w1, w2, all;
  for (int64_t i = 1; i <= N; ++i) {
    Label a = c1.label(i), b = c2.label(i);
    all.insert(a), all.insert(b);
    if (!in_tail(a)) w1.insert(a);
    if (!in_tail(b)) w2.insert(b);
  }

  // Gaps: maximal runs of window-only labels with no tail label in between.
  std::vector<Label> only;
  std::set_union(w1.begin(), w1.end(), w2.begin(), w2.end(), std::back_inserter(only));
  CommWitness w{N, {}};
  for (size_t k = 0; k < only.size();) {
    size_t e = k + 1;
    while (e < only.size() && !tail_hits(tail, LabelInterval::open(only[e - 1], only[e]), N)) ++e;
    std::vector<Label> g1, g2;
    for (size_t j = k; j < e; ++j) {
      if (w1.count(only[j])) g1.push_back(only[j]);
      if (w2.count(only[j])) g2.push_back(only[j]);
    }
    if (g1.size() != g2.size())
      return refuse(CommRefusal::Reason::PositionMismatch,
                    "window-only positions near " + only[k].str() + " do not match");
    for (size_t j = 0; j < g1.size(); ++j)
      if (g1[j] != g2[j]) w.exceptions.emplace_back(g1[j], g2[j]);
    k = e;
  }

  // dim(F'_a ∩ V_N) is a count of window labels; check it wherever it can change.
  auto same_dims = [&](const Label& a) {
    Label b = w.map(a);
    return detail::count_below(c1, N, a, true) == detail::count_below(c2, N, b, true) &&
           detail::count_below(c1, N, a, false) == detail::count_below(c2, N, b, false);
  };
  for (const auto& a : w1)
    if (!same_dims(a)) return refuse(CommRefusal::Reason::DimensionMismatch, "at position " + a.str());
  std::vector<Label> sorted(all.begin(), all.end());
  for (size_t k = 0; k < sorted.size(); ++k) {
    const Label& a = sorted[k];
    if (in_tail(a) && !same_dims(a)) return refuse(CommRefusal::Reason::DimensionMismatch, "at position " + a.str());
    if (k + 1 < sorted.size() && tail_hits(tail, LabelInterval::open(a, sorted[k + 1]), N) &&
        detail::count_below(c1, N, a, false) != detail::count_below(c2, N, a, false))
      return refuse(CommRefusal::Reason::DimensionMismatch, "between " + a.str() + " and " + sorted[k + 1].str());
  }
  out.witness = w;
  return out;
}

/// Definitional check at level N: conditions (i) and (ii') for every
/// position visible up to a probe level M > N, with φ matching visible
/// positions by rank and required to fix tail positions.
inline bool commensurable_oracle(const GeneralizedFlagSpec& s1, const GeneralizedFlagSpec& s2, int64_t N) {
  if (N < n_spec(s1) || N < n_spec(s2)) fail(ErrorCode::LevelTooSmall, "oracle level below n_spec");
  const Coloring& c1 = s1.coloring;
  const Coloring& c2 = s2.coloring;
  const bool dense = std::holds_alternative<DenseInTier>(c1.tail) || std::holds_alternative<DenseInTier>(c2.tail);
  const int64_t M = dense ? N + 64 : N + 2 * std::lcm(detail::tail_period(c1.tail), detail::tail_period(c2.tail)) + 8;
  std::set<Label> pinned;
  for (int64_t i = N + 1; i <= M; ++i) {
    if (c1.label(i) != c2.label(i)) return false;
    pinned.insert(c1.label(i));
  }
  auto v1 = visible_labels(c1, M), v2 = visible_labels(c2, M);
  if (v1.size() != v2.size()) return false;
  std::vector<VectorFS> vn;
  for (Slot j = 1; j <= N; ++j) vn.push_back(VectorFS::unit(j));
  auto space = [&](const GeneralizedFlagSpec& s, const Label& a, bool strict) {
    std::vector<VectorFS> out;
    for (int64_t i = 1; i <= M; ++i) {
      Label l = s.coloring.label(i);
      if (strict ? l < a : l <= a) out.push_back(s.basis.vec(i));
    }
    return out;
  };
  auto plus_vn = [&](std::vector<VectorFS> xs) {
    xs.insert(xs.end(), vn.begin(), vn.end());
    return xs;
  };
  for (size_t k = 0; k < v1.size(); ++k) {
    if ((pinned.count(v1[k]) || pinned.count(v2[k])) && v1[k] != v2[k]) return false;
    for (bool strict : {true, false}) {
      auto F = space(s1, v1[k], strict), G = space(s2, v2[k], strict);
      auto FU = plus_vn(F), GU = plus_vn(G);
      if (!span_contains(GU, F) || !span_contains(FU, G)) return false;  // (i)
      if (rank(F) != rank(G)) return false;                              // (ii')
    }
  }
  return true;
}

/// ψ∘φ with U + W.
inline CommWitness compose(const CommWitness& phi, const CommWitness& psi) {
  CommWitness out{std::max(phi.level, psi.level), {}};
  std::set<Label> seen;
  for (const auto& [x, y] : phi.exceptions) {
    seen.insert(x);
    Label z = psi.map(y);
    if (z != x) out.exceptions.emplace_back(x, z);
  }
  for (const auto& [y, z] : psi.exceptions)
    if (!seen.count(y) && phi.unmap(y) == y && y != z) out.exceptions.emplace_back(y, z);
  std::sort(out.exceptions.begin(), out.exceptions.end());
  return out;
}

}  // namespace genflag
