#pragma once

// Position labels and colorings: finite presentations of a labeling
// i -> label(i) of the basis indices 1, 2, 3, ...

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "genflag/error.hpp"
#include "genflag/scalar.hpp"

namespace genflag {

/// A flag position, ordered lexicographically by (tier, offset).
struct Label {
  int64_t tier = 0;
  Scalar offset;

  friend bool operator==(const Label&, const Label&) = default;
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    if (auto c = a.tier <=> b.tier; c != 0) return c;
    return a.offset <=> b.offset;
  }
  Label operator-() const { return {-tier, -offset}; }
  std::string str() const { return "(" + std::to_string(tier) + "," + offset.str() + ")"; }
};

/// n-th term (n >= 1) of the Calkin–Wilf enumeration of the positive rationals.
inline Scalar cw(const Integer& n) {
  if (n < 1) fail(ErrorCode::SemanticError, "Calkin-Wilf index must be >= 1");
  Integer a = 1, b = 1;
  size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (size_t k = bits - 1; k-- > 0;) {
    if (mpz_tstbit(n.get_mpz_t(), k))
      a += b;
    else
      b += a;
  }
  return Scalar(a, b);
}

inline Scalar cw(int64_t n) { return cw(Integer(static_cast<long>(n))); }

/// Inverse of cw: the index of a positive rational.
inline Integer cw_index(const Scalar& q) {
  if (q.sign() <= 0) fail(ErrorCode::SemanticError, "Calkin-Wilf index of a non-positive rational");
  Integer a = q.num(), b = q.den();
  std::vector<bool> bits;
  while (!(a == 1 && b == 1)) {
    if (a < b) {
      b -= a;
      bits.push_back(false);
    } else {
      a -= b;
      bits.push_back(true);
    }
  }
  Integer n = 1;
  for (auto it = bits.rbegin(); it != bits.rend(); ++it) n = 2 * n + (*it ? 1 : 0);
  return n;
}

/// label(i) = (tier, a*i + b) for i ≡ residue (mod modulus).
struct AffinePiece {
  int64_t tier = 0;
  Scalar a;
  Scalar b;
  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

struct ResidueAffine {
  int64_t modulus = 1;
  std::vector<AffinePiece> pieces;  // pieces[r] governs i with i mod modulus == r
  friend bool operator==(const ResidueAffine&, const ResidueAffine&) = default;
};

/// label(i) = (tier, cw(i)), or (tier, -cw(i)) when reversed.
struct DenseInTier {
  int64_t tier = 0;
  bool reversed = false;
  friend bool operator==(const DenseInTier&, const DenseInTier&) = default;
};

using TailRule = std::variant<ResidueAffine, DenseInTier>;

inline Label tail_label(const TailRule& rule, int64_t i) {
  if (const auto* ra = std::get_if<ResidueAffine>(&rule)) {
    const auto& p = ra->pieces[static_cast<size_t>(i % ra->modulus)];
    return {p.tier, p.a * Scalar(static_cast<long>(i)) + p.b};
  }
  const auto& d = std::get<DenseInTier>(rule);
  Scalar q = cw(i);
  return {d.tier, d.reversed ? -q : q};
}

struct Coloring {
  std::vector<Label> window;  // window[i-1] = label(i) for i <= n0
  TailRule tail = ResidueAffine{1, {AffinePiece{0, Scalar(1), Scalar(0)}}};

  int64_t n0() const { return static_cast<int64_t>(window.size()); }

  Label label(int64_t i) const {
    if (i < 1) fail(ErrorCode::SemanticError, "basis indices start at 1");
    if (i <= n0()) return window[static_cast<size_t>(i - 1)];
    return tail_label(tail, i);
  }

  friend bool operator==(const Coloring&, const Coloring&) = default;
};

inline Coloring constant_coloring(const Label& l) {
  return Coloring{{}, ResidueAffine{1, {AffinePiece{l.tier, Scalar(0), l.offset}}}};
}

/// Negates every label: the order-reversed coloring.
inline Coloring negate(const Coloring& c) {
  Coloring out;
  for (const auto& l : c.window) out.window.push_back(-l);
  if (const auto* ra = std::get_if<ResidueAffine>(&c.tail)) {
    ResidueAffine r{ra->modulus, {}};
    for (const auto& p : ra->pieces) r.pieces.push_back({-p.tier, -p.a, -p.b});
    out.tail = r;
  } else {
    const auto& d = std::get<DenseInTier>(c.tail);
    out.tail = DenseInTier{-d.tier, !d.reversed};
  }
  return out;
}

namespace detail {

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer mod_nonneg(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Smallest integer i ≡ r (mod m) with i > x (strict) or i >= x.
inline Integer next_in_class(const Scalar& x, bool strict, int64_t r, int64_t m) {
  Integer base = strict ? floor_of(x) + 1 : ceil_of(x);
  Integer mm = m;
  Integer shift = mod_nonneg(Integer(static_cast<long>(r)) - base, mm);
  return base + shift;
}

}  // namespace detail

/// Offsets of a single tier, with optional (possibly strict) bounds.
struct OffsetRange {
  std::optional<Scalar> lo;
  bool lo_strict = false;
  std::optional<Scalar> hi;
  bool hi_strict = false;

  bool contains(const Scalar& x) const {
    if (lo && (lo_strict ? !(x > *lo) : !(x >= *lo))) return false;
    if (hi && (hi_strict ? !(x < *hi) : !(x <= *hi))) return false;
    return true;
  }
  bool empty() const {
    if (!lo || !hi) return false;
    if (*lo < *hi) return false;
    if (*lo == *hi) return lo_strict || hi_strict;
    return true;
  }
};

/// An interval of labels; absent ends are unbounded. A bound flagged
/// `*_tier_start` stands for the point just below every label of its tier.
struct LabelInterval {
  std::optional<Label> lo;
  bool lo_strict = false;
  std::optional<Label> hi;
  bool hi_strict = false;
  bool lo_tier_start = false;
  bool hi_tier_start = false;

  static LabelInterval open(const Label& a, const Label& b) { return {a, true, b, true}; }
  static LabelInterval point(const Label& a) { return {a, false, a, false}; }

  bool contains(const Label& x) const {
    if (lo) {
      if (lo_tier_start) {
        if (x.tier < lo->tier) return false;
      } else if (lo_strict ? !(x > *lo) : !(x >= *lo)) {
        return false;
      }
    }
    if (hi) {
      if (hi_tier_start) {
        if (x.tier >= hi->tier) return false;
      } else if (hi_strict ? !(x < *hi) : !(x <= *hi)) {
        return false;
      }
    }
    return true;
  }

  /// Offsets of labels in tier t that fall in this interval (nullopt if none can).
  std::optional<OffsetRange> in_tier(int64_t t) const {
    OffsetRange r;
    if (lo) {
      if (t < lo->tier) return std::nullopt;
      if (t == lo->tier && !lo_tier_start) r.lo = lo->offset, r.lo_strict = lo_strict;
    }
    if (hi) {
      if (t > hi->tier || (hi_tier_start && t == hi->tier)) return std::nullopt;
      if (t == hi->tier) r.hi = hi->offset, r.hi_strict = hi_strict;
    }
    if (r.empty()) return std::nullopt;
    return r;
  }
};

/// Does some index i > min_index, i ≡ r (mod m), have a*i + b inside `range`?
inline bool piece_hits(const AffinePiece& p, int64_t r, int64_t m, const OffsetRange& range, int64_t min_index) {
  if (p.a.is_zero()) return range.contains(p.b);
  // Bounds on i from the offset range.
  std::optional<Scalar> ilo, ihi;
  bool ilo_strict = false, ihi_strict = false;
  auto map = [&](const Scalar& x) { return (x - p.b) / p.a; };
  if (p.a.sign() > 0) {
    if (range.lo) ilo = map(*range.lo), ilo_strict = range.lo_strict;
    if (range.hi) ihi = map(*range.hi), ihi_strict = range.hi_strict;
  } else {
    if (range.hi) ilo = map(*range.hi), ilo_strict = range.hi_strict;
    if (range.lo) ihi = map(*range.lo), ihi_strict = range.lo_strict;
  }
  Scalar floor_bound(static_cast<long>(min_index));
  Integer first;
  if (!ilo || *ilo < floor_bound || (*ilo == floor_bound && !ilo_strict))
    first = detail::next_in_class(floor_bound, true, r, m);
  else
    first = detail::next_in_class(*ilo, ilo_strict, r, m);
  if (!ihi) return true;
  Scalar f(first);
  return ihi_strict ? f < *ihi : f <= *ihi;
}

/// Does the tail rule place some index i > min_index inside the interval?
inline bool tail_hits(const TailRule& rule, const LabelInterval& iv, int64_t min_index) {
  if (const auto* ra = std::get_if<ResidueAffine>(&rule)) {
    for (int64_t r = 0; r < ra->modulus; ++r) {
      const auto& p = ra->pieces[static_cast<size_t>(r)];
      auto range = iv.in_tier(p.tier);
      if (range && piece_hits(p, r, ra->modulus, *range, min_index)) return true;
    }
    return false;
  }
  const auto& d = std::get<DenseInTier>(rule);
  auto range = iv.in_tier(d.tier);
  if (!range) return false;
  // Work with positive rationals q, label offset = ±q.
  OffsetRange q;
  if (!d.reversed) {
    q = *range;
  } else {
    if (range->hi) q.lo = -*range->hi, q.lo_strict = range->hi_strict;
    if (range->lo) q.hi = -*range->lo, q.hi_strict = range->lo_strict;
  }
  if (!q.lo || *q.lo <= Scalar(0)) q.lo = Scalar(0), q.lo_strict = true;
  if (q.empty()) return false;
  if (q.hi && *q.lo == *q.hi) return cw_index(*q.lo) > min_index;
  return true;  // an open interval of positive rationals: infinitely many indices
}

/// Does the coloring's image meet the interval (window indices and tail beyond the window)?
inline bool image_hits(const Coloring& c, const LabelInterval& iv) {
  for (const auto& l : c.window)
    if (iv.contains(l)) return true;
  return tail_hits(c.tail, iv, c.n0());
}

namespace detail {

// Integer solutions of A x - B y = C exist with x >= x0, y >= y0?
inline bool diophantine_quadrant(Integer A, Integer B, Integer C, const Integer& x0, const Integer& y0) {
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
  // s*A + t*B = g; particular solution of A x - B y = C: x = s*C/g, y = -t*C/g.
  Integer rem;
  mpz_tdiv_r(rem.get_mpz_t(), C.get_mpz_t(), g.get_mpz_t());
  if (rem != 0) return false;
  Integer xp = s * (C / g), yp = -t * (C / g);
  Integer dx = B / g, dy = A / g;  // x = xp + dx k, y = yp + dy k
  // Need xp + dx k >= x0 and yp + dy k >= y0.
  std::optional<Integer> kmin, kmax;
  auto constrain = [&](const Integer& p, const Integer& d, const Integer& bound) {
    if (d == 0) return p >= bound;
    Integer need = bound - p;  // d k >= need
    if (d > 0) {
      Integer k;
      mpz_cdiv_q(k.get_mpz_t(), need.get_mpz_t(), d.get_mpz_t());
      if (!kmin || k > *kmin) kmin = k;
    } else {
      Integer k;
      mpz_fdiv_q(k.get_mpz_t(), need.get_mpz_t(), d.get_mpz_t());
      if (!kmax || k < *kmax) kmax = k;
    }
    return true;
  };
  if (!constrain(xp, dx, x0) || !constrain(yp, dy, y0)) return false;
  return !(kmin && kmax && *kmin > *kmax);
}

// Do distinct residue pieces r != q of one rule produce a common label at
// indices > n0 (excluding the allowed equal-constant case)?
inline bool pieces_collide(const AffinePiece& p, int64_t r, const AffinePiece& q, int64_t rq, int64_t m, int64_t n0) {
  if (p.tier != q.tier) return false;
  if (p.a.is_zero() && q.a.is_zero()) return false;  // equal constants merge; unequal never meet
  if (p.a.is_zero() || q.a.is_zero()) {
    const AffinePiece& c = p.a.is_zero() ? p : q;
    const AffinePiece& v = p.a.is_zero() ? q : p;
    int64_t rv = p.a.is_zero() ? rq : r;
    return piece_hits(v, rv, m, OffsetRange{c.b, false, c.b, false}, n0);
  }
  // i = r + m x, j = rq + m y: p.a (r + m x) + p.b = q.a (rq + m y) + q.b.
  Integer D = lcm_of(lcm_of(p.a.den(), p.b.den()), lcm_of(q.a.den(), q.b.den()));
  Scalar sD(D);
  Integer A = (p.a * sD * Scalar(static_cast<long>(m))).num();
  Integer B = (q.a * sD * Scalar(static_cast<long>(m))).num();
  Integer C = ((q.a * Scalar(static_cast<long>(rq)) + q.b - p.a * Scalar(static_cast<long>(r)) - p.b) * sD).num();
  // Indices must exceed n0 and be >= 1.
  int64_t lim = std::max<int64_t>(n0, 0);
  auto first_x = [&](int64_t res) -> Integer {
    Integer need = Integer(static_cast<long>(lim - res));  // r + m x > lim  <=>  m x > lim - r
    Integer mm = m;
    return floor_div(need, mm) + 1;
  };
  return diophantine_quadrant(A, B, C, first_x(r), first_x(rq));
}

}  // namespace detail

/// Throws LabelCollision if two residue pieces clash. Returns normally otherwise.
inline void check_collisions(const Coloring& c) {
  const auto* ra = std::get_if<ResidueAffine>(&c.tail);
  if (!ra) return;
  for (int64_t r = 0; r < ra->modulus; ++r)
    for (int64_t q = r + 1; q < ra->modulus; ++q)
      if (detail::pieces_collide(ra->pieces[static_cast<size_t>(r)], r, ra->pieces[static_cast<size_t>(q)], q,
                                 ra->modulus, c.n0()))
        fail(ErrorCode::LabelCollision, "residue classes " + std::to_string(r) + " and " + std::to_string(q) +
                                            " share a label");
}

inline void check_well_formed(const Coloring& c) {
  if (const auto* ra = std::get_if<ResidueAffine>(&c.tail)) {
    if (ra->modulus < 1) fail(ErrorCode::SemanticError, "tail modulus must be >= 1");
    if (static_cast<int64_t>(ra->pieces.size()) != ra->modulus)
      fail(ErrorCode::SemanticError, "tail needs one piece per residue");
  }
}

/// Canonical form: minimal tail period and minimal window.
inline Coloring canonical(Coloring c) {
  check_well_formed(c);
  if (auto* ra = std::get_if<ResidueAffine>(&c.tail)) {
    for (int64_t d = 1; d < ra->modulus; ++d) {
      if (ra->modulus % d != 0) continue;
      bool ok = true;
      for (int64_t r = 0; r < ra->modulus && ok; ++r)
        ok = ra->pieces[static_cast<size_t>(r)] == ra->pieces[static_cast<size_t>(r % d)];
      if (ok) {
        ra->pieces.resize(static_cast<size_t>(d));
        ra->modulus = d;
        break;
      }
    }
  }
  check_collisions(c);
  while (!c.window.empty() && c.window.back() == tail_label(c.tail, c.n0())) {
    Coloring shorter = c;
    shorter.window.pop_back();
    try {
      check_collisions(shorter);
    } catch (const Error&) {
      break;  // the window entry is needed to keep the tail collision-free
    }
    c = std::move(shorter);
  }
  return c;
}

/// Whether every label class is a single index.
inline bool is_injective(const Coloring& c) {
  if (const auto* ra = std::get_if<ResidueAffine>(&c.tail))
    for (const auto& p : ra->pieces)
      if (p.a.is_zero()) return false;
  for (size_t i = 0; i < c.window.size(); ++i) {
    for (size_t j = i + 1; j < c.window.size(); ++j)
      if (c.window[i] == c.window[j]) return false;
    if (tail_hits(c.tail, LabelInterval::point(c.window[i]), c.n0())) return false;
  }
  return true;
}

/// Occupied tiers with boundedness: for each tier, whether labels escape to
/// +infinity or -infinity inside it, and whether it is dense.
struct TierProfile {
  int64_t tier = 0;
  bool up = false;
  bool down = false;
  bool dense = false;
};

inline std::vector<TierProfile> tier_profiles(const std::vector<const Coloring*>& parts,
                                              const std::vector<Label>& extra = {}) {
  std::vector<TierProfile> out;
  auto at = [&](int64_t t) -> TierProfile& {
    for (auto& p : out)
      if (p.tier == t) return p;
    out.push_back({t, false, false, false});
    return out.back();
  };
  for (const auto& l : extra) at(l.tier);
  for (const Coloring* c : parts) {
    for (const auto& l : c->window) at(l.tier);
    if (const auto* ra = std::get_if<ResidueAffine>(&c->tail)) {
      for (const auto& p : ra->pieces) {
        auto& tp = at(p.tier);
        if (p.a.sign() > 0) tp.up = true;
        if (p.a.sign() < 0) tp.down = true;
      }
    } else {
      const auto& d = std::get<DenseInTier>(c->tail);
      at(d.tier).dense = true;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.tier < b.tier; });
  return out;
}

/// The union of the label sets embeds in ℤ as an ordered set.
inline bool embeds_in_integers(const std::vector<TierProfile>& tiers) {
  for (size_t k = 0; k < tiers.size(); ++k) {
    if (tiers[k].dense) return false;
    if (tiers[k].up && k + 1 < tiers.size()) return false;
    if (tiers[k].down && k > 0) return false;
  }
  return true;
}

inline std::string coloring_str(const Coloring& c) {
  std::string s = "window[";
  for (size_t i = 0; i < c.window.size(); ++i) s += (i ? " " : "") + c.window[i].str();
  s += "] tail ";
  if (const auto* ra = std::get_if<ResidueAffine>(&c.tail)) {
    s += "mod " + std::to_string(ra->modulus);
    for (size_t r = 0; r < ra->pieces.size(); ++r) {
      const auto& p = ra->pieces[r];
      s += " [" + std::to_string(r) + ": " + std::to_string(p.tier) + ", " + p.a.str() + ", " + p.b.str() + "]";
    }
  } else {
    const auto& d = std::get<DenseInTier>(c.tail);
    s += "dense " + std::to_string(d.tier) + (d.reversed ? " reversed" : "");
  }
  return s;
}

}  // namespace genflag
