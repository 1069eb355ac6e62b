#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

#include "genflag/error.hpp"

namespace genflag {

using Integer = mpz_class;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator (zero is 0/1).
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
  Scalar(const Integer& v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Integer& num, const Integer& den) : q_(num, den) {
    if (den == 0) fail(ErrorCode::SemanticError, "zero denominator");
    q_.canonicalize();
  }
  explicit Scalar(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Parses "p" or "p/q" (optional sign). Throws SyntaxError on junk.
  static Scalar parse(const std::string& text) {
    mpq_class q;
    if (text.empty() || q.set_str(text, 10) != 0) fail(ErrorCode::SyntaxError, "bad rational '" + text + "'");
    if (q.get_den() == 0) fail(ErrorCode::SyntaxError, "zero denominator in '" + text + "'");
    q.canonicalize();
    return Scalar(q);
  }

  Integer num() const { return q_.get_num(); }
  Integer den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  /// Reduced fraction; integers print without a denominator.
  std::string str() const { return q_.get_str(10); }

  Scalar& operator+=(const Scalar& o) { q_ += o.q_; return *this; }
  Scalar& operator-=(const Scalar& o) { q_ -= o.q_; return *this; }
  Scalar& operator*=(const Scalar& o) { q_ *= o.q_; return *this; }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) fail(ErrorCode::SemanticError, "division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator-(const Scalar& a) { return Scalar(mpq_class(-a.q_)); }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

 private:
  mpq_class q_;
};

inline Integer floor_of(const Scalar& s) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), s.num().get_mpz_t(), s.den().get_mpz_t());
  return r;
}

inline Integer ceil_of(const Scalar& s) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), s.num().get_mpz_t(), s.den().get_mpz_t());
  return r;
}

inline Integer lcm_of(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd_of(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline int64_t to_i64(const Integer& z) {
  if (!z.fits_slong_p()) fail(ErrorCode::SemanticError, "integer out of range: " + z.get_str());
  return z.get_si();
}

}  // namespace genflag

template <>
struct std::hash<genflag::Scalar> {
  size_t operator()(const genflag::Scalar& s) const noexcept {
    return std::hash<std::string>{}(s.str());
  }
};
