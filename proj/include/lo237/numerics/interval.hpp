#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace lo237::num {

using Rational = mpq_class;
using Integer = mpz_class;

// mpq_class(n, d) does not canonicalize; every boundary taking user-supplied
// numerator/denominator pairs goes through here.
inline Rational canonical(Rational q) {
  q.canonicalize();
  return q;
}

// Raised when a sign cannot be certified within the configured precision
// budget and no exact representation of the expression is available.
class PrecisionExhausted : public std::runtime_error {
public:
  explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Closed interval [lo, hi] with MPFR endpoints. Every operation rounds
// outward, so an interval computed from enclosures of the operands always
// encloses the exact real value.
class Interval {
public:
  Interval();  // [0, 0]
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static Interval from_rational(const Rational& q, mpfr_prec_t prec);
  static Interval from_integer(long v);
  static Interval pi(mpfr_prec_t prec);

  mpfr_prec_t precision() const { return prec_; }

  Interval operator+(const Interval& rhs) const;
  Interval operator-(const Interval& rhs) const;
  Interval operator*(const Interval& rhs) const;
  Interval operator/(const Interval& rhs) const;  // rhs must exclude zero
  Interval neg() const;
  Interval sqrt() const;  // requires lo >= 0
  Interval add_integer(long k) const;
  Interval abs() const;
  // Enclosure of max(x, y) over the two intervals.
  static Interval max_with(const Interval& a, const Interval& b);
  // [0, q] for q >= 0.
  static Interval zero_to(const Rational& q, mpfr_prec_t prec);

  // Tightest interval contained in both. Throws if disjoint (which would
  // mean one of the operands was not a valid enclosure of the same value).
  Interval intersect(const Interval& other) const;

  bool contains_zero() const;
  bool is_exact_zero() const;
  // +1 if lo > 0, -1 if hi < 0, 0 if the interval is exactly [0,0],
  // nullopt if the sign is not determined.
  std::optional<int> sign() const;

  // Certified comparison: sign of (a - b) when determined.
  static std::optional<int> compare(const Interval& a, const Interval& b);

  // If ceil(lo) == floor(hi), the unique integer in the interval.
  std::optional<long> pinned_integer() const;

  // True if width <= 2^e.
  bool width_below_pow2(long e) const;

  double lo_double() const;
  double hi_double() const;
  double mid_double() const;
  std::string to_string(int digits = 17) const;

  // cos(pi*q), sin(pi*q) for exact rational q.
  static Interval cos_pi(const Rational& q, mpfr_prec_t prec);
  static Interval sin_pi(const Rational& q, mpfr_prec_t prec);

  // Canonical angle of the ray (u, v) in units of pi.
  // lower_half = false: requires v certified > 0, result in (0, 1).
  // lower_half = true:  requires v certified < 0, result in (1, 2).
  static Interval angle_pi(const Interval& u, const Interval& v, bool lower_half);

private:
  Interval(mpfr_prec_t prec, bool);  // uninitialized endpoints at prec

  mpfr_t lo_;
  mpfr_t hi_;
  mpfr_prec_t prec_;

  friend Interval interval_detail_make(mpfr_prec_t prec);
  friend mpfr_ptr interval_detail_lo(Interval& iv);
  friend mpfr_ptr interval_detail_hi(Interval& iv);
};

// Internal helpers for modules that assemble intervals from raw endpoints.
Interval interval_detail_make(mpfr_prec_t prec);
mpfr_ptr interval_detail_lo(Interval& iv);
mpfr_ptr interval_detail_hi(Interval& iv);

}  // namespace lo237::num
