#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <variant>

#include "lo237/numerics/interval.hpp"
#include "lo237/numerics/number_field.hpp"

namespace lo237::num {

// A real number given by a lazily evaluated expression. Enclosures are
// memoized per precision and refinement never widens. Where the expression
// reduces to exact rational or number-field arithmetic, the exact form is
// carried along and used for sign determination of true zeros.
class CertReal {
public:
  using ExactValue = std::variant<Rational, FieldElem>;

  CertReal();  // exact zero

  static CertReal from_rational(const Rational& q);
  static CertReal from_integer(long v);
  static CertReal from_field(const FieldElem& e);
  static CertReal cos_pi(const Rational& q);
  static CertReal sin_pi(const Rational& q);
  // Canonical ray angle in units of pi; u, v are the ray coordinates and
  // lower_half selects the branch (see Interval::angle_pi).
  static CertReal angle_pi(const CertReal& u, const CertReal& v, bool lower_half);
  // Opaque refinable value (used e.g. for series with explicit tail bounds).
  static CertReal opaque(std::function<Interval(mpfr_prec_t)> eval);

  CertReal operator+(const CertReal& rhs) const;
  CertReal operator-(const CertReal& rhs) const;
  CertReal operator*(const CertReal& rhs) const;
  CertReal operator/(const CertReal& rhs) const;
  CertReal operator-() const;
  CertReal sqrt() const;
  CertReal add_integer(long k) const;

  // Monotone refinable enclosure: for p < q, enclosure(q) is contained in
  // enclosure(p).
  Interval enclosure(mpfr_prec_t prec) const;

  const std::optional<ExactValue>& exact() const;

  // Certified sign; refines up to max_bits then falls back to the exact
  // form. Throws PrecisionExhausted when neither route decides.
  int certified_sign(unsigned max_bits = 4096) const;

  // Convenience: certified strict comparison against another value, refining
  // both sides together. nullopt only when the budget is exhausted.
  static std::optional<int> try_compare(const CertReal& a, const CertReal& b,
                                        unsigned max_bits);

  struct Node;  // implementation detail, defined in cert_real.cpp

private:
  explicit CertReal(std::shared_ptr<Node> n) : node_(std::move(n)) {}
  std::shared_ptr<Node> node_;
};

}  // namespace lo237::num
