#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lo237/numerics/interval.hpp"

namespace lo237::num {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

// Element of a NumberField: a rational coordinate vector in the monomial
// basis of the tower. Arithmetic is exact.
class FieldElem {
public:
  FieldElem() = default;
  FieldElem(FieldPtr field, std::vector<Rational> coords);

  static FieldElem from_rational(const FieldPtr& field, const Rational& q);

  const FieldPtr& field() const { return field_; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_zero() const;  // exact: zero coordinate vector
  std::optional<Rational> as_rational() const;

  bool operator==(const FieldElem& rhs) const;
  bool operator!=(const FieldElem& rhs) const { return !(*this == rhs); }

  FieldElem operator+(const FieldElem& rhs) const;
  FieldElem operator-(const FieldElem& rhs) const;
  FieldElem operator*(const FieldElem& rhs) const;
  FieldElem operator-() const;
  FieldElem scaled(const Rational& q) const;
  FieldElem inverse() const;  // throws on zero / zero divisor

  // Exact sign. Zero coordinate vectors give 0 immediately; otherwise the
  // enclosure is refined until the sign is certified. For fields without a
  // certified-irreducible tower the refinement is capped and
  // PrecisionExhausted is thrown if the cap is reached.
  int certified_sign(unsigned max_bits = 1u << 14) const;

  Interval enclosure(mpfr_prec_t prec) const;

  std::string to_string() const;   // human-readable polynomial form
  std::string key_string() const;  // canonical form for exact hashing

private:
  FieldPtr field_;
  std::vector<Rational> coords_;
};

// A tower of real algebraic extensions of Q. Each level adjoins one root of
// a monic polynomial with coefficients in the level below, pinned down by an
// isolating interval with rational endpoints. Immutable after construction
// apart from internal enclosure caches.
class NumberField : public std::enable_shared_from_this<NumberField> {
public:
  // Witness that y^2 - d is irreducible over a base Q(t): an isolating
  // interval for a different real root t' of t's minimal polynomial such
  // that d evaluated at t' is certified negative (so d is not a square).
  struct ConjugateWitness {
    Rational lo;
    Rational hi;
  };

  static FieldPtr rationals();

  // Adjoin a root of y^d + tail[d-1] y^{d-1} + ... + tail[0] isolated in
  // [root_lo, root_hi] (endpoint signs must certify a sign change).
  FieldPtr extend(const std::string& gen_name, std::vector<FieldElem> tail,
                  const Rational& root_lo, const Rational& root_hi,
                  const std::optional<ConjugateWitness>& witness = std::nullopt) const;

  bool is_rationals() const { return base_ == nullptr; }
  const FieldPtr& base() const { return base_; }
  size_t dim() const { return dim_; }
  bool zero_test_valid() const { return zero_test_valid_; }
  const std::string& gen_name() const { return gen_name_; }

  FieldElem zero() const;
  FieldElem one() const;
  FieldElem generator() const;  // the root adjoined at this level
  FieldElem lift(const FieldElem& from_base) const;

  // Tower description: one line per level with generator name, minimal
  // polynomial and isolating interval.
  std::string describe() const;

  // Enclosure of the adjoined root at the given precision.
  Interval root_enclosure(mpfr_prec_t prec) const;

private:
  friend class FieldElem;

  NumberField() = default;

  void build_table();
  const std::vector<Interval>& basis_enclosures(mpfr_prec_t prec) const;
  std::vector<Rational> mul_vec(const std::vector<Rational>& x,
                                const std::vector<Rational>& y) const;
  void ensure_root_bits(long bits) const;

  FieldPtr base_;  // null for Q
  std::string gen_name_;
  size_t rel_degree_ = 1;
  size_t dim_ = 1;
  std::vector<std::vector<Rational>> poly_tail_;  // coords over base, low to high
  bool zero_test_valid_ = true;

  // basis index = power * base_dim + base_index
  std::vector<std::vector<Rational>> table_;  // dim_*dim_ entries

  // Root isolation state, refined on demand by certified bisection.
  mutable Rational root_lo_, root_hi_;
  mutable int sign_at_lo_ = 0;
  mutable std::map<mpfr_prec_t, std::vector<Interval>> basis_cache_;
  mutable std::vector<Interval> tightest_basis_;
};

}  // namespace lo237::num
