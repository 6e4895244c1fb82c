#include "lo237/numerics/interval.hpp"

#include <algorithm>
#include <cmath>

namespace lo237::num {

namespace {
constexpr mpfr_prec_t kMinPrec = 16;
}

Interval interval_detail_make(mpfr_prec_t prec) { return Interval(prec, true); }
mpfr_ptr interval_detail_lo(Interval& iv) { return iv.lo_; }
mpfr_ptr interval_detail_hi(Interval& iv) { return iv.hi_; }

Interval::Interval(mpfr_prec_t prec, bool) : prec_(std::max(prec, kMinPrec)) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
}

Interval::Interval() : Interval(kMinPrec, true) {
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) : Interval(other.prec_, true) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : prec_(other.prec_) {
  mpfr_init2(lo_, kMinPrec);
  mpfr_init2(hi_, kMinPrec);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.prec_);
    mpfr_set_prec(hi_, other.prec_);
    prec_ = other.prec_;
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  std::swap(prec_, other.prec_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::from_rational(const Rational& q, mpfr_prec_t prec) {
  Interval r(prec, true);
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_integer(long v) {
  Interval r(64, true);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
  Interval r(prec, true);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::operator+(const Interval& rhs) const {
  Interval r(std::max(prec_, rhs.prec_), true);
  mpfr_add(r.lo_, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, hi_, rhs.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::operator-(const Interval& rhs) const {
  Interval r(std::max(prec_, rhs.prec_), true);
  mpfr_sub(r.lo_, lo_, rhs.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, rhs.lo_, MPFR_RNDU);
  return r;
}

Interval Interval::operator*(const Interval& rhs) const {
  const mpfr_prec_t p = std::max(prec_, rhs.prec_);
  Interval r(p, true);
  mpfr_t t;
  mpfr_init2(t, p);
  // lo: min of the four products rounded down.
  mpfr_mul(r.lo_, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_mul(t, lo_, rhs.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_mul(t, hi_, rhs.lo_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_mul(t, hi_, rhs.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  // hi: max of the four products rounded up.
  mpfr_mul(r.hi_, lo_, rhs.lo_, MPFR_RNDU);
  mpfr_mul(t, lo_, rhs.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_mul(t, hi_, rhs.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_mul(t, hi_, rhs.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

Interval Interval::operator/(const Interval& rhs) const {
  if (rhs.contains_zero()) {
    throw std::domain_error("Interval division by interval containing zero");
  }
  const mpfr_prec_t p = std::max(prec_, rhs.prec_);
  Interval r(p, true);
  mpfr_t t;
  mpfr_init2(t, p);
  mpfr_div(r.lo_, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_div(t, lo_, rhs.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_div(t, hi_, rhs.lo_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_div(t, hi_, rhs.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_div(r.hi_, lo_, rhs.lo_, MPFR_RNDU);
  mpfr_div(t, lo_, rhs.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_div(t, hi_, rhs.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_div(t, hi_, rhs.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

Interval Interval::neg() const {
  Interval r(prec_, true);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval Interval::sqrt() const {
  if (mpfr_sgn(lo_) < 0) {
    throw std::domain_error("Interval sqrt of interval with negative lower bound");
  }
  Interval r(prec_, true);
  mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::add_integer(long k) const {
  Interval r(prec_, true);
  mpfr_add_si(r.lo_, lo_, k, MPFR_RNDD);
  mpfr_add_si(r.hi_, hi_, k, MPFR_RNDU);
  return r;
}

Interval Interval::abs() const {
  Interval r(prec_, true);
  if (mpfr_sgn(lo_) >= 0) {
    mpfr_set(r.lo_, lo_, MPFR_RNDD);
    mpfr_set(r.hi_, hi_, MPFR_RNDU);
  } else if (mpfr_sgn(hi_) <= 0) {
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  } else {
    mpfr_set_zero(r.lo_, 1);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, hi_, MPFR_RNDU);
  }
  return r;
}

Interval Interval::max_with(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec_, b.prec_), true);
  mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::zero_to(const Rational& q, mpfr_prec_t prec) {
  Interval r(prec, true);
  mpfr_set_zero(r.lo_, 1);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::intersect(const Interval& other) const {
  if (mpfr_cmp(lo_, other.hi_) > 0 || mpfr_cmp(other.lo_, hi_) > 0) {
    throw std::logic_error("Interval::intersect: disjoint enclosures of one value");
  }
  Interval r(std::max(prec_, other.prec_), true);
  mpfr_max(r.lo_, lo_, other.lo_, MPFR_RNDD);
  mpfr_min(r.hi_, hi_, other.hi_, MPFR_RNDU);
  return r;
}

bool Interval::contains_zero() const {
  return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool Interval::is_exact_zero() const {
  return mpfr_zero_p(lo_) && mpfr_zero_p(hi_);
}

std::optional<int> Interval::sign() const {
  if (mpfr_sgn(lo_) > 0) return 1;
  if (mpfr_sgn(hi_) < 0) return -1;
  if (is_exact_zero()) return 0;
  return std::nullopt;
}

std::optional<int> Interval::compare(const Interval& a, const Interval& b) {
  if (mpfr_cmp(a.hi_, b.lo_) < 0) return -1;
  if (mpfr_cmp(a.lo_, b.hi_) > 0) return 1;
  if (mpfr_equal_p(a.lo_, a.hi_) && mpfr_equal_p(b.lo_, b.hi_) &&
      mpfr_equal_p(a.lo_, b.lo_)) {
    return 0;
  }
  return std::nullopt;
}

std::optional<long> Interval::pinned_integer() const {
  mpfr_t c, f;
  mpfr_init2(c, prec_);
  mpfr_init2(f, prec_);
  mpfr_ceil(c, lo_);
  mpfr_floor(f, hi_);
  std::optional<long> result;
  if (mpfr_equal_p(c, f) && mpfr_fits_slong_p(c, MPFR_RNDN)) {
    result = mpfr_get_si(c, MPFR_RNDN);
  }
  mpfr_clear(c);
  mpfr_clear(f);
  return result;
}

bool Interval::width_below_pow2(long e) const {
  mpfr_t w, b;
  mpfr_init2(w, prec_);
  mpfr_init2(b, prec_);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  mpfr_set_si(b, 1, MPFR_RNDN);
  mpfr_mul_2si(b, b, e, MPFR_RNDN);
  const bool ok = mpfr_cmp(w, b) <= 0;
  mpfr_clear(w);
  mpfr_clear(b);
  return ok;
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
double Interval::mid_double() const { return 0.5 * (lo_double() + hi_double()); }

std::string Interval::to_string(int digits) const {
  char* s = nullptr;
  mpfr_t mid;
  mpfr_init2(mid, prec_);
  mpfr_add(mid, lo_, hi_, MPFR_RNDN);
  mpfr_div_2si(mid, mid, 1, MPFR_RNDN);
  mpfr_asprintf(&s, "%.*Rg", digits, mid);
  std::string out(s);
  mpfr_free_str(s);
  mpfr_clear(mid);
  return out;
}

namespace {

// Enclosure of f(pi*q) where f is 1-Lipschitz (sin or cos), via evaluation
// at one endpoint of the enclosure of pi*q plus the width as error bound.
Interval lipschitz_trig(const Rational& q, mpfr_prec_t prec, bool is_cos) {
  const mpfr_prec_t p = prec + 16;
  Interval t = Interval::pi(p) * Interval::from_rational(q, p);
  Interval r = interval_detail_make(prec);
  mpfr_t v_lo, v_hi, w;
  mpfr_init2(v_lo, p);
  mpfr_init2(v_hi, p);
  mpfr_init2(w, p);
  if (is_cos) {
    mpfr_cos(v_lo, interval_detail_lo(t), MPFR_RNDD);
    mpfr_cos(v_hi, interval_detail_lo(t), MPFR_RNDU);
  } else {
    mpfr_sin(v_lo, interval_detail_lo(t), MPFR_RNDD);
    mpfr_sin(v_hi, interval_detail_lo(t), MPFR_RNDU);
  }
  mpfr_sub(w, interval_detail_hi(t), interval_detail_lo(t), MPFR_RNDU);
  mpfr_sub(interval_detail_lo(r), v_lo, w, MPFR_RNDD);
  mpfr_add(interval_detail_hi(r), v_hi, w, MPFR_RNDU);
  mpfr_clear(v_lo);
  mpfr_clear(v_hi);
  mpfr_clear(w);
  return r;
}

}  // namespace

Interval Interval::cos_pi(const Rational& q, mpfr_prec_t prec) {
  return lipschitz_trig(q, prec, true);
}

Interval Interval::sin_pi(const Rational& q, mpfr_prec_t prec) {
  return lipschitz_trig(q, prec, false);
}

Interval Interval::angle_pi(const Interval& u, const Interval& v, bool lower_half) {
  if (!lower_half && mpfr_sgn(v.lo_) <= 0) {
    throw std::domain_error("angle_pi: v not certified positive");
  }
  if (lower_half && mpfr_sgn(v.hi_) >= 0) {
    throw std::domain_error("angle_pi: v not certified negative");
  }
  const mpfr_prec_t p = std::max({u.prec_, v.prec_, kMinPrec}) + 16;

  // atan2 at the midpoint of the box, rounded both ways.
  mpfr_t mu, mv, a_lo, a_hi, err, t;
  mpfr_init2(mu, p);
  mpfr_init2(mv, p);
  mpfr_init2(a_lo, p);
  mpfr_init2(a_hi, p);
  mpfr_init2(err, p);
  mpfr_init2(t, p);
  mpfr_add(mu, u.lo_, u.hi_, MPFR_RNDN);
  mpfr_div_2si(mu, mu, 1, MPFR_RNDN);
  mpfr_add(mv, v.lo_, v.hi_, MPFR_RNDN);
  mpfr_div_2si(mv, mv, 1, MPFR_RNDN);
  mpfr_atan2(a_lo, mv, mu, MPFR_RNDD);
  mpfr_atan2(a_hi, mv, mu, MPFR_RNDU);

  // Lipschitz bound: |grad atan2| = 1/r with r^2 >= lo(u^2 + v^2) > 0
  // (v is bounded away from zero), times the box diameter bound
  // width(u) + width(v) >= distance from the midpoint to any box point.
  Interval r2 = u * u + v * v;
  if (mpfr_sgn(r2.lo_) <= 0) {
    throw std::domain_error("angle_pi: ray box not separated from origin");
  }
  mpfr_sqrt(t, r2.lo_, MPFR_RNDD);
  mpfr_sub(err, u.hi_, u.lo_, MPFR_RNDU);
  mpfr_t wv;
  mpfr_init2(wv, p);
  mpfr_sub(wv, v.hi_, v.lo_, MPFR_RNDU);
  mpfr_add(err, err, wv, MPFR_RNDU);
  mpfr_clear(wv);
  mpfr_div(err, err, t, MPFR_RNDU);

  mpfr_sub(a_lo, a_lo, err, MPFR_RNDD);
  mpfr_add(a_hi, a_hi, err, MPFR_RNDU);

  Interval theta = interval_detail_make(p);
  mpfr_set(interval_detail_lo(theta), a_lo, MPFR_RNDD);
  mpfr_set(interval_detail_hi(theta), a_hi, MPFR_RNDU);
  mpfr_clear(mu);
  mpfr_clear(mv);
  mpfr_clear(a_lo);
  mpfr_clear(a_hi);
  mpfr_clear(err);
  mpfr_clear(t);

  Interval result = theta / Interval::pi(p);
  if (lower_half) {
    result = result.add_integer(2);  // atan2 in (-pi, 0): shift to (1, 2)
  }
  return result;
}

}  // namespace lo237::num
