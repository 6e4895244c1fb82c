#include "lo237/numerics/cert_real.hpp"

#include <cassert>

namespace lo237::num {

namespace {
enum class Kind { leaf_rational, leaf_field, leaf_cos_pi, leaf_sin_pi, leaf_opaque,
                  add, sub, mul, div, neg, sqrt_, angle_pi_node, add_int };
}

struct CertReal::Node {
  Kind kind;
  std::shared_ptr<Node> lhs, rhs;
  Rational q;              // rational payload
  FieldElem elem;          // field payload
  long k = 0;              // integer payload / angle branch flag
  std::function<Interval(mpfr_prec_t)> fn;
  std::optional<ExactValue> exact;

  // Per-precision memo; every new enclosure is intersected with the
  // tightest known one, so refinement is monotone by construction.
  std::map<mpfr_prec_t, Interval> memo;
  std::optional<Interval> tightest;

  Interval eval(mpfr_prec_t prec);
  Interval compute(mpfr_prec_t prec);
};

Interval CertReal::Node::eval(mpfr_prec_t prec) {
  auto it = memo.find(prec);
  if (it != memo.end()) return it->second;
  Interval raw;
  if (exact.has_value()) {
    // The exact form gives the tightest possible enclosure directly.
    if (const Rational* r = std::get_if<Rational>(&*exact)) {
      raw = Interval::from_rational(*r, prec);
    } else {
      raw = std::get<FieldElem>(*exact).enclosure(prec);
    }
  } else {
    raw = compute(prec);
  }
  if (tightest.has_value()) raw = raw.intersect(*tightest);
  tightest = raw;
  memo.emplace(prec, raw);
  return raw;
}

Interval CertReal::Node::compute(mpfr_prec_t prec) {
  const mpfr_prec_t p = prec + 8;
  switch (kind) {
    case Kind::leaf_rational: return Interval::from_rational(q, prec);
    case Kind::leaf_field: return elem.enclosure(prec);
    case Kind::leaf_cos_pi: return Interval::cos_pi(q, prec);
    case Kind::leaf_sin_pi: return Interval::sin_pi(q, prec);
    case Kind::leaf_opaque: return fn(prec);
    case Kind::add: return lhs->eval(p) + rhs->eval(p);
    case Kind::sub: return lhs->eval(p) - rhs->eval(p);
    case Kind::mul: return lhs->eval(p) * rhs->eval(p);
    case Kind::div: return lhs->eval(p) / rhs->eval(p);
    case Kind::neg: return lhs->eval(p).neg();
    case Kind::sqrt_: return lhs->eval(p).sqrt();
    case Kind::add_int: return lhs->eval(p).add_integer(k);
    case Kind::angle_pi_node:
      return Interval::angle_pi(lhs->eval(p), rhs->eval(p), k != 0);
  }
  throw std::logic_error("CertReal: unknown node kind");
}

namespace {

using Exact = std::optional<CertReal::ExactValue>;

// Lift two exact values into a common domain if possible.
std::optional<std::pair<FieldElem, FieldElem>> as_common_field(
    const CertReal::ExactValue& a, const CertReal::ExactValue& b) {
  const FieldElem* fa = std::get_if<FieldElem>(&a);
  const FieldElem* fb = std::get_if<FieldElem>(&b);
  if (fa && fb) {
    if (fa->field() == fb->field()) return std::make_pair(*fa, *fb);
    auto ra = fa->as_rational();
    auto rb = fb->as_rational();
    if (rb.has_value()) {
      return std::make_pair(*fa, FieldElem::from_rational(fa->field(), *rb));
    }
    if (ra.has_value()) {
      return std::make_pair(FieldElem::from_rational(fb->field(), *ra), *fb);
    }
    return std::nullopt;
  }
  if (fa) {
    return std::make_pair(*fa, FieldElem::from_rational(fa->field(),
                                                        std::get<Rational>(b)));
  }
  if (fb) {
    return std::make_pair(FieldElem::from_rational(fb->field(), std::get<Rational>(a)),
                          *fb);
  }
  return std::nullopt;
}

Exact combine_exact(Kind kind, const Exact& a, const Exact& b) {
  if (!a.has_value()) return std::nullopt;
  if (kind == Kind::neg) {
    if (const Rational* r = std::get_if<Rational>(&*a)) return CertReal::ExactValue(Rational(-*r));
    return CertReal::ExactValue(-std::get<FieldElem>(*a));
  }
  if (!b.has_value()) return std::nullopt;
  const Rational* ra = std::get_if<Rational>(&*a);
  const Rational* rb = std::get_if<Rational>(&*b);
  if (ra && rb) {
    switch (kind) {
      case Kind::add: return CertReal::ExactValue(Rational(*ra + *rb));
      case Kind::sub: return CertReal::ExactValue(Rational(*ra - *rb));
      case Kind::mul: return CertReal::ExactValue(Rational(*ra * *rb));
      case Kind::div:
        if (*rb == 0) throw std::domain_error("CertReal: exact division by zero");
        return CertReal::ExactValue(Rational(*ra / *rb));
      default: return std::nullopt;
    }
  }
  auto common = as_common_field(*a, *b);
  if (!common.has_value()) return std::nullopt;
  const auto& [x, y] = *common;
  try {
    switch (kind) {
      case Kind::add: return CertReal::ExactValue(x + y);
      case Kind::sub: return CertReal::ExactValue(x - y);
      case Kind::mul: return CertReal::ExactValue(x * y);
      case Kind::div: return CertReal::ExactValue(x * y.inverse());
      default: return std::nullopt;
    }
  } catch (const std::domain_error&) {
    // Zero divisor in a numeric-only tower: fall back to enclosures.
    return std::nullopt;
  }
}

std::shared_ptr<CertReal::Node> make_node(Kind kind) {
  auto n = std::make_shared<CertReal::Node>();
  n->kind = kind;
  return n;
}

}  // namespace

CertReal::CertReal() : node_(make_node(Kind::leaf_rational)) {
  node_->q = 0;
  node_->exact = ExactValue(Rational(0));
}

CertReal CertReal::from_rational(const Rational& q) {
  auto n = make_node(Kind::leaf_rational);
  n->q = canonical(q);
  n->exact = ExactValue(n->q);
  return CertReal(std::move(n));
}

CertReal CertReal::from_integer(long v) { return from_rational(Rational(v)); }

CertReal CertReal::from_field(const FieldElem& e) {
  auto n = make_node(Kind::leaf_field);
  n->elem = e;
  auto r = e.as_rational();
  n->exact = r.has_value() ? ExactValue(*r) : ExactValue(e);
  return CertReal(std::move(n));
}

namespace {
// q - 2*floor(q/2), exactly in [0, 2).
Rational reduce_mod_two(Rational q) {
  q.canonicalize();
  Rational half = q / 2;
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), half.get_num_mpz_t(), half.get_den_mpz_t());
  return q - 2 * Rational(fl);
}
}  // namespace

CertReal CertReal::cos_pi(const Rational& q) {
  // Reduce mod 2 exactly; handle the rational special values so that exact
  // zeros stay exact.
  Rational r = reduce_mod_two(q);
  if (r == 0) return from_integer(1);
  if (r == 1) return from_integer(-1);
  if (r == Rational(1, 2) || r == Rational(3, 2)) return from_integer(0);
  if (r == Rational(1, 3) || r == Rational(5, 3)) return from_rational(Rational(1, 2));
  if (r == Rational(2, 3) || r == Rational(4, 3)) return from_rational(Rational(-1, 2));
  auto n = make_node(Kind::leaf_cos_pi);
  n->q = r;
  return CertReal(std::move(n));
}

CertReal CertReal::sin_pi(const Rational& q) {
  Rational r = reduce_mod_two(q);
  if (r == 0 || r == 1) return from_integer(0);
  if (r == Rational(1, 2)) return from_integer(1);
  if (r == Rational(3, 2)) return from_integer(-1);
  if (r == Rational(1, 6) || r == Rational(5, 6)) return from_rational(Rational(1, 2));
  if (r == Rational(7, 6) || r == Rational(11, 6)) return from_rational(Rational(-1, 2));
  auto n = make_node(Kind::leaf_sin_pi);
  n->q = r;
  return CertReal(std::move(n));
}

CertReal CertReal::angle_pi(const CertReal& u, const CertReal& v, bool lower_half) {
  auto n = make_node(Kind::angle_pi_node);
  n->lhs = u.node_;
  n->rhs = v.node_;
  n->k = lower_half ? 1 : 0;
  return CertReal(std::move(n));
}

CertReal CertReal::opaque(std::function<Interval(mpfr_prec_t)> eval) {
  auto n = make_node(Kind::leaf_opaque);
  n->fn = std::move(eval);
  return CertReal(std::move(n));
}

namespace {
std::shared_ptr<CertReal::Node> binary_node(Kind kind,
                                            const std::shared_ptr<CertReal::Node>& a,
                                            const std::shared_ptr<CertReal::Node>& b) {
  auto n = make_node(kind);
  n->lhs = a;
  n->rhs = b;
  n->exact = combine_exact(kind, a->exact, b->exact);
  return n;
}
}  // namespace

CertReal CertReal::operator+(const CertReal& rhs) const {
  return CertReal(binary_node(Kind::add, node_, rhs.node_));
}
CertReal CertReal::operator-(const CertReal& rhs) const {
  return CertReal(binary_node(Kind::sub, node_, rhs.node_));
}
CertReal CertReal::operator*(const CertReal& rhs) const {
  return CertReal(binary_node(Kind::mul, node_, rhs.node_));
}
CertReal CertReal::operator/(const CertReal& rhs) const {
  return CertReal(binary_node(Kind::div, node_, rhs.node_));
}

CertReal CertReal::operator-() const {
  auto n = make_node(Kind::neg);
  n->lhs = node_;
  n->exact = combine_exact(Kind::neg, node_->exact, std::nullopt);
  return CertReal(std::move(n));
}

CertReal CertReal::sqrt() const {
  auto n = make_node(Kind::sqrt_);
  n->lhs = node_;
  if (node_->exact.has_value()) {
    if (const Rational* r = std::get_if<Rational>(&*node_->exact)) {
      if (*r == 0) return from_integer(0);
      // Exact square root of a perfect rational square.
      Integer nr, dr;
      if (mpz_perfect_square_p(r->get_num_mpz_t()) &&
          mpz_perfect_square_p(r->get_den_mpz_t())) {
        mpz_sqrt(nr.get_mpz_t(), r->get_num_mpz_t());
        mpz_sqrt(dr.get_mpz_t(), r->get_den_mpz_t());
        return from_rational(Rational(nr) / Rational(dr));
      }
    }
  }
  return CertReal(std::move(n));
}

CertReal CertReal::add_integer(long k) const {
  auto n = make_node(Kind::add_int);
  n->lhs = node_;
  n->k = k;
  if (node_->exact.has_value()) {
    n->exact = combine_exact(Kind::add, node_->exact, ExactValue(Rational(k)));
  }
  return CertReal(std::move(n));
}

Interval CertReal::enclosure(mpfr_prec_t prec) const { return node_->eval(prec); }

const std::optional<CertReal::ExactValue>& CertReal::exact() const { return node_->exact; }

int CertReal::certified_sign(unsigned max_bits) const {
  if (node_->exact.has_value()) {
    if (const Rational* r = std::get_if<Rational>(&*node_->exact)) return sgn(*r);
    return std::get<FieldElem>(*node_->exact).certified_sign(max_bits);
  }
  for (mpfr_prec_t p = 64;; p *= 2) {
    auto s = enclosure(p).sign();
    if (s.has_value()) return *s;
    if (static_cast<unsigned>(p) >= max_bits) break;
  }
  throw PrecisionExhausted("CertReal::certified_sign: no exact form and the "
                           "precision budget is exhausted");
}

std::optional<int> CertReal::try_compare(const CertReal& a, const CertReal& b,
                                         unsigned max_bits) {
  CertReal d = a - b;
  if (d.exact().has_value()) {
    try {
      return d.certified_sign(max_bits);
    } catch (const PrecisionExhausted&) {
      return std::nullopt;
    }
  }
  for (mpfr_prec_t p = 64;; p *= 2) {
    auto s = d.enclosure(p).sign();
    if (s.has_value()) return s;
    if (static_cast<unsigned>(p) >= max_bits) return std::nullopt;
  }
}

}  // namespace lo237::num
