#include <random>

#include "doctest.h"
#include "lo237/numerics/cert_real.hpp"
#include "lo237/numerics/interval.hpp"
#include "lo237/numerics/number_field.hpp"

using namespace lo237::num;

namespace {

// The tower used throughout: Q(L)(M) with L = 2cos(pi/7) a root of
// x^3 - x^2 - 2x + 1 and M = sqrt(L^2 - 3).
FieldPtr make_tower() {
  auto q = NumberField::rationals();
  std::vector<FieldElem> cubic = {
      FieldElem::from_rational(q, Rational(1)),
      FieldElem::from_rational(q, Rational(-2)),
      FieldElem::from_rational(q, Rational(-1)),
  };
  auto ql = q->extend("L", cubic, Rational(7, 4), Rational(15, 8));
  // mu^2 = L^2 - 3, i.e. tail = { -(L^2 - 3), 0 }
  std::vector<Rational> d_neg = {Rational(3), Rational(0), Rational(-1)};
  std::vector<FieldElem> quad = {
      FieldElem(ql, d_neg),
      FieldElem::from_rational(ql, Rational(0)),
  };
  NumberField::ConjugateWitness w{Rational(1, 4), Rational(1, 2)};
  return ql->extend("M", quad, Rational(0), Rational(1), w);
}

bool contained_in(const Interval& inner, const Interval& outer) {
  // inner subset of outer, checked on doubles with outward slack-free
  // endpoint comparison through the exact mpfr values via compare().
  auto lo_ok = Interval::compare(outer, inner);
  (void)lo_ok;
  return inner.lo_double() >= outer.lo_double() - 1e-300 &&
         inner.hi_double() <= outer.hi_double() + 1e-300;
}

}  // namespace

TEST_CASE("interval arithmetic encloses exact values") {
  Interval third = Interval::from_rational(Rational(1, 3), 64);
  Interval three = Interval::from_integer(3);
  Interval prod = third * three;
  CHECK(prod.contains_zero() == false);
  auto s = (prod - Interval::from_integer(1)).sign();
  CHECK(!s.has_value());  // 1/3*3 straddles 1 after outward rounding
  CHECK(prod.lo_double() <= 1.0);
  CHECK(prod.hi_double() >= 1.0);

  Interval r2 = Interval::from_integer(2).sqrt();
  Interval sq = r2 * r2;
  CHECK(sq.lo_double() <= 2.0);
  CHECK(sq.hi_double() >= 2.0);
}

TEST_CASE("cos_pi and sin_pi special values and enclosures") {
  CHECK(CertReal::cos_pi(Rational(1, 3)).certified_sign() == 1);
  auto exact_half = CertReal::cos_pi(Rational(1, 3)) - CertReal::from_rational(Rational(1, 2));
  CHECK(exact_half.certified_sign() == 0);
  CHECK(CertReal::sin_pi(Rational(1)).certified_sign() == 0);
  CHECK(CertReal::sin_pi(Rational(7, 5)).certified_sign() == -1);

  // 2cos(pi/7) = 1.8019377... by direct high-precision evaluation.
  CertReal lam = CertReal::from_integer(2) * CertReal::cos_pi(Rational(1, 7));
  Interval enc = lam.enclosure(128);
  CHECK(enc.lo_double() > 1.8019);
  CHECK(enc.hi_double() < 1.8020);
}

TEST_CASE("angle_pi encloses the canonical ray angle") {
  Interval one = Interval::from_integer(1);
  Interval a = Interval::angle_pi(one, one, false);
  // ray (1,1): angle pi/4, canonical value 1/4
  CHECK(a.lo_double() < 0.25);
  CHECK(a.hi_double() > 0.25);
  CHECK(a.hi_double() - a.lo_double() < 1e-9);

  Interval b = Interval::angle_pi(one, Interval::from_integer(-1), true);
  CHECK(b.lo_double() < 1.75);
  CHECK(b.hi_double() > 1.75);
}

TEST_CASE("tower construction: irreducibility certificate and exact arithmetic") {
  FieldPtr K = make_tower();
  CHECK(K->dim() == 6);
  CHECK(K->zero_test_valid());

  FieldElem lam = K->lift(K->base()->generator());
  FieldElem mu = K->generator();

  // mu^2 = lam^2 - 3 exactly
  FieldElem lhs = mu * mu;
  FieldElem rhs = lam * lam - FieldElem::from_rational(K, Rational(3));
  CHECK(lhs == rhs);

  // minimal polynomial of lam vanishes exactly
  FieldElem p = lam * lam * lam - lam * lam - lam.scaled(Rational(2)) +
                FieldElem::from_rational(K, Rational(1));
  CHECK(p.is_zero());
  CHECK(p.certified_sign() == 0);

  // field inverse: x * x^-1 = 1 for a mixed element
  FieldElem x = (lam + mu).scaled(Rational(1, 2));
  FieldElem xi = x.inverse();
  CHECK((x * xi) == K->one());

  // (lam + mu)/2 * (lam - mu)/2 = (lam^2 - mu^2)/4 = 3/4
  FieldElem y = (lam - mu).scaled(Rational(1, 2));
  CHECK((x * y) == FieldElem::from_rational(K, Rational(3, 4)));
}

TEST_CASE("lam^3 - lam^2 - 2 lam + 1 is zero: numeric oracle then exact route") {
  // Oracle first: evaluate the expression with transcendental leaves at
  // 200-bit precision and check |expr| < 2^-100.
  CertReal lam = CertReal::from_integer(2) * CertReal::cos_pi(Rational(1, 7));
  CertReal expr = lam * lam * lam - lam * lam -
                  CertReal::from_integer(2) * lam + CertReal::from_integer(1);
  Interval enc = expr.enclosure(200);
  CHECK(enc.width_below_pow2(-100));
  CHECK(enc.contains_zero());

  // Exact route: in the declared tower the same expression reduces to the
  // zero coordinate vector.
  FieldPtr K = make_tower();
  FieldElem lam_exact = K->lift(K->base()->generator());
  CertReal e2 = CertReal::from_field(lam_exact * lam_exact * lam_exact -
                                     lam_exact * lam_exact -
                                     lam_exact.scaled(Rational(2)) +
                                     FieldElem::from_rational(K, Rational(1)));
  CHECK(e2.certified_sign() == 0);
}

TEST_CASE("certified_sign examples") {
  // "1 - 1" -> zero, exact cancellation
  CertReal z = CertReal::from_integer(1) - CertReal::from_integer(1);
  CHECK(z.certified_sign() == 0);

  // 2cos(pi/7) - 1.8 -> positive (1.8 = 9/5)
  FieldPtr K = make_tower();
  FieldElem lam = K->lift(K->base()->generator());
  CertReal d = CertReal::from_field(lam) - CertReal::from_rational(Rational(9, 5));
  CHECK(d.certified_sign() == 1);

  // Same via the transcendental route.
  CertReal dt = CertReal::from_integer(2) * CertReal::cos_pi(Rational(1, 7)) -
                CertReal::from_rational(Rational(9, 5));
  CHECK(dt.certified_sign() == 1);
}

TEST_CASE("PrecisionExhausted on a true zero with no exact representation") {
  // cos(pi/5) = (1 + sqrt 5)/4; the sqrt leaf has no exact form, so the
  // genuinely-zero difference cannot be certified and must fail loudly.
  CertReal expr = CertReal::cos_pi(Rational(1, 5)) -
                  (CertReal::from_integer(1) + CertReal::from_integer(5).sqrt()) /
                      CertReal::from_integer(4);
  CHECK(!expr.exact().has_value());
  CHECK_THROWS_AS(expr.certified_sign(2048), PrecisionExhausted);
}

TEST_CASE("monotone refinement on random expressions") {
  FieldPtr K = make_tower();
  std::mt19937_64 rng(20260810);
  auto rand_rat = [&]() {
    long num = static_cast<long>(rng() % 41) - 20;
    long den = 1 + static_cast<long>(rng() % 12);
    return Rational(num, den);
  };
  for (int trial = 0; trial < 40; ++trial) {
    // Random expression over the tower generators and transcendental leaves.
    std::vector<CertReal> pool = {
        CertReal::from_field(K->lift(K->base()->generator())),
        CertReal::from_field(K->generator()),
        CertReal::cos_pi(Rational(1 + static_cast<long>(rng() % 9), 11)),
        CertReal::from_rational(rand_rat()),
    };
    CertReal e = pool[rng() % pool.size()];
    for (int step = 0; step < 6; ++step) {
      const CertReal& other = pool[rng() % pool.size()];
      switch (rng() % 3) {
        case 0: e = e + other; break;
        case 1: e = e - other; break;
        default: e = e * other; break;
      }
    }
    Interval coarse = e.enclosure(64);
    Interval fine = e.enclosure(256);
    Interval finer = e.enclosure(1024);
    CHECK(contained_in(fine, coarse));
    CHECK(contained_in(finer, fine));
  }
}

TEST_CASE("sign soundness: certified signs persist under refinement") {
  FieldPtr K = make_tower();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rational> coords(6);
    for (auto& c : coords) {
      c = Rational(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 7));
    }
    FieldElem e(K, coords);
    if (e.is_zero()) continue;
    const int s = e.certified_sign();
    CHECK(s != 0);
    auto fine = e.enclosure(512).sign();
    REQUIRE(fine.has_value());
    CHECK(*fine == s);
  }
}

TEST_CASE("exact zero test agrees with interval certification on 1000 elements") {
  FieldPtr K = make_tower();
  std::mt19937_64 rng(424242);
  FieldElem lam = K->lift(K->base()->generator());
  FieldElem mu = K->generator();
  int zeros = 0, nonzeros = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Rational> coords(6, Rational(0));
    for (auto& c : coords) {
      c = Rational(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 5));
    }
    FieldElem e(K, coords);
    if (rng() % 4 == 0) {
      // Forced zero written in a nontrivial way: e + (lam*mu - mu*lam) - e.
      e = e + (lam * mu - mu * lam) - e;
    }
    const bool exact_zero = e.is_zero();
    bool certified_nonzero = false;
    for (mpfr_prec_t p = 64; p <= 1024; p *= 2) {
      auto s = e.enclosure(p).sign();
      if (s.has_value() && *s != 0) {
        certified_nonzero = true;
        break;
      }
    }
    CHECK(exact_zero == !certified_nonzero);
    (exact_zero ? zeros : nonzeros)++;
  }
  CHECK(zeros > 100);
  CHECK(nonzeros > 100);
}

TEST_CASE("refine: point intervals stay points, enclosures tighten") {
  Rational q(355, 113);
  CertReal x = CertReal::from_rational(q);
  Interval i64 = x.enclosure(64);
  Interval i128 = x.enclosure(128);
  CHECK(contained_in(i128, i64));

  // Width < 2^-100 for the tower generator at 128 bits.
  FieldPtr K = make_tower();
  CertReal lam = CertReal::from_field(K->lift(K->base()->generator()));
  CHECK(lam.enclosure(64).width_below_pow2(-40));
  CHECK(lam.enclosure(128).width_below_pow2(-100));
}
