#include <random>

#include "doctest.h"
#include "lo237/realization/blowup.hpp"
#include "lo237/realization/realization.hpp"

using namespace lo237::real;
using namespace lo237::ord;
using namespace lo237::grp;
using lo237::num::CertReal;
using lo237::num::Interval;
using lo237::num::Rational;

namespace {

Group& the_group() {
  static Group G;
  return G;
}

Ball& the_ball() {
  static Ball ball(the_group());
  return ball;
}

LiftedElement shortest_hyperbolic() {
  Ball& ball = the_ball();
  ball.ensure_radius(3);
  for (const LiftedElement& g : ball.elements(3)) {
    if (the_group().classify(g) == ElementClass::hyperbolic) return g;
  }
  throw std::runtime_error("no hyperbolic element");
}

}  // namespace

TEST_CASE("realization at stage 0 places only the identity at 0") {
  Group& G = the_group();
  Ball& ball = the_ball();
  std::mt19937_64 rng(21);
  OrderOracle o = sample_free_oracle(G, ball, rng, 4);
  PartialRealization R = build_realization(o, ball, 0);
  REQUIRE(R.placement.size() == 1);
  CHECK(G.is_identity(R.placement[0].first));
  CHECK(R.placement[0].second == 0);
}

TEST_CASE("placement order equals the orbit order of the basepoint") {
  Group& G = the_group();
  Ball& ball = the_ball();
  std::mt19937_64 rng(22);
  OrderOracle o = sample_free_oracle(G, ball, rng, 6);
  PartialRealization R = build_realization(o, ball, 3);

  // Order fidelity against the oracle itself.
  for (const auto& [g, xg] : R.placement) {
    for (const auto& [h, xh] : R.placement) {
      if (g.same_element(h)) continue;
      const int by_order = o.sign(G.compose(G.inverse(g), h));
      CHECK((xg < xh) == (by_order == 1));
    }
  }

  // The defining property: for a standard-action oracle the placement order
  // is the linear order of the orbit rho(g)(p).
  const LinePoint p = o.basepoint();
  for (const auto& [g, xg] : R.placement) {
    for (const auto& [h, xh] : R.placement) {
      if (g.same_element(h)) continue;
      auto cmp = G.compare_points(G.apply(g, p), G.apply(h, p), 4096);
      REQUIRE(cmp.has_value());
      CHECK((xg < xh) == (*cmp < 0));
    }
  }
}

TEST_CASE("partial equivariance and the basepoint property") {
  Group& G = the_group();
  Ball& ball = the_ball();
  std::mt19937_64 rng(23);
  OrderOracle o = sample_free_oracle(G, ball, rng, 6);
  const int stage = 3;
  PartialRealization R = build_realization(o, ball, stage);

  // extension(s)(placement(g)) = placement(s g) for g in ball(stage-1).
  for (const LiftedElement& g : ball.elements(stage - 1)) {
    auto xg = R.placement_of(ball, g);
    REQUIRE(xg.has_value());
    for (uint8_t li = 0; li < 6; ++li) {
      const LiftedElement sg = G.compose(G.gen(static_cast<Letter>(li)), g);
      auto xsg = R.placement_of(ball, sg);
      REQUIRE(xsg.has_value());
      CHECK(R.extension[li](*xg) == *xsg);
    }
  }

  // sign(g) = + iff the extension word moves 0 up, for g in ball(stage-1).
  for (const LiftedElement& g : ball.elements(stage - 1)) {
    if (G.is_identity(g)) continue;
    const Rational img = R.apply_word(g.word, Rational(0));
    CHECK((img > 0) == (o.sign(g) == 1));
  }
}

TEST_CASE("realization round trip reproduces the cone table") {
  Group& G = the_group();
  Ball& ball = the_ball();
  std::mt19937_64 rng(24);
  OrderOracle o = sample_free_oracle(G, ball, rng, 6);
  const int stage = 4;
  PartialRealization R = build_realization(o, ball, stage);
  for (const LiftedElement& g : ball.elements(stage - 1)) {
    if (G.is_identity(g)) continue;
    auto x = R.placement_of(ball, g);
    REQUIRE(x.has_value());
    CHECK((*x > 0 ? 1 : -1) == o.sign(g));
  }
}

TEST_CASE("corrupted sign table raises InconsistentOracle") {
  Group& G = the_group();
  Ball& ball = the_ball();
  std::mt19937_64 rng(25);
  OrderOracle o = sample_free_oracle(G, ball, rng, 6);
  const LiftedElement z = G.central();
  // Flip the sign of abc only: the signs stop being left-order data
  // (id < abc^2 but abc^2 < abc < id), which the placement must detect.
  SignFunction corrupted = [&](const LiftedElement& g) {
    if (g.same_element(z)) return -o.sign(g);
    return o.sign(g);
  };
  CHECK_THROWS_AS(build_realization(G, ball, corrupted, 4), InconsistentOracle);
}

TEST_CASE("fixed-point oracles also realize") {
  Group& G = the_group();
  Ball& ball = the_ball();
  OrderOracle o = OrderOracle::at_fixed_point(G, ball, shortest_hyperbolic(), true,
                                              Side::left);
  PartialRealization R = build_realization(o, ball, 3);
  for (const auto& [g, xg] : R.placement) {
    if (G.is_identity(g)) continue;
    CHECK((xg > 0 ? 1 : -1) == o.sign(g));
  }
}

TEST_CASE("empty insertion set: collapse is the identity, action unchanged") {
  Group& G = the_group();
  BlowupMap B = BlowupMap::finite(G, {});
  CHECK(B.orbit_size() == 0);
  CHECK(B.total_inserted_length() == 0);

  const LinePoint x = LinePoint::rational(Rational(5, 7));
  BlownPoint y = BlownPoint::graph(x);
  CHECK(B.collapse(y).rational_value() == Rational(5, 7));
  auto enc = (B.coordinate(y) - CertReal::from_rational(Rational(5, 7))).enclosure(128);
  CHECK(enc.is_exact_zero());
}

TEST_CASE("blow-up along a free orbit: lengths, order, defect") {
  Group& G = the_group();
  Ball& ball = the_ball();
  std::mt19937_64 rng(26);
  OrderOracle o = sample_free_oracle(G, ball, rng, 6);
  const int radius = 3;
  BlowupMap B(G, ball, o.basepoint(), std::nullopt, radius);
  CHECK(B.orbit_size() == ball.size(radius));

  // Total inserted length: sum of the dyadic lengths, certified exactly.
  Rational total = B.total_inserted_length();
  Rational expect(0);
  for (size_t i = 0; i < B.orbit_size(); ++i) {
    Rational l(1);
    l /= (lo237::num::Integer(1) << (i + 1));
    expect += l;
  }
  CHECK(total == expect);

  // Remark-style order agreement: the linear order of the blown-up orbit of
  // a gap point over p agrees with the order of the base orbit of p.
  BlownPoint q = BlownPoint::gap(*B.orbit_index_of(G.identity()), Rational(1, 2));
  ball.ensure_radius(2);
  
  for (const LiftedElement& g : ball.elements(2)) {
    for (const LiftedElement& h : ball.elements(2)) {
      if (g.same_element(h)) continue;
      const int blown = B.compare(B.transport(g, q), B.transport(h, q));
      auto base = G.compare_points(G.apply(g, o.basepoint()), G.apply(h, o.basepoint()), 4096);
      REQUIRE(base.has_value());
      CHECK(blown == *base);
    }
  }

  // Semi-conjugacy defect of the constructed blow-up: certified 0.
  std::vector<BlownPoint> samples;
  samples.push_back(q);
  samples.push_back(BlownPoint::gap(1, Rational(1, 3)));
  samples.push_back(BlownPoint::graph(LinePoint::rational(Rational(9, 8))));
  std::vector<LiftedElement> elems(ball.elements(2).begin(), ball.elements(2).end());
  Interval defect = blowup_defect(G, B, samples, elems, 256);
  CHECK(defect.contains_zero());
  CHECK(defect.width_below_pow2(-100));
}

TEST_CASE("check_semiconjugacy: identity passes, shifted action fails") {
  Group& G = the_group();
  Ball& ball = the_ball();
  ball.ensure_radius(2);
  std::vector<LinePoint> samples;
  for (int i = -3; i <= 3; ++i) {
    samples.push_back(LinePoint::rational(Rational(2 * i + 1, 5)));
  }
  std::vector<LiftedElement> elems(ball.elements(2).begin(), ball.elements(2).end());

  PointMap identity_map = [](const LinePoint& x) { return x; };
  LineAction phi = [&G](const LiftedElement& g, const LinePoint& x) {
    return G.apply(g, x);
  };
  Interval ok = check_semiconjugacy(G, identity_map, phi, phi, samples, elems, 256);
  CHECK(ok.contains_zero());
  CHECK(ok.width_below_pow2(-100));

  // Designed failure: phi' = phi followed by the central translation.
  LineAction shifted = [&G](const LiftedElement& g, const LinePoint& x) {
    return G.apply(G.compose(G.central(), g), x);
  };
  Interval bad = check_semiconjugacy(G, identity_map, shifted, phi, samples, elems, 128);
  auto s = (bad - Interval::from_integer(1)).sign();
  // max defect is exactly 1 (the translation), certainly positive
  CHECK(bad.lo_double() > 0.5);
}

TEST_CASE("gap over a fixed point: setwise stabilizer emerges") {
  Group& G = the_group();
  Ball& ball = the_ball();
  const LiftedElement h = shortest_hyperbolic();
  OrderOracle o = OrderOracle::at_fixed_point(G, ball, h, true, Side::left);
  REQUIRE(o.stabilizer_primitive().has_value());
  const LiftedElement k = *o.stabilizer_primitive();

  BlowupMap B(G, ball, o.basepoint(), k, 3);
  CHECK(B.orbit_size() < ball.size(3));  // cosets, not elements

  const size_t id_gap = *B.orbit_index_of(G.identity());
  BlownPoint inside = BlownPoint::gap(id_gap, Rational(2, 5));
  // The stabilizer generator maps the gap J to itself (pointwise, since the
  // increasing affine self-bijection of an interval is the identity).
  BlownPoint moved = B.transport(k, inside);
  CHECK(moved.orbit_index == id_gap);
  CHECK(moved.theta == Rational(2, 5));

  // And the stabilizer of the collapsed point is cyclic.
  StabilizerReport rep = point_stabilizer(G, ball, o.basepoint(),
                                          static_cast<int>(k.word.length()));
  CHECK(rep.cyclic);
}
