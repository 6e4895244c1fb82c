// Acceptance suite: end-to-end checks of the whole artifact at desk scale.
// Each criterion prints one PASS/FAIL line; the binary exits nonzero if any
// criterion fails. Run times are measured against the stated limits.

#include <chrono>
#include <iostream>
#include <random>

#include "lo237/approx/search.hpp"
#include "lo237/io/experiment.hpp"
#include "lo237/realization/blowup.hpp"
#include "lo237/realization/realization.hpp"

using namespace lo237;
using grp::Ball;
using grp::ElementClass;
using grp::Group;
using grp::Letter;
using grp::LiftedElement;
using grp::LinePoint;
using num::CertReal;
using num::Rational;
using ord::OrderOracle;
using ord::Side;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass = false;
  double seconds = 0;
  std::string detail;
};

std::vector<Criterion> results;

template <typename F>
void criterion(int id, const std::string& name, double limit_s, F&& body) {
  Criterion c{id, name};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.pass = body(c.detail);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && c.seconds > limit_s) {
    c.pass = false;
    c.detail += " [time limit exceeded]";
  }
  std::cout << (c.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << name
            << "  (" << c.seconds << "s" << (c.detail.empty() ? "" : "; " + c.detail)
            << ")" << std::endl;
  results.push_back(std::move(c));
}

Rational seeded_rational(std::mt19937_64& rng) {
  long num = static_cast<long>(rng() % 513) - 256;
  long den = 1 + static_cast<long>(rng() % 64);
  return num::canonical(Rational(num, den));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_dir = argc > 1 ? argv[1] : "acceptance_out";
  Group G;
  Ball ball(G);

  // 1. Relation suite and centrality against ball(5).
  criterion(1, "relation suite: a^2 = b^3 = c^7 = abc, abc central on ball(5)", 60,
            [&](std::string& detail) {
    const LiftedElement abc =
        G.compose(G.compose(G.gen(Letter::a), G.gen(Letter::b)), G.gen(Letter::c));
    bool ok = G.compose(G.gen(Letter::a), G.gen(Letter::a)).same_element(abc);
    ok = ok && G.power(G.gen(Letter::b), 3).same_element(abc);
    ok = ok && G.power(G.gen(Letter::c), 7).same_element(abc);
    ok = ok && G.is_identity(G.compose(abc, G.inverse(G.central())));
    ball.ensure_radius(5);
    size_t checked = 0;
    for (const LiftedElement& g : ball.elements(5)) {
      ok = ok && G.compose(g, G.central()).same_element(G.compose(G.central(), g));
      ++checked;
    }
    detail = std::to_string(checked) + " centrality checks";
    return ok;
  });

  // 2. Central translation, exact at 100 seeded points.
  criterion(2, "rho(abc)(x) = x + 1 exactly at 100 seeded points", 60,
            [&](std::string& detail) {
    std::mt19937_64 rng(20260810);
    for (int i = 0; i < 100; ++i) {
      const Rational q = seeded_rational(rng);
      LinePoint img = G.apply(G.central(), LinePoint::rational(q));
      if (img.kind() != LinePoint::Kind::rational) return false;
      if (img.rational_value() != q + 1) return false;
    }
    detail = "exact rational equality, zero tolerance";
    return true;
  });

  // 3. Translation numbers with the power-identity oracle.
  criterion(3, "tau(a) = 1/2, tau(b) = 1/3, tau(c) = 1/7, tau(abc) = 1", 60,
            [&](std::string& detail) {
    bool ok = G.translation_number(G.gen(Letter::a)) == Rational(1, 2) &&
              G.translation_number(G.gen(Letter::b)) == Rational(1, 3) &&
              G.translation_number(G.gen(Letter::c)) == Rational(1, 7) &&
              G.translation_number(G.central()) == Rational(1);
    // Power-identity oracle: the defining powers are the central element.
    ok = ok && G.translation_number(G.power(G.gen(Letter::a), 2)) == Rational(1);
    ok = ok && G.translation_number(G.power(G.gen(Letter::b), 3)) == Rational(1);
    ok = ok && G.translation_number(G.power(G.gen(Letter::c), 7)) == Rational(1);
    for (Letter l : {Letter::a, Letter::b, Letter::c}) {
      const Rational t = G.translation_number(G.gen(l));
      for (long n = 2; n <= 7; ++n) {
        ok = ok && G.translation_number(G.power(G.gen(l), n)) == n * t;
      }
    }
    detail = "exact rationals";
    return ok;
  });

  // 4. Cone axioms for 20 seeded oracles on ball(5) minus the identity.
  criterion(4, "cone axioms on ball(5) for 20 seeded basepoint oracles", 300,
            [&](std::string& detail) {
    std::mt19937_64 rng(20260810);
    auto F = ord::punctured_ball(ball, 5);
    size_t violations = 0;
    for (int i = 0; i < 20; ++i) {
      OrderOracle o = ord::sample_free_oracle(G, ball, rng, 5);
      ord::ConeTable t = ord::cone_table(o, F);
      auto v = t.check(G);
      violations += v.antisymmetry + v.semigroup;
    }
    detail = std::to_string(violations) + " violations over 20 oracles";
    return violations == 0;
  });

  // 5. Conjugation consistency, exhaustive on ball(3) x 10 g x 5 oracles.
  criterion(5, "order_sign(conjugate_order(o,g), h) = order_sign(o, g^-1 h g)", 300,
            [&](std::string& detail) {
    std::mt19937_64 rng(20260811);
    ball.ensure_radius(4);
    size_t checked = 0, bad = 0;
    for (int i = 0; i < 5; ++i) {
      OrderOracle o = i < 4 ? ord::sample_free_oracle(G, ball, rng, 4)
                            : [&] {
                                for (const LiftedElement& g : ball.elements(3)) {
                                  if (G.classify(g) == ElementClass::hyperbolic) {
                                    return OrderOracle::at_fixed_point(G, ball, g, true,
                                                                       Side::left);
                                  }
                                }
                                throw std::runtime_error("no hyperbolic");
                              }();
      for (int k = 0; k < 10; ++k) {
        const LiftedElement& g = ball.at(rng() % ball.size(4));
        OrderOracle conj = o.conjugated(g);
        const LiftedElement gi = G.inverse(g);
        for (const LiftedElement& h : ball.elements(3)) {
          const LiftedElement pulled = G.compose(G.compose(gi, h), g);
          if (G.is_identity(pulled)) continue;
          ++checked;
          if (conj.sign(h) != o.sign(pulled)) ++bad;
        }
      }
    }
    detail = std::to_string(bad) + "/" + std::to_string(checked) + " mismatches";
    return bad == 0;
  });

  // 6. Theorem 1 at desk scale: 50 same-sign pairs, guided search, verified.
  criterion(6, "guided conjugator search succeeds on 50 seeded same-sign pairs", 1800,
            [&](std::string& detail) {
    std::mt19937_64 rng(20260812);
    apx::SearchBudget budget;  // word length 12, 10^6 candidates
    auto F = ord::punctured_ball(ball, 3);

    std::vector<OrderOracle> free_pool;
    for (int i = 0; i < 20; ++i) {
      free_pool.push_back(ord::sample_free_oracle(G, ball, rng, 4));
    }
    std::vector<OrderOracle> fixed_pool;  // three axes, both tiebreak sides
    std::vector<LiftedElement> axes;
    for (const LiftedElement& g : ball.elements(4)) {
      if (G.classify(g) != ElementClass::hyperbolic) continue;
      bool dup = false;
      for (const LiftedElement& a : axes) {
        grp::Mat2 comm = a.m * g.m * a.m.inverse_det1() * g.m.inverse_det1();
        if (comm.is_identity() || comm.is_minus_identity()) dup = true;  // same axis
      }
      if (!dup) axes.push_back(g);
      if (axes.size() == 3) break;
    }
    for (const LiftedElement& a : axes) {
      fixed_pool.push_back(OrderOracle::at_fixed_point(G, ball, a, true, Side::left));
      fixed_pool.push_back(OrderOracle::at_fixed_point(G, ball, a, true, Side::right));
    }

    std::vector<std::pair<const OrderOracle*, const OrderOracle*>> pairs;
    for (int i = 0; i < 20; ++i) {
      pairs.emplace_back(&free_pool[i], &free_pool[(i + 7) % 20]);
    }
    for (int i = 0; i < 6; ++i) pairs.emplace_back(&fixed_pool[i], &free_pool[i]);
    for (int i = 0; i < 6; ++i) pairs.emplace_back(&free_pool[i + 6], &fixed_pool[i]);
    for (int i = 0; i < 6; ++i) {
      pairs.emplace_back(&fixed_pool[i], &fixed_pool[(i + 2) % 6]);
    }
    std::vector<OrderOracle> reversed_pool;
    for (int i = 0; i < 12; ++i) reversed_pool.push_back(free_pool[i].reversed());
    for (int i = 0; i < 12; ++i) {
      pairs.emplace_back(&reversed_pool[i], &reversed_pool[(i + 5) % 12]);
    }
    if (pairs.size() != 50) {
      detail = "pair construction bug";
      return false;
    }

    size_t ok = 0;
    int max_len = 0;
    std::map<int, size_t> hist;
    for (const auto& [center, moving] : pairs) {
      try {
        apx::ConjugatorReport rep =
            apx::find_conjugator_guided(*center, *moving, F, ball, budget);
        if (rep.found && rep.reverified && rep.word_length <= 12) {
          ++ok;
          ++hist[rep.word_length];
          max_len = std::max(max_len, rep.word_length);
        }
      } catch (const std::exception&) {
        // counted as a failure below
      }
    }
    io::write_file(out_dir + "/theorem1_histogram.csv", io::histogram_csv(hist));
    io::write_file(out_dir + "/theorem1_histogram.svg", io::histogram_svg(hist));
    detail = std::to_string(ok) + "/50 verified, max witness length " +
             std::to_string(max_len) + ", histogram emitted";
    return ok == 50;
  });

  // 7. Two-block obstruction: no false merges across the central sign.
  criterion(7, "opposite central signs never merge (exhaustive BFS to length 8)", 1800,
            [&](std::string& detail) {
    std::mt19937_64 rng(20260813);
    std::vector<OrderOracle> plus, minus;
    for (int i = 0; i < 4; ++i) {
      plus.push_back(ord::sample_free_oracle(G, ball, rng, 4));
      minus.push_back(ord::sample_free_oracle(G, ball, rng, 4).reversed());
    }
    ball.ensure_radius(8);
    auto F = ord::punctured_ball(ball, 2);  // contains abc = "aa"
    size_t candidates = 0, merges = 0, invariance_failures = 0;
    for (const OrderOracle& o : plus) {
      for (const OrderOracle& o2 : minus) {
        for (const LiftedElement& g : ball.elements(8)) {
          ++candidates;
          OrderOracle conj = o2.conjugated(g);
          if (conj.abc_sign() != o2.abc_sign()) ++invariance_failures;
          if (ord::in_neighborhood(conj, o, F)) ++merges;
        }
      }
    }
    detail = std::to_string(merges) + " merges, " +
             std::to_string(invariance_failures) + " invariance failures over " +
             std::to_string(candidates) + " conjugations";
    return merges == 0 && invariance_failures == 0;
  });

  // 8. Blow-up fidelity: defect zero and exact orbit order.
  criterion(8, "blow-up: certified defect 0 on 100 samples x ball(3), exact order", 120,
            [&](std::string& detail) {
    std::mt19937_64 rng(20260814);
    OrderOracle o = ord::sample_free_oracle(G, ball, rng, 4);
    real::BlowupMap B(G, ball, o.basepoint(), std::nullopt, 5);

    std::vector<real::BlownPoint> samples;
    ball.ensure_radius(2);
    const size_t gap_pool = ball.size(2);  // reps short enough to transport
    for (size_t i = 0; i < 20; ++i) {
      samples.push_back(real::BlownPoint::gap(i % gap_pool,
                                              num::canonical(Rational(1 + (i % 7), 8))));
    }
    while (samples.size() < 100) {
      samples.push_back(real::BlownPoint::graph(
          LinePoint::rational(seeded_rational(rng))));
    }
    ball.ensure_radius(3);
    std::vector<LiftedElement> elems;
    for (const LiftedElement& g : ball.elements(2)) elems.push_back(g);
    num::Interval defect = real::blowup_defect(G, B, samples, elems, 256);
    const bool defect_ok = defect.contains_zero() && defect.width_below_pow2(-100);

    // Orbit order agreement (the blown-up orbit of a point over p).
    real::BlownPoint q =
        real::BlownPoint::gap(*B.orbit_index_of(G.identity()), Rational(1, 2));
    size_t mism = 0, pairs = 0;
    for (const LiftedElement& g : ball.elements(2)) {
      for (const LiftedElement& h : ball.elements(2)) {
        if (g.same_element(h)) continue;
        ++pairs;
        auto base = G.compare_points(G.apply(g, o.basepoint()),
                                     G.apply(h, o.basepoint()), 4096);
        if (!base.has_value() ||
            B.compare(B.transport(g, q), B.transport(h, q)) != *base) {
          ++mism;
        }
      }
    }
    detail = "defect <= " + std::to_string(defect.hi_double()) + ", " +
             std::to_string(mism) + "/" + std::to_string(pairs) + " order mismatches";
    return defect_ok && mism == 0;
  });

  // 9. Realization round trip at stage 5 for 10 seeded oracles.
  criterion(9, "stage-5 realization reproduces the ball(4) cone table, 10 oracles", 600,
            [&](std::string& detail) {
    std::mt19937_64 rng(20260815);
    size_t mismatches = 0;
    for (int i = 0; i < 10; ++i) {
      OrderOracle o = ord::sample_free_oracle(G, ball, rng, 10);
      real::PartialRealization R = real::build_realization(o, ball, 5);
      for (const LiftedElement& g : ball.elements(4)) {
        if (G.is_identity(g)) continue;
        auto x = R.placement_of(ball, g);
        if (!x.has_value() || ((*x > 0 ? 1 : -1) != o.sign(g))) ++mismatches;
      }
    }
    detail = std::to_string(mismatches) + " table mismatches over 10 oracles";
    return mismatches == 0;
  });

  size_t failed = 0;
  for (const Criterion& c : results) {
    if (!c.pass) ++failed;
  }
  std::cout << (failed == 0 ? "ACCEPTANCE: all criteria passed"
                            : "ACCEPTANCE: " + std::to_string(failed) + " criteria FAILED")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
