#include "lo237/approx/search.hpp"

#include <cmath>

#include "lo237/group/stabilizer.hpp"

namespace lo237::apx {

using grp::ElementClass;
using num::CertReal;
using num::Interval;
using num::PrecisionExhausted;

namespace {

double approx_value(const Group& G, const LinePoint& p) {
  return G.value(p).enclosure(64).mid_double();
}

// Certified |x - (c + k)| > r for the nearest integer translates k of c to x.
// The skip flag drops translates that coincide with x exactly (tie source).
bool translates_clear(const Group& G, const CertReal& x, const CertReal& c,
                      const Rational& r, bool skip_exact_match, unsigned max_bits) {
  CertReal diff = x - c;
  Interval enc = diff.enclosure(128);
  const long klo = static_cast<long>(std::floor(enc.lo_double())) - 1;
  const long khi = static_cast<long>(std::ceil(enc.hi_double())) + 1;
  for (long k = klo; k <= khi; ++k) {
    CertReal d = diff.add_integer(-k);
    auto above = CertReal::try_compare(d, CertReal::from_rational(r), max_bits);
    if (above.has_value() && *above > 0) continue;
    auto below = CertReal::try_compare(d, CertReal::from_rational(-r), max_bits);
    if (below.has_value() && *below < 0) continue;
    if (skip_exact_match) {
      // d may be exactly zero (the tie translate); detect it by pinning.
      auto pinned = d.enclosure(static_cast<mpfr_prec_t>(max_bits)).pinned_integer();
      if (pinned.has_value() && *pinned == 0) {
        // also verify 0 is plausible: enclosure already pins it
        continue;
      }
    }
    return false;
  }
  return true;
}

}  // namespace

UniformWindow uniform_sign_interval(const OrderOracle& o,
                                    std::span<const LiftedElement> F, Ball& ball,
                                    const SearchBudget& budget) {
  const Group& G = o.group();
  const LinePoint& p = o.basepoint();
  UniformWindow W;

  // Constraints: values of the fixed points on the line of every f in F
  // with translation number zero. Ties (f fixing p itself) contribute their
  // one-sided signs instead, plus the constraint from the opposite ray.
  struct Constraint {
    CertReal value;
    bool tie_translate;  // the p-matching translate is the tie, not a bound
  };
  std::vector<Constraint> constraints;

  for (const LiftedElement& f : F) {
    if (G.is_identity(f)) continue;
    if (G.translation_number(f) != 0) continue;  // no fixed points at all
    // Exact tie test.
    bool tie = false;
    long power = 0;
    if (o.stabilizer_primitive().has_value()) {
      tie = grp::in_cyclic_group(G, f, *o.stabilizer_primitive(), &power) && power != 0;
    } else if (p.kind() == LinePoint::Kind::ray) {
      auto d = G.displacement_sign(f, p, budget.max_bits);
      tie = d.has_value() && *d == 0;
    }
    grp::HyperbolicFixedPoints fp = G.fixed_points(f);
    CertReal att = G.value(LinePoint::ray(fp.att_u, fp.att_v, 0, f));
    CertReal rep = G.value(LinePoint::ray(fp.rep_u, fp.rep_v, 0, f));
    if (tie) {
      UniformWindow::TieSign t;
      t.f = f;
      t.power = power;
      if (power != 0) {
        t.left_sign = power > 0 ? 1 : -1;  // the primitive contracts toward p
      } else {
        t.left_sign = G.germ_sign_at_fixed_point(f, p, -1);
      }
      t.right_sign = -t.left_sign;
      W.ties.push_back(std::move(t));
      // Both rays of f still constrain the window through their translates
      // away from p.
      constraints.push_back({std::move(att), true});
      constraints.push_back({std::move(rep), true});
    } else {
      constraints.push_back({std::move(att), false});
      constraints.push_back({std::move(rep), false});
    }
  }

  if (constraints.empty()) {
    return W;  // no f has a fixed point: the window is the whole line
  }

  const CertReal pv = G.value(p);
  Rational delta(1);
  for (int round = 0; round < 200; ++round) {
    bool clear = true;
    for (const Constraint& c : constraints) {
      if (!translates_clear(G, c.value, pv, delta, c.tie_translate, budget.max_bits)) {
        clear = false;
        break;
      }
    }
    if (clear) {
      W.radius = delta;
      return W;
    }
    delta /= 2;
  }
  throw PrecisionExhausted("uniform_sign_interval: no certified window found");
}

namespace {

struct MoverLoop {
  const Group& G;
  Ball& ball;
  const LinePoint& moving_point;
  const MoverTarget& target;
  const SearchBudget& budget;

  double p_mid = 0, x0 = 0, rad = 0;
  CertReal pv{};

  explicit MoverLoop(const Group& g, Ball& b, const LinePoint& mp, const MoverTarget& t,
                     const SearchBudget& bu)
      : G(g), ball(b), moving_point(mp), target(t), budget(bu) {
    ball.ensure_radius(budget.max_word_length);
    p_mid = approx_value(G, target.center);
    x0 = approx_value(G, moving_point);
    rad = target.radius.has_value() ? target.radius->get_d()
                                    : std::numeric_limits<double>::infinity();
    pv = G.value(target.center);
  }

  // The candidate g is tested after recentering by a central power, which
  // does not change the induced order.
  std::optional<LiftedElement> recenter(const LiftedElement& g) const {
    const double x = G.apply_approx(g, x0);
    if (!std::isfinite(x)) return std::nullopt;
    const long m = std::lround(x - p_mid);
    const double xc = x - static_cast<double>(m);
    if (std::abs(xc - p_mid) > rad + 1e-9) return std::nullopt;
    if (target.side.has_value()) {
      if (*target.side == Side::left && xc > p_mid + 1e-9) return std::nullopt;
      if (*target.side == Side::right && xc < p_mid - 1e-9) return std::nullopt;
    }
    if (m == 0) return g;
    return G.compose(G.power(G.central(), -m), g);
  }

  bool certified_inside(const LiftedElement& cand) const {
    CertReal v = G.value(G.apply(cand, moving_point));
    if (target.radius.has_value()) {
      auto hi = CertReal::try_compare(
          v, pv + CertReal::from_rational(*target.radius), budget.max_bits);
      if (!hi.has_value() || *hi >= 0) return false;
      auto lo = CertReal::try_compare(
          v, pv - CertReal::from_rational(*target.radius), budget.max_bits);
      if (!lo.has_value() || *lo <= 0) return false;
    }
    if (target.side.has_value()) {
      auto s = CertReal::try_compare(v, pv, budget.max_bits);
      if (!s.has_value()) return false;
      if (*target.side == Side::left && *s >= 0) return false;
      if (*target.side == Side::right && *s <= 0) return false;
    }
    return true;
  }
};

}  // namespace

std::optional<LiftedElement> find_point_mover(const Group& G, Ball& ball,
                                              const LinePoint& moving_point,
                                              const MoverTarget& target,
                                              const SearchBudget& budget,
                                              long* candidates_out) {
  MoverLoop loop(G, ball, moving_point, target, budget);
  long tested = 0;
  for (const LiftedElement& g : ball.elements(budget.max_word_length)) {
    if (tested >= budget.max_candidates) break;
    ++tested;
    auto cand = loop.recenter(g);
    if (!cand.has_value()) continue;
    if (loop.certified_inside(*cand)) {
      if (candidates_out) *candidates_out = tested;
      return cand;
    }
  }
  if (candidates_out) *candidates_out = tested;
  return std::nullopt;
}

namespace {

void fill_certificates(ConjugatorReport& rep, const OrderOracle& center,
                       const OrderOracle& moving, std::span<const LiftedElement> F) {
  const Group& G = center.group();
  const OrderOracle conj = moving.conjugated(*rep.conjugator);
  rep.reverified = true;
  rep.certificates.clear();
  for (const LiftedElement& f : F) {
    if (G.is_identity(f)) continue;
    SignCertificate c;
    c.f = f.word;
    try {
      c.sign_center = center.sign(f);
      c.sign_conjugated = conj.sign(f);
    } catch (const PrecisionExhausted&) {
      rep.reverified = false;  // an undecided certificate is a failure
      rep.note = "certificate undecided at " + f.word.str();
      break;
    }
    if (c.sign_center != c.sign_conjugated) rep.reverified = false;
    rep.certificates.push_back(std::move(c));
  }
  rep.found = rep.reverified;
}

// in_neighborhood that treats an undecidable query as a mismatch; search
// candidates are skipped, never accepted, on precision exhaustion.
bool in_neighborhood_or_skip(const OrderOracle& candidate, const OrderOracle& center,
                             std::span<const LiftedElement> F) {
  try {
    return ord::in_neighborhood(candidate, center, F);
  } catch (const PrecisionExhausted&) {
    return false;
  }
}

}  // namespace

namespace {
// Prefer the canonical spelling for reported witnesses when it is known.
void canonicalize_witness(ConjugatorReport& rep, const Ball& ball) {
  if (!rep.conjugator.has_value()) return;
  if (auto w = ball.canonical_word(*rep.conjugator)) {
    rep.conjugator->word = *w;
  }
  rep.word_length = static_cast<int>(rep.conjugator->word.length());
}
}  // namespace

ConjugatorReport find_conjugator_bfs(const OrderOracle& center,
                                     const OrderOracle& moving,
                                     std::span<const LiftedElement> F, Ball& ball,
                                     const SearchBudget& budget) {
  if (center.abc_sign() != moving.abc_sign()) {
    throw HypothesisViolated("find_conjugator_bfs: abc signs differ");
  }
  const Group& G = center.group();
  ConjugatorReport rep;
  rep.strategy = "bfs";
  ball.ensure_radius(budget.max_word_length);

  // Double-precision prefilter data: positional expected signs (the shared
  // reversal flag cancels on both sides of the comparison).
  const int unflip = center.is_reversed() ? -1 : 1;
  struct ApproxF {
    std::array<double, 4> m;
    long offset;
    int expected;
  };
  std::vector<ApproxF> approx_f;
  approx_f.reserve(F.size());
  for (const LiftedElement& f : F) {
    if (G.is_identity(f)) continue;
    approx_f.push_back({G.approx_matrix(f), f.offset, unflip * center.sign(f)});
  }
  auto approx_apply = [](const ApproxF& a, double x) {
    const double m2 = std::floor(x / 2.0);
    const double x0 = x - 2 * m2;
    const double u = std::cos(M_PI * x0), v = std::sin(M_PI * x0);
    double ang = std::atan2(a.m[2] * u + a.m[3] * v, a.m[0] * u + a.m[1] * v) / M_PI;
    if (ang < 0) ang += 2;
    double ref = std::atan2(a.m[2], a.m[0]) / M_PI;
    if (ref < 0) ref += 2;
    return ang + 2 * ((ang < ref ? 1 : 0) + m2 + a.offset);
  };
  const double x0 = approx_value(G, moving.basepoint());

  for (const LiftedElement& g : ball.elements(budget.max_word_length)) {
    if (rep.candidates_tested >= budget.max_candidates) {
      rep.note = "candidate budget exhausted";
      break;
    }
    ++rep.candidates_tested;
    const double x = G.apply_approx(g, x0);
    bool plausible = std::isfinite(x);
    for (const ApproxF& a : approx_f) {
      if (!plausible) break;
      const double fd = approx_apply(a, x) - x;
      if (std::abs(fd) > 1e-6 && (fd > 0 ? 1 : -1) != a.expected) {
        plausible = false;
      }
    }
    if (!plausible) continue;
    OrderOracle conj = moving.conjugated(g);
    if (!in_neighborhood_or_skip(conj, center, F)) continue;
    rep.conjugator = g;
    canonicalize_witness(rep, ball);
    fill_certificates(rep, center, moving, F);
    if (rep.found) return rep;
  }
  if (rep.note.empty()) rep.note = "no conjugator within the word-length budget";
  return rep;
}

ConjugatorReport find_conjugator_guided(const OrderOracle& center,
                                        const OrderOracle& moving,
                                        std::span<const LiftedElement> F, Ball& ball,
                                        const SearchBudget& budget) {
  if (center.abc_sign() != moving.abc_sign()) {
    throw HypothesisViolated("find_conjugator_guided: abc signs differ");
  }
  const Group& G = center.group();

  // Matching abc signs force matching orientation flags; the reversed pair
  // induces the same neighborhood condition as the underlying pair.
  if (center.is_reversed()) {
    ConjugatorReport rep =
        find_conjugator_guided(center.reversed(), moving.reversed(), F, ball, budget);
    if (rep.conjugator.has_value()) {
      fill_certificates(rep, center, moving, F);
    }
    return rep;
  }

  ConjugatorReport rep;
  rep.strategy = "guided";

  // The identity may already work (in particular for o' = o).
  if (in_neighborhood_or_skip(moving, center, F)) {
    rep.conjugator = G.identity();
    rep.word_length = 0;
    rep.case_taken = "already-in-neighborhood";
    fill_certificates(rep, center, moving, F);
    return rep;
  }

  UniformWindow W = uniform_sign_interval(center, F, ball, budget);
  rep.window_radius = W.radius;

  MoverTarget target;
  target.center = center.basepoint();
  target.radius = W.radius;
  if (center.stabilizer_primitive().has_value()) {
    const LiftedElement& k = *center.stabilizer_primitive();
    const int k_sign = center.sign(k);
    target.side = k_sign > 0 ? Side::left : Side::right;
    rep.case_taken = k_sign > 0 ? "cyclic-stabilizer-left" : "cyclic-stabilizer-right";
  } else {
    rep.case_taken = "trivial-stabilizer";
  }

  MoverLoop loop(G, ball, moving.basepoint(), target, budget);
  const auto& kprime = moving.stabilizer_primitive();
  for (const LiftedElement& g : ball.elements(budget.max_word_length)) {
    if (rep.candidates_tested >= budget.max_candidates) {
      rep.note = "candidate budget exhausted";
      return rep;
    }
    ++rep.candidates_tested;
    auto cand = loop.recenter(g);
    if (!cand.has_value()) continue;
    if (!loop.certified_inside(*cand)) continue;
    if (kprime.has_value()) {
      // g K' g^-1 must avoid F; the membership bound comes from trace growth.
      const LiftedElement gi = G.inverse(*cand);
      bool meets = false;
      for (const LiftedElement& f : F) {
        if (G.is_identity(f)) continue;
        const LiftedElement pulled = G.compose(G.compose(gi, f), *cand);
        long expo = 0;
        if (grp::in_cyclic_group(G, pulled, *kprime, &expo,
                                 &rep.stabilizer_power_bound) &&
            expo != 0) {
          meets = true;
          break;
        }
      }
      if (meets) continue;
    }
    rep.conjugator = cand;
    canonicalize_witness(rep, ball);
    fill_certificates(rep, center, moving, F);
    if (rep.found) return rep;
    rep.conjugator.reset();  // verification failed: keep searching, honestly
    rep.note = "a window candidate failed re-verification";
  }
  if (rep.note.empty()) rep.note = "no conjugator within the word-length budget";
  return rep;
}

ScanResult component_scan(std::span<const OrderOracle> sample,
                          std::span<const LiftedElement> F, Ball& ball,
                          const SearchBudget& budget) {
  ScanResult res;
  for (size_t i = 0; i < sample.size(); ++i) {
    for (size_t j = 0; j < sample.size(); ++j) {
      if (i == j) continue;
      PairOutcome out;
      out.from = j;  // conjugate sample[j] into the neighborhood of sample[i]
      out.to = i;
      out.same_abc_sign = sample[i].abc_sign() == sample[j].abc_sign();
      if (!out.same_abc_sign) {
        out.note = "central obstruction: abc signs differ";
        res.pairs.push_back(std::move(out));
        continue;
      }
      ++res.same_sign_pairs;
      ConjugatorReport rep;
      try {
        rep = find_conjugator_guided(sample[i], sample[j], F, ball, budget);
        if (!rep.found) {
          ConjugatorReport fallback =
              find_conjugator_bfs(sample[i], sample[j], F, ball, budget);
          if (fallback.found) rep = std::move(fallback);
        }
      } catch (const PrecisionExhausted& e) {
        rep.found = false;
        rep.note = std::string("precision exhausted: ") + e.what();
      }
      out.found = rep.found;
      if (rep.found) out.witness = rep.conjugator->word.str();
      out.strategy = rep.strategy;
      out.word_length = rep.word_length;
      out.reverified = rep.reverified;
      out.note = rep.note;
      if (rep.found) {
        ++res.successes;
        ++res.length_histogram[rep.word_length];
      }
      res.pairs.push_back(std::move(out));
    }
  }
  return res;
}

}  // namespace lo237::apx
