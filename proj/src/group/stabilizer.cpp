#include "lo237/group/stabilizer.hpp"

namespace lo237::grp {

using num::CertReal;

bool in_cyclic_group(const Group& G, const LiftedElement& g, const LiftedElement& k,
                     long* exponent, long* tested_bound) {
  if (G.is_identity(g)) {
    if (exponent) *exponent = 0;
    return true;
  }
  if (G.classify(k) != ElementClass::hyperbolic) {
    throw std::invalid_argument("in_cyclic_group: generator must be hyperbolic");
  }
  if (g.m.is_identity() || g.m.is_minus_identity()) {
    return false;  // nontrivial central powers are never powers of a hyperbolic
  }
  const FieldElem tg2 = g.m.trace() * g.m.trace();
  LiftedElement pos = k;
  LiftedElement neg = G.inverse(k);
  for (long m = 1;; ++m) {
    if (tested_bound && m > *tested_bound) *tested_bound = m;
    // |tr k^m| grows strictly; once it exceeds |tr g| the search is over.
    const FieldElem tp2 = pos.m.trace() * pos.m.trace();
    if ((tp2 - tg2).certified_sign() > 0) return false;
    if (pos.same_element(g)) {
      if (exponent) *exponent = m;
      return true;
    }
    if (neg.same_element(g)) {
      if (exponent) *exponent = -m;
      return true;
    }
    pos = G.compose(pos, k);
    neg = G.compose(neg, G.inverse(k));
  }
}

namespace {

std::optional<long> pinned_displacement(const Group& G, const LiftedElement& g,
                                        const LinePoint& p, unsigned max_bits) {
  CertReal diff = G.value(G.apply(g, p)) - G.value(p);
  for (mpfr_prec_t prec = 64; static_cast<unsigned>(prec) <= max_bits; prec *= 2) {
    if (auto k = diff.enclosure(prec).pinned_integer()) return k;
  }
  return std::nullopt;
}

bool is_plus_minus_identity(const Mat2& m) {
  return m.is_identity() || m.is_minus_identity();
}

}  // namespace

StabilizerReport point_stabilizer(const Group& G, Ball& ball, const LinePoint& p,
                                  int depth, unsigned max_bits) {
  ball.ensure_radius(depth);
  StabilizerReport rep;
  rep.depth = depth;
  rep.certified_bits = max_bits;

  const bool exact_ray =
      p.kind() == LinePoint::Kind::ray && p.ray_u().field()->zero_test_valid();
  const bool eigen_ray = p.kind() == LinePoint::Kind::ray && !exact_ray;
  if (eigen_ray && !p.eigen_source().has_value()) {
    throw std::invalid_argument(
        "point_stabilizer: ray in a numeric-only tower needs its defining element");
  }

  std::vector<LiftedElement> found;
  for (const LiftedElement& g : ball.elements(depth)) {
    if (G.is_identity(g)) continue;
    if (is_plus_minus_identity(g.m)) continue;  // central powers translate
    bool fixes = false;
    if (exact_ray) {
      auto cmp = G.compare_points(G.apply(g, p), p);
      fixes = cmp.has_value() && *cmp == 0;
    } else if (eigen_ray) {
      // g fixes the defining hyperbolic's boundary points iff it commutes
      // with it projectively; the lift is then pinned by the displacement.
      const Mat2& h = p.eigen_source()->m;
      Mat2 comm = g.m * h * g.m.inverse_det1() * h.inverse_det1();
      if (is_plus_minus_identity(comm)) {
        auto disp = pinned_displacement(G, g, p, max_bits);
        if (!disp.has_value()) {
          ++rep.undecided;
        } else {
          fixes = (*disp == 0);
        }
      }
    } else {
      auto s = G.displacement_sign(g, p, max_bits);
      if (!s.has_value()) {
        ++rep.undecided;
      } else if (*s == 0) {
        fixes = true;  // exact rational tie (integer translations aside)
      }
    }
    if (fixes) found.push_back(g);
  }

  if (found.empty()) return rep;

  rep.cyclic = true;
  size_t best = 0;
  FieldElem best_t2 = found[0].m.trace() * found[0].m.trace();
  for (size_t i = 1; i < found.size(); ++i) {
    FieldElem t2 = found[i].m.trace() * found[i].m.trace();
    if ((t2 - best_t2).certified_sign() < 0) {
      best = i;
      best_t2 = t2;
    }
  }
  LiftedElement k = found[best];
  if (p.kind() == LinePoint::Kind::ray &&
      G.germ_sign_at_fixed_point(k, p, -1) != 1) {
    k = G.inverse(k);  // orient: contract toward the point
  }
  rep.generator = k;

  rep.primitive_verified = true;
  for (const LiftedElement& f : found) {
    long m = 0;
    if (!in_cyclic_group(G, f, k, &m)) {
      rep.primitive_verified = false;
      break;
    }
    if (std::abs(m) > rep.generator_power_in_search) {
      rep.generator_power_in_search = std::abs(m);
    }
  }
  return rep;
}

}  // namespace lo237::grp
