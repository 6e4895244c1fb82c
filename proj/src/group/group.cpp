#include "lo237/group/group.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <sstream>
#include <iostream>
#include <cstdlib>

namespace lo237::grp {

using num::Integer;
using num::Interval;
using num::PrecisionExhausted;

// ---------------------------------------------------------------------------
// Mat2
// ---------------------------------------------------------------------------

Mat2 Mat2::identity(const FieldPtr& F) {
  Mat2 m{{FieldElem::from_rational(F, 1), FieldElem::from_rational(F, 0),
          FieldElem::from_rational(F, 0), FieldElem::from_rational(F, 1)}};
  return m;
}

Mat2 Mat2::operator*(const Mat2& r) const {
  return Mat2{{e[0] * r.e[0] + e[1] * r.e[2], e[0] * r.e[1] + e[1] * r.e[3],
               e[2] * r.e[0] + e[3] * r.e[2], e[2] * r.e[1] + e[3] * r.e[3]}};
}

Mat2 Mat2::negated() const { return Mat2{{-e[0], -e[1], -e[2], -e[3]}}; }

Mat2 Mat2::inverse_det1() const { return Mat2{{e[3], -e[1], -e[2], e[0]}}; }

FieldElem Mat2::det() const { return e[0] * e[3] - e[1] * e[2]; }

FieldElem Mat2::trace() const { return e[0] + e[3]; }

bool Mat2::operator==(const Mat2& rhs) const {
  return e[0] == rhs.e[0] && e[1] == rhs.e[1] && e[2] == rhs.e[2] && e[3] == rhs.e[3];
}

bool Mat2::is_identity() const {
  const auto one = std::optional<Rational>(Rational(1));
  return e[1].is_zero() && e[2].is_zero() && e[0].as_rational() == one &&
         e[3].as_rational() == one;
}

bool Mat2::is_minus_identity() const {
  const auto mone = std::optional<Rational>(Rational(-1));
  return e[1].is_zero() && e[2].is_zero() && e[0].as_rational() == mone &&
         e[3].as_rational() == mone;
}

std::string Mat2::key_string() const {
  return e[0].key_string() + ";" + e[1].key_string() + ";" + e[2].key_string() +
         ";" + e[3].key_string();
}

// ---------------------------------------------------------------------------
// Ray order helpers
// ---------------------------------------------------------------------------

namespace {

// Position of the ray (u, v) on the circle of directions:
// 0: angle 0 (v = 0, u > 0); 1: upper half (0, 1);
// 2: angle 1 (v = 0, u < 0); 3: lower half (1, 2).
int ray_rank(const FieldElem& u, const FieldElem& v) {
  const int sv = v.certified_sign();
  if (sv > 0) return 1;
  if (sv < 0) return 3;
  const int su = u.certified_sign();
  if (su > 0) return 0;
  if (su < 0) return 2;
  throw std::invalid_argument("ray_rank: zero ray");
}

}  // namespace

int Group::compare_rays(const FieldElem& u1, const FieldElem& v1,
                        const FieldElem& u2, const FieldElem& v2) {
  const int r1 = ray_rank(u1, v1);
  const int r2 = ray_rank(u2, v2);
  if (r1 != r2) return r1 < r2 ? -1 : 1;
  if (r1 == 0 || r1 == 2) return 0;
  // Same open half plane: the cross product orders angles.
  const int s = (u1 * v2 - v1 * u2).certified_sign();
  return s > 0 ? -1 : (s < 0 ? 1 : 0);
}

// ---------------------------------------------------------------------------
// LiftedElement
// ---------------------------------------------------------------------------

std::string LiftedElement::key_string() const {
  return m.key_string() + "|" + std::to_string(offset);
}

long LiftedElement::winding() const {
  const int r = ray_rank(m.e[0], m.e[2]);
  return 2 * offset + (r >= 2 ? 1 : 0);
}

// ---------------------------------------------------------------------------
// LinePoint
// ---------------------------------------------------------------------------

LinePoint LinePoint::rational(const Rational& q) {
  LinePoint p;
  p.kind_ = Kind::rational;
  p.q_ = num::canonical(q);
  return p;
}

LinePoint LinePoint::ray(FieldElem u, FieldElem v, long branch,
                         std::optional<LiftedElement> eigen_source) {
  if (u.is_zero() && v.is_zero()) {
    throw std::invalid_argument("LinePoint::ray: zero ray");
  }
  LinePoint p;
  p.kind_ = Kind::ray;
  p.u_ = std::move(u);
  p.v_ = std::move(v);
  p.branch_ = branch;
  p.eigen_source_ = std::move(eigen_source);
  return p;
}

std::string LinePoint::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::rational:
      os << "rational " << q_.get_str();
      break;
    case Kind::ray:
      os << "ray (" << u_.to_string() << " : " << v_.to_string() << ") + 2*"
         << branch_;
      if (eigen_source_.has_value()) {
        os << " [fixed ray of " << eigen_source_->word.str() << "]";
      }
      break;
    case Kind::pushed:
      os << "image of " << q_.get_str() << " under " << pushed_by_->word.str();
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Group construction
// ---------------------------------------------------------------------------

Group::Group() {
  using num::NumberField;
  auto q = num::NumberField::rationals();
  // lambda = 2cos(pi/7), the largest root of x^3 - x^2 - 2x + 1.
  std::vector<FieldElem> cubic = {
      FieldElem::from_rational(q, Rational(1)),
      FieldElem::from_rational(q, Rational(-2)),
      FieldElem::from_rational(q, Rational(-1)),
  };
  auto ql = q->extend("lambda", cubic, Rational(7, 4), Rational(15, 8));
  // mu = sqrt(lambda^2 - 3). The witness interval isolates the conjugate
  // root 2cos(3pi/7) of the cubic, where lambda^2 - 3 is negative; this
  // certifies irreducibility and with it the exact zero test of the tower.
  std::vector<FieldElem> quad = {
      FieldElem(ql, {Rational(3), Rational(0), Rational(-1)}),
      FieldElem::from_rational(ql, Rational(0)),
  };
  num::NumberField::ConjugateWitness witness{Rational(1, 4), Rational(1, 2)};
  K_ = ql->extend("mu", quad, Rational(0), Rational(1), witness);

  const FieldElem lam = K_->lift(ql->generator());
  const FieldElem mu = K_->generator();
  const FieldElem zero = FieldElem::from_rational(K_, Rational(0));
  const FieldElem one = FieldElem::from_rational(K_, Rational(1));
  const FieldElem half = FieldElem::from_rational(K_, Rational(1, 2));
  const FieldElem lpm = (lam + mu).scaled(Rational(1, 2));   // (lambda+mu)/2
  const FieldElem lmm = (lam - mu).scaled(Rational(1, 2));   // (lambda-mu)/2

  // Rotation generators of the (2,3,7) triangle group from the reflection
  // construction (right-angle vertex at the disk center), oriented so that
  // the lifted product abc is the deck translation x -> x + 1.
  Mat2 ma{{zero, -one, one, zero}};
  Mat2 mb{{half, -lpm, lmm, half}};
  Mat2 mc{{lpm, -half, half, lmm}};

  id_ = LiftedElement{Mat2::identity(K_), 0, Word()};
  gen_[0] = make_element(ma, 0, *Word::parse("a"));
  gen_[1] = make_element(mb, 0, *Word::parse("b"));
  gen_[2] = make_element(mc, 0, *Word::parse("c"));

  for (int i = 0; i < 3; ++i) {
    if (!(gen_[i].m.det() == one)) {
      throw ConstructionFailure("generator determinant is not 1");
    }
    gen_[i + 3] = inverse(gen_[i]);
  }

  // Exact verification of a^2 = b^3 = c^7 = abc and of the central action.
  const LiftedElement abc = compose(compose(gen_[0], gen_[1]), gen_[2]);
  z_ = compose(gen_[0], gen_[0]);
  if (!z_.same_element(abc)) throw ConstructionFailure("a^2 != abc");
  const LiftedElement b3 = compose(compose(gen_[1], gen_[1]), gen_[1]);
  if (!b3.same_element(abc)) throw ConstructionFailure("b^3 != abc");
  LiftedElement c7 = gen_[2];
  for (int i = 1; i < 7; ++i) c7 = compose(c7, gen_[2]);
  if (!c7.same_element(abc)) throw ConstructionFailure("c^7 != abc");
  if (!z_.m.is_minus_identity() || z_.offset != 0) {
    throw ConstructionFailure("abc is not the unit deck translation");
  }
  z_.word = *Word::parse("abc");
}

LiftedElement Group::make_element(Mat2 m, long offset, Word w) const {
  return LiftedElement{std::move(m), offset, std::move(w)};
}

// Composition defect: with F the canonical lifts, F_M(F_N(0)) - F_{MN}(0) is
// 0 or 2, and it is 2 exactly when amin(MN e1) < amin(M e1).
int Group::composition_defect(const Mat2& product, const Mat2& left) const {
  return compare_rays(product.e[0], product.e[2], left.e[0], left.e[2]) < 0 ? 1 : 0;
}

LiftedElement Group::compose(const LiftedElement& g, const LiftedElement& h) const {
  Mat2 prod = g.m * h.m;
  const int d = composition_defect(prod, g.m);
  return LiftedElement{std::move(prod), g.offset + h.offset + d, g.word * h.word};
}

LiftedElement Group::inverse(const LiftedElement& g) const {
  Mat2 inv = g.m.inverse_det1();
  // (M^-1, m) (M, n) = (I, 0) forces m = -n - D(M^-1, M), and
  // D(M^-1, M) = [amin(e1) < amin(M^-1 e1)] = [rank(M^-1 e1) != 0].
  const int d = ray_rank(inv.e[0], inv.e[2]) != 0 ? 1 : 0;
  return LiftedElement{std::move(inv), -g.offset - d, g.word.inverted()};
}

LiftedElement Group::power(const LiftedElement& g, long n) const {
  LiftedElement base = n < 0 ? inverse(g) : g;
  long k = n < 0 ? -n : n;
  LiftedElement acc = id_;
  for (long i = 0; i < k; ++i) acc = compose(acc, base);
  return acc;
}

LiftedElement Group::from_word(const Word& w) const {
  LiftedElement acc = id_;
  for (Letter l : w.letters()) acc = compose(acc, gen(l));
  return acc;
}

bool Group::is_identity(const LiftedElement& g) const {
  return g.offset == 0 && g.m.is_identity();
}

ElementClass Group::classify(const LiftedElement& g) const {
  if (g.m.is_identity() || g.m.is_minus_identity()) return ElementClass::central_power;
  const FieldElem t = g.m.trace();
  const FieldElem disc = t * t - FieldElem::from_rational(K_, Rational(4));
  const int s = disc.certified_sign();
  if (s < 0) return ElementClass::elliptic;
  if (s > 0) return ElementClass::hyperbolic;
  throw std::logic_error("classify: |trace| = 2 with nontrivial image "
                         "(impossible in a cocompact Fuchsian group)");
}

Rational Group::translation_number(const LiftedElement& g) const {
  if (g.m.is_identity()) return Rational(2 * g.offset);
  if (g.m.is_minus_identity()) return Rational(2 * g.offset + 1);
  const FieldElem t = g.m.trace();
  const ElementClass cls = classify(g);
  if (cls == ElementClass::hyperbolic) {
    // The translation number of a lift with fixed circle points is its
    // integer displacement at any lift of a fixed point.
    HyperbolicFixedPoints fp = fixed_points(g);
    const LinePoint p = LinePoint::ray(fp.att_u, fp.att_v, 0, g);
    const CertReal diff = value(apply(g, p)) - value(p);
    for (mpfr_prec_t prec = 64; prec <= (1 << 16); prec *= 2) {
      if (auto k = diff.enclosure(prec).pinned_integer()) return Rational(*k);
    }
    throw std::logic_error("translation_number: integer displacement did not pin");
  }
  // Elliptic: the trace is 2cos(theta) for theta a multiple of pi/7 (or of
  // pi/3, pi/2), since torsion is conjugate into the vertex groups. The sign
  // of gamma - beta selects theta vs 2pi - theta.
  const FieldPtr& ql = K_->base();
  const FieldElem lam = K_->lift(ql->generator());
  const FieldElem lam2 = lam * lam;
  const FieldElem two = FieldElem::from_rational(K_, Rational(2));
  const FieldElem one = FieldElem::from_rational(K_, Rational(1));
  const std::pair<FieldElem, Rational> table[] = {
      {FieldElem::from_rational(K_, Rational(0)), Rational(1, 2)},
      {one, Rational(1, 3)},
      {-one, Rational(2, 3)},
      {lam, Rational(1, 7)},
      {lam2 - two, Rational(2, 7)},
      {lam2 - lam - one, Rational(3, 7)},
      {one + lam - lam2, Rational(4, 7)},
      {two - lam2, Rational(5, 7)},
      {-lam, Rational(6, 7)},
  };
  std::optional<Rational> theta_over_pi;
  for (const auto& [tr, frac] : table) {
    if (t == tr) {
      theta_over_pi = frac;
      break;
    }
  }
  if (!theta_over_pi.has_value()) {
    throw std::logic_error("translation_number: elliptic trace outside the "
                           "(2,3,7) torsion classes");
  }
  const int orient = (g.m.e[2] - g.m.e[1]).certified_sign();
  if (orient == 0) throw std::logic_error("translation_number: degenerate elliptic");
  const Rational frac = orient > 0 ? *theta_over_pi : Rational(2) - *theta_over_pi;
  return Rational(2 * g.offset) + frac;
}

// ---------------------------------------------------------------------------
// Fixed points of hyperbolic elements
// ---------------------------------------------------------------------------

FieldPtr Group::sqrt_extension(const FieldElem& d) const {
  const std::string key = d.key_string();
  auto it = sqrt_cache_.find(key);
  if (it != sqrt_cache_.end()) return it->second;
  if (d.certified_sign() <= 0) {
    throw std::invalid_argument("sqrt_extension: d must be certified positive");
  }
  // Isolating interval [0, hi] with hi^2 > d.
  Interval enc = d.enclosure(64);
  Rational hi(static_cast<long>(enc.hi_double()) + 2);
  std::vector<FieldElem> tail = {-d, FieldElem::from_rational(K_, Rational(0))};
  FieldPtr ext = K_->extend("nu", tail, Rational(0), hi);
  sqrt_cache_.emplace(key, ext);
  return ext;
}

Mat2 Group::lift_matrix(const Mat2& m, const FieldPtr& ext) const {
  assert(ext->base() == K_);
  return Mat2{{ext->lift(m.e[0]), ext->lift(m.e[1]), ext->lift(m.e[2]),
               ext->lift(m.e[3])}};
}

HyperbolicFixedPoints Group::fixed_points(const LiftedElement& g) const {
  if (classify(g) != ElementClass::hyperbolic) {
    throw std::invalid_argument("fixed_points: element is not hyperbolic");
  }
  const FieldElem& alpha = g.m.e[0];
  const FieldElem& beta = g.m.e[1];
  const FieldElem& gamma = g.m.e[2];
  const FieldElem& delta = g.m.e[3];
  const FieldElem t = g.m.trace();

  HyperbolicFixedPoints out;
  if (!gamma.is_zero()) {
    FieldElem d = t * t - FieldElem::from_rational(K_, Rational(4));
    FieldElem nu;  // sqrt(d) in out.ext
    // A rational perfect square keeps everything inside K.
    auto dr = d.as_rational();
    bool in_K = false;
    if (dr.has_value() && mpz_perfect_square_p(dr->get_num_mpz_t()) &&
        mpz_perfect_square_p(dr->get_den_mpz_t())) {
      Integer n_, d_;
      mpz_sqrt(n_.get_mpz_t(), dr->get_num_mpz_t());
      mpz_sqrt(d_.get_mpz_t(), dr->get_den_mpz_t());
      nu = FieldElem::from_rational(K_, Rational(n_) / Rational(d_));
      out.ext = K_;
      in_K = true;
    } else {
      out.ext = sqrt_extension(d);
      nu = out.ext->generator();
    }
    const FieldElem te = in_K ? t : out.ext->lift(t);
    const FieldElem de = in_K ? delta : out.ext->lift(delta);
    const FieldElem ge = in_K ? gamma : out.ext->lift(gamma);
    const FieldElem xi_plus = (te + nu).scaled(Rational(1, 2));
    const FieldElem xi_minus = (te - nu).scaled(Rational(1, 2));
    const bool plus_dominant = t.certified_sign() > 0;
    const FieldElem& xi_att = plus_dominant ? xi_plus : xi_minus;
    const FieldElem& xi_rep = plus_dominant ? xi_minus : xi_plus;
    out.att_u = xi_att - de;
    out.att_v = ge;
    out.rep_u = xi_rep - de;
    out.rep_v = ge;
    out.att_eigenvalue = xi_att;
    return out;
  }

  // gamma = 0: triangular, eigenvalues alpha and delta stay in K.
  out.ext = K_;
  const FieldElem one = FieldElem::from_rational(K_, Rational(1));
  const FieldElem zero = FieldElem::from_rational(K_, Rational(0));
  const bool alpha_dominant =
      (alpha * alpha - one).certified_sign() > 0;  // |alpha| > 1
  // e1 is an eigenray for alpha; (beta, delta - alpha) for delta (or e2 when
  // beta = 0).
  FieldElem u2, v2;
  if (beta.is_zero()) {
    u2 = zero;
    v2 = one;
  } else {
    u2 = beta;
    v2 = delta - alpha;
  }
  if (alpha_dominant) {
    out.att_u = one;
    out.att_v = zero;
    out.rep_u = u2;
    out.rep_v = v2;
    out.att_eigenvalue = alpha;
  } else {
    out.att_u = u2;
    out.att_v = v2;
    out.rep_u = one;
    out.rep_v = zero;
    out.att_eigenvalue = delta;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Action on points of the line
// ---------------------------------------------------------------------------

namespace {

// q = q0 + 2m with q0 in [0, 2).
std::pair<Rational, long> reduce_mod_two(Rational q) {
  q.canonicalize();
  Rational half = q / 2;
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), half.get_num_mpz_t(), half.get_den_mpz_t());
  if (!fl.fits_slong_p()) throw std::overflow_error("point coordinate too large");
  return {q - 2 * Rational(fl), fl.get_si()};
}

// Certified numeric value of amin(u : v) for exact ray coordinates.
CertReal ray_angle_value(const FieldElem& u, const FieldElem& v) {
  switch (ray_rank(u, v)) {
    case 0: return CertReal::from_integer(0);
    case 1: return CertReal::angle_pi(CertReal::from_field(u), CertReal::from_field(v), false);
    case 2: return CertReal::from_integer(1);
    default: return CertReal::angle_pi(CertReal::from_field(u), CertReal::from_field(v), true);
  }
}

// Sign of a CertReal with escalating precision; understands exact forms.
std::optional<int> numeric_sign(const CertReal& x, unsigned max_bits) {
  try {
    return x.certified_sign(max_bits);
  } catch (const PrecisionExhausted&) {
    return std::nullopt;
  }
}

}  // namespace

LinePoint Group::apply(const LiftedElement& g, const LinePoint& p) const {
  switch (p.kind()) {
    case LinePoint::Kind::rational: {
      if (g.m.is_identity() || g.m.is_minus_identity()) {
        const long shift = g.m.is_identity() ? 2 * g.offset : 2 * g.offset + 1;
        return LinePoint::rational(p.rational_value() + shift);
      }
      LinePoint out;
      out.kind_ = LinePoint::Kind::pushed;
      out.q_ = p.rational_value();
      out.pushed_by_ = g;
      return out;
    }
    case LinePoint::Kind::pushed: {
      LiftedElement composed = compose(g, *p.pushed_by_);
      if (composed.m.is_identity() || composed.m.is_minus_identity()) {
        const long shift =
            composed.m.is_identity() ? 2 * composed.offset : 2 * composed.offset + 1;
        return LinePoint::rational(p.q_ + shift);
      }
      LinePoint out;
      out.kind_ = LinePoint::Kind::pushed;
      out.q_ = p.q_;
      out.pushed_by_ = std::move(composed);
      return out;
    }
    case LinePoint::Kind::ray: {
      const FieldPtr& F = p.ray_u().field();
      const Mat2 M = (F == K_) ? g.m : lift_matrix(g.m, F);
      FieldElem nu = M.e[0] * p.ray_u() + M.e[1] * p.ray_v();
      FieldElem nv = M.e[2] * p.ray_u() + M.e[3] * p.ray_v();
      // Wrap: F_M(x0) = amin(M r) + 2*[amin(M r) < amin(M e1)].
      const int cmp = compare_rays(nu, nv, M.e[0], M.e[2]);
      const long wrap = cmp < 0 ? 1 : 0;
      std::optional<LiftedElement> src;
      if (p.eigen_source().has_value()) {
        src = compose(compose(g, *p.eigen_source()), inverse(g));
      }
      return LinePoint::ray(std::move(nu), std::move(nv),
                            p.branch() + wrap + g.offset, std::move(src));
    }
  }
  throw std::logic_error("apply: bad point kind");
}

CertReal Group::value(const LinePoint& p) const {
  switch (p.kind()) {
    case LinePoint::Kind::rational:
      return CertReal::from_rational(p.rational_value());
    case LinePoint::Kind::ray:
      return ray_angle_value(p.ray_u(), p.ray_v()).add_integer(2 * p.branch());
    case LinePoint::Kind::pushed:
      break;
  }
  const LiftedElement& g = *p.pushed_by();
  const auto [q0, m] = reduce_mod_two(p.q_);
  const long base_shift = 2 * (m + g.offset);
  if (q0 == 0) {
    return ray_angle_value(g.m.e[0], g.m.e[2]).add_integer(base_shift);
  }
  if (q0 == 1) {
    return ray_angle_value(g.m.e[0], g.m.e[2]).add_integer(base_shift + 1);
  }
  const CertReal u0 = CertReal::cos_pi(q0);
  const CertReal v0 = CertReal::sin_pi(q0);
  const CertReal su = CertReal::from_field(g.m.e[0]) * u0 + CertReal::from_field(g.m.e[1]) * v0;
  const CertReal sv = CertReal::from_field(g.m.e[2]) * u0 + CertReal::from_field(g.m.e[3]) * v0;
  const unsigned bits = 1u << 14;
  auto sv_sign = numeric_sign(sv, bits);
  if (!sv_sign.has_value()) {
    throw PrecisionExhausted("value: image ray sign undecided");
  }
  CertReal angle;
  if (*sv_sign > 0) {
    angle = CertReal::angle_pi(su, sv, false);
  } else if (*sv_sign < 0) {
    angle = CertReal::angle_pi(su, sv, true);
  } else {
    auto su_sign = numeric_sign(su, bits);
    if (!su_sign.has_value() || *su_sign == 0) {
      throw PrecisionExhausted("value: degenerate image ray");
    }
    angle = CertReal::from_integer(*su_sign > 0 ? 0 : 1);
  }
  // Wrap indicator against amin(M e1); equality would force q0 = 0.
  const CertReal ref = ray_angle_value(g.m.e[0], g.m.e[2]);
  auto cmp = CertReal::try_compare(angle, ref, bits);
  if (!cmp.has_value()) {
    throw PrecisionExhausted("value: wrap comparison undecided");
  }
  return angle.add_integer(base_shift + (*cmp < 0 ? 2 : 0));
}

std::optional<int> Group::compare_points(const LinePoint& x, const LinePoint& y,
                                         unsigned max_bits) const {
  if (x.kind() == LinePoint::Kind::rational && y.kind() == LinePoint::Kind::rational) {
    return sgn(x.rational_value() - y.rational_value());
  }
  if (x.kind() == LinePoint::Kind::ray && y.kind() == LinePoint::Kind::ray &&
      x.ray_u().field() == y.ray_u().field() &&
      x.ray_u().field()->zero_test_valid()) {
    if (x.branch() != y.branch()) return x.branch() < y.branch() ? -1 : 1;
    return compare_rays(x.ray_u(), x.ray_v(), y.ray_u(), y.ray_v());
  }
  try {
    return CertReal::try_compare(value(x), value(y), max_bits);
  } catch (const PrecisionExhausted& e) {
    if (std::getenv("LO237_DEBUG")) {
      std::cerr << "[compare_points] " << e.what() << "\n    x = " << x.describe()
                << "\n    y = " << y.describe() << std::endl;
    }
    return std::nullopt;
  }
}

std::optional<int> Group::displacement_sign(const LiftedElement& g, const LinePoint& p,
                                            unsigned max_bits) const {
  return compare_points(apply(g, p), p, max_bits);
}

std::array<double, 4> Group::approx_matrix(const LiftedElement& g) const {
  return {g.m.e[0].enclosure(64).mid_double(), g.m.e[1].enclosure(64).mid_double(),
          g.m.e[2].enclosure(64).mid_double(), g.m.e[3].enclosure(64).mid_double()};
}

double Group::apply_approx(const LiftedElement& g, double x) const {
  if (g.m.is_identity()) return x + 2 * g.offset;
  if (g.m.is_minus_identity()) return x + 1 + 2 * g.offset;
  const auto M = approx_matrix(g);
  const double m2 = std::floor(x / 2.0);
  const double x0 = x - 2 * m2;
  const double u = std::cos(M_PI * x0);
  const double v = std::sin(M_PI * x0);
  const double iu = M[0] * u + M[1] * v;
  const double iv = M[2] * u + M[3] * v;
  double ang = std::atan2(iv, iu) / M_PI;
  if (ang < 0) ang += 2;
  double ref = std::atan2(M[2], M[0]) / M_PI;
  if (ref < 0) ref += 2;
  const double w = ang < ref ? 1 : 0;
  return ang + 2 * (w + m2 + g.offset);
}

int Group::germ_sign_at_fixed_point(const LiftedElement& g, const LinePoint& p,
                                    int side) const {
  if (p.kind() != LinePoint::Kind::ray) {
    throw std::invalid_argument("germ_sign_at_fixed_point: point must be an exact ray");
  }
  const FieldPtr& F = p.ray_u().field();
  const Mat2 M = (F == K_) ? g.m : lift_matrix(g.m, F);
  const FieldElem iu = M.e[0] * p.ray_u() + M.e[1] * p.ray_v();
  const FieldElem iv = M.e[2] * p.ray_u() + M.e[3] * p.ray_v();
  // |eigenvalue| > 1 iff the image coordinate grows; use a coordinate of
  // certified nonzero sign (exists by ray_rank).
  const int rank = ray_rank(p.ray_u(), p.ray_v());
  const FieldElem& rc = (rank == 1 || rank == 3) ? p.ray_v() : p.ray_u();
  const FieldElem& ic = (rank == 1 || rank == 3) ? iv : iu;
  const int growth = (ic * ic - rc * rc).certified_sign();
  if (growth == 0) {
    throw std::logic_error("germ_sign_at_fixed_point: |eigenvalue| = 1");
  }
  const bool attracting = growth > 0;
  // Attracting: points strictly left of p move up, right move down.
  if (attracting) return side < 0 ? 1 : -1;
  return side < 0 ? -1 : 1;
}

}  // namespace lo237::grp
