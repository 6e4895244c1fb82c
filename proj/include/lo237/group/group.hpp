#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lo237/group/word.hpp"
#include "lo237/numerics/cert_real.hpp"
#include "lo237/numerics/number_field.hpp"

namespace lo237::grp {

using num::CertReal;
using num::FieldElem;
using num::FieldPtr;
using num::Rational;

// Raised when the exact verification of the defining relations (or of an
// exact invariant that must hold by construction) fails.
class ConstructionFailure : public std::runtime_error {
public:
  explicit ConstructionFailure(const std::string& what) : std::runtime_error(what) {}
};

// 2x2 matrix with exact number-field entries, row major.
struct Mat2 {
  FieldElem e[4];

  static Mat2 identity(const FieldPtr& F);
  Mat2 operator*(const Mat2& rhs) const;
  Mat2 negated() const;
  Mat2 inverse_det1() const;  // adjugate; valid when det = 1
  FieldElem det() const;
  FieldElem trace() const;
  bool operator==(const Mat2& rhs) const;
  bool is_identity() const;
  bool is_minus_identity() const;
  std::string key_string() const;
};

// Element of the group as a lift of a Mobius transformation: the matrix in
// SL(2,R) (sign significant) together with an even translation offset. The
// action on the line is x -> F_m(x) + 2*offset where F_m is the canonical
// lift of the ray action of m in the coordinate x -> (cos pi x, sin pi x).
struct LiftedElement {
  Mat2 m;
  long offset = 0;
  Word word;  // witness spelling; not part of the group identity

  bool same_element(const LiftedElement& o) const {
    return offset == o.offset && m == o.m;
  }
  std::string key_string() const;
  // floor(rho(g)(0)): 2*offset plus one when the first column ray lies in
  // the closed lower half plane turned past angle pi.
  long winding() const;
};

enum class ElementClass { central_power, elliptic, hyperbolic };

// A point of the real line in one of three exact-ness flavours:
//  - rational: exact rational coordinate;
//  - ray: amin(u:v) + 2*branch for an exact ray in a declared field (exact
//    order comparisons against group translates);
//  - pushed: the image of a rational point under a group element (numeric
//    enclosures only).
class LinePoint {
public:
  enum class Kind { rational, ray, pushed };

  LinePoint() = default;  // the rational point 0

  static LinePoint rational(const Rational& q);
  static LinePoint ray(FieldElem u, FieldElem v, long branch,
                       std::optional<LiftedElement> eigen_source = std::nullopt);

  Kind kind() const { return kind_; }
  const Rational& rational_value() const { return q_; }
  const FieldElem& ray_u() const { return u_; }
  const FieldElem& ray_v() const { return v_; }
  long branch() const { return branch_; }
  const std::optional<LiftedElement>& eigen_source() const { return eigen_source_; }
  const std::optional<LiftedElement>& pushed_by() const { return pushed_by_; }

  std::string describe() const;

private:
  friend class Group;

  Kind kind_ = Kind::rational;
  Rational q_;                   // rational kind, or the base of a pushed point
  FieldElem u_, v_;              // ray kind
  long branch_ = 0;              // ray kind
  std::optional<LiftedElement> eigen_source_;  // ray kind: defining hyperbolic
  std::optional<LiftedElement> pushed_by_;     // pushed kind
};

// Attracting/repelling circle fixed points of a hyperbolic element, as exact
// rays in the group's field or in a quadratic extension of it.
struct HyperbolicFixedPoints {
  FieldPtr ext;  // field of the coordinates (the group field when possible)
  FieldElem att_u, att_v;
  FieldElem rep_u, rep_v;
  FieldElem att_eigenvalue;  // eigenvalue on the attracting ray, |value| > 1
};

// The group G = <a, b, c | a^2 = b^3 = c^7 = abc> realized inside the
// universal cover of PSL(2,R), acting on the line. Construction derives the
// triangle-group matrices from the reflection construction and verifies all
// defining relations exactly; it throws ConstructionFailure otherwise.
class Group {
public:
  Group();

  const FieldPtr& field() const { return K_; }
  const LiftedElement& identity() const { return id_; }
  const LiftedElement& central() const { return z_; }  // abc, acts as x -> x+1
  const LiftedElement& gen(Letter l) const { return gen_[static_cast<uint8_t>(l)]; }

  LiftedElement compose(const LiftedElement& g, const LiftedElement& h) const;
  LiftedElement inverse(const LiftedElement& g) const;
  LiftedElement power(const LiftedElement& g, long n) const;
  LiftedElement from_word(const Word& w) const;
  bool is_identity(const LiftedElement& g) const;

  ElementClass classify(const LiftedElement& g) const;

  // Exact translation number of the lifted action (tau(abc) = 1).
  Rational translation_number(const LiftedElement& g) const;

  // Fixed points on the circle; requires classify(g) == hyperbolic.
  HyperbolicFixedPoints fixed_points(const LiftedElement& g) const;

  // rho(g) applied to a point of the line, staying exact whenever the
  // point representation allows it.
  LinePoint apply(const LiftedElement& g, const LinePoint& p) const;

  // Certified numeric value of a point.
  CertReal value(const LinePoint& p) const;

  // Exact comparison of two points when both are exact (ray/ray in one
  // field, or rational/rational); otherwise certified numeric comparison.
  // nullopt when undecidable within max_bits.
  std::optional<int> compare_points(const LinePoint& x, const LinePoint& y,
                                    unsigned max_bits = 4096) const;

  // Sign of rho(g)(p) - p; nullopt when undecidable within the bit budget
  // (exact representations always decide, including exact ties -> 0).
  std::optional<int> displacement_sign(const LiftedElement& g, const LinePoint& p,
                                       unsigned max_bits = 4096) const;

  // For g with M fixing the ray of p positively and fixing p on the line:
  // the sign of the germ of rho(g) on the given side of p (+1 = points move
  // up). side < 0 means left.
  int germ_sign_at_fixed_point(const LiftedElement& g, const LinePoint& p,
                               int side) const;

  // Exact comparison of canonical ray angles amin(u1:v1) vs amin(u2:v2).
  static int compare_rays(const FieldElem& u1, const FieldElem& v1,
                          const FieldElem& u2, const FieldElem& v2);

  // Double-precision estimate of rho(g)(x); a fast uncertified prefilter,
  // never used to decide an outcome on its own.
  double apply_approx(const LiftedElement& g, double x) const;
  std::array<double, 4> approx_matrix(const LiftedElement& g) const;

  // Matrix entries lifted into a quadratic extension field.
  Mat2 lift_matrix(const Mat2& m, const FieldPtr& ext) const;

  // Shared quadratic extension K(sqrt(d)) for a positive non-square d in K;
  // cached so equal d always yields the same field object.
  FieldPtr sqrt_extension(const FieldElem& d) const;

  std::string tower_description() const { return K_->describe(); }

private:
  int composition_defect(const Mat2& product, const Mat2& left) const;
  LiftedElement make_element(Mat2 m, long offset, Word w) const;

  FieldPtr K_;
  LiftedElement id_, z_;
  LiftedElement gen_[6];
  mutable std::map<std::string, FieldPtr> sqrt_cache_;
};

}  // namespace lo237::grp
