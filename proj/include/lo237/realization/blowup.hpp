#pragma once

#include <functional>

#include "lo237/orders/oracle.hpp"

namespace lo237::real {

using grp::Ball;
using grp::Group;
using grp::LiftedElement;
using grp::LinePoint;
using num::CertReal;
using num::Interval;
using num::Rational;

// A point of the blown-up line: either inside the inserted gap over an
// orbit point (identified by its coset representative and a position
// fraction), or the image of a base-line point under the defining
// embedding.
struct BlownPoint {
  enum class Kind { gap, graph };
  Kind kind = Kind::graph;
  size_t orbit_index = 0;  // gap kind
  Rational theta;          // gap kind, position fraction in (0, 1)
  LinePoint base;          // graph kind

  static BlownPoint gap(size_t orbit_index, Rational theta);
  static BlownPoint graph(LinePoint x);
};

// Blow-up of the standard action along the orbit of a basepoint: an
// interval of length 2^-(i+1) is inserted at the i-th orbit point in
// enumeration order. The collapse map h squashes each inserted gap back to
// its orbit point; the blown-up action maps gaps to gaps affinely (hence,
// gaps over the same point, identically).
class BlowupMap {
public:
  // Orbit mode: insert along the orbit of base under ball(radius); for a
  // basepoint with cyclic stabilizer pass its generator for coset dedup.
  BlowupMap(const Group& G, Ball& ball, LinePoint base,
            std::optional<LiftedElement> stabilizer, int radius);

  // Finite explicit mode: gaps of the given lengths at the given points
  // (pairwise distinct, certified comparable).
  static BlowupMap finite(const Group& G,
                          std::vector<std::pair<LinePoint, Rational>> insertions);

  size_t orbit_size() const { return orbit_.size(); }
  const LinePoint& orbit_point(size_t i) const { return orbit_[i].point; }
  const Rational& gap_length(size_t i) const { return orbit_[i].length; }
  Rational total_inserted_length() const;  // enumerated gaps
  Rational tail_bound() const;             // bound on the un-enumerated rest

  // The blown-up action phi'(g); gap indices must stay within the
  // enumerated orbit (choose the radius accordingly).
  BlownPoint transport(const LiftedElement& g, const BlownPoint& y) const;

  // The collapse h: exact on both kinds of points.
  LinePoint collapse(const BlownPoint& y) const;

  // Coordinate of a point in the blown-up line (certified; includes the
  // tail bound for gaps not yet enumerated).
  CertReal coordinate(const BlownPoint& y) const;

  // Index of the gap over the orbit point of g * base, if enumerated.
  std::optional<size_t> orbit_index_of(const LiftedElement& g) const;

  // Certified order of two blown-up points. Distinct gaps are ordered by
  // their collapsed points, points inside one gap by the position fraction.
  int compare(const BlownPoint& x, const BlownPoint& y) const;

  std::string to_json() const;

private:
  BlowupMap() = default;

  struct OrbitEntry {
    LiftedElement rep;  // coset representative moving base to the point
    LinePoint point;
    Rational length;
  };

  const Group* G_ = nullptr;
  LinePoint base_;
  std::optional<LiftedElement> stab_;
  std::vector<OrbitEntry> orbit_;
  bool orbit_mode_ = true;
  Rational tail_;  // upper bound for lengths beyond the enumeration
};

// Maximum certified defect max |h(phi'(g)(x)) - phi(g)(h(x))| over the
// samples and elements, as an interval enclosure at the given precision.
// The maps are passed as point transformations of the base line, making the
// designed-failure cases (wrong h, shifted action) expressible.
using PointMap = std::function<LinePoint(const LinePoint&)>;
using LineAction = std::function<LinePoint(const LiftedElement&, const LinePoint&)>;

Interval check_semiconjugacy(const Group& G, const PointMap& h,
                             const LineAction& phi_prime, const LineAction& phi,
                             std::span<const LinePoint> samples,
                             std::span<const LiftedElement> elems, mpfr_prec_t prec);

// Max certified |h(phi'(g)(y)) - phi(g)(h(y))| for a constructed blow-up,
// with phi' the blown-up action and h the collapse; zero by construction,
// and the two sides are evaluated through different composition paths.
Interval blowup_defect(const Group& G, const BlowupMap& B,
                       std::span<const BlownPoint> samples,
                       std::span<const LiftedElement> elems, mpfr_prec_t prec);

}  // namespace lo237::real
