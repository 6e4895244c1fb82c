#include "lo237/realization/blowup.hpp"

#include <sstream>

namespace lo237::real {

using grp::in_cyclic_group;

BlownPoint BlownPoint::gap(size_t orbit_index, Rational theta) {
  if (theta <= 0 || theta >= 1) {
    throw std::invalid_argument("BlownPoint::gap: theta must lie in (0, 1)");
  }
  BlownPoint p;
  p.kind = Kind::gap;
  p.orbit_index = orbit_index;
  p.theta = std::move(theta);
  return p;
}

BlownPoint BlownPoint::graph(LinePoint x) {
  BlownPoint p;
  p.kind = Kind::graph;
  p.base = std::move(x);
  return p;
}

BlowupMap::BlowupMap(const Group& G, Ball& ball, LinePoint base,
                     std::optional<LiftedElement> stabilizer, int radius)
    : G_(&G), base_(std::move(base)), stab_(std::move(stabilizer)) {
  ball.ensure_radius(radius);
  for (const LiftedElement& g : ball.elements(radius)) {
    if (stab_.has_value()) {
      // Keep one representative per coset g<k>: skip g if g = g' k^m for an
      // earlier representative g'.
      bool seen = false;
      for (const OrbitEntry& e : orbit_) {
        if (in_cyclic_group(G, G.compose(G.inverse(e.rep), g), *stab_)) {
          seen = true;
          break;
        }
      }
      if (seen) continue;
    }
    OrbitEntry entry;
    entry.rep = g;
    entry.point = G.apply(g, base_);
    entry.length = Rational(1);
    entry.length /= (num::Integer(1) << (orbit_.size() + 1));
    orbit_.push_back(std::move(entry));
  }
  tail_ = Rational(1);
  tail_ /= (num::Integer(1) << orbit_.size());
}

BlowupMap BlowupMap::finite(const Group& G,
                            std::vector<std::pair<LinePoint, Rational>> insertions) {
  BlowupMap B;
  B.G_ = &G;
  B.orbit_mode_ = false;
  B.tail_ = 0;
  for (auto& [p, len] : insertions) {
    if (len <= 0) throw std::invalid_argument("BlowupMap::finite: lengths must be positive");
    OrbitEntry e;
    e.rep = G.identity();
    e.point = std::move(p);
    e.length = std::move(len);
    B.orbit_.push_back(std::move(e));
  }
  return B;
}

Rational BlowupMap::total_inserted_length() const {
  Rational s(0);
  for (const auto& e : orbit_) s += e.length;
  return s;
}

Rational BlowupMap::tail_bound() const { return tail_; }

std::optional<size_t> BlowupMap::orbit_index_of(const LiftedElement& g) const {
  for (size_t i = 0; i < orbit_.size(); ++i) {
    if (stab_.has_value()) {
      if (in_cyclic_group(*G_, G_->compose(G_->inverse(orbit_[i].rep), g), *stab_)) {
        return i;
      }
    } else if (orbit_[i].rep.same_element(g)) {
      return i;
    }
  }
  return std::nullopt;
}

BlownPoint BlowupMap::transport(const LiftedElement& g, const BlownPoint& y) const {
  if (y.kind == BlownPoint::Kind::graph) {
    return BlownPoint::graph(G_->apply(g, y.base));
  }
  if (!orbit_mode_) {
    throw std::logic_error("BlowupMap::transport: finite insertions carry no action");
  }
  const LiftedElement moved = G_->compose(g, orbit_[y.orbit_index].rep);
  auto idx = orbit_index_of(moved);
  if (!idx.has_value()) {
    throw std::out_of_range("BlowupMap::transport: image gap beyond the enumerated "
                            "orbit; increase the radius");
  }
  // Gaps map onto gaps by the increasing affine bijection, which preserves
  // the position fraction.
  return BlownPoint::gap(*idx, y.theta);
}

LinePoint BlowupMap::collapse(const BlownPoint& y) const {
  if (y.kind == BlownPoint::Kind::graph) return y.base;
  return orbit_[y.orbit_index].point;
}

CertReal BlowupMap::coordinate(const BlownPoint& y) const {
  // Position = base coordinate + sum of gap lengths strictly below, plus
  // theta * (own gap length) for gap points. The un-enumerated tail
  // contributes an interval [0, tail_].
  const LinePoint at = collapse(y);
  CertReal x = G_->value(at);
  Rational below(0);
  for (size_t i = 0; i < orbit_.size(); ++i) {
    if (y.kind == BlownPoint::Kind::gap && i == y.orbit_index) continue;
    auto cmp = G_->compare_points(orbit_[i].point, at, 1u << 12);
    if (!cmp.has_value()) {
      throw num::PrecisionExhausted("BlowupMap::coordinate: orbit comparison undecided");
    }
    if (*cmp < 0) below += orbit_[i].length;
    if (*cmp == 0 && y.kind == BlownPoint::Kind::graph) {
      throw std::invalid_argument("BlowupMap::coordinate: graph point lies on the orbit");
    }
  }
  if (y.kind == BlownPoint::Kind::gap) {
    below += y.theta * orbit_[y.orbit_index].length;
  }
  CertReal shift = CertReal::from_rational(below);
  if (orbit_mode_) {
    const Rational tail = tail_;
    shift = shift + CertReal::opaque([tail](mpfr_prec_t prec) {
      return Interval::zero_to(tail, prec);
    });
  }
  return x + shift;
}

int BlowupMap::compare(const BlownPoint& x, const BlownPoint& y) const {
  if (x.kind == BlownPoint::Kind::gap && y.kind == BlownPoint::Kind::gap &&
      x.orbit_index == y.orbit_index) {
    return sgn(Rational(x.theta - y.theta));
  }
  auto cmp = G_->compare_points(collapse(x), collapse(y), 1u << 13);
  if (!cmp.has_value()) {
    throw num::PrecisionExhausted("BlowupMap::compare: collapsed points undecided");
  }
  if (*cmp != 0) return *cmp;
  // Same collapsed point: a gap strictly contains the graph copy only when
  // the blow-up inserted there, and distinct kinds cannot tie.
  throw std::invalid_argument("BlowupMap::compare: points collapse to one orbit point");
}

std::string BlowupMap::to_json() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < orbit_.size(); ++i) {
    if (i) os << ", ";
    os << "{\"rep\": \"" << orbit_[i].rep.word.str() << "\", \"point\": \""
       << orbit_[i].point.describe() << "\", \"length\": \""
       << orbit_[i].length.get_str() << "\"}";
  }
  os << "]";
  return os.str();
}

Interval check_semiconjugacy(const Group& G, const PointMap& h,
                             const LineAction& phi_prime, const LineAction& phi,
                             std::span<const LinePoint> samples,
                             std::span<const LiftedElement> elems, mpfr_prec_t prec) {
  Interval max_defect = Interval::from_integer(0);
  for (const LinePoint& x : samples) {
    for (const LiftedElement& g : elems) {
      const LinePoint lhs = h(phi_prime(g, x));
      const LinePoint rhs = phi(g, h(x));
      CertReal diff = G.value(lhs) - G.value(rhs);
      max_defect = Interval::max_with(max_defect, diff.enclosure(prec).abs());
    }
  }
  return max_defect;
}

Interval blowup_defect(const Group& G, const BlowupMap& B,
                       std::span<const BlownPoint> samples,
                       std::span<const LiftedElement> elems, mpfr_prec_t prec) {
  Interval max_defect = Interval::from_integer(0);
  for (const BlownPoint& y : samples) {
    for (const LiftedElement& g : elems) {
      const LinePoint lhs = B.collapse(B.transport(g, y));
      const LinePoint rhs = G.apply(g, B.collapse(y));
      CertReal diff = G.value(lhs) - G.value(rhs);
      max_defect = Interval::max_with(max_defect, diff.enclosure(prec).abs());
    }
  }
  return max_defect;
}

}  // namespace lo237::real
