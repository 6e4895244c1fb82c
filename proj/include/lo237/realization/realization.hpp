#pragma once

#include <functional>

#include "lo237/orders/cone_table.hpp"

namespace lo237::real {

using grp::Ball;
using grp::Group;
using grp::Letter;
using grp::LiftedElement;
using grp::Word;
using num::Rational;

// Raised when the supplied sign data cannot come from a left-order (the
// order-preserving placement would be contradictory).
class InconsistentOracle : public std::runtime_error {
public:
  explicit InconsistentOracle(const std::string& what) : std::runtime_error(what) {}
};

// Piecewise-linear increasing homeomorphism of the line given by its knots,
// extended with slope 1 beyond them.
class PLMap {
public:
  PLMap() = default;
  explicit PLMap(std::vector<std::pair<Rational, Rational>> knots);
  Rational operator()(const Rational& x) const;
  const std::vector<std::pair<Rational, Rational>>& knots() const { return knots_; }

private:
  std::vector<std::pair<Rational, Rational>> knots_;  // strictly increasing in x and y
};

// Finite-stage dynamical realization: an order-preserving placement of
// ball(stage) into the rationals with placement(id) = 0, together with the
// piecewise-linear generator extensions interpolating the placement.
struct PartialRealization {
  int stage = 0;
  std::vector<std::pair<LiftedElement, Rational>> placement;  // ball order
  PLMap extension[6];

  std::optional<Rational> placement_of(const Ball& ball, const LiftedElement& g) const;
  // Apply the extension maps along the letters of a word.
  Rational apply_word(const Word& w, const Rational& x) const;
  std::string to_csv() const;
};

// Signs of non-identity elements; must be total on the quotient set
// ball(stage)^-1 ball(stage) for the construction to run.
using SignFunction = std::function<int(const LiftedElement&)>;

PartialRealization build_realization(const Group& G, Ball& ball,
                                     const SignFunction& sign, int stage);

inline PartialRealization build_realization(const ord::OrderOracle& o, Ball& ball,
                                            int stage) {
  return build_realization(o.group(), ball,
                           [&o](const LiftedElement& g) { return o.sign(g); }, stage);
}

}  // namespace lo237::real
