#pragma once

#include <optional>
#include <random>
#include <vector>

#include "lo237/group/ball.hpp"
#include "lo237/group/stabilizer.hpp"

namespace lo237::ord {

using grp::Ball;
using grp::Group;
using grp::LiftedElement;
using grp::LinePoint;
using grp::Word;
using num::Rational;

enum class Side { left, right };

// Raised when a sign query hits an exact tie that no configured tiebreak
// resolves. Unreachable for cyclic stabilizers with a side choice; kept as
// the documented failure mode for degenerate configurations.
class TiebreakExhausted : public std::runtime_error {
public:
  explicit TiebreakExhausted(const std::string& what) : std::runtime_error(what) {}
};

// A left-order on the group given by its dynamical realization: a basepoint
// on the line plus a side tiebreak for elements fixing it, optionally
// orientation-reversed. Sign queries are certified: positional comparisons
// are exact for exact basepoints, and ties are detected by an exact cyclic
// membership test when the basepoint carries a stabilizer.
class OrderOracle {
public:
  // Free rational basepoint for the standard action. The caller is
  // responsible for freeness (see sample_free_oracle).
  static OrderOracle at_rational(const Group& G, Ball& ball, const Rational& q,
                                 unsigned max_bits = 4096);

  // Basepoint with cyclic stabilizer: the attracting or repelling end of a
  // hyperbolic element, with a declared tiebreak side. Realizes the order of
  // a basepoint inside the inserted gap of the blown-up action.
  static OrderOracle at_fixed_point(const Group& G, Ball& ball,
                                    const LiftedElement& h, bool attracting_end,
                                    Side tiebreak, unsigned max_bits = 4096);

  OrderOracle reversed() const;
  OrderOracle conjugated(const LiftedElement& g) const;

  // Sign of g in the order: +1 iff g is in the positive cone. g != id.
  int sign(const LiftedElement& g) const;
  int abc_sign() const;

  const Group& group() const { return *G_; }
  const LinePoint& basepoint() const { return point_; }
  bool is_reversed() const { return reversed_; }
  const std::vector<Side>& tiebreak_chain() const { return tiebreak_; }
  const std::optional<LiftedElement>& stabilizer_primitive() const { return stab_; }
  unsigned max_bits() const { return max_bits_; }

  std::string describe() const;

private:
  OrderOracle() = default;

  const Group* G_ = nullptr;
  LinePoint point_;
  std::vector<Side> tiebreak_;
  std::optional<LiftedElement> stab_;  // oriented to contract toward the point
  bool reversed_ = false;
  unsigned max_bits_ = 4096;
};

// Seeded rejection sampler: rationals with bounded denominator whose orbit
// under ball(free_cap) certifiably avoids the basepoint (trivial stabilizer
// up to the cap). Candidates with any undecided displacement are rejected.
OrderOracle sample_free_oracle(const Group& G, Ball& ball, std::mt19937_64& rng,
                               int free_cap, unsigned max_bits = 4096);

}  // namespace lo237::ord
