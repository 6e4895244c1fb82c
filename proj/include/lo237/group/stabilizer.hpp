#pragma once

#include <optional>

#include "lo237/group/ball.hpp"

namespace lo237::grp {

// Result of a depth-limited stabilizer search at a point of the line. A
// negative result is always reported as "trivial up to the searched depth";
// for numeric-only points it additionally records the certification budget,
// never claiming more than was checked.
struct StabilizerReport {
  int depth = 0;
  bool cyclic = false;
  std::optional<LiftedElement> generator;  // oriented to contract toward the point
  bool primitive_verified = false;  // every found stabilizing element is a power
  long generator_power_in_search = 0;  // exponent of generator for the largest found power
  unsigned certified_bits = 0;  // numeric separation budget (numeric points)
  size_t undecided = 0;         // candidates with unresolved displacement sign
};

// Searches ball(depth) for nontrivial elements fixing the point, extracts a
// primitive generator of the found cyclic group and orients it so that it
// contracts toward the point (left germ moves up, right germ moves down).
StabilizerReport point_stabilizer(const Group& G, Ball& ball, const LinePoint& p,
                                  int depth, unsigned max_bits = 4096);

// True iff g lies in the cyclic group generated by k (both in the ambient
// group), decided exactly; the exponent range to examine is bounded by trace
// growth, and the largest exponent examined is reported through tested_bound.
bool in_cyclic_group(const Group& G, const LiftedElement& g, const LiftedElement& k,
                     long* exponent = nullptr, long* tested_bound = nullptr);

}  // namespace lo237::grp
