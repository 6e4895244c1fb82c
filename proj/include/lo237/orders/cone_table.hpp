#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "lo237/orders/oracle.hpp"

namespace lo237::ord {

// Restriction of a positive cone to a finite set of non-identity elements,
// keyed by canonical word.
class ConeTable {
public:
  ConeTable() = default;
  ConeTable(const Group& G, std::vector<std::pair<LiftedElement, int>> entries);

  size_t size() const { return entries_.size(); }
  const std::vector<std::pair<LiftedElement, int>>& entries() const { return entries_; }
  std::optional<int> sign_of(const LiftedElement& g) const;

  bool operator==(const ConeTable& rhs) const;

  struct Violations {
    size_t antisymmetry = 0;
    size_t semigroup = 0;
    bool ok() const { return antisymmetry == 0 && semigroup == 0; }
  };
  // Cone axioms on the stored domain: sign(g^-1) = -sign(g) where both are
  // present, and sign(g) = sign(h) = + with gh in the domain forces
  // sign(gh) = +.
  Violations check(const Group& G) const;

  // JSON object {word: "+"/"-"} and CSV (word, length, sign).
  std::string to_json() const;
  std::string to_csv() const;

private:
  std::vector<std::pair<LiftedElement, int>> entries_;  // shortlex by word
  std::map<std::string, size_t> by_key_;
};

// Table of the oracle over F; identity elements in F are silently skipped.
ConeTable cone_table(const OrderOracle& o, std::span<const LiftedElement> F);

// The neighborhood test V_{<,F}: equality of the two cone restrictions.
bool in_neighborhood(const OrderOracle& candidate, const OrderOracle& center,
                     std::span<const LiftedElement> F);

// F = ball(radius) minus the identity, in canonical order.
std::vector<LiftedElement> punctured_ball(Ball& ball, int radius);

}  // namespace lo237::ord
