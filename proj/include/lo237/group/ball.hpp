#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lo237/group/group.hpp"

namespace lo237::grp {

// Breadth-first enumeration of the group by word length, one representative
// per element, deduplicated by the exact (matrix, offset) key. Elements are
// stored in (length, lex) order, so the stored word of each element is its
// canonical spelling.
class Ball {
public:
  explicit Ball(const Group& G);

  void ensure_radius(int n);
  int radius() const { return radius_; }

  // Elements of word length <= n (requires ensure_radius(n)).
  std::span<const LiftedElement> elements(int n) const;
  // Elements of word length exactly n.
  std::span<const LiftedElement> sphere(int n) const;
  size_t size(int n) const;

  const Group& group() const { return *G_; }

  // Exact lookup; the element need not carry its canonical word.
  std::optional<size_t> find(const LiftedElement& g) const;
  const LiftedElement& at(size_t i) const { return elems_[i]; }

  // Canonical spelling if the element lies within the enumerated radius.
  std::optional<Word> canonical_word(const LiftedElement& g) const;

private:
  const Group* G_;
  std::vector<LiftedElement> elems_;
  std::vector<size_t> sphere_begin_;  // sphere_begin_[n] = first index of length n
  std::unordered_map<std::string, size_t> index_;
  int radius_ = -1;
};

}  // namespace lo237::grp
