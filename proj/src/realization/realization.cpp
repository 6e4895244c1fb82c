#include "lo237/realization/realization.hpp"

#include <algorithm>
#include <sstream>

namespace lo237::real {

PLMap::PLMap(std::vector<std::pair<Rational, Rational>> knots) : knots_(std::move(knots)) {
  std::sort(knots_.begin(), knots_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i - 1].first < knots_[i].first) ||
        !(knots_[i - 1].second < knots_[i].second)) {
      throw InconsistentOracle("PLMap: knots are not strictly increasing");
    }
  }
}

Rational PLMap::operator()(const Rational& x) const {
  if (knots_.empty()) return x;
  if (x <= knots_.front().first) {
    return knots_.front().second - (knots_.front().first - x);
  }
  if (x >= knots_.back().first) {
    return knots_.back().second + (x - knots_.back().first);
  }
  auto it = std::upper_bound(
      knots_.begin(), knots_.end(), x,
      [](const Rational& v, const auto& k) { return v < k.first; });
  const auto& [x1, y1] = *(it - 1);
  const auto& [x2, y2] = *it;
  return y1 + (y2 - y1) * (x - x1) / (x2 - x1);
}

std::optional<Rational> PartialRealization::placement_of(const Ball& ball,
                                                         const LiftedElement& g) const {
  for (const auto& [e, x] : placement) {
    if (e.same_element(g)) return x;
  }
  (void)ball;
  return std::nullopt;
}

Rational PartialRealization::apply_word(const Word& w, const Rational& x) const {
  Rational y = x;
  // The word acts as a composition: the last letter acts first.
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
    y = extension[static_cast<uint8_t>(*it)](y);
  }
  return y;
}

std::string PartialRealization::to_csv() const {
  std::ostringstream os;
  os << "word,placement\n";
  for (const auto& [g, x] : placement) {
    os << g.word.str() << "," << x.get_str() << "\n";
  }
  return os.str();
}

PartialRealization build_realization(const Group& G, Ball& ball,
                                     const SignFunction& sign, int stage) {
  ball.ensure_radius(stage);
  auto elems = ball.elements(stage);

  // less(g, h) <=> g < h in the left order <=> sign(g^-1 h) = +.
  auto less = [&](const LiftedElement& g, const LiftedElement& h) {
    const LiftedElement q = G.compose(G.inverse(g), h);
    const int s = sign(q);
    if (s != 1 && s != -1) {
      throw InconsistentOracle("build_realization: sign function not total");
    }
    return s == 1;
  };

  // Insert elements in canonical order; for each new element the comparison
  // pattern against the already-sorted list must be +...+ -...- or the data
  // is not an order.
  std::vector<size_t> sorted;  // indices into elems, in increasing order
  std::vector<Rational> pos(elems.size());
  std::vector<Rational> sorted_pos;
  for (size_t i = 0; i < elems.size(); ++i) {
    size_t first_greater = sorted.size();
    bool seen_greater = false;
    for (size_t j = 0; j < sorted.size(); ++j) {
      const bool below = less(elems[sorted[j]], elems[i]);
      if (below && seen_greater) {
        throw InconsistentOracle(
            "build_realization: comparisons are not transitive at " +
            elems[i].word.str());
      }
      if (!below && !seen_greater) {
        seen_greater = true;
        first_greater = j;
      }
    }
    Rational x;
    if (sorted.empty()) {
      x = 0;
    } else if (first_greater == 0) {
      x = sorted_pos.front() - 1;
    } else if (first_greater == sorted.size()) {
      x = sorted_pos.back() + 1;
    } else {
      x = (sorted_pos[first_greater - 1] + sorted_pos[first_greater]) / 2;
    }
    pos[i] = x;
    sorted.insert(sorted.begin() + static_cast<long>(first_greater), i);
    sorted_pos.insert(sorted_pos.begin() + static_cast<long>(first_greater), x);
  }

  PartialRealization R;
  R.stage = stage;
  R.placement.reserve(elems.size());
  for (size_t i = 0; i < elems.size(); ++i) {
    R.placement.emplace_back(elems[i], pos[i]);
  }

  // Generator extensions interpolate placement(g) -> placement(s g) over
  // the previous ball; left-invariance of the order makes them increasing.
  if (stage == 0) return R;
  auto inner_elems = ball.elements(stage - 1);
  for (uint8_t li = 0; li < 6; ++li) {
    std::vector<std::pair<Rational, Rational>> knots;
    knots.reserve(inner_elems.size());
    for (const LiftedElement& g : inner_elems) {
      const LiftedElement sg = G.compose(G.gen(static_cast<Letter>(li)), g);
      auto tgt = ball.find(sg);
      if (!tgt.has_value() || *tgt >= elems.size()) {
        throw std::logic_error("build_realization: s*g escaped the ball");
      }
      auto src = ball.find(g);
      knots.emplace_back(pos[*src], pos[*tgt]);
    }
    R.extension[li] = PLMap(std::move(knots));
  }
  return R;
}

}  // namespace lo237::real
