#include "lo237/group/ball.hpp"

namespace lo237::grp {

Ball::Ball(const Group& G) : G_(&G) {
  elems_.push_back(G.identity());
  index_.emplace(G.identity().key_string(), 0);
  sphere_begin_ = {0, 1};
  radius_ = 0;
}

void Ball::ensure_radius(int n) {
  while (radius_ < n) {
    const size_t lo = sphere_begin_[radius_];
    const size_t hi = sphere_begin_[radius_ + 1];
    for (size_t i = lo; i < hi; ++i) {
      for (uint8_t li = 0; li < 6; ++li) {
        const Letter l = static_cast<Letter>(li);
        const LiftedElement parent = elems_[i];  // copy: elems_ may reallocate
        if (!parent.word.empty() && parent.word.letters().back() == inverse_letter(l)) {
          continue;  // free reduction would shorten the word
        }
        LiftedElement cand = G_->compose(parent, G_->gen(l));
        std::string key = cand.key_string();
        if (index_.contains(key)) continue;
        index_.emplace(std::move(key), elems_.size());
        elems_.push_back(std::move(cand));
      }
    }
    ++radius_;
    sphere_begin_.push_back(elems_.size());
  }
}

std::span<const LiftedElement> Ball::elements(int n) const {
  if (n > radius_) throw std::out_of_range("Ball::elements: radius not ensured");
  return {elems_.data(), sphere_begin_[n + 1]};
}

std::span<const LiftedElement> Ball::sphere(int n) const {
  if (n > radius_) throw std::out_of_range("Ball::sphere: radius not ensured");
  return {elems_.data() + sphere_begin_[n], sphere_begin_[n + 1] - sphere_begin_[n]};
}

size_t Ball::size(int n) const {
  if (n > radius_) throw std::out_of_range("Ball::size: radius not ensured");
  return sphere_begin_[n + 1];
}

std::optional<size_t> Ball::find(const LiftedElement& g) const {
  auto it = index_.find(g.key_string());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Word> Ball::canonical_word(const LiftedElement& g) const {
  auto idx = find(g);
  if (!idx.has_value()) return std::nullopt;
  return elems_[*idx].word;
}

}  // namespace lo237::grp
