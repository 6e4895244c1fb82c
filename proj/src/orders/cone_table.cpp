#include "lo237/orders/cone_table.hpp"

#include <algorithm>
#include <sstream>

namespace lo237::ord {

ConeTable::ConeTable(const Group& G, std::vector<std::pair<LiftedElement, int>> entries)
    : entries_(std::move(entries)) {
  (void)G;
  std::sort(entries_.begin(), entries_.end(), [](const auto& x, const auto& y) {
    return Word::shortlex_less(x.first.word, y.first.word);
  });
  for (size_t i = 0; i < entries_.size(); ++i) {
    by_key_.emplace(entries_[i].first.key_string(), i);
  }
}

std::optional<int> ConeTable::sign_of(const LiftedElement& g) const {
  auto it = by_key_.find(g.key_string());
  if (it == by_key_.end()) return std::nullopt;
  return entries_[it->second].second;
}

bool ConeTable::operator==(const ConeTable& rhs) const {
  if (entries_.size() != rhs.entries_.size()) return false;
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].second != rhs.entries_[i].second ||
        !entries_[i].first.same_element(rhs.entries_[i].first)) {
      return false;
    }
  }
  return true;
}

ConeTable::Violations ConeTable::check(const Group& G) const {
  Violations v;
  for (const auto& [g, sg] : entries_) {
    auto si = sign_of(G.inverse(g));
    if (si.has_value() && *si != -sg) ++v.antisymmetry;
  }
  for (const auto& [g, sg] : entries_) {
    if (sg != 1) continue;
    for (const auto& [h, sh] : entries_) {
      if (sh != 1) continue;
      LiftedElement gh = G.compose(g, h);
      auto sp = sign_of(gh);
      if (sp.has_value() && *sp != 1) ++v.semigroup;
    }
  }
  return v;
}

std::string ConeTable::to_json() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [g, s] : entries_) {
    if (!first) os << ", ";
    first = false;
    os << "\"" << g.word.str() << "\": \"" << (s > 0 ? "+" : "-") << "\"";
  }
  os << "}";
  return os.str();
}

std::string ConeTable::to_csv() const {
  std::ostringstream os;
  os << "word,length,sign\n";
  for (const auto& [g, s] : entries_) {
    os << g.word.str() << "," << g.word.length() << "," << (s > 0 ? "+" : "-") << "\n";
  }
  return os.str();
}

ConeTable cone_table(const OrderOracle& o, std::span<const LiftedElement> F) {
  std::vector<std::pair<LiftedElement, int>> entries;
  entries.reserve(F.size());
  for (const LiftedElement& g : F) {
    if (o.group().is_identity(g)) continue;  // the cone excludes the identity
    entries.emplace_back(g, o.sign(g));
  }
  return ConeTable(o.group(), std::move(entries));
}

bool in_neighborhood(const OrderOracle& candidate, const OrderOracle& center,
                     std::span<const LiftedElement> F) {
  for (const LiftedElement& g : F) {
    if (candidate.group().is_identity(g)) continue;
    if (candidate.sign(g) != center.sign(g)) return false;
  }
  return true;
}

std::vector<LiftedElement> punctured_ball(Ball& ball, int radius) {
  ball.ensure_radius(radius);
  auto all = ball.elements(radius);
  std::vector<LiftedElement> out;
  out.reserve(all.size() - 1);
  for (const LiftedElement& g : all) {
    if (!ball.group().is_identity(g)) out.push_back(g);
  }
  return out;
}

}  // namespace lo237::ord
