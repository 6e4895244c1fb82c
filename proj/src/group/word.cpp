#include "lo237/group/word.hpp"

namespace lo237::grp {

std::optional<Letter> letter_from_char(char c) {
  switch (c) {
    case 'a': return Letter::a;
    case 'b': return Letter::b;
    case 'c': return Letter::c;
    case 'A': return Letter::A;
    case 'B': return Letter::B;
    case 'C': return Letter::C;
    default: return std::nullopt;
  }
}

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) { reduce(); }

std::optional<Word> Word::parse(const std::string& s) {
  std::vector<Letter> ls;
  ls.reserve(s.size());
  for (char c : s) {
    auto l = letter_from_char(c);
    if (!l.has_value()) return std::nullopt;
    ls.push_back(*l);
  }
  return Word(std::move(ls));
}

void Word::reduce() {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (Letter l : letters_) {
    if (!out.empty() && out.back() == inverse_letter(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  letters_ = std::move(out);
}

Word Word::operator*(const Word& rhs) const {
  std::vector<Letter> ls = letters_;
  ls.insert(ls.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Word(std::move(ls));
}

Word Word::appended(Letter l) const {
  std::vector<Letter> ls = letters_;
  ls.push_back(l);
  return Word(std::move(ls));
}

Word Word::inverted() const {
  std::vector<Letter> ls;
  ls.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    ls.push_back(inverse_letter(*it));
  }
  return Word(std::move(ls));
}

std::string Word::str() const {
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(letter_char(l));
  return s;
}

bool Word::shortlex_less(const Word& x, const Word& y) {
  if (x.length() != y.length()) return x.length() < y.length();
  return x.letters_ < y.letters_;
}

}  // namespace lo237::grp
