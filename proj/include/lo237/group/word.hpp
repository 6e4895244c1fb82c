#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lo237::grp {

// Generator alphabet: lower case for a, b, c and upper case for inverses.
enum class Letter : uint8_t { a = 0, b = 1, c = 2, A = 3, B = 4, C = 5 };

constexpr Letter inverse_letter(Letter l) {
  return static_cast<Letter>((static_cast<uint8_t>(l) + 3) % 6);
}
constexpr char letter_char(Letter l) { return "abcABC"[static_cast<uint8_t>(l)]; }
std::optional<Letter> letter_from_char(char c);

// Freely reduced word over the generator alphabet.
class Word {
public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);
  static std::optional<Word> parse(const std::string& s);

  const std::vector<Letter>& letters() const { return letters_; }
  size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word operator*(const Word& rhs) const;  // concatenate and reduce
  Word appended(Letter l) const;
  Word inverted() const;

  std::string str() const;

  bool operator==(const Word&) const = default;

  // (length, lexicographic) order with a < b < c < A < B < C.
  static bool shortlex_less(const Word& x, const Word& y);

private:
  void reduce();
  std::vector<Letter> letters_;
};

}  // namespace lo237::grp
