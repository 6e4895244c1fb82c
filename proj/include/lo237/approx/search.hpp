#pragma once

#include "lo237/orders/cone_table.hpp"

namespace lo237::apx {

using grp::Ball;
using grp::Group;
using grp::LiftedElement;
using grp::LinePoint;
using grp::Word;
using num::Rational;
using ord::OrderOracle;
using ord::Side;

// Raised when the two orders disagree on the sign of the central element:
// the theorem's hypothesis fails and no conjugator can exist for any F
// containing abc.
class HypothesisViolated : public std::runtime_error {
public:
  explicit HypothesisViolated(const std::string& what) : std::runtime_error(what) {}
};

struct SearchBudget {
  int max_word_length = 12;
  long max_candidates = 1000000;
  unsigned max_bits = 4096;
};

struct SignCertificate {
  Word f;
  int sign_center = 0;
  int sign_conjugated = 0;
};

struct ConjugatorReport {
  bool found = false;
  std::optional<LiftedElement> conjugator;
  int word_length = 0;
  std::string strategy;  // "bfs" or "guided"
  std::string case_taken;
  long candidates_tested = 0;
  bool reverified = false;  // independent re-verification passed
  std::vector<SignCertificate> certificates;
  std::optional<Rational> window_radius;
  long stabilizer_power_bound = 0;  // largest exponent examined in gK'g^-1 vs F
  std::string note;
};

// Sign-agreement window around the basepoint of the order: on (p-r, p+r)
// every f in F has the same sign behavior as at p, except for the listed
// exact ties (elements fixing p), whose one-sided behaviors are recorded.
struct UniformWindow {
  std::optional<Rational> radius;  // nullopt: the whole line qualifies
  struct TieSign {
    LiftedElement f;
    long power = 0;  // exponent in the stabilizer generator
    int left_sign = 0;
    int right_sign = 0;
  };
  std::vector<TieSign> ties;
};

// Computes the window by the halving loop: start at radius 1 and halve until
// every fixed point of every f in F (other than p itself) is certified to
// lie outside. Elements with nonzero translation number have no fixed points
// and impose no constraint.
UniformWindow uniform_sign_interval(const OrderOracle& o,
                                    std::span<const LiftedElement> F, Ball& ball,
                                    const SearchBudget& budget);

// Mover target: an open window around the center's basepoint, optionally
// restricted to one strict side. Positions are tested modulo the central
// translations: candidates are corrected by a power of abc, which acts
// trivially on the space of orders.
struct MoverTarget {
  LinePoint center;
  std::optional<Rational> radius;  // nullopt: unconstrained
  std::optional<Side> side;        // strict side of the center
};

std::optional<LiftedElement> find_point_mover(const Group& G, Ball& ball,
                                              const LinePoint& moving_point,
                                              const MoverTarget& target,
                                              const SearchBudget& budget,
                                              long* candidates_out = nullptr);

ConjugatorReport find_conjugator_bfs(const OrderOracle& center,
                                     const OrderOracle& moving,
                                     std::span<const LiftedElement> F, Ball& ball,
                                     const SearchBudget& budget);

ConjugatorReport find_conjugator_guided(const OrderOracle& center,
                                        const OrderOracle& moving,
                                        std::span<const LiftedElement> F, Ball& ball,
                                        const SearchBudget& budget);

// Every ordered pair of the sample: guided search (with BFS fallback) for
// same-abc-sign pairs, the exact central obstruction for the rest.
struct PairOutcome {
  size_t from = 0, to = 0;
  bool same_abc_sign = false;
  bool found = false;
  std::string witness;  // canonical word of the verified conjugator
  int word_length = 0;
  std::string strategy;
  bool reverified = false;
  std::string note;
};

struct ScanResult {
  std::vector<PairOutcome> pairs;
  size_t same_sign_pairs = 0;
  size_t successes = 0;
  std::map<int, size_t> length_histogram;
};

ScanResult component_scan(std::span<const OrderOracle> sample,
                          std::span<const LiftedElement> F, Ball& ball,
                          const SearchBudget& budget);

}  // namespace lo237::apx
