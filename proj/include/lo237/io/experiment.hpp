#pragma once

#include "json.hpp"

#include "lo237/io/config.hpp"
#include "lo237/realization/realization.hpp"

namespace lo237::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "lo237 0.1.0";

// Reconstructible description of an oracle: enough to rebuild it bit-for-bit
// from a report (the verify subcommand relies on this).
struct OracleSpec {
  std::string kind;  // "free" or "fixed"
  num::Rational basepoint;  // free
  grp::Word axis_word;      // fixed: the defining hyperbolic element
  bool attracting = true;
  ord::Side side = ord::Side::left;
  bool reversed = false;

  Json to_json() const;
  static OracleSpec from_json(const Json& j);
};

struct SampleSet {
  std::vector<ord::OrderOracle> oracles;
  std::vector<OracleSpec> specs;
};

// Deterministic sample driven by the seed: sample_size free-basepoint
// oracles, fixed-point oracles with each tiebreak side on the two shortest
// hyperbolic axes, and reversed copies of the first two free oracles.
SampleSet build_sample(const grp::Group& G, grp::Ball& ball,
                       const ExperimentConfig& cfg);

ord::OrderOracle oracle_from_spec(const grp::Group& G, grp::Ball& ball,
                                  const OracleSpec& spec, unsigned max_bits);

// Report skeleton: version, config echo, null timestamp (kept null so that
// identical configurations produce identical bytes).
Json report_base(const ExperimentConfig& cfg, const std::string& command);

void write_file(const std::string& path, const std::string& content);

// Word-length histogram as CSV (length,count) and as a minimal SVG bar chart.
std::string histogram_csv(const std::map<int, size_t>& hist);
std::string histogram_svg(const std::map<int, size_t>& hist);

}  // namespace lo237::io
