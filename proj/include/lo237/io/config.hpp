#pragma once

#include <string>

#include "lo237/approx/search.hpp"

namespace lo237::io {

// Experiment configuration: a small INI-style file (key = value grouped in
// [sections]) merged with command-line overrides. The seed fully determines
// every sampled basepoint and tiebreak.
struct ExperimentConfig {
  // [experiment]
  unsigned long seed = 20260810;
  int ball_radius = 3;   // radius of the finite set F
  int sample_size = 4;   // free basepoint oracles in the scan sample
  int free_cap = 6;      // rejection-sampling cap for basepoint freeness
  int stage = 4;         // realization stage
  // [budget]
  apx::SearchBudget budget;
  // [numerics]
  unsigned max_bits = 4096;
  // [output]
  std::string out_dir = "out";
  bool exact_matrices = false;

  void validate() const;  // throws std::invalid_argument on bad values
  std::string describe_ini() const;
};

// Parses the INI text; unknown keys are an error (they signal typos).
ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base);
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base);

}  // namespace lo237::io
