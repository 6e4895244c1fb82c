#include "lo237/io/config.hpp"

#include <fstream>
#include <sstream>

namespace lo237::io {

void ExperimentConfig::validate() const {
  if (ball_radius < 0 || ball_radius > 8) {
    throw std::invalid_argument("ball_radius must lie in [0, 8]");
  }
  if (sample_size < 1 || free_cap < 1 || stage < 0 ||
      budget.max_word_length < 1 || budget.max_candidates < 1 || max_bits < 64) {
    throw std::invalid_argument("configuration values must be positive (max_bits >= 64)");
  }
}

std::string ExperimentConfig::describe_ini() const {
  std::ostringstream os;
  os << "[experiment]\n"
     << "seed = " << seed << "\n"
     << "ball_radius = " << ball_radius << "\n"
     << "sample_size = " << sample_size << "\n"
     << "free_cap = " << free_cap << "\n"
     << "stage = " << stage << "\n\n"
     << "[budget]\n"
     << "max_word_length = " << budget.max_word_length << "\n"
     << "max_candidates = " << budget.max_candidates << "\n\n"
     << "[numerics]\n"
     << "max_bits = " << max_bits << "\n\n"
     << "[output]\n"
     << "dir = " << out_dir << "\n"
     << "exact_matrices = " << (exact_matrices ? "true" : "false") << "\n";
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

long to_long(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  }
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": " + v);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig cfg) {
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not key = value");
    }
    const std::string key = section + "." + trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key == "experiment.seed") {
      cfg.seed = static_cast<unsigned long>(to_long(val, key));
    } else if (key == "experiment.ball_radius") {
      cfg.ball_radius = static_cast<int>(to_long(val, key));
    } else if (key == "experiment.sample_size") {
      cfg.sample_size = static_cast<int>(to_long(val, key));
    } else if (key == "experiment.free_cap") {
      cfg.free_cap = static_cast<int>(to_long(val, key));
    } else if (key == "experiment.stage") {
      cfg.stage = static_cast<int>(to_long(val, key));
    } else if (key == "budget.max_word_length") {
      cfg.budget.max_word_length = static_cast<int>(to_long(val, key));
    } else if (key == "budget.max_candidates") {
      cfg.budget.max_candidates = to_long(val, key);
    } else if (key == "numerics.max_bits") {
      cfg.max_bits = static_cast<unsigned>(to_long(val, key));
    } else if (key == "output.dir") {
      cfg.out_dir = val;
    } else if (key == "output.exact_matrices") {
      cfg.exact_matrices = to_bool(val, key);
    } else {
      throw std::invalid_argument("config: unknown key " + key);
    }
  }
  cfg.budget.max_bits = cfg.max_bits;
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

}  // namespace lo237::io
