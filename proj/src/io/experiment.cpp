#include "lo237/io/experiment.hpp"

#include <filesystem>
#include <fstream>

namespace lo237::io {

using grp::ElementClass;
using grp::LiftedElement;
using ord::OrderOracle;
using ord::Side;

Json OracleSpec::to_json() const {
  Json j;
  j["kind"] = kind;
  if (kind == "free") {
    j["basepoint"] = basepoint.get_str();
  } else {
    j["axis_word"] = axis_word.str();
    j["attracting"] = attracting;
    j["side"] = side == Side::left ? "left" : "right";
  }
  j["reversed"] = reversed;
  return j;
}

OracleSpec OracleSpec::from_json(const Json& j) {
  OracleSpec s;
  s.kind = j.at("kind").get<std::string>();
  if (s.kind == "free") {
    num::Rational q(j.at("basepoint").get<std::string>());
    q.canonicalize();
    s.basepoint = q;
  } else if (s.kind == "fixed") {
    auto w = grp::Word::parse(j.at("axis_word").get<std::string>());
    if (!w.has_value()) throw std::invalid_argument("OracleSpec: bad axis word");
    s.axis_word = *w;
    s.attracting = j.at("attracting").get<bool>();
    s.side = j.at("side").get<std::string>() == "left" ? Side::left : Side::right;
  } else {
    throw std::invalid_argument("OracleSpec: unknown kind " + s.kind);
  }
  s.reversed = j.at("reversed").get<bool>();
  return s;
}

ord::OrderOracle oracle_from_spec(const grp::Group& G, grp::Ball& ball,
                                  const OracleSpec& spec, unsigned max_bits) {
  OrderOracle o = spec.kind == "free"
                      ? OrderOracle::at_rational(G, ball, spec.basepoint, max_bits)
                      : OrderOracle::at_fixed_point(G, ball, G.from_word(spec.axis_word),
                                                    spec.attracting, spec.side, max_bits);
  return spec.reversed ? o.reversed() : o;
}

SampleSet build_sample(const grp::Group& G, grp::Ball& ball,
                       const ExperimentConfig& cfg) {
  SampleSet out;
  std::mt19937_64 rng(cfg.seed);

  auto add = [&](OrderOracle o, OracleSpec s) {
    out.oracles.push_back(std::move(o));
    out.specs.push_back(std::move(s));
  };

  for (int i = 0; i < cfg.sample_size; ++i) {
    OrderOracle o = ord::sample_free_oracle(G, ball, rng, cfg.free_cap, cfg.max_bits);
    OracleSpec s;
    s.kind = "free";
    s.basepoint = o.basepoint().rational_value();
    add(std::move(o), std::move(s));
  }

  // The two shortest hyperbolic axes, with each tiebreak side.
  ball.ensure_radius(3);
  std::vector<LiftedElement> axes;
  for (const LiftedElement& g : ball.elements(3)) {
    if (G.classify(g) != ElementClass::hyperbolic) continue;
    bool dup = false;
    for (const LiftedElement& a : axes) {
      grp::Mat2 comm = a.m * g.m * a.m.inverse_det1() * g.m.inverse_det1();
      if (comm.is_identity() || comm.is_minus_identity()) dup = true;  // same axis
    }
    if (!dup) axes.push_back(g);
    if (axes.size() == 2) break;
  }
  for (size_t i = 0; i < axes.size(); ++i) {
    const Side side = i % 2 == 0 ? Side::left : Side::right;
    OracleSpec s;
    s.kind = "fixed";
    s.axis_word = axes[i].word;
    s.attracting = true;
    s.side = side;
    add(OrderOracle::at_fixed_point(G, ball, axes[i], true, side, cfg.max_bits),
        std::move(s));
  }

  // Reversed copies of the first two free oracles: the other component.
  const int reversed_count = std::min(2, cfg.sample_size);
  for (int i = 0; i < reversed_count; ++i) {
    OracleSpec s = out.specs[static_cast<size_t>(i)];
    s.reversed = true;
    add(out.oracles[static_cast<size_t>(i)].reversed(), std::move(s));
  }
  return out;
}

Json report_base(const ExperimentConfig& cfg, const std::string& command) {
  Json j;
  j["tool"] = kVersion;
  j["command"] = command;
  j["timestamp"] = nullptr;
  Json c;
  c["experiment"]["seed"] = cfg.seed;
  c["experiment"]["ball_radius"] = cfg.ball_radius;
  c["experiment"]["sample_size"] = cfg.sample_size;
  c["experiment"]["free_cap"] = cfg.free_cap;
  c["experiment"]["stage"] = cfg.stage;
  c["budget"]["max_word_length"] = cfg.budget.max_word_length;
  c["budget"]["max_candidates"] = cfg.budget.max_candidates;
  c["numerics"]["max_bits"] = cfg.max_bits;
  j["config"] = std::move(c);
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string histogram_csv(const std::map<int, size_t>& hist) {
  std::string s = "word_length,count\n";
  for (const auto& [len, count] : hist) {
    s += std::to_string(len) + "," + std::to_string(count) + "\n";
  }
  return s;
}

std::string histogram_svg(const std::map<int, size_t>& hist) {
  const int bar_w = 28, gap = 6, h = 160, base = 130, left = 30;
  size_t max_count = 1;
  for (const auto& [_, c] : hist) max_count = std::max(max_count, c);
  int max_len = 0;
  for (const auto& [l, _] : hist) max_len = std::max(max_len, l);
  const int width = left + (bar_w + gap) * (max_len + 1) + gap;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                  std::to_string(width) + "\" height=\"" + std::to_string(h) + "\">\n";
  for (const auto& [len, count] : hist) {
    const int bh = static_cast<int>(100.0 * static_cast<double>(count) /
                                    static_cast<double>(max_count));
    const int x = left + (bar_w + gap) * len;
    s += "  <rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(base - bh) +
         "\" width=\"" + std::to_string(bar_w) + "\" height=\"" + std::to_string(bh) +
         "\" fill=\"#4477aa\"/>\n";
    s += "  <text x=\"" + std::to_string(x + bar_w / 2) + "\" y=\"" +
         std::to_string(base + 14) + "\" font-size=\"10\" text-anchor=\"middle\">" +
         std::to_string(len) + "</text>\n";
    s += "  <text x=\"" + std::to_string(x + bar_w / 2) + "\" y=\"" +
         std::to_string(base - bh - 4) + "\" font-size=\"10\" text-anchor=\"middle\">" +
         std::to_string(count) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace lo237::io
