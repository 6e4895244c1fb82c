// Command-line harness: reproducible experiments with the left-order space
// of <a,b,c | a^2 = b^3 = c^7 = abc> through its action on the line.

#include <iostream>

#include "CLI11.hpp"
#include "lo237/io/experiment.hpp"
#include "lo237/realization/blowup.hpp"

using namespace lo237;
using io::ExperimentConfig;
using io::Json;

namespace {

grp::Group& the_group() {
  static grp::Group G;
  return G;
}

grp::Ball& the_ball() {
  static grp::Ball ball(the_group());
  return ball;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  return cfg.out_dir + "/" + name;
}

// ---------------------------------------------------------------------------
// gen-check
// ---------------------------------------------------------------------------

int cmd_gen_check(const ExperimentConfig& cfg, bool perturb) {
  grp::Group& G = the_group();  // construction already verified the relations
  grp::Ball& ball = the_ball();
  Json rep = io::report_base(cfg, "gen-check");

  bool ok = true;
  Json checks = Json::array();
  auto record = [&](const std::string& name, bool pass) {
    checks.push_back(Json{{"check", name}, {"pass", pass}});
    ok = ok && pass;
  };

  grp::LiftedElement A = G.gen(grp::Letter::a);
  if (perturb) {
    // Test fixture: damage one matrix entry and rerun the verification.
    grp::Mat2 m = A.m;
    m.e[0] = m.e[0] + num::FieldElem::from_rational(G.field(), num::Rational(1, 1000));
    A = grp::LiftedElement{m, A.offset, A.word};
  }
  const grp::LiftedElement abc =
      G.compose(G.compose(A, G.gen(grp::Letter::b)), G.gen(grp::Letter::c));
  record("a^2 = abc", G.compose(A, A).same_element(abc));
  record("b^3 = abc", G.power(G.gen(grp::Letter::b), 3).same_element(abc));
  record("c^7 = abc", G.power(G.gen(grp::Letter::c), 7).same_element(abc));
  record("abc acts as x -> x + 1",
         abc.m.is_minus_identity() && abc.offset == 0);

  ball.ensure_radius(3);
  bool central = true;
  for (const auto& g : ball.elements(3)) {
    if (!G.compose(g, G.central()).same_element(G.compose(G.central(), g))) {
      central = false;
    }
  }
  record("abc central on ball(3)", central);

  Json taus;
  taus["a"] = G.translation_number(G.gen(grp::Letter::a)).get_str();
  taus["b"] = G.translation_number(G.gen(grp::Letter::b)).get_str();
  taus["c"] = G.translation_number(G.gen(grp::Letter::c)).get_str();
  taus["abc"] = G.translation_number(G.central()).get_str();
  record("tau(a) = 1/2", taus["a"] == "1/2");
  record("tau(b) = 1/3", taus["b"] == "1/3");
  record("tau(c) = 1/7", taus["c"] == "1/7");
  record("tau(abc) = 1", taus["abc"] == "1");

  rep["translation_numbers"] = taus;
  rep["checks"] = checks;
  rep["tower"] = G.tower_description();
  rep["all_passed"] = ok;
  if (cfg.exact_matrices) {
    Json mats;
    for (auto l : {grp::Letter::a, grp::Letter::b, grp::Letter::c}) {
      Json m = Json::array();
      for (int i = 0; i < 4; ++i) {
        m.push_back(G.gen(l).m.e[i].to_string());
      }
      mats[std::string(1, grp::letter_char(l))] = m;
    }
    rep["exact_matrices"] = mats;
  }
  io::write_file(out_path(cfg, "gen_check.json"), rep.dump(2) + "\n");
  std::cout << (ok ? "gen-check: all relations verified exactly"
                   : "gen-check: FAILURE (see gen_check.json)")
            << std::endl;
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

int cmd_table(const ExperimentConfig& cfg, const std::string& basepoint,
              const std::string& fixed_axis, const std::string& side_str) {
  grp::Group& G = the_group();
  grp::Ball& ball = the_ball();

  ord::OrderOracle o = [&]() {
    if (!fixed_axis.empty()) {
      auto w = grp::Word::parse(fixed_axis);
      if (!w.has_value()) throw std::invalid_argument("bad --fixed-axis word");
      const ord::Side side = side_str == "right" ? ord::Side::right : ord::Side::left;
      return ord::OrderOracle::at_fixed_point(G, ball, G.from_word(*w), true, side,
                                              cfg.max_bits);
    }
    if (!basepoint.empty()) {
      num::Rational q(basepoint);
      q.canonicalize();
      return ord::OrderOracle::at_rational(G, ball, q, cfg.max_bits);
    }
    std::mt19937_64 rng(cfg.seed);
    return ord::sample_free_oracle(G, ball, rng, cfg.free_cap, cfg.max_bits);
  }();

  auto F = ord::punctured_ball(ball, cfg.ball_radius);
  ord::ConeTable table = ord::cone_table(o, F);
  auto violations = table.check(G);

  Json rep = io::report_base(cfg, "table");
  rep["oracle"] = o.describe();
  rep["radius"] = cfg.ball_radius;
  rep["size"] = table.size();
  rep["signs"] = Json::parse(table.to_json());
  rep["cone_axioms"] = {{"antisymmetry_violations", violations.antisymmetry},
                        {"semigroup_violations", violations.semigroup}};
  io::write_file(out_path(cfg, "table.json"), rep.dump(2) + "\n");
  io::write_file(out_path(cfg, "table.csv"), table.to_csv());
  std::cout << "table: " << table.size() << " signs, axiom violations "
            << violations.antisymmetry + violations.semigroup << std::endl;
  return violations.ok() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// approximate
// ---------------------------------------------------------------------------

Json conjugator_report_json(const grp::Group& G, const apx::ConjugatorReport& rep) {
  Json j;
  j["found"] = rep.found;
  j["strategy"] = rep.strategy;
  j["case"] = rep.case_taken;
  j["candidates_tested"] = rep.candidates_tested;
  j["reverified"] = rep.reverified;
  if (rep.window_radius.has_value()) j["window_radius"] = rep.window_radius->get_str();
  if (rep.stabilizer_power_bound > 0) {
    j["stabilizer_power_bound"] = rep.stabilizer_power_bound;
  }
  if (!rep.note.empty()) j["note"] = rep.note;
  if (rep.found) {
    j["conjugator"] = rep.conjugator->word.str();
    j["word_length"] = rep.word_length;
    Json certs = Json::array();
    for (const auto& c : rep.certificates) {
      certs.push_back(Json{{"f", c.f.str()},
                           {"sign_center", c.sign_center > 0 ? "+" : "-"},
                           {"sign_conjugated", c.sign_conjugated > 0 ? "+" : "-"}});
    }
    j["certificates"] = certs;
  }
  (void)G;
  return j;
}

int cmd_approximate(const ExperimentConfig& cfg, const std::string& planted) {
  grp::Group& G = the_group();
  grp::Ball& ball = the_ball();
  io::SampleSet sample = io::build_sample(G, ball, cfg);

  ord::OrderOracle center = sample.oracles[0];
  io::OracleSpec center_spec = sample.specs[0];
  ord::OrderOracle moving = sample.oracles[1];
  io::OracleSpec moving_spec = sample.specs[1];
  std::optional<grp::Word> planted_word;
  if (!planted.empty()) {
    planted_word = grp::Word::parse(planted);
    if (!planted_word.has_value()) throw std::invalid_argument("bad --planted word");
    moving = center.conjugated(G.from_word(*planted_word));
    moving_spec = center_spec;  // same underlying oracle, conjugated
  }

  auto F = ord::punctured_ball(ball, cfg.ball_radius);
  apx::ConjugatorReport rep =
      apx::find_conjugator_guided(center, moving, F, ball, cfg.budget);
  if (!rep.found) {
    apx::ConjugatorReport fb = apx::find_conjugator_bfs(center, moving, F, ball, cfg.budget);
    if (fb.found) rep = std::move(fb);
  }

  Json j = io::report_base(cfg, "approximate");
  j["center"] = center_spec.to_json();
  j["moving"] = moving_spec.to_json();
  if (planted_word.has_value()) j["planted"] = planted_word->str();
  j["radius"] = cfg.ball_radius;
  j["report"] = conjugator_report_json(G, rep);
  io::write_file(out_path(cfg, "approximate.json"), j.dump(2) + "\n");
  std::cout << "approximate: " << (rep.found ? "found " + rep.conjugator->word.str()
                                             : "not found (" + rep.note + ")")
            << std::endl;
  return 0;  // budget exhaustion is reported data, not failure
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

int cmd_scan(const ExperimentConfig& cfg) {
  grp::Group& G = the_group();
  grp::Ball& ball = the_ball();
  io::SampleSet sample = io::build_sample(G, ball, cfg);
  auto F = ord::punctured_ball(ball, cfg.ball_radius);
  apx::ScanResult res = apx::component_scan(sample.oracles, F, ball, cfg.budget);

  Json j = io::report_base(cfg, "scan");
  Json oracles = Json::array();
  for (size_t i = 0; i < sample.specs.size(); ++i) {
    Json o = sample.specs[i].to_json();
    o["abc_sign"] = sample.oracles[i].abc_sign() > 0 ? "+" : "-";
    oracles.push_back(std::move(o));
  }
  j["oracles"] = oracles;
  j["radius"] = cfg.ball_radius;
  Json pairs = Json::array();
  for (const auto& p : res.pairs) {
    Json e;
    e["from"] = p.from;
    e["to"] = p.to;
    e["same_abc_sign"] = p.same_abc_sign;
    e["found"] = p.found;
    if (p.found) {
      e["witness"] = p.witness;
      e["word_length"] = p.word_length;
      e["strategy"] = p.strategy;
      e["reverified"] = p.reverified;
    }
    if (!p.note.empty()) e["note"] = p.note;
    pairs.push_back(std::move(e));
  }
  j["pairs"] = pairs;
  j["same_sign_pairs"] = res.same_sign_pairs;
  j["successes"] = res.successes;
  io::write_file(out_path(cfg, "scan.json"), j.dump(2) + "\n");

  // Reachability matrix: rows = moving oracle, cols = target; 1 = conjugator
  // found, 0 = obstructed/unreached, diagonal = 1.
  const size_t n = sample.oracles.size();
  std::vector<std::vector<int>> mat(n, std::vector<int>(n, 0));
  for (size_t i = 0; i < n; ++i) mat[i][i] = 1;
  for (const auto& p : res.pairs) {
    if (p.found) mat[p.from][p.to] = 1;
  }
  std::string csv = "from\\to";
  for (size_t i = 0; i < n; ++i) csv += "," + std::to_string(i);
  csv += "\n";
  for (size_t i = 0; i < n; ++i) {
    csv += std::to_string(i);
    for (size_t k = 0; k < n; ++k) csv += "," + std::to_string(mat[i][k]);
    csv += "\n";
  }
  io::write_file(out_path(cfg, "matrix.csv"), csv);
  io::write_file(out_path(cfg, "histogram.csv"), io::histogram_csv(res.length_histogram));
  io::write_file(out_path(cfg, "histogram.svg"), io::histogram_svg(res.length_histogram));

  std::cout << "scan: " << res.successes << "/" << res.same_sign_pairs
            << " same-sign pairs conjugated; " << res.pairs.size() - res.same_sign_pairs
            << " pairs blocked by the central sign" << std::endl;
  return 0;
}

// ---------------------------------------------------------------------------
// blowup
// ---------------------------------------------------------------------------

int cmd_blowup(const ExperimentConfig& cfg) {
  grp::Group& G = the_group();
  grp::Ball& ball = the_ball();
  std::mt19937_64 rng(cfg.seed);
  ord::OrderOracle o = ord::sample_free_oracle(G, ball, rng, cfg.free_cap, cfg.max_bits);

  const int radius = std::min(cfg.ball_radius, 3);
  real::BlowupMap B(G, ball, o.basepoint(), std::nullopt, radius);

  std::vector<real::BlownPoint> samples;
  samples.push_back(real::BlownPoint::gap(0, num::Rational(1, 2)));
  samples.push_back(real::BlownPoint::gap(1, num::Rational(1, 3)));
  std::mt19937_64 rng2(cfg.seed + 1);
  for (int i = 0; i < 6; ++i) {
    long num_r = static_cast<long>(rng2() % 257) - 128;
    samples.push_back(real::BlownPoint::graph(
        grp::LinePoint::rational(num::canonical(num::Rational(num_r, 64)))));
  }
  std::vector<grp::LiftedElement> elems(ball.elements(2).begin(), ball.elements(2).end());
  num::Interval defect = real::blowup_defect(G, B, samples, elems, 256);

  // Orbit order agreement between the blown-up and base actions.
  size_t order_checks = 0, order_agree = 0;
  real::BlownPoint q = real::BlownPoint::gap(*B.orbit_index_of(G.identity()),
                                             num::Rational(1, 2));
  for (const auto& g : ball.elements(2)) {
    for (const auto& h : ball.elements(2)) {
      if (g.same_element(h)) continue;
      ++order_checks;
      const int blown = B.compare(B.transport(g, q), B.transport(h, q));
      auto base = G.compare_points(G.apply(g, o.basepoint()),
                                   G.apply(h, o.basepoint()), cfg.max_bits);
      if (base.has_value() && blown == *base) ++order_agree;
    }
  }

  Json j = io::report_base(cfg, "blowup");
  j["oracle"] = o.describe();
  j["orbit_radius"] = radius;
  j["orbit_size"] = B.orbit_size();
  j["total_inserted_length"] = B.total_inserted_length().get_str();
  j["tail_bound"] = B.tail_bound().get_str();
  j["max_defect_upper_bound"] = defect.hi_double();
  j["defect_below_2^-100"] = defect.width_below_pow2(-100) && defect.contains_zero();
  j["order_checks"] = order_checks;
  j["order_agreements"] = order_agree;
  j["gaps"] = Json::parse(B.to_json());
  io::write_file(out_path(cfg, "blowup.json"), j.dump(2) + "\n");
  const bool ok = order_checks == order_agree && defect.contains_zero();
  std::cout << "blowup: defect upper bound " << defect.hi_double() << ", order "
            << order_agree << "/" << order_checks << std::endl;
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// realize
// ---------------------------------------------------------------------------

int cmd_realize(const ExperimentConfig& cfg) {
  grp::Group& G = the_group();
  grp::Ball& ball = the_ball();
  std::mt19937_64 rng(cfg.seed);
  ord::OrderOracle o = ord::sample_free_oracle(G, ball, rng, cfg.free_cap, cfg.max_bits);
  real::PartialRealization R = real::build_realization(o, ball, cfg.stage);

  size_t mismatches = 0;
  for (const auto& g : ball.elements(cfg.stage > 0 ? cfg.stage - 1 : 0)) {
    if (G.is_identity(g)) continue;
    auto x = R.placement_of(ball, g);
    if (!x.has_value() || ((*x > 0 ? 1 : -1) != o.sign(g))) ++mismatches;
  }

  Json j = io::report_base(cfg, "realize");
  j["oracle"] = o.describe();
  j["stage"] = cfg.stage;
  j["placements"] = R.placement.size();
  j["cone_table_mismatches"] = mismatches;
  io::write_file(out_path(cfg, "realize.json"), j.dump(2) + "\n");
  io::write_file(out_path(cfg, "realization.csv"), R.to_csv());
  std::cout << "realize: " << R.placement.size() << " placements, " << mismatches
            << " mismatches" << std::endl;
  return mismatches == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const std::string& report_path) {
  grp::Group& G = the_group();
  grp::Ball& ball = the_ball();
  std::ifstream in(report_path);
  if (!in) throw std::invalid_argument("cannot open report " + report_path);
  Json j = Json::parse(in);

  ExperimentConfig cfg;
  const Json& c = j.at("config");
  cfg.seed = c.at("experiment").at("seed").get<unsigned long>();
  cfg.ball_radius = c.at("experiment").at("ball_radius").get<int>();
  cfg.sample_size = c.at("experiment").at("sample_size").get<int>();
  cfg.free_cap = c.at("experiment").at("free_cap").get<int>();
  cfg.max_bits = c.at("numerics").at("max_bits").get<unsigned>();

  auto F = ord::punctured_ball(ball, cfg.ball_radius);
  size_t checked = 0, failed = 0;
  const std::string command = j.at("command").get<std::string>();

  auto check_witness = [&](const io::OracleSpec& cs, const io::OracleSpec& ms,
                           const std::string& word,
                           const std::optional<grp::Word>& planted) {
    ord::OrderOracle center = io::oracle_from_spec(G, ball, cs, cfg.max_bits);
    ord::OrderOracle moving = io::oracle_from_spec(G, ball, ms, cfg.max_bits);
    if (planted.has_value()) moving = center.conjugated(G.from_word(*planted));
    auto w = grp::Word::parse(word);
    ++checked;
    if (!w.has_value() ||
        !ord::in_neighborhood(moving.conjugated(G.from_word(*w)), center, F)) {
      ++failed;
    }
  };

  if (command == "approximate") {
    const Json& rep = j.at("report");
    if (rep.at("found").get<bool>()) {
      std::optional<grp::Word> planted;
      if (j.contains("planted")) {
        planted = grp::Word::parse(j.at("planted").get<std::string>());
      }
      check_witness(io::OracleSpec::from_json(j.at("center")),
                    io::OracleSpec::from_json(j.at("moving")),
                    rep.at("conjugator").get<std::string>(), planted);
    }
  } else if (command == "scan") {
    // Rebuild the sample deterministically and re-check every recorded
    // witness word against its pair of oracles.
    io::SampleSet sample = io::build_sample(G, ball, cfg);
    for (const Json& p : j.at("pairs")) {
      if (!p.at("found").get<bool>()) continue;
      ++checked;
      auto w = grp::Word::parse(p.at("witness").get<std::string>());
      const size_t from = p.at("from").get<size_t>();
      const size_t to = p.at("to").get<size_t>();
      if (!w.has_value() || from >= sample.oracles.size() || to >= sample.oracles.size()) {
        ++failed;
        continue;
      }
      ord::OrderOracle conj = sample.oracles[from].conjugated(G.from_word(*w));
      if (!ord::in_neighborhood(conj, sample.oracles[to], F)) ++failed;
    }
  } else {
    throw std::invalid_argument("verify: unsupported report kind " + command);
  }

  std::cout << "verify: " << checked - failed << "/" << checked << " witnesses verified"
            << std::endl;
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"left-order computations for the (2,3,7) central extension"};
  app.require_subcommand(1);
  app.fallthrough();  // parent options may follow the subcommand

  std::string config_path, out_dir, basepoint, fixed_axis, side = "left";
  std::string planted, report_path;
  std::optional<long> seed, radius, budget_length, sample_size, stage;
  bool exact_matrices = false, perturb = false;

  app.add_option("--config", config_path, "configuration file (INI, see README)");
  app.add_option("--seed", seed, "random seed override");
  app.add_option("--radius", radius, "ball radius for the finite set F");
  app.add_option("--budget-length", budget_length, "max conjugator word length");
  app.add_option("--sample-size", sample_size, "free oracles in the sample");
  app.add_option("--stage", stage, "realization stage");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--exact-matrices", exact_matrices,
               "include exact tower coordinates of the generator matrices");

  auto* gen = app.add_subcommand("gen-check", "verify the defining relations exactly");
  gen->add_flag("--selftest-perturb", perturb,
                "damage a matrix entry first (failure-path fixture)");
  auto* table = app.add_subcommand("table", "write a positive-cone table");
  table->add_option("--basepoint", basepoint, "rational basepoint p/q");
  table->add_option("--fixed-axis", fixed_axis,
                    "word of a hyperbolic element; basepoint at its fixed point");
  table->add_option("--side", side, "tiebreak side (left|right)");
  auto* approx = app.add_subcommand("approximate", "search for a conjugator");
  approx->add_option("--planted", planted, "conjugate the center by this word first");
  app.add_subcommand("scan", "all-pairs conjugator scan over the sample");
  app.add_subcommand("blowup", "blow-up construction demo with certified checks");
  app.add_subcommand("realize", "finite-stage dynamical realization export");
  auto* verify = app.add_subcommand("verify", "re-verify witnesses in a report");
  verify->add_option("report", report_path, "path to a JSON report")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = io::load_config_file(config_path, cfg);
    if (seed.has_value()) cfg.seed = static_cast<unsigned long>(*seed);
    if (radius.has_value()) cfg.ball_radius = static_cast<int>(*radius);
    if (budget_length.has_value()) {
      cfg.budget.max_word_length = static_cast<int>(*budget_length);
    }
    if (sample_size.has_value()) cfg.sample_size = static_cast<int>(*sample_size);
    if (stage.has_value()) cfg.stage = static_cast<int>(*stage);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.exact_matrices = exact_matrices;
    cfg.budget.max_bits = cfg.max_bits;
    cfg.validate();

    if (app.got_subcommand("gen-check")) return cmd_gen_check(cfg, perturb);
    if (app.got_subcommand("table")) return cmd_table(cfg, basepoint, fixed_axis, side);
    if (app.got_subcommand("approximate")) return cmd_approximate(cfg, planted);
    if (app.got_subcommand("scan")) return cmd_scan(cfg);
    if (app.got_subcommand("blowup")) return cmd_blowup(cfg);
    if (app.got_subcommand("realize")) return cmd_realize(cfg);
    if (app.got_subcommand("verify")) return cmd_verify(report_path);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
