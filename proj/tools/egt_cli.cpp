// Command-line front end: solve | dominance | certify | check | play |
// ranked-demo | verify-ft | lift. Exit code 1 on validation failures, 2 on
// file or parse errors. All output is plain text with stable field ordering;
// identical invocations produce identical bytes.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "egt/elimination.hpp"
#include "egt/game.hpp"
#include "egt/hierarchy.hpp"
#include "egt/justification.hpp"
#include "egt/ranked.hpp"
#include "egt/sweep.hpp"
#include "egt/witness_io.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitFile = 2;

struct FileError : egt::Error {
  using egt::Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write '" + path + "'");
  out << content;
}

egt::Game load_game(const std::string& path) {
  try {
    return egt::parse_game(read_file(path));
  } catch (const egt::ParseError& e) {
    throw FileError(path + ": " + e.what());
  }
}

egt::RankedGame load_ranked(const std::string& path) {
  try {
    return egt::parse_ranked_game(read_file(path));
  } catch (const egt::ParseError& e) {
    throw FileError(path + ": " + e.what());
  }
}

egt::Concept parse_concept(const std::string& name) {
  auto c = egt::concept_from_name(name);
  if (!c) throw egt::Error("unknown concept '" + name + "' (use rat, mrat, iu, miu)");
  if (*c == egt::Concept::ERAT) throw egt::Error("e-rat requires a relation, not a game file");
  return *c;
}

int run_solve(const std::string& game_file, const std::string& concept_name) {
  egt::Game g = load_game(game_file);
  auto trace = egt::eliminate(g, parse_concept(concept_name));
  std::cout << egt::render_trace(trace);
  return 0;
}

int run_dominance(const std::string& game_file, int player, const std::string& strategy) {
  egt::Game g = load_game(game_file);
  egt::Player p = player - 1;
  int s = g.strategy_index(p, strategy);
  auto full_own = g.all_indices(p);
  auto full_opp = g.all_indices(egt::other(p));

  auto belief = egt::find_justifying_belief(g, p, s, full_opp, full_own);
  std::cout << "strategy " << strategy << " (player " << player << ")\n";
  if (belief) {
    std::cout << "never-best-response: no\n";
    std::cout << "justifying belief: " << egt::belief_str(g, egt::other(p), *belief) << "\n";
  } else {
    std::cout << "never-best-response: yes\n";
  }
  auto cert = egt::strict_dominance_certificate(g, p, s, full_own, full_opp);
  if (cert) {
    std::cout << "strictly dominated: yes\n";
    std::cout << "dominating mixture: " << egt::belief_str(g, p, cert->mixture) << "\n";
    std::cout << "margin: " << cert->margin.str() << "\n";
  } else {
    std::cout << "strictly dominated: no\n";
  }

  egt::Game aux = egt::pearce_auxiliary_game(g, p, s);
  std::cout << "auxiliary margin matrix (rows: player " << player << "):\n";
  for (const auto& row : aux.payoffs[0]) {
    for (std::size_t j = 0; j < row.size(); ++j) std::cout << (j ? " " : "") << row[j].str();
    std::cout << "\n";
  }
  auto zs = egt::solve_zero_sum(aux);
  std::cout << "zero-sum value: " << zs.value.str() << "\n";
  std::cout << "row mix: " << egt::belief_str(g, p, zs.row_mix) << "\n";
  bool bridge = (zs.value > egt::Rational(0)) == cert.has_value();
  std::cout << "cross-check (value > 0 iff dominated): " << (bridge ? "ok" : "FAILED") << "\n";
  if (belief.has_value() == cert.has_value()) {
    std::cout << "cross-check (never-best-response iff dominated): FAILED\n";
    return kExitValidation;
  }
  return bridge ? 0 : kExitValidation;
}

int run_certify(const std::string& game_file, int depth, const std::string& out_dir) {
  egt::Game g = load_game(game_file);
  auto trace = egt::eliminate(g, egt::Concept::RAT);
  std::cout << egt::render_trace(trace);
  auto wm = egt::build_witness(g, trace, depth);
  if (wm.empty()) {
    std::cout << "final rectangle is empty: nothing to witness\n";
    return 0;
  }
  std::filesystem::create_directories(out_dir);
  bool all_ok = true;
  for (const auto& e : wm.entries) {
    std::string name = g.name + "_p" + std::to_string(e.player + 1) + "_" +
                       g.strategy_name(e.player, e.strategy) + ".witness";
    std::string path = (std::filesystem::path(out_dir) / name).string();
    write_file(path, egt::emit_witness(g, e) + "\n");
    bool ok = egt::check_hereditarily_coherent(e.hierarchy);
    for (int n = 1; ok && n <= depth; ++n)
      ok = egt::check_rcbr_star(g, e.player, e.strategy, e.hierarchy, n);
    std::cout << "witness " << path << ": " << (ok ? "ok" : "FAILED") << "\n";
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : kExitValidation;
}

int run_check(const std::string& witness_file, const std::string& game_file, int level) {
  egt::Game g = load_game(game_file);
  egt::WitnessEntry e;
  try {
    e = egt::parse_witness(g, read_file(witness_file));
  } catch (const egt::Error& err) {
    throw FileError(witness_file + ": " + err.what());
  }
  if (level > e.hierarchy.depth()) {
    std::cout << "level " << level << " exceeds hierarchy depth " << e.hierarchy.depth() << "\n";
    return kExitValidation;
  }
  std::cout << "hierarchy: player " << e.player + 1 << ", strategy "
            << g.strategy_name(e.player, e.strategy) << ", depth " << e.hierarchy.depth() << "\n";
  bool coherent = egt::check_coherent(e.hierarchy);
  std::cout << "coherent: " << (coherent ? "yes" : "no") << "\n";
  bool hc = coherent && egt::check_hereditarily_coherent(e.hierarchy);
  std::cout << "hereditarily coherent: " << (hc ? "yes" : "no") << "\n";
  if (!hc) return kExitValidation;
  bool rcbr = egt::check_rcbr_star(g, e.player, e.strategy, e.hierarchy, level);
  std::cout << "rcbr at level " << level << ": " << (rcbr ? "yes" : "no") << "\n";
  return rcbr ? 0 : kExitValidation;
}

// Reads "mu: x=1/2 y=1/2 ; b: x y" against the challenged player's names.
egt::JMoveI parse_move_I(const egt::JSource& src, egt::Player challenged, const std::string& line) {
  auto semi = line.find(';');
  if (semi == std::string::npos) throw egt::Error("expected 'mu: ... ; b: ...'");
  std::string mu_part = line.substr(0, semi);
  std::string b_part = line.substr(semi + 1);
  auto strip_tag = [](std::string text, const std::string& tag) {
    auto pos = text.find(tag);
    if (pos == std::string::npos) throw egt::Error("missing '" + tag + "'");
    return text.substr(pos + tag.size());
  };
  mu_part = strip_tag(mu_part, "mu:");
  b_part = strip_tag(b_part, "b:");
  std::vector<egt::Belief::Entry> entries;
  {
    std::istringstream ss(mu_part);
    std::string tok;
    while (ss >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw egt::Error("belief entry '" + tok + "' is not id=weight");
      std::string id = tok.substr(0, eq);
      int idx = -1;
      for (int t = 0; t < src.n_strategies(challenged); ++t)
        if (src.strategy_name(challenged, t) == id) idx = t;
      if (idx < 0) throw egt::Error("unknown strategy '" + id + "'");
      entries.emplace_back(idx, egt::Rational::parse(tok.substr(eq + 1)));
    }
  }
  egt::JMoveI mv;
  mv.belief = egt::Belief::from_entries(std::move(entries));
  {
    std::istringstream ss(b_part);
    std::string tok;
    while (ss >> tok) {
      int idx = -1;
      for (int t = 0; t < src.n_strategies(challenged); ++t)
        if (src.strategy_name(challenged, t) == tok) idx = t;
      if (idx < 0) throw egt::Error("unknown strategy '" + tok + "'");
      mv.borel_set.push_back(idx);
    }
  }
  std::sort(mv.borel_set.begin(), mv.borel_set.end());
  return mv;
}

int run_play(const std::string& game_file, const std::string& strategy, int player,
             const std::string& as_side, bool interactive, int budget,
             const std::string& save_path) {
  egt::Game g = load_game(game_file);
  egt::Player owner = player - 1;
  int s = g.strategy_index(owner, strategy);
  egt::JSource src(g);

  egt::StrategyI engine_I =
      src.is_survivor(owner, s) ? egt::synthesize_I(src, owner, s) : egt::fallback_I(src);
  egt::StrategyII engine_II = egt::synthesize_II(src);

  egt::StrategyI strat_I = engine_I;
  egt::StrategyII strat_II = engine_II;
  if (interactive) {
    if (as_side == "I") {
      strat_I.name = "human-I";
      strat_I.stationary = false;
      strat_I.move = [&src](const egt::JPosition& pos) -> std::optional<egt::JMoveI> {
        auto lm = egt::legal_moves_I(src, pos);
        std::cout << "position: defend " << src.strategy_name(pos.owner, pos.current)
                  << " (player " << pos.owner + 1 << ") at ply " << pos.ply << "\n";
        std::cout << "legal: " << lm.description << "\n";
        if (lm.polyhedron) {
          std::cout << "belief polyhedron rows (over opponent weights): "
                    << lm.polyhedron->constraints.size() << "\n";
        }
        std::cout << "your move (mu: id=w ... ; b: id ...), empty line resigns: " << std::flush;
        std::string line;
        if (!std::getline(std::cin, line) || line.empty()) return std::nullopt;
        try {
          return parse_move_I(src, egt::other(pos.owner), line);
        } catch (const egt::Error& e) {
          std::cout << "rejected: " << e.what() << "\n";
          return std::nullopt;
        }
      };
    } else {
      strat_II.name = "human-II";
      strat_II.move = [&src](const egt::JPosition& pos) -> std::optional<int> {
        std::cout << "position: I defended " << src.strategy_name(pos.owner, pos.current)
                  << " with " << egt::render_move_I(src, pos.history.back()) << "\n";
        std::cout << "pick a strategy from b: " << std::flush;
        std::string line;
        if (!std::getline(std::cin, line) || line.empty()) return std::nullopt;
        egt::Player challenged = egt::other(pos.owner);
        for (int t = 0; t < src.n_strategies(challenged); ++t)
          if (src.strategy_name(challenged, t) == line) return t;
        std::cout << "unknown strategy, resigning\n";
        return std::nullopt;
      };
    }
  }

  auto rec = egt::play(src, owner, s, strat_I, strat_II, budget);
  std::string rendered = egt::render_play(src, rec);
  std::cout << rendered;
  if (!save_path.empty()) write_file(save_path, rendered);
  if (!egt::audit_play(src, rec)) {
    std::cout << "audit: FAILED\n";
    return kExitValidation;
  }
  return 0;
}

int run_ranked_demo(const std::string& ranked_file, const std::string& gamma_text) {
  egt::RankedGame rg = load_ranked(ranked_file);
  auto trace = egt::eliminate_ranked(rg);
  if (!gamma_text.empty()) {
    egt::Ordinal gamma = egt::Ordinal::parse(gamma_text);
    auto closed = egt::ranked_stages(rg, gamma);
    std::cout << "closed form at " << gamma.str() << ":";
    for (auto k : closed) std::cout << " " << k;
    std::cout << "\n";
    // engine column: survivors recorded at the largest stage label <= gamma
    std::vector<int> engine = trace.initial.sides[0];
    for (const auto& stage : trace.stages)
      if (stage.label <= gamma) engine = stage.survivors.sides[0];
    std::cout << "engine at " << gamma.str() << ":    ";
    for (auto k : engine) std::cout << " " << k;
    std::cout << "\n";
    std::vector<std::uint64_t> engine_u(engine.begin(), engine.end());
    std::cout << "agree: " << (engine_u == closed ? "yes" : "NO") << "\n";
    if (engine_u != closed) return kExitValidation;
  } else {
    std::cout << egt::render_trace(trace);
    bool all_ok = true;
    for (const auto& stage : trace.stages) {
      std::vector<std::uint64_t> engine(stage.survivors.sides[0].begin(),
                                        stage.survivors.sides[0].end());
      bool ok = engine == egt::ranked_stages(rg, stage.label);
      all_ok = all_ok && ok;
    }
    std::cout << "closed form matches the engine at every recorded stage: "
              << (all_ok ? "yes" : "NO") << "\n";
    if (!all_ok) return kExitValidation;
  }
  std::cout << "convergence ordinal: " << trace.convergence_ordinal.str() << "\n";
  return 0;
}

int run_verify_ft(int size, const std::string& values_text, std::uint64_t samples,
                  std::uint64_t seed, int depth, bool exhaustive_pairs) {
  std::vector<egt::Rational> values;
  {
    std::string norm = values_text;
    for (char& c : norm)
      if (c == ',') c = ' ';
    std::istringstream ss(norm);
    std::string tok;
    while (ss >> tok) values.push_back(egt::Rational::parse(tok));
  }
  if (values.empty()) throw egt::Error("no payoff values given");
  if (size != 2 && size != 3) throw egt::Error("--size must be 2 or 3");

  egt::SweepSummary summary;
  if (size == 2 && (exhaustive_pairs || values.size() <= 3)) {
    std::uint64_t m = egt::matrix_space_size(2, 2, values.size());
    std::uint64_t total = m * m;
    std::cout << "exhaustive 2x2 sweep: " << m << "x" << m << " = " << total
              << " paired matrix grids, depth " << depth << "\n";
    summary = egt::run_ft_sweep(
        static_cast<std::size_t>(total),
        [&](std::size_t i) { return egt::exhaustive_pair_game(static_cast<std::uint64_t>(i), 2, 2, values); },
        depth);
  } else {
    std::cout << "sampled " << size << "x" << size << " sweep: " << samples
              << " games, seed " << seed << ", depth " << depth << "\n";
    summary = egt::run_ft_sweep(
        static_cast<std::size_t>(samples),
        [&](std::size_t i) { return egt::sampled_game(seed + i, size, size, values); }, depth);
  }
  if (summary.failures == 0) {
    std::cout << "all " << summary.games << " paired checks passed\n";
    return 0;
  }
  std::cout << summary.failures << " of " << summary.games << " games FAILED\n";
  for (const auto& rep : summary.failed_reports) {
    std::cout << "counterexample " << rep.game_name << ": " << rep.detail << "\n";
  }
  return kExitValidation;
}

int run_lift(const std::string& relation_file, const std::string& measure_text) {
  // relation file: one "x y" pair per line, '#' comments; point ids are
  // compared lexicographically (the canonical order for the lift)
  std::vector<std::pair<std::string, std::string>> rel;
  {
    std::istringstream in(read_file(relation_file));
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      auto toks = egt::detail::split_ws(egt::detail::strip_comment(raw));
      if (toks.empty()) continue;
      if (toks.size() != 2)
        throw FileError(relation_file + ": line " + std::to_string(line_no) +
                        ": expected 'x y'");
      rel.emplace_back(toks[0], toks[1]);
    }
  }
  std::vector<egt::FiniteMeasure<std::string>::Entry> entries;
  {
    std::string norm = measure_text;
    for (char& c : norm)
      if (c == ',') c = ' ';
    std::istringstream ss(norm);
    std::string tok;
    while (ss >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw egt::Error("measure entry '" + tok + "' is not id=weight");
      entries.emplace_back(tok.substr(0, eq), egt::Rational::parse(tok.substr(eq + 1)));
    }
  }
  auto mu = egt::FiniteMeasure<std::string>::from_entries(std::move(entries));
  auto nu = egt::lubin_lift<std::string, std::string>(rel, mu);
  for (const auto& [pt, w] : nu.entries())
    std::cout << "(" << pt.first << "," << pt.second << ")=" << w.str() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic toolkit for rationalizability, belief hierarchies, "
               "and justification games"};
  app.require_subcommand(1);

  std::string game_file, ranked_file, witness_file, relation_file;
  std::string concept_name = "rat", strategy, as_side = "I", gamma_text, save_path;
  std::string values_text = "0,1,2", measure_text, out_dir = "witnesses";
  int player = 1, depth = 8, level = 1, budget = 64, size = 2;
  std::uint64_t samples = 2000, seed = 1;
  bool interactive = false, exhaustive_pairs = false;

  auto* solve = app.add_subcommand("solve", "run iterated elimination and print the trace");
  solve->add_option("game-file", game_file)->required();
  solve->add_option("--concept", concept_name, "rat | mrat | iu | miu");

  auto* dom = app.add_subcommand("dominance", "never-best-response and dominance analysis");
  dom->add_option("game-file", game_file)->required();
  dom->add_option("--player", player)->check(CLI::Range(1, 2));
  dom->add_option("--strategy", strategy)->required();

  auto* certify = app.add_subcommand("certify", "build and re-check depth-d witness hierarchies");
  certify->add_option("game-file", game_file)->required();
  certify->add_option("--depth", depth)->check(CLI::PositiveNumber);
  certify->add_option("--out", out_dir, "directory for witness files");

  auto* check = app.add_subcommand("check", "validate an externally supplied hierarchy");
  check->add_option("witness-file", witness_file)->required();
  check->add_option("game-file", game_file)->required();
  check->add_option("--level", level)->check(CLI::PositiveNumber);

  auto* play = app.add_subcommand("play", "run or host the justification game");
  play->add_option("game-file", game_file)->required();
  play->add_option("--strategy", strategy)->required();
  play->add_option("--player", player)->check(CLI::Range(1, 2));
  play->add_option("--as", as_side)->check(CLI::IsMember({"I", "II"}));
  play->add_flag("--interactive", interactive, "play one side by hand");
  play->add_option("--budget", budget)->check(CLI::PositiveNumber);
  play->add_option("--save", save_path, "write the transcript to a file");

  auto* ranked = app.add_subcommand("ranked-demo", "closed-form vs engine stage sets");
  ranked->add_option("ranked-file", ranked_file)->required();
  ranked->add_option("--gamma", gamma_text, "ordinal, e.g. w*1+3");

  auto* verify = app.add_subcommand("verify-ft", "equivalence sweep over a game corpus");
  verify->add_option("--size", size)->check(CLI::IsMember({2, 3}));
  verify->add_option("--values", values_text, "payoff grid, e.g. 0,1,2");
  verify->add_option("--sample", samples, "sampled games for size 3");
  verify->add_option("--seed", seed, "sampling seed");
  verify->add_option("--depth", depth, "witness depth");
  verify->add_flag("--exhaustive-pairs", exhaustive_pairs, "force the exhaustive 2x2 pairing");

  auto* lift = app.add_subcommand("lift", "uniformize a finite relation through a measure");
  lift->add_option("relation-file", relation_file)->required();
  lift->add_option("measure", measure_text, "e.g. x=1/2,y=1/2")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(game_file, concept_name);
    if (dom->parsed()) return run_dominance(game_file, player, strategy);
    if (certify->parsed()) return run_certify(game_file, depth, out_dir);
    if (check->parsed()) return run_check(witness_file, game_file, level);
    if (play->parsed())
      return run_play(game_file, strategy, player, as_side, interactive, budget, save_path);
    if (ranked->parsed()) return run_ranked_demo(ranked_file, gamma_text);
    if (verify->parsed())
      return run_verify_ft(size, values_text, samples, seed, depth, exhaustive_pairs);
    if (lift->parsed()) return run_lift(relation_file, measure_text);
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFile;
  } catch (const egt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFile;
  } catch (const egt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
