// Command-line surface for playing, solving, and analyzing positional games
// on block designs and transversal designs.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ttt/cache.hpp"
#include "ttt/designs.hpp"
#include "ttt/scoring.hpp"
#include "ttt/solver.hpp"
#include "ttt/strategy.hpp"
#include "ttt/tables.hpp"

using namespace ttt;

namespace {

struct LoadedBoard {
  Hypergraph hypergraph;
  std::optional<DesignFile> design;  // present when the input was a design file
  std::string label;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inputs are either a file (hypergraph or design format) or one of the named
// fixtures: H1..H7 and ttt3, the classic 3x3 board.
LoadedBoard load_board(const std::string& spec) {
  LoadedBoard out;
  out.label = spec;
  if (spec.size() == 2 && spec[0] == 'H' && spec[1] >= '1' && spec[1] <= '7') {
    out.hypergraph = fixture_h(spec[1] - '0');
    return out;
  }
  if (spec == "ttt3") {
    out.hypergraph = tic_tac_toe_3x3();
    return out;
  }
  std::string text = read_file(spec);
  std::istringstream probe(text);
  std::string line, first_tok;
  while (std::getline(probe, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    if (ls >> first_tok) break;
  }
  if (first_tok == "design" || first_tok == "td") {
    out.design = parse_design_string(text);
    if (out.design->kind == DesignFile::Kind::Td)
      out.hypergraph = to_hypergraph(out.design->as_td());
    else
      out.hypergraph = to_hypergraph(out.design->as_design());
  } else {
    out.hypergraph = parse_hypergraph_string(text);
  }
  return out;
}

int resolve_point(const LoadedBoard& board, const std::string& token) {
  if (board.design)
    if (auto idx = board.design->index_of(token)) return *idx;
  try {
    return std::stoi(token);
  } catch (...) {
    throw std::runtime_error("unknown point: " + token);
  }
}

GameState state_from_moves(const LoadedBoard& board, const std::vector<std::string>& moves,
                           const TurnSchedule& schedule) {
  GameState s;
  for (const auto& m : moves) {
    auto colon = m.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("moves look like x:<point> or o:<point>");
    std::string side = m.substr(0, colon);
    int v = resolve_point(board, m.substr(colon + 1));
    if (side == "x" || side == "X")
      s.maker |= bit(v);
    else if (side == "o" || side == "O")
      s.breaker |= bit(v);
    else
      throw std::runtime_error("move side must be x or o");
  }
  s.to_move = schedule.side_at(s.move_count());
  return s;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string predicted_name(PredictedWinner w) {
  switch (w) {
    case PredictedWinner::Maker: return "maker";
    case PredictedWinner::Breaker: return "breaker";
    case PredictedWinner::Inconclusive: return "inconclusive";
  }
  return "?";
}

void print_verdict(const CriterionVerdict& v) {
  std::cout << "criterion name=" << v.name << " verdict=" << predicted_name(v.winner);
  if (!v.inequality.empty()) std::cout << " inequality=\"" << v.inequality << "\"";
  if (!v.reason.empty()) std::cout << " reason=\"" << v.reason << "\"";
  std::cout << "\n";
}

Strategy make_named_strategy(const std::string& name, const LoadedBoard& board,
                             GameVariant variant, const TurnSchedule& schedule,
                             std::uint64_t seed) {
  if (name == "score-opt") return score_optimizing_strategy({}, variant);
  if (name == "random") return uniform_random_strategy(seed);
  if (name == "solver") return solver_strategy(variant, schedule);
  if (name.rfind("scripted:", 0) == 0) {
    std::vector<int> moves;
    std::istringstream ss(name.substr(9));
    std::string tok;
    while (std::getline(ss, tok, ',')) moves.push_back(resolve_point(board, tok));
    return scripted_strategy(name, moves);
  }
  if (name == "sts-xeno") {
    if (!board.design || board.design->kind != DesignFile::Kind::Bibd)
      throw std::runtime_error("sts-xeno needs a block-design file");
    return sts_xeno_strategy(board.design->as_design());
  }
  if (!board.design || board.design->kind != DesignFile::Kind::Td)
    throw std::runtime_error(name + " needs a transversal-design file");
  TransversalDesign td = board.design->as_td();
  if (name == "td2-xeno") return td2_xeno_strategy(td);
  if (name == "td3-xeno") return td3_xeno_strategy(td);
  if (name == "ophelia-handicap") return ophelia_handicap_attack(td);
  throw std::runtime_error("unknown strategy: " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tic-tac-toe and Maker-Breaker games on block designs"};
  app.require_subcommand(1);

  // ---- gen -----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Construct a design and emit its file format");
  std::string gen_kind, gen_out;
  std::vector<long long> gen_params;
  gen->add_option("kind", gen_kind, "sts | ts | td")->required();
  gen->add_option("params", gen_params, "sts v | ts v lambda | td k n")->required();
  gen->add_option("-o,--output", gen_out, "output file (default stdout)");
  gen->callback([&] {
    DesignFile f;
    if (gen_kind == "sts" && gen_params.size() == 1) {
      f = design_file_from(make_sts(static_cast<int>(gen_params[0])));
    } else if (gen_kind == "ts" && gen_params.size() == 2) {
      f = design_file_from(
          make_ts(static_cast<int>(gen_params[0]), static_cast<int>(gen_params[1])));
    } else if (gen_kind == "td" && gen_params.size() == 2) {
      int k = static_cast<int>(gen_params[0]), n = static_cast<int>(gen_params[1]);
      auto td = make_td(k, n);
      f = design_file_from(td, k == 4 && n == 4 ? td44_point_names()
                                                : std::vector<std::string>{});
    } else {
      throw CLI::ValidationError("usage: gen sts v | gen ts v lambda | gen td k n");
    }
    write_output(gen_out, format_design(f));
  });

  // ---- check ---------------------------------------------------------------
  auto* check = app.add_subcommand("check", "Validate a design file");
  std::string check_file;
  check->add_option("file", check_file)->required();
  check->callback([&] {
    DesignFile f = parse_design_string(read_file(check_file));
    ValidationReport rep = validate_design_file(f);
    if (rep.valid()) {
      std::cout << "check file=" << check_file << " valid=1\n";
      return;
    }
    std::cout << "check file=" << check_file << " valid=0 issues=" << rep.issues.size() << "\n";
    for (const auto& issue : rep.issues) std::cout << "issue " << issue << "\n";
    throw CLI::RuntimeError(1);
  });

  // ---- solve ---------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "Exactly solve a position");
  std::string solve_file, solve_variant = "strong", solve_schedule, solve_cert;
  std::vector<std::string> solve_moves;
  std::uint64_t solve_nodes = 0;
  double solve_secs = 0;
  int solve_threads = 1;
  bool solve_nocache = false, solve_noprune = false;
  solve_cmd->add_option("file", solve_file, "file or fixture (H1..H7, ttt3)")->required();
  solve_cmd->add_option("--variant", solve_variant, "strong | mb");
  solve_cmd->add_option("--moves", solve_moves, "prior moves, e.g. x:0 o:5");
  solve_cmd->add_option("--schedule", solve_schedule, "turn prefix, e.g. XOO");
  solve_cmd->add_option("--budget-nodes", solve_nodes);
  solve_cmd->add_option("--budget-secs", solve_secs);
  solve_cmd->add_option("--threads", solve_threads);
  solve_cmd->add_option("--certificate", solve_cert, "write a strategy certificate here");
  solve_cmd->add_flag("--no-cache", solve_nocache);
  solve_cmd->add_flag("--no-orbit-pruning", solve_noprune);
  solve_cmd->callback([&] {
    LoadedBoard board = load_board(solve_file);
    GameVariant variant =
        solve_variant == "mb" ? GameVariant::MakerBreaker : GameVariant::Strong;
    TurnSchedule schedule =
        solve_schedule.empty() ? TurnSchedule::standard() : TurnSchedule::parse(solve_schedule);
    GameState state = state_from_moves(board, solve_moves, schedule);
    SolveOptions opts;
    opts.budget = Budget{solve_nodes, solve_secs};
    opts.threads = solve_threads;
    opts.use_orbit_pruning = !solve_noprune;

    SolveCache cache = solve_nocache ? SolveCache("") : cache_from_env();
    std::string key = SolveCache::key_for(board.hypergraph, variant, state, schedule);
    std::optional<GameValue> value;
    std::string source = "solver";
    SolveResult res;
    if (auto hit = cache.lookup(key)) {
      value = hit->value;
      source = "cached";
      res.nodes_expanded = hit->nodes;
    }
    if (!value) {
      res = solve(board.hypergraph, variant, state, schedule, opts);
      value = res.value;
      cache.store(key, res.value, res.nodes_expanded);
    }
    std::cout << "solve file=" << solve_file << " variant=" << solve_variant
              << " value=" << game_value_name(*value);
    if (*value != GameValue::Unknown)
      std::cout << " outcome=" << outcome_name(outcome_of(*value, state.to_move), variant);
    if (res.best_move) std::cout << " best_move=" << *res.best_move;
    std::cout << " nodes=" << res.nodes_expanded << " table_hits=" << res.table_hits
              << " elapsed=" << res.elapsed.count() << " source=" << source << "\n";
    if (*value == GameValue::Unknown) throw CLI::RuntimeError(2);
    if (!solve_cert.empty()) {
      Outcome oc = outcome_of(*value, state.to_move);
      Side cert_side = oc == Outcome::FirstWin ? Side::First : Side::Second;
      auto cert =
          extract_certificate(board.hypergraph, variant, cert_side, state, schedule, opts);
      write_output(solve_cert, cert.serialize());
      std::cout << "certificate side=" << (cert_side == Side::First ? "first" : "second")
                << " states=" << cert.moves.size() << " file=" << solve_cert << "\n";
    }
  });

  // ---- criteria --------------------------------------------------------------
  auto* crit = app.add_subcommand("criteria", "Closed-form winner criteria for a design");
  std::string crit_file;
  crit->add_option("file", crit_file)->required();
  crit->callback([&] {
    LoadedBoard board = load_board(crit_file);
    print_verdict(es_breaker_criterion(board.hypergraph));
    print_verdict(beck_maker_criterion(board.hypergraph));
    if (board.design) {
      if (board.design->kind == DesignFile::Kind::Td)
        print_verdict(td_mb_bounds(board.design->k, board.design->n));
      else if (board.design->lambda == 1)
        print_verdict(bibd_mb_bounds(board.design->v, board.design->k));
    }
  });

  // ---- simulate --------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "Play two strategies against each other");
  std::string sim_file, sim_first, sim_second, sim_schedule, sim_out, sim_variant = "strong";
  std::uint64_t sim_seed = 0;
  sim->add_option("file", sim_file)->required();
  sim->add_option("--first", sim_first, "first player's strategy")->required();
  sim->add_option("--second", sim_second, "second player's strategy")->required();
  sim->add_option("--variant", sim_variant, "strong | mb");
  sim->add_option("--schedule", sim_schedule);
  sim->add_option("--seed", sim_seed, "seed for random strategies");
  sim->add_option("--transcript", sim_out, "write the transcript here");
  sim->callback([&] {
    LoadedBoard board = load_board(sim_file);
    GameVariant variant = sim_variant == "mb" ? GameVariant::MakerBreaker : GameVariant::Strong;
    TurnSchedule schedule =
        sim_schedule.empty() ? TurnSchedule::standard() : TurnSchedule::parse(sim_schedule);
    Strategy first = make_named_strategy(sim_first, board, variant, schedule, sim_seed);
    Strategy second = make_named_strategy(sim_second, board, variant, schedule, sim_seed + 1);
    Transcript t = simulate(board.hypergraph, variant, first, second, schedule);
    std::cout << t.str();
    if (!sim_out.empty()) write_output(sim_out, t.str());
    if (!t.fault.empty()) throw CLI::RuntimeError(1);
  });

  // ---- table -----------------------------------------------------------------
  auto* table = app.add_subcommand("table", "Recompute the published classification tables");
  std::string table_scope = "small";
  std::uint64_t table_nodes = 0;
  double table_secs = 0;
  int table_threads = 1;
  bool table_nocache = false;
  std::int64_t audit_seed = -1;
  table->add_option("--scope", table_scope, "small | heavy | all");
  table->add_option("--budget-nodes", table_nodes, "per heavy row");
  table->add_option("--budget-secs", table_secs, "per heavy row");
  table->add_option("--threads", table_threads);
  table->add_flag("--no-cache", table_nocache);
  table->add_option("--audit-seed", audit_seed, "pin the cache audit sample");
  table->callback([&] {
    TableOptions opts;
    opts.scope = table_scope;
    opts.heavy_budget = Budget{table_nodes, table_secs};
    opts.threads = table_threads;
    opts.use_cache = !table_nocache;
    if (audit_seed >= 0) opts.audit_seed = static_cast<std::uint64_t>(audit_seed);
    TableRunResult run = run_tables(opts);
    for (const auto& row : run.rows) {
      std::cout << "row family=\"" << row.spec->family << "\" param=\"" << row.spec->param
                << "\" variant=" << (row.spec->variant == GameVariant::Strong ? "strong" : "mb")
                << " expected=" << outcome_name(row.spec->expected, row.spec->variant)
                << " computed="
                << (row.computed ? outcome_name(*row.computed, row.spec->variant) : "unknown")
                << " source=" << row.source << " match=" << (row.match ? 1 : 0)
                << " seconds=" << row.seconds;
      if (!row.note.empty()) std::cout << " note=\"" << row.note << "\"";
      std::cout << "\n";
    }
    std::cout << "table rows=" << run.rows.size() << " all_match=" << (run.all_match ? 1 : 0)
              << " audited=" << run.audited << " audit_failures=" << run.audit_failures << "\n";
    if (!run.all_match) throw CLI::RuntimeError(1);
    if (run.budget_exhausted) throw CLI::RuntimeError(2);
  });

  // ---- augment ----------------------------------------------------------------
  auto* aug = app.add_subcommand("augment", "Add groups as winning sets and solve");
  std::string aug_file;
  int aug_groups = 0;
  bool aug_strong = false;
  std::uint64_t aug_nodes = 0;
  double aug_secs = 0;
  int aug_threads = 1;
  aug->add_option("file", aug_file, "transversal-design file")->required();
  aug->add_option("--groups", aug_groups, "how many groups to add as blocks")->required();
  aug->add_flag("--strong", aug_strong, "also solve the strong game");
  aug->add_option("--budget-nodes", aug_nodes);
  aug->add_option("--budget-secs", aug_secs);
  aug->add_option("--threads", aug_threads);
  aug->callback([&] {
    DesignFile f = parse_design_string(read_file(aug_file));
    AugmentResult res = run_augment(f.as_td(), aug_groups, aug_strong,
                                    Budget{aug_nodes, aug_secs}, aug_threads);
    std::cout << "augment groups=" << res.groups_added
              << " mb=" << game_value_name(res.mb.value) << " mb_nodes=" << res.mb.nodes_expanded;
    if (res.strong)
      std::cout << " strong=" << game_value_name(res.strong->value)
                << " strong_nodes=" << res.strong->nodes_expanded;
    std::cout << "\n";
    if (res.mb.value == GameValue::Unknown ||
        (res.strong && res.strong->value == GameValue::Unknown))
      throw CLI::RuntimeError(2);
  });

  // ---- orbits -----------------------------------------------------------------
  auto* orb = app.add_subcommand("orbits", "Vertex orbits under the automorphism group");
  std::string orb_file;
  std::vector<std::string> orb_moves;
  orb->add_option("file", orb_file)->required();
  orb->add_option("--moves", orb_moves, "prior moves, e.g. x:0 o:5");
  orb->callback([&] {
    LoadedBoard board = load_board(orb_file);
    GameState state = state_from_moves(board, orb_moves, TurnSchedule::standard());
    auto gens = automorphism_generators(board.hypergraph);
    std::vector<Permutation> stab;
    for (const auto& g : gens)
      if (g.apply(state.maker) == state.maker && g.apply(state.breaker) == state.breaker)
        stab.push_back(g);
    auto orbits = vertex_orbits(board.hypergraph, state, stab);
    std::cout << "orbits file=" << orb_file << " automorphisms=" << gens.size()
              << " stabilizing=" << stab.size() << " classes=" << orbits.size() << "\n";
    for (const auto& orbit : orbits) {
      std::cout << "orbit size=" << orbit.size() << " vertices=";
      for (std::size_t i = 0; i < orbit.size(); ++i)
        std::cout << (i ? "," : "") << orbit[i];
      std::cout << "\n";
    }
  });

  // ---- reduce -----------------------------------------------------------------
  auto* red = app.add_subcommand("reduce", "Apply one Maker/Breaker move pair as deletions");
  std::string red_file, red_maker, red_breaker, red_out;
  red->add_option("file", red_file)->required();
  red->add_option("--maker", red_maker, "Maker's vertex")->required();
  red->add_option("--breaker", red_breaker, "Breaker's vertex")->required();
  red->add_option("-o,--output", red_out);
  red->callback([&] {
    LoadedBoard board = load_board(red_file);
    int u = resolve_point(board, red_maker);
    int v = resolve_point(board, red_breaker);
    Reduction r = restrict_after_moves(board.hypergraph, u, v);
    std::ostringstream out;
    out << "# reduced: maker " << red_maker << ", breaker " << red_breaker << "\n";
    out << "# old->new:";
    for (int ov = 0; ov < board.hypergraph.vertex_count; ++ov)
      if (r.old_to_new[ov] >= 0) out << " " << ov << "->" << r.old_to_new[ov];
    out << "\n" << format_hypergraph(r.hypergraph);
    write_output(red_out, out.str());
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
