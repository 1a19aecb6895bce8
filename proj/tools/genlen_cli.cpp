// genlen: command-line front end for the length computations and the experiment harness.
//
// Exit status: 0 when every requested computation completed (a NotGenerating
// result is a completed computation), 1 on input, budget or numerical errors,
// and 1 for experiments with rows that timed out or failed.

#include "genlen/genlen.hpp"
#include "genlen/lab/csv.hpp"
#include "genlen/lab/experiment.hpp"
#include "genlen/lab/matrix_io.hpp"
#include "genlen/lab/svg_plot.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace genlen;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string json_out, csv_out, plot_out;

  Tolerance tolerance() const {
    Tolerance t;
    if (tol) t.rank_rel = *tol;
    t.validate();
    return t;
  }
};

struct Source {
  std::string input;
  std::vector<std::size_t> random;  // {n, g}
  bool normalize = false;

  void attach(CLI::App* cmd, const char* what) {
    auto* in = cmd->add_option("-i,--input", input, std::string("JSON file with the ") + what)->check(CLI::ExistingFile);
    auto* rnd = cmd->add_option("-r,--random", random, "sample n g at random instead")->expected(2);
    in->excludes(rnd);
  }

  bool given() const { return !input.empty() || !random.empty(); }
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GENLEN_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable GENLEN_SEED='" << env << "'\n";
    }
  }
  return 0;
}

json length_json(const LengthReport& r) {
  json j;
  j["kind"] = r.kind == LengthKind::Length ? "length" : "wie-length";
  j["status"] = to_string(r.status);
  j["value"] = r.finite() ? json(r.value) : json(nullptr);
  j["dims_per_step"] = r.dims_per_step;
  j["search_cap"] = r.search_cap;
  if (r.witness_words) j["witness_words"] = *r.witness_words;
  j["duplicate_generators"] = r.duplicate_generators;
  return j;
}

void print_length(const char* label, const LengthReport& r) {
  std::cout << label << ": ";
  if (r.finite()) {
    std::cout << r.value;
  } else {
    std::cout << (r.status == LengthStatus::NotGenerating ? "not generating" : "not found within cap");
    if (r.status == LengthStatus::CapExceeded) std::cout << " (cap " << r.search_cap << ")";
  }
  std::cout << "\n  dims:";
  for (auto d : r.dims_per_step) std::cout << ' ' << d;
  std::cout << '\n';
  for (const auto& [a, b] : r.duplicate_generators) {
    std::cout << "  note: generators " << a << " and " << b << " are identical\n";
  }
}

void write_json(const Globals& g, const json& j) {
  if (!g.json_out.empty()) lab::write_file(g.json_out, j.dump(2) + "\n");
}

GeneratingSystem load_system(const Source& src, const Globals& g) {
  if (!src.input.empty()) return lab::parse_matrices(src.input);
  return ginibre_system(src.random.at(0), src.random.at(1), RngSpec{g.seed, 0});
}

int cmd_length(const Source& src, const Globals& g, bool wie, std::optional<std::size_t> cap) {
  const auto s = load_system(src, g);
  const Tolerance tol = g.tolerance();
  json j{{"n", s.n()}, {"g", s.g()}, {"seed", g.seed}};
  if (wie) {
    const auto rep = wie_length(s, cap, tol);
    print_length("Wie-length", rep);
    j["wie_length"] = length_json(rep);
    std::cout << "  generic bound 2 ceil(log_g n) = " << (s.g() >= 2 ? std::to_string(generic_wie_bound(s.n(), s.g())) : "n/a")
              << ", counting bound = " << (s.g() >= 2 ? std::to_string(counting_lower_bound(s.n(), s.g())) : "n/a")
              << '\n';
  } else {
    const auto rep = length(s, tol);
    print_length("length", rep);
    j["length"] = length_json(rep);
  }
  if (!src.random.empty()) j["matrices"] = lab::matrices_to_json(s.mats());
  write_json(g, j);
  return 0;
}

int cmd_lie(const Source& src, const Globals& g, std::optional<std::size_t> cap) {
  const Tolerance tol = g.tolerance();
  LieGeneratingSystem u = [&] {
    if (!src.input.empty()) {
      std::vector<SuElement> elems;
      for (auto& m : lab::parse_matrix_list(lab::read_file(src.input), src.input)) elems.emplace_back(m, 1e-10);
      return LieGeneratingSystem(std::move(elems));
    }
    return random_su_system(src.random.at(0), src.random.at(1), RngSpec{g.seed, 2});
  }();
  const auto rep = lie_length(u, cap, tol);
  std::cout << "Lie-length: " << (rep.finite() ? std::to_string(rep.value) : "not generating") << '\n';
  std::cout << "  dims:";
  for (auto d : rep.dims_per_depth) std::cout << ' ' << d;
  std::cout << "\n  nodes expanded " << rep.nodes_expanded << ", kept " << rep.nodes_kept << '\n';
  if (u.g() >= 2 && u.n() >= 2) std::cout << "  Witt lower bound " << witt_lower_bound(u.g(), u.n()) << '\n';
  write_json(g, {{"n", u.n()},
                 {"g", u.g()},
                 {"seed", g.seed},
                 {"status", rep.finite() ? "found" : "not-generating"},
                 {"value", rep.finite() ? json(rep.value) : json(nullptr)},
                 {"dims_per_depth", rep.dims_per_depth},
                 {"nodes_expanded", rep.nodes_expanded},
                 {"nodes_kept", rep.nodes_kept}});
  return 0;
}

int cmd_channel(const Source& src, const Globals& g, std::size_t iters) {
  const Tolerance tol = g.tolerance();
  const KrausChannel e = [&] {
    if (!src.input.empty()) {
      auto mats = lab::parse_matrices(src.input).mats();
      return src.normalize ? KrausChannel::normalized(std::move(mats)) : KrausChannel(std::move(mats));
    }
    return haar_isometry_kraus(src.random.at(0), src.random.at(1), RngSpec{g.seed, 3});
  }();
  const auto rep = analyze_channel(e, tol);
  std::cout << "channel: n = " << e.n() << ", " << e.g() << " Kraus operators, Kraus rank " << rep.kraus_rank << '\n';
  std::cout << "  index of full Kraus rank: "
            << (rep.kraus_rank_index ? std::to_string(*rep.kraus_rank_index) : "none (not primitive)") << '\n';
  std::cout << "  strongly irreducible: " << (rep.strongly_irreducible ? "yes" : "no") << '\n';
  std::cout << "  maximal fixed point rank: " << rep.fixed_point_rank << '\n';
  std::cout << "  zero-error dichotomy: " << to_string(rep.dichotomy.kind);
  if (rep.dichotomy.q_upper) std::cout << " (block length " << *rep.dichotomy.q_upper << ")";
  std::cout << '\n';
  json j{{"n", e.n()},
         {"g", e.g()},
         {"seed", g.seed},
         {"kraus_rank", rep.kraus_rank},
         {"full_kraus_rank_index", rep.kraus_rank_index ? json(*rep.kraus_rank_index) : json(nullptr)},
         {"strongly_irreducible", rep.strongly_irreducible},
         {"fixed_point_rank", rep.fixed_point_rank},
         {"dichotomy", to_string(rep.dichotomy.kind)}};
  if (rep.kraus_rank_index) {
    const auto b = primitivity_bounds(e, iters, RngSpec{g.seed, 4}, tol);
    std::cout << "  primitivity index: " << b.certified_lower << " <= q <= " << b.upper << '\n';
    j["primitivity"] = {{"certified_lower", b.certified_lower}, {"upper", b.upper}};
    if (b.witness) {
      std::cout << "  non-positivity witness at level " << b.witness->level << " (residual " << b.witness->residual
                << ")\n";
      j["primitivity"]["witness_level"] = b.witness->level;
    }
  }
  write_json(g, j);
  return 0;
}

int cmd_mps(const Source& src, const Globals& g) {
  const MpsTensor t{load_system(src, g)};
  const auto inj = mps_injectivity_index(t, g.tolerance());
  std::cout << "MPS injectivity index: " << (inj.wie.finite() ? std::to_string(inj.wie.value) : "never injective")
            << '\n';
  for (const auto& [len, rank] : inj.gamma_ranks) {
    std::cout << "  rank Gamma_" << len << " = " << rank << " / " << t.n() * t.n() << '\n';
  }
  if (!inj.consistent) std::cout << "  warning: Gamma ranks disagree with the Wie-length\n";
  json ranks = json::array();
  for (const auto& [len, rank] : inj.gamma_ranks) ranks.push_back({{"L", len}, {"rank", rank}});
  write_json(g, {{"n", t.n()},
                 {"g", t.g()},
                 {"seed", g.seed},
                 {"injectivity_index", inj.wie.finite() ? json(inj.wie.value) : json(nullptr)},
                 {"gamma_ranks", ranks},
                 {"consistent", inj.consistent}});
  return inj.consistent ? 0 : 1;
}

int cmd_peps(std::size_t n, std::size_t phys, std::size_t side, std::optional<std::size_t> string_bond,
             const Globals& g) {
  const RngSpec base{g.seed, 5};
  PepsTensor t = [&] {
    if (string_bond) {
      const std::size_t d = *string_bond;
      if (d * d > phys) throw std::invalid_argument("peps: --string-bond d needs d^2 <= g");
      const auto sb = string_bond_tensor(n, d, ginibre_system(n, d, base.substream(0)),
                                         ginibre_system(n, d, base.substream(1)));
      return extend_physical(sb, phys, base.substream(2));
    }
    return random_peps_tensor(n, phys, base);
  }();
  const auto rep = peps_injective(t, side, g.tolerance());
  std::cout << "PEPS n = " << n << ", g = " << phys << ", L = " << side << ": "
            << (rep.injective ? "injective" : "not injective") << " (rank " << rep.gamma_rank << " / "
            << rep.full_rank_target << ")\n";
  if (rep.excluded_by_counting) std::cout << "  g^(L^2) < n^(4L): excluded by counting\n";
  write_json(g, {{"n", n},
                 {"g", phys},
                 {"L", side},
                 {"seed", g.seed},
                 {"injective", rep.injective},
                 {"gamma_rank", rep.gamma_rank},
                 {"full_rank_target", rep.full_rank_target},
                 {"excluded_by_counting", rep.excluded_by_counting}});
  return 0;
}

int cmd_experiment(lab::ExperimentConfig cfg, const lab::RunOptions& opt, const Globals& g) {
  cfg.seed = g.seed;
  if (g.tol) cfg.tolerance = g.tolerance();
  const auto rows = lab::run_experiment(cfg, opt);
  const auto summary = lab::summarize(cfg.kind, rows);
  std::size_t incomplete = 0;
  for (const auto& r : rows) {
    incomplete += (r.outcome == lab::Outcome::Timeout || r.outcome == lab::Outcome::BudgetExceeded ||
                   r.outcome == lab::Outcome::Failed);
  }
  if (!g.csv_out.empty()) lab::emit_csv(rows, g.csv_out);
  if (!g.plot_out.empty()) lab::emit_plot(rows, g.plot_out, std::string(lab::to_string(cfg.kind)) + ": observed vs n");
  if (g.csv_out.empty()) std::cout << lab::to_csv(rows);
  if (!g.json_out.empty()) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"n", r.n},
                     {"g", r.g},
                     {"trial", r.trial},
                     {"observed", lab::observed_field(r)},
                     {"lower_bound", r.lower_bound},
                     {"upper_bound_generic", r.upper_bound_generic},
                     {"wall_ms", r.wall_ms}});
    }
    write_json(g, {{"kind", lab::to_string(cfg.kind)}, {"seed", cfg.seed}, {"rows", arr}});
  }
  std::cerr << "summary: " << summary.rows << " rows, " << summary.violations << " bound violations, " << incomplete
            << " incomplete: " << (summary.ok() ? "ok" : "FAILED") << '\n';
  return incomplete == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generating-system lengths for matrix algebras, Lie algebras, channels and tensor networks"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  g.seed = default_seed();
  app.add_option("--seed", g.seed, "random seed (default: $GENLEN_SEED or 0)");
  app.add_option("--tol", g.tol, "relative rank threshold")->check(CLI::Range(0.0, 1.0));
  app.add_option("--json-out", g.json_out, "write a JSON report to this file");
  app.add_option("--csv-out", g.csv_out, "write experiment rows as CSV to this file");
  app.add_option("--plot-out", g.plot_out, "write an SVG scaling plot to this file");

  Source wie_src, len_src, lie_src, ch_src, mps_src;
  std::optional<std::size_t> wie_cap, lie_cap;

  auto* wie = app.add_subcommand("wie-length", "minimal k such that words of length exactly k span M_n");
  wie_src.attach(wie, "generating matrices");
  wie->add_option("--cap", wie_cap, "search cap (default (n^2+n) * length)")->check(CLI::PositiveNumber);

  auto* len = app.add_subcommand("length", "minimal l such that words of length <= l span M_n");
  len_src.attach(len, "generating matrices");

  auto* lie = app.add_subcommand("lie-length", "bracket depth at which nested commutators span su(n)");
  lie_src.attach(lie, "traceless skew-Hermitian matrices");
  lie->add_option("--cap", lie_cap, "depth cap (default n^2 - 1)")->check(CLI::PositiveNumber);

  std::size_t iters = 50;
  auto* ch = app.add_subcommand("channel", "primitivity data of a channel given by Kraus operators");
  ch_src.attach(ch, "Kraus operators");
  ch->add_flag("--normalize", ch_src.normalize, "rescale the Kraus operators to be trace preserving");
  ch->add_option("--iters", iters, "sweeps per restart of the positivity witness search")->check(CLI::PositiveNumber);

  auto* mps = app.add_subcommand("mps", "injectivity index of a translation-invariant MPS");
  mps_src.attach(mps, "MPS matrices");

  std::size_t peps_n = 2, peps_g = 4, peps_l = 2;
  std::optional<std::size_t> string_bond;
  auto* peps = app.add_subcommand("peps", "injectivity of a random PEPS on an L x L patch");
  peps->add_option("-n", peps_n, "bond dimension")->check(CLI::PositiveNumber);
  peps->add_option("-g", peps_g, "physical dimension")->check(CLI::PositiveNumber);
  peps->add_option("-L", peps_l, "patch side")->check(CLI::PositiveNumber);
  peps->add_option("--string-bond", string_bond, "build a string-bond tensor with d x d factor pairs")
      ->check(CLI::PositiveNumber);

  lab::ExperimentConfig cfg;
  lab::RunOptions opt;
  std::string kind = "wie-scaling";
  long budget_s = 60;
  auto* exp = app.add_subcommand("experiment", "seeded trials over an (n, g) grid");
  exp->add_option("--kind", kind, "wie-scaling | lie-scaling | channel-scaling | peps-generic | worst-case")
      ->check(CLI::IsMember({"wie-scaling", "lie-scaling", "channel-scaling", "peps-generic", "worst-case"}));
  exp->add_option("--n", cfg.n_range, "values of n")->required();
  exp->add_option("--g", cfg.g_range, "values of g")->required();
  exp->add_option("--trials", cfg.trials, "trials per (n, g)")->check(CLI::PositiveNumber);
  exp->add_option("--workers", opt.workers, "rows run concurrently")->check(CLI::PositiveNumber);
  exp->add_option("--row-budget", budget_s, "wall-clock seconds per row")->check(CLI::PositiveNumber);
  exp->add_flag("--timing", opt.record_timing, "record wall_ms (output is then not byte-reproducible)");

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* cmd : {wie, len, lie, ch, mps}) {
      if (!cmd->parsed()) continue;
      const Source& src = cmd == wie ? wie_src : cmd == len ? len_src : cmd == lie ? lie_src : cmd == ch ? ch_src : mps_src;
      if (!src.given()) throw std::invalid_argument(cmd->get_name() + ": one of --input or --random is required");
    }
    if (wie->parsed()) return cmd_length(wie_src, g, true, wie_cap);
    if (len->parsed()) return cmd_length(len_src, g, false, std::nullopt);
    if (lie->parsed()) return cmd_lie(lie_src, g, lie_cap);
    if (ch->parsed()) return cmd_channel(ch_src, g, iters);
    if (mps->parsed()) return cmd_mps(mps_src, g);
    if (peps->parsed()) return cmd_peps(peps_n, peps_g, peps_l, string_bond, g);
    if (exp->parsed()) {
      cfg.kind = lab::parse_kind(kind);
      opt.row_budget = std::chrono::seconds(budget_s);
      return cmd_experiment(cfg, opt, g);
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
