// fairdiv command-line driver: batch solves, hypergraph analysis, triangulation
// dumps, session replay and the HTTP session service.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "fairdiv/http_service.hpp"
#include "fairdiv/json_io.hpp"
#include "fairdiv/labeling.hpp"
#include "fairdiv/session.hpp"
#include "fairdiv/solver.hpp"

namespace {

using namespace fairdiv;

struct SolveOptions {
  int n = 2;
  int k = 1;
  int players = 0;
  std::string valuations;
  int mesh = 1;
  int factor = 2;
  int rounds = 3;
  double epsilon = 1e-6;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
};

void add_solve_options(CLI::App* cmd, SolveOptions& o) {
  cmd->add_option("--n", o.n, "pieces per cake / shifts per day")->required();
  cmd->add_option("--k", o.k, "pieces per player (cake) or number of cakes / days");
  cmd->add_option("--players", o.players, "number of players, ids 1..p (default: all ids in --valuations)");
  cmd->add_option("--valuations", o.valuations, "valuation file; random seeded profile when absent");
  cmd->add_option("--mesh", o.mesh, "initial mesh");
  cmd->add_option("--factor", o.factor, "mesh refinement factor");
  cmd->add_option("--rounds", o.rounds, "maximum refinement rounds");
  cmd->add_option("--epsilon", o.epsilon, "drift tolerance");
  cmd->add_option("--seed", o.seed, "seed for the random profile");
  cmd->add_option("--threads", o.threads, "scan threads (0 = all cores)");
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int run_solve(Mode mode, const SolveOptions& o) {
  SessionSpec spec;
  spec.framing = to_string(mode);
  spec.problem.mode = mode;
  spec.problem.n = o.n;
  spec.problem.k = o.k;
  spec.problem.mesh = {o.mesh, o.factor, o.rounds};
  spec.problem.epsilon = o.epsilon;
  spec.problem.threads = o.threads;
  spec.seed = o.seed;
  if (!o.valuations.empty()) spec.valuations = profile_from_json(read_json_file(o.valuations));
  if (o.players > 0) {
    for (int i = 1; i <= o.players; ++i) spec.problem.players.push_back(i);
  } else if (spec.valuations) {
    for (const auto& p : spec.valuations->players) spec.problem.players.push_back(p.id);
  } else {
    throw HypothesisError("--players is required without --valuations");
  }
  validate_spec(spec.problem);
  auto oracle = build_oracle(spec, nullptr);
  const auto report = refine_until_stable(spec.problem, *oracle);
  write_output(o.out, render_report(report));
  if (report.flags.unstable) spdlog::warn("no two consecutive rounds agreed; reporting the best round");
  return report.exit_code();
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("fairdiv");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("FAIRDIV_LOG")) spdlog::set_level(spdlog::level::from_str(level));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Fair division of cakes, multiple cakes and work shifts"};
  app.require_subcommand(1);

  SolveOptions cake_opts, cakes_opts, shifts_opts;
  cake_opts.k = 1;
  cakes_opts.k = 2;
  shifts_opts.k = 2;
  auto* cake = app.add_subcommand("cake", "k pieces of one cake per player");
  add_solve_options(cake, cake_opts);
  auto* cakes = app.add_subcommand("cakes", "one piece from each of k cakes per player");
  add_solve_options(cakes, cakes_opts);
  auto* shifts = app.add_subcommand("shifts", "cover all shifts of k days");
  add_solve_options(shifts, shifts_opts);

  std::string hyper_file;
  auto* hyper = app.add_subcommand("hyper", "matching and cover numbers of a hypergraph file");
  hyper->add_option("file", hyper_file, "edge-list JSON")->required();

  int tri_n = 3, tri_k = 1, tri_mesh = 1;
  bool tri_product = false, tri_complete = false;
  std::string tri_label;
  std::uint64_t tri_seed = 0;
  auto* tri = app.add_subcommand("triangulate", "dump a triangulation as JSON");
  tri->add_option("--n", tri_n, "pieces")->required();
  tri->add_option("--k", tri_k, "factors (product) or pieces per player (cake labels)");
  tri->add_option("--mesh", tri_mesh, "mesh");
  tri->add_flag("--product", tri_product, "triangulate the product of k simplices");
  tri->add_flag("--complete", tri_complete, "barycentric subdivision with owners");
  tri->add_option("--label", tri_label, "attach labels from a random profile: cake, cakes or shifts")
      ->check(CLI::IsMember({"cake", "cakes", "shifts"}));
  tri->add_option("--seed", tri_seed, "profile seed for --label");
  std::string tri_out;
  tri->add_option("--out", tri_out, "output file");

  std::string replay_file, replay_out;
  auto* replay = app.add_subcommand("replay", "re-run a recorded session log");
  replay->add_option("file", replay_file, "session log (.jsonl)")->required();
  replay->add_option("--out", replay_out, "output file");

  int port = 8080;
  std::string host = "127.0.0.1";
  std::string log_dir;
  auto* serve = app.add_subcommand("serve", "run the HTTP session service");
  serve->add_option("--port", port, "port");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--log-dir", log_dir, "append one answer log per session here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cake) return run_solve(Mode::single_cake, cake_opts);
    if (*cakes) return run_solve(Mode::multi_cakes, cakes_opts);
    if (*shifts) return run_solve(Mode::shift_cover, shifts_opts);
    if (*hyper) {
      const auto h = hypergraph_from_json(read_json_file(hyper_file));
      std::cout << hypergraph_analysis(h).dump(2) << '\n';
      return 0;
    }
    if (*tri) {
      if (!tri_label.empty()) {
        ProblemSpec spec;
        spec.mode = parse_mode(tri_label);
        spec.n = tri_n;
        spec.k = tri_k;
        spec.players.resize(static_cast<std::size_t>(spec.owner_count()));
        for (std::size_t i = 0; i < spec.players.size(); ++i) spec.players[i] = static_cast<PlayerId>(i + 1);
        const auto t = barycentric_complete(base_triangulation(spec, tri_mesh));
        const auto dup = duplicate_players(spec);
        SimulatedOracle oracle(random_profile(spec.players, spec.mode == Mode::single_cake ? 1 : spec.k, tri_seed));
        std::vector<Selection> labels;
        if (spec.mode == Mode::single_cake) {
          labels = build_subset_labeling(t, oracle, dup.owner_to_player, spec.k).labels;
        } else {
          const auto flavor = spec.mode == Mode::multi_cakes ? TupleFlavor::supportwise : TupleFlavor::factorwise_dual;
          labels = build_tuple_labeling(t, oracle, dup.owner_to_player, flavor).labels;
        }
        write_output(tri_out, triangulation_to_json(t, &labels).dump() + "\n");
        return 0;
      }
      Triangulation t = tri_product || tri_k > 1 ? product_triangulation(tri_n, tri_k, tri_mesh)
                                                 : grid_triangulation(tri_n, tri_mesh);
      if (tri_complete) t = barycentric_complete(t);
      write_output(tri_out, triangulation_to_json(t).dump() + "\n");
      return 0;
    }
    if (*replay) {
      const auto [spec, answers] = read_session_log(replay_file);
      const auto report = replay_session(spec, answers);
      write_output(replay_out, render_report(report));
      return report.exit_code();
    }
    if (*serve) {
      std::optional<std::filesystem::path> dir;
      if (!log_dir.empty()) {
        dir = log_dir;
        std::filesystem::create_directories(*dir);
      }
      SessionRegistry registry(dir);
      HttpService service(registry);
      if (!service.listen(host, port)) {
        spdlog::error("cannot listen on {}:{}", host, port);
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
