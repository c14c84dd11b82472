// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "exact.hpp"
#include "fairdiv/session.hpp"
#include "generators.hpp"

using namespace fairdiv;
using oracle::BigRational;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string failure;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) failure = what;
    pass = pass && ok;
  }
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.failure = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s %-28s %s (%.1f s)%s%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs,
              o.pass ? "" : " -- ", o.failure.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

ProblemSpec make_spec(Mode mode, int n, int k, int p, int mesh, int rounds) {
  ProblemSpec s;
  s.mode = mode;
  s.n = n;
  s.k = k;
  for (int i = 1; i <= p; ++i) s.players.push_back(i);
  s.mesh = MeshSchedule{mesh, 2, rounds};
  return s;
}

// The certificate's labels as a hypergraph on the ground set.
Hypergraph label_hypergraph(const CertificateView& c, int n, int factors, bool tuples) {
  std::vector<Subset> edges;
  for (const auto& l : c.labels) {
    Subset e;
    if (tuples) {
      for (int f = 0; f < factors; ++f) e.push_back(f * n + l[static_cast<std::size_t>(f)]);
    } else {
      e = l;
    }
    edges.push_back(e);
  }
  std::vector<int> parts;
  if (tuples)
    for (int f = 0; f < factors; ++f)
      for (int i = 0; i < n; ++i) parts.push_back(f);
  return Hypergraph(tuples ? n * factors : n, edges, parts);
}

// Independent exact check that the weights sum to 1 at every ground vertex.
bool weights_perfect(const Hypergraph& h, const std::vector<Rational>& w) {
  if (w.size() != h.edges.size()) return false;
  std::vector<BigRational> sum(static_cast<std::size_t>(h.vertex_count));
  for (std::size_t e = 0; e < w.size(); ++e) {
    if (w[e] < 0) return false;
    for (int v : h.edges[e]) sum[static_cast<std::size_t>(v)] += oracle::big(w[e]);
  }
  return std::all_of(sum.begin(), sum.end(), [](const BigRational& s) { return s == 1; });
}

bool disjoint_sets(const std::vector<Assignment>& a) {
  std::set<int> used;
  for (const auto& x : a)
    for (int p : x.selection)
      if (!used.insert(p).second) return false;
  return true;
}

bool disjoint_tuples(const std::vector<Assignment>& a, int k) {
  std::set<std::pair<int, int>> used;
  for (const auto& x : a) {
    if (static_cast<int>(x.selection.size()) != k) return false;
    for (int f = 0; f < k; ++f)
      if (!used.emplace(f, x.selection[static_cast<std::size_t>(f)]).second) return false;
  }
  return true;
}

bool distinct_players(const std::vector<Assignment>& a) {
  std::set<PlayerId> seen;
  for (const auto& x : a)
    if (!seen.insert(x.player).second) return false;
  return true;
}

bool all_shifts_covered(const std::vector<Assignment>& a, int n, int k) {
  for (int f = 0; f < k; ++f) {
    for (int s = 0; s < n; ++s) {
      bool hit = false;
      for (const auto& x : a) hit = hit || (static_cast<int>(x.selection.size()) == k && x.selection[static_cast<std::size_t>(f)] == s);
      if (!hit) return false;
    }
  }
  return true;
}

// Minimum fractional edge cover of h (= tau* of the dual) by vertex enumeration.
BigRational fractional_edge_cover(const Hypergraph& h) {
  const std::size_t m = h.edges.size();
  std::vector<std::vector<BigRational>> a;
  std::vector<BigRational> b;
  for (int v = 0; v < h.vertex_count; ++v) {
    std::vector<BigRational> row(m);
    for (std::size_t e = 0; e < m; ++e)
      if (std::binary_search(h.edges[e].begin(), h.edges[e].end(), v)) row[e] = -1;
    a.push_back(row);
    b.emplace_back(-1);
  }
  auto best = oracle::brute_force_lp_max(a, b, std::vector<BigRational>(m, BigRational(-1)));
  if (!best) throw std::runtime_error("fractional edge cover LP infeasible");
  return -*best;
}

Outcome single_cake_bound() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  int runs = 0, min_achieved = 1 << 20;
  for (int mesh : {1, 2}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto spec = make_spec(Mode::single_cake, 4, 2, 4, mesh, 5);
      SimulatedOracle oracle(random_profile(spec.players, 1, seed));
      auto r = refine_until_stable(spec, oracle);
      ++runs;
      const std::string tag = "m=" + std::to_string(mesh) + " seed=" + std::to_string(seed);
      o.require(!r.flags.unstable, tag + " unstable");
      for (const auto& round : r.trace) {
        o.require(round.achieved >= 2, tag + " round " + std::to_string(round.round) + " below bound");
        min_achieved = std::min(min_achieved, round.achieved);
      }
      o.require(r.bound.value == 2 && r.bound.form == "divisible", tag + " wrong bound");
      o.require(static_cast<int>(r.satisfied.size()) == r.achieved, tag + " achieved mismatch");
      o.require(disjoint_sets(r.satisfied), tag + " selections overlap");
      o.require(distinct_players(r.satisfied), tag + " player repeated");
      for (const auto& a : r.satisfied) o.require(a.selection.size() <= 2, tag + " selection too large");
      o.require(weights_perfect(label_hypergraph(r.certificate, 4, 1, false), r.certificate.weights), tag + " certificate");
    }
  }
  const double secs = elapsed_since(start);
  o.require(secs < 60, "runtime over 60 s");
  o.detail = std::to_string(runs) + " runs, min achieved per round " + std::to_string(min_achieved) + " >= 2";
  return o;
}

Outcome multi_cake_bound() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  int runs = 0, min_achieved = 1 << 20;
  for (int mesh : {1, 2}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto spec = make_spec(Mode::multi_cakes, 3, 2, 5, mesh, mesh == 1 ? 4 : 3);
      SimulatedOracle oracle(random_profile(spec.players, 2, seed));
      auto r = refine_until_stable(spec, oracle);
      ++runs;
      const std::string tag = "m=" + std::to_string(mesh) + " seed=" + std::to_string(seed);
      o.require(!r.flags.unstable, tag + " unstable");
      for (const auto& round : r.trace) {
        o.require(round.achieved >= 3, tag + " round below bound");
        min_achieved = std::min(min_achieved, round.achieved);
      }
      o.require(static_cast<int>(r.satisfied.size()) >= 3, tag + " fewer than 3 satisfied");
      o.require(disjoint_tuples(r.satisfied, 2), tag + " tuples overlap");
      o.require(distinct_players(r.satisfied), tag + " player repeated");
      o.require(weights_perfect(label_hypergraph(r.certificate, 3, 2, true), r.certificate.weights), tag + " certificate");
    }
  }
  const double secs = elapsed_since(start);
  o.require(secs < 120, "runtime over 120 s");
  o.detail = std::to_string(runs) + " runs, min achieved per round " + std::to_string(min_achieved) + " >= 3";
  return o;
}

Outcome shift_cover_two() {
  Outcome o;
  int runs = 0, gallai = 0;
  for (int n : {2, 3}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto spec = make_spec(Mode::shift_cover, n, 2, 2 * (n - 1) + 1, 1, 4);
      SimulatedOracle oracle(random_profile(spec.players, 2, seed));
      auto r = refine_until_stable(spec, oracle);
      ++runs;
      const std::string tag = "n=" + std::to_string(n) + " seed=" + std::to_string(seed);
      o.require(!r.flags.unstable, tag + " unstable");
      o.require(static_cast<int>(r.cover.size()) <= n, tag + " cover larger than n");
      o.require(all_shifts_covered(r.cover, n, 2), tag + " shift uncovered");
      o.require(distinct_players(r.cover), tag + " employee repeated");
      auto h = label_hypergraph(r.certificate, n, 2, true);
      o.require(weights_perfect(h, r.certificate.weights), tag + " certificate");
      const auto tau = oracle::exhaustive_edge_cover(h);
      const auto tau_star = fractional_edge_cover(h);
      o.require(BigRational(tau) == tau_star, tag + " Gallai equality fails");
      o.require(r.cover.size() == tau, tag + " cover not minimum");
      gallai += BigRational(tau) == tau_star ? 1 : 0;
    }
  }
  o.detail = std::to_string(runs) + " runs, cover <= n, tau = tau* on " + std::to_string(gallai);
  return o;
}

Outcome shift_cover_general() {
  Outcome o;
  int runs = 0, largest = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto spec = make_spec(Mode::shift_cover, 2, 3, 4, 1, 4);
    SimulatedOracle oracle(random_profile(spec.players, 3, seed));
    auto r = refine_until_stable(spec, oracle);
    ++runs;
    const std::string tag = "seed=" + std::to_string(seed);
    o.require(!r.flags.unstable, tag + " unstable");
    o.require(r.cover.size() <= 4, tag + " cover above floor(2(1+ln 3))");
    o.require(all_shifts_covered(r.cover, 2, 3), tag + " shift uncovered");
    auto h = label_hypergraph(r.certificate, 2, 3, true);
    o.require(weights_perfect(h, r.certificate.weights), tag + " certificate");
    const auto tau = oracle::exhaustive_edge_cover(h);
    const auto tau_star = fractional_edge_cover(h);
    o.require(tau <= r.cover.size(), tag + " cover below the exhaustive minimum");
    const double bound = (1 + std::log(3.0)) * tau_star.convert_to<double>();
    o.require(static_cast<double>(r.cover.size()) <= bound + 1e-12, tag + " greedy above (1+ln k) tau*");
    o.require(r.tau_star && oracle::big(*r.tau_star) == tau_star, tag + " reported tau* differs");
    largest = std::max(largest, static_cast<int>(r.cover.size()));
  }
  o.detail = std::to_string(runs) + " runs, largest cover " + std::to_string(largest) + " <= 4";
  return o;
}

Outcome hypergraph_kernel() {
  Outcome o;
  Hypergraph example(6, {{0, 3}, {1, 3}, {0, 4}, {1, 4}, {2, 5}}, {0, 0, 0, 1, 1, 1});
  auto w = perfect_fractional_matching(example);
  o.require(w && w->weights == std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2), 1},
            "worked example weights");

  gen::Rng rng(2718);
  int balanced = 0;
  while (balanced < 50) {
    const int n = 2 + balanced % 2;
    auto h = gen::balanced_uniform(rng, n, rng.range(1, 3), rng.range(1, 3), rng.range(0, 4));
    auto nu_star = fractional_matching_number(h);
    // y = 1/n on every vertex is a fractional cover of value |V|/n.
    o.require(nu_star.value == Rational(h.vertex_count, n), "balanced uniform equality");
    o.require(verify_fractional_matching(h, nu_star.weights, false), "balanced uniform certificate");
    ++balanced;
  }

  int furedi = 0, sandwich = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto h = gen::hypergraph(rng, rng.range(3, 9), rng.range(1, 12), 3);
    const auto nu = oracle::exhaustive_nu(h);
    const auto tau = oracle::exhaustive_tau(h);
    auto m = fractional_matching_number(h);
    auto c = fractional_cover_number(h);
    // Optimality: both feasible, equal objective values.
    std::vector<BigRational> load(static_cast<std::size_t>(h.vertex_count));
    BigRational msum = 0, csum = 0;
    bool feasible = true;
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
      feasible = feasible && m.weights[e] >= 0;
      msum += oracle::big(m.weights[e]);
      BigRational edge_cover = 0;
      for (int v : h.edges[e]) {
        load[static_cast<std::size_t>(v)] += oracle::big(m.weights[e]);
        edge_cover += oracle::big(c.weights[static_cast<std::size_t>(v)]);
      }
      feasible = feasible && edge_cover >= 1;
    }
    for (const auto& l : load) feasible = feasible && l <= 1;
    for (const auto& y : c.weights) {
      feasible = feasible && y >= 0;
      csum += oracle::big(y);
    }
    o.require(feasible, "LP certificates infeasible");
    o.require(msum == csum && msum == oracle::big(m.value), "LP certificates disagree");
    const BigRational nu_star = msum;
    const int rank = h.rank();
    const BigRational denom = BigRational(rank - 1) + BigRational(1, rank);
    o.require(BigRational(nu) >= nu_star / denom, "Furedi inequality");
    furedi += BigRational(nu) >= nu_star / denom ? 1 : 0;
    const bool ok = BigRational(nu) <= nu_star && nu_star <= BigRational(tau);
    o.require(ok, "duality sandwich");
    o.require(max_matching(h).size() == nu, "max_matching differs from exhaustive nu");
    sandwich += ok ? 1 : 0;
  }
  o.detail = "example exact, balanced uniform " + std::to_string(balanced) + "/50, Furedi " + std::to_string(furedi) +
             "/50, sandwich " + std::to_string(sandwich) + "/50";
  return o;
}

Outcome labeling() {
  Outcome o;
  gen::Rng rng(4242);
  std::size_t vertices = 0;
  int configs = 0;
  for (int n = 2; n <= 4; ++n) {
    for (int k = 1; k <= 3; ++k) {
      for (int m = 1; m <= 2; ++m) {
        const std::string tag = "(" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(m) + ")";
        auto t = product_triangulation(n, k, m);
        auto dual = gen::dual_labeling(rng, t);
        o.require(validate_tuple_labeling(dual, t).pass, tag + " generator broke the dual condition");
        auto s = to_equivalent_sperner(dual, t);
        o.require(validate_sperner(s, t).pass, tag + " not Sperner");
        for (std::size_t v = 0; v < t.vertex_count(); ++v) {
          for (int f = 0; f < k; ++f) {
            const auto fi = static_cast<std::size_t>(f);
            const bool full = static_cast<int>(t.factor_support(v, f).size()) == n;
            if (full) o.require(s.labels[v][fi] == dual.labels[v][fi], tag + " changed a full-support factor");
          }
        }
        vertices += t.vertex_count();
        ++configs;
      }
    }
  }
  o.require(vertices >= 1000, "fewer than 1000 randomized vertices");
  o.detail = std::to_string(configs) + " configurations, " + std::to_string(vertices) + " randomized vertices";
  return o;
}

bool facets_conform(const Triangulation& t) {
  std::map<std::vector<std::uint32_t>, int> count;
  for (std::size_t c = 0; c < t.cell_count(); ++c) {
    auto cell = t.cell(c);
    for (std::size_t drop = 0; drop < cell.size(); ++drop) {
      std::vector<std::uint32_t> f;
      for (std::size_t i = 0; i < cell.size(); ++i)
        if (i != drop) f.push_back(cell[i]);
      ++count[f];
    }
  }
  for (const auto& [f, c] : count) {
    bool boundary = false;
    for (std::size_t x = 0; x < t.coords_per_vertex() && !boundary; ++x)
      boundary = std::all_of(f.begin(), f.end(), [&](std::uint32_t v) { return t.numerators(v)[x] == 0; });
    if (c != (boundary ? 1 : 2)) return false;
  }
  return true;
}

Triangulation first_cell_only(const Triangulation& t) {
  std::vector<std::int64_t> nums;
  std::vector<std::uint32_t> cell;
  auto c = t.cell(0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto x = t.numerators(c[i]);
    nums.insert(nums.end(), x.begin(), x.end());
    cell.push_back(static_cast<std::uint32_t>(i));
  }
  return Triangulation(t.ambient(), t.mesh(), t.denominator(), nums, cell);
}

// Cells containing the point, with a bounding-box prefilter before the exact solve.
int containing_cells(const Triangulation& t, const std::vector<BigRational>& p, bool& strictly_inside) {
  std::vector<double> pd;
  for (const auto& x : p) pd.push_back(x.convert_to<double>());
  int count = 0;
  strictly_inside = true;
  for (std::size_t c = 0; c < t.cell_count(); ++c) {
    const auto pts = oracle::projected_cell(t, c);
    bool maybe = true;
    for (std::size_t i = 0; i < pd.size() && maybe; ++i) {
      double lo = 1e300, hi = -1e300;
      for (const auto& v : pts) {
        lo = std::min(lo, static_cast<double>(v[i]));
        hi = std::max(hi, static_cast<double>(v[i]));
      }
      const double scaled = pd[i] * static_cast<double>(t.denominator());
      maybe = scaled >= lo - 1e-9 && scaled <= hi + 1e-9;
    }
    if (!maybe) continue;
    auto lambda = oracle::barycentric(t, c, p);
    if (!lambda) continue;
    if (std::all_of(lambda->begin(), lambda->end(), [](const BigRational& x) { return x >= 0; })) {
      ++count;
      strictly_inside = strictly_inside && std::all_of(lambda->begin(), lambda->end(), [](const BigRational& x) { return x > 0; });
    }
  }
  return count;
}

Outcome geometry() {
  Outcome o;
  int count_checks = 0, volume_checks = 0, complete_checks = 0, points = 0;
  for (int n = 2; n <= 4; ++n) {
    for (int m = 1; m <= 2; ++m) {
      auto g = grid_triangulation(n, m);
      std::uint64_t expect = 1;
      for (int i = 0; i < n - 1; ++i) expect *= static_cast<std::uint64_t>(m);
      o.require(g.cell_count() == expect, "grid count");
      o.require(oracle::total_volume(g) == oracle::polytope_volume(n, 1), "grid volume");
      ++count_checks;
      ++volume_checks;
      for (int k = 1; k <= 3; ++k) {
        const std::string tag = "(" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(m) + ")";
        auto t = product_triangulation(n, k, m);
        const int d = k * (n - 1);
        std::uint64_t shuffles = factorial(d);
        for (int i = 0; i < k; ++i) shuffles /= factorial(n - 1);
        std::uint64_t cells = shuffles;
        for (int i = 0; i < d; ++i) cells *= static_cast<std::uint64_t>(m);
        o.require(t.cell_count() == cells, tag + " product count");
        ++count_checks;
        o.require(oracle::total_volume(t) == oracle::polytope_volume(n, k), tag + " product volume");
        ++volume_checks;
        if (t.cell_count() <= 20000) o.require(facets_conform(t), tag + " facets");

        auto one = barycentric_complete(first_cell_only(t));
        o.require(one.cell_count() == factorial(d + 1), tag + " barycentric factor");
        o.require(validate_complete(one).pass, tag + " single-cell completeness");
        ++count_checks;
        ++complete_checks;
        if (t.cell_count() * factorial(d + 1) <= 200000) {
          auto b = barycentric_complete(t);
          o.require(b.cell_count() == t.cell_count() * factorial(d + 1), tag + " barycentric count");
          o.require(validate_complete(b).pass, tag + " completeness");
          o.require(oracle::total_volume(b) == oracle::polytope_volume(n, k), tag + " barycentric volume");
          if (b.cell_count() <= 20000) o.require(facets_conform(b), tag + " barycentric facets");
          ++complete_checks;
          ++volume_checks;
        }
      }
    }
  }

  gen::Rng rng(1618);
  struct Case {
    Triangulation t;
    int n, k;
  };
  std::vector<Case> cases{{barycentric_complete(product_triangulation(3, 2, 1)), 3, 2},
                          {product_triangulation(4, 3, 1), 4, 3},
                          {barycentric_complete(grid_triangulation(4, 2)), 4, 1},
                          {barycentric_complete(product_triangulation(2, 3, 2)), 2, 3}};
  for (auto& c : cases) {
    for (int i = 0; i < 25; ++i) {
      auto p = gen::interior_point(rng, c.n, c.k);
      bool strict = false;
      o.require(containing_cells(c.t, p, strict) == 1, "point not in exactly one cell");
      o.require(strict, "sampled point on a cell boundary");
      ++points;
    }
  }

  int decays = 0;
  for (int n = 2; n <= 4; ++n) {
    for (int m = 1; m <= 2; ++m) {
      auto diameter = [](const Triangulation& t) {
        BigRational best = 0;
        for (std::size_t c = 0; c < t.cell_count(); ++c) best = std::max(best, oracle::cell_diameter(t, c));
        return best;
      };
      const bool ok = diameter(barycentric_complete(grid_triangulation(n, 2 * m))) <
                      diameter(barycentric_complete(grid_triangulation(n, m)));
      o.require(ok, "mesh decay");
      decays += ok ? 1 : 0;
    }
  }
  o.detail = std::to_string(count_checks) + " counts, " + std::to_string(volume_checks) + " volumes, " +
             std::to_string(complete_checks) + " completeness, " + std::to_string(points) + " points, " +
             std::to_string(decays) + " decays";
  return o;
}

ValuationProfile human_profile(const SessionSpec& spec, std::uint64_t seed) {
  const int factors = spec.problem.mode == Mode::single_cake ? 1 : spec.problem.k;
  return random_profile(std::vector<PlayerId>(spec.interactive.begin(), spec.interactive.end()), factors, seed);
}

Outcome determinism_and_replay() {
  Outcome o;
  int identical = 0;
  const std::vector<ProblemSpec> specs{make_spec(Mode::single_cake, 4, 2, 4, 2, 4), make_spec(Mode::multi_cakes, 3, 2, 5, 1, 3),
                                       make_spec(Mode::shift_cover, 3, 2, 6, 1, 3), make_spec(Mode::shift_cover, 2, 3, 4, 1, 3)};
  for (const auto& base : specs) {
    for (std::uint64_t seed : {7u, 19u}) {
      const int factors = base.mode == Mode::single_cake ? 1 : base.k;
      const auto profile = random_profile(base.players, factors, seed);
      std::string first;
      for (unsigned threads : {1u, 1u, 4u}) {
        auto spec = base;
        spec.threads = threads;
        SimulatedOracle oracle(profile);
        const auto text = render_report(refine_until_stable(spec, oracle));
        if (first.empty()) first = text;
        o.require(text == first, std::string("report differs for mode ") + to_string(base.mode));
        identical += text == first ? 1 : 0;
      }
    }
  }

  const auto dir = std::filesystem::temp_directory_path() / ("fairdiv_acceptance_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  int replays = 0;
  {
    SessionRegistry registry(dir);
    const std::vector<json> bodies{
        {{"mode", "cake"}, {"n", 4}, {"k", 2}, {"players", 4}, {"interactive", {1, 3}}, {"seed", 5}, {"mesh", 1}, {"rounds", 3}},
        {{"mode", "cakes"}, {"n", 3}, {"k", 2}, {"players", 5}, {"interactive", {2}}, {"seed", 6}, {"mesh", 1}, {"rounds", 3}},
        {{"mode", "rent"}, {"n", 3}, {"players", 5}, {"interactive", {1}}, {"seed", 7}, {"mesh", 1}, {"rounds", 3}}};
    for (const auto& body : bodies) {
      auto spec = session_spec_from_json(body);
      auto session = registry.create(spec);
      const auto human = human_profile(spec, 1000 + replays);
      for (;;) {
        auto snap = session->wait(std::chrono::milliseconds(2000));
        if (snap.state == SessionState::done || snap.state == SessionState::failed) break;
        if (snap.pending) session->submit(snap.pending->id, simulated_answer(human, *snap.pending));
      }
      auto live = session->report();
      o.require(live.has_value(), "session " + session->id() + " did not finish");
      if (!live) continue;
      auto [logged_spec, answers] = read_session_log(dir / (session->id() + ".jsonl"));
      const bool same = render_report(replay_session(logged_spec, answers)) == render_report(*live);
      o.require(same, "replay of " + session->id() + " differs");
      replays += same ? 1 : 0;
    }
  }
  std::filesystem::remove_all(dir);
  o.detail = std::to_string(identical) + " identical reruns, " + std::to_string(replays) + "/3 session replays";
  return o;
}

}  // namespace

int main() {
  report("single-cake-bound", single_cake_bound);
  report("multi-cake-bound", multi_cake_bound);
  report("shift-cover-two-shifts", shift_cover_two);
  report("shift-cover-general", shift_cover_general);
  report("hypergraph-kernel", hypergraph_kernel);
  report("labeling-sperner", labeling);
  report("geometry", geometry);
  report("determinism-replay", determinism_and_replay);
  std::printf("%s: %d failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
