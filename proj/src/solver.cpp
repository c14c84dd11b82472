#include "fairdiv/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

namespace fairdiv {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::single_cake: return "cake";
    case Mode::multi_cakes: return "cakes";
    case Mode::shift_cover: return "shifts";
  }
  return "unknown";
}

Mode parse_mode(const std::string& text) {
  if (text == "cake" || text == "single-cake" || text == "single_cake") return Mode::single_cake;
  if (text == "cakes" || text == "multi-cakes" || text == "multi_cakes") return Mode::multi_cakes;
  if (text == "shifts" || text == "shift-cover" || text == "shift_cover" || text == "rent") return Mode::shift_cover;
  throw std::invalid_argument("unknown mode '" + text + "'");
}

int ProblemSpec::owner_count() const { return mode == Mode::single_cake ? n : k * (n - 1) + 1; }

QueryKind ProblemSpec::query_kind() const {
  switch (mode) {
    case Mode::single_cake: return QueryKind::cake_subset;
    case Mode::multi_cakes: return QueryKind::multicake_tuple;
    case Mode::shift_cover: return QueryKind::shift_tuple;
  }
  return QueryKind::cake_subset;
}

void validate_spec(const ProblemSpec& spec) {
  if (spec.n < 1) throw HypothesisError("n must be at least 1");
  if (spec.k < 1) throw HypothesisError("k must be at least 1");
  if (spec.mode == Mode::single_cake && spec.k > spec.n) throw HypothesisError("k cannot exceed n for a single cake");
  if (spec.players.empty()) throw HypothesisError("at least one player is required");
  if (std::set<PlayerId>(spec.players.begin(), spec.players.end()).size() != spec.players.size()) {
    throw HypothesisError("player ids must be distinct");
  }
  if (spec.mesh.initial < 1) throw HypothesisError("mesh must be at least 1");
  if (spec.mesh.factor < 2) throw HypothesisError("refinement factor must be at least 2");
  if (spec.mesh.max_rounds < 1) throw HypothesisError("rounds must be at least 1");
  if (!(spec.epsilon >= 0)) throw HypothesisError("epsilon must be nonnegative");
  const int p = spec.p();
  const int owners = spec.owner_count();
  switch (spec.mode) {
    case Mode::single_cake:
      if (p > spec.n) throw HypothesisError("single-cake mode needs p <= n (p=" + std::to_string(p) + ")");
      break;
    case Mode::multi_cakes:
      if (p > owners) throw HypothesisError("multi-cake mode needs p <= k(n-1)+1 = " + std::to_string(owners));
      break;
    case Mode::shift_cover:
      if (p < owners) throw HypothesisError("shift mode needs p >= k(n-1)+1 = " + std::to_string(owners));
      break;
  }
}

PlayerDuplicationMap duplicate_players(const ProblemSpec& spec) {
  validate_spec(spec);
  const int owners = spec.owner_count();
  const int p = spec.p();
  PlayerDuplicationMap map;
  for (int o = 0; o < owners; ++o) map.owner_to_player.push_back(spec.players[static_cast<std::size_t>(o % p)]);
  map.copies_bound = spec.mode == Mode::shift_cover ? 1 : (owners + p - 1) / p;
  return map;
}

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

GuaranteedBound guaranteed_bound(const ProblemSpec& spec) {
  const int p = spec.p();
  const int k = spec.k;
  switch (spec.mode) {
    case Mode::single_cake:
    case Mode::multi_cakes: {
      int denom = spec.mode == Mode::single_cake || k == 1 ? k * k - k + 1 : k * (k - 1);
      const bool divides = spec.owner_count() % p == 0;
      return {divides ? ceil_div(p, denom) : ceil_div(p, 2 * denom), divides ? "divisible" : "halved", false};
    }
    case Mode::shift_cover:
      if (k == 2) return {spec.n, "exact", true};
      return {static_cast<int>(std::floor(static_cast<long double>(spec.n) * (1.0L + std::log(static_cast<long double>(k))))),
              "logarithmic", true};
  }
  return {};
}

Triangulation base_triangulation(const ProblemSpec& spec, int mesh) {
  if (spec.mode == Mode::single_cake) return grid_triangulation(spec.n, mesh);
  return product_triangulation(spec.n, spec.k, mesh);
}

ScanOrder scan_order(const Triangulation& t, const std::optional<PolytopePoint>& focus) {
  ScanOrder out;
  out.cells.resize(t.cell_count());
  for (std::size_t c = 0; c < out.cells.size(); ++c) out.cells[c] = c;
  if (!focus) return out;
  const std::size_t dims = t.coords_per_vertex();
  std::vector<double> target;
  for (const auto& f : focus->factors())
    for (const auto& x : f.coords()) target.push_back(x.to_double());
  if (target.size() != dims) throw std::invalid_argument("focus point does not match the triangulation");
  const double scale = static_cast<double>(t.denominator()) * static_cast<double>(t.cell_size());
  std::vector<double> dist(t.cell_count());
  std::vector<std::int64_t> sum(dims);
  for (std::size_t c = 0; c < dist.size(); ++c) {
    std::fill(sum.begin(), sum.end(), 0);
    for (auto v : t.cell(c)) {
      auto nums = t.numerators(v);
      for (std::size_t i = 0; i < dims; ++i) sum[i] += nums[i];
    }
    double d = 0;
    for (std::size_t i = 0; i < dims; ++i) d = std::max(d, std::abs(static_cast<double>(sum[i]) / scale - target[i]));
    dist[c] = d;
  }
  std::stable_sort(out.cells.begin(), out.cells.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  out.distance.reserve(dist.size());
  for (auto c : out.cells) out.distance.push_back(dist[c]);
  return out;
}

namespace {

struct CellTest {
  std::optional<BalancedCellCertificate> cert;
  bool uncovered = false;
};

CellTest test_cell(const Triangulation& t, LabelSource& labels, std::size_t c, const std::vector<int>& part) {
  const int ground = labels.ground_size();
  auto cell = t.cell(c);
  std::vector<Subset> edges;
  edges.reserve(cell.size());
  std::vector<char> hit(static_cast<std::size_t>(ground), 0);
  for (auto v : cell) {
    Subset e = labels.edge(v);
    for (int x : e) hit[static_cast<std::size_t>(x)] = 1;
    edges.push_back(std::move(e));
  }
  CellTest out;
  if (std::find(hit.begin(), hit.end(), 0) != hit.end()) {
    out.uncovered = true;
    return out;
  }
  Hypergraph h(ground, std::move(edges), part);
  auto matching = perfect_fractional_matching(h);
  if (!matching) return out;
  BalancedCellCertificate cert;
  cert.cell = c;
  cert.vertices.assign(cell.begin(), cell.end());
  for (auto v : cell) cert.labels.push_back(labels.label(v));
  cert.weights = std::move(matching->weights);
  cert.hypergraph = std::move(h);
  out.cert = std::move(cert);
  return out;
}

}  // namespace

BalancedCellCertificate find_balanced_cell(const Triangulation& t, LabelSource& labels, const ScanOptions& options) {
  const auto scan = scan_order(t, options.focus);
  const auto& order = scan.cells;
  const auto part = labels.partition();
  const bool selective = options.accept && !scan.distance.empty();
  const unsigned threads = labels.concurrent() && !selective ? std::max(1u, options.threads) : 1u;
  std::atomic<std::size_t> uncovered{0};

  if (threads == 1) {
    std::optional<BalancedCellCertificate> first;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      if (first && scan.distance[pos] > options.radius) break;
      auto r = test_cell(t, labels, order[pos], part);
      if (r.uncovered) ++uncovered;
      if (!r.cert) continue;
      r.cert->cells_scanned = pos + 1;
      if (!selective || scan.distance[pos] > options.radius || options.accept(*r.cert)) return std::move(*r.cert);
      if (!first) first = std::move(*r.cert);
    }
    if (first) return std::move(*first);
  } else {
    constexpr std::size_t chunk = 256;
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{none};
    std::mutex mutex;
    std::map<std::size_t, BalancedCellCertificate> found;
    std::exception_ptr failure;
    auto worker = [&] {
      try {
        while (true) {
          const std::size_t start = next.fetch_add(chunk);
          if (start >= order.size() || start >= best.load()) return;
          const std::size_t stop = std::min(order.size(), start + chunk);
          for (std::size_t pos = start; pos < stop && pos < best.load(); ++pos) {
            auto r = test_cell(t, labels, order[pos], part);
            if (r.uncovered) ++uncovered;
            if (!r.cert) continue;
            r.cert->cells_scanned = pos + 1;
            std::lock_guard lock(mutex);
            found.emplace(pos, std::move(*r.cert));
            std::size_t cur = best.load();
            while (pos < cur && !best.compare_exchange_weak(cur, pos)) {
            }
            break;
          }
        }
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        best.store(0);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    if (best.load() != none) return std::move(found.at(best.load()));
  }
  throw ExhaustionError("no balanced cell among " + std::to_string(order.size()) + " cells (" +
                        std::to_string(uncovered.load()) +
                        " left a ground element unlabeled); the labeling breaks its boundary rule");
}

bool verify_certificate(const BalancedCellCertificate& cert) {
  return cert.weights.size() == cert.labels.size() &&
         verify_fractional_matching(cert.hypergraph, cert.weights, true);
}

namespace {

// Exhaustive alternatives are only tried on cells with at most this many vertices.
constexpr std::size_t kMaxAlternativeEdges = 20;

PlayerId player_at(const BalancedCellCertificate& cert, const Triangulation& t, const PlayerDuplicationMap& dup,
                   std::size_t pos) {
  return dup.owner_to_player.at(t.owner(cert.vertices[pos]) - 1);
}

std::size_t overlap(const std::vector<PlayerId>& players, const std::vector<PlayerId>& preferred) {
  std::size_t n = 0;
  for (PlayerId p : players) n += std::find(preferred.begin(), preferred.end(), p) != preferred.end() ? 1 : 0;
  return n;
}

// Distinct-player matching with the most preferred players among those no
// smaller than `floor`; nullopt if none beats `baseline_overlap`.
std::optional<std::vector<std::size_t>> preferred_matching(const BalancedCellCertificate& cert, const Triangulation& t,
                                                           const PlayerDuplicationMap& dup,
                                                           const std::vector<PlayerId>& preferred, std::size_t floor,
                                                           std::size_t baseline_overlap) {
  const auto& edges = cert.hypergraph.edges;
  const std::size_t m = edges.size();
  std::optional<std::vector<std::size_t>> best;
  std::size_t best_overlap = baseline_overlap;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) < floor) continue;
    std::vector<std::size_t> chosen;
    std::vector<PlayerId> players;
    std::vector<char> used(static_cast<std::size_t>(cert.hypergraph.vertex_count), 0);
    bool ok = true;
    for (std::size_t e = 0; e < m && ok; ++e) {
      if (!(mask & (1u << e))) continue;
      const PlayerId p = player_at(cert, t, dup, e);
      if (std::find(players.begin(), players.end(), p) != players.end()) ok = false;
      for (int v : edges[e]) {
        if (used[static_cast<std::size_t>(v)]) ok = false;
        used[static_cast<std::size_t>(v)] = 1;
      }
      chosen.push_back(e);
      players.push_back(p);
    }
    if (!ok) continue;
    const std::size_t o = overlap(players, preferred);
    if (o > best_overlap) {
      best_overlap = o;
      best = std::move(chosen);
    }
  }
  return best;
}

}  // namespace

AllocationResult extract_disjoint_allocation(const BalancedCellCertificate& cert, const Triangulation& t,
                                             const PlayerDuplicationMap& dup, SearchBudget budget,
                                             const std::vector<PlayerId>& preferred) {
  AllocationResult out;
  Matching m;
  try {
    m = max_matching(cert.hypergraph, budget);
  } catch (const BudgetExceeded&) {
    m = greedy_matching(cert.hypergraph);
    out.matching_fallback = true;
  }
  if (!is_matching(cert.hypergraph, m)) throw std::logic_error("matching failed re-verification");
  out.matching_size = m.size();
  std::sort(m.edges.begin(), m.edges.end());
  std::vector<std::size_t> chosen;
  std::vector<PlayerId> players;
  for (auto e : m.edges) {
    const PlayerId player = player_at(cert, t, dup, e);
    if (std::find(players.begin(), players.end(), player) != players.end()) continue;
    chosen.push_back(e);
    players.push_back(player);
  }
  if (!preferred.empty() && cert.hypergraph.edges.size() <= kMaxAlternativeEdges) {
    if (auto alt = preferred_matching(cert, t, dup, preferred, chosen.size(), overlap(players, preferred))) {
      chosen = std::move(*alt);
    }
  }
  for (auto e : chosen) {
    const auto v = cert.vertices[e];
    out.assignments.push_back({player_at(cert, t, dup, e), v, t.owner(v), cert.labels[e]});
  }
  return out;
}

CoverResult extract_shift_cover(const BalancedCellCertificate& cert, const Triangulation& t,
                                const PlayerDuplicationMap& dup, int n, int k, const std::vector<PlayerId>& preferred) {
  CoverResult out;
  Cover cover;
  const auto dual = dualize(cert.hypergraph).graph;
  if (k == 2) {
    auto r = bipartite_min_edge_cover(cert.hypergraph);
    cover = r.cover;
    out.tau_star = r.dual_tau_star;
    out.exact = true;
  } else {
    out.tau_star = fractional_cover_number(dual).value;
    auto r = greedy_cover(dual, out.tau_star);
    cover = r.cover;
    out.lovasz_bound = r.bound;
  }
  if (!is_cover(dual, cover)) throw std::logic_error("shift cover failed re-verification");
  std::sort(cover.vertices.begin(), cover.vertices.end());
  const std::size_t m = cert.hypergraph.edges.size();
  if (!preferred.empty() && m <= kMaxAlternativeEdges) {
    auto players_of = [&](const std::vector<int>& positions) {
      std::vector<PlayerId> ps;
      for (int pos : positions) ps.push_back(player_at(cert, t, dup, static_cast<std::size_t>(pos)));
      return ps;
    };
    std::size_t best_overlap = overlap(players_of(cover.vertices), preferred);
    std::size_t best_size = cover.size();
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
      if (size > cover.size()) continue;
      Cover alt;
      for (std::size_t e = 0; e < m; ++e)
        if (mask & (1u << e)) alt.vertices.push_back(static_cast<int>(e));
      if (!is_cover(dual, alt)) continue;
      const std::size_t o = overlap(players_of(alt.vertices), preferred);
      if (o > best_overlap || (o == best_overlap && size < best_size)) {
        best_overlap = o;
        best_size = size;
        cover = std::move(alt);
      }
    }
  }
  for (int pos : cover.vertices) {
    const auto v = cert.vertices[static_cast<std::size_t>(pos)];
    out.employees.push_back({player_at(cert, t, dup, static_cast<std::size_t>(pos)), v, t.owner(v),
                             cert.labels[static_cast<std::size_t>(pos)]});
  }
  if (!covers_all_shifts(out.employees, n, k)) throw std::logic_error("shift cover leaves a shift open");
  return out;
}

bool pairwise_disjoint(const std::vector<Assignment>& a, bool tuples) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const auto& x = a[i].selection;
      const auto& y = a[j].selection;
      if (tuples) {
        for (std::size_t f = 0; f < std::min(x.size(), y.size()); ++f)
          if (x[f] == y[f]) return false;
      } else {
        for (int p : x)
          if (std::find(y.begin(), y.end(), p) != y.end()) return false;
      }
    }
  }
  return true;
}

bool covers_all_shifts(const std::vector<Assignment>& a, int n, int k) {
  std::vector<char> hit(static_cast<std::size_t>(n * k), 0);
  for (const auto& e : a) {
    if (static_cast<int>(e.selection.size()) != k) return false;
    for (int f = 0; f < k; ++f) {
      const int s = e.selection[static_cast<std::size_t>(f)];
      if (s < 0 || s >= n) return false;
      hit[static_cast<std::size_t>(f * n + s)] = 1;
    }
  }
  return std::find(hit.begin(), hit.end(), 0) == hit.end();
}

int SolveReport::exit_code() const {
  if (flags.bound_violated) return 1;
  if (flags.unstable) return 2;
  return 0;
}

namespace {

Rational max_norm_distance(const PolytopePoint& a, const PolytopePoint& b) {
  Rational d;
  for (std::size_t f = 0; f < a.factor_count(); ++f)
    for (std::size_t i = 0; i < a.piece_count(); ++i) d = std::max(d, (a.factor(f)[i] - b.factor(f)[i]).abs());
  return d;
}

struct RoundResult {
  RoundTrace trace;
  std::vector<Assignment> assignments;
  CertificateView certificate;
  std::optional<Rational> tau_star;
  bool fallback = false;
};

bool better(const RoundResult& a, const RoundResult& b, bool upper) {
  // a strictly better than b; later rounds win ties.
  return upper ? a.trace.achieved <= b.trace.achieved : a.trace.achieved >= b.trace.achieved;
}

Selection normalized(const Selection& s, QueryKind kind) {
  Selection out = s;
  if (kind == QueryKind::cake_subset) std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SolveReport refine_until_stable(const ProblemSpec& spec, Oracle& oracle) {
  validate_spec(spec);
  const auto dup = duplicate_players(spec);
  const auto bound = guaranteed_bound(spec);
  const QueryKind kind = spec.query_kind();
  const unsigned threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
  CachingOracle cache(oracle);

  std::vector<RoundResult> rounds;
  std::optional<PolytopePoint> previous;
  int mesh = spec.mesh.initial;
  bool stable = false;
  bool violated = false;
  for (int r = 1; r <= spec.mesh.max_rounds; ++r) {
    const Triangulation t = barycentric_complete(base_triangulation(spec, mesh));
    LazyLabeler labels(t, cache, dup.owner_to_player, kind, spec.k);
    const std::vector<PlayerId> preferred = rounds.empty() ? std::vector<PlayerId>{} : rounds.back().trace.players;
    RoundResult res;
    auto extract = [&](const BalancedCellCertificate& c, RoundResult& into) {
      if (spec.mode == Mode::shift_cover) {
        auto cover = extract_shift_cover(c, t, dup, spec.n, spec.k, preferred);
        into.assignments = std::move(cover.employees);
        into.tau_star = cover.tau_star;
      } else {
        auto alloc = extract_disjoint_allocation(c, t, dup, spec.budget, preferred);
        into.assignments = std::move(alloc.assignments);
        into.fallback = alloc.matching_fallback;
      }
    };
    ScanOptions options{previous, threads, {}, 0};
    if (!rounds.empty()) {
      options.radius = 1.0 / rounds.back().trace.mesh;
      options.accept = [&](const BalancedCellCertificate& c) {
        RoundResult trial;
        extract(c, trial);
        std::vector<PlayerId> players;
        for (const auto& a : trial.assignments) players.push_back(a.player);
        std::sort(players.begin(), players.end());
        return players == preferred;
      };
    }
    const auto cert = find_balanced_cell(t, labels, options);
    if (!verify_certificate(cert)) throw std::logic_error("balanced-cell weights failed re-verification");

    res.trace.round = r;
    res.trace.mesh = mesh;
    res.trace.cell = cert.cell;
    res.trace.cell_count = t.cell_count();
    res.trace.cells_scanned = cert.cells_scanned;
    extract(cert, res);
    if (spec.mode != Mode::shift_cover && !pairwise_disjoint(res.assignments, spec.mode == Mode::multi_cakes)) {
      throw std::logic_error("extracted selections are not disjoint");
    }
    res.trace.achieved = static_cast<int>(res.assignments.size());
    res.trace.bound_met = bound.upper ? res.trace.achieved <= bound.value : res.trace.achieved >= bound.value;
    violated = violated || !res.trace.bound_met;
    for (const auto& a : res.assignments) res.trace.players.push_back(a.player);
    std::sort(res.trace.players.begin(), res.trace.players.end());
    res.trace.division = t.cell_barycenter(cert.cell);
    if (previous) res.trace.drift = max_norm_distance(res.trace.division, *previous);

    res.certificate.cell = cert.cell;
    res.certificate.vertices = cert.vertices;
    res.certificate.labels = cert.labels;
    res.certificate.weights = cert.weights;
    for (auto v : cert.vertices) {
      res.certificate.owners.push_back(t.owner(v));
      res.certificate.players.push_back(dup.owner_to_player.at(t.owner(v) - 1));
    }

    spdlog::debug("round {} mesh {}: cell {} after {}/{} cells, achieved {}, {} oracle calls", r, mesh, cert.cell,
                  cert.cells_scanned, t.cell_count(), res.trace.achieved, labels.oracle_calls());

    if (!rounds.empty() && res.trace.players == rounds.back().trace.players) {
      const Rational width(1, rounds.back().trace.mesh);
      if (*res.trace.drift <= width || res.trace.drift->to_double() < spec.epsilon) stable = true;
    }
    previous = res.trace.division;
    rounds.push_back(std::move(res));
    if (stable) break;
    if (r < spec.mesh.max_rounds) {
      if (mesh > std::numeric_limits<int>::max() / spec.mesh.factor) throw std::overflow_error("mesh overflow");
      mesh *= spec.mesh.factor;
    }
  }

  std::size_t chosen = rounds.size() - 1;
  if (!stable) {
    for (std::size_t i = 0; i < rounds.size(); ++i)
      if (better(rounds[i], rounds[chosen], bound.upper)) chosen = i;
  }
  auto& final_round = rounds[chosen];

  SolveReport report;
  report.spec = spec;
  report.division = final_round.trace.division;
  report.final_round = final_round.trace.round;
  (spec.mode == Mode::shift_cover ? report.cover : report.satisfied) = final_round.assignments;
  report.bound = bound;
  report.achieved = final_round.trace.achieved;
  report.attained = final_round.trace.bound_met;
  report.tau_star = final_round.tau_star;
  report.certificate = final_round.certificate;
  report.flags.unstable = !stable;
  report.flags.bound_violated = violated;
  for (const auto& r : rounds) report.flags.matching_fallback = report.flags.matching_fallback || r.fallback;

  for (const auto& a : final_round.assignments) {
    OracleQuery q;
    q.player = a.player;
    q.division = report.division;
    q.kind = kind;
    q.k = spec.k;
    ConsistencyCheck c;
    c.player = a.player;
    c.confirmed = normalized(cache.select(q), kind) == a.selection;
    auto chk = cache.check(q, a.selection);
    c.tie = chk && chk->optimal && !chk->unique;
    report.flags.tie_hit = report.flags.tie_hit || c.tie;
    report.flags.unconfirmed = report.flags.unconfirmed || (!c.confirmed && !c.tie);
    report.consistency.push_back(c);
  }
  for (auto& r : rounds) report.trace.push_back(std::move(r.trace));
  return report;
}

}  // namespace fairdiv
