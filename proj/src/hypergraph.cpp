#include "fairdiv/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fairdiv/lp.hpp"

namespace fairdiv {

Hypergraph::Hypergraph(int vertices, std::vector<Subset> edge_list, std::vector<int> parts)
    : vertex_count(vertices), edges(std::move(edge_list)), part_of(std::move(parts)) {
  validate();
}

int Hypergraph::part_count() const {
  if (part_of.empty()) return 0;
  return *std::max_element(part_of.begin(), part_of.end()) + 1;
}

int Hypergraph::rank() const {
  int r = 0;
  for (const auto& e : edges) r = std::max(r, static_cast<int>(e.size()));
  return r;
}

int Hypergraph::degree(int v) const {
  int d = 0;
  for (const auto& e : edges) d += std::binary_search(e.begin(), e.end(), v) ? 1 : 0;
  return d;
}

int Hypergraph::max_degree() const {
  std::vector<int> deg(static_cast<std::size_t>(vertex_count), 0);
  for (const auto& e : edges)
    for (int v : e) ++deg[static_cast<std::size_t>(v)];
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

bool Hypergraph::is_uniform(int size) const {
  return std::all_of(edges.begin(), edges.end(), [&](const Subset& e) { return static_cast<int>(e.size()) == size; });
}

bool Hypergraph::is_partite() const {
  if (part_of.empty()) return false;
  const int parts = part_count();
  for (const auto& e : edges) {
    std::vector<int> hits(static_cast<std::size_t>(parts), 0);
    for (int v : e) ++hits[static_cast<std::size_t>(part_of[static_cast<std::size_t>(v)])];
    if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) return false;
  }
  return true;
}

void Hypergraph::validate() const {
  if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
  if (!part_of.empty()) {
    if (part_of.size() != static_cast<std::size_t>(vertex_count)) {
      throw std::invalid_argument("partition does not assign every vertex");
    }
    for (int p : part_of)
      if (p < 0) throw std::invalid_argument("negative part index");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] < 0 || e[j] >= vertex_count) {
        throw std::invalid_argument("edge " + std::to_string(i) + " has a vertex out of range");
      }
      if (j > 0 && e[j - 1] >= e[j]) {
        throw std::invalid_argument("edge " + std::to_string(i) + " is not a sorted set");
      }
    }
  }
}

Rational FractionalMatching::total() const {
  Rational t;
  for (const auto& w : weights) t += w;
  return t;
}

namespace {

void require_nonempty_edges(const Hypergraph& h) {
  for (std::size_t i = 0; i < h.edges.size(); ++i) {
    if (h.edges[i].empty()) throw std::invalid_argument("edge " + std::to_string(i) + " is empty");
  }
}

// Vertex-by-edge incidence rows.
std::vector<std::vector<Rational>> incidence(const Hypergraph& h) {
  std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(h.vertex_count),
                                          std::vector<Rational>(h.edges.size()));
  for (std::size_t e = 0; e < h.edges.size(); ++e)
    for (int v : h.edges[e]) rows[static_cast<std::size_t>(v)][e] = 1;
  return rows;
}

std::vector<std::size_t> degree_sum_order(const Hypergraph& h) {
  std::vector<int> deg(static_cast<std::size_t>(h.vertex_count), 0);
  for (const auto& e : h.edges)
    for (int v : e) ++deg[static_cast<std::size_t>(v)];
  std::vector<std::size_t> order(h.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> key(h.edges.size(), 0);
  for (std::size_t i = 0; i < h.edges.size(); ++i)
    for (int v : h.edges[i]) key[i] += deg[static_cast<std::size_t>(v)];
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  return order;
}

}  // namespace

bool verify_fractional_matching(const Hypergraph& h, const std::vector<Rational>& weights, bool perfect) {
  if (weights.size() != h.edges.size()) return false;
  std::vector<Rational> load(static_cast<std::size_t>(h.vertex_count));
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    if (weights[e].sign() < 0 || weights[e] > Rational(1)) return false;
    for (int v : h.edges[e]) load[static_cast<std::size_t>(v)] += weights[e];
  }
  for (const auto& l : load) {
    if (perfect ? l != Rational(1) : l > Rational(1)) return false;
  }
  return true;
}

bool verify_fractional_cover(const Hypergraph& h, const std::vector<Rational>& weights) {
  if (weights.size() != static_cast<std::size_t>(h.vertex_count)) return false;
  for (const auto& w : weights)
    if (w.sign() < 0) return false;
  for (const auto& e : h.edges) {
    Rational s;
    for (int v : e) s += weights[static_cast<std::size_t>(v)];
    if (s < Rational(1)) return false;
  }
  return true;
}

std::optional<FractionalMatching> perfect_fractional_matching(const Hypergraph& h) {
  h.validate();
  require_nonempty_edges(h);
  lp::LinearProgram program;
  program.rows = incidence(h);
  program.senses.assign(program.rows.size(), lp::Sense::equal);
  program.rhs.assign(program.rows.size(), Rational(1));
  program.objective.assign(h.edges.size(), Rational(0));
  if (lp::solve(program).status != lp::Status::optimal) return std::nullopt;
  // Among perfect fractional matchings, maximize the smallest edge weight t.
  const std::size_t m = h.edges.size();
  for (auto& row : program.rows) row.emplace_back(0);
  for (std::size_t e = 0; e < m; ++e) {
    std::vector<Rational> row(m + 1);
    row[e] = 1;
    row[m] = -1;
    program.rows.push_back(std::move(row));
    program.senses.push_back(lp::Sense::greater_equal);
    program.rhs.emplace_back(0);
  }
  program.objective.assign(m + 1, Rational(0));
  program.objective[m] = 1;
  auto sol = lp::solve(program);
  if (sol.status != lp::Status::optimal) throw std::logic_error("max-min perfect fractional matching LP failed");
  sol.x.resize(m);
  FractionalMatching f{sol.x};
  if (!verify_fractional_matching(h, f.weights, true)) {
    throw std::logic_error("perfect fractional matching failed re-verification");
  }
  return f;
}

FractionalOptimum fractional_matching_number(const Hypergraph& h) {
  h.validate();
  require_nonempty_edges(h);
  lp::LinearProgram program;
  program.rows = incidence(h);
  program.senses.assign(program.rows.size(), lp::Sense::less_equal);
  program.rhs.assign(program.rows.size(), Rational(1));
  program.objective.assign(h.edges.size(), Rational(1));
  auto sol = lp::solve(program);
  if (sol.status != lp::Status::optimal) throw std::logic_error("fractional matching LP did not reach an optimum");
  if (!verify_fractional_matching(h, sol.x, false)) {
    throw std::logic_error("fractional matching failed re-verification");
  }
  return {sol.value, sol.x};
}

FractionalOptimum fractional_cover_number(const Hypergraph& h) {
  h.validate();
  require_nonempty_edges(h);
  lp::LinearProgram program;
  for (const auto& e : h.edges) {
    std::vector<Rational> row(static_cast<std::size_t>(h.vertex_count));
    for (int v : e) row[static_cast<std::size_t>(v)] = 1;
    program.rows.push_back(std::move(row));
  }
  program.senses.assign(h.edges.size(), lp::Sense::greater_equal);
  program.rhs.assign(h.edges.size(), Rational(1));
  program.objective.assign(static_cast<std::size_t>(h.vertex_count), Rational(1));
  program.maximize = false;
  auto sol = lp::solve(program);
  if (sol.status != lp::Status::optimal) throw std::logic_error("fractional cover LP did not reach an optimum");
  if (!verify_fractional_cover(h, sol.x)) throw std::logic_error("fractional cover failed re-verification");
  return {sol.value, sol.x};
}

bool is_matching(const Hypergraph& h, const Matching& m) {
  std::vector<char> used(static_cast<std::size_t>(h.vertex_count), 0);
  for (auto e : m.edges) {
    if (e >= h.edges.size()) return false;
    for (int v : h.edges[e]) {
      if (used[static_cast<std::size_t>(v)]) return false;
      used[static_cast<std::size_t>(v)] = 1;
    }
  }
  return true;
}

bool is_cover(const Hypergraph& h, const Cover& c) {
  std::vector<char> in(static_cast<std::size_t>(h.vertex_count), 0);
  for (int v : c.vertices) {
    if (v < 0 || v >= h.vertex_count) return false;
    in[static_cast<std::size_t>(v)] = 1;
  }
  return std::all_of(h.edges.begin(), h.edges.end(), [&](const Subset& e) {
    return std::any_of(e.begin(), e.end(), [&](int v) { return in[static_cast<std::size_t>(v)] != 0; });
  });
}

Matching greedy_matching(const Hypergraph& h) {
  h.validate();
  std::vector<char> used(static_cast<std::size_t>(h.vertex_count), 0);
  Matching m;
  for (auto e : degree_sum_order(h)) {
    const auto& edge = h.edges[e];
    if (edge.empty()) continue;
    if (std::any_of(edge.begin(), edge.end(), [&](int v) { return used[static_cast<std::size_t>(v)] != 0; })) continue;
    for (int v : edge) used[static_cast<std::size_t>(v)] = 1;
    m.edges.push_back(e);
  }
  std::sort(m.edges.begin(), m.edges.end());
  return m;
}

Matching max_matching(const Hypergraph& h, SearchBudget budget) {
  h.validate();
  const auto order = degree_sum_order(h);
  std::size_t min_size = std::numeric_limits<std::size_t>::max();
  for (const auto& e : h.edges)
    if (!e.empty()) min_size = std::min(min_size, e.size());

  Matching best = greedy_matching(h);
  std::vector<std::size_t> current;
  std::vector<char> used(static_cast<std::size_t>(h.vertex_count), 0);
  std::size_t free_vertices = static_cast<std::size_t>(h.vertex_count);
  std::size_t nodes = 0;

  auto search = [&](auto&& self, std::size_t pos) -> void {
    if (++nodes > budget.max_nodes) throw BudgetExceeded("max_matching exceeded its node budget");
    if (current.size() > best.size()) best.edges = current;
    if (pos == order.size()) return;
    std::size_t by_edges = current.size() + (order.size() - pos);
    std::size_t by_vertices = min_size == std::numeric_limits<std::size_t>::max()
                                  ? current.size()
                                  : current.size() + free_vertices / min_size;
    if (std::min(by_edges, by_vertices) <= best.size()) return;
    const auto& edge = h.edges[order[pos]];
    bool fits = !edge.empty() &&
                std::none_of(edge.begin(), edge.end(), [&](int v) { return used[static_cast<std::size_t>(v)] != 0; });
    if (fits) {
      for (int v : edge) used[static_cast<std::size_t>(v)] = 1;
      free_vertices -= edge.size();
      current.push_back(order[pos]);
      self(self, pos + 1);
      current.pop_back();
      free_vertices += edge.size();
      for (int v : edge) used[static_cast<std::size_t>(v)] = 0;
    }
    self(self, pos + 1);
  };
  search(search, 0);
  std::sort(best.edges.begin(), best.edges.end());
  return best;
}

Cover min_cover(const Hypergraph& h, SearchBudget budget) {
  h.validate();
  require_nonempty_edges(h);
  Cover best = greedy_cover(h).cover;
  std::vector<int> current;
  std::vector<int> hit(h.edges.size(), 0);
  std::size_t nodes = 0;

  auto search = [&](auto&& self) -> void {
    if (++nodes > budget.max_nodes) throw BudgetExceeded("min_cover exceeded its node budget");
    std::optional<std::size_t> pick;
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
      if (hit[e] == 0 && (!pick || h.edges[e].size() < h.edges[*pick].size())) pick = e;
    }
    if (!pick) {
      if (current.size() < best.size()) best.vertices = current;
      return;
    }
    if (current.size() + 1 >= best.size()) return;
    for (int v : h.edges[*pick]) {
      current.push_back(v);
      for (std::size_t e = 0; e < h.edges.size(); ++e)
        if (std::binary_search(h.edges[e].begin(), h.edges[e].end(), v)) ++hit[e];
      self(self);
      for (std::size_t e = 0; e < h.edges.size(); ++e)
        if (std::binary_search(h.edges[e].begin(), h.edges[e].end(), v)) --hit[e];
      current.pop_back();
    }
  };
  search(search);
  std::sort(best.vertices.begin(), best.vertices.end());
  return best;
}

FurediReport check_furedi(const Hypergraph& h, SearchBudget budget) {
  FurediReport r;
  r.rank = h.rank();
  if (r.rank < 2) throw std::invalid_argument("Furedi bound needs rank at least 2");
  r.nu = max_matching(h, budget).size();
  r.nu_star = fractional_matching_number(h).value;
  const Rational rank(r.rank);
  const Rational nu(static_cast<std::int64_t>(r.nu));
  // nu >= nu* / (r - 1 + 1/r)  <=>  nu * (r^2 - r + 1) >= nu* * r
  r.general_holds = nu * (rank * rank - rank + Rational(1)) >= r.nu_star * rank;
  if (h.is_partite() && h.part_count() == r.rank) {
    r.partite_holds = nu * (rank - Rational(1)) >= r.nu_star;
  }
  return r;
}

DualHypergraph dualize(const Hypergraph& h) {
  h.validate();
  std::vector<Subset> dual_edges(static_cast<std::size_t>(h.vertex_count));
  for (std::size_t e = 0; e < h.edges.size(); ++e)
    for (int v : h.edges[e]) dual_edges[static_cast<std::size_t>(v)].push_back(static_cast<int>(e));
  return DualHypergraph{Hypergraph(static_cast<int>(h.edges.size()), std::move(dual_edges))};
}

GreedyCoverResult greedy_cover(const Hypergraph& h, std::optional<Rational> tau_star) {
  h.validate();
  require_nonempty_edges(h);
  GreedyCoverResult result;
  result.max_degree = h.max_degree();
  std::vector<char> covered(h.edges.size(), 0);
  std::size_t remaining = h.edges.size();
  while (remaining > 0) {
    std::vector<int> gain(static_cast<std::size_t>(h.vertex_count), 0);
    for (std::size_t e = 0; e < h.edges.size(); ++e)
      if (!covered[e])
        for (int v : h.edges[e]) ++gain[static_cast<std::size_t>(v)];
    int pick = static_cast<int>(std::max_element(gain.begin(), gain.end()) - gain.begin());
    result.cover.vertices.push_back(pick);
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
      if (!covered[e] && std::binary_search(h.edges[e].begin(), h.edges[e].end(), pick)) {
        covered[e] = 1;
        --remaining;
      }
    }
  }
  std::sort(result.cover.vertices.begin(), result.cover.vertices.end());
  if (tau_star) {
    long double d = std::max(1, result.max_degree);
    result.bound = (1.0L + std::log(d)) * static_cast<long double>(tau_star->to_double());
    result.within_bound = static_cast<long double>(result.cover.size()) <= *result.bound + 1e-12L;
  }
  return result;
}

EdgeCoverResult bipartite_min_edge_cover(const Hypergraph& g) {
  g.validate();
  if (!g.is_partite() || g.part_count() != 2) {
    throw std::invalid_argument("bipartite_min_edge_cover needs a 2-partite graph");
  }
  for (int v = 0; v < g.vertex_count; ++v) {
    if (g.degree(v) == 0) throw IsolatedVertexError("vertex " + std::to_string(v) + " is isolated");
  }
  // Kuhn's augmenting paths from the part-0 side.
  const auto n = static_cast<std::size_t>(g.vertex_count);
  std::vector<std::vector<std::pair<int, std::size_t>>> adj(n);  // (neighbour, edge)
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    int a = g.edges[e][0];
    int b = g.edges[e][1];
    if (g.part_of[static_cast<std::size_t>(a)] != 0) std::swap(a, b);
    adj[static_cast<std::size_t>(a)].emplace_back(b, e);
  }
  std::vector<std::optional<std::size_t>> match_edge_of_right(n);
  std::vector<std::optional<std::size_t>> match_edge_of_left(n);
  std::vector<char> visited;
  auto augment = [&](auto&& self, int left) -> bool {
    for (auto [right, edge] : adj[static_cast<std::size_t>(left)]) {
      if (visited[static_cast<std::size_t>(right)]) continue;
      visited[static_cast<std::size_t>(right)] = 1;
      auto& current = match_edge_of_right[static_cast<std::size_t>(right)];
      if (!current) {
        current = edge;
        match_edge_of_left[static_cast<std::size_t>(left)] = edge;
        return true;
      }
      const auto& other = g.edges[*current];
      int other_left = g.part_of[static_cast<std::size_t>(other[0])] == 0 ? other[0] : other[1];
      if (self(self, other_left)) {
        current = edge;
        match_edge_of_left[static_cast<std::size_t>(left)] = edge;
        return true;
      }
    }
    return false;
  };
  EdgeCoverResult result;
  for (int v = 0; v < g.vertex_count; ++v) {
    if (g.part_of[static_cast<std::size_t>(v)] != 0) continue;
    visited.assign(n, 0);
    if (augment(augment, v)) ++result.matching_size;
  }
  std::vector<char> chosen(g.edges.size(), 0);
  std::vector<char> touched(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (match_edge_of_left[v]) chosen[*match_edge_of_left[v]] = 1;
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (chosen[e])
      for (int v : g.edges[e]) touched[static_cast<std::size_t>(v)] = 1;
  for (int v = 0; v < g.vertex_count; ++v) {
    if (touched[static_cast<std::size_t>(v)]) continue;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (std::binary_search(g.edges[e].begin(), g.edges[e].end(), v)) {
        chosen[e] = 1;
        for (int u : g.edges[e]) touched[static_cast<std::size_t>(u)] = 1;
        break;
      }
    }
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (chosen[e]) result.cover.vertices.push_back(static_cast<int>(e));
  if (result.cover.size() != n - result.matching_size) {
    throw std::logic_error("edge cover size differs from |V| - nu");
  }
  result.dual_tau_star = fractional_cover_number(dualize(g).graph).value;
  result.gallai_equal = result.dual_tau_star == Rational(static_cast<std::int64_t>(result.cover.size()));
  return result;
}

}  // namespace fairdiv
