#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fairdiv/geometry.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

/// Hypergraph on vertices 0..vertex_count-1. Edges are sorted vertex lists and
/// may repeat (a cell can carry the same label at several vertices).
struct Hypergraph {
  int vertex_count = 0;
  std::vector<Subset> edges;
  /// Optional partition V = V_1 u ... u V_k, given as the part index of each vertex.
  std::vector<int> part_of;

  Hypergraph() = default;
  Hypergraph(int vertices, std::vector<Subset> edge_list, std::vector<int> parts = {});

  bool has_partition() const { return !part_of.empty(); }
  int part_count() const;
  int rank() const;
  int degree(int v) const;
  int max_degree() const;
  bool is_uniform(int size) const;
  /// True when a partition is present and every edge meets every part exactly once.
  bool is_partite() const;

  /// Throws std::invalid_argument on out-of-range or unsorted edges.
  void validate() const;
};

struct FractionalMatching {
  std::vector<Rational> weights;  // one per edge
  Rational total() const;
};

struct Matching {
  std::vector<std::size_t> edges;
  std::size_t size() const { return edges.size(); }
};

struct Cover {
  std::vector<int> vertices;
  std::size_t size() const { return vertices.size(); }
};

struct DualHypergraph {
  /// Vertices are the primal edges; edge v lists the primal edges containing v.
  Hypergraph graph;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchBudget {
  std::size_t max_nodes = 1'000'000;
};

/// Exact balancedness test: the perfect fractional matching with the largest
/// minimum edge weight, re-verified by summation, or nullopt when none exists.
std::optional<FractionalMatching> perfect_fractional_matching(const Hypergraph& h);

struct FractionalOptimum {
  Rational value;
  std::vector<Rational> weights;
};

/// nu*(H): maximum total weight of a fractional matching (weights per edge).
FractionalOptimum fractional_matching_number(const Hypergraph& h);
/// tau*(H): minimum total weight of a fractional cover (weights per vertex).
FractionalOptimum fractional_cover_number(const Hypergraph& h);

/// Maximum matching by branch and bound over edges sorted by increasing
/// degree sum. Throws BudgetExceeded if the node budget runs out.
Matching max_matching(const Hypergraph& h, SearchBudget budget = {});
/// Greedy maximal matching in the same edge order; used as a fallback.
Matching greedy_matching(const Hypergraph& h);

/// Minimum vertex cover (tau) by branch and bound.
Cover min_cover(const Hypergraph& h, SearchBudget budget = {});

struct FurediReport {
  int rank = 0;
  std::size_t nu = 0;
  Rational nu_star;
  bool general_holds = false;            // nu >= nu* / (rank - 1 + 1/rank)
  std::optional<bool> partite_holds;     // nu >= nu* / (rank - 1), rank-partite only
  bool pass() const { return general_holds && partite_holds.value_or(true); }
};

FurediReport check_furedi(const Hypergraph& h, SearchBudget budget = {});

DualHypergraph dualize(const Hypergraph& h);

struct GreedyCoverResult {
  Cover cover;
  int max_degree = 0;
  /// (1 + ln max_degree) * tau*, present when tau* was supplied.
  std::optional<long double> bound;
  std::optional<bool> within_bound;
};

/// Greedy set cover: repeatedly take the vertex meeting the most uncovered
/// edges, ties to the lowest index.
GreedyCoverResult greedy_cover(const Hypergraph& h, std::optional<Rational> tau_star = std::nullopt);

class IsolatedVertexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EdgeCoverResult {
  /// Edge indices of g, i.e. a cover of the dual hypergraph.
  Cover cover;
  std::size_t matching_size = 0;
  Rational dual_tau_star;
  bool gallai_equal = false;  // |cover| == tau*(g^D)
};

/// Minimum edge cover of a bipartite graph: a maximum matching extended by
/// one edge per unmatched vertex.
EdgeCoverResult bipartite_min_edge_cover(const Hypergraph& g);

bool is_matching(const Hypergraph& h, const Matching& m);
bool is_cover(const Hypergraph& h, const Cover& c);
bool verify_fractional_matching(const Hypergraph& h, const std::vector<Rational>& weights, bool perfect);
bool verify_fractional_cover(const Hypergraph& h, const std::vector<Rational>& weights);

}  // namespace fairdiv
