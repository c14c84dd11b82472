#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairdiv/geometry.hpp"
#include "fairdiv/hypergraph.hpp"
#include "fairdiv/labeling.hpp"
#include "fairdiv/oracles.hpp"

namespace fairdiv {

enum class Mode { single_cake, multi_cakes, shift_cover };

const char* to_string(Mode mode);
/// Accepts "cake", "cakes", "shifts" and the long names.
Mode parse_mode(const std::string& text);

struct MeshSchedule {
  int initial = 1;
  int factor = 2;
  int max_rounds = 3;
};

struct ProblemSpec {
  Mode mode = Mode::single_cake;
  int n = 2;
  int k = 1;
  std::vector<PlayerId> players;
  MeshSchedule mesh;
  double epsilon = 1e-6;
  unsigned threads = 1;  // 0 = hardware concurrency
  SearchBudget budget;

  int p() const { return static_cast<int>(players.size()); }
  /// n in single-cake mode, k(n-1)+1 otherwise.
  int owner_count() const;
  QueryKind query_kind() const;
};

class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws HypothesisError when a parameter or mode hypothesis fails.
void validate_spec(const ProblemSpec& spec);

struct PlayerDuplicationMap {
  OwnerMap owner_to_player;
  int copies_bound = 1;
};

/// Round-robin replication of the players over the owners.
PlayerDuplicationMap duplicate_players(const ProblemSpec& spec);

struct GuaranteedBound {
  int value = 0;
  std::string form;  // "divisible", "halved", "exact" or "logarithmic"
  bool upper = false;  // true for covers (achieved must not exceed value)
};

GuaranteedBound guaranteed_bound(const ProblemSpec& spec);

/// Base triangulation of one refinement round, before subdivision.
Triangulation base_triangulation(const ProblemSpec& spec, int mesh);

struct BalancedCellCertificate {
  std::size_t cell = 0;
  std::vector<std::uint32_t> vertices;
  std::vector<Selection> labels;
  std::vector<Rational> weights;
  Hypergraph hypergraph;  // the labels as edges, one per cell vertex
  std::size_t cells_scanned = 0;
};

class ExhaustionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanOptions {
  /// When set, cells are visited by max-norm distance of their barycenter
  /// from this point (ties by index); otherwise by index.
  std::optional<PolytopePoint> focus;
  unsigned threads = 1;
  /// With a focus: among balanced cells whose barycenter lies within `radius`
  /// of it, the first one accepted wins over the first one found.
  std::function<bool(const BalancedCellCertificate&)> accept;
  double radius = 0;
};

struct ScanOrder {
  std::vector<std::size_t> cells;
  std::vector<double> distance;  // per position; empty without a focus
};

/// Cell visiting order used by find_balanced_cell.
ScanOrder scan_order(const Triangulation& t, const std::optional<PolytopePoint>& focus);

/// First cell in scan order whose labels form a balanced collection.
BalancedCellCertificate find_balanced_cell(const Triangulation& t, LabelSource& labels, const ScanOptions& options = {});

/// Exact re-check of a certificate's weights.
bool verify_certificate(const BalancedCellCertificate& cert);

struct Assignment {
  PlayerId player = 0;
  std::uint32_t vertex = 0;  // triangulation vertex the selection came from
  OwnerId owner = 0;
  Selection selection;
};

struct AllocationResult {
  std::vector<Assignment> assignments;
  std::size_t matching_size = 0;
  bool matching_fallback = false;
};

/// Maximum matching of the cell's labels, thinned to one edge per player.
/// With `preferred` players given, a distinct-player matching of at least the
/// same size that keeps more of them is returned instead.
AllocationResult extract_disjoint_allocation(const BalancedCellCertificate& cert, const Triangulation& t,
                                             const PlayerDuplicationMap& dup, SearchBudget budget = {},
                                             const std::vector<PlayerId>& preferred = {});

struct CoverResult {
  std::vector<Assignment> employees;
  Rational tau_star;                    // of the dual label hypergraph
  std::optional<long double> lovasz_bound;  // (1 + ln k) tau*, greedy path only
  bool exact = false;                   // computed by the bipartite edge cover
};

/// Bipartite edge cover (k = 2) or greedy cover of the dual label hypergraph.
/// With `preferred` employees given, a cover no larger that keeps more of them
/// is returned instead.
CoverResult extract_shift_cover(const BalancedCellCertificate& cert, const Triangulation& t,
                                const PlayerDuplicationMap& dup, int n, int k,
                                const std::vector<PlayerId>& preferred = {});

/// Disjointness of selections as sets (subsets) or componentwise (tuples).
bool pairwise_disjoint(const std::vector<Assignment>& a, bool tuples);
/// Every (day, shift) pair is taken by some employee.
bool covers_all_shifts(const std::vector<Assignment>& a, int n, int k);

struct RoundTrace {
  int round = 0;
  int mesh = 0;
  std::size_t cell = 0;
  std::size_t cell_count = 0;
  std::size_t cells_scanned = 0;
  int achieved = 0;
  bool bound_met = false;
  std::optional<Rational> drift;  // max-norm distance to the previous round's division
  std::vector<PlayerId> players;  // sorted
  PolytopePoint division;
};

struct ConsistencyCheck {
  PlayerId player = 0;
  bool confirmed = false;  // oracle returns the reported selection at the final division
  bool tie = false;        // reported selection is one of several optimal ones there
};

struct ReportFlags {
  bool unstable = false;
  bool tie_hit = false;
  bool unconfirmed = false;
  bool matching_fallback = false;
  bool bound_violated = false;
};

struct CertificateView {
  std::size_t cell = 0;
  std::vector<std::uint32_t> vertices;
  std::vector<OwnerId> owners;
  std::vector<PlayerId> players;
  std::vector<Selection> labels;
  std::vector<Rational> weights;
};

struct SolveReport {
  ProblemSpec spec;
  PolytopePoint division;
  int final_round = 0;
  std::vector<Assignment> satisfied;  // modes 1-2
  std::vector<Assignment> cover;      // mode 3
  GuaranteedBound bound;
  int achieved = 0;
  bool attained = false;
  std::optional<Rational> tau_star;
  CertificateView certificate;
  std::vector<RoundTrace> trace;
  std::vector<ConsistencyCheck> consistency;
  ReportFlags flags;

  /// 0 when the bound is attained and the run is stable, 2 when unstable,
  /// 1 when a bound was violated.
  int exit_code() const;
};

/// Runs the pipeline at meshes m, f m, f^2 m, ... until two consecutive rounds
/// agree on the player set and the division moved by at most the previous
/// mesh width (or epsilon), or the round budget runs out.
SolveReport refine_until_stable(const ProblemSpec& spec, Oracle& oracle);

}  // namespace fairdiv
