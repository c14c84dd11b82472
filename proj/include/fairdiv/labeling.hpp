#pragma once

#include <atomic>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairdiv/geometry.hpp"
#include "fairdiv/oracles.hpp"

namespace fairdiv {

/// L(v) per vertex: a sorted subset of [n] with |L(v)| <= k.
struct SubsetLabeling {
  std::vector<Subset> labels;
};

enum class TupleFlavor { supportwise, factorwise_dual };

/// l(v) = (l_1(v), ..., l_k(v)) per vertex, entries in [n] (0-based).
struct TupleLabeling {
  std::vector<Selection> labels;
  TupleFlavor flavor = TupleFlavor::supportwise;
};

struct LabelingReport {
  bool pass = true;
  std::vector<std::string> failed_conditions;
  std::vector<std::size_t> offenders;
  std::string message;

  void fail(const std::string& condition, std::size_t vertex, const std::string& why);
};

/// An oracle answer that breaks the labeling rule for its flavor.
class OracleViolation : public std::runtime_error {
 public:
  OracleViolation(PlayerId player, std::size_t vertex, std::string rule, const std::string& detail);
  PlayerId player;
  std::size_t vertex;
  std::string rule;
};

/// owner_to_player[o - 1] is the player asked at vertices owned by o.
using OwnerMap = std::vector<PlayerId>;

SubsetLabeling build_subset_labeling(const Triangulation& t, Oracle& oracle, const OwnerMap& owners, int k);
TupleLabeling build_tuple_labeling(const Triangulation& t, Oracle& oracle, const OwnerMap& owners, TupleFlavor flavor);

/// The equivalent-labeling component for a factor with support `supp`:
/// unchanged when the support is all of [n], otherwise the smallest element
/// of (supp + 1 mod n) minus supp.
int equivalent_component(const Subset& supp, int n, int original);

TupleLabeling to_equivalent_sperner(const TupleLabeling& dual, const Triangulation& t);

LabelingReport validate_subset_labeling(const SubsetLabeling& l, const Triangulation& t, int k);
LabelingReport validate_tuple_labeling(const TupleLabeling& l, const Triangulation& t);
/// Checks (a) polytope vertices carry pairwise distinct labels and (b) every
/// vertex's label is the label of the polytope vertex w with
/// w_i = l_i(v) - 1, and that w lies on the minimal face of v.
LabelingReport validate_sperner(const TupleLabeling& l, const Triangulation& t);

enum class LabelKind { subset, tuple };

/// Per-vertex labels as consumed by the balanced-cell search.
class LabelSource {
 public:
  virtual ~LabelSource() = default;
  virtual const Selection& label(std::size_t vertex) = 0;
  virtual LabelKind kind() const = 0;
  virtual int pieces() const = 0;   // n
  virtual int factors() const = 0;  // 1 for subsets, k for tuples
  virtual bool concurrent() const { return true; }

  /// Ground set size of the label hypergraph: n for subsets, k * n for tuples.
  int ground_size() const { return kind() == LabelKind::subset ? pieces() : pieces() * factors(); }
  /// Label as an edge: the subset itself, or {i * n + l_i}.
  Subset edge(std::size_t vertex);
  /// Part index per ground vertex for tuples, empty for subsets.
  std::vector<int> partition() const;
};

/// Precomputed labels, e.g. from the eager builders or a test fixture.
class FixedLabels : public LabelSource {
 public:
  FixedLabels(std::vector<Selection> labels, LabelKind kind, int n, int factors);
  const Selection& label(std::size_t vertex) override { return labels_.at(vertex); }
  LabelKind kind() const override { return kind_; }
  int pieces() const override { return n_; }
  int factors() const override { return factors_; }

 private:
  std::vector<Selection> labels_;
  LabelKind kind_;
  int n_;
  int factors_;
};

/// Queries the owner's oracle the first time a vertex is labeled. Vertices
/// whose answer is forced by the labeling rule are labeled without a query.
/// Shift queries are returned in their equivalent-Sperner form.
class LazyLabeler : public LabelSource {
 public:
  LazyLabeler(const Triangulation& t, Oracle& oracle, OwnerMap owners, QueryKind kind, int k);

  const Selection& label(std::size_t vertex) override;
  LabelKind kind() const override { return kind_ == QueryKind::cake_subset ? LabelKind::subset : LabelKind::tuple; }
  int pieces() const override { return t_.ambient().n; }
  int factors() const override { return kind_ == QueryKind::cake_subset ? 1 : t_.ambient().k; }
  bool concurrent() const override { return oracle_.concurrent(); }

  PlayerId player_of(std::size_t vertex) const;
  std::size_t oracle_calls() const { return calls_.load(); }

 private:
  Selection compute(std::size_t vertex);

  const Triangulation& t_;
  Oracle& oracle_;
  OwnerMap owners_;
  QueryKind kind_;
  int k_;
  std::vector<std::once_flag> once_;
  std::vector<Selection> labels_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace fairdiv
