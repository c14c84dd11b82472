#pragma once

#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairdiv/geometry.hpp"
#include "fairdiv/rational.hpp"

namespace fairdiv {

using PlayerId = int;

/// 0-based piece indices: a sorted subset (single cake) or one entry per
/// factor (cakes, days).
using Selection = std::vector<int>;

/// Piecewise-constant density on [0, 1].
struct Density {
  std::vector<Rational> breakpoints;  // strictly increasing, 0 ... 1
  std::vector<Rational> densities;    // one per segment, all > 0

  /// Integral of the density over [0, x].
  Rational cumulative(const Rational& x) const;
  void validate() const;
};

struct PlayerValuation {
  PlayerId id = 0;
  std::vector<Density> factors;  // one per cake / day
};

struct ValuationProfile {
  std::vector<PlayerValuation> players;

  const PlayerValuation& player(PlayerId id) const;
  bool has_player(PlayerId id) const;
  /// Throws std::invalid_argument naming the offending player/factor/field.
  void validate() const;
};

/// Seeded random profile: per player and factor, a random partition of
/// [0, 1] into 1-4 segments with integer densities in [1, 10].
ValuationProfile random_profile(const std::vector<PlayerId>& ids, int factors, std::uint64_t seed);

/// Values of the n consecutive pieces of widths x_1..x_n under a density.
std::vector<Rational> piece_values(const Density& density, const SimplexPoint& division);

enum class QueryKind { cake_subset, multicake_tuple, shift_tuple };

const char* to_string(QueryKind kind);

struct OracleQuery {
  std::uint64_t id = 0;
  PlayerId player = 0;
  PolytopePoint division;
  QueryKind kind = QueryKind::cake_subset;
  int k = 1;  // pieces per player in cake mode

  /// Number of entries a valid selection must have.
  std::size_t arity() const;
};

class InvalidDivision : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Best subset of supp(division) of size min(k, |supp|); ties broken
/// lexicographically on the sorted subset.
Selection cake_preference(const ValuationProfile& profile, PlayerId player, const SimplexPoint& division, int k);
/// Per cake, the most valuable piece in that cake's support (ties to lowest).
Selection multicake_preference(const ValuationProfile& profile, PlayerId player, const PolytopePoint& division);
/// Per day, the least burdensome shift (ties to lowest); empty shifts cost 0.
Selection shift_preference(const ValuationProfile& profile, PlayerId player, const PolytopePoint& division);

/// Dispatches on query.kind.
Selection simulated_answer(const ValuationProfile& profile, const OracleQuery& query);

struct OptimumCheck {
  bool optimal = false;  // selection attains the best value
  bool unique = false;   // and no other selection does
};

OptimumCheck check_optimum(const ValuationProfile& profile, const OracleQuery& query, const Selection& selection);

struct Violation {
  std::string rule;  // "arity", "range", "hungry" or "prefer-empty"
  std::string message;
};

/// Structural and axiom checks applied to every answer, human or simulated.
std::optional<Violation> validate_selection(const OracleQuery& query, const Selection& selection);

class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Selection select(const OracleQuery& query) = 0;
  /// Whether select() may be called from several threads at once.
  virtual bool concurrent() const { return true; }
  /// Tie information for the final consistency check, when the oracle knows it.
  virtual std::optional<OptimumCheck> check(const OracleQuery&, const Selection&) { return std::nullopt; }
};

class SimulatedOracle : public Oracle {
 public:
  explicit SimulatedOracle(ValuationProfile profile);
  Selection select(const OracleQuery& query) override;
  std::optional<OptimumCheck> check(const OracleQuery& query, const Selection& selection) override;
  const ValuationProfile& profile() const { return profile_; }

 private:
  ValuationProfile profile_;
};

/// Sends each player's queries to that player's oracle.
class RoutingOracle : public Oracle {
 public:
  void route(PlayerId player, std::shared_ptr<Oracle> oracle);
  Selection select(const OracleQuery& query) override;
  bool concurrent() const override;
  std::optional<OptimumCheck> check(const OracleQuery& query, const Selection& selection) override;

 private:
  Oracle& target(PlayerId player) const;
  std::map<PlayerId, std::shared_ptr<Oracle>> routes_;
};

/// Memoizes answers by (player, kind, exact division). Concurrent requests for
/// one key resolve to a single inner call.
class CachingOracle : public Oracle {
 public:
  explicit CachingOracle(Oracle& inner) : inner_(inner) {}
  Selection select(const OracleQuery& query) override;
  bool concurrent() const override { return inner_.concurrent(); }
  std::optional<OptimumCheck> check(const OracleQuery& query, const Selection& selection) override {
    return inner_.check(query, selection);
  }
  std::size_t inner_calls() const;

 private:
  Oracle& inner_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_future<Selection>> cache_;
};

/// Channel to a human; ask() blocks until a valid answer arrives.
class AnswerChannel {
 public:
  virtual ~AnswerChannel() = default;
  virtual Selection ask(const OracleQuery& query) = 0;
};

/// Forwards queries to a live session. Assigns query ids and re-checks the
/// answer it gets back.
class InteractiveOracle : public Oracle {
 public:
  explicit InteractiveOracle(AnswerChannel& channel) : channel_(channel) {}
  Selection select(const OracleQuery& query) override;
  bool concurrent() const override { return false; }

 private:
  AnswerChannel& channel_;
  std::uint64_t next_id_ = 1;
};

}  // namespace fairdiv
