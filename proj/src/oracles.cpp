#include "fairdiv/oracles.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace fairdiv {

Rational Density::cumulative(const Rational& x) const {
  Rational total;
  for (std::size_t s = 0; s < densities.size(); ++s) {
    const Rational& lo = breakpoints[s];
    if (x <= lo) break;
    const Rational hi = std::min(x, breakpoints[s + 1]);
    total += densities[s] * (hi - lo);
  }
  return total;
}

void Density::validate() const {
  if (breakpoints.size() < 2) throw std::invalid_argument("breakpoints: need at least 0 and 1");
  if (breakpoints.front() != Rational(0)) throw std::invalid_argument("breakpoints: first must be 0");
  if (breakpoints.back() != Rational(1)) throw std::invalid_argument("breakpoints: last must be 1");
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i - 1] < breakpoints[i])) {
      throw std::invalid_argument("breakpoints: not strictly increasing at index " + std::to_string(i));
    }
  }
  if (densities.size() + 1 != breakpoints.size()) {
    throw std::invalid_argument("densities: expected " + std::to_string(breakpoints.size() - 1) + " values, got " +
                                std::to_string(densities.size()));
  }
  for (std::size_t i = 0; i < densities.size(); ++i) {
    if (densities[i].sign() <= 0) throw std::invalid_argument("densities[" + std::to_string(i) + "]: must be > 0");
  }
}

const PlayerValuation& ValuationProfile::player(PlayerId id) const {
  for (const auto& p : players)
    if (p.id == id) return p;
  throw std::out_of_range("no valuation for player " + std::to_string(id));
}

bool ValuationProfile::has_player(PlayerId id) const {
  return std::any_of(players.begin(), players.end(), [&](const PlayerValuation& p) { return p.id == id; });
}

void ValuationProfile::validate() const {
  std::set<PlayerId> seen;
  for (std::size_t i = 0; i < players.size(); ++i) {
    const auto& p = players[i];
    const std::string where = "players[" + std::to_string(i) + "]";
    if (!seen.insert(p.id).second) throw std::invalid_argument(where + ".id: duplicate id " + std::to_string(p.id));
    if (p.factors.empty()) throw std::invalid_argument(where + ".factors: empty");
    if (p.factors.size() != players.front().factors.size()) {
      throw std::invalid_argument(where + ".factors: factor count differs from players[0]");
    }
    for (std::size_t f = 0; f < p.factors.size(); ++f) {
      try {
        p.factors[f].validate();
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(where + ".factors[" + std::to_string(f) + "]." + e.what());
      }
    }
  }
}

namespace {

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

constexpr std::int64_t kBreakpointGrid = 97;

}  // namespace

ValuationProfile random_profile(const std::vector<PlayerId>& ids, int factors, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ValuationProfile profile;
  for (PlayerId id : ids) {
    PlayerValuation pv;
    pv.id = id;
    for (int f = 0; f < factors; ++f) {
      const int segments = 1 + static_cast<int>(draw(rng, 4));
      std::set<std::int64_t> cuts;
      while (static_cast<int>(cuts.size()) < segments - 1) {
        cuts.insert(1 + static_cast<std::int64_t>(draw(rng, kBreakpointGrid - 1)));
      }
      Density d;
      d.breakpoints.emplace_back(0);
      for (auto c : cuts) d.breakpoints.emplace_back(c, kBreakpointGrid);
      d.breakpoints.emplace_back(1);
      for (int s = 0; s < segments; ++s) d.densities.emplace_back(1 + static_cast<std::int64_t>(draw(rng, 10)));
      pv.factors.push_back(std::move(d));
    }
    profile.players.push_back(std::move(pv));
  }
  return profile;
}

std::vector<Rational> piece_values(const Density& density, const SimplexPoint& division) {
  std::vector<Rational> values;
  values.reserve(division.size());
  Rational left;
  Rational left_value;
  for (std::size_t i = 0; i < division.size(); ++i) {
    const Rational right = left + division[i];
    const Rational right_value = density.cumulative(right);
    values.push_back(right_value - left_value);
    left = right;
    left_value = right_value;
  }
  return values;
}

const char* to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::cake_subset: return "cake_subset";
    case QueryKind::multicake_tuple: return "multicake_tuple";
    case QueryKind::shift_tuple: return "shift_tuple";
  }
  return "unknown";
}

std::size_t OracleQuery::arity() const {
  if (kind == QueryKind::cake_subset) {
    const auto s = support(division.factor(0)).size();
    return std::min(s, static_cast<std::size_t>(std::max(k, 0)));
  }
  return division.factor_count();
}

namespace {

const Density& factor_density(const ValuationProfile& profile, PlayerId player, std::size_t f) {
  const auto& pv = profile.player(player);
  if (f >= pv.factors.size()) {
    throw InvalidDivision("division has more factors than player " + std::to_string(player) + " has valuations");
  }
  return pv.factors[f];
}

// All r-subsets of items in lexicographic order, passed to visit.
template <class Visit>
void for_each_combination(const Subset& items, std::size_t r, Visit&& visit) {
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  Subset pick(r);
  while (true) {
    for (std::size_t i = 0; i < r; ++i) pick[i] = items[idx[i]];
    visit(pick);
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == items.size() - r + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

struct BestSubset {
  Selection best;
  Rational value;
  int ties = 0;
};

BestSubset best_subset(const ValuationProfile& profile, PlayerId player, const SimplexPoint& x, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const auto values = piece_values(factor_density(profile, player, 0), x);
  const Subset supp = support(x);
  const std::size_t r = std::min(supp.size(), static_cast<std::size_t>(k));
  BestSubset out;
  bool first = true;
  for_each_combination(supp, r, [&](const Subset& pick) {
    Rational v;
    for (int i : pick) v += values[static_cast<std::size_t>(i)];
    if (first || out.value < v) {
      out.best = pick;
      out.value = v;
      out.ties = 1;
      first = false;
    } else if (v == out.value) {
      ++out.ties;
    }
  });
  return out;
}

Rational subset_value(const ValuationProfile& profile, PlayerId player, const SimplexPoint& x, const Selection& s) {
  const auto values = piece_values(factor_density(profile, player, 0), x);
  Rational v;
  for (int i : s) v += values[static_cast<std::size_t>(i)];
  return v;
}

void require_shape(const PolytopePoint& division, std::size_t factors) {
  if (division.factor_count() != factors) {
    throw InvalidDivision("division has " + std::to_string(division.factor_count()) + " factors, expected " +
                          std::to_string(factors));
  }
}

}  // namespace

Selection cake_preference(const ValuationProfile& profile, PlayerId player, const SimplexPoint& division, int k) {
  return best_subset(profile, player, division, k).best;
}

Selection multicake_preference(const ValuationProfile& profile, PlayerId player, const PolytopePoint& division) {
  require_shape(division, profile.player(player).factors.size());
  Selection out;
  for (std::size_t f = 0; f < division.factor_count(); ++f) {
    const auto values = piece_values(factor_density(profile, player, f), division.factor(f));
    int best = -1;
    for (int i : support(division.factor(f))) {
      if (best < 0 || values[static_cast<std::size_t>(best)] < values[static_cast<std::size_t>(i)]) best = i;
    }
    out.push_back(best);
  }
  return out;
}

Selection shift_preference(const ValuationProfile& profile, PlayerId player, const PolytopePoint& division) {
  require_shape(division, profile.player(player).factors.size());
  Selection out;
  for (std::size_t f = 0; f < division.factor_count(); ++f) {
    const auto burden = piece_values(factor_density(profile, player, f), division.factor(f));
    int best = 0;
    for (int i = 1; i < static_cast<int>(burden.size()); ++i) {
      if (burden[static_cast<std::size_t>(i)] < burden[static_cast<std::size_t>(best)]) best = i;
    }
    out.push_back(best);
  }
  return out;
}

Selection simulated_answer(const ValuationProfile& profile, const OracleQuery& query) {
  switch (query.kind) {
    case QueryKind::cake_subset:
      require_shape(query.division, 1);
      return cake_preference(profile, query.player, query.division.factor(0), query.k);
    case QueryKind::multicake_tuple: return multicake_preference(profile, query.player, query.division);
    case QueryKind::shift_tuple: return shift_preference(profile, query.player, query.division);
  }
  throw std::logic_error("unknown query kind");
}

OptimumCheck check_optimum(const ValuationProfile& profile, const OracleQuery& query, const Selection& selection) {
  if (validate_selection(query, selection)) return {};
  if (query.kind == QueryKind::cake_subset) {
    const auto& x = query.division.factor(0);
    const auto best = best_subset(profile, query.player, x, query.k);
    Selection sorted = selection;
    std::sort(sorted.begin(), sorted.end());
    const bool optimal = subset_value(profile, query.player, x, sorted) == best.value;
    return {optimal, optimal && best.ties == 1};
  }
  OptimumCheck out{true, true};
  const bool maximize = query.kind == QueryKind::multicake_tuple;
  for (std::size_t f = 0; f < query.division.factor_count(); ++f) {
    const auto& x = query.division.factor(f);
    const auto values = piece_values(factor_density(profile, query.player, f), x);
    const Subset candidates = maximize ? support(x) : [&] {
      Subset all(x.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      return all;
    }();
    Rational best = values[static_cast<std::size_t>(candidates.front())];
    for (int i : candidates) {
      const auto& v = values[static_cast<std::size_t>(i)];
      if (maximize ? best < v : v < best) best = v;
    }
    int ties = 0;
    for (int i : candidates) ties += values[static_cast<std::size_t>(i)] == best ? 1 : 0;
    const bool hit = values[static_cast<std::size_t>(selection[f])] == best;
    out.optimal = out.optimal && hit;
    out.unique = out.unique && hit && ties == 1;
  }
  return out;
}

std::optional<Violation> validate_selection(const OracleQuery& query, const Selection& selection) {
  const std::size_t n = query.division.piece_count();
  const std::size_t want = query.arity();
  if (selection.size() != want) {
    return Violation{"arity", "expected " + std::to_string(want) + " entries, got " + std::to_string(selection.size())};
  }
  for (int s : selection) {
    if (s < 0 || static_cast<std::size_t>(s) >= n) {
      return Violation{"range", "piece " + std::to_string(s + 1) + " is outside 1.." + std::to_string(n)};
    }
  }
  if (query.kind == QueryKind::cake_subset) {
    Selection sorted = selection;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      return Violation{"arity", "a piece is selected twice"};
    }
    const auto& x = query.division.factor(0);
    for (int s : sorted) {
      if (x[static_cast<std::size_t>(s)].is_zero()) {
        return Violation{"hungry", "piece " + std::to_string(s + 1) + " is empty"};
      }
    }
    return std::nullopt;
  }
  for (std::size_t f = 0; f < selection.size(); ++f) {
    const auto& x = query.division.factor(f);
    const bool empty_choice = x[static_cast<std::size_t>(selection[f])].is_zero();
    if (query.kind == QueryKind::multicake_tuple && empty_choice) {
      return Violation{"hungry", "piece " + std::to_string(selection[f] + 1) + " of cake " + std::to_string(f + 1) +
                                     " is empty"};
    }
    if (query.kind == QueryKind::shift_tuple && !empty_choice && !empty_set(x).empty()) {
      return Violation{"prefer-empty", "day " + std::to_string(f + 1) + " has an empty shift but shift " +
                                           std::to_string(selection[f] + 1) + " is not empty"};
    }
  }
  return std::nullopt;
}

SimulatedOracle::SimulatedOracle(ValuationProfile profile) : profile_(std::move(profile)) { profile_.validate(); }

Selection SimulatedOracle::select(const OracleQuery& query) { return simulated_answer(profile_, query); }

std::optional<OptimumCheck> SimulatedOracle::check(const OracleQuery& query, const Selection& selection) {
  return check_optimum(profile_, query, selection);
}

void RoutingOracle::route(PlayerId player, std::shared_ptr<Oracle> oracle) { routes_[player] = std::move(oracle); }

Oracle& RoutingOracle::target(PlayerId player) const {
  auto it = routes_.find(player);
  if (it == routes_.end()) throw std::out_of_range("no oracle for player " + std::to_string(player));
  return *it->second;
}

Selection RoutingOracle::select(const OracleQuery& query) { return target(query.player).select(query); }

bool RoutingOracle::concurrent() const {
  return std::all_of(routes_.begin(), routes_.end(), [](const auto& r) { return r.second->concurrent(); });
}

std::optional<OptimumCheck> RoutingOracle::check(const OracleQuery& query, const Selection& selection) {
  return target(query.player).check(query, selection);
}

Selection CachingOracle::select(const OracleQuery& query) {
  std::string key = std::to_string(query.player) + '|' + to_string(query.kind) + '|' + std::to_string(query.k) + '|' +
                    query.division.key();
  std::promise<Selection> promise;
  std::shared_future<Selection> future;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      cache_.emplace(std::move(key), future);
      owner = true;
    }
  }
  if (owner) {
    try {
      promise.set_value(inner_.select(query));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return future.get();
}

std::size_t CachingOracle::inner_calls() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

Selection InteractiveOracle::select(const OracleQuery& query) {
  OracleQuery q = query;
  q.id = next_id_++;
  Selection s = channel_.ask(q);
  if (auto v = validate_selection(q, s)) {
    throw std::runtime_error("channel returned an invalid selection (" + v->rule + "): " + v->message);
  }
  if (q.kind == QueryKind::cake_subset) std::sort(s.begin(), s.end());
  return s;
}

}  // namespace fairdiv
