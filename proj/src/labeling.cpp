#include "fairdiv/labeling.hpp"

#include <algorithm>
#include <map>

namespace fairdiv {

void LabelingReport::fail(const std::string& condition, std::size_t vertex, const std::string& why) {
  if (pass) message = "vertex " + std::to_string(vertex) + ": " + why;
  pass = false;
  if (std::find(failed_conditions.begin(), failed_conditions.end(), condition) == failed_conditions.end()) {
    failed_conditions.push_back(condition);
  }
  if (std::find(offenders.begin(), offenders.end(), vertex) == offenders.end()) offenders.push_back(vertex);
}

OracleViolation::OracleViolation(PlayerId p, std::size_t v, std::string r, const std::string& detail)
    : std::runtime_error("player " + std::to_string(p) + " at vertex " + std::to_string(v) + " violated " + r + ": " +
                         detail),
      player(p),
      vertex(v),
      rule(std::move(r)) {}

namespace {

PlayerId owner_player(const Triangulation& t, const OwnerMap& owners, std::size_t v) {
  if (!t.has_owners()) throw std::invalid_argument("triangulation has no owners");
  const OwnerId o = t.owner(v);
  if (o == 0 || o > owners.size()) throw std::invalid_argument("owner " + std::to_string(o) + " has no player");
  return owners[o - 1];
}

QueryKind flavor_kind(TupleFlavor f) {
  return f == TupleFlavor::supportwise ? QueryKind::multicake_tuple : QueryKind::shift_tuple;
}

Selection ask(const Triangulation& t, Oracle& oracle, PlayerId player, std::size_t v, QueryKind kind, int k) {
  OracleQuery q;
  q.player = player;
  q.division = t.vertex(v);
  q.kind = kind;
  q.k = k;
  Selection s = oracle.select(q);
  if (auto bad = validate_selection(q, s)) throw OracleViolation(player, v, bad->rule, bad->message);
  if (kind == QueryKind::cake_subset) std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

SubsetLabeling build_subset_labeling(const Triangulation& t, Oracle& oracle, const OwnerMap& owners, int k) {
  if (t.ambient().k != 1) throw std::invalid_argument("subset labelings need a single-factor triangulation");
  SubsetLabeling out;
  out.labels.reserve(t.vertex_count());
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    out.labels.push_back(ask(t, oracle, owner_player(t, owners, v), v, QueryKind::cake_subset, k));
  }
  return out;
}

TupleLabeling build_tuple_labeling(const Triangulation& t, Oracle& oracle, const OwnerMap& owners, TupleFlavor flavor) {
  TupleLabeling out;
  out.flavor = flavor;
  out.labels.reserve(t.vertex_count());
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    out.labels.push_back(ask(t, oracle, owner_player(t, owners, v), v, flavor_kind(flavor), t.ambient().k));
  }
  return out;
}

int equivalent_component(const Subset& supp, int n, int original) {
  if (static_cast<int>(supp.size()) == n) return original;
  int best = n;
  for (int j : supp) {
    const int next = (j + 1) % n;
    if (!std::binary_search(supp.begin(), supp.end(), next)) best = std::min(best, next);
  }
  return best;
}

TupleLabeling to_equivalent_sperner(const TupleLabeling& dual, const Triangulation& t) {
  if (dual.labels.size() != t.vertex_count()) throw std::invalid_argument("labeling does not cover the triangulation");
  const int n = t.ambient().n;
  TupleLabeling out{dual.labels, TupleFlavor::factorwise_dual};
  for (std::size_t v = 0; v < out.labels.size(); ++v) {
    for (int f = 0; f < t.ambient().k; ++f) {
      auto& c = out.labels[v][static_cast<std::size_t>(f)];
      c = equivalent_component(t.factor_support(v, f), n, c);
    }
  }
  return out;
}

LabelingReport validate_subset_labeling(const SubsetLabeling& l, const Triangulation& t, int k) {
  LabelingReport r;
  if (l.labels.size() != t.vertex_count()) {
    r.pass = false;
    r.message = "labeling size differs from vertex count";
    r.failed_conditions.push_back("total");
    return r;
  }
  for (std::size_t v = 0; v < l.labels.size(); ++v) {
    const auto& label = l.labels[v];
    const Subset supp = t.factor_support(v, 0);
    if (static_cast<int>(label.size()) > k) r.fail("size", v, "label has more than k pieces");
    if (!std::includes(supp.begin(), supp.end(), label.begin(), label.end())) {
      r.fail("shapley", v, "label is not contained in the support");
    }
  }
  return r;
}

LabelingReport validate_tuple_labeling(const TupleLabeling& l, const Triangulation& t) {
  LabelingReport r;
  const int k = t.ambient().k;
  const int n = t.ambient().n;
  for (std::size_t v = 0; v < l.labels.size(); ++v) {
    const auto& label = l.labels[v];
    if (static_cast<int>(label.size()) != k) {
      r.fail("arity", v, "label has the wrong number of components");
      continue;
    }
    for (int f = 0; f < k; ++f) {
      const int c = label[static_cast<std::size_t>(f)];
      const Subset supp = t.factor_support(v, f);
      const bool in_supp = std::binary_search(supp.begin(), supp.end(), c);
      if (c < 0 || c >= n) {
        r.fail("range", v, "component out of range");
      } else if (l.flavor == TupleFlavor::supportwise && !in_supp) {
        r.fail("supportwise", v, "component " + std::to_string(f + 1) + " is not in the support");
      } else if (l.flavor == TupleFlavor::factorwise_dual && static_cast<int>(supp.size()) < n && in_supp) {
        r.fail("factorwise-dual", v, "component " + std::to_string(f + 1) + " is not in the empty set");
      }
    }
  }
  return r;
}

LabelingReport validate_sperner(const TupleLabeling& l, const Triangulation& t) {
  LabelingReport r;
  const int k = t.ambient().k;
  const int n = t.ambient().n;
  if (l.labels.size() != t.vertex_count()) {
    r.pass = false;
    r.failed_conditions.push_back("total");
    r.message = "labeling size differs from vertex count";
    return r;
  }
  // Polytope vertices: every factor support a singleton.
  std::map<Selection, std::size_t> corner;
  std::map<Selection, std::size_t> label_owner;
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    Selection w;
    bool is_corner = true;
    for (int f = 0; f < k && is_corner; ++f) {
      const Subset s = t.factor_support(v, f);
      if (s.size() != 1) is_corner = false;
      else w.push_back(s.front());
    }
    if (!is_corner) continue;
    corner.emplace(w, v);
    auto [it, fresh] = label_owner.emplace(l.labels[v], v);
    if (!fresh) r.fail("a", v, "polytope vertex repeats the label of vertex " + std::to_string(it->second));
  }
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    const auto& label = l.labels[v];
    if (static_cast<int>(label.size()) != k) {
      r.fail("b", v, "label has the wrong number of components");
      continue;
    }
    Selection w(static_cast<std::size_t>(k));
    bool ok = true;
    for (int f = 0; f < k; ++f) {
      const int c = label[static_cast<std::size_t>(f)];
      if (c < 0 || c >= n) {
        ok = false;
        break;
      }
      w[static_cast<std::size_t>(f)] = (c + n - 1) % n;
      const Subset supp = t.factor_support(v, f);
      if (!std::binary_search(supp.begin(), supp.end(), w[static_cast<std::size_t>(f)])) ok = false;
    }
    if (!ok) {
      r.fail("b", v, "label does not come from a vertex of its minimal face");
      continue;
    }
    auto it = corner.find(w);
    if (it == corner.end() || l.labels[it->second] != label) {
      r.fail("b", v, "label differs from the label of its corresponding polytope vertex");
    }
  }
  return r;
}

Subset LabelSource::edge(std::size_t vertex) {
  const Selection& l = label(vertex);
  if (kind() == LabelKind::subset) return l;
  Subset e(l.size());
  for (std::size_t f = 0; f < l.size(); ++f) e[f] = static_cast<int>(f) * pieces() + l[f];
  return e;
}

std::vector<int> LabelSource::partition() const {
  if (kind() == LabelKind::subset) return {};
  std::vector<int> part(static_cast<std::size_t>(ground_size()));
  for (std::size_t i = 0; i < part.size(); ++i) part[i] = static_cast<int>(i) / pieces();
  return part;
}

FixedLabels::FixedLabels(std::vector<Selection> labels, LabelKind kind, int n, int factors)
    : labels_(std::move(labels)), kind_(kind), n_(n), factors_(factors) {}

LazyLabeler::LazyLabeler(const Triangulation& t, Oracle& oracle, OwnerMap owners, QueryKind kind, int k)
    : t_(t), oracle_(oracle), owners_(std::move(owners)), kind_(kind), k_(k), once_(t.vertex_count()),
      labels_(t.vertex_count()) {
  if (!t.has_owners()) throw std::invalid_argument("lazy labeling needs a complete triangulation");
  if (kind == QueryKind::cake_subset && t.ambient().k != 1) {
    throw std::invalid_argument("subset labels need a single-factor triangulation");
  }
}

PlayerId LazyLabeler::player_of(std::size_t vertex) const { return owner_player(t_, owners_, vertex); }

const Selection& LazyLabeler::label(std::size_t vertex) {
  std::call_once(once_.at(vertex), [&] { labels_[vertex] = compute(vertex); });
  return labels_[vertex];
}

Selection LazyLabeler::compute(std::size_t v) {
  const int n = t_.ambient().n;
  const int k = t_.ambient().k;
  std::vector<Subset> supports;
  for (int f = 0; f < k; ++f) supports.push_back(t_.factor_support(v, f));

  switch (kind_) {
    case QueryKind::cake_subset:
      if (static_cast<int>(supports[0].size()) <= k_) return supports[0];
      break;
    case QueryKind::multicake_tuple:
      if (std::all_of(supports.begin(), supports.end(), [](const Subset& s) { return s.size() == 1; })) {
        Selection s;
        for (const auto& sup : supports) s.push_back(sup.front());
        return s;
      }
      break;
    case QueryKind::shift_tuple:
      if (std::all_of(supports.begin(), supports.end(), [&](const Subset& s) { return static_cast<int>(s.size()) < n; })) {
        Selection s;
        for (const auto& sup : supports) s.push_back(equivalent_component(sup, n, 0));
        return s;
      }
      break;
  }
  ++calls_;
  Selection s = ask(t_, oracle_, player_of(v), v, kind_, k_);
  if (kind_ == QueryKind::shift_tuple) {
    for (int f = 0; f < k; ++f) {
      auto& c = s[static_cast<std::size_t>(f)];
      c = equivalent_component(supports[static_cast<std::size_t>(f)], n, c);
    }
  }
  return s;
}

}  // namespace fairdiv
