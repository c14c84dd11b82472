#include "fairdiv/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fairdiv {

JsonError::JsonError(std::string where, const std::string& what)
    : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw JsonError(source + ":" + std::to_string(line) + ":" + std::to_string(column), "malformed JSON");
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw JsonError(path.string(), "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

json rational_to_json(const Rational& r) { return r.to_string(); }

Rational rational_from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) throw JsonError(path, "expected a rational string such as \"1/3\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw JsonError(path, e.what());
  }
}

json point_to_json(const PolytopePoint& x) {
  json out = json::array();
  for (const auto& f : x.factors()) {
    json row = json::array();
    for (const auto& c : f.coords()) row.push_back(rational_to_json(c));
    out.push_back(std::move(row));
  }
  return out;
}

json point_approx_json(const PolytopePoint& x) {
  json out = json::array();
  for (const auto& f : x.factors()) {
    json row = json::array();
    for (const auto& c : f.coords()) row.push_back(std::round(c.to_double() * 1e4) / 1e4);
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

const json& field(const json& j, const char* name, const std::string& path) {
  if (!j.is_object()) throw JsonError(path, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw JsonError(path + "." + name, "missing field");
  return *it;
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) throw JsonError(path, "expected an array");
  return j;
}

int int_from(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw JsonError(path, "expected an integer");
  return j.get<int>();
}

}  // namespace

PolytopePoint point_from_json(const json& j, const std::string& path) {
  std::vector<SimplexPoint> factors;
  const auto& arr = array_at(j, path);
  for (std::size_t f = 0; f < arr.size(); ++f) {
    const std::string fp = path + "[" + std::to_string(f) + "]";
    std::vector<Rational> coords;
    const auto& row = array_at(arr[f], fp);
    for (std::size_t i = 0; i < row.size(); ++i) coords.push_back(rational_from_json(row[i], fp + "[" + std::to_string(i) + "]"));
    try {
      factors.emplace_back(std::move(coords));
    } catch (const std::invalid_argument& e) {
      throw JsonError(fp, e.what());
    }
  }
  try {
    return PolytopePoint(std::move(factors));
  } catch (const std::invalid_argument& e) {
    throw JsonError(path, e.what());
  }
}

json selection_to_json(const Selection& s) {
  json out = json::array();
  for (int x : s) out.push_back(x + 1);
  return out;
}

Selection selection_from_json(const json& j, const std::string& path) {
  Selection s;
  const auto& arr = array_at(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) s.push_back(int_from(arr[i], path + "[" + std::to_string(i) + "]") - 1);
  return s;
}

json triangulation_to_json(const Triangulation& t, const std::vector<Selection>* labels) {
  json out;
  const auto& a = t.ambient();
  out["ambient"] = {{"kind", a.kind == AmbientKind::simplex ? "simplex" : "product"}, {"n", a.n}, {"k", a.k}};
  out["mesh"] = t.mesh();
  json vertices = json::array();
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    json row = json::array();
    for (int f = 0; f < a.k; ++f)
      for (int i = 0; i < a.n; ++i) row.push_back(rational_to_json(t.coordinate(v, f, i)));
    vertices.push_back(std::move(row));
  }
  out["vertices"] = std::move(vertices);
  json cells = json::array();
  for (std::size_t c = 0; c < t.cell_count(); ++c) {
    auto cell = t.cell(c);
    cells.push_back(std::vector<std::uint32_t>(cell.begin(), cell.end()));
  }
  out["cells"] = std::move(cells);
  out["owners"] = t.owners();
  if (labels) {
    json l = json::array();
    for (const auto& s : *labels) l.push_back(selection_to_json(s));
    out["labels"] = std::move(l);
  }
  return out;
}

json profile_to_json(const ValuationProfile& profile) {
  json players = json::array();
  for (const auto& p : profile.players) {
    json factors = json::array();
    for (const auto& d : p.factors) {
      json bp = json::array();
      json dens = json::array();
      for (const auto& b : d.breakpoints) bp.push_back(rational_to_json(b));
      for (const auto& x : d.densities) dens.push_back(rational_to_json(x));
      factors.push_back({{"breakpoints", std::move(bp)}, {"densities", std::move(dens)}});
    }
    players.push_back({{"id", p.id}, {"factors", std::move(factors)}});
  }
  return {{"players", std::move(players)}};
}

ValuationProfile profile_from_json(const json& j) {
  ValuationProfile profile;
  const auto& players = array_at(field(j, "players", "$"), "$.players");
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string pp = "players[" + std::to_string(i) + "]";
    PlayerValuation pv;
    pv.id = int_from(field(players[i], "id", pp), pp + ".id");
    const auto& factors = array_at(field(players[i], "factors", pp), pp + ".factors");
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const std::string fp = pp + ".factors[" + std::to_string(f) + "]";
      Density d;
      const auto& bp = array_at(field(factors[f], "breakpoints", fp), fp + ".breakpoints");
      for (std::size_t b = 0; b < bp.size(); ++b)
        d.breakpoints.push_back(rational_from_json(bp[b], fp + ".breakpoints[" + std::to_string(b) + "]"));
      const auto& dens = array_at(field(factors[f], "densities", fp), fp + ".densities");
      for (std::size_t b = 0; b < dens.size(); ++b)
        d.densities.push_back(rational_from_json(dens[b], fp + ".densities[" + std::to_string(b) + "]"));
      pv.factors.push_back(std::move(d));
    }
    profile.players.push_back(std::move(pv));
  }
  try {
    profile.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    if (colon == std::string::npos) throw JsonError("$", msg);
    throw JsonError(msg.substr(0, colon), msg.substr(colon + 2));
  }
  return profile;
}

Hypergraph hypergraph_from_json(const json& j) {
  const int n = int_from(field(j, "vertices", "$"), "$.vertices");
  if (n < 0) throw JsonError("$.vertices", "must be nonnegative");
  std::vector<Subset> edges;
  const auto& es = array_at(field(j, "edges", "$"), "$.edges");
  for (std::size_t e = 0; e < es.size(); ++e) {
    const std::string ep = "edges[" + std::to_string(e) + "]";
    Subset s = selection_from_json(es[e], ep);
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw JsonError(ep, "repeated vertex");
    for (int v : s)
      if (v < 0 || v >= n) throw JsonError(ep, "vertex " + std::to_string(v + 1) + " out of range 1.." + std::to_string(n));
    if (s.empty()) throw JsonError(ep, "empty edge");
    edges.push_back(std::move(s));
  }
  std::vector<int> part;
  if (j.contains("partition")) {
    part.assign(static_cast<std::size_t>(n), -1);
    const auto& parts = array_at(j["partition"], "partition");
    for (std::size_t p = 0; p < parts.size(); ++p) {
      const std::string pp = "partition[" + std::to_string(p) + "]";
      for (int v : selection_from_json(parts[p], pp)) {
        if (v < 0 || v >= n) throw JsonError(pp, "vertex out of range");
        if (part[static_cast<std::size_t>(v)] != -1) throw JsonError(pp, "vertex " + std::to_string(v + 1) + " is in two parts");
        part[static_cast<std::size_t>(v)] = static_cast<int>(p);
      }
    }
    for (int v = 0; v < n; ++v)
      if (part[static_cast<std::size_t>(v)] < 0) throw JsonError("partition", "vertex " + std::to_string(v + 1) + " is unassigned");
  }
  return Hypergraph(n, std::move(edges), std::move(part));
}

json hypergraph_to_json(const Hypergraph& h) {
  json out;
  out["vertices"] = h.vertex_count;
  json edges = json::array();
  for (const auto& e : h.edges) edges.push_back(selection_to_json(e));
  out["edges"] = std::move(edges);
  if (h.has_partition()) {
    json parts = json::array();
    for (int p = 0; p < h.part_count(); ++p) {
      Selection members;
      for (int v = 0; v < h.vertex_count; ++v)
        if (h.part_of[static_cast<std::size_t>(v)] == p) members.push_back(v);
      parts.push_back(selection_to_json(members));
    }
    out["partition"] = std::move(parts);
  }
  return out;
}

namespace {

json rationals(const std::vector<Rational>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(rational_to_json(x));
  return out;
}

json indices_1based(const std::vector<std::size_t>& xs) {
  json out = json::array();
  for (auto x : xs) out.push_back(x + 1);
  return out;
}

}  // namespace

json hypergraph_analysis(const Hypergraph& h, SearchBudget budget) {
  json out;
  out["vertices"] = h.vertex_count;
  out["edges"] = h.edges.size();
  out["rank"] = h.rank();
  const auto nu_star = fractional_matching_number(h);
  const auto tau_star = fractional_cover_number(h);
  const auto nu = max_matching(h, budget);
  const auto tau = min_cover(h, budget);
  out["nu"] = nu.size();
  out["nu_star"] = rational_to_json(nu_star.value);
  out["tau_star"] = rational_to_json(tau_star.value);
  out["tau"] = tau.size();
  json cert;
  cert["matching"] = indices_1based(nu.edges);
  cert["fractional_matching"] = rationals(nu_star.weights);
  cert["fractional_cover"] = rationals(tau_star.weights);
  cert["cover"] = selection_to_json(tau.vertices);
  if (auto perfect = perfect_fractional_matching(h)) cert["perfect_fractional_matching"] = rationals(perfect->weights);
  else cert["perfect_fractional_matching"] = nullptr;
  out["certificates"] = std::move(cert);
  if (h.rank() >= 2) {
    const auto f = check_furedi(h, budget);
    json fr{{"general", f.general_holds}};
    if (f.partite_holds) fr["partite"] = *f.partite_holds;
    out["furedi"] = std::move(fr);
  }
  return out;
}

json query_to_json(const OracleQuery& q, const std::string& framing) {
  json out;
  out["id"] = q.id;
  out["player"] = q.player;
  out["kind"] = to_string(q.kind);
  out["framing"] = framing;
  out["k"] = q.k;
  out["arity"] = q.arity();
  out["pieces"] = q.division.piece_count();
  out["division"] = point_to_json(q.division);
  out["approx"] = point_approx_json(q.division);
  json empties = json::array();
  for (const auto& f : q.division.factors()) empties.push_back(selection_to_json(empty_set(f)));
  out["empty"] = std::move(empties);
  return out;
}

namespace {

json assignment_json(const Assignment& a, const char* selection_key) {
  return {{"player", a.player}, {selection_key, selection_to_json(a.selection)}, {"vertex", a.vertex}, {"owner", a.owner}};
}

}  // namespace

json report_to_json(const SolveReport& r) {
  json out;
  out["mode"] = to_string(r.spec.mode);
  out["n"] = r.spec.n;
  out["k"] = r.spec.k;
  out["p"] = r.spec.p();
  out["players"] = r.spec.players;
  out["mesh"] = {{"initial", r.spec.mesh.initial}, {"factor", r.spec.mesh.factor}, {"rounds", r.spec.mesh.max_rounds}};
  out["epsilon"] = r.spec.epsilon;
  out["division"] = point_to_json(r.division);
  out["division_approx"] = point_approx_json(r.division);
  out["final_round"] = r.final_round;
  json satisfied = json::array();
  for (const auto& a : r.satisfied) satisfied.push_back(assignment_json(a, "selection"));
  out["satisfied"] = std::move(satisfied);
  json cover = json::array();
  for (const auto& a : r.cover) cover.push_back(assignment_json(a, "tuple"));
  out["cover"] = std::move(cover);
  json bound{{"guaranteed", r.bound.value},
             {"achieved", r.achieved},
             {"form", r.bound.form},
             {"direction", r.bound.upper ? "at_most" : "at_least"},
             {"attained", r.attained}};
  if (r.tau_star) bound["tau_star"] = rational_to_json(*r.tau_star);
  out["bound"] = std::move(bound);
  json labels = json::array();
  for (const auto& l : r.certificate.labels) labels.push_back(selection_to_json(l));
  out["certificate"] = {{"cell", r.certificate.cell},
                        {"vertices", r.certificate.vertices},
                        {"owners", r.certificate.owners},
                        {"players", r.certificate.players},
                        {"labels", std::move(labels)},
                        {"weights", rationals(r.certificate.weights)}};
  json trace = json::array();
  for (const auto& t : r.trace) {
    json row{{"round", t.round},
             {"mesh", t.mesh},
             {"cell", t.cell},
             {"cells", t.cell_count},
             {"scanned", t.cells_scanned},
             {"achieved", t.achieved},
             {"bound_met", t.bound_met},
             {"players", t.players},
             {"division", point_to_json(t.division)}};
    row["drift"] = t.drift ? json(rational_to_json(*t.drift)) : json(nullptr);
    row["drift_approx"] = t.drift ? json(t.drift->to_double()) : json(nullptr);
    trace.push_back(std::move(row));
  }
  out["trace"] = std::move(trace);
  out["flags"] = {{"unstable", r.flags.unstable},
                  {"tie_hit", r.flags.tie_hit},
                  {"unconfirmed", r.flags.unconfirmed},
                  {"matching_fallback", r.flags.matching_fallback},
                  {"bound_violated", r.flags.bound_violated}};
  json consistency = json::array();
  for (const auto& c : r.consistency) consistency.push_back({{"player", c.player}, {"confirmed", c.confirmed}, {"tie", c.tie}});
  out["consistency"] = std::move(consistency);
  return out;
}

std::string render_report(const SolveReport& report) { return report_to_json(report).dump(2) + "\n"; }

}  // namespace fairdiv
