#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairdiv/geometry.hpp"
#include "fairdiv/hypergraph.hpp"
#include "fairdiv/oracles.hpp"
#include "fairdiv/solver.hpp"

namespace fairdiv {

using nlohmann::json;

/// Malformed input, with the JSON path (e.g. "players[2].factors[0].densities")
/// or source line of the problem.
class JsonError : public std::runtime_error {
 public:
  JsonError(std::string where, const std::string& what);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Parses text, turning syntax errors into JsonError naming line and column.
json parse_json_text(const std::string& text, const std::string& source = "input");
json read_json_file(const std::filesystem::path& path);

json rational_to_json(const Rational& r);
/// Accepts "p/q" strings and integers.
Rational rational_from_json(const json& j, const std::string& path);

/// [["p/q", ...], ...], one array per factor.
json point_to_json(const PolytopePoint& x);
/// Per factor, coordinates rounded to four decimals.
json point_approx_json(const PolytopePoint& x);
PolytopePoint point_from_json(const json& j, const std::string& path);

/// {ambient, mesh, vertices, cells, owners[, labels]}; labels 1-based.
json triangulation_to_json(const Triangulation& t, const std::vector<Selection>* labels = nullptr);

json profile_to_json(const ValuationProfile& profile);
ValuationProfile profile_from_json(const json& j);

/// Hypergraph file: {vertices: N, partition?: [[...]], edges: [[...]]} with
/// vertices numbered 1..N.
Hypergraph hypergraph_from_json(const json& j);
json hypergraph_to_json(const Hypergraph& h);
/// nu, nu*, tau, tau* and their certificates.
json hypergraph_analysis(const Hypergraph& h, SearchBudget budget = {});

/// Selections cross the wire 1-based.
json selection_to_json(const Selection& s);
Selection selection_from_json(const json& j, const std::string& path);

json query_to_json(const OracleQuery& q, const std::string& framing);

json report_to_json(const SolveReport& report);
/// Pretty-printed report text; byte-identical for identical reports.
std::string render_report(const SolveReport& report);

}  // namespace fairdiv
