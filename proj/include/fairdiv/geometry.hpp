#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairdiv/rational.hpp"

namespace fairdiv {

/// Sorted set of 0-based indices into [n].
using Subset = std::vector<int>;

/// Owner of a vertex in a complete triangulation, 1-based in [dim + 1].
using OwnerId = std::uint32_t;

/// A division of one cake (or one day) into n consecutive pieces: a point of
/// the standard simplex. Coordinates are nonnegative and sum to exactly 1.
class SimplexPoint {
 public:
  SimplexPoint() = default;
  /// Throws std::invalid_argument unless coords form a point of the simplex.
  explicit SimplexPoint(std::vector<Rational> coords);

  std::size_t size() const { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<Rational>& coords() const { return coords_; }

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  std::vector<Rational> coords_;
};

/// A point of P(n, k), one simplex point per factor (cake or day).
class PolytopePoint {
 public:
  PolytopePoint() = default;
  /// Throws std::invalid_argument if factors is empty or the factors disagree
  /// on n.
  explicit PolytopePoint(std::vector<SimplexPoint> factors);

  std::size_t factor_count() const { return factors_.size(); }
  std::size_t piece_count() const { return factors_.empty() ? 0 : factors_.front().size(); }
  const SimplexPoint& factor(std::size_t i) const { return factors_[i]; }
  const std::vector<SimplexPoint>& factors() const { return factors_; }

  /// Stable textual key, e.g. "1/2,1/2;1,0", used for caching.
  std::string key() const;

  friend bool operator==(const PolytopePoint&, const PolytopePoint&) = default;

 private:
  std::vector<SimplexPoint> factors_;
};

Subset support(const SimplexPoint& x);
Subset empty_set(const SimplexPoint& x);

/// Face F(J_1, ..., J_k) of P(n, k).
struct Face {
  std::vector<Subset> factor_supports;

  /// True iff supp(v_i) is contained in J_i for every factor.
  bool contains(const PolytopePoint& v) const;
};

enum class AmbientKind { simplex, product };

struct Ambient {
  AmbientKind kind = AmbientKind::simplex;
  int n = 1;
  int k = 1;

  int dimension() const { return k * (n - 1); }
  friend bool operator==(const Ambient&, const Ambient&) = default;
};

/// A triangulation of the simplex or of a product of simplices.
///
/// Vertex coordinates share one common denominator and are stored as integer
/// numerators, factor-major (k blocks of n entries per vertex). Cells are
/// sorted lists of dim + 1 vertex indices. Immutable once built.
class Triangulation {
 public:
  Triangulation(Ambient ambient, int mesh, std::int64_t denominator,
                std::vector<std::int64_t> numerators, std::vector<std::uint32_t> cells,
                std::vector<OwnerId> owners = {});

  const Ambient& ambient() const { return ambient_; }
  int mesh() const { return mesh_; }
  int dimension() const { return ambient_.dimension(); }
  std::size_t cell_size() const { return static_cast<std::size_t>(dimension()) + 1; }
  std::size_t coords_per_vertex() const { return static_cast<std::size_t>(ambient_.n * ambient_.k); }

  std::size_t vertex_count() const { return numerators_.size() / coords_per_vertex(); }
  std::size_t cell_count() const { return cells_.size() / cell_size(); }

  std::span<const std::uint32_t> cell(std::size_t c) const {
    return {cells_.data() + c * cell_size(), cell_size()};
  }

  std::int64_t denominator() const { return denominator_; }
  std::span<const std::int64_t> numerators(std::size_t v) const {
    return {numerators_.data() + v * coords_per_vertex(), coords_per_vertex()};
  }
  Rational coordinate(std::size_t v, int factor, int piece) const;
  PolytopePoint vertex(std::size_t v) const;
  Subset factor_support(std::size_t v, int factor) const;

  bool has_owners() const { return !owners_.empty(); }
  OwnerId owner(std::size_t v) const { return owners_.at(v); }
  const std::vector<OwnerId>& owners() const { return owners_; }

  /// Barycenter of a cell as an exact point.
  PolytopePoint cell_barycenter(std::size_t c) const;

 private:
  Ambient ambient_;
  int mesh_;
  std::int64_t denominator_;
  std::vector<std::int64_t> numerators_;
  std::vector<std::uint32_t> cells_;
  std::vector<OwnerId> owners_;
};

/// Lattice triangulation of the (n-1)-simplex at mesh m: vertices are the
/// points x/m with x a nonnegative integer vector summing to m, cells are the
/// order (Freudenthal) simplices. m^(n-1) cells.
Triangulation grid_triangulation(int n, int mesh);

/// Triangulation of P(n, k): each product of k grid cells is split by the
/// staircase triangulation induced by the global vertex order of each factor.
Triangulation product_triangulation(int n, int k, int mesh);

/// First barycentric subdivision with the complete owner assignment
/// owner(barycenter of a j-dimensional face) = j + 1.
Triangulation barycentric_complete(const Triangulation& t);

struct CompletenessReport {
  bool pass = false;
  std::optional<std::size_t> offending_cell;
  std::string message;
};

CompletenessReport validate_complete(const Triangulation& t);

/// Closed-form cell counts used by tests and diagnostics.
std::uint64_t grid_cell_count(int n, int mesh);
std::uint64_t product_cell_count(int n, int k, int mesh);
std::uint64_t factorial(int d);

}  // namespace fairdiv
