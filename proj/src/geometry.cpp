#include "fairdiv/geometry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace fairdiv {

SimplexPoint::SimplexPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("simplex point needs at least one coordinate");
  Rational total;
  for (const auto& c : coords_) {
    if (c.sign() < 0) throw std::invalid_argument("simplex point has a negative coordinate");
    total += c;
  }
  if (total != Rational(1)) {
    throw std::invalid_argument("simplex point coordinates sum to " + total.to_string() + ", not 1");
  }
}

PolytopePoint::PolytopePoint(std::vector<SimplexPoint> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("polytope point needs at least one factor");
  for (const auto& f : factors_) {
    if (f.size() != factors_.front().size()) {
      throw std::invalid_argument("polytope point factors differ in piece count");
    }
  }
}

std::string PolytopePoint::key() const {
  std::string out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out += ';';
    for (std::size_t j = 0; j < factors_[i].size(); ++j) {
      if (j) out += ',';
      out += factors_[i][j].to_string();
    }
  }
  return out;
}

Subset support(const SimplexPoint& x) {
  Subset s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i].is_zero()) s.push_back(static_cast<int>(i));
  }
  return s;
}

Subset empty_set(const SimplexPoint& x) {
  Subset s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) s.push_back(static_cast<int>(i));
  }
  return s;
}

bool Face::contains(const PolytopePoint& v) const {
  if (v.factor_count() != factor_supports.size()) return false;
  for (std::size_t i = 0; i < factor_supports.size(); ++i) {
    for (int j : support(v.factor(i))) {
      if (!std::binary_search(factor_supports[i].begin(), factor_supports[i].end(), j)) return false;
    }
  }
  return true;
}

Triangulation::Triangulation(Ambient ambient, int mesh, std::int64_t denominator,
                             std::vector<std::int64_t> numerators, std::vector<std::uint32_t> cells,
                             std::vector<OwnerId> owners)
    : ambient_(ambient),
      mesh_(mesh),
      denominator_(denominator),
      numerators_(std::move(numerators)),
      cells_(std::move(cells)),
      owners_(std::move(owners)) {
  if (ambient_.n < 1 || ambient_.k < 1) throw std::invalid_argument("ambient needs n >= 1 and k >= 1");
  if (denominator_ <= 0) throw std::invalid_argument("triangulation denominator must be positive");
  if (numerators_.size() % coords_per_vertex() != 0 || cells_.size() % cell_size() != 0) {
    throw std::invalid_argument("triangulation arrays have inconsistent sizes");
  }
  if (!owners_.empty() && owners_.size() != vertex_count()) {
    throw std::invalid_argument("owner table size differs from vertex count");
  }
}

Rational Triangulation::coordinate(std::size_t v, int factor, int piece) const {
  return Rational(numerators(v)[static_cast<std::size_t>(factor * ambient_.n + piece)], denominator_);
}

PolytopePoint Triangulation::vertex(std::size_t v) const {
  std::vector<SimplexPoint> factors;
  factors.reserve(static_cast<std::size_t>(ambient_.k));
  for (int f = 0; f < ambient_.k; ++f) {
    std::vector<Rational> coords;
    coords.reserve(static_cast<std::size_t>(ambient_.n));
    for (int i = 0; i < ambient_.n; ++i) coords.push_back(coordinate(v, f, i));
    factors.emplace_back(std::move(coords));
  }
  return PolytopePoint(std::move(factors));
}

Subset Triangulation::factor_support(std::size_t v, int factor) const {
  auto nums = numerators(v);
  Subset s;
  for (int i = 0; i < ambient_.n; ++i) {
    if (nums[static_cast<std::size_t>(factor * ambient_.n + i)] != 0) s.push_back(i);
  }
  return s;
}

PolytopePoint Triangulation::cell_barycenter(std::size_t c) const {
  std::vector<std::int64_t> sum(coords_per_vertex(), 0);
  for (auto v : cell(c)) {
    auto nums = numerators(v);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += nums[i];
  }
  auto count = static_cast<std::int64_t>(cell_size());
  std::vector<SimplexPoint> factors;
  for (int f = 0; f < ambient_.k; ++f) {
    std::vector<Rational> coords;
    for (int i = 0; i < ambient_.n; ++i) {
      coords.emplace_back(sum[static_cast<std::size_t>(f * ambient_.n + i)],
                          denominator_ * count);
    }
    factors.emplace_back(std::move(coords));
  }
  return PolytopePoint(std::move(factors));
}

std::uint64_t factorial(int d) {
  std::uint64_t r = 1;
  for (int i = 2; i <= d; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t grid_cell_count(int n, int mesh) {
  std::uint64_t r = 1;
  for (int i = 0; i < n - 1; ++i) r *= static_cast<std::uint64_t>(mesh);
  return r;
}

std::uint64_t product_cell_count(int n, int k, int mesh) {
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r *= grid_cell_count(n, mesh);
  std::uint64_t shuffles = factorial(k * (n - 1));
  for (int i = 0; i < k; ++i) shuffles /= factorial(n - 1);
  return r * shuffles;
}

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

void require_params(int n, int k, int mesh) {
  if (n < 1) throw std::invalid_argument("piece count n must be at least 1");
  if (k < 1) throw std::invalid_argument("factor count k must be at least 1");
  if (mesh < 1) throw std::invalid_argument("mesh must be at least 1");
}

// Lattice triangulation in cumulative coordinates y_j = x_1 + ... + x_j, where
// the simplex becomes 0 <= y_1 <= ... <= y_d <= m and the Kuhn cells
// (base b, permutation pi) inside that region are the cells.
struct GridData {
  std::vector<std::vector<int>> lattice;  // x-coordinates, size n each
  std::vector<std::vector<std::uint32_t>> cells;  // chain order == index order
};

GridData build_grid(int n, int mesh) {
  const int d = n - 1;
  std::vector<std::vector<int>> ys;
  std::vector<int> y(static_cast<std::size_t>(d), 0);
  // enumerate non-decreasing sequences in [0, m]
  auto rec = [&](auto&& self, int pos, int lo) -> void {
    if (pos == d) {
      ys.push_back(y);
      return;
    }
    for (int v = lo; v <= mesh; ++v) {
      y[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, v);
    }
  };
  rec(rec, 0, 0);
  std::stable_sort(ys.begin(), ys.end(), [](const auto& a, const auto& b) {
    int la = std::accumulate(a.begin(), a.end(), 0);
    int lb = std::accumulate(b.begin(), b.end(), 0);
    if (la != lb) return la < lb;
    return a < b;
  });
  std::map<std::vector<int>, std::uint32_t> index;
  GridData g;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    index.emplace(ys[i], static_cast<std::uint32_t>(i));
    std::vector<int> x(static_cast<std::size_t>(n));
    int prev = 0;
    for (int j = 0; j < d; ++j) {
      x[static_cast<std::size_t>(j)] = ys[i][static_cast<std::size_t>(j)] - prev;
      prev = ys[i][static_cast<std::size_t>(j)];
    }
    x[static_cast<std::size_t>(d)] = mesh - prev;
    g.lattice.push_back(std::move(x));
  }

  std::vector<int> base(static_cast<std::size_t>(d), 0);
  auto emit_cells = [&]() {
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      // when b_i == b_{i+1}, i+1 must move first to keep y_i <= y_{i+1}
      bool ok = true;
      std::vector<int> pos(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) pos[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = j;
      for (int i = 0; i + 1 < d && ok; ++i) {
        if (base[static_cast<std::size_t>(i)] == base[static_cast<std::size_t>(i + 1)] &&
            pos[static_cast<std::size_t>(i + 1)] > pos[static_cast<std::size_t>(i)]) {
          ok = false;
        }
      }
      if (!ok) continue;
      std::vector<std::uint32_t> cell;
      std::vector<int> cur = base;
      cell.push_back(index.at(cur));
      for (int j = 0; j < d; ++j) {
        ++cur[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
        cell.push_back(index.at(cur));
      }
      g.cells.push_back(std::move(cell));
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  auto rec_base = [&](auto&& self, int pos, int lo) -> void {
    if (pos == d) {
      emit_cells();
      return;
    }
    for (int v = lo; v < mesh; ++v) {
      base[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, v);
    }
  };
  rec_base(rec_base, 0, 0);
  return g;
}

}  // namespace

Triangulation grid_triangulation(int n, int mesh) {
  require_params(n, 1, mesh);
  GridData g = build_grid(n, mesh);
  std::vector<std::int64_t> nums;
  nums.reserve(g.lattice.size() * static_cast<std::size_t>(n));
  for (const auto& x : g.lattice) nums.insert(nums.end(), x.begin(), x.end());
  std::vector<std::uint32_t> cells;
  for (const auto& c : g.cells) cells.insert(cells.end(), c.begin(), c.end());
  return Triangulation(Ambient{AmbientKind::simplex, n, 1}, mesh, mesh, std::move(nums), std::move(cells));
}

Triangulation product_triangulation(int n, int k, int mesh) {
  require_params(n, k, mesh);
  GridData g = build_grid(n, mesh);
  const std::size_t gv = g.lattice.size();
  const std::size_t gc = g.cells.size();
  const int fd = n - 1;

  std::size_t vertex_total = 1;
  for (int i = 0; i < k; ++i) vertex_total *= gv;
  // Product vertices in mixed radix order, factor 0 most significant.
  std::vector<std::int64_t> nums;
  nums.reserve(vertex_total * static_cast<std::size_t>(n * k));
  std::vector<std::size_t> digits(static_cast<std::size_t>(k), 0);
  for (std::size_t v = 0; v < vertex_total; ++v) {
    std::size_t rest = v;
    for (int f = k - 1; f >= 0; --f) {
      digits[static_cast<std::size_t>(f)] = rest % gv;
      rest /= gv;
    }
    for (int f = 0; f < k; ++f) {
      const auto& x = g.lattice[digits[static_cast<std::size_t>(f)]];
      nums.insert(nums.end(), x.begin(), x.end());
    }
  }

  std::vector<std::uint32_t> cells;
  cells.reserve(product_cell_count(n, k, mesh) * static_cast<std::size_t>(k * fd + 1));
  std::vector<int> steps;
  for (int f = 0; f < k; ++f) steps.insert(steps.end(), static_cast<std::size_t>(fd), f);

  std::size_t tuple_total = 1;
  for (int i = 0; i < k; ++i) tuple_total *= gc;
  std::vector<std::size_t> cell_of(static_cast<std::size_t>(k));
  std::vector<int> level(static_cast<std::size_t>(k));
  for (std::size_t t = 0; t < tuple_total; ++t) {
    std::size_t rest = t;
    for (int f = k - 1; f >= 0; --f) {
      cell_of[static_cast<std::size_t>(f)] = rest % gc;
      rest /= gc;
    }
    std::vector<int> path = steps;
    do {
      std::fill(level.begin(), level.end(), 0);
      auto emit = [&]() {
        std::size_t idx = 0;
        for (int f = 0; f < k; ++f) {
          idx = idx * gv + g.cells[cell_of[static_cast<std::size_t>(f)]][static_cast<std::size_t>(level[static_cast<std::size_t>(f)])];
        }
        cells.push_back(static_cast<std::uint32_t>(idx));
      };
      emit();
      for (int s : path) {
        ++level[static_cast<std::size_t>(s)];
        emit();
      }
    } while (std::next_permutation(path.begin(), path.end()));
  }
  return Triangulation(Ambient{AmbientKind::product, n, k}, mesh, mesh, std::move(nums), std::move(cells));
}

Triangulation barycentric_complete(const Triangulation& t) {
  if (t.has_owners()) throw std::invalid_argument("barycentric_complete expects a triangulation without owners");
  const int d = t.dimension();
  const std::size_t cs = t.cell_size();
  const std::size_t width = t.coords_per_vertex();
  std::int64_t lcm = 1;
  for (int i = 2; i <= d + 1; ++i) lcm = checked_lcm(lcm, i);
  const std::int64_t denominator = t.denominator() * lcm;

  std::unordered_map<std::vector<std::int64_t>, std::uint32_t, VectorHash> index;
  std::vector<std::int64_t> nums;
  std::vector<OwnerId> owners;
  std::vector<std::uint32_t> cells;
  const std::uint64_t flags = factorial(d + 1);
  cells.reserve(t.cell_count() * flags * cs);

  const std::uint32_t masks = 1u << cs;
  std::vector<std::uint32_t> face_vertex(masks);
  std::vector<std::int64_t> acc(width);
  std::vector<int> perm(cs);
  std::vector<std::uint32_t> sub(cs);
  for (std::size_t c = 0; c < t.cell_count(); ++c) {
    auto cell = t.cell(c);
    for (std::uint32_t mask = 1; mask < masks; ++mask) {
      std::fill(acc.begin(), acc.end(), 0);
      int size = 0;
      for (std::size_t j = 0; j < cs; ++j) {
        if (!(mask & (1u << j))) continue;
        ++size;
        auto vn = t.numerators(cell[j]);
        for (std::size_t i = 0; i < width; ++i) acc[i] += vn[i];
      }
      const std::int64_t scale = lcm / size;
      for (auto& a : acc) a *= scale;
      auto [it, inserted] = index.try_emplace(acc, static_cast<std::uint32_t>(owners.size()));
      if (inserted) {
        nums.insert(nums.end(), acc.begin(), acc.end());
        owners.push_back(static_cast<OwnerId>(size));
      }
      face_vertex[mask] = it->second;
    }
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::uint32_t mask = 0;
      for (std::size_t j = 0; j < cs; ++j) {
        mask |= 1u << perm[j];
        sub[j] = face_vertex[mask];
      }
      std::sort(sub.begin(), sub.end());
      cells.insert(cells.end(), sub.begin(), sub.end());
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return Triangulation(t.ambient(), t.mesh(), denominator, std::move(nums), std::move(cells), std::move(owners));
}

CompletenessReport validate_complete(const Triangulation& t) {
  CompletenessReport report;
  if (!t.has_owners()) {
    report.message = "triangulation has no owner assignment";
    return report;
  }
  const std::size_t cs = t.cell_size();
  std::vector<char> seen(cs + 1);
  for (std::size_t c = 0; c < t.cell_count(); ++c) {
    std::fill(seen.begin(), seen.end(), 0);
    bool ok = true;
    for (auto v : t.cell(c)) {
      OwnerId o = t.owner(v);
      if (o < 1 || o > cs || seen[o]) {
        ok = false;
        break;
      }
      seen[o] = 1;
    }
    if (!ok) {
      report.offending_cell = c;
      report.message = "cell " + std::to_string(c) + " does not see every owner exactly once";
      return report;
    }
  }
  report.pass = true;
  return report;
}

}  // namespace fairdiv
