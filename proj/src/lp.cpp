#include "fairdiv/lp.hpp"

#include <optional>
#include <stdexcept>

namespace fairdiv::lp {
namespace {

using Row = std::vector<Rational>;

struct Tableau {
  std::vector<Row> rows;  // last entry of each row is the right-hand side
  std::vector<int> basis;
  std::size_t columns = 0;

  const Rational& rhs(std::size_t i) const { return rows[i][columns]; }

  void pivot(std::size_t r, std::size_t c) {
    Rational p = rows[r][c];
    for (auto& v : rows[r]) {
      if (!v.is_zero()) v /= p;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      Rational factor = rows[i][c];
      for (std::size_t j = 0; j <= columns; ++j) {
        if (!rows[r][j].is_zero()) rows[i][j] -= factor * rows[r][j];
      }
    }
    basis[r] = static_cast<int>(c);
  }
};

// Maximizes cost . x over columns flagged in `allowed`. Returns false if unbounded.
bool maximize(Tableau& t, const Row& cost, const std::vector<char>& allowed) {
  for (;;) {
    std::optional<std::size_t> entering;
    for (std::size_t j = 0; j < t.columns && !entering; ++j) {
      if (!allowed[j]) continue;
      Rational reduced = cost[j];
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const Rational& a = t.rows[i][j];
        if (!a.is_zero()) reduced -= cost[static_cast<std::size_t>(t.basis[i])] * a;
      }
      if (reduced.sign() > 0) entering = j;
    }
    if (!entering) return true;
    std::optional<std::size_t> leaving;
    Rational best;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const Rational& a = t.rows[i][*entering];
      if (a.sign() <= 0) continue;
      Rational ratio = t.rhs(i) / a;
      if (!leaving || ratio < best || (ratio == best && t.basis[i] < t.basis[*leaving])) {
        leaving = i;
        best = ratio;
      }
    }
    if (!leaving) return false;
    t.pivot(*leaving, *entering);
  }
}

}  // namespace

Solution solve(const LinearProgram& program) {
  const std::size_t m = program.rows.size();
  const std::size_t n = program.objective.size();
  if (program.senses.size() != m || program.rhs.size() != m) {
    throw std::invalid_argument("linear program has mismatched row data");
  }
  for (const auto& r : program.rows) {
    if (r.size() != n) throw std::invalid_argument("linear program row width differs from objective");
  }

  // Normalize to nonnegative right-hand sides.
  std::vector<Row> rows = program.rows;
  std::vector<Sense> senses = program.senses;
  std::vector<Rational> rhs = program.rhs;
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i].sign() < 0) {
      for (auto& v : rows[i]) v = -v;
      rhs[i] = -rhs[i];
      if (senses[i] == Sense::less_equal) senses[i] = Sense::greater_equal;
      else if (senses[i] == Sense::greater_equal) senses[i] = Sense::less_equal;
    }
  }

  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  for (auto s : senses) {
    if (s != Sense::equal) ++slack_count;
    if (s != Sense::less_equal) ++artificial_count;
  }
  Tableau t;
  t.columns = n + slack_count + artificial_count;
  const std::size_t first_artificial = n + slack_count;
  t.rows.assign(m, Row(t.columns + 1));
  t.basis.assign(m, -1);
  std::size_t slack = n;
  std::size_t artificial = first_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.rows[i][j] = rows[i][j];
    t.rows[i][t.columns] = rhs[i];
    switch (senses[i]) {
      case Sense::less_equal:
        t.rows[i][slack] = 1;
        t.basis[i] = static_cast<int>(slack++);
        break;
      case Sense::greater_equal:
        t.rows[i][slack++] = -1;
        t.rows[i][artificial] = 1;
        t.basis[i] = static_cast<int>(artificial++);
        break;
      case Sense::equal:
        t.rows[i][artificial] = 1;
        t.basis[i] = static_cast<int>(artificial++);
        break;
    }
  }

  Solution out;
  std::vector<char> allowed(t.columns, 1);
  if (artificial_count > 0) {
    Row phase1(t.columns);
    for (std::size_t j = first_artificial; j < t.columns; ++j) phase1[j] = -1;
    maximize(t, phase1, allowed);
    for (std::size_t i = 0; i < m; ++i) {
      if (static_cast<std::size_t>(t.basis[i]) >= first_artificial && !t.rhs(i).is_zero()) {
        out.status = Status::infeasible;
        return out;
      }
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (static_cast<std::size_t>(t.basis[i]) < first_artificial) continue;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (!t.rows[i][j].is_zero()) {
          t.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = first_artificial; j < t.columns; ++j) allowed[j] = 0;
  }

  Row cost(t.columns);
  for (std::size_t j = 0; j < n; ++j) cost[j] = program.maximize ? program.objective[j] : -program.objective[j];
  if (!maximize(t, cost, allowed)) {
    out.status = Status::unbounded;
    return out;
  }
  out.status = Status::optimal;
  out.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (static_cast<std::size_t>(t.basis[i]) < n) out.x[static_cast<std::size_t>(t.basis[i])] = t.rhs(i);
  }
  for (std::size_t j = 0; j < n; ++j) out.value += program.objective[j] * out.x[j];
  return out;
}

}  // namespace fairdiv::lp
