#include <doctest.h>

#include "exact.hpp"
#include "fairdiv/lp.hpp"
#include "generators.hpp"

using namespace fairdiv;
using lp::Sense;
using lp::Status;

TEST_CASE("two-variable maximum") {
  lp::LinearProgram p;
  p.rows = {{1, 2}, {3, 1}};
  p.senses = {Sense::less_equal, Sense::less_equal};
  p.rhs = {4, 6};
  p.objective = {1, 1};
  auto s = lp::solve(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.value == Rational(14, 5));
  CHECK(s.x == std::vector<Rational>{Rational(8, 5), Rational(6, 5)});
}

TEST_CASE("minimum with greater-equal rows") {
  lp::LinearProgram p;
  p.rows = {{1, 1}, {1, 3}};
  p.senses = {Sense::greater_equal, Sense::greater_equal};
  p.rhs = {2, 3};
  p.objective = {2, 3};
  p.maximize = false;
  auto s = lp::solve(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.value == Rational(9, 2));
  CHECK(s.x == std::vector<Rational>{Rational(3, 2), Rational(1, 2)});
}

TEST_CASE("infeasible and unbounded programs") {
  lp::LinearProgram bad;
  bad.rows = {{1, 1}, {1, 1}};
  bad.senses = {Sense::less_equal, Sense::greater_equal};
  bad.rhs = {1, 2};
  bad.objective = {1, 0};
  CHECK(lp::solve(bad).status == Status::infeasible);

  lp::LinearProgram open;
  open.rows = {{1, -1}};
  open.senses = {Sense::less_equal};
  open.rhs = {1};
  open.objective = {1, 1};
  CHECK(lp::solve(open).status == Status::unbounded);
}

TEST_CASE("equality system with redundant and degenerate rows") {
  lp::LinearProgram p;
  p.rows = {{1, 1, 0}, {0, 1, 1}, {1, 2, 1}, {1, 0, 0}};
  p.senses = {Sense::equal, Sense::equal, Sense::equal, Sense::less_equal};
  p.rhs = {1, 1, 2, 0};
  p.objective = {0, 0, 1};
  auto s = lp::solve(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.value == 0);
  CHECK(s.x == std::vector<Rational>{0, 1, 0});
}

TEST_CASE("property: optimum matches vertex enumeration on random packing programs") {
  gen::Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const int vars = rng.range(1, 3);
    const int cons = rng.range(1, 3);
    lp::LinearProgram p;
    std::vector<std::vector<oracle::BigRational>> a;
    std::vector<oracle::BigRational> b, c;
    for (int i = 0; i < cons; ++i) {
      std::vector<Rational> row;
      std::vector<oracle::BigRational> brow;
      for (int j = 0; j < vars; ++j) {
        const int v = rng.range(0, 5);
        row.emplace_back(v);
        brow.emplace_back(v);
      }
      p.rows.push_back(row);
      a.push_back(brow);
      p.senses.push_back(Sense::less_equal);
      const int r = rng.range(1, 9);
      p.rhs.emplace_back(r);
      b.emplace_back(r);
    }
    for (int j = 0; j < vars; ++j) {
      const int v = rng.range(1, 4);
      p.objective.emplace_back(v);
      c.emplace_back(v);
    }
    // Bound every variable so the program stays bounded.
    for (int j = 0; j < vars; ++j) {
      std::vector<Rational> row(static_cast<std::size_t>(vars), Rational(0));
      std::vector<oracle::BigRational> brow(static_cast<std::size_t>(vars));
      row[static_cast<std::size_t>(j)] = 1;
      brow[static_cast<std::size_t>(j)] = 1;
      p.rows.push_back(row);
      a.push_back(brow);
      p.senses.push_back(Sense::less_equal);
      p.rhs.emplace_back(10);
      b.emplace_back(10);
    }
    auto s = lp::solve(p);
    auto expect = oracle::brute_force_lp_max(a, b, c);
    REQUIRE(s.status == Status::optimal);
    REQUIRE(expect.has_value());
    CHECK(oracle::big(s.value) == *expect);
  }
}
