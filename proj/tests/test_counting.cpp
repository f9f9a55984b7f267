#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dioph/arith.hpp"
#include "dioph/counting.hpp"
#include "dioph/errors.hpp"
#include "dioph/reference.hpp"

using namespace dioph;
using namespace dioph::counting;

TEST_CASE("count examples") {
  CHECK(count_solutions(DiagonalForm(3, {1, -1}), 3, CountMode::all_coords_nonzero) == 6);
  CHECK(count_solutions(DiagonalForm(3, {1, 1}), 3, CountMode::all_coords_nonzero) == 6);
  CHECK(count_solutions(DiagonalForm(3, {1, 2}), 5, CountMode::all_coords_nonzero) == 0);
  CHECK(count_solutions(DiagonalForm(3, {1, 2}), 5, CountMode::vector_nonzero) == 0);
  CHECK_THROWS_AS(count_solutions(DiagonalForm(3, {1, 2}), 0, CountMode::vector_nonzero), DomainError);
  CHECK(parse_count_mode("all-nonzero") == CountMode::all_coords_nonzero);
  CHECK_THROWS_AS(parse_count_mode("nonzero"), DomainError);
}

TEST_CASE("meet in the middle equals naive enumeration") {
  auto e = arith::SeededStream{8, 8}.engine();
  for (std::uint64_t i = 0; i < 100; ++i) {
    const std::size_t s = 1 + arith::uniform_below(e, 4);
    const unsigned k = 2 + static_cast<unsigned>(arith::uniform_below(e, 3));
    const std::int64_t B = 1 + static_cast<std::int64_t>(arith::uniform_below(e, 6));
    const DiagonalForm f(k, arith::sample_coefficients(s, 4, {8, i}));
    for (auto mode : {CountMode::all_coords_nonzero, CountMode::vector_nonzero}) {
      const auto c = count_solutions(f, B, mode);
      CHECK(c == reference::naive_count(f, B, mode));
      CHECK(c % 2 == 0);
    }
    CHECK(count_solutions(f, B, CountMode::all_coords_nonzero) <= count_solutions(f, B, CountMode::vector_nonzero));
  }
}

TEST_CASE("counts are permutation invariant and parallel-serial equal") {
  CountOptions serial;
  serial.parallel = false;
  const DiagonalForm f(3, {1, 2, -3, 4, -1}), g(3, {-3, 4, -1, 1, 2});
  CHECK(count_solutions(f, 5, CountMode::vector_nonzero) == count_solutions(g, 5, CountMode::vector_nonzero));
  CHECK(count_solutions(f, 5, CountMode::vector_nonzero) == count_solutions(f, 5, CountMode::vector_nonzero, serial));
}

TEST_CASE("budgets raise resource errors") {
  CountOptions tiny;
  tiny.table_cap = 100;
  CHECK_THROWS_AS(count_solutions(DiagonalForm(3, {1, 2, 3, 4}), 10, CountMode::vector_nonzero, tiny), ResourceError);
  CHECK_THROWS_AS(smallest_solution(DiagonalForm(4, {1, 2, 3, 4, 5, 6}), 50, tiny), ResourceError);
}

TEST_CASE("smallest solution examples") {
  const auto ab = smallest_solution(DiagonalForm(4, {1, 1, -17, -17}), 6);
  REQUIRE(ab.found);
  CHECK(ab.found->norm == 2);
  CHECK(ab.found->x == std::vector<std::int64_t>{2, 1, 1, 0});
  const auto pq = smallest_solution(DiagonalForm(3, {1, -2, 7, -14}), 6);
  CHECK_FALSE(pq.found);
  CHECK(pq.exhausted_up_to == 6);
  const auto easy = smallest_solution(DiagonalForm(3, {1, -1, 1, -1}), 3);
  REQUIRE(easy.found);
  CHECK(easy.found->norm == 1);
  CHECK(forms::evaluate(DiagonalForm(3, {1, -1, 1, -1}), easy.found->x) == 0);
}

TEST_CASE("smallest solution is minimal and a genuine zero") {
  for (std::uint64_t i = 0; i < 60; ++i) {
    const std::size_t s = 3 + i % 3;
    const DiagonalForm f(3, arith::sample_coefficients(s, 12, {21, i}));
    const auto out = smallest_solution(f, 5);
    const auto naive = reference::naive_min_norm(f, 5);
    if (naive == 0) {
      CHECK_FALSE(out.found);
      CHECK(out.exhausted_up_to == 5);
    } else {
      REQUIRE(out.found);
      CHECK(out.found->norm == naive);
      CHECK(forms::evaluate(f, out.found->x) == 0);
      std::int64_t m = 0;
      for (auto v : out.found->x) m = std::max(m, std::abs(v));
      CHECK(m == naive);
    }
  }
}

TEST_CASE("xi, upsilon and P") {
  CHECK(xi_count(3, 2, 2, 1) == 16);
  CHECK(p_count(3, 2, 2, 1) == 8);
  CHECK(upsilon_count(3, 1, 1, 1) == 16);
  CHECK_THROWS_AS(xi_count(3, 2, 2, 0), DomainError);
  for (std::int64_t A = 1; A <= 3; ++A) {
    for (std::int64_t B = 1; B <= 2; ++B) {
      CHECK(xi_count(3, 3, A, B) == reference::lattice_xi_count(3, 3, A, B));
      CHECK(xi_count(4, 3, A, B) == reference::lattice_xi_count(4, 3, A, B));
      CHECK(p_count(3, 3, A, B) == reference::naive_p_count(3, 3, A, B));
      CHECK(p_count(3, 3, A, B) <= xi_count(3, 3, A, B));
    }
  }
  CHECK(upsilon_count(3, 2, 2, 2) == reference::triple_loop_upsilon(3, 2, 2, 2));
  CHECK(upsilon_count(3, 1, 3, 2) <= upsilon_count(3, 1, 3, 3));
  CHECK(upsilon_count(3, 1, 2, 2) <= upsilon_count(3, 1, 3, 2));
  CHECK(p_count(3, 4, 2, 1) <= p_count(3, 4, 2, 2));
}

TEST_CASE("coefficient classes cover the box") {
  std::uint64_t total = 0;
  for (const auto& c : coefficient_classes(4, 3)) {
    CHECK(std::is_sorted(c.a.begin(), c.a.end()));
    total += c.multiplicity;
  }
  CHECK(total == 6 * 6 * 6 * 6);
}

TEST_CASE("congruent power pairs") {
  CHECK(congruent_power_pairs(7, 1, 3) == 15 * 15);
  CHECK(congruent_power_pairs(1, 2, 3) == 5);
  for (std::int64_t B : {3, 10}) {
    for (std::uint64_t d = 1; d <= 30; ++d) CHECK(congruent_power_pairs(B, d, 3) == reference::naive_power_pairs(B, d, 3));
  }
}
