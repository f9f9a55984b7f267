#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "dioph/errors.hpp"
#include "dioph/lattice.hpp"

using namespace dioph;
using namespace dioph::lattice;

namespace {

LatticeBasis random_basis(std::mt19937_64& e, std::size_t n, std::size_t r, std::int64_t bound) {
  while (true) {
    std::vector<IntVector> vs(r, IntVector(n));
    for (auto& v : vs) {
      for (auto& x : v) x = static_cast<std::int64_t>(arith::uniform_below(e, 2 * bound + 1)) - bound;
    }
    try {
      return make_basis(n, vs);
    } catch (const DomainError&) {
    }
  }
}

}  // namespace

TEST_CASE("discriminant examples") {
  CHECK(discriminant_squared(make_basis(2, {{2, 4}})) == 20);
  CHECK(discriminant_squared(make_basis(2, {{1, 0}, {0, 2}})) == 4);
  CHECK(minor_gcd(make_basis(2, {{2, 4}})) == 2);
  CHECK(minor_gcd(make_basis(2, {{1, 0}, {0, 1}})) == 1);
  CHECK(minor_gcd(make_basis(2, {{2, 0}, {0, 3}})) == 6);
  CHECK_THROWS_AS(make_basis(2, {{1, 2}, {2, 4}}), DomainError);
  CHECK_THROWS_AS(make_basis(3, {{1, 2}}), DomainError);
}

TEST_CASE("dual examples") {
  CHECK(same_lattice(dual_lattice(make_basis(2, {{2, 4}})), make_basis(2, {{2, -1}})));
  const auto full = dual_lattice(make_basis(2, {{1, 2}, {3, 1}}));
  CHECK(full.rank() == 0);
  CHECK(discriminant_squared(full) == 1);
}

TEST_CASE("gram route equals minor route and duality holds on random bases") {
  auto e = arith::SeededStream{2024, 0}.engine();
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + arith::uniform_below(e, 6);
    const std::size_t r = 1 + arith::uniform_below(e, n);
    const auto b = random_basis(e, n, r, 15);
    const auto d2 = discriminant_squared_gram(b);
    CHECK(d2 == discriminant_squared_minors(b));
    const auto g = minor_gcd(b);
    const auto dual = dual_lattice(b);
    CHECK(dual.rank() == n - r);
    CHECK(discriminant_squared(dual) * g * g == d2);
    for (const auto& w : dual.vectors) {
      for (const auto& v : b.vectors) {
        arith::BigInt dot = 0;
        for (std::size_t j = 0; j < n; ++j) dot += arith::BigInt(w[j]) * v[j];
        CHECK(dot == 0);
      }
    }
  }
}

TEST_CASE("unimodular change of basis changes nothing") {
  auto e = arith::SeededStream{77, 0}.engine();
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + arith::uniform_below(e, 4);
    const std::size_t r = 2 + arith::uniform_below(e, n - 1);
    const auto b = random_basis(e, n, r, 9);
    auto vs = b.vectors;
    // Random elementary operations: add a multiple of one row to another, swap, negate.
    for (int step = 0; step < 6; ++step) {
      const auto i = arith::uniform_below(e, r), j = arith::uniform_below(e, r);
      const auto c = static_cast<std::int64_t>(arith::uniform_below(e, 5)) - 2;
      if (i != j) {
        for (std::size_t m = 0; m < n; ++m) vs[i][m] += c * vs[j][m];
      } else {
        for (auto& x : vs[i]) x = -x;
      }
      std::swap(vs[i], vs[(i + 1) % r]);
    }
    const auto b2 = make_basis(n, vs);
    CHECK(discriminant_squared(b2) == discriminant_squared(b));
    CHECK(minor_gcd(b2) == minor_gcd(b));
    CHECK(canonical_form(dual_lattice(b2)) == canonical_form(dual_lattice(b)));
    CHECK(same_lattice(b, b2));
  }
}

TEST_CASE("coefficient lattice") {
  CHECK(same_lattice(coefficient_lattice(std::vector<std::int64_t>{1, 1}, 5), make_basis(2, {{1, -1}})));
  CHECK(discriminant_squared(coefficient_lattice(std::vector<std::int64_t>{1, 2}, 3)) == 65);
  auto e = arith::SeededStream{3, 3}.engine();
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t s = 2 + arith::uniform_below(e, 4);
    const unsigned k = 2 + static_cast<unsigned>(arith::uniform_below(e, 3));
    std::vector<std::int64_t> x(s);
    for (auto& v : x) v = static_cast<std::int64_t>(arith::uniform_below(e, 11)) - 5;
    if (std::all_of(x.begin(), x.end(), [](auto v) { return v == 0; })) x[0] = 1;
    const auto lat = coefficient_lattice(x, k);
    for (const auto& b : lat.vectors) {
      std::int64_t sum = 0;
      for (std::size_t j = 0; j < s; ++j) sum += b[j] * arith::checked_pow(x[j], k);
      CHECK(sum == 0);
    }
  }
}

TEST_CASE("enumerate_box against a membership scan") {
  const auto seg = enumerate_box(make_basis(2, {{1, -1}}), 2);
  CHECK(seg.size() == 5);
  CHECK(enumerate_box(LatticeBasis{3, {}}, 4).size() == 1);
  CHECK(enumerate_box(make_basis(3, {{2, -1, 3}}), 7).size() == 2 * (7 / 3) + 1);

  auto e = arith::SeededStream{9, 9}.engine();
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + arith::uniform_below(e, 3);
    const std::size_t r = 1 + arith::uniform_below(e, std::min<std::size_t>(3, n));
    const auto b = random_basis(e, n, r, 4);
    const std::int64_t A = 1 + static_cast<std::int64_t>(arith::uniform_below(e, 6));
    const auto pts = enumerate_box(b, A);
    std::set<IntVector> got(pts.begin(), pts.end());
    CHECK(got.size() == pts.size());
    std::set<IntVector> expected;
    IntVector v(n, -A);
    while (true) {
      if (contains(b, v)) expected.insert(v);
      std::size_t j = n;
      while (j > 0 && v[j - 1] == A) v[--j] = -A;
      if (j == 0) break;
      ++v[j - 1];
    }
    CHECK(got == expected);
    CHECK(count_box(b, A) == expected.size());
  }
}
