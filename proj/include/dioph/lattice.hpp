#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dioph/arith.hpp"

namespace dioph::lattice {

using arith::BigInt;
using IntVector = std::vector<std::int64_t>;

// Integer basis of a rank-r sublattice of Z^n, one vector per entry of
// `vectors`. Rank 0 stands for the zero lattice.
struct LatticeBasis {
  std::size_t ambient_dim = 0;
  std::vector<IntVector> vectors;

  std::size_t rank() const { return vectors.size(); }
  bool operator==(const LatticeBasis&) const = default;
};

// Checks vector lengths and linear independence; throws DomainError.
LatticeBasis make_basis(std::size_t ambient_dim, std::vector<IntVector> vectors);

// d(L)^2 as det of the Gram matrix (b_i . b_j).
BigInt discriminant_squared_gram(const LatticeBasis& basis);
// d(L)^2 as the sum of squared maximal minors of the n x r basis matrix.
BigInt discriminant_squared_minors(const LatticeBasis& basis);
// Gram route, cross-checked against the minor route.
BigInt discriminant_squared(const LatticeBasis& basis);

// gcd of all maximal minors.
BigInt minor_gcd(const LatticeBasis& basis);

// Hermite normal form of the row space: echelon rows, positive pivots,
// entries above each pivot reduced into [0, pivot). Two bases span the same
// lattice iff their canonical forms are equal.
LatticeBasis canonical_form(const LatticeBasis& basis);
bool same_lattice(const LatticeBasis& a, const LatticeBasis& b);

// Integer vectors orthogonal to every basis vector, in canonical form.
LatticeBasis dual_lattice(const LatticeBasis& basis);

// {a in Z^s : sum a_j x_j^k = 0}, the dual of span{(x_1^k, ..., x_s^k)}.
LatticeBasis coefficient_lattice(std::span<const std::int64_t> x, unsigned k);

inline constexpr std::size_t kDefaultBoxCap = 10'000'000;

// Every lattice point with sup-norm <= A exactly once, origin included, in a
// deterministic order. Throws ResourceError past `cap` points.
std::vector<IntVector> enumerate_box(const LatticeBasis& basis, std::int64_t A, std::size_t cap = kDefaultBoxCap);

// Number of lattice points in the box without materializing them.
std::uint64_t count_box(const LatticeBasis& basis, std::int64_t A, std::uint64_t cap = 1'000'000'000ULL);

// Membership test for an integer vector.
bool contains(const LatticeBasis& basis, std::span<const std::int64_t> v);

}  // namespace dioph::lattice
