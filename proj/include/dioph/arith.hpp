#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dioph::arith {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Checked fixed-width arithmetic. Every overflow throws OverflowError.
// ---------------------------------------------------------------------------

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_pow(std::int64_t base, unsigned exponent);
std::uint64_t checked_pow_u64(std::uint64_t base, unsigned exponent);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exponent, std::uint64_t m);
// Canonical residue of a (possibly negative) integer.
std::uint64_t reduce_mod(std::int64_t a, std::uint64_t m);
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m);

// ---------------------------------------------------------------------------
// Primes and factorization (64-bit envelope only).
// ---------------------------------------------------------------------------

// Deterministic for all 64-bit inputs: trial division by small primes, then
// strong probable-prime tests to the first twelve prime bases.
bool is_prime(std::uint64_t n);

// Sieve of Eratosthenes, inclusive bound.
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

// Prime factorization of |n| by trial division, increasing primes.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

// Largest e with p^e | n. Throws DomainError for n == 0 or composite p.
unsigned p_adic_valuation(std::int64_t n, std::uint64_t p);

// Product of the distinct primes dividing n; 1 for n == 1.
std::uint64_t squarefree_kernel(std::int64_t n);

// Least q >= 1 that is not a k-th power residue modulo the prime p, or
// nullopt when gcd(k, p - 1) == 1 and every unit is a k-th power.
std::optional<std::uint64_t> kth_power_nonresidue(unsigned k, std::uint64_t p);

// ---------------------------------------------------------------------------
// Deterministic randomness.
// ---------------------------------------------------------------------------

// 64-bit mixing of (seed, stream_index): two rounds of the splitmix64
// finalizer over seed and an index-dependent Weyl offset.
std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t stream_index);

// Immutable descriptor of an independent pseudo-random sub-stream. The value
// sequence is a pure function of (seed, stream_index).
struct SeededStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;

  std::mt19937_64 engine() const { return std::mt19937_64(mix_stream(seed, stream_index)); }
};

// Unbiased integer in [0, bound) by rejection; independent of the standard
// library's distribution implementation so streams agree across platforms.
std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound);
// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(std::mt19937_64& engine);

// s coordinates, each uniform on {-A, ..., -1, 1, ..., A}.
std::vector<std::int64_t> sample_coefficients(std::size_t s, std::int64_t A, const SeededStream& stream);

}  // namespace dioph::arith
