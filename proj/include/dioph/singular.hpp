#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dioph/arith.hpp"
#include "dioph/forms.hpp"

namespace dioph::singular {

using Complex = std::complex<double>;
using arith::Rational;

// S(q, r) = sum_{x=1}^{q} e(r x^k / q). Tables per (q, k) are cached.
Complex gauss_sum(std::uint64_t q, std::int64_t r, unsigned k);

// Multiplicative; on prime powers p^{uk+v} with 1 <= v <= k it is k p^{-u-1/2}
// for v = 1 and p^{-u-1} otherwise.
double kappa(std::uint64_t q, unsigned k);

// q^{-s} sum_{(r,q)=1} prod_j S(q, a_j r). Throws NumericalError when the
// imaginary part exceeds 1e-8.
double T_a(const DiagonalForm& form, std::uint64_t q);

inline constexpr double kImaginaryTolerance = 1e-8;

struct PrimeFactor {
  std::uint64_t p = 0;
  unsigned level = 0;
  Rational chi;
};

struct SeriesEstimate {
  double partial_sum = 0.0;  // sum_{q<Q} T_a(q)
  std::uint64_t truncation = 0;
  double tail_indicator = 0.0;  // max |T_a(q)| over the last ceil(Q/4) terms; heuristic
  bool convergence_warning = false;  // s < k + 2
  std::vector<PrimeFactor> per_prime_factors;
};

struct SeriesOptions {
  std::uint64_t truncation = 200;
  // When nonzero, attach chi_p at this level for primes p < Q with p^level <= 2^16.
  unsigned factor_level = 0;
  bool parallel = true;
};

SeriesEstimate series_truncated(const DiagonalForm& form, const SeriesOptions& options = {});

struct EulerEstimate {
  double value = 0.0;  // product of finite-level chi_p over the list
  double lower = 0.0;  // value times the omitted-prime lower factor
  double upper = 0.0;
  double omitted_lower_factor = 1.0;
  double omitted_upper_factor = 1.0;
  std::vector<PrimeFactor> factors;
};

struct EulerOptions {
  // Level used at every listed prime; by default the largest l with
  // p^l <= modulus_cap, at least 1.
  std::optional<unsigned> level;
  std::uint64_t modulus_cap = 2500;
  // Omitted primes up to this bound enter the interval explicitly; beyond it
  // a tail bound from sum_{n > L} n^{-2} < 1/L is used.
  std::uint64_t explicit_bound = 1ULL << 22;
};

// prod_{p in primes} chi_p, with [prod (1 - c p^-2), prod (1 + c p^-2)] over
// every prime not in the list, c = k^{s+k+2}. A listed prime with no
// primitive p-adic zero contributes the factor 0. Throws DomainError when an
// omitted prime has c p^-2 >= 1.
EulerEstimate euler_product_estimate(const DiagonalForm& form, std::span<const std::uint64_t> primes,
                                     const EulerOptions& options = {});

}  // namespace dioph::singular
