#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dioph/arith.hpp"
#include "dioph/forms.hpp"

namespace dioph::local {

using arith::BigInt;
using arith::Rational;

enum class Mode { rigorous, heuristic };
enum class Status { soluble, insoluble, unknown };

const char* to_string(Mode m);
const char* to_string(Status s);

// Primes that can make the singular series small, and the products built
// from them.
struct PrimeProfile {
  std::vector<std::uint64_t> shared_primes;   // S(a): primes dividing >= 2 coefficients
  std::uint64_t cutoff = 0;                   // C
  std::vector<std::uint64_t> primes;          // S(a) united with {p <= C}, increasing
  std::map<std::uint64_t, unsigned> max_valuation;  // l(p) for p in `primes`
  BigInt P = 1;         // product of `primes`
  BigInt P0 = 1;        // product of shared primes above C
  BigInt P_dagger = 1;  // product of p^l(p)
  BigInt H = 1;         // product of primes <= C
};

PrimeProfile prime_profile(const DiagonalForm& form, std::uint64_t cutoff);

bool real_soluble(const DiagonalForm& form);

// l(p) + v_p(k) + 2: primitive solubility mod p^gamma is equivalent to
// solubility over Q_p.
unsigned gamma_level(const DiagonalForm& form, std::uint64_t p);

inline constexpr std::uint64_t kDefaultCountBudget = 2'000'000'000ULL;

// #{x mod p^l : sum a_j x_j^k = 0 mod p^l}, by cyclic convolution of the
// per-coordinate residue histograms. At level 1 with large p the histograms
// are constant on cosets of the k-th powers and the convolution runs on
// cyclotomic numbers instead. Budget bounds the convolution work.
BigInt count_congruence_solutions(const DiagonalForm& form, std::uint64_t p, unsigned level,
                                         std::uint64_t budget = kDefaultCountBudget);

// p^{l(1-s)} M(p^l) as an exact rational.
Rational chi_p_estimate(const DiagonalForm& form, std::uint64_t p, unsigned level,
                        std::uint64_t budget = kDefaultCountBudget);

inline constexpr std::uint64_t kDefaultSearchBudget = 400'000'000ULL;

struct PadicResult {
  Status status = Status::unknown;
  unsigned level = 0;
  std::optional<std::vector<std::uint64_t>> witness;  // residues mod p^level
  std::uint64_t work = 0;                             // bitset word operations spent
};

// Decides whether a primitive solution mod p^level exists. Soluble verdicts
// carry a verified witness; insoluble verdicts are exhaustive. Work beyond
// `budget` yields Status::unknown.
PadicResult primitive_solution_mod(const DiagonalForm& form, std::uint64_t p, unsigned level,
                                   std::uint64_t budget = kDefaultSearchBudget);

// primitive_solution_mod at gamma_level(form, p).
PadicResult padic_soluble(const DiagonalForm& form, std::uint64_t p, std::uint64_t budget = kDefaultSearchBudget);

struct PrimeSet {
  Mode mode = Mode::rigorous;
  PrimeProfile profile;
  std::vector<std::uint64_t> primes;  // primes to test, increasing
};

inline constexpr std::uint64_t kDefaultRigorousLimit = 1'000'000;

// Largest prime bound C with every p <= C possibly obstructing: the least
// integer with C^2 >= k^{s+k+2}.
std::uint64_t rigorous_cutoff(unsigned k, std::size_t s, std::uint64_t limit = kDefaultRigorousLimit);
std::uint64_t default_heuristic_cap(unsigned k);

// Rigorous: {p : p^2 <= k^{s+k+2}} with every prime dividing a coefficient.
// Heuristic: {p <= cap} with every prime dividing a coefficient. Throws
// ResourceError when the rigorous bound exceeds `limit`.
PrimeSet local_prime_set(const DiagonalForm& form, Mode mode, std::optional<std::uint64_t> cap = std::nullopt,
                         std::uint64_t limit = kDefaultRigorousLimit);

struct PrimeVerdict {
  std::uint64_t p = 0;
  unsigned gamma = 0;
  Status status = Status::unknown;
  std::optional<std::vector<std::uint64_t>> witness;
  std::optional<Rational> chi_estimate;  // at level gamma, when cheap
};

struct Overall {
  enum class Kind { locally_soluble, locally_insoluble, undetermined };
  Kind kind = Kind::undetermined;
  bool real_obstruction = false;               // insoluble over R
  std::optional<std::uint64_t> witness_prime;  // smallest insoluble prime
};

struct LocalReport {
  bool real_soluble = false;
  Mode mode = Mode::rigorous;
  std::uint64_t cutoff = 0;
  std::vector<PrimeVerdict> prime_verdicts;  // increasing p
  Overall overall;
};

struct LocalOptions {
  Mode mode = Mode::rigorous;
  std::optional<std::uint64_t> heuristic_cap;
  std::uint64_t budget = kDefaultSearchBudget;
  std::uint64_t rigorous_limit = kDefaultRigorousLimit;
  // Compute chi at level gamma when p^gamma is at most this modulus.
  std::uint64_t chi_modulus_limit = 1024;
  // Run primes on OpenMP threads; the report is merged in prime order.
  bool parallel = true;
};

LocalReport local_report(const DiagonalForm& form, const LocalOptions& options = {});

const char* to_string(Overall::Kind k);

// 1/2 * prod_{p in profile} p^{(1-s) gamma(p)}, conditional on primitive
// solubility at every profile prime.
struct SeriesCertificate {
  std::optional<Rational> value;
  double log10_value = 0.0;
  std::string note;
};

SeriesCertificate series_lower_certificate(const DiagonalForm& form, const PrimeProfile& profile,
                                           std::uint64_t budget = kDefaultSearchBudget);

}  // namespace dioph::local
