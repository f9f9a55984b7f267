#include "dioph/arith.hpp"

#include <array>
#include <limits>
#include <numeric>
#include <string>

#include "dioph/errors.hpp"

namespace dioph::arith {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw OverflowError("integer overflow in addition");
  }
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw OverflowError("integer overflow in multiplication");
  }
  return r;
}

std::int64_t checked_pow(std::int64_t base, unsigned exponent) {
  std::int64_t r = 1;
  for (unsigned i = 0; i < exponent; ++i) r = checked_mul(r, base);
  return r;
}

std::uint64_t checked_pow_u64(std::uint64_t base, unsigned exponent) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    if (__builtin_mul_overflow(r, base, &r)) throw OverflowError("integer overflow in power");
  }
  return r;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exponent, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exponent > 0) {
    if (exponent & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exponent >>= 1;
  }
  return result;
}

std::uint64_t reduce_mod(std::int64_t a, std::uint64_t m) {
  __int128 r = static_cast<__int128>(a) % static_cast<__int128>(m);
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    __int128 q = r / new_r;
    std::swap(t, new_t);
    new_t -= q * t;
    std::swap(r, new_r);
    new_r -= q * r;
  }
  if (r != 1) throw DomainError("value is not invertible modulo " + std::to_string(m));
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

namespace {

constexpr std::array<std::uint64_t, 12> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool strong_probable_prime(std::uint64_t n, std::uint64_t a) {
  std::uint64_t d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  std::uint64_t x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < r; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : kWitnesses) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 41 * 41) return true;
  for (std::uint64_t a : kWitnesses) {
    if (!strong_probable_prime(n, a)) return false;
  }
  return true;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  if (n == 0) throw DomainError("cannot factor 0");
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

unsigned p_adic_valuation(std::int64_t n, std::uint64_t p) {
  if (n == 0) throw DomainError("valuation of 0 is infinite");
  if (!is_prime(p)) throw DomainError("valuation base " + std::to_string(p) + " is not prime");
  unsigned __int128 m = n < 0 ? -static_cast<__int128>(n) : n;
  unsigned e = 0;
  while (m % p == 0) {
    m /= p;
    ++e;
  }
  return e;
}

std::uint64_t squarefree_kernel(std::int64_t n) {
  if (n <= 0) throw DomainError("squarefree kernel needs a positive integer");
  std::uint64_t kernel = 1;
  for (auto [p, e] : factorize(static_cast<std::uint64_t>(n))) kernel *= p;
  return kernel;
}

std::optional<std::uint64_t> kth_power_nonresidue(unsigned k, std::uint64_t p) {
  if (k < 2) throw DomainError("degree must be at least 2");
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  std::uint64_t g = std::gcd(static_cast<std::uint64_t>(k), p - 1);
  if (g == 1) return std::nullopt;
  // q is a k-th power residue iff q^((p-1)/g) == 1.
  for (std::uint64_t q = 2; q < p; ++q) {
    if (pow_mod(q, (p - 1) / g, p) != 1) return q;
  }
  return std::nullopt;  // unreachable for g > 1
}

namespace {

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t stream_index) {
  std::uint64_t z = splitmix_finalize(seed + 0x9E3779B97F4A7C15ULL);
  z ^= splitmix_finalize(stream_index * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL);
  return splitmix_finalize(z);
}

std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound) {
  if (bound == 0) throw DomainError("empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound);
  for (;;) {
    std::uint64_t v = engine();
    if (v < limit) return v % bound;
  }
}

double uniform_unit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::vector<std::int64_t> sample_coefficients(std::size_t s, std::int64_t A, const SeededStream& stream) {
  if (s < 1) throw DomainError("dimension must be at least 1");
  if (A < 1) throw DomainError("height bound must be at least 1");
  auto engine = stream.engine();
  std::vector<std::int64_t> a;
  a.reserve(s);
  const auto width = static_cast<std::uint64_t>(2 * A + 1);
  while (a.size() < s) {
    auto v = static_cast<std::int64_t>(uniform_below(engine, width)) - A;
    if (v != 0) a.push_back(v);
  }
  return a;
}

}  // namespace dioph::arith
