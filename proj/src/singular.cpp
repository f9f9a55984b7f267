#include "dioph/singular.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include "detail/pairwise.hpp"
#include "dioph/errors.hpp"
#include "dioph/local.hpp"

namespace dioph::singular {

namespace {

using Table = std::vector<Complex>;

std::shared_ptr<const Table> build_table(std::uint64_t q, unsigned k) {
  std::vector<std::uint64_t> hist(q, 0);
  for (std::uint64_t x = 0; x < q; ++x) ++hist[arith::pow_mod(x, k, q)];
  std::vector<std::pair<std::uint64_t, double>> powers;
  for (std::uint64_t t = 0; t < q; ++t) {
    if (hist[t]) powers.emplace_back(t, static_cast<double>(hist[t]));
  }
  Table unit(q);
  for (std::uint64_t u = 0; u < q; ++u) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(u) / static_cast<double>(q);
    unit[u] = Complex(std::cos(angle), std::sin(angle));
  }
  auto table = std::make_shared<Table>(q);
  for (std::uint64_t c = 0; c < q; ++c) {
    Complex sum = 0.0;
    for (const auto& [t, h] : powers) sum += h * unit[arith::mul_mod(c, t, q)];
    (*table)[c] = sum;
  }
  return table;
}

constexpr std::uint64_t kCachedModulusLimit = 1ULL << 14;

std::shared_ptr<const Table> gauss_table(std::uint64_t q, unsigned k) {
  if (q > kCachedModulusLimit) return build_table(q, k);
  static std::mutex mutex;
  static std::map<std::pair<std::uint64_t, unsigned>, std::shared_ptr<const Table>> cache;
  const auto key = std::make_pair(q, k);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto table = build_table(q, k);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(table)).first->second;
}

}  // namespace

Complex gauss_sum(std::uint64_t q, std::int64_t r, unsigned k) {
  if (q == 0) throw DomainError("modulus must be positive");
  return (*gauss_table(q, k))[arith::reduce_mod(r, q)];
}

double kappa(std::uint64_t q, unsigned k) {
  if (q == 0) throw DomainError("modulus must be positive");
  double value = 1.0;
  for (const auto& [p, l] : arith::factorize(q)) {
    const unsigned u = (l - 1) / k;
    const unsigned v = l - u * k;
    const double pd = static_cast<double>(p);
    value *= v == 1 ? k * std::pow(pd, -static_cast<double>(u) - 0.5) : std::pow(pd, -static_cast<double>(u) - 1.0);
  }
  return value;
}

double T_a(const DiagonalForm& form, std::uint64_t q) {
  if (q == 0) throw DomainError("modulus must be positive");
  const auto table = gauss_table(q, form.degree());
  std::vector<std::uint64_t> a;
  for (auto c : form.coefficients()) a.push_back(arith::reduce_mod(c, q));
  const double scale = 1.0 / static_cast<double>(q);
  std::vector<Complex> terms;
  for (std::uint64_t r = 1; r <= q; ++r) {
    if (std::gcd(r, q) != 1) continue;
    Complex product = 1.0;
    for (auto aj : a) product *= (*table)[arith::mul_mod(aj, r, q)] * scale;
    terms.push_back(product);
  }
  const Complex total = detail::pairwise_sum<Complex>(terms);
  if (std::abs(total.imag()) > kImaginaryTolerance) {
    throw NumericalError("T_a(" + std::to_string(q) + ") has imaginary part " + std::to_string(total.imag()) +
                         " for " + form.to_string());
  }
  return total.real();
}

SeriesEstimate series_truncated(const DiagonalForm& form, const SeriesOptions& options) {
  const auto Q = options.truncation;
  if (Q < 2) throw DomainError("truncation must be at least 2");
  SeriesEstimate est;
  est.truncation = Q;
  est.convergence_warning = form.dimension() < form.degree() + 2;

  const auto n = static_cast<std::int64_t>(Q - 1);
  std::vector<double> terms(Q - 1);
  std::vector<std::string> failures(Q - 1);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      terms[static_cast<std::size_t>(i)] = T_a(form, static_cast<std::uint64_t>(i) + 1);
    } catch (const NumericalError& e) {
      failures[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw NumericalError(f);
  }
  est.partial_sum = detail::pairwise_sum<double>(terms);
  const std::uint64_t tail = (Q + 3) / 4;
  for (std::uint64_t i = terms.size() > tail ? terms.size() - tail : 0; i < terms.size(); ++i) {
    est.tail_indicator = std::max(est.tail_indicator, std::abs(terms[i]));
  }

  if (options.factor_level > 0) {
    for (auto p : arith::primes_up_to(Q - 1)) {
      const long double modulus = std::pow(static_cast<long double>(p), options.factor_level);
      if (modulus > 65536.0L) break;
      est.per_prime_factors.push_back({p, options.factor_level, local::chi_p_estimate(form, p, options.factor_level)});
    }
  }
  return est;
}

namespace {

std::vector<std::uint64_t> sieve_cache(std::uint64_t bound) {
  static std::mutex mutex;
  static std::map<std::uint64_t, std::vector<std::uint64_t>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(bound);
  if (it == cache.end()) it = cache.emplace(bound, arith::primes_up_to(bound)).first;
  return it->second;
}

}  // namespace

EulerEstimate euler_product_estimate(const DiagonalForm& form, std::span<const std::uint64_t> primes,
                                     const EulerOptions& options) {
  const unsigned k = form.degree();
  const auto s = form.dimension();
  const double c = std::pow(static_cast<double>(k), static_cast<double>(s + k + 2));
  std::set<std::uint64_t> listed(primes.begin(), primes.end());

  EulerEstimate est;
  est.value = 1.0;
  for (auto p : listed) {
    unsigned level = 1;
    if (options.level) {
      level = *options.level;
    } else {
      std::uint64_t m = p;
      while (m <= options.modulus_cap / p) {
        m *= p;
        ++level;
      }
    }
    // No primitive p-adic zero: the local density is exactly 0, whatever the
    // finite-level count says.
    Rational chi = local::padic_soluble(form, p).status == local::Status::insoluble
                       ? Rational(0)
                       : local::chi_p_estimate(form, p, level);
    est.value *= static_cast<double>(chi);
    est.factors.push_back({p, level, std::move(chi)});
  }

  double log_lower = 0.0, log_upper = 0.0;
  const auto L = options.explicit_bound;
  for (auto p : sieve_cache(L)) {
    if (listed.count(p)) continue;
    const double x = c / (static_cast<double>(p) * static_cast<double>(p));
    if (x >= 1.0) {
      throw DomainError("omitted prime " + std::to_string(p) + " has c p^-2 >= 1; extend the prime list");
    }
    log_lower += std::log1p(-x);
    log_upper += std::log1p(x);
  }
  const double Ld = static_cast<double>(L);
  if (c / (Ld * Ld) >= 1.0) {
    throw DomainError("omitted primes above the explicit bound have c p^-2 >= 1; extend the prime list");
  }
  // log(1 + x) <= x, and log(1 - x) >= -2x once x <= 1/2.
  log_upper += c / Ld;
  if (c / (Ld * Ld) <= 0.5) {
    log_lower -= 2.0 * c / Ld;
    est.omitted_lower_factor = std::exp(log_lower);
  } else {
    est.omitted_lower_factor = 0.0;
  }
  est.omitted_upper_factor = std::exp(log_upper);
  est.lower = est.value * est.omitted_lower_factor;
  est.upper = est.value * est.omitted_upper_factor;
  return est;
}

}  // namespace dioph::singular
