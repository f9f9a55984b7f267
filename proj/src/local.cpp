#include "dioph/local.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

#include "dioph/errors.hpp"

namespace dioph::local {

using arith::inverse_mod;
using arith::mul_mod;
using arith::pow_mod;
using arith::reduce_mod;

const char* to_string(Mode m) { return m == Mode::rigorous ? "rigorous" : "heuristic"; }

const char* to_string(Status s) {
  switch (s) {
    case Status::soluble: return "soluble";
    case Status::insoluble: return "insoluble";
    default: return "unknown";
  }
}

const char* to_string(Overall::Kind k) {
  switch (k) {
    case Overall::Kind::locally_soluble: return "locally_soluble";
    case Overall::Kind::locally_insoluble: return "locally_insoluble";
    default: return "undetermined";
  }
}

namespace {

void require_prime(std::uint64_t p) {
  if (!arith::is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
}

unsigned max_valuation_of(const DiagonalForm& form, std::uint64_t p) {
  unsigned l = 0;
  for (auto a : form.coefficients()) l = std::max(l, arith::p_adic_valuation(a, p));
  return l;
}

struct BudgetExceeded {};

// Residues mod m as a bitset; bits at or above m stay clear.
class ResidueSet {
 public:
  explicit ResidueSet(std::uint64_t m) : m_(m), words_((m + 63) / 64, 0) {}

  std::uint64_t modulus() const { return m_; }
  std::size_t word_count() const { return words_.size(); }
  void set(std::uint64_t v) { words_[v >> 6] |= 1ULL << (v & 63); }
  bool test(std::uint64_t v) const { return (words_[v >> 6] >> (v & 63)) & 1ULL; }

  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

  void fill() {
    std::fill(words_.begin(), words_.end(), ~0ULL);
    mask_tail();
  }

  void merge(const ResidueSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      auto w = words_[i];
      while (w) {
        f(static_cast<std::uint64_t>(i * 64 + std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  // this |= src rotated by t (bit j moves to (j + t) mod m).
  void rotate_merge(const ResidueSet& src, std::uint64_t t) {
    if (t == 0) {
      merge(src);
      return;
    }
    shift_up_merge(src, t);
    shift_down_merge(src, m_ - t);
    mask_tail();
  }

 private:
  void mask_tail() {
    const auto r = m_ & 63;
    if (r) words_.back() &= (1ULL << r) - 1;
  }

  void shift_up_merge(const ResidueSet& src, std::uint64_t t) {
    const std::size_t ws = t >> 6, bs = t & 63, n = words_.size();
    for (std::size_t i = n; i-- > ws;) {
      const std::size_t j = i - ws;
      std::uint64_t v = src.words_[j] << bs;
      if (bs && j > 0) v |= src.words_[j - 1] >> (64 - bs);
      words_[i] |= v;
    }
  }

  void shift_down_merge(const ResidueSet& src, std::uint64_t t) {
    const std::size_t ws = t >> 6, bs = t & 63, n = words_.size();
    for (std::size_t i = 0; i + ws < n; ++i) {
      const std::size_t j = i + ws;
      std::uint64_t v = src.words_[j] >> bs;
      if (bs && j + 1 < n) v |= src.words_[j + 1] << (64 - bs);
      words_[i] |= v;
    }
  }

  std::uint64_t m_;
  std::vector<std::uint64_t> words_;
};

struct Work {
  std::uint64_t spent = 0;
  std::uint64_t budget = 0;
  void charge(std::uint64_t units) {
    spent += units;
    if (spent > budget) throw BudgetExceeded{};
  }
};

// {r + t mod m : r in a, t in b}
ResidueSet sumset(const ResidueSet& a, const ResidueSet& b, Work& work) {
  const auto m = a.modulus();
  ResidueSet out(m);
  auto ca = a.count(), cb = b.count();
  work.charge(2 * a.word_count());
  if (ca == 0 || cb == 0) return out;
  if (ca + cb > m) {
    // Pigeonhole: c - b meets a for every c.
    out.fill();
    return out;
  }
  const ResidueSet* small = &a;
  const ResidueSet* large = &b;
  if (ca > cb) {
    std::swap(small, large);
    std::swap(ca, cb);
  }
  const auto rotate_cost = 2 * static_cast<std::uint64_t>(a.word_count());
  if (cb <= rotate_cost) {
    work.charge(ca * cb);
    small->for_each([&](std::uint64_t r) {
      large->for_each([&](std::uint64_t t) {
        const auto v = r + t;
        out.set(v >= m ? v - m : v);
      });
    });
  } else {
    small->for_each([&](std::uint64_t r) {
      work.charge(rotate_cost);
      out.rotate_merge(*large, r);
    });
  }
  return out;
}

std::uint64_t sum_of_powers(std::span<const std::int64_t> a, std::span<const std::uint64_t> x, unsigned k,
                            std::uint64_t m) {
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    total = (total + mul_mod(reduce_mod(a[j], m), pow_mod(x[j], k, m), m)) % m;
  }
  return total;
}

bool verify_primitive(const DiagonalForm& form, std::uint64_t p, std::uint64_t m, std::span<const std::uint64_t> x) {
  if (sum_of_powers(form.coefficients(), x, form.degree(), m) != 0) return false;
  return std::any_of(x.begin(), x.end(), [&](std::uint64_t v) { return v % p != 0; });
}

// Exact decision mod m = p^level by dynamic programming over coordinates.
// R0 holds sums reachable with every coordinate so far divisible by p, R1
// sums reachable with at least one unit coordinate.
std::optional<std::vector<std::uint64_t>> residue_search(const DiagonalForm& form, std::uint64_t p,
                                                         std::uint64_t m, Work& work) {
  const auto s = form.dimension();
  const unsigned k = form.degree();
  if (m > (1ULL << 26)) throw BudgetExceeded{};
  work.charge(m);

  std::vector<std::uint32_t> power(m);
  for (std::uint64_t x = 0; x < m; ++x) power[x] = static_cast<std::uint32_t>(pow_mod(x, k, m));

  // Units first so the primitive set fills early.
  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return arith::p_adic_valuation(form.coefficient(i), p) < arith::p_adic_valuation(form.coefficient(j), p);
  });

  struct Sets {
    ResidueSet nonunit, unit, any;
  };
  std::map<std::uint64_t, Sets> cache;
  auto sets_for = [&](std::uint64_t a) -> const Sets& {
    auto it = cache.find(a);
    if (it != cache.end()) return it->second;
    work.charge(m);
    Sets sets{ResidueSet(m), ResidueSet(m), ResidueSet(m)};
    for (std::uint64_t x = 0; x < m; ++x) {
      const auto v = mul_mod(a, power[x], m);
      (x % p == 0 ? sets.nonunit : sets.unit).set(v);
      sets.any.set(v);
    }
    return cache.emplace(a, std::move(sets)).first->second;
  };

  std::vector<ResidueSet> r0, r1;
  r0.emplace_back(m);
  r1.emplace_back(m);
  r0[0].set(0);
  std::size_t stage = 0;
  while (stage < s && !r1[stage].test(0)) {
    const auto a = reduce_mod(form.coefficient(order[stage]), m);
    const Sets& sets = sets_for(a);
    ResidueSet next0 = sumset(r0[stage], sets.nonunit, work);
    ResidueSet next1 = sumset(r1[stage], sets.any, work);
    next1.merge(sumset(r0[stage], sets.unit, work));
    r0.push_back(std::move(next0));
    r1.push_back(std::move(next1));
    ++stage;
  }
  if (!r1[stage].test(0)) return std::nullopt;

  // Walk back from (stage, target 0, primitive) choosing the least residue.
  std::vector<std::uint64_t> witness(s, 0);
  std::uint64_t target = 0;
  bool primitive = true;
  for (std::size_t i = stage; i-- > 0;) {
    work.charge(m);
    const auto a = reduce_mod(form.coefficient(order[i]), m);
    bool chosen = false;
    for (std::uint64_t x = 0; x < m && !chosen; ++x) {
      const auto v = mul_mod(a, power[x], m);
      const auto prev = target >= v ? target - v : target + m - v;
      const bool unit = x % p != 0;
      if (primitive) {
        if (r1[i].test(prev)) {
          chosen = true;
        } else if (unit && r0[i].test(prev)) {
          chosen = true;
          primitive = false;
        }
      } else if (!unit && r0[i].test(prev)) {
        chosen = true;
      }
      if (chosen) {
        witness[order[i]] = x;
        target = prev;
      }
    }
    if (!chosen) throw NumericalError("residue search backtrack failed");
  }
  return witness;
}

// x^k = t mod p for prime p, via a g-th root with g = gcd(k, p - 1). Returns
// nullopt for non-residues; `unresolved` is set when the closed form does not
// apply and a table is needed.
std::optional<std::uint64_t> kth_root_closed_form(std::uint64_t t, unsigned k, std::uint64_t p, bool& unresolved) {
  unresolved = false;
  if (t == 0) return 0;
  const std::uint64_t n = p - 1;
  const std::uint64_t g = std::gcd<std::uint64_t>(k, n);
  if (pow_mod(t, n / g, p) != 1) return std::nullopt;
  std::uint64_t y = t;
  if (g > 1) {
    const std::uint64_t q = n / g;
    if (q == 1) {
      y = 1;
    } else if (std::gcd(g, q) == 1) {
      y = pow_mod(t, inverse_mod(g % q, q), p);
    } else {
      unresolved = true;
      return std::nullopt;
    }
  }
  // alpha * k = g mod (p - 1), so (y^alpha)^k = y^g = t.
  const std::uint64_t kg = k / g, ng = n / g;
  const std::uint64_t alpha = ng == 1 ? 1 : inverse_mod(kg % ng, ng);
  const auto w = pow_mod(y, alpha, p);
  if (pow_mod(w, k, p) != t) {
    unresolved = true;
    return std::nullopt;
  }
  return w;
}

// Lifts x (a zero mod p with p not dividing k * a_i * x_i) to level L by
// adjusting coordinate i one digit at a time.
std::vector<std::uint64_t> hensel_lift(const DiagonalForm& form, std::uint64_t p, unsigned level, std::size_t i,
                                       std::vector<std::uint64_t> x) {
  const unsigned k = form.degree();
  const auto mL = arith::checked_pow_u64(p, level);
  const auto a_i = reduce_mod(form.coefficient(i), p);
  std::uint64_t pj = 1;
  for (unsigned j = 1; j < level; ++j) {
    pj *= p;
    const auto f = sum_of_powers(form.coefficients(), x, k, mL);
    const auto f_next = f % (pj * p);
    if (f_next % pj != 0) throw NumericalError("lifting invariant broken");
    const auto digit = f_next / pj;
    const auto deriv = mul_mod(mul_mod(k % p, a_i, p), pow_mod(x[i] % p, k - 1, p), p);
    const auto d = mul_mod((p - digit) % p, inverse_mod(deriv, p), p);
    x[i] = (x[i] + mul_mod(d, pj, mL)) % mL;
  }
  return x;
}

std::uint64_t form_seed(const DiagonalForm& form, std::uint64_t p) {
  std::uint64_t h = arith::mix_stream(p, form.degree());
  for (auto a : form.coefficients()) h = arith::mix_stream(h, static_cast<std::uint64_t>(a));
  return h;
}

// p not dividing k: any zero mod p with a nonsingular coordinate lifts to
// every level. Tries random sampling, then an exact search mod p over the
// coordinates whose coefficient is a unit.
std::optional<std::vector<std::uint64_t>> nonsingular_zero_mod_p(const DiagonalForm& form, std::uint64_t p,
                                                                 Work& work, std::size_t& pivot) {
  const auto s = form.dimension();
  const unsigned k = form.degree();
  std::vector<std::size_t> units;
  for (std::size_t j = 0; j < s; ++j) {
    if (form.coefficient(j) % static_cast<std::int64_t>(p) != 0) units.push_back(j);
  }
  if (units.empty()) return std::nullopt;

  if (p >= 64 && units.size() >= 2) {
    std::vector<std::uint32_t> table;
    bool use_table = false;
    auto root_of = [&](std::uint64_t t) -> std::optional<std::uint64_t> {
      if (!use_table) {
        bool unresolved = false;
        auto r = kth_root_closed_form(t, k, p, unresolved);
        if (!unresolved) return r;
        if (p > (1ULL << 24)) return std::nullopt;
        work.charge(p);
        table.assign(p, 0);
        for (std::uint64_t x = 1; x < p; ++x) table[pow_mod(x, k, p)] = static_cast<std::uint32_t>(x);
        use_table = true;
      }
      if (t == 0) return 0;
      if (table[t] == 0) return std::nullopt;
      return table[t];
    };
    auto engine = arith::SeededStream{form_seed(form, p), 0}.engine();
    const auto i0 = units.front();
    const auto inv_a = inverse_mod(reduce_mod(form.coefficient(i0), p), p);
    for (int attempt = 0; attempt < 64; ++attempt) {
      work.charge(s);
      std::vector<std::uint64_t> x(s, 0);
      std::uint64_t partial = 0;
      for (std::size_t j = 0; j < s; ++j) {
        if (j == i0) continue;
        x[j] = arith::uniform_below(engine, p);
        partial = (partial + mul_mod(reduce_mod(form.coefficient(j), p), pow_mod(x[j], k, p), p)) % p;
      }
      const auto t = mul_mod((p - partial) % p, inv_a, p);
      if (t == 0) continue;
      if (auto r = root_of(t)) {
        x[i0] = *r;
        pivot = i0;
        return x;
      }
    }
  }

  std::vector<std::int64_t> sub;
  for (auto j : units) sub.push_back(form.coefficient(j));
  auto found = residue_search(DiagonalForm(k, sub), p, p, work);
  if (!found) return std::nullopt;
  std::vector<std::uint64_t> x(s, 0);
  for (std::size_t idx = 0; idx < units.size(); ++idx) {
    x[units[idx]] = (*found)[idx];
    if ((*found)[idx] % p != 0) pivot = units[idx];
  }
  return x;
}

}  // namespace

bool real_soluble(const DiagonalForm& form) {
  if (form.degree() % 2 == 1) return true;
  bool pos = false, neg = false;
  for (auto a : form.coefficients()) (a > 0 ? pos : neg) = true;
  return pos && neg;
}

unsigned gamma_level(const DiagonalForm& form, std::uint64_t p) {
  require_prime(p);
  const auto nu = arith::p_adic_valuation(static_cast<std::int64_t>(form.degree()), p);
  return max_valuation_of(form, p) + nu + 2;
}

namespace {

BigInt to_bigint(unsigned __int128 v) {
  BigInt r = static_cast<std::uint64_t>(v >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(v);
  return r;
}

BigInt count_by_histogram(const DiagonalForm& form, std::uint64_t m, std::uint64_t budget) {
  const auto s = form.dimension();
  if (m > (1ULL << 26) || m > budget) {
    throw ResourceError("congruence count mod " + std::to_string(m) + " exceeds the budget");
  }
  std::vector<std::uint64_t> power_hist(m, 0);
  for (std::uint64_t x = 0; x < m; ++x) ++power_hist[pow_mod(x, form.degree(), m)];
  std::vector<std::pair<std::uint64_t, std::uint64_t>> powers;
  for (std::uint64_t v = 0; v < m; ++v) {
    if (power_hist[v]) powers.emplace_back(v, power_hist[v]);
  }
  const auto estimate = static_cast<long double>(s) * m * powers.size();
  if (estimate > static_cast<long double>(budget)) {
    throw ResourceError("congruence count mod " + std::to_string(m) + " needs about " +
                        std::to_string(static_cast<std::uint64_t>(estimate)) + " steps, budget " +
                        std::to_string(budget));
  }

  using Wide = unsigned __int128;
  std::vector<Wide> acc(m, 0), next(m);
  acc[0] = 1;
  for (std::size_t j = 0; j < s; ++j) {
    const auto a = reduce_mod(form.coefficient(j), m);
    std::fill(next.begin(), next.end(), 0);
    for (const auto& [v, c] : powers) {
      const auto shift = mul_mod(a, v, m);
      for (std::uint64_t r = 0; r < m; ++r) {
        if (!acc[r]) continue;
        Wide term;
        if (__builtin_mul_overflow(acc[r], static_cast<Wide>(c), &term)) {
          throw OverflowError("congruence count overflows 128 bits");
        }
        auto& slot = next[r + shift >= m ? r + shift - m : r + shift];
        if (__builtin_add_overflow(slot, term, &slot)) throw OverflowError("congruence count overflows 128 bits");
      }
    }
    acc.swap(next);
  }
  return to_bigint(acc[0]);
}

// Level 1: every histogram a_j x^k mod p is constant on the cosets of the
// subgroup H of k-th power units, and so is every convolution of them. The
// cyclotomic numbers N[l][i][j] = #{t : t in C_i, c_l - t in C_j} carry the
// whole computation.
BigInt count_mod_prime_by_cosets(const DiagonalForm& form, std::uint64_t p) {
  const std::uint64_t g = std::gcd<std::uint64_t>(form.degree(), p - 1);
  const std::uint64_t n = (p - 1) / g;
  std::vector<std::uint64_t> prime_factors_of_g;
  for (const auto& [q, e] : arith::factorize(g)) {
    (void)e;
    prime_factors_of_g.push_back(q);
  }
  std::uint64_t zeta = 1;
  for (std::uint64_t z = 2; z < p; ++z) {
    zeta = pow_mod(z, n, p);
    bool full_order = true;
    for (auto q : prime_factors_of_g) full_order = full_order && pow_mod(zeta, g / q, p) != 1;
    if (full_order) break;
  }
  std::map<std::uint64_t, std::uint32_t> zeta_index;
  std::uint64_t zp = 1;
  for (std::uint64_t i = 0; i < g; ++i, zp = mul_mod(zp, zeta, p)) zeta_index[zp] = static_cast<std::uint32_t>(i);
  std::vector<std::uint32_t> ind(p, 0);
  for (std::uint64_t x = 1; x < p; ++x) ind[x] = zeta_index.at(pow_mod(x, n, p));

  std::vector<std::uint64_t> rep(g, 0);
  for (std::uint64_t x = p - 1; x >= 1; --x) rep[ind[x]] = x;
  std::vector<std::uint64_t> N(g * g * g, 0);
  for (std::uint64_t l = 0; l < g; ++l) {
    const auto c = rep[l];
    for (std::uint64_t t = 1; t < p; ++t) {
      if (t == c) continue;
      ++N[(l * g + ind[t]) * g + ind[c - t + (t > c ? p : 0)]];
    }
  }
  const auto minus_one = ind[p - 1];

  // Function value at 0 and on each coset.
  BigInt acc0 = 1;
  std::vector<BigInt> acc(g, BigInt(0));
  for (auto a_signed : form.coefficients()) {
    const auto a = reduce_mod(a_signed, p);
    BigInt f0 = a == 0 ? BigInt(p) : BigInt(1);
    std::vector<BigInt> f(g, BigInt(0));
    if (a != 0) f[ind[a]] = g;
    BigInt next0 = f0 * acc0;
    for (std::uint64_t i = 0; i < g; ++i) next0 += BigInt(n) * f[i] * acc[(i + minus_one) % g];
    std::vector<BigInt> next(g);
    for (std::uint64_t l = 0; l < g; ++l) {
      BigInt v = f0 * acc[l] + acc0 * f[l];
      for (std::uint64_t i = 0; i < g; ++i) {
        if (f[i] == 0) continue;
        for (std::uint64_t j = 0; j < g; ++j) v += BigInt(N[(l * g + i) * g + j]) * f[i] * acc[j];
      }
      next[l] = std::move(v);
    }
    acc0 = std::move(next0);
    acc = std::move(next);
  }
  return acc0;
}

}  // namespace

BigInt count_congruence_solutions(const DiagonalForm& form, std::uint64_t p, unsigned level, std::uint64_t budget) {
  require_prime(p);
  if (level == 0) return 1;
  if (level == 1 && p >= 128) {
    if (p > (1ULL << 26) || p > budget) {
      throw ResourceError("congruence count mod " + std::to_string(p) + " exceeds the budget");
    }
    return count_mod_prime_by_cosets(form, p);
  }
  return count_by_histogram(form, arith::checked_pow_u64(p, level), budget);
}

Rational chi_p_estimate(const DiagonalForm& form, std::uint64_t p, unsigned level, std::uint64_t budget) {
  const auto M = count_congruence_solutions(form, p, level, budget);
  BigInt denom = boost::multiprecision::pow(BigInt(p), level * static_cast<unsigned>(form.dimension() - 1));
  return Rational(M, denom);
}

PadicResult primitive_solution_mod(const DiagonalForm& form, std::uint64_t p, unsigned level, std::uint64_t budget) {
  require_prime(p);
  if (level == 0) throw DomainError("primitive solutions need level >= 1");
  PadicResult result;
  result.level = level;
  const auto m = arith::checked_pow_u64(p, level);
  Work work{0, budget};
  try {
    std::optional<std::vector<std::uint64_t>> witness;
    if (form.degree() % p != 0) {
      std::size_t pivot = 0;
      if (auto zero = nonsingular_zero_mod_p(form, p, work, pivot)) {
        witness = hensel_lift(form, p, level, pivot, std::move(*zero));
      }
    }
    if (!witness) witness = residue_search(form, p, m, work);
    if (witness) {
      if (!verify_primitive(form, p, m, *witness)) throw NumericalError("p-adic witness failed verification");
      result.status = Status::soluble;
      result.witness = std::move(witness);
    } else {
      result.status = Status::insoluble;
    }
  } catch (const BudgetExceeded&) {
    result.status = Status::unknown;
  }
  result.work = work.spent;
  return result;
}

PadicResult padic_soluble(const DiagonalForm& form, std::uint64_t p, std::uint64_t budget) {
  return primitive_solution_mod(form, p, gamma_level(form, p), budget);
}

PrimeProfile prime_profile(const DiagonalForm& form, std::uint64_t cutoff) {
  PrimeProfile prof;
  prof.cutoff = cutoff;
  std::map<std::uint64_t, unsigned> divides_count;
  for (auto a : form.coefficients()) {
    for (const auto& [q, e] : arith::factorize(static_cast<std::uint64_t>(a < 0 ? -a : a))) {
      (void)e;
      ++divides_count[q];
    }
  }
  for (const auto& [q, c] : divides_count) {
    if (c >= 2) prof.shared_primes.push_back(q);
  }
  std::set<std::uint64_t> primes(prof.shared_primes.begin(), prof.shared_primes.end());
  for (auto q : arith::primes_up_to(cutoff)) {
    primes.insert(q);
    prof.H *= q;
  }
  prof.primes.assign(primes.begin(), primes.end());
  for (auto q : prof.primes) {
    const auto l = max_valuation_of(form, q);
    prof.max_valuation[q] = l;
    prof.P *= q;
    prof.P_dagger *= boost::multiprecision::pow(BigInt(q), l);
    if (q > cutoff) prof.P0 *= q;
  }
  return prof;
}

std::uint64_t rigorous_cutoff(unsigned k, std::size_t s, std::uint64_t limit) {
  const BigInt c = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(s + k + 2));
  BigInt root = boost::multiprecision::sqrt(c);
  if (root * root < c) ++root;
  if (root > limit) {
    throw ResourceError("rigorous prime cutoff ceil(sqrt(" + std::to_string(k) + "^" + std::to_string(s + k + 2) +
                        ")) exceeds the enumeration limit " + std::to_string(limit) + "; use heuristic mode");
  }
  return static_cast<std::uint64_t>(root);
}

std::uint64_t default_heuristic_cap(unsigned k) {
  return std::max<std::uint64_t>(arith::checked_pow_u64(k, 4), 1000);
}

PrimeSet local_prime_set(const DiagonalForm& form, Mode mode, std::optional<std::uint64_t> cap, std::uint64_t limit) {
  PrimeSet set;
  set.mode = mode;
  std::uint64_t bound;
  std::uint64_t cutoff;
  if (mode == Mode::rigorous) {
    cutoff = rigorous_cutoff(form.degree(), form.dimension(), limit);
    const BigInt c = boost::multiprecision::pow(BigInt(form.degree()), static_cast<unsigned>(form.dimension() + form.degree() + 2));
    bound = static_cast<std::uint64_t>(boost::multiprecision::sqrt(c));
  } else {
    cutoff = cap.value_or(default_heuristic_cap(form.degree()));
    bound = cutoff;
  }
  set.profile = prime_profile(form, cutoff);
  std::set<std::uint64_t> primes;
  for (auto q : arith::primes_up_to(bound)) primes.insert(q);
  for (auto a : form.coefficients()) {
    for (const auto& [q, e] : arith::factorize(static_cast<std::uint64_t>(a < 0 ? -a : a))) {
      (void)e;
      primes.insert(q);
    }
  }
  set.primes.assign(primes.begin(), primes.end());
  return set;
}

LocalReport local_report(const DiagonalForm& form, const LocalOptions& options) {
  LocalReport report;
  report.mode = options.mode;
  report.real_soluble = real_soluble(form);
  const auto set = local_prime_set(form, options.mode, options.heuristic_cap, options.rigorous_limit);
  report.cutoff = set.profile.cutoff;
  const auto n = static_cast<std::int64_t>(set.primes.size());
  report.prime_verdicts.resize(set.primes.size());

#pragma omp parallel for schedule(dynamic) if (options.parallel)
  for (std::int64_t idx = 0; idx < n; ++idx) {
    const auto p = set.primes[static_cast<std::size_t>(idx)];
    PrimeVerdict& v = report.prime_verdicts[static_cast<std::size_t>(idx)];
    v.p = p;
    v.gamma = gamma_level(form, p);
    const auto r = primitive_solution_mod(form, p, v.gamma, options.budget);
    v.status = r.status;
    v.witness = r.witness;
    const long double modulus = std::pow(static_cast<long double>(p), static_cast<long double>(v.gamma));
    if (modulus <= static_cast<long double>(options.chi_modulus_limit)) {
      try {
        v.chi_estimate = chi_p_estimate(form, p, v.gamma);
      } catch (const ResourceError&) {
      } catch (const OverflowError&) {
      }
    }
  }

  Overall& o = report.overall;
  bool any_unknown = false;
  for (const auto& v : report.prime_verdicts) {
    if (v.status == Status::insoluble && !o.witness_prime) o.witness_prime = v.p;
    if (v.status == Status::unknown) any_unknown = true;
  }
  if (!report.real_soluble) {
    o.kind = Overall::Kind::locally_insoluble;
    o.real_obstruction = true;
  } else if (o.witness_prime) {
    o.kind = Overall::Kind::locally_insoluble;
  } else if (any_unknown) {
    o.kind = Overall::Kind::undetermined;
  } else {
    o.kind = Overall::Kind::locally_soluble;
  }
  return report;
}

SeriesCertificate series_lower_certificate(const DiagonalForm& form, const PrimeProfile& profile,
                                           std::uint64_t budget) {
  SeriesCertificate cert;
  const auto s = static_cast<unsigned>(form.dimension());
  BigInt denom = 2;
  double log10 = -std::log10(2.0);
  for (auto p : profile.primes) {
    const auto r = padic_soluble(form, p, budget);
    if (r.status != Status::soluble) {
      cert.note = std::string("no primitive solution established at p=") + std::to_string(p) + " (" +
                  to_string(r.status) + ")";
      return cert;
    }
    denom *= boost::multiprecision::pow(BigInt(p), (s - 1) * r.level);
    log10 -= static_cast<double>((s - 1) * r.level) * std::log10(static_cast<double>(p));
  }
  cert.value = Rational(BigInt(1), denom);
  cert.log10_value = log10;
  cert.note = "conditional on primitive solubility at every profile prime, which was verified";
  return cert;
}

}  // namespace dioph::local
