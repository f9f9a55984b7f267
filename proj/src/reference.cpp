#include "dioph/reference.hpp"

#include <algorithm>
#include <cstdlib>

#include "dioph/arith.hpp"
#include "dioph/errors.hpp"
#include "dioph/lattice.hpp"

namespace dioph::reference {

namespace {

// Visits every x in [-B, B]^s as a mutable vector.
template <typename F>
void for_each_point(std::size_t s, std::int64_t B, F&& f) {
  std::vector<std::int64_t> x(s, -B);
  while (true) {
    f(x);
    std::size_t j = s;
    while (j > 0 && x[j - 1] == B) x[--j] = -B;
    if (j == 0) return;
    ++x[j - 1];
  }
}

std::int64_t sup_norm(const std::vector<std::int64_t>& x) {
  std::int64_t m = 0;
  for (auto v : x) m = std::max(m, std::abs(v));
  return m;
}

bool all_nonzero(const std::vector<std::int64_t>& x) {
  return std::none_of(x.begin(), x.end(), [](std::int64_t v) { return v == 0; });
}

}  // namespace

std::uint64_t naive_count(const DiagonalForm& form, std::int64_t B, counting::CountMode mode) {
  std::uint64_t n = 0;
  for_each_point(form.dimension(), B, [&](const std::vector<std::int64_t>& x) {
    const bool ok = mode == counting::CountMode::all_coords_nonzero ? all_nonzero(x) : sup_norm(x) > 0;
    if (ok && forms::evaluate(form, x) == 0) ++n;
  });
  return n;
}

std::int64_t naive_min_norm(const DiagonalForm& form, std::int64_t B) {
  std::int64_t best = 0;
  for_each_point(form.dimension(), B, [&](const std::vector<std::int64_t>& x) {
    const auto m = sup_norm(x);
    if (m > 0 && (best == 0 || m < best) && forms::evaluate(form, x) == 0) best = m;
  });
  return best;
}

std::vector<std::vector<std::int64_t>> naive_solutions(const DiagonalForm& form, std::int64_t B) {
  std::vector<std::vector<std::int64_t>> out;
  for_each_point(form.dimension(), B, [&](const std::vector<std::int64_t>& x) {
    if (sup_norm(x) > 0 && forms::evaluate(form, x) == 0) out.push_back(x);
  });
  return out;
}

std::uint64_t naive_congruence_count(const DiagonalForm& form, std::uint64_t p, unsigned level) {
  const std::uint64_t m = arith::checked_pow_u64(p, level);
  std::vector<std::uint64_t> ways(m, 0);
  ways[0] = 1;
  for (auto a : form.coefficients()) {
    std::vector<std::uint64_t> next(m, 0);
    const auto am = arith::reduce_mod(a, m);
    for (std::uint64_t x = 0; x < m; ++x) {
      const auto term = arith::mul_mod(am, arith::pow_mod(x, form.degree(), m), m);
      for (std::uint64_t r = 0; r < m; ++r) next[(r + term) % m] += ways[r];
    }
    ways.swap(next);
  }
  return ways[0];
}

bool naive_primitive_soluble(const DiagonalForm& form, std::uint64_t p, unsigned level) {
  const std::uint64_t m = arith::checked_pow_u64(p, level);
  // reach[u][r]: some prefix sums to r, u = whether a unit coordinate was used.
  std::vector<std::vector<char>> reach(2, std::vector<char>(m, 0));
  reach[0][0] = 1;
  for (auto a : form.coefficients()) {
    std::vector<std::vector<char>> next(2, std::vector<char>(m, 0));
    const auto am = arith::reduce_mod(a, m);
    for (std::uint64_t x = 0; x < m; ++x) {
      const auto term = arith::mul_mod(am, arith::pow_mod(x, form.degree(), m), m);
      const int unit = x % p != 0;
      for (int u = 0; u < 2; ++u) {
        for (std::uint64_t r = 0; r < m; ++r) {
          if (reach[u][r]) next[u | unit][(r + term) % m] = 1;
        }
      }
    }
    reach.swap(next);
  }
  return reach[1][0] != 0;
}

std::uint64_t lattice_xi_count(unsigned k, std::size_t s, std::int64_t A, std::int64_t B) {
  if (B < 1) throw DomainError("B must be at least 1");
  std::uint64_t total = 0;
  for_each_point(s, B, [&](const std::vector<std::int64_t>& x) {
    if (sup_norm(x) == 0) return;
    const auto lat = lattice::coefficient_lattice(x, k);
    for (const auto& a : lattice::enumerate_box(lat, A)) {
      if (all_nonzero(a)) ++total;
    }
  });
  return total;
}

std::uint64_t triple_loop_upsilon(unsigned k, unsigned t, std::int64_t A, std::int64_t B) {
  const std::size_t s = 2 * t;
  std::uint64_t total = 0;
  for_each_point(s, A, [&](const std::vector<std::int64_t>& a) {
    if (!all_nonzero(a)) return;
    const DiagonalForm form(k, a);
    for_each_point(s, B, [&](const std::vector<std::int64_t>& x) {
      if (!all_nonzero(x) || forms::evaluate(form, x) != 0) return;
      for_each_point(s, B, [&](const std::vector<std::int64_t>& y) {
        if (all_nonzero(y) && forms::evaluate(form, y) == 0) ++total;
      });
    });
  });
  return total;
}

std::uint64_t naive_p_count(unsigned k, std::size_t s, std::int64_t A, std::int64_t B) {
  std::uint64_t total = 0;
  for_each_point(s, A, [&](const std::vector<std::int64_t>& a) {
    if (all_nonzero(a) && naive_min_norm(DiagonalForm(k, a), B) > 0) ++total;
  });
  return total;
}

std::uint64_t naive_power_pairs(std::int64_t B, std::uint64_t d, unsigned k) {
  std::uint64_t n = 0;
  for (std::int64_t u = -B; u <= B; ++u) {
    for (std::int64_t v = -B; v <= B; ++v) {
      const auto uk = arith::pow_mod(arith::reduce_mod(u, d), k, d);
      const auto vk = arith::pow_mod(arith::reduce_mod(v, d), k, d);
      if (uk == vk) ++n;
    }
  }
  return n;
}

}  // namespace dioph::reference
