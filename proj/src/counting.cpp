#include "dioph/counting.hpp"

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "dioph/arith.hpp"
#include "dioph/errors.hpp"

namespace dioph::counting {

using arith::checked_add;
using arith::checked_mul;
using arith::checked_pow;

const char* to_string(CountMode mode) {
  return mode == CountMode::all_coords_nonzero ? "all-nonzero" : "vector-nonzero";
}

CountMode parse_count_mode(std::string_view text) {
  if (text == "all-nonzero") return CountMode::all_coords_nonzero;
  if (text == "vector-nonzero") return CountMode::vector_nonzero;
  throw DomainError("count mode must be all-nonzero or vector-nonzero, got '" + std::string(text) + "'");
}

namespace {

using Values = std::vector<std::int64_t>;

// a x^k for x in `xs`.
Values scaled_powers(std::int64_t a, unsigned k, const std::vector<std::int64_t>& xs) {
  Values out;
  out.reserve(xs.size());
  for (auto x : xs) out.push_back(checked_mul(a, checked_pow(x, k)));
  return out;
}

std::vector<std::int64_t> box_range(std::int64_t B, bool include_zero) {
  std::vector<std::int64_t> xs;
  for (std::int64_t x = -B; x <= B; ++x) {
    if (x != 0 || include_zero) xs.push_back(x);
  }
  return xs;
}

long double product_size(const std::vector<Values>& coords, std::size_t begin, std::size_t end) {
  long double n = 1;
  for (std::size_t j = begin; j < end; ++j) n *= static_cast<long double>(coords[j].size());
  return n;
}

// Calls f(sum) for every tuple of coords[begin, end).
template <typename F>
void for_each_sum(const std::vector<Values>& coords, std::size_t begin, std::size_t end, std::int64_t base, F&& f) {
  if (begin == end) {
    f(base);
    return;
  }
  for (auto v : coords[begin]) for_each_sum(coords, begin + 1, end, checked_add(base, v), f);
}

using CountTable = absl::flat_hash_map<std::int64_t, std::uint64_t>;

CountTable tabulate(const std::vector<Values>& coords, std::size_t begin, std::size_t end) {
  CountTable table;
  table.reserve(static_cast<std::size_t>(product_size(coords, begin, end)));
  for_each_sum(coords, begin, end, 0, [&](std::int64_t v) { ++table[v]; });
  return table;
}

// Number of tuples over all coordinates summing to 0.
std::uint64_t count_zero_sums(const std::vector<Values>& coords, const CountOptions& options) {
  const std::size_t s = coords.size();
  const std::size_t half = s / 2;
  const long double table_size = product_size(coords, 0, half);
  if (table_size > static_cast<long double>(options.table_cap)) {
    throw ResourceError("meet-in-the-middle table needs " + std::to_string(static_cast<std::uint64_t>(table_size)) +
                        " entries, cap " + std::to_string(options.table_cap));
  }
  const long double streamed = product_size(coords, half, s);
  if (streamed > static_cast<long double>(options.stream_budget)) {
    throw ResourceError("meet-in-the-middle stream needs " + std::to_string(static_cast<std::uint64_t>(streamed)) +
                        " tuples, budget " + std::to_string(options.stream_budget));
  }
  const CountTable table = tabulate(coords, 0, half);
  if (half == s) return table.contains(0) ? table.at(0) : 0;

  const auto& lead = coords[half];
  const auto n = static_cast<std::int64_t>(lead.size());
  std::uint64_t total = 0;
  bool overflow = false;
#pragma omp parallel for schedule(dynamic) reduction(+ : total) reduction(|| : overflow) if (options.parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      for_each_sum(coords, half + 1, s, lead[static_cast<std::size_t>(i)], [&](std::int64_t v) {
        if (v == std::numeric_limits<std::int64_t>::min()) return;
        if (auto it = table.find(-v); it != table.end()) total += it->second;
      });
    } catch (const OverflowError&) {
      overflow = true;
    }
  }
  if (overflow) throw OverflowError("partial sums overflow 64 bits");
  return total;
}

std::vector<Values> coordinate_values(std::span<const std::int64_t> a, unsigned k, std::int64_t B, bool include_zero) {
  const auto xs = box_range(B, include_zero);
  std::vector<Values> coords;
  for (auto c : a) coords.push_back(scaled_powers(c, k, xs));
  return coords;
}

std::uint64_t factorial(std::size_t n) {
  std::uint64_t r = 1;
  for (std::size_t i = 2; i <= n; ++i) r *= i;
  return r;
}

// s! / prod (run lengths)! for a sorted vector.
template <typename T>
std::uint64_t orbit_size(const std::vector<T>& sorted) {
  std::uint64_t r = factorial(sorted.size());
  std::size_t run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
    } else {
      r /= factorial(run);
      run = 1;
    }
  }
  return r;
}

void require_positive(std::int64_t v, const char* name) {
  if (v < 1) throw DomainError(std::string(name) + " must be at least 1");
}

}  // namespace

std::uint64_t count_solutions(const DiagonalForm& form, std::int64_t B, CountMode mode, const CountOptions& options) {
  require_positive(B, "B");
  const bool include_zero = mode == CountMode::vector_nonzero;
  const auto coords = coordinate_values(form.coefficients(), form.degree(), B, include_zero);
  const auto zeros = count_zero_sums(coords, options);
  return include_zero ? zeros - 1 : zeros;
}

namespace {

struct MinNormTable {
  absl::flat_hash_map<std::int64_t, std::int64_t> min_nonzero_norm;
};

// Least sup-norm of a nonzero zero inside [-B, B]^s, or 0 when none.
std::int64_t min_norm_in_box(const DiagonalForm& form, std::int64_t B, const CountOptions& options) {
  const auto s = form.dimension();
  const auto coords = coordinate_values(form.coefficients(), form.degree(), B, true);
  const auto xs = box_range(B, true);
  const std::size_t prefix = (s + 1) / 2;
  if (product_size(coords, prefix, s) > static_cast<long double>(options.table_cap)) {
    throw ResourceError("search table for |x| <= " + std::to_string(B) + " exceeds the cap");
  }
  if (product_size(coords, 0, prefix) > static_cast<long double>(options.stream_budget)) {
    throw ResourceError("search stream for |x| <= " + std::to_string(B) + " exceeds the budget");
  }

  absl::flat_hash_map<std::int64_t, std::int64_t> suffix_norm;
  {
    std::vector<std::size_t> idx(s - prefix, 0);
    const std::size_t width = xs.size();
    while (true) {
      std::int64_t sum = 0, norm = 0;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        sum = checked_add(sum, coords[prefix + j][idx[j]]);
        norm = std::max(norm, std::abs(xs[idx[j]]));
      }
      if (norm > 0) {
        auto [it, inserted] = suffix_norm.emplace(sum, norm);
        if (!inserted && norm < it->second) it->second = norm;
      }
      std::size_t pos = idx.size();
      while (pos > 0 && ++idx[pos - 1] == width) idx[--pos] = 0;
      if (pos == 0) break;
    }
  }

  const auto n = static_cast<std::int64_t>(xs.size());
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  bool overflow = false;
#pragma omp parallel for schedule(dynamic) reduction(min : best) reduction(|| : overflow) if (options.parallel)
  for (std::int64_t i0 = 0; i0 < n; ++i0) {
    try {
      std::vector<std::size_t> idx(prefix, 0);
      idx[0] = static_cast<std::size_t>(i0);
      while (true) {
        std::int64_t sum = 0, norm = 0;
        for (std::size_t j = 0; j < prefix; ++j) {
          sum = checked_add(sum, coords[j][idx[j]]);
          norm = std::max(norm, std::abs(xs[idx[j]]));
        }
        if (norm < best) {
          if (norm > 0 && sum == 0) best = norm;
          if (sum != std::numeric_limits<std::int64_t>::min()) {
            if (auto it = suffix_norm.find(-sum); it != suffix_norm.end()) best = std::min(best, std::max(norm, it->second));
          }
        }
        std::size_t pos = prefix;
        while (pos > 1 && ++idx[pos - 1] == xs.size()) idx[--pos] = 0;
        if (pos == 1) break;
      }
    } catch (const OverflowError&) {
      overflow = true;
    }
  }
  if (overflow) throw OverflowError("partial sums overflow 64 bits");
  return best == std::numeric_limits<std::int64_t>::max() ? 0 : best;
}

struct ShellKeyHash {
  std::size_t operator()(const std::pair<std::int64_t, bool>& k) const {
    return absl::Hash<std::pair<std::int64_t, bool>>()(k);
  }
};

// Lexicographically greatest zero with sup-norm exactly m (m >= 1).
std::optional<std::vector<std::int64_t>> lex_greatest_in_shell(const DiagonalForm& form, std::int64_t m,
                                                               const CountOptions& options) {
  const auto s = form.dimension();
  const unsigned k = form.degree();
  std::vector<std::int64_t> desc;
  for (std::int64_t x = m; x >= -m; --x) desc.push_back(x);
  std::vector<Values> coords;
  for (auto a : form.coefficients()) coords.push_back(scaled_powers(a, k, desc));
  const std::size_t prefix = (s + 1) / 2;
  const std::size_t width = desc.size();

  // Suffix tuples in descending lexicographic order; keep the first index per
  // (sum, touches the shell).
  absl::flat_hash_map<std::pair<std::int64_t, bool>, std::uint64_t, ShellKeyHash> first_index;
  {
    std::vector<std::size_t> idx(s - prefix, 0);
    std::uint64_t counter = 0;
    while (true) {
      std::int64_t sum = 0;
      bool edge = false;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        sum = checked_add(sum, coords[prefix + j][idx[j]]);
        edge = edge || std::abs(desc[idx[j]]) == m;
      }
      first_index.emplace(std::make_pair(sum, edge), counter++);
      std::size_t pos = idx.size();
      while (pos > 0 && ++idx[pos - 1] == width) idx[--pos] = 0;
      if (pos == 0) break;
    }
  }
  auto decode = [&](std::uint64_t index) {
    std::vector<std::int64_t> tail(s - prefix);
    for (std::size_t j = tail.size(); j-- > 0;) {
      tail[j] = desc[index % width];
      index /= width;
    }
    return tail;
  };

  const auto n = static_cast<std::int64_t>(width);
  std::vector<std::optional<std::vector<std::int64_t>>> per_lead(width);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
  for (std::int64_t i0 = 0; i0 < n; ++i0) {
    std::vector<std::size_t> idx(prefix, 0);
    idx[0] = static_cast<std::size_t>(i0);
    while (true) {
      std::int64_t sum = 0;
      bool edge = false;
      for (std::size_t j = 0; j < prefix; ++j) {
        sum = checked_add(sum, coords[j][idx[j]]);
        edge = edge || std::abs(desc[idx[j]]) == m;
      }
      std::optional<std::uint64_t> best;
      if (auto it = first_index.find({-sum, true}); it != first_index.end()) best = it->second;
      if (edge) {
        if (auto it = first_index.find({-sum, false}); it != first_index.end()) {
          best = best ? std::min(*best, it->second) : it->second;
        }
      }
      if (best) {
        std::vector<std::int64_t> x;
        for (std::size_t j = 0; j < prefix; ++j) x.push_back(desc[idx[j]]);
        for (auto v : decode(*best)) x.push_back(v);
        per_lead[static_cast<std::size_t>(i0)] = std::move(x);
        break;
      }
      std::size_t pos = prefix;
      while (pos > 1 && ++idx[pos - 1] == width) idx[--pos] = 0;
      if (pos == 1) break;
    }
  }
  for (auto& w : per_lead) {
    if (w) return w;
  }
  return std::nullopt;
}

}  // namespace

SearchOutcome smallest_solution(const DiagonalForm& form, std::int64_t B_max, const CountOptions& options) {
  require_positive(B_max, "B_max");
  SearchOutcome outcome;
  std::int64_t B = 1;
  while (true) {
    std::int64_t m;
    try {
      m = min_norm_in_box(form, B, options);
    } catch (const ResourceError& e) {
      throw ResourceError(std::string(e.what()) + "; last completed norm " + std::to_string(outcome.exhausted_up_to));
    }
    if (m > 0) {
      auto x = lex_greatest_in_shell(form, m, options);
      if (!x) throw NumericalError("shell search disagrees with the box search");
      outcome.found = Witness{std::move(*x), m};
      outcome.exhausted_up_to = m - 1;
      return outcome;
    }
    outcome.exhausted_up_to = B;
    if (B == B_max) return outcome;
    B = std::min(B_max, 2 * B);
  }
}

std::vector<CoefficientClass> coefficient_classes(std::size_t s, std::int64_t A) {
  require_positive(A, "A");
  if (s < 1) throw DomainError("s must be at least 1");
  std::vector<std::int64_t> values;
  for (std::int64_t v = -A; v <= A; ++v) {
    if (v != 0) values.push_back(v);
  }
  std::vector<CoefficientClass> classes;
  std::vector<std::size_t> idx(s, 0);
  while (true) {
    CoefficientClass c;
    for (auto i : idx) c.a.push_back(values[i]);
    c.multiplicity = orbit_size(c.a);
    classes.push_back(std::move(c));
    // Next nondecreasing index vector.
    std::size_t pos = s;
    while (pos > 0 && idx[pos - 1] + 1 == values.size()) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < s; ++j) idx[j] = idx[pos - 1];
  }
  return classes;
}

std::uint64_t xi_count(unsigned k, std::size_t s, std::int64_t A, std::int64_t B, const CountOptions& options) {
  if (B < 1) throw DomainError("xi_count needs B >= 1: x = 0 is excluded and the box would be empty");
  require_positive(A, "A");
  if (s < 1) throw DomainError("s must be at least 1");
  if (k < 2) throw DomainError("degree must be at least 2");

  // Classes of x by the sorted tuple of |x_j|; the coefficient count depends
  // only on the class because a_j ranges over a sign-symmetric set.
  std::vector<std::vector<std::int64_t>> classes;
  {
    std::vector<std::int64_t> idx(s, 0);
    while (true) {
      if (idx.back() != 0) classes.push_back(idx);
      std::size_t pos = s;
      while (pos > 0 && idx[pos - 1] == B) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < s; ++j) idx[j] = idx[pos - 1];
    }
  }
  const auto coeff_range = box_range(A, false);
  const auto n = static_cast<std::int64_t>(classes.size());
  std::uint64_t total = 0;
  bool failed = false;
#pragma omp parallel for schedule(dynamic) reduction(+ : total) reduction(|| : failed) if (options.parallel)
  for (std::int64_t ci = 0; ci < n; ++ci) {
    try {
      const auto& cls = classes[static_cast<std::size_t>(ci)];
      std::uint64_t weight = orbit_size(cls);
      std::vector<Values> coords;
      for (auto x : cls) {
        if (x == 0) {
          weight *= static_cast<std::uint64_t>(2 * A);
        } else {
          weight *= 2;
          coords.push_back(scaled_powers(checked_pow(x, k), 1, coeff_range));
        }
      }
      CountOptions inner = options;
      inner.parallel = false;
      total += weight * count_zero_sums(coords, inner);
    } catch (const std::exception&) {
      failed = true;
    }
  }
  if (failed) throw ResourceError("xi_count exceeded a table or stream budget");
  return total;
}

std::uint64_t upsilon_count(unsigned k, unsigned t, std::int64_t A, std::int64_t B, const CountOptions& options) {
  require_positive(A, "A");
  require_positive(B, "B");
  if (t < 1) throw DomainError("t must be at least 1");
  const auto classes = coefficient_classes(2 * t, A);
  const auto n = static_cast<std::int64_t>(classes.size());
  std::uint64_t total = 0;
  bool failed = false;
  CountOptions inner = options;
  inner.parallel = false;
#pragma omp parallel for schedule(dynamic) reduction(+ : total) reduction(|| : failed) if (options.parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const auto& c = classes[static_cast<std::size_t>(i)];
      const auto rho = count_solutions(DiagonalForm(k, c.a), B, CountMode::all_coords_nonzero, inner);
      total += c.multiplicity * rho * rho;
    } catch (const std::exception&) {
      failed = true;
    }
  }
  if (failed) throw ResourceError("upsilon_count exceeded a table or stream budget");
  return total;
}

std::uint64_t p_count(unsigned k, std::size_t s, std::int64_t A, std::int64_t B, const CountOptions& options) {
  require_positive(A, "A");
  require_positive(B, "B");
  const auto classes = coefficient_classes(s, A);
  const auto n = static_cast<std::int64_t>(classes.size());
  std::uint64_t total = 0;
  bool failed = false;
  CountOptions inner = options;
  inner.parallel = false;
#pragma omp parallel for schedule(dynamic) reduction(+ : total) reduction(|| : failed) if (options.parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const auto& c = classes[static_cast<std::size_t>(i)];
      if (min_norm_in_box(DiagonalForm(k, c.a), B, inner) > 0) total += c.multiplicity;
    } catch (const std::exception&) {
      failed = true;
    }
  }
  if (failed) throw ResourceError("p_count exceeded a table or stream budget");
  return total;
}

std::uint64_t congruent_power_pairs(std::int64_t B, std::uint64_t d, unsigned k) {
  if (B < 0) throw DomainError("B must be nonnegative");
  if (d == 0) throw DomainError("modulus must be positive");
  absl::flat_hash_map<std::uint64_t, std::uint64_t> hist;
  for (std::int64_t u = -B; u <= B; ++u) ++hist[arith::pow_mod(arith::reduce_mod(u, d), k, d)];
  std::uint64_t total = 0;
  for (const auto& [r, c] : hist) total += c * c;
  return total;
}

}  // namespace dioph::counting
