#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dioph/forms.hpp"

namespace dioph::counting {

enum class CountMode {
  all_coords_nonzero,  // 1 <= |x_j| <= B for every j
  vector_nonzero,      // 0 < |x| <= B
};

const char* to_string(CountMode mode);
CountMode parse_count_mode(std::string_view text);  // "all-nonzero" | "vector-nonzero"

inline constexpr std::uint64_t kDefaultTableCap = 10'000'000;
inline constexpr std::uint64_t kDefaultStreamBudget = 4'000'000'000ULL;

struct CountOptions {
  std::uint64_t table_cap = kDefaultTableCap;       // entries in the tabulated half
  std::uint64_t stream_budget = kDefaultStreamBudget;  // tuples streamed against it
  bool parallel = true;
};

// Number of x in the box with sum a_j x_j^k = 0 under the mode's convention.
// Meet in the middle: the first floor(s/2) coordinates are tabulated, the
// rest streamed against the table.
std::uint64_t count_solutions(const DiagonalForm& form, std::int64_t B, CountMode mode,
                              const CountOptions& options = {});

struct Witness {
  std::vector<std::int64_t> x;
  std::int64_t norm = 0;
};

struct SearchOutcome {
  std::optional<Witness> found;
  std::int64_t exhausted_up_to = 0;  // every nonzero x with |x| <= this was examined
};

// Smallest sup-norm m <= B_max of a nonzero zero of the form. The reported
// witness is the lexicographically greatest zero of sup-norm exactly m.
// Budget overruns raise ResourceError naming the last completed norm.
SearchOutcome smallest_solution(const DiagonalForm& form, std::int64_t B_max, const CountOptions& options = {});

// #{(a, x) : a in ([-A, A] \ 0)^s, 0 < |x| <= B, sum a_j x_j^k = 0}.
std::uint64_t xi_count(unsigned k, std::size_t s, std::int64_t A, std::int64_t B, const CountOptions& options = {});

// sum over a in ([-A, A] \ 0)^{2t} of count_solutions(a, B, all_coords_nonzero)^2.
std::uint64_t upsilon_count(unsigned k, unsigned t, std::int64_t A, std::int64_t B, const CountOptions& options = {});

// #{a in ([-A, A] \ 0)^s : some 0 < |x| <= B has sum a_j x_j^k = 0}.
std::uint64_t p_count(unsigned k, std::size_t s, std::int64_t A, std::int64_t B, const CountOptions& options = {});

// #{(u, v) : |u|, |v| <= B, u^k = v^k mod d}.
std::uint64_t congruent_power_pairs(std::int64_t B, std::uint64_t d, unsigned k);

// Coefficient vectors of ([-A, A] \ 0)^s up to permutation: nondecreasing
// representatives with their orbit sizes. Visits in lexicographic order.
struct CoefficientClass {
  std::vector<std::int64_t> a;
  std::uint64_t multiplicity = 0;
};
std::vector<CoefficientClass> coefficient_classes(std::size_t s, std::int64_t A);

}  // namespace dioph::counting
