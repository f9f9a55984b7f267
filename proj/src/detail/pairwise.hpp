#pragma once

#include <cstddef>
#include <span>

namespace dioph::detail {

// Pairwise (cascade) summation; the result depends only on the order of
// `values`, never on how work was scheduled.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  if (values.empty()) return T{};
  if (values.size() <= 8) {
    T total = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) total += values[i];
    return total;
  }
  const auto half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace dioph::detail
