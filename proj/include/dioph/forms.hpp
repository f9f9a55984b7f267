#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dioph {

// a_1 x_1^k + ... + a_s x_s^k with every a_j nonzero and k >= 2.
class DiagonalForm {
 public:
  DiagonalForm(unsigned degree, std::vector<std::int64_t> coefficients);

  unsigned degree() const { return degree_; }
  std::size_t dimension() const { return coefficients_.size(); }
  std::span<const std::int64_t> coefficients() const { return coefficients_; }
  std::int64_t coefficient(std::size_t j) const { return coefficients_.at(j); }
  // max |a_j|
  std::int64_t height() const;

  // `k=<int> a=<c1>,<c2>,...,<cs>`
  std::string to_string() const;
  static DiagonalForm parse(std::string_view text);

  bool operator==(const DiagonalForm&) const = default;

 private:
  unsigned degree_;
  std::vector<std::int64_t> coefficients_;
};

namespace forms {

// Exact value of the form at x; OverflowError instead of wraparound.
std::int64_t evaluate(const DiagonalForm& form, std::span<const std::int64_t> x);

// Largest even integer strictly below s (s >= 3).
unsigned hat_s(std::size_t s);

// x_1^k - q x_2^k + p(x_3^k - q x_4^k) + ... + p^{t-1}(x_{2t-1}^k - q x_{2t}^k)
// with q the least k-th power non-residue mod p. No nonzero integer zero has
// sup-norm below p.
DiagonalForm adversarial_pq(unsigned k, unsigned t, std::uint64_t p);

// a(x_1^k + ... + x_t^k) - b(x_{t+1}^k + ... + x_{2t}^k), k even, gcd(a,b)=1,
// a <= b. Every nonzero zero has b | x_1^k + ... + x_t^k.
DiagonalForm adversarial_ab(unsigned k, unsigned t, std::int64_t a, std::int64_t b);

}  // namespace forms
}  // namespace dioph
