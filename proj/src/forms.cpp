#include "dioph/forms.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "dioph/arith.hpp"
#include "dioph/errors.hpp"

namespace dioph {

DiagonalForm::DiagonalForm(unsigned degree, std::vector<std::int64_t> coefficients)
    : degree_(degree), coefficients_(std::move(coefficients)) {
  if (degree_ < 2) throw DomainError("degree must be at least 2");
  if (coefficients_.empty()) throw DomainError("a form needs at least one coefficient");
  for (auto a : coefficients_) {
    if (a == 0) throw DomainError("coefficients must be nonzero");
    if (a == std::numeric_limits<std::int64_t>::min()) throw OverflowError("coefficient out of range");
  }
}

std::int64_t DiagonalForm::height() const {
  std::int64_t h = 0;
  for (auto a : coefficients_) h = std::max(h, a < 0 ? -a : a);
  return h;
}

std::string DiagonalForm::to_string() const {
  std::ostringstream os;
  os << "k=" << degree_ << " a=";
  for (std::size_t j = 0; j < coefficients_.size(); ++j) {
    if (j) os << ',';
    os << coefficients_[j];
  }
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view s, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw DomainError(std::string("malformed ") + what + ": '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

DiagonalForm DiagonalForm::parse(std::string_view text) {
  text = trim(text);
  if (!text.starts_with("k=")) throw DomainError("form must start with 'k=<int>'");
  auto space = text.find(' ');
  if (space == std::string_view::npos) throw DomainError("form needs 'k=<int> a=<list>'");
  const auto k = parse_number<unsigned>(text.substr(2, space - 2), "degree");
  auto rest = trim(text.substr(space));
  if (!rest.starts_with("a=")) throw DomainError("form needs 'a=<list>' after the degree");
  rest.remove_prefix(2);
  std::vector<std::int64_t> coeffs;
  while (true) {
    auto comma = rest.find(',');
    coeffs.push_back(parse_number<std::int64_t>(rest.substr(0, comma), "coefficient"));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return DiagonalForm(k, std::move(coeffs));
}

namespace forms {

std::int64_t evaluate(const DiagonalForm& form, std::span<const std::int64_t> x) {
  if (x.size() != form.dimension()) throw DomainError("vector length differs from the number of variables");
  std::int64_t sum = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    sum = arith::checked_add(sum, arith::checked_mul(form.coefficient(j), arith::checked_pow(x[j], form.degree())));
  }
  return sum;
}

unsigned hat_s(std::size_t s) {
  if (s < 3) throw DomainError("hat_s needs s >= 3");
  return static_cast<unsigned>(s % 2 == 0 ? s - 2 : s - 1);
}

DiagonalForm adversarial_pq(unsigned k, unsigned t, std::uint64_t p) {
  if (t < 1) throw DomainError("block count must be at least 1");
  if (!arith::is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  auto q = arith::kth_power_nonresidue(k, p);
  if (!q) {
    throw DomainError("no k-th power non-residue mod " + std::to_string(p) + ": gcd(k, p-1) = 1");
  }
  std::vector<std::int64_t> coeffs;
  std::int64_t scale = 1;
  const auto pp = static_cast<std::int64_t>(p);
  const auto qq = static_cast<std::int64_t>(*q);
  for (unsigned block = 0; block < t; ++block) {
    coeffs.push_back(scale);
    coeffs.push_back(-arith::checked_mul(scale, qq));
    if (block + 1 < t) scale = arith::checked_mul(scale, pp);
  }
  return DiagonalForm(k, std::move(coeffs));
}

DiagonalForm adversarial_ab(unsigned k, unsigned t, std::int64_t a, std::int64_t b) {
  if (k % 2 != 0) throw DomainError("adversarial_ab needs an even degree");
  if (t < 1) throw DomainError("block count must be at least 1");
  if (a < 1 || b < 1) throw DomainError("a and b must be positive");
  if (std::gcd(a, b) != 1) throw DomainError("a and b must be coprime");
  if (a > b) throw DomainError("adversarial_ab needs a <= b");
  std::vector<std::int64_t> coeffs(t, a);
  coeffs.insert(coeffs.end(), t, -b);
  return DiagonalForm(k, std::move(coeffs));
}

}  // namespace forms
}  // namespace dioph
