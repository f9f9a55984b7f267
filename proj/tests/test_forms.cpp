#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dioph/errors.hpp"
#include "dioph/forms.hpp"
#include "dioph/reference.hpp"

using namespace dioph;

TEST_CASE("construction and parsing") {
  const auto f = DiagonalForm::parse("k=3 a=1,-2,7,-14");
  CHECK(f.degree() == 3);
  CHECK(f.dimension() == 4);
  CHECK(f.height() == 14);
  CHECK(DiagonalForm::parse(f.to_string()) == f);
  CHECK_THROWS_AS(DiagonalForm(3, {1, 0, 2}), DomainError);
  CHECK_THROWS_AS(DiagonalForm(1, {1, 2}), DomainError);
  CHECK_THROWS_AS(DiagonalForm::parse("k=3 a="), DomainError);
  CHECK_THROWS_AS(DiagonalForm::parse("k=x a=1,2"), DomainError);
}

TEST_CASE("evaluate") {
  CHECK(forms::evaluate(DiagonalForm(3, {1, -1}), std::vector<std::int64_t>{2, 2}) == 0);
  CHECK(forms::evaluate(DiagonalForm(4, {1, 1, -17, -17}), std::vector<std::int64_t>{2, 1, 1, 0}) == 0);
  CHECK(forms::evaluate(DiagonalForm(5, {3, 4, 5}), std::vector<std::int64_t>{0, 0, 0}) == 0);
  CHECK_THROWS_AS(forms::evaluate(DiagonalForm(3, {1, 2}), std::vector<std::int64_t>{1}), DomainError);
  CHECK_THROWS_AS(forms::evaluate(DiagonalForm(9, {1, 1}), std::vector<std::int64_t>{200000, 1}), OverflowError);
  const DiagonalForm odd(3, {2, -5, 7}), even(4, {2, -5, 7});
  const std::vector<std::int64_t> x{3, -1, 2}, minus{-3, 1, -2};
  CHECK(forms::evaluate(odd, minus) == -forms::evaluate(odd, x));
  CHECK(forms::evaluate(even, minus) == forms::evaluate(even, x));
}

TEST_CASE("hat_s") {
  CHECK(forms::hat_s(11) == 10);
  CHECK(forms::hat_s(10) == 8);
  CHECK(forms::hat_s(4) == 2);
  CHECK(forms::hat_s(3) == 2);
  CHECK_THROWS_AS(forms::hat_s(2), DomainError);
}

TEST_CASE("adversarial_pq") {
  const auto f = forms::adversarial_pq(3, 2, 7);
  CHECK(std::vector<std::int64_t>(f.coefficients().begin(), f.coefficients().end()) ==
        std::vector<std::int64_t>{1, -2, 7, -14});
  CHECK(f.height() == 7 * 2);
  CHECK_THROWS_AS(forms::adversarial_pq(3, 1, 5), DomainError);
  CHECK(reference::naive_min_norm(f, 6) == 0);
  CHECK(reference::naive_min_norm(forms::adversarial_pq(3, 2, 13), 12) == 0);
}

TEST_CASE("adversarial_ab") {
  const auto f = forms::adversarial_ab(4, 2, 1, 17);
  CHECK(std::vector<std::int64_t>(f.coefficients().begin(), f.coefficients().end()) ==
        std::vector<std::int64_t>{1, 1, -17, -17});
  CHECK_THROWS_AS(forms::adversarial_ab(3, 2, 1, 5), DomainError);
  CHECK_THROWS_AS(forms::adversarial_ab(4, 2, 2, 4), DomainError);
  CHECK(reference::naive_min_norm(f, 3) == 2);
  for (const auto& x : reference::naive_solutions(f, 5)) CHECK((x[0] * x[0] * x[0] * x[0] + x[1] * x[1] * x[1] * x[1]) % 17 == 0);
}
