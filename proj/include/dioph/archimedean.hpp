#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "dioph/arith.hpp"
#include "dioph/forms.hpp"

namespace dioph::archimedean {

using Complex = std::complex<double>;

// int_{-B}^{B} e(beta xi^k) d xi by adaptive Gauss-Kronrod (7/15) on the
// half-oscillation panels of the integrand; absolute error <= 1e-8 B.
Complex v_integral(double beta, double B, unsigned k);

// The same integral through the incomplete gamma function:
// int_0^1 u^{1/k - 1} e^{i w u} du by its power series for small w and by
// Gamma(1/k) w^{-1/k} e^{i pi / 2k} minus a continued fraction otherwise.
Complex v_fast(double beta, double B, unsigned k);

// max over `betas` of |v(beta, B)| / (B (1 + B^k |beta|)^{-1/k}).
double fitted_decay_constant(unsigned k, double B, std::span<const double> betas);

enum class Method { quadrature, slab_mc };
const char* to_string(Method m);

struct IntegralEstimate {
  double value = 0.0;
  Method method = Method::quadrature;
  double error_indicator = 0.0;
  double scale_B = 1.0;

  // quadrature
  double tail_cut = 0.0;
  double tail_correction = 0.0;  // leading-asymptotic contribution beyond tail_cut
  double quadrature_error = 0.0;
  double truncation_change = 0.0;  // |J(T) - J(T/2)|
  double subleading_bound = 0.0;

  // slab_mc
  double epsilon = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t hits = 0;       // |F| <= epsilon
  std::uint64_t hits_half = 0;  // |F| <= epsilon / 2
  double raw_value = 0.0;       // slab estimate at epsilon
  double raw_value_half = 0.0;  // at epsilon / 2
  double raw_error = 0.0;
  double raw_error_half = 0.0;
};

struct QuadratureOptions {
  std::optional<double> tail_cut;  // in beta units; adaptive when absent
  double B = 1.0;
  // Adaptive tail_cut stops once the indicator is below this fraction of
  // max(|J|, 0.01 * int |integrand|).
  double relative_target = 1e-3;
  double max_tail_cut_factor = 4096.0;
  bool parallel = true;
};

// int prod_j v(a_j beta, B) d beta over |beta| <= T plus the leading tail
// beyond T. Throws DomainError unless s > k.
IntegralEstimate singular_integral_quadrature(const DiagonalForm& form, const QuadratureOptions& options = {});

inline constexpr double kMinimumEpsilon = 1e-3;
inline constexpr std::size_t kBatchSize = 4096;

struct SlabOptions {
  double epsilon = 0.05;
  std::uint64_t samples = 200'000;
  double B = 1.0;
  bool parallel = true;
};

// Bias exponent of the slab estimator: min(s/k - 1, 2).
double richardson_exponent(unsigned k, std::size_t s);

// (2 eps)^{-1} vol{x in [-B, B]^s : |F(x)| <= eps} by uniform sampling, with
// one Richardson step (2^alpha J(eps/2) - J(eps)) / (2^alpha - 1), alpha from
// richardson_exponent. Batch b draws from SeededStream{seed, b}.
IntegralEstimate singular_integral_slab_mc(const DiagonalForm& form, std::uint64_t seed,
                                           const SlabOptions& options = {});

}  // namespace dioph::archimedean
