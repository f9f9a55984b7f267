#include "dioph/archimedean.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "detail/pairwise.hpp"
#include "dioph/errors.hpp"

namespace dioph::archimedean {

const char* to_string(Method m) { return m == Method::quadrature ? "quadrature" : "slab_mc"; }

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct RuleResult {
  Complex value;
  double error;
};

template <typename F>
RuleResult gauss_kronrod(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const Complex fc = f(c);
  Complex kronrod = kWgk[7] * fc;
  Complex gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const Complex pair = f(c - h * kXgk[i]) + f(c + h * kXgk[i]);
    kronrod += kWgk[i] * pair;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair;
  }
  return {h * kronrod, std::abs(h * (kronrod - gauss))};
}

template <typename F>
RuleResult adaptive(const F& f, double a, double b, double tol, int depth, bool& converged) {
  const auto r = gauss_kronrod(f, a, b);
  if (r.error <= tol) return r;
  if (depth >= 30) {
    converged = false;
    return r;
  }
  const double mid = 0.5 * (a + b);
  const auto left = adaptive(f, a, mid, 0.5 * tol, depth + 1, converged);
  const auto right = adaptive(f, mid, b, 0.5 * tol, depth + 1, converged);
  return {left.value + right.value, left.error + right.error};
}

// int_0^1 u^{a-1} e^{i w u} du for w >= 0.
Complex w_integral(double w, double a) {
  if (w == 0.0) return 1.0 / a;
  const Complex iw(0.0, w);
  if (w <= 6.0) {
    Complex term = 1.0, sum = 1.0 / a;
    for (int n = 1; n < 400; ++n) {
      term *= iw / static_cast<double>(n);
      const Complex add = term / (static_cast<double>(n) + a);
      sum += add;
      if (std::abs(term) < 1e-18 && n > w) break;
    }
    return sum;
  }
  // Modified Lentz for Gamma(a, z) e^z z^{-a} at z = -i w.
  const Complex z(0.0, -w);
  constexpr double tiny = 1e-300;
  Complex b = z + 1.0 - a;
  Complex c = 1.0 / tiny;
  Complex d = 1.0 / b;
  Complex h = d;
  bool converged = false;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalError("incomplete gamma continued fraction did not converge at w=" + std::to_string(w));
  const Complex full = std::tgamma(a) * std::pow(w, -a) * std::polar(1.0, 0.5 * std::numbers::pi * a);
  return full - std::polar(1.0, w) * h;
}

}  // namespace

Complex v_integral(double beta, double B, unsigned k) {
  if (!(B > 0.0)) throw DomainError("B must be positive");
  if (beta == 0.0) return 2.0 * B;
  const bool even = k % 2 == 0;
  auto f = [&](double xi) -> Complex {
    const double phase = kTwoPi * beta * std::pow(xi, static_cast<double>(k));
    return even ? 2.0 * std::polar(1.0, phase) : Complex(2.0 * std::cos(phase), 0.0);
  };
  const double span = 2.0 * std::abs(beta) * std::pow(B, static_cast<double>(k));
  if (span > 2e6) {
    throw NumericalError("v_integral: " + std::to_string(span) + " half-oscillations on [0, B] exceeds the panel limit");
  }
  const auto panels = static_cast<std::uint64_t>(std::floor(span));
  const double tol = 1e-9 * B / static_cast<double>(panels + 1);
  std::vector<Complex> pieces;
  double prev = 0.0;
  bool converged = true;
  for (std::uint64_t i = 1; i <= panels + 1; ++i) {
    double next = i <= panels ? std::pow(static_cast<double>(i) / (2.0 * std::abs(beta)), 1.0 / k) : B;
    next = std::min(next, B);
    if (next > prev) pieces.push_back(adaptive(f, prev, next, tol, 0, converged).value);
    prev = next;
  }
  if (!converged) {
    throw NumericalError("v_integral: refinement did not converge for beta=" + std::to_string(beta) +
                         " B=" + std::to_string(B) + " k=" + std::to_string(k));
  }
  return detail::pairwise_sum<Complex>(pieces);
}

Complex v_fast(double beta, double B, unsigned k) {
  if (!(B > 0.0)) throw DomainError("B must be positive");
  if (B != 1.0) return B * v_fast(beta * std::pow(B, static_cast<double>(k)), 1.0, k);
  const double a = 1.0 / k;
  Complex plus = w_integral(kTwoPi * std::abs(beta), a) / static_cast<double>(k);
  if (beta < 0.0) plus = std::conj(plus);
  return k % 2 == 0 ? 2.0 * plus : Complex(2.0 * plus.real(), 0.0);
}

double fitted_decay_constant(unsigned k, double B, std::span<const double> betas) {
  double c = 0.0;
  for (double beta : betas) {
    const double shape = B * std::pow(1.0 + std::pow(B, static_cast<double>(k)) * std::abs(beta), -1.0 / k);
    c = std::max(c, std::abs(v_integral(beta, B, k)) / shape);
  }
  return c;
}

IntegralEstimate singular_integral_quadrature(const DiagonalForm& form, const QuadratureOptions& options) {
  const unsigned k = form.degree();
  const auto s = form.dimension();
  if (s <= k) throw DomainError("the singular integral needs s > k");
  if (!(options.B > 0.0)) throw DomainError("B must be positive");
  const double B = options.B;
  const double Bk = std::pow(B, static_cast<double>(k));
  const double sk = static_cast<double>(s) / k;

  std::map<std::int64_t, unsigned> multiplicity;
  double total_abs = 0.0, min_abs = 0.0;
  for (auto a : form.coefficients()) {
    ++multiplicity[a];
    const double aa = std::abs(static_cast<double>(a));
    total_abs += aa;
    min_abs = min_abs == 0.0 ? aa : std::min(min_abs, aa);
  }
  auto integrand = [&](double beta) -> Complex {
    Complex product = 1.0;
    for (const auto& [a, m] : multiplicity) {
      const Complex v = v_fast(static_cast<double>(a) * beta, B, k);
      for (unsigned i = 0; i < m; ++i) product *= v;
    }
    return product;
  };

  // Leading behaviour of v(a beta, B) is lead * |beta|^{-1/k}; the remainder
  // is at most sigma / |beta|.
  const double gamma_part = 2.0 / k * std::tgamma(1.0 / k);
  Complex lead_product = 1.0;
  std::vector<double> lambda, sigma, freq;
  for (auto a : form.coefficients()) {
    const double aa = std::abs(static_cast<double>(a));
    const double mag = gamma_part * std::pow(kTwoPi * aa, -1.0 / k);
    const Complex phase = k % 2 == 0 ? std::polar(1.0, (a > 0 ? 1.0 : -1.0) * std::numbers::pi / (2.0 * k))
                                     : Complex(std::cos(std::numbers::pi / (2.0 * k)), 0.0);
    lead_product *= mag * phase;
    lambda.push_back(mag * std::abs(phase));
    sigma.push_back(2.0 / (k * kTwoPi * aa * std::pow(B, static_cast<double>(k) - 1.0)));
    freq.push_back(kTwoPi * aa * Bk);
  }
  auto tail = [&](double T) { return lead_product * std::pow(T, 1.0 - sk) / (sk - 1.0); };
  auto subleading = [&](double T) {
    double bound = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      double rest = sigma[i];
      for (std::size_t j = 0; j < s; ++j) {
        if (j != i) rest *= lambda[j];
      }
      const double e = (static_cast<double>(s) - 1.0) / k + 1.0;
      bound += 2.0 * rest * std::pow(T, -e) / freq[i];
    }
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = i + 1; j < s; ++j) {
        double rest = sigma[i] * sigma[j];
        for (std::size_t l = 0; l < s; ++l) {
          if (l != i && l != j) rest *= lambda[l];
        }
        const double e = (static_cast<double>(s) - 2.0) / k + 1.0;
        bound += 2.0 * rest * std::pow(T, -e) / e;
      }
    }
    return bound;
  };

  const double panel = 1.0 / (2.0 * Bk * total_abs);
  // |integrand| <= B^s, so the panel tolerance is relative to that.
  const double scale = std::pow(B, static_cast<double>(s));
  const double T_start = options.tail_cut ? *options.tail_cut : 8.0 / (min_abs * Bk);
  if (!(T_start > 0.0)) throw DomainError("tail cut must be positive");
  const double T_max = options.tail_cut ? *options.tail_cut : T_start * options.max_tail_cut_factor;

  Complex running = 0.0;
  double quad_err = 0.0;
  double mass = 0.0;
  bool converged = true;
  auto integrate_segment = [&](double lo, double hi) {
    const auto n = static_cast<std::int64_t>(std::ceil((hi - lo) / panel));
    const double width = (hi - lo) / static_cast<double>(n);
    std::vector<Complex> values(static_cast<std::size_t>(n));
    std::vector<double> errors(static_cast<std::size_t>(n));
    std::vector<char> ok(static_cast<std::size_t>(n), 1);
#pragma omp parallel for schedule(static) if (options.parallel)
    for (std::int64_t i = 0; i < n; ++i) {
      bool c = true;
      const double a = lo + width * static_cast<double>(i);
      const double b = i + 1 == n ? hi : a + width;
      const auto r = adaptive(integrand, a, b, 1e-13 * width * scale, 0, c);
      values[static_cast<std::size_t>(i)] = r.value;
      errors[static_cast<std::size_t>(i)] = r.error;
      ok[static_cast<std::size_t>(i)] = c;
    }
    running += detail::pairwise_sum<Complex>(values);
    for (const auto& v : values) mass += 2.0 * std::abs(v);
    quad_err += detail::pairwise_sum<double>(errors);
    for (char c : ok) converged = converged && c;
  };

  // Half the cut first so the change J(T) - J(T/2) is always available.
  double T = T_start / 2.0;
  integrate_segment(0.0, T);
  double previous = 2.0 * (running + tail(T)).real();
  IntegralEstimate est;
  while (true) {
    integrate_segment(T, 2.0 * T);
    T *= 2.0;
    const double current = 2.0 * (running + tail(T)).real();
    est.value = current;
    est.tail_cut = T;
    est.tail_correction = 2.0 * tail(T).real();
    est.truncation_change = std::abs(current - previous);
    est.subleading_bound = subleading(T);
    est.quadrature_error = 2.0 * quad_err;
    previous = current;
    const double indicator = est.truncation_change + est.subleading_bound;
    if (options.tail_cut || T >= T_max || indicator <= options.relative_target * std::max(std::abs(current), 0.01 * mass)) {
      break;
    }
  }
  if (!converged) throw NumericalError("singular integral quadrature: panel refinement did not converge");
  est.method = Method::quadrature;
  est.scale_B = B;
  est.error_indicator = est.quadrature_error + est.truncation_change + est.subleading_bound;
  return est;
}

double richardson_exponent(unsigned k, std::size_t s) {
  return std::min(static_cast<double>(s) / k - 1.0, 2.0);
}

IntegralEstimate singular_integral_slab_mc(const DiagonalForm& form, std::uint64_t seed, const SlabOptions& options) {
  const unsigned k = form.degree();
  const auto s = form.dimension();
  if (s <= k) throw DomainError("the singular integral needs s > k");
  if (!(options.epsilon >= kMinimumEpsilon) || options.epsilon > 1.0) {
    throw DomainError("epsilon must lie in [1e-3, 1]");
  }
  if (options.samples < 2) throw DomainError("slab estimator needs at least 2 samples");
  if (!(options.B > 0.0)) throw DomainError("B must be positive");

  const double eps = options.epsilon;
  const double half = eps / 2.0;
  const double B = options.B;
  std::vector<double> a;
  for (auto c : form.coefficients()) a.push_back(static_cast<double>(c));

  const std::uint64_t n = options.samples;
  const auto batches = static_cast<std::int64_t>((n + kBatchSize - 1) / kBatchSize);
  std::uint64_t hits = 0, hits_half = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits, hits_half) if (options.parallel)
  for (std::int64_t b = 0; b < batches; ++b) {
    auto engine = arith::SeededStream{seed, static_cast<std::uint64_t>(b)}.engine();
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBatchSize;
    const std::uint64_t count = std::min<std::uint64_t>(kBatchSize, n - begin);
    for (std::uint64_t i = 0; i < count; ++i) {
      double F = 0.0;
      for (std::size_t j = 0; j < s; ++j) {
        const double x = B * (2.0 * arith::uniform_unit(engine) - 1.0);
        double xk = x;
        for (unsigned e = 1; e < k; ++e) xk *= x;
        F += a[j] * xk;
      }
      const double m = std::abs(F);
      if (m <= eps) {
        ++hits;
        if (m <= half) ++hits_half;
      }
    }
  }

  const double volume = std::pow(2.0 * B, static_cast<double>(s));
  const double nd = static_cast<double>(n);
  auto binomial_se = [&](std::uint64_t h, double width) {
    const double p = h == 0 ? 1.0 / nd : static_cast<double>(h) / nd;
    return volume / width * std::sqrt(p * (1.0 - p) / nd);
  };

  IntegralEstimate est;
  est.method = Method::slab_mc;
  est.scale_B = B;
  est.epsilon = eps;
  est.samples = n;
  est.seed = seed;
  est.hits = hits;
  est.hits_half = hits_half;
  est.raw_value = volume * static_cast<double>(hits) / (nd * 2.0 * eps);
  est.raw_value_half = volume * static_cast<double>(hits_half) / (nd * eps);
  est.raw_error = binomial_se(hits, 2.0 * eps);
  est.raw_error_half = binomial_se(hits_half, eps);
  if (hits == 0) {
    est.value = 0.0;
    est.error_indicator = est.raw_error;
    return est;
  }
  // The density of F near 0 carries a term c |t|^{s/k - 1} from the origin,
  // so the slab bias is of order eps^alpha with alpha = min(s/k - 1, 2).
  // Per-sample Richardson variable takes the values 0, -c1 and c2.
  const double alpha = richardson_exponent(k, s);
  const double r = std::pow(2.0, alpha);
  const double c1 = volume / (2.0 * eps) / (r - 1.0);
  const double c2 = (r * volume / eps - volume / (2.0 * eps)) / (r - 1.0);
  const double h1 = static_cast<double>(hits), h2 = static_cast<double>(hits_half);
  const double mean = (c2 * h2 - c1 * (h1 - h2)) / nd;
  const double second = (c2 * c2 * h2 + c1 * c1 * (h1 - h2)) / nd;
  est.value = mean;
  est.error_indicator = std::sqrt(std::max(0.0, second - mean * mean) / nd);
  return est;
}

}  // namespace dioph::archimedean
