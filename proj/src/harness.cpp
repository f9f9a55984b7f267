#include "dioph/harness.hpp"

#include <openssl/evp.h>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "detail/pairwise.hpp"
#include "dioph/archimedean.hpp"
#include "dioph/errors.hpp"
#include "dioph/lattice.hpp"
#include "dioph/singular.hpp"

namespace dioph::harness {

Json ExperimentRecord::to_json() const {
  return Json{{"kind", kind},           {"params", params},         {"seed", seed},
              {"results", results},     {"provenance", provenance}, {"canonical_hash", canonical_hash}};
}

ExperimentRecord ExperimentRecord::from_json(const Json& j) {
  ExperimentRecord r;
  r.kind = j.at("kind").get<std::string>();
  r.params = j.at("params");
  r.seed = j.at("seed").get<std::uint64_t>();
  r.results = j.at("results");
  r.provenance = j.value("provenance", Json::object());
  r.canonical_hash = j.at("canonical_hash").get<std::string>();
  return r;
}

std::string canonical_serialization(const Json& j) { return j.dump(); }

std::string compute_hash(const ExperimentRecord& record) {
  const Json body{{"kind", record.kind}, {"params", record.params}, {"seed", record.seed}, {"results", record.results}};
  const auto text = canonical_serialization(body);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 computation failed");
  }
  std::ostringstream hex;
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

void seal(ExperimentRecord& record) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream stamp;
  stamp << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  record.provenance = Json{{"tool_version", kToolVersion}, {"timestamp", stamp.str()}};
  record.canonical_hash = compute_hash(record);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
  if (successes > n) throw DomainError("successes exceed trials");
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double centre = (phat + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(phat * (1 - phat) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {std::max(0.0, std::min(phat, centre - half)), std::min(1.0, std::max(phat, centre + half))};
}

Json fraction_json(std::uint64_t successes, std::uint64_t n) {
  Json j{{"successes", successes}, {"n", n}};
  if (n == 0) {
    j["fraction"] = nullptr;
    j["ci_lower"] = nullptr;
    j["ci_upper"] = nullptr;
  } else {
    const auto ci = wilson_interval(successes, n);
    j["fraction"] = static_cast<double>(successes) / static_cast<double>(n);
    j["ci_lower"] = ci.lower;
    j["ci_upper"] = ci.upper;
  }
  return j;
}

namespace {

int thread_count(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

struct ModeChoice {
  local::Mode mode;
  std::uint64_t cutoff;
  std::optional<std::string> caveat;
};

ModeChoice choose_mode(unsigned k, std::size_t s, const SurveyOptions& options) {
  std::optional<std::uint64_t> cutoff;
  try {
    cutoff = local::rigorous_cutoff(k, s, options.rigorous_cutoff_limit);
  } catch (const ResourceError&) {
  }
  const auto mode = options.mode.value_or(cutoff ? local::Mode::rigorous : local::Mode::heuristic);
  if (mode == local::Mode::rigorous) {
    if (!cutoff) cutoff = local::rigorous_cutoff(k, s, std::numeric_limits<std::uint64_t>::max());
    return {mode, *cutoff, std::nullopt};
  }
  const auto cap = local::default_heuristic_cap(k);
  return {mode, cap,
          "heuristic local reports: primes above " + std::to_string(cap) +
              " that divide no coefficient are not tested, so locally_soluble verdicts are unproven"};
}

local::LocalOptions local_options(const ModeChoice& choice, const SurveyOptions& options) {
  local::LocalOptions lo;
  lo.mode = choice.mode;
  lo.budget = options.local_budget;
  lo.rigorous_limit = std::max(options.rigorous_cutoff_limit, choice.cutoff);
  lo.parallel = false;
  return lo;
}

Json survey_params(unsigned k, std::size_t s, std::int64_t A, std::uint64_t n, const ModeChoice& choice) {
  return Json{{"k", k}, {"s", s}, {"A", A}, {"n", n}, {"local_mode", local::to_string(choice.mode)},
              {"prime_cutoff", choice.cutoff}};
}

void require_survey(unsigned k, std::size_t s, std::int64_t A, std::uint64_t n) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (s < 1) throw DomainError("s must be at least 1");
  if (A < 1) throw DomainError("A must be at least 1");
  if (n < 1) throw DomainError("n must be at least 1");
}

// Runs f(i) for i < n on the configured worker count; the first exception in
// index order is rethrown.
template <typename F>
void run_trials(std::uint64_t n, int workers, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(workers))
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      f(static_cast<std::uint64_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct LocalOutcome {
  local::Overall::Kind kind = local::Overall::Kind::undetermined;
  bool real_obstruction = false;
  std::optional<std::uint64_t> witness_prime;
};

LocalOutcome classify(const DiagonalForm& form, const local::LocalOptions& lo) {
  const auto report = local::local_report(form, lo);
  return {report.overall.kind, report.overall.real_obstruction, report.overall.witness_prime};
}

}  // namespace

ExperimentRecord survey_local_density(unsigned k, std::size_t s, std::int64_t A, std::uint64_t n, std::uint64_t seed,
                                      const SurveyOptions& options) {
  require_survey(k, s, A, n);
  const auto choice = choose_mode(k, s, options);
  const auto lo = local_options(choice, options);

  std::vector<LocalOutcome> outcomes(n);
  run_trials(n, options.workers, [&](std::uint64_t i) {
    const DiagonalForm form(k, arith::sample_coefficients(s, A, {seed, i}));
    outcomes[i] = classify(form, lo);
  });

  std::uint64_t soluble = 0, insoluble = 0, undetermined = 0, real_failures = 0;
  std::map<std::uint64_t, std::uint64_t> prime_failures;
  for (const auto& o : outcomes) {
    switch (o.kind) {
      case local::Overall::Kind::locally_soluble: ++soluble; break;
      case local::Overall::Kind::locally_insoluble:
        ++insoluble;
        if (o.real_obstruction) {
          ++real_failures;
        } else {
          ++prime_failures[*o.witness_prime];
        }
        break;
      case local::Overall::Kind::undetermined: ++undetermined; break;
    }
  }
  Json primes = Json::object();
  for (const auto& [p, c] : prime_failures) primes[std::to_string(p)] = c;

  ExperimentRecord r;
  r.kind = "survey_local";
  r.params = survey_params(k, s, A, n, choice);
  r.seed = seed;
  r.results = Json{{"locally_soluble", fraction_json(soluble, soluble + insoluble)},
                   {"locally_insoluble", insoluble},
                   {"undetermined", undetermined},
                   {"undetermined_flag", undetermined > 0},
                   {"failures", Json{{"real", real_failures}, {"smallest_failing_prime", primes}}}};
  if (choice.caveat) r.results["caveat"] = *choice.caveat;
  seal(r);
  return r;
}

namespace {

// Largest integer m with m <= C |a|^{1/(s-k)}.
std::int64_t norm_bound(double C, std::int64_t height, std::size_t s, unsigned k) {
  const double e = static_cast<double>(s - k);
  double m = std::floor(C * std::pow(static_cast<double>(height), 1.0 / e));
  // Correct the rounding of pow against the exact test m^e <= C^e |a|.
  const double target = std::pow(C, e) * static_cast<double>(height);
  while (m >= 1 && std::pow(m, e) > target * (1 + 1e-12)) m -= 1;
  while (std::pow(m + 1, e) <= target * (1 - 1e-12)) m += 1;
  return static_cast<std::int64_t>(std::max(0.0, m));
}

}  // namespace

ExperimentRecord survey_small_solutions(unsigned k, std::size_t s, std::int64_t A, const std::vector<double>& C_list,
                                        std::uint64_t n, std::uint64_t seed, const SurveyOptions& options) {
  require_survey(k, s, A, n);
  if (s <= k) throw DomainError("small-solution survey needs s > k");
  if (C_list.empty()) throw DomainError("C list is empty");
  for (double c : C_list) {
    if (!(c > 0)) throw DomainError("every C must be positive");
  }
  auto counting_options = options.count;
  counting_options.parallel = false;

  struct Trial {
    std::int64_t height = 0;
    std::int64_t norm = 0;  // 0: none found
    std::int64_t exhausted = 0;
    bool censored = false;
  };
  std::vector<Trial> trials(n);
  run_trials(n, options.workers, [&](std::uint64_t i) {
    const DiagonalForm form(k, arith::sample_coefficients(s, A, {seed, i}));
    Trial t;
    t.height = form.height();
    std::int64_t bound = 0;
    for (double c : C_list) bound = std::max(bound, norm_bound(c, t.height, s, k));
    if (bound >= 1) {
      try {
        const auto out = counting::smallest_solution(form, bound, counting_options);
        t.exhausted = out.exhausted_up_to;
        if (out.found) t.norm = out.found->norm;
      } catch (const ResourceError&) {
        t.censored = true;
      }
    }
    trials[i] = t;
  });

  Json by_c = Json::array();
  for (double c : C_list) {
    std::uint64_t successes = 0, observed = 0, censored = 0;
    for (const auto& t : trials) {
      const auto b = norm_bound(c, t.height, s, k);
      if (t.norm > 0 && t.norm <= b) {
        ++successes;
        ++observed;
      } else if (t.censored && t.exhausted < b) {
        ++censored;
      } else {
        ++observed;
      }
    }
    auto f = fraction_json(successes, observed);
    f["C"] = c;
    f["censored"] = censored;
    by_c.push_back(std::move(f));
  }
  std::uint64_t censored_total = 0;
  for (const auto& t : trials) censored_total += t.censored;

  Json cs = Json::array();
  for (double c : C_list) cs.push_back(c);
  ExperimentRecord r;
  r.kind = "survey_small_solutions";
  r.params = Json{{"k", k}, {"s", s}, {"A", A}, {"n", n}, {"C", cs}, {"exponent", 1.0 / static_cast<double>(s - k)}};
  r.seed = seed;
  r.results = Json{{"by_C", by_c}, {"censored_trials", censored_total}};
  seal(r);
  return r;
}

ExperimentRecord survey_hasse(unsigned k, std::size_t s, std::int64_t A, std::int64_t B, std::uint64_t n,
                              std::uint64_t seed, const SurveyOptions& options) {
  require_survey(k, s, A, n);
  if (B < 1) throw DomainError("B must be at least 1");
  const auto choice = choose_mode(k, s, options);
  const auto lo = local_options(choice, options);
  auto counting_options = options.count;
  counting_options.parallel = false;

  struct Trial {
    std::string form;
    bool injected = false;
    LocalOutcome local;
    bool found = false;
    bool censored = false;
  };
  const std::uint64_t total = n + options.injected.size();
  std::vector<Trial> trials(total);
  run_trials(total, options.workers, [&](std::uint64_t i) {
    const bool injected = i >= n;
    const DiagonalForm form =
        injected ? options.injected[i - n] : DiagonalForm(k, arith::sample_coefficients(s, A, {seed, i}));
    Trial t;
    t.form = form.to_string();
    t.injected = injected;
    t.local = classify(form, lo);
    if (t.local.kind == local::Overall::Kind::locally_soluble) {
      try {
        t.found = counting::smallest_solution(form, B, counting_options).found.has_value();
      } catch (const ResourceError&) {
        t.censored = true;
      }
    }
    trials[i] = std::move(t);
  });

  std::uint64_t soluble = 0, found = 0, insoluble = 0, undetermined = 0, censored = 0;
  Json unresolved = Json::array(), injected = Json::array();
  for (const auto& t : trials) {
    if (t.injected) {
      injected.push_back(Json{{"form", t.form}, {"local", local::to_string(t.local.kind)}, {"found", t.found}});
    }
    switch (t.local.kind) {
      case local::Overall::Kind::locally_insoluble: ++insoluble; continue;
      case local::Overall::Kind::undetermined: ++undetermined; continue;
      case local::Overall::Kind::locally_soluble: break;
    }
    if (t.censored) {
      ++censored;
      continue;
    }
    ++soluble;
    if (t.found) {
      ++found;
    } else {
      unresolved.push_back(Json{{"form", t.form}, {"injected", t.injected}});
    }
  }

  ExperimentRecord r;
  r.kind = "survey_hasse";
  r.params = survey_params(k, s, A, n, choice);
  r.params["B"] = B;
  r.params["injected"] = options.injected.size();
  r.seed = seed;
  r.results = Json{{"found", fraction_json(found, soluble)},
                   {"locally_insoluble", insoluble},
                   {"undetermined", undetermined},
                   {"censored", censored},
                   {"unresolved", unresolved},
                   {"injected", injected}};
  if (choice.caveat) r.results["caveat"] = *choice.caveat;
  seal(r);
  return r;
}

bool variance_range_hypothesis(unsigned k, std::size_t s, std::int64_t A, std::int64_t B) {
  if (B < 1 || A < 1) return false;
  const long double lower = std::pow(static_cast<long double>(B), 2.0L * k);
  const long double upper =
      std::pow(static_cast<long double>(B), static_cast<long double>(forms::hat_s(s)) - static_cast<long double>(k));
  const auto a = static_cast<long double>(A);
  return 1 <= lower && lower <= a && a <= upper;
}

ExperimentRecord variance_experiment(unsigned k, std::size_t s, std::int64_t A, std::int64_t B,
                                     const VarianceOptions& options) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (s <= k) throw DomainError("variance experiment needs s > k for the singular integral");
  if (A < 1 || B < 1) throw DomainError("A and B must be at least 1");
  const long double vectors = std::pow(2.0L * A, static_cast<long double>(s));
  if (vectors > 1e8L) throw ResourceError("coefficient box has " + std::to_string(static_cast<double>(vectors)) +
                                          " vectors; exhaustive enumeration is capped at 1e8");

  const auto classes = counting::coefficient_classes(s, A);
  auto counting_options = options.count;
  counting_options.parallel = false;
  local::LocalOptions lo;
  lo.mode = local::Mode::rigorous;
  lo.parallel = false;
  bool rigorous = true;
  try {
    local::rigorous_cutoff(k, s, 100'000);
  } catch (const ResourceError&) {
    lo.mode = local::Mode::heuristic;
    rigorous = false;
  }
  const double scale = std::pow(static_cast<double>(B), static_cast<double>(s - k));

  struct Row {
    std::uint64_t rho = 0;
    bool insoluble = false;
    double prediction = 0.0;
  };
  std::vector<Row> rows(classes.size());
  run_trials(classes.size(), options.workers, [&](std::uint64_t i) {
    const DiagonalForm form(k, classes[i].a);
    Row row;
    row.rho = counting::count_solutions(form, B, counting::CountMode::all_coords_nonzero, counting_options);
    const auto report = local::local_report(form, lo);
    row.insoluble = report.overall.kind == local::Overall::Kind::locally_insoluble;
    if (row.insoluble) {
      if (rigorous && row.rho != 0) {
        throw NumericalError(form.to_string() + " is locally insoluble yet has " + std::to_string(row.rho) +
                             " integer solutions");
      }
    } else {
      archimedean::QuadratureOptions qo;
      qo.parallel = false;
      const double J = archimedean::singular_integral_quadrature(form, qo).value;
      singular::SeriesOptions so;
      so.truncation = options.series_q;
      so.parallel = false;
      const double S = singular::series_truncated(form, so).partial_sum;
      row.prediction = J * S * scale;
    }
    rows[i] = row;
  });

  std::vector<double> sq;
  arith::BigInt sum_rho = 0, sum_rho_sq = 0;
  std::uint64_t insoluble_vectors = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto m = classes[i].multiplicity;
    const double d = static_cast<double>(rows[i].rho) - rows[i].prediction;
    sq.push_back(static_cast<double>(m) * d * d);
    sum_rho += arith::BigInt(m) * rows[i].rho;
    sum_rho_sq += arith::BigInt(m) * rows[i].rho * rows[i].rho;
    if (rows[i].insoluble) insoluble_vectors += m;
  }
  const double variance_sum = detail::pairwise_sum<double>(sq);
  const double normalizer = std::pow(static_cast<double>(A), static_cast<double>(s) - 2.0) *
                            std::pow(static_cast<double>(B), 2.0 * static_cast<double>(s - k));

  ExperimentRecord r;
  r.kind = "variance";
  r.params = Json{{"k", k}, {"s", s}, {"A", A}, {"B", B}, {"series_q", options.series_q},
                  {"integral", "quadrature"}, {"local_mode", local::to_string(lo.mode)}};
  r.seed = options.seed;
  r.results = Json{{"coefficient_vectors", static_cast<std::uint64_t>(vectors)},
                   {"permutation_classes", classes.size()},
                   {"sum_rho", sum_rho.str()},
                   {"sum_rho_squared", sum_rho_sq.str()},
                   {"locally_insoluble_vectors", insoluble_vectors},
                   {"variance_sum", variance_sum},
                   {"normalizer", normalizer},
                   {"ratio", variance_sum / normalizer},
                   {"range_hypothesis",
                    Json{{"statement", "B^(2k) <= A <= B^(hat_s - k)"},
                         {"holds", variance_range_hypothesis(k, s, A, B)}}},
                   {"caveat",
                    "the power saving delta and the implied constant of the mean-square bound are not estimated; "
                    "this record is the exact left-hand side for inspection only"}};
  if (s % 2 == 0) {
    const auto upsilon = counting::upsilon_count(k, static_cast<unsigned>(s / 2), A, B, counting_options);
    r.results["upsilon_crosscheck"] = Json{{"upsilon", upsilon}, {"equal", arith::BigInt(upsilon) == sum_rho_sq}};
  }
  seal(r);
  return r;
}

ExponentFit exponent_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw DomainError("exponent fit needs at least 3 points");
  std::vector<double> xs, ys;
  for (const auto& [scale, count] : points) {
    if (!(count > 0) || !(scale > 0)) throw DomainError("exponent fit needs positive scales and counts");
    xs.push_back(std::log(scale));
    ys.push_back(std::log(count));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw DomainError("exponent fit needs at least two distinct scales");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fit.residuals.push_back(ys[i] - (fit.intercept + fit.slope * xs[i]));
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(fit.residuals.back()));
  }
  return fit;
}

DualityCheck lattice_duality_check(std::size_t max_dim, std::uint64_t trials, std::uint64_t seed, int workers) {
  if (max_dim < 1) throw DomainError("dimension must be at least 1");
  struct Outcome {
    bool duality = false, routes = false, orthogonal = false;
    std::string basis;
  };
  std::vector<Outcome> outcomes(trials);
  run_trials(trials, workers, [&](std::uint64_t i) {
    auto engine = arith::SeededStream{seed, i}.engine();
    const auto n = 1 + arith::uniform_below(engine, max_dim);
    const auto r = 1 + arith::uniform_below(engine, n);
    std::optional<lattice::LatticeBasis> basis;
    while (!basis) {
      std::vector<lattice::IntVector> vs(r, lattice::IntVector(n));
      for (auto& v : vs) {
        for (auto& e : v) e = static_cast<std::int64_t>(arith::uniform_below(engine, 31)) - 15;
      }
      try {
        basis = lattice::make_basis(n, std::move(vs));
      } catch (const DomainError&) {
      }
    }
    const auto d2 = lattice::discriminant_squared_gram(*basis);
    const auto minors = lattice::discriminant_squared_minors(*basis);
    const auto g = lattice::minor_gcd(*basis);
    const auto dual = lattice::dual_lattice(*basis);
    Outcome o;
    o.routes = d2 == minors;
    o.duality = lattice::discriminant_squared_gram(dual) * g * g == d2;
    o.orthogonal = true;
    for (const auto& w : dual.vectors) {
      for (const auto& b : basis->vectors) {
        arith::BigInt dot = 0;
        for (std::size_t j = 0; j < n; ++j) dot += arith::BigInt(w[j]) * b[j];
        o.orthogonal = o.orthogonal && dot == 0;
      }
    }
    o.orthogonal = o.orthogonal && dual.rank() == n - r;
    if (!(o.routes && o.duality && o.orthogonal)) {
      Json rows = Json::array();
      for (const auto& b : basis->vectors) rows.push_back(b);
      o.basis = rows.dump();
    }
    outcomes[i] = std::move(o);
  });
  DualityCheck check;
  check.trials = trials;
  for (const auto& o : outcomes) {
    check.duality_holds += o.duality;
    check.routes_agree += o.routes;
    check.orthogonal += o.orthogonal;
    if (!o.basis.empty() && check.failures.size() < 10) check.failures.push_back(o.basis);
  }
  return check;
}

void run_store_append(const ExperimentRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw DomainError("cannot open run store " + path.string());
  out << canonical_serialization(record.to_json()) << '\n';
  if (!out) throw DomainError("write to run store " + path.string() + " failed");
}

StoreContents run_store_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open run store " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  StoreContents contents;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      contents.warnings.push_back("line " + std::to_string(line_no) + ": partial trailing record ignored");
      break;
    }
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    ExperimentRecord r;
    try {
      r = ExperimentRecord::from_json(Json::parse(line));
    } catch (const Json::exception& e) {
      throw DomainError("run store " + path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
    if (compute_hash(r) != r.canonical_hash) {
      throw DomainError("run store " + path.string() + " line " + std::to_string(line_no) +
                        ": canonical_hash does not match the record");
    }
    contents.records.push_back(std::move(r));
  }
  return contents;
}

namespace {

void flatten(const Json& j, const std::string& prefix, std::map<std::string, std::string>& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_string()) {
    out[prefix] = j.get<std::string>();
  } else {
    out[prefix] = j.dump();
  }
}

std::string csv_cell(const std::string& v) {
  if (v.find_first_of(",\"\n\r") == std::string::npos) return v;
  std::string q = "\"";
  for (char c : v) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

void export_csv(const std::vector<ExperimentRecord>& records, std::ostream& out) {
  std::vector<std::map<std::string, std::string>> rows;
  std::set<std::string> columns;
  for (const auto& r : records) {
    std::map<std::string, std::string> row;
    flatten(r.params, "params", row);
    flatten(r.results, "results", row);
    for (const auto& [c, v] : row) columns.insert(c);
    row["kind"] = r.kind;
    row["seed"] = std::to_string(r.seed);
    row["canonical_hash"] = r.canonical_hash;
    rows.push_back(std::move(row));
  }
  std::vector<std::string> header{"kind", "seed", "canonical_hash"};
  header.insert(header.end(), columns.begin(), columns.end());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_cell(header[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      const auto it = row.find(header[i]);
      out << (i ? "," : "") << (it == row.end() ? "" : csv_cell(it->second));
    }
    out << '\n';
  }
}

}  // namespace dioph::harness
