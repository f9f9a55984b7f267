#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dioph/counting.hpp"
#include "dioph/forms.hpp"
#include "dioph/local.hpp"

namespace dioph::harness {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.3.1";

// One experiment run. params, seed and results are the reproducible part;
// provenance is excluded from the hash.
struct ExperimentRecord {
  std::string kind;
  Json params = Json::object();
  std::uint64_t seed = 0;
  Json results = Json::object();
  Json provenance = Json::object();
  std::string canonical_hash;

  Json to_json() const;
  static ExperimentRecord from_json(const Json& j);
  bool operator==(const ExperimentRecord&) const = default;
};

// Sorted keys, no whitespace; reals in shortest round-trip form.
std::string canonical_serialization(const Json& j);

// SHA-256 hex over the canonical form of {kind, params, seed, results}.
std::string compute_hash(const ExperimentRecord& record);

// Fills canonical_hash and provenance (version, UTC timestamp).
void seal(ExperimentRecord& record);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// Wilson score interval at z (95% by default).
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.959963984540054);

// {"successes", "n", "fraction", "ci_lower", "ci_upper"}; fraction null when n = 0.
Json fraction_json(std::uint64_t successes, std::uint64_t n);

struct SurveyOptions {
  // Rigorous when the prime cutoff is at most rigorous_cutoff_limit unless set.
  std::optional<local::Mode> mode;
  std::uint64_t rigorous_cutoff_limit = 100'000;
  std::uint64_t local_budget = local::kDefaultSearchBudget;
  counting::CountOptions count;
  int workers = 0;  // 0: OpenMP default
  std::vector<DiagonalForm> injected;  // survey_hasse only; evaluated after the samples
};

ExperimentRecord survey_local_density(unsigned k, std::size_t s, std::int64_t A, std::uint64_t n, std::uint64_t seed,
                                      const SurveyOptions& options = {});

ExperimentRecord survey_small_solutions(unsigned k, std::size_t s, std::int64_t A, const std::vector<double>& C_list,
                                        std::uint64_t n, std::uint64_t seed, const SurveyOptions& options = {});

ExperimentRecord survey_hasse(unsigned k, std::size_t s, std::int64_t A, std::int64_t B, std::uint64_t n,
                              std::uint64_t seed, const SurveyOptions& options = {});

struct VarianceOptions {
  std::uint64_t series_q = 60;
  std::uint64_t seed = 0;  // recorded; the experiment itself draws nothing
  counting::CountOptions count;
  int workers = 0;
};

// Exact sum over the coefficient box of |rho_a(B) - J_a S_a B^{s-k}|^2.
ExperimentRecord variance_experiment(unsigned k, std::size_t s, std::int64_t A, std::int64_t B,
                                     const VarianceOptions& options = {});

// B^{2k} <= A <= B^{hat_s - k}.
bool variance_range_hypothesis(unsigned k, std::size_t s, std::int64_t A, std::int64_t B);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;  // log(count) - fitted, per point
  double max_abs_residual = 0.0;
};

// Least squares of log(count) against log(scale). Needs >= 3 points, all
// positive.
ExponentFit exponent_fit(const std::vector<std::pair<double, double>>& points);

struct DualityCheck {
  std::uint64_t trials = 0;
  std::uint64_t duality_holds = 0;   // d(dual)^2 G^2 = d^2
  std::uint64_t routes_agree = 0;    // Gram determinant = sum of squared minors
  std::uint64_t orthogonal = 0;      // every dual vector is orthogonal to the basis
  std::vector<std::string> failures;  // first few offending bases
  bool passed() const { return duality_holds == trials && routes_agree == trials && orthogonal == trials; }
};

// Random bases with ambient dimension 1..max_dim, rank 1..dim, entries in
// [-15, 15], redrawn until independent. Trial i uses SeededStream{seed, i}.
DualityCheck lattice_duality_check(std::size_t max_dim, std::uint64_t trials, std::uint64_t seed, int workers = 0);

void run_store_append(const ExperimentRecord& record, const std::filesystem::path& path);

struct StoreContents {
  std::vector<ExperimentRecord> records;
  std::vector<std::string> warnings;
};

// Throws DomainError naming the line on a malformed or tampered record; an
// unterminated last line is skipped with a warning.
StoreContents run_store_read(const std::filesystem::path& path);

// One row per record: kind, seed, canonical_hash, then every scalar leaf of
// params and results under dotted names. Arrays are embedded as JSON text.
void export_csv(const std::vector<ExperimentRecord>& records, std::ostream& out);

}  // namespace dioph::harness
