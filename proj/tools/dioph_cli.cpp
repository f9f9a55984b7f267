#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "dioph/archimedean.hpp"
#include "dioph/counting.hpp"
#include "dioph/errors.hpp"
#include "dioph/forms.hpp"
#include "dioph/harness.hpp"
#include "dioph/local.hpp"
#include "dioph/reference.hpp"
#include "dioph/singular.hpp"

using namespace dioph;
using harness::Json;

namespace {

Json rational_json(const arith::Rational& q) {
  return Json{{"exact", q.str()}, {"value", static_cast<double>(q)}};
}

Json verdict_json(const local::PrimeVerdict& v) {
  Json j{{"p", v.p}, {"gamma", v.gamma}, {"status", local::to_string(v.status)}};
  j["witness"] = v.witness ? Json(*v.witness) : Json(nullptr);
  j["chi"] = v.chi_estimate ? rational_json(*v.chi_estimate) : Json(nullptr);
  return j;
}

Json local_json(const local::LocalReport& r) {
  Json verdicts = Json::array();
  for (const auto& v : r.prime_verdicts) verdicts.push_back(verdict_json(v));
  Json j{{"real_soluble", r.real_soluble},
         {"mode", local::to_string(r.mode)},
         {"cutoff", r.cutoff},
         {"overall", local::to_string(r.overall.kind)},
         {"real_obstruction", r.overall.real_obstruction},
         {"primes", verdicts}};
  j["witness_prime"] = r.overall.witness_prime ? Json(*r.overall.witness_prime) : Json(nullptr);
  return j;
}

Json estimate_json(const archimedean::IntegralEstimate& e) {
  Json j{{"method", archimedean::to_string(e.method)}, {"value", e.value}, {"error_indicator", e.error_indicator},
         {"B", e.scale_B}};
  if (e.method == archimedean::Method::quadrature) {
    j["tail_cut"] = e.tail_cut;
    j["tail_correction"] = e.tail_correction;
    j["quadrature_error"] = e.quadrature_error;
    j["truncation_change"] = e.truncation_change;
    j["subleading_bound"] = e.subleading_bound;
  } else {
    j["epsilon"] = e.epsilon;
    j["samples"] = e.samples;
    j["seed"] = e.seed;
    j["hits"] = e.hits;
    j["hits_half"] = e.hits_half;
    j["raw_value"] = e.raw_value;
    j["raw_value_half"] = e.raw_value_half;
  }
  return j;
}

Json witness_json(const counting::SearchOutcome& o) {
  Json j{{"found", o.found.has_value()}, {"exhausted_up_to", o.exhausted_up_to}};
  j["witness"] = o.found ? Json(o.found->x) : Json(nullptr);
  j["norm"] = o.found ? Json(o.found->norm) : Json(nullptr);
  return j;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw DomainError("cannot parse '" + item + "' in list '" + text + "'");
    }
    if (used != item.size()) throw DomainError("cannot parse '" + item + "' in list '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::string fmt_fraction(const Json& f) {
  if (f["fraction"].is_null()) return "n/a (n=0)";
  std::ostringstream o;
  o << std::fixed << std::setprecision(4) << f["fraction"].get<double>() << " [" << f["ci_lower"].get<double>()
    << ", " << f["ci_upper"].get<double>() << "] n=" << f["n"].get<std::uint64_t>();
  return o.str();
}

void summarize(const harness::ExperimentRecord& r) {
  std::cout << "kind     " << r.kind << "\nhash     " << r.canonical_hash << '\n';
  const auto& res = r.results;
  if (r.kind == "survey_local") {
    std::cout << "soluble  " << fmt_fraction(res["locally_soluble"]) << "\nundet.   " << res["undetermined"] << '\n'
              << "failures " << res["failures"].dump() << '\n';
  } else if (r.kind == "survey_small_solutions") {
    for (const auto& row : res["by_C"]) {
      std::cout << "C=" << std::setw(6) << row["C"].get<double>() << "  " << fmt_fraction(row)
                << "  censored=" << row["censored"] << '\n';
    }
  } else if (r.kind == "survey_hasse") {
    std::cout << "found    " << fmt_fraction(res["found"]) << "\nunresolved " << res["unresolved"].size()
              << "\ninsoluble " << res["locally_insoluble"] << "  undetermined " << res["undetermined"]
              << "  censored " << res["censored"] << '\n';
  }
  if (res.contains("caveat")) std::cout << "caveat   " << res["caveat"].get<std::string>() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diagonal diophantine equations: local solubility, densities, exact counts and surveys"};
  app.require_subcommand(1);
  app.set_version_flag("--version", harness::kToolVersion);

  std::string form_text;
  std::string mode_text = "rigorous";
  std::uint64_t series_q = 200, integral_samples = 200'000, seed = 0;
  std::optional<std::int64_t> box;
  auto* analyze = app.add_subcommand("analyze", "local report, series, integral, certificate and predicted count");
  analyze->add_option("--form", form_text, "\"k=<int> a=<c1>,...,<cs>\"")->required();
  analyze->add_option("--mode", mode_text, "rigorous|heuristic")->check(CLI::IsMember({"rigorous", "heuristic"}));
  analyze->add_option("--series-q", series_q, "singular series truncation");
  analyze->add_option("--integral-samples", integral_samples, "slab Monte Carlo samples");
  analyze->add_option("--seed", seed);
  analyze->add_option("--box", box, "B for the predicted count J S B^(s-k)");

  std::int64_t max_norm = 0;
  auto* search = app.add_subcommand("search", "smallest nonzero solution by sup-norm");
  search->add_option("--form", form_text)->required();
  search->add_option("--max-norm", max_norm)->required();

  std::int64_t B = 0;
  std::string count_mode = "all-nonzero";
  auto* count = app.add_subcommand("count", "exact number of solutions in a box");
  count->add_option("--form", form_text)->required();
  count->add_option("--box", B)->required();
  count->add_option("--mode", count_mode)->check(CLI::IsMember({"all-nonzero", "vector-nonzero"}));

  unsigned k = 0, t = 0;
  std::size_t s = 0;
  std::int64_t A = 0;
  std::optional<std::int64_t> survey_B;
  std::string C_text = "0.5,1,2", out_path;
  std::uint64_t n = 0;
  int workers = 0;
  std::optional<std::string> survey_mode;
  std::string survey_kind;
  auto* survey = app.add_subcommand("survey", "sampled experiment appended to a JSONL store");
  survey->add_option("kind", survey_kind, "local|small-solutions|hasse")
      ->required()
      ->check(CLI::IsMember({"local", "small-solutions", "hasse"}));
  survey->add_option("--k", k)->required();
  survey->add_option("--s", s)->required();
  survey->add_option("--A", A)->required();
  survey->add_option("--B", survey_B, "search bound (hasse)");
  survey->add_option("--C", C_text, "comma separated constants (small-solutions)");
  survey->add_option("--n", n)->required();
  survey->add_option("--seed", seed)->required();
  survey->add_option("--out", out_path)->required();
  survey->add_option("--workers", workers, "OpenMP threads; records do not depend on it");
  survey->add_option("--mode", survey_mode, "override the local mode")->check(CLI::IsMember({"rigorous", "heuristic"}));

  auto* xi = app.add_subcommand("xi", "#{(a, x)}: all a_j nonzero in [-A, A], 0 < |x| <= B, F(x) = 0");
  xi->add_option("--k", k)->required();
  xi->add_option("--s", s)->required();
  xi->add_option("--A", A)->required();
  xi->add_option("--B", B)->required();

  auto* upsilon = app.add_subcommand("upsilon", "sum over a in the 2t-box of rho_a(B)^2");
  upsilon->add_option("--k", k)->required();
  upsilon->add_option("--t", t)->required();
  upsilon->add_option("--A", A)->required();
  upsilon->add_option("--B", B)->required();

  std::uint64_t d = 0;
  auto* pairs = app.add_subcommand("pairs", "#{(u, v) : |u|, |v| <= B, u^k = v^k mod d}");
  pairs->add_option("--B", B)->required();
  pairs->add_option("--d", d)->required();
  pairs->add_option("--K", k, "degree")->required();

  std::string variance_out;
  auto* variance = app.add_subcommand("variance", "exact mean-square deviation over the coefficient box");
  variance->add_option("--k", k)->required();
  variance->add_option("--s", s)->required();
  variance->add_option("--A", A)->required();
  variance->add_option("--B", B)->required();
  variance->add_option("--series-q", series_q)->required();
  variance->add_option("--seed", seed)->required();
  variance->add_option("--out", variance_out, "also append the record here");
  variance->add_option("--workers", workers);

  std::size_t dim = 0;
  std::uint64_t trials = 0;
  auto* lattice_cmd = app.add_subcommand("lattice", "lattice self-checks");
  lattice_cmd->require_subcommand(1);
  auto* duality = lattice_cmd->add_subcommand("check-duality", "d(dual) G = d on random bases");
  duality->add_option("--n", dim, "largest ambient dimension")->required();
  duality->add_option("--trials", trials)->required();
  duality->add_option("--seed", seed)->required();

  std::uint64_t p = 0;
  std::int64_t a = 0, b = 0;
  std::int64_t ab_norm = 6;
  auto* adversarial = app.add_subcommand("adversarial", "forms without small solutions, with verification");
  adversarial->require_subcommand(1);
  auto* pq = adversarial->add_subcommand("pq", "x1^k - q x2^k + p(...) + ...: no zero below p");
  pq->add_option("--k", k)->required();
  pq->add_option("--t", t)->required();
  pq->add_option("--p", p)->required();
  auto* ab = adversarial->add_subcommand("ab", "a(x1^k+...+xt^k) - b(...): b divides the first block");
  ab->add_option("--k", k)->required();
  ab->add_option("--t", t)->required();
  ab->add_option("--a", a)->required();
  ab->add_option("--b", b)->required();
  ab->add_option("--max-norm", ab_norm, "enumerate every solution up to this norm");

  std::string in_path, format = "csv";
  auto* export_cmd = app.add_subcommand(
      "export",
      "flatten a JSONL store to CSV. Columns: kind, seed, canonical_hash, then params.* and results.* leaves.\n"
      "survey_local: results.locally_soluble.{successes,n,fraction,ci_lower,ci_upper}, results.undetermined,\n"
      "  results.failures.real, results.failures.smallest_failing_prime.<p>\n"
      "survey_small_solutions: results.by_C (JSON array of per-C fractions), results.censored_trials\n"
      "survey_hasse: results.found.*, results.locally_insoluble, results.undetermined, results.censored,\n"
      "  results.unresolved (JSON array)\n"
      "variance: results.variance_sum, results.ratio, results.sum_rho_squared, results.range_hypothesis.holds");
  export_cmd->add_option("--in", in_path)->required();
  export_cmd->add_option("--format", format)->check(CLI::IsMember({"csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze) {
      const auto form = DiagonalForm::parse(form_text);
      local::LocalOptions lo;
      lo.mode = mode_text == "rigorous" ? local::Mode::rigorous : local::Mode::heuristic;
      const auto report = local::local_report(form, lo);
      Json out{{"form", form.to_string()}, {"local", local_json(report)}};

      singular::SeriesOptions so;
      so.truncation = series_q;
      const auto series = singular::series_truncated(form, so);
      out["series"] = Json{{"partial_sum", series.partial_sum},
                           {"truncation", series.truncation},
                           {"tail_indicator", series.tail_indicator},
                           {"convergence_warning", series.convergence_warning}};

      std::optional<double> J;
      if (form.dimension() > form.degree()) {
        const auto quad = archimedean::singular_integral_quadrature(form);
        archimedean::SlabOptions slab;
        slab.samples = integral_samples;
        const auto mc = archimedean::singular_integral_slab_mc(form, seed, slab);
        out["integral"] = Json{{"quadrature", estimate_json(quad)}, {"slab_mc", estimate_json(mc)}};
        J = quad.value;
      } else {
        out["integral"] = Json{{"note", "s <= k: the singular integral diverges"}};
      }

      const auto profile = local::prime_profile(form, report.cutoff);
      const auto cert = local::series_lower_certificate(form, profile);
      out["certificate"] = Json{{"log10", cert.log10_value}, {"note", cert.note}};
      // The exact value can run to thousands of digits; log10 carries it then.
      const bool short_value = cert.value && cert.value->str().size() <= 80;
      out["certificate"]["value"] = short_value ? Json(cert.value->str()) : Json(nullptr);

      if (box) {
        if (*box < 1) throw DomainError("--box must be at least 1");
        Json pred{{"B", *box}};
        if (report.overall.kind == local::Overall::Kind::locally_insoluble) {
          pred["value"] = 0.0;
          pred["note"] = "locally insoluble";
        } else if (J) {
          pred["value"] = *J * series.partial_sum *
                          std::pow(static_cast<double>(*box), static_cast<double>(form.dimension() - form.degree()));
        } else {
          pred["value"] = nullptr;
        }
        out["prediction"] = pred;
      }
      print(out);
    } else if (*search) {
      const auto form = DiagonalForm::parse(form_text);
      auto out = witness_json(counting::smallest_solution(form, max_norm));
      out["form"] = form.to_string();
      print(out);
    } else if (*count) {
      const auto form = DiagonalForm::parse(form_text);
      const auto mode = counting::parse_count_mode(count_mode);
      print(Json{{"form", form.to_string()}, {"B", B}, {"mode", count_mode},
                 {"count", counting::count_solutions(form, B, mode)}});
    } else if (*survey) {
      harness::SurveyOptions so;
      so.workers = workers;
      if (survey_mode) so.mode = *survey_mode == "rigorous" ? local::Mode::rigorous : local::Mode::heuristic;
      harness::ExperimentRecord r;
      if (survey_kind == "local") {
        r = harness::survey_local_density(k, s, A, n, seed, so);
      } else if (survey_kind == "small-solutions") {
        r = harness::survey_small_solutions(k, s, A, parse_list(C_text), n, seed, so);
      } else {
        if (!survey_B) throw DomainError("survey hasse needs --B");
        r = harness::survey_hasse(k, s, A, *survey_B, n, seed, so);
      }
      harness::run_store_append(r, out_path);
      summarize(r);
    } else if (*xi) {
      print(Json{{"k", k}, {"s", s}, {"A", A}, {"B", B}, {"xi", counting::xi_count(k, s, A, B)}});
    } else if (*upsilon) {
      print(Json{{"k", k}, {"t", t}, {"A", A}, {"B", B}, {"upsilon", counting::upsilon_count(k, t, A, B)}});
    } else if (*pairs) {
      print(Json{{"B", B}, {"d", d}, {"k", k}, {"pairs", counting::congruent_power_pairs(B, d, k)}});
    } else if (*variance) {
      harness::VarianceOptions vo;
      vo.series_q = series_q;
      vo.seed = seed;
      vo.workers = workers;
      const auto r = harness::variance_experiment(k, s, A, B, vo);
      if (!variance_out.empty()) harness::run_store_append(r, variance_out);
      print(r.to_json());
    } else if (*duality) {
      const auto check = harness::lattice_duality_check(dim, trials, seed);
      std::cout << (check.passed() ? "PASS" : "FAIL") << " lattice duality: " << check.duality_holds << "/"
                << check.trials << " duality, " << check.routes_agree << "/" << check.trials << " gram=minors, "
                << check.orthogonal << "/" << check.trials << " orthogonal\n";
      for (const auto& f : check.failures) std::cout << "  failing basis " << f << '\n';
      return check.passed() ? 0 : 1;
    } else if (*pq) {
      const auto form = forms::adversarial_pq(k, t, p);
      const auto search_out = counting::smallest_solution(form, static_cast<std::int64_t>(p) - 1);
      const auto padic = local::padic_soluble(form, p);
      const bool verified = !search_out.found && search_out.exhausted_up_to == static_cast<std::int64_t>(p) - 1;
      print(Json{{"form", form.to_string()},
                 {"search", witness_json(search_out)},
                 {"padic_at_p", Json{{"p", p}, {"level", padic.level}, {"status", local::to_string(padic.status)}}},
                 {"no_solution_below_p", verified}});
    } else if (*ab) {
      const auto form = forms::adversarial_ab(k, t, a, b);
      const auto smallest = counting::smallest_solution(form, ab_norm);
      std::uint64_t total = 0, divisible = 0;
      for (const auto& x : reference::naive_solutions(form, ab_norm)) {
        ++total;
        std::int64_t block = 0;
        for (unsigned j = 0; j < t; ++j) block = arith::checked_add(block, arith::checked_pow(x[j], k));
        divisible += block % b == 0;
      }
      print(Json{{"form", form.to_string()},
                 {"search", witness_json(smallest)},
                 {"solutions_up_to_norm", ab_norm},
                 {"solutions", total},
                 {"b_divides_first_block", divisible},
                 {"verified", divisible == total}});
    } else if (*export_cmd) {
      const auto store = harness::run_store_read(in_path);
      for (const auto& w : store.warnings) std::cerr << "warning: " << w << '\n';
      harness::export_csv(store.records, std::cout);
    }
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const OverflowError& e) {
    std::cerr << "overflow: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical inconsistency: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
