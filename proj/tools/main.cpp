#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <iostream>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "alkam/head_machine.hpp"
#include "alkam/lambda_syntax.hpp"
#include "alkam/qkam.hpp"
#include "alkam/resource_reduction.hpp"
#include "alkam/resource_syntax.hpp"
#include "alkam/scalar.hpp"
#include "alkam/taylor.hpp"

namespace {

using nlohmann::json;

constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  std::string semiring_name = "rational";
  std::vector<std::string> vars;
  std::string format = "text";
  bool no_prune = false;
};

alkam::Semiring make_semiring(const RunConfig& config) {
  if (config.semiring_name == "poly") {
    if (config.vars.empty())
      throw CLI::ValidationError("--semiring poly needs --vars with at least one name");
    return alkam::Semiring::polynomials(config.vars);
  }
  if (!config.vars.empty())
    throw CLI::ValidationError("--vars only applies to --semiring poly");
  if (config.semiring_name == "nat") return alkam::Semiring::naturals();
  if (config.semiring_name == "bool") return alkam::Semiring::booleans();
  return alkam::Semiring::rationals();
}

void emit(const RunConfig& config, const json& payload, const std::string& text) {
  if (config.format == "json")
    std::cout << payload.dump() << "\n";
  else
    std::cout << text << "\n";
}

int cmd_canon(const RunConfig& config, const std::string& term_text) {
  const alkam::Semiring sr = make_semiring(config);
  const std::string canonical =
      to_string(alkam::canonicalize(alkam::parse_alg(term_text, sr), sr));
  emit(config, {{"input", term_text}, {"canonical", canonical}}, canonical);
  return 0;
}

int cmd_khead(const RunConfig& config, const std::string& term_text, std::uint64_t fuel) {
  const alkam::Semiring sr = make_semiring(config);
  const alkam::AlgPtr term = alkam::parse_alg(term_text, sr);
  const alkam::Scalar value = alkam::run_K(term, alkam::Nat(fuel), sr);
  if (fuel == 0) {
    emit(config, {{"fuel", fuel}, {"value", to_string(value)}, {"stable", false}},
         to_string(value));
    return 0;
  }
  // Walk the fuel down to the last point the value changed, capped so huge
  // budgets stay cheap; the hint is empirical, not a convergence proof.
  std::uint64_t last_change = fuel;
  bool capped = false;
  for (std::uint64_t probes = 0; last_change > 0; ++probes) {
    if (probes == 1024) {
      capped = true;
      break;
    }
    if (!eq(value, alkam::run_K(term, alkam::Nat(last_change) - 1, sr))) break;
    --last_change;
  }
  const bool stable = last_change < fuel || capped;
  json payload{{"fuel", fuel}, {"value", to_string(value)}, {"stable", stable}};
  std::string note;
  if (!stable)
    note = " (not yet stable)";
  else if (capped)
    note = " (stable)";
  else if (last_change == 0)
    note = " (stable; never changed)";
  else
    note = " (stable; last change at fuel " + std::to_string(last_change) + ")";
  if (!capped) payload["last_change"] = last_change;
  emit(config, payload, to_string(value) + note);
  return 0;
}

int cmd_nf(const RunConfig& config, const std::string& res_text) {
  const alkam::Semiring sr = make_semiring(config);
  const std::string nf = to_string(alkam::normal_form(alkam::parse_res(res_text), sr));
  emit(config, {{"normal_form", nf}}, nf);
  return 0;
}

int cmd_m(const RunConfig& config, const std::string& res_text) {
  const alkam::Nat m = alkam::multiplicity(alkam::parse_res(res_text));
  emit(config, {{"multiplicity", m.str()}}, m.str());
  return 0;
}

int cmd_w(const RunConfig& config, const std::string& res_text, const std::string& term_text) {
  const alkam::Semiring sr = make_semiring(config);
  const alkam::Scalar w =
      alkam::weight(alkam::parse_res(res_text), alkam::parse_alg(term_text, sr), sr);
  emit(config, {{"weight", to_string(w)}}, to_string(w));
  return 0;
}

int cmd_coeff(const RunConfig& config, const std::string& term_text,
              const std::string& res_text) {
  const alkam::Semiring sr = make_semiring(config);
  const alkam::QkamOptions opts{!config.no_prune, false};
  const alkam::Scalar c = alkam::k_hat(alkam::parse_alg(term_text, sr),
                                       alkam::parse_res(res_text), sr, opts);
  emit(config, {{"coefficient", to_string(c)}}, to_string(c));
  return 0;
}

int cmd_taylor(const RunConfig& config, const std::string& term_text,
               const std::string& res_text) {
  const alkam::Semiring sr = make_semiring(config);
  const alkam::Scalar c = alkam::taylor_coeff(alkam::parse_alg(term_text, sr),
                                              alkam::parse_res(res_text), sr);
  emit(config, {{"coefficient", to_string(c)}}, to_string(c));
  return 0;
}

int cmd_enumerate(const RunConfig& config, const std::string& term_text,
                  std::size_t max_size) {
  const alkam::Semiring sr = make_semiring(config);
  const alkam::Combination support =
      alkam::enumerate_support(alkam::parse_alg(term_text, sr), max_size, sr);
  if (config.format == "json") {
    json entries = json::array();
    for (const auto& [t, c] : support.entries())
      entries.push_back({{"term", to_string(t)}, {"coefficient", to_string(c)}});
    std::cout << json{{"entries", entries}}.dump() << "\n";
  } else if (support.empty()) {
    std::cout << "0\n";
  } else {
    for (const auto& [t, c] : support.entries())
      std::cout << to_string(c) << "\t" << to_string(t) << "\n";
  }
  return 0;
}

int cmd_trace(const RunConfig& config, const std::string& term_text,
              const std::string& res_text) {
  const alkam::Semiring sr = make_semiring(config);
  const alkam::QkamOptions opts{!config.no_prune, false};
  const auto rows = alkam::trace_pair(alkam::parse_alg(term_text, sr),
                                      alkam::parse_res(res_text), sr, opts);
  if (config.format == "json") {
    json out = json::array();
    for (const auto& row : rows)
      out.push_back({{"algebraic", to_string(row.config.alg)},
                     {"resource", to_string(row.config.res)},
                     {"value", to_string(row.value)},
                     {"note", row.note}});
    std::cout << json{{"rows", out}}.dump() << "\n";
    return 0;
  }
  if (rows.empty()) {
    std::cout << "no run builds this term\n";
    return 0;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::cout << "row " << i << "  value " << to_string(rows[i].value) << "  ("
              << rows[i].note << ")\n";
    std::cout << "  algebraic: " << to_string(rows[i].config.alg) << "\n";
    std::cout << "  resource:  " << to_string(rows[i].config.res) << "\n";
  }
  return 0;
}

int cmd_verify(const RunConfig& config, std::uint64_t seed, std::size_t count,
               int size_bound, std::size_t max_size) {
  const alkam::Semiring sr = make_semiring(config);
  const std::vector<alkam::AlgPtr> corpus =
      alkam::generate_corpus(sr, seed, count, size_bound);
  std::vector<std::pair<alkam::AlgPtr, alkam::ResPtr>> pairs;
  for (const alkam::AlgPtr& m : corpus) {
    const alkam::Combination support = alkam::taylor_support(m, max_size, sr);
    for (const auto& [t, c] : support.entries()) pairs.emplace_back(m, t);
  }

  std::vector<std::optional<alkam::CoefficientReport>> slots(pairs.size());
  std::mutex sink;
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;

  auto worker = [&] {
    for (std::size_t i = cursor.fetch_add(1); i < pairs.size(); i = cursor.fetch_add(1)) {
      try {
        slots[i] = alkam::verify_theorem(pairs[i].first, pairs[i].second, sr);
      } catch (...) {
        const std::lock_guard<std::mutex> guard(sink);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const std::size_t width = std::max<std::size_t>(
      1, std::min<std::size_t>(pairs.size(), std::thread::hardware_concurrency()));
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < width; ++i) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);

  std::size_t unequal = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const alkam::CoefficientReport& r = *slots[i];
    if (!r.equal) ++unequal;
    if (config.format == "json") {
      std::cout << json{{"M", to_string(r.term)},
                        {"t", to_string(r.annotation)},
                        {"lhs", to_string(r.lhs)},
                        {"taylor", to_string(r.taylor)},
                        {"nf_c0", to_string(r.nf_c0)},
                        {"rhs", to_string(r.rhs)},
                        {"equal", r.equal}}
                       .dump()
                << "\n";
    } else {
      std::cout << (r.equal ? "equal   " : "UNEQUAL ") << to_string(r.lhs) << " vs "
                << to_string(r.rhs) << "  M = " << to_string(r.term)
                << "  t = " << to_string(r.annotation) << "\n";
    }
  }
  if (config.format != "json")
    std::cout << "checked " << pairs.size() << " pairs over " << corpus.size()
              << " programs, " << unequal << " unequal\n";
  return unequal == 0 ? 0 : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for weighted lambda terms: canonical forms, head-machine "
               "evaluation, resource normal forms, expansion coefficients, and "
               "machine/expansion cross-checks."};
  app.set_config("--config");
  app.require_subcommand(1);

  RunConfig config;
  app.add_option("--semiring", config.semiring_name, "Coefficient domain")
      ->check(CLI::IsMember({"nat", "rational", "bool", "poly"}))
      ->capture_default_str();
  app.add_option("--vars", config.vars,
                 "Indeterminate names for the polynomial semiring")
      ->delimiter(',');
  app.add_option("--format", config.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_flag("--no-prune", config.no_prune,
               "Keep splittings that bury resources under an empty bag");

  std::string term_text, res_text;
  std::uint64_t fuel = 0, seed = 42;
  std::size_t max_size = 12, count = 100;
  int size_bound = 8;

  CLI::App* canon = app.add_subcommand("canon", "Canonicalize an algebraic term");
  canon->add_option("term", term_text, "Algebraic term")->required();

  CLI::App* khead =
      app.add_subcommand("khead", "Run the fuel-bounded head machine on a closed term");
  khead->add_option("term", term_text, "Algebraic term")->required();
  khead->add_option("--fuel", fuel, "Step budget")->required();

  CLI::App* nf = app.add_subcommand("nf", "Normalize a resource term");
  nf->add_option("term", res_text, "Resource term")->required();

  CLI::App* m = app.add_subcommand("m", "Multiplicity of a resource term");
  m->add_option("term", res_text, "Resource term")->required();

  CLI::App* w = app.add_subcommand("w", "Weight of a resource term against an algebraic term");
  w->add_option("resource", res_text, "Resource term")->required();
  w->add_option("term", term_text, "Algebraic term")->required();

  CLI::App* coeff =
      app.add_subcommand("coeff", "Machine coefficient of an annotation of a closed term");
  coeff->add_option("term", term_text, "Algebraic term")->required();
  coeff->add_option("resource", res_text, "Resource term")->required();

  CLI::App* taylor =
      app.add_subcommand("taylor", "Expansion coefficient of a resource term in a term");
  taylor->add_option("term", term_text, "Algebraic term")->required();
  taylor->add_option("resource", res_text, "Resource term")->required();

  CLI::App* enumerate =
      app.add_subcommand("enumerate", "All consumable annotations within a size bound");
  enumerate->add_option("term", term_text, "Algebraic term")->required();
  enumerate->add_option("--max-size", max_size, "Annotation size bound")
      ->check(CLI::PositiveNumber)
      ->required();

  CLI::App* verify = app.add_subcommand(
      "verify", "Cross-check machine coefficients against expansion times normal form");
  verify->add_option("--count", count, "Number of generated programs")
      ->capture_default_str();
  verify->add_option("--seed", seed, "Generator seed")->capture_default_str();
  verify->add_option("--size-bound", size_bound, "Generated program size bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--max-size", max_size, "Annotation size bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* trace = app.add_subcommand("trace", "Paired machine trace of one annotation");
  trace->add_option("term", term_text, "Algebraic term")->required();
  trace->add_option("resource", res_text, "Resource term")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (canon->parsed()) return cmd_canon(config, term_text);
    if (khead->parsed()) return cmd_khead(config, term_text, fuel);
    if (nf->parsed()) return cmd_nf(config, res_text);
    if (m->parsed()) return cmd_m(config, res_text);
    if (w->parsed()) return cmd_w(config, res_text, term_text);
    if (coeff->parsed()) return cmd_coeff(config, term_text, res_text);
    if (taylor->parsed()) return cmd_taylor(config, term_text, res_text);
    if (enumerate->parsed()) return cmd_enumerate(config, term_text, max_size);
    if (verify->parsed()) return cmd_verify(config, seed, count, size_bound, max_size);
    if (trace->parsed()) return cmd_trace(config, term_text, res_text);
  } catch (const alkam::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const alkam::ScalarParseError& e) {
    std::cerr << "scalar error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const alkam::NotClosed& e) {
    std::cerr << "not closed: " << e.what() << "\n";
    return kExitUsage;
  } catch (const alkam::NotDivisible& e) {
    std::cerr << "not divisible: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
