// Command-line front end. Exit codes: 0 success, 1 internal error or failed
// check, 2 hypothesis failure or bad input, 3 budget exhausted.

#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "heron/report.hpp"

namespace {

using namespace heron;

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kHypothesis = 2;
constexpr int kBudget = 3;

void emit_line(const std::string& line) {
  // One write per record so an interrupted stream never ends mid-line.
  std::cout << (line + '\n') << std::flush;
}

int run_analyze(std::uint64_t n, bool json, const AnalyzeOptions& options) {
  const AnalysisReport report = analyze(n, options);
  if (json) {
    emit_line(to_json(report).dump());
  } else {
    std::cout << format_text(report);
  }
  return kOk;
}

int run_search(std::uint64_t lo, std::uint64_t hi, const std::string& parity, bool json, unsigned jobs) {
  std::optional<Parity> filter;
  if (parity == "odd") filter = Parity::odd;
  if (parity == "even") filter = Parity::even;
  if (!json) {
    std::ostringstream header;
    header << std::left << std::setw(10) << "n" << std::setw(7) << "parity" << std::setw(22) << "q" << std::setw(6)
           << "rank" << std::setw(9) << "formula" << "generators";
    emit_line(header.str());
  }
  search(lo, hi, filter, jobs, [&](const SearchItem& item) {
    if (json) {
      emit_line(to_json(item).dump());
      return;
    }
    std::ostringstream line;
    line << std::left << std::setw(10) << item.n;
    if (!item.report) {
      line << item.error_kind << ": " << item.error;
    } else {
      const auto& r = *item.report;
      std::string gens;
      for (const auto& g : r.generators) gens += to_string(g);
      line << std::setw(7) << to_string(r.parity) << std::setw(22) << r.q << std::setw(6) << r.selmer_rank
           << std::setw(9) << (std::to_string(r.formula_rank) + (r.agreement ? "" : "*")) << (gens.empty() ? "-" : gens);
    }
    emit_line(line.str());
  });
  return kOk;
}

int run_verify_table(bool json, unsigned jobs) {
  const auto rows = verify_table(jobs);
  bool ok = true;
  for (const auto& r : rows) ok &= r.status != RowStatus::fail;
  if (json) {
    Json out;
    out["rows"] = Json::array();
    for (const auto& r : rows) out["rows"].push_back(to_json(r));
    out["all_pass"] = ok;
    emit_line(out.dump());
  } else {
    for (const auto& r : rows) {
      std::string gens;
      for (const auto& g : r.generators) gens += to_string(g);
      std::cout << std::left << std::setw(10) << r.n << std::setw(12) << r.q << std::setw(3) << r.rank
                << std::setw(22) << to_string(r.status) << (gens.empty() ? "-" : gens) << '\n';
      for (const auto& note : r.notes) std::cout << "    " << note << '\n';
    }
  }
  return ok ? kOk : kInternal;
}

int run_selftest(std::uint64_t bound, bool json, unsigned jobs) {
  bool ok = true;
  const auto suites = selftest(bound, jobs);
  for (const auto& suite : suites) ok &= suite.passed();
  if (json) {
    Json out;
    out["suites"] = Json::array();
    for (const auto& suite : suites) out["suites"].push_back(to_json(suite));
    out["all_pass"] = ok;
    emit_line(out.dump());
    return ok ? kOk : kInternal;
  }
  for (const auto& suite : suites) {
    std::cout << (suite.passed() ? "PASS " : "FAIL ") << suite.name << " (" << suite.checks << " checks, "
              << suite.violations.size() << " violations)\n";
    for (const auto& v : suite.violations) std::cout << "    " << v << '\n';
  }
  return ok ? kOk : kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-Selmer groups of y^2 = x(x - 1)(x + n^2) by full 2-descent"};
  app.require_subcommand(1);

  std::uint64_t n = 0;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t bound = 5000;
  bool json = false;
  bool verbose_local = false;
  std::optional<int> max_level;
  unsigned jobs = 1;
  std::string parity;

  auto* analyze_cmd = app.add_subcommand("analyze", "descent for a single n");
  analyze_cmd->add_option("n", n, "square-free n with n^2 + 1 prime or twice a prime")->required();
  analyze_cmd->add_flag("--json", json, "emit one JSON object");
  analyze_cmd->add_flag("--verbose-local", verbose_local, "include every local verdict");
  analyze_cmd->add_option("--max-level", max_level, "lifting level budget for every prime")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* search_cmd = app.add_subcommand("search", "every qualifying n in [lo, hi]");
  search_cmd->add_option("lo", lo)->required();
  search_cmd->add_option("hi", hi)->required();
  search_cmd->add_option("--parity", parity, "odd or even")->check(CLI::IsMember({"odd", "even"}));
  search_cmd->add_flag("--json", json, "line-delimited JSON");
  search_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* table_cmd = app.add_subcommand("verify-table", "recompute the published examples");
  table_cmd->add_flag("--json", json, "emit one JSON object");
  table_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* selftest_cmd = app.add_subcommand("selftest", "run the property suites");
  selftest_cmd->add_option("--bound", bound, "largest n to test")->check(CLI::PositiveNumber);
  selftest_cmd->add_flag("--json", json, "emit one JSON object");
  selftest_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kHypothesis;
  }

  try {
    if (*analyze_cmd) return run_analyze(n, json, {verbose_local, max_level, jobs});
    if (*search_cmd) return run_search(lo, hi, parity, json, jobs);
    if (*table_cmd) return run_verify_table(json, jobs);
    if (*selftest_cmd) return run_selftest(bound, json, jobs);
  } catch (const BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << '\n';
    return kBudget;
  } catch (const Unfactored& e) {
    std::cerr << "budget exhausted: " << e.what() << '\n';
    return kBudget;
  } catch (const HypothesisFailed& e) {
    std::cerr << "hypothesis failed: " << e.what() << '\n';
    return kHypothesis;
  } catch (const NotSquarefree& e) {
    std::cerr << "hypothesis failed: " << e.what() << '\n';
    return kHypothesis;
  } catch (const NotApplicable& e) {
    std::cerr << "hypothesis failed: " << e.what() << '\n';
    return kHypothesis;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kHypothesis;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
