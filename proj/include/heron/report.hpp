#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "heron/curve.hpp"
#include "heron/formula.hpp"
#include "heron/selmer.hpp"

namespace heron {

using Json = nlohmann::ordered_json;

/// One local verdict in printable form.
struct VerdictSummary {
  std::string place;
  std::string status;
  std::string decided_by;  // candidate whose torsor was solved for this class
  std::string evidence;    // witness, certificate or obstruction

  bool operator==(const VerdictSummary&) const = default;
};

struct PairVerdicts {
  DescentPair pair;
  bool solvable = false;
  std::vector<VerdictSummary> verdicts;

  bool operator==(const PairVerdicts&) const = default;
};

struct AnalysisReport {
  std::uint64_t n = 0;
  Parity parity = Parity::odd;
  std::uint64_t q = 0;
  OmegaCounts omega;
  int selmer_rank = 0;
  std::uint64_t selmer_size = 0;
  int k = 0;
  std::vector<DescentPair> generators;
  int formula_rank = 0;
  std::vector<DescentPair> formula_family;
  std::string formula_case;
  int formula_span_rank = 0;
  bool formula_discrepancy = false;
  bool agreement = false;
  std::optional<std::vector<PairVerdicts>> per_place_verdicts;

  bool operator==(const AnalysisReport&) const = default;
};

struct AnalyzeOptions {
  bool verbose_local = false;
  std::optional<int> max_level;
  unsigned jobs = 1;
};

AnalysisReport make_report(const SelmerGroup& group, bool verbose_local);
AnalysisReport analyze(std::uint64_t n, const AnalyzeOptions& options = {});

/// Integers above 2^53 are written as decimal strings.
Json to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const Json& j);
std::string format_text(const AnalysisReport& report);

// ---------------------------------------------------------------------------

/// Whether n is square-free with n^2 + 1 prime (n even) or twice a prime
/// (n odd).
bool satisfies_hypotheses(std::uint64_t n);

struct SearchItem {
  std::uint64_t n = 0;
  std::optional<AnalysisReport> report;
  std::string error_kind;  // "budget" or "internal" when report is empty
  std::string error;
};

/// Every qualifying n in [lo, hi], ascending. Failures on one n are kept
/// inline and the scan continues.
void search(std::uint64_t lo, std::uint64_t hi, std::optional<Parity> parity, unsigned jobs,
            const std::function<void(const SearchItem&)>& emit);
std::vector<SearchItem> search(std::uint64_t lo, std::uint64_t hi, std::optional<Parity> parity, unsigned jobs = 1);
Json to_json(const SearchItem& item);

// ---------------------------------------------------------------------------

/// A documented error in a printed table row.
struct Correction {
  std::string field;  // "q" or "generator"
  std::string printed;
  std::string corrected;
  std::string reason;
};

struct TableRow {
  std::vector<std::uint64_t> factors;  // as printed
  std::uint64_t q_claimed = 0;
  int rank_claimed = 0;
  std::vector<DescentPair> generators_claimed;
  std::vector<Correction> corrections;

  std::uint64_t n() const;
};

/// The twenty examples, exactly as printed.
const std::vector<TableRow>& table_rows();

enum class RowStatus { pass, pass_with_correction, fail };
std::string to_string(RowStatus s);

struct RowResult {
  std::uint64_t n = 0;
  RowStatus status = RowStatus::fail;
  std::uint64_t q = 0;
  int rank = 0;
  std::vector<DescentPair> generators;
  std::vector<std::string> notes;  // corrections applied, or the diff
};

RowResult verify_row(const TableRow& row, unsigned jobs = 1);
std::vector<RowResult> verify_table(unsigned jobs = 1);
Json to_json(const RowResult& row);

// ---------------------------------------------------------------------------

/// Outcome of one property suite over the qualifying n up to a bound.
struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::vector<std::string> violations;

  bool passed() const { return violations.empty() && checks > 0; }
};

/// Primes of n = 3, 7 (mod 8) dividing b1 obstruct at that prime, and (1, q)
/// is obstructed at primes of n = 5 (mod 8). Odd n only.
SuiteResult suite_prime_obstructions(std::uint64_t bound, unsigned jobs = 1);
/// Every pair of the formula's generating family is everywhere locally
/// solvable.
SuiteResult suite_family_solvable(std::uint64_t bound, unsigned jobs = 1);
/// (p/q) = -1 for p = 5 (mod 8) and +1 for p = 1 (mod 8), p | n, n odd.
SuiteResult suite_symbol_identity(std::uint64_t bound);

std::vector<SuiteResult> selftest(std::uint64_t bound = 5000, unsigned jobs = 1);
Json to_json(const SuiteResult& suite);

Json pair_json(const DescentPair& p);
DescentPair pair_from_json(const Json& j);

}  // namespace heron
