#include "heron/report.hpp"

#include <iomanip>
#include <limits>
#include <sstream>

namespace heron {

namespace {

constexpr i128 kSafeInteger = i128{1} << 53;

Json int_json(i128 v) {
  if (v > kSafeInteger || v < -kSafeInteger) return to_string(v);
  return static_cast<std::int64_t>(v);
}

i128 int_from_json(const Json& j) {
  if (j.is_string()) return parse_i128(j.get<std::string>());
  if (j.is_number_unsigned()) return static_cast<i128>(j.get<std::uint64_t>());
  return static_cast<i128>(j.get<std::int64_t>());
}

std::uint64_t u64_from_json(const Json& j) {
  const i128 v = int_from_json(j);
  if (v < 0 || v > static_cast<i128>(std::numeric_limits<std::uint64_t>::max())) {
    throw DomainError("JSON integer out of range");
  }
  return static_cast<std::uint64_t>(v);
}

Json pairs_json(const std::vector<DescentPair>& pairs) {
  Json out = Json::array();
  for (const auto& p : pairs) out.push_back(pair_json(p));
  return out;
}

std::vector<DescentPair> pairs_from_json(const Json& j) {
  std::vector<DescentPair> out;
  for (const auto& p : j) out.push_back(pair_from_json(p));
  return out;
}

std::string point_text(const std::array<u128, 4>& z) {
  return "(" + to_string(z[0]) + ":" + to_string(z[1]) + ":" + to_string(z[2]) + ":" + to_string(z[3]) + ")";
}

std::string evidence(const LocalVerdict& v) {
  if (v.real_certificate) return *v.real_certificate;
  if (v.witness) {
    const auto& w = *v.witness;
    return "point " + point_text(w.point) + " mod " + to_string(v.place) + "^" + std::to_string(w.level) +
           ", minor on columns (" + std::to_string(w.minor_columns[0]) + "," + std::to_string(w.minor_columns[1]) +
           ") has valuation " + std::to_string(w.minor_valuation);
  }
  if (!v.obstruction) return {};
  const auto& ob = *v.obstruction;
  std::string text;
  switch (ob.kind) {
    case Obstruction::Kind::real_sign:
      return ob.symbol_tag;
    case Obstruction::Kind::exhausted:
      text = "no primitive point modulo " + to_string(v.place) + "^" + std::to_string(ob.level);
      break;
    case Obstruction::Kind::local_image: {
      text = "class outside the local image spanned by the torsion and x =";
      for (const auto& x : ob.image_points) {
        text += " " + to_string(x.num) + (x.den == 1 ? "" : "/" + to_string(x.den));
      }
      break;
    }
  }
  if (!ob.symbol_tag.empty()) text += "; " + ob.symbol_tag;
  return text;
}

std::string pair_list_text(const std::vector<DescentPair>& pairs) {
  if (pairs.empty()) return "-";
  std::string out;
  for (const auto& p : pairs) out += (out.empty() ? "" : ",") + to_string(p);
  return out;
}

}  // namespace

Json pair_json(const DescentPair& p) { return Json::array({int_json(p.b1), int_json(p.b2)}); }

DescentPair pair_from_json(const Json& j) { return {int_from_json(j.at(0)), int_from_json(j.at(1))}; }

AnalysisReport make_report(const SelmerGroup& group, bool verbose_local) {
  const HeronianCurve& curve = group.curve;
  AnalysisReport r;
  r.n = curve.n();
  r.parity = curve.parity();
  r.q = curve.q();
  r.omega = curve.omega();
  r.selmer_rank = group.rank;
  r.selmer_size = group.elements.size();
  r.k = group.k;
  r.generators = group.generators;
  const FormulaPrediction f = predict(curve);
  r.formula_rank = f.rank;
  r.formula_family = f.generator_family;
  r.formula_case = to_string(f.case_tag);
  r.formula_span_rank = f.span_rank;
  r.formula_discrepancy = f.discrepancy;
  r.agreement = f.applicable && r.selmer_rank == r.formula_rank;
  if (verbose_local) {
    std::vector<PairVerdicts> all;
    for (const auto& rec : group.records) {
      PairVerdicts pv{rec.pair, rec.solvable, {}};
      for (std::size_t i = 0; i < rec.verdicts.size(); ++i) {
        const auto& v = rec.verdicts[i];
        pv.verdicts.push_back({to_string(v.place), to_string(v.status), to_string(rec.decided_by[i]), evidence(v)});
      }
      all.push_back(std::move(pv));
    }
    r.per_place_verdicts = std::move(all);
  }
  return r;
}

AnalysisReport analyze(std::uint64_t n, const AnalyzeOptions& options) {
  const HeronianCurve curve = build_curve(n);
  LocalSolveConfig config;
  config.global_max_level = options.max_level;
  config.verbose_witness = options.verbose_local;
  return make_report(compute_selmer(curve, config, {options.jobs, false}), options.verbose_local);
}

Json to_json(const AnalysisReport& r) {
  Json j;
  j["n"] = int_json(r.n);
  j["parity"] = to_string(r.parity);
  j["q"] = int_json(r.q);
  j["omega"] = Json{{"1", r.omega[1]}, {"3", r.omega[3]}, {"5", r.omega[5]}, {"7", r.omega[7]}};
  j["selmer_rank"] = r.selmer_rank;
  j["selmer_size"] = int_json(r.selmer_size);
  j["k"] = r.k;
  j["generators"] = pairs_json(r.generators);
  j["formula_rank"] = r.formula_rank;
  j["formula_family"] = pairs_json(r.formula_family);
  j["formula_case"] = r.formula_case;
  j["formula_span_rank"] = r.formula_span_rank;
  j["formula_discrepancy"] = r.formula_discrepancy;
  j["agreement"] = r.agreement;
  if (r.per_place_verdicts) {
    Json list = Json::array();
    for (const auto& pv : *r.per_place_verdicts) {
      Json verdicts = Json::array();
      for (const auto& v : pv.verdicts) {
        verdicts.push_back(
            Json{{"place", v.place}, {"status", v.status}, {"decided_by", v.decided_by}, {"evidence", v.evidence}});
      }
      list.push_back(Json{{"pair", pair_json(pv.pair)}, {"solvable", pv.solvable}, {"verdicts", verdicts}});
    }
    j["per_place_verdicts"] = list;
  }
  return j;
}

AnalysisReport report_from_json(const Json& j) {
  AnalysisReport r;
  r.n = u64_from_json(j.at("n"));
  r.parity = j.at("parity").get<std::string>() == "even" ? Parity::even : Parity::odd;
  r.q = u64_from_json(j.at("q"));
  for (int residue : {1, 3, 5, 7}) r.omega[residue] = j.at("omega").at(std::to_string(residue)).get<int>();
  r.selmer_rank = j.at("selmer_rank").get<int>();
  r.selmer_size = u64_from_json(j.at("selmer_size"));
  r.k = j.at("k").get<int>();
  r.generators = pairs_from_json(j.at("generators"));
  r.formula_rank = j.at("formula_rank").get<int>();
  r.formula_family = pairs_from_json(j.at("formula_family"));
  r.formula_case = j.at("formula_case").get<std::string>();
  r.formula_span_rank = j.at("formula_span_rank").get<int>();
  r.formula_discrepancy = j.at("formula_discrepancy").get<bool>();
  r.agreement = j.at("agreement").get<bool>();
  if (j.contains("per_place_verdicts")) {
    std::vector<PairVerdicts> all;
    for (const auto& pj : j.at("per_place_verdicts")) {
      PairVerdicts pv{pair_from_json(pj.at("pair")), pj.at("solvable").get<bool>(), {}};
      for (const auto& v : pj.at("verdicts")) {
        pv.verdicts.push_back({v.at("place").get<std::string>(), v.at("status").get<std::string>(),
                               v.at("decided_by").get<std::string>(), v.at("evidence").get<std::string>()});
      }
      all.push_back(std::move(pv));
    }
    r.per_place_verdicts = std::move(all);
  }
  return r;
}

std::string format_text(const AnalysisReport& r) {
  std::ostringstream out;
  const auto row = [&](const std::string& key, const std::string& value) {
    out << std::left << std::setw(20) << key << value << '\n';
  };
  row("n", std::to_string(r.n));
  row("parity", to_string(r.parity));
  row("q", std::to_string(r.q));
  row("omega (1,3,5,7)", std::to_string(r.omega[1]) + " " + std::to_string(r.omega[3]) + " " +
                             std::to_string(r.omega[5]) + " " + std::to_string(r.omega[7]));
  row("selmer rank", std::to_string(r.selmer_rank));
  row("selmer size", std::to_string(r.selmer_size) + " = 2^(" + std::to_string(r.k) + " + " +
                         std::to_string(r.selmer_rank) + ")");
  row("generators", pair_list_text(r.generators));
  row("formula", r.formula_case + ", rank " + std::to_string(r.formula_rank) + ", span " +
                     std::to_string(r.formula_span_rank) + (r.formula_discrepancy ? " (discrepancy)" : ""));
  row("formula family", pair_list_text(r.formula_family));
  row("agreement", r.agreement ? "yes" : "no");
  if (r.per_place_verdicts) {
    out << '\n';
    for (const auto& pv : *r.per_place_verdicts) {
      out << to_string(pv.pair) << (pv.solvable ? "  in Selmer" : "  rejected") << '\n';
      for (const auto& v : pv.verdicts) {
        out << "  " << std::left << std::setw(12) << v.place << std::setw(12) << v.status << v.evidence;
        if (v.decided_by != to_string(pv.pair)) out << " [via " << v.decided_by << "]";
        out << '\n';
      }
    }
  }
  return out.str();
}

bool satisfies_hypotheses(std::uint64_t n) {
  if (n < 2 || n > std::numeric_limits<std::uint32_t>::max()) return false;
  const std::uint64_t n2p1 = n * n + 1;
  if (!is_prime(n % 2 == 1 ? n2p1 / 2 : n2p1)) return false;
  try {
    factor_squarefree(n);
  } catch (const NotSquarefree&) {
    return false;
  }
  return true;
}

void search(std::uint64_t lo, std::uint64_t hi, std::optional<Parity> parity, unsigned jobs,
            const std::function<void(const SearchItem&)>& emit) {
  if (lo < 2 || lo > hi) throw DomainError("search requires 2 <= lo <= hi");
  for (std::uint64_t n = lo; n <= hi && n != 0; ++n) {
    if (parity && (n % 2 == 1) != (*parity == Parity::odd)) continue;
    if (!satisfies_hypotheses(n)) continue;
    SearchItem item;
    item.n = n;
    try {
      item.report = analyze(n, {false, std::nullopt, jobs});
    } catch (const BudgetExhausted& e) {
      item.error_kind = "budget";
      item.error = e.what();
    } catch (const std::exception& e) {
      item.error_kind = "internal";
      item.error = e.what();
    }
    emit(item);
  }
}

std::vector<SearchItem> search(std::uint64_t lo, std::uint64_t hi, std::optional<Parity> parity, unsigned jobs) {
  std::vector<SearchItem> items;
  search(lo, hi, parity, jobs, [&](const SearchItem& item) { items.push_back(item); });
  return items;
}

Json to_json(const SearchItem& item) {
  if (item.report) return to_json(*item.report);
  return Json{{"n", int_json(item.n)}, {"error", item.error_kind}, {"message", item.error}};
}

}  // namespace heron
