#include "heron/formula.hpp"

#include "heron/selmer.hpp"

namespace heron {

std::string to_string(FormulaCase c) {
  switch (c) {
    case FormulaCase::odd_no5:
      return "odd_no5";
    case FormulaCase::odd_with5:
      return "odd_with5";
    case FormulaCase::even:
      return "even";
  }
  return "odd_no5";
}

OmegaCounts omega_counts(const FactoredInteger& n) {
  OmegaCounts counts;
  for (auto p : n.primes) {
    if (p != 2) ++counts[static_cast<int>(p % 8)];
  }
  return counts;
}

FormulaPrediction predict(const HeronianCurve& curve) {
  FormulaPrediction out;
  out.applicable = true;
  const OmegaCounts omega = omega_counts(curve.factored_n());
  std::vector<std::uint64_t> ones;
  std::vector<std::uint64_t> fives;
  for (auto p : curve.odd_primes()) {
    if (p % 8 == 1) ones.push_back(p);
    if (p % 8 == 5) fives.push_back(p);
  }
  for (auto p : ones) out.generator_family.push_back({static_cast<i128>(p), 1});
  if (curve.parity() == Parity::even) {
    out.case_tag = FormulaCase::even;
    for (auto t : fives) out.generator_family.push_back({static_cast<i128>(t), 1});
    out.rank = omega[1] + omega[5];
  } else if (fives.empty()) {
    out.case_tag = FormulaCase::odd_no5;
    out.generator_family.push_back({1, static_cast<i128>(curve.q())});
    out.rank = omega[1] + 1;
  } else {
    out.case_tag = FormulaCase::odd_with5;
    for (std::size_t i = 0; i < fives.size(); ++i) {
      for (std::size_t j = i + 1; j < fives.size(); ++j) {
        out.generator_family.push_back({static_cast<i128>(fives[i]) * static_cast<i128>(fives[j]), 1});
      }
    }
    out.rank = omega[1] + omega[5] * (omega[5] - 1) / 2;
  }
  out.span_rank = quotient_rank(curve, out.generator_family);
  out.discrepancy = out.span_rank != out.rank;
  return out;
}

FormulaPrediction predict(std::uint64_t n) {
  try {
    return predict(build_curve(n));
  } catch (const HypothesisFailed& e) {
    throw NotApplicable(e.what());
  } catch (const NotSquarefree& e) {
    throw NotApplicable(e.what());
  }
}

}  // namespace heron
