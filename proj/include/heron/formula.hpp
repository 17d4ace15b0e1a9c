#pragma once

#include <string>
#include <vector>

#include "heron/curve.hpp"

namespace heron {

enum class FormulaCase { odd_no5, odd_with5, even };

std::string to_string(FormulaCase c);

/// Closed-form 2-Selmer rank in terms of the counts of primes of n by
/// residue mod 8, with the generating family used to derive it.
struct FormulaPrediction {
  bool applicable = false;
  int rank = 0;
  std::vector<DescentPair> generator_family;
  FormulaCase case_tag = FormulaCase::odd_no5;
  // F_2 rank of the family modulo the torsion image. Differs from `rank`
  // only in the odd case with three or more primes = 5 (mod 8), where the
  // products t_i t_j are dependent.
  int span_rank = 0;
  bool discrepancy = false;
};

/// Throws NotApplicable unless n^2 + 1 is (twice) a prime and n is
/// square-free.
FormulaPrediction predict(const HeronianCurve& curve);
FormulaPrediction predict(std::uint64_t n);

OmegaCounts omega_counts(const FactoredInteger& n);

}  // namespace heron
