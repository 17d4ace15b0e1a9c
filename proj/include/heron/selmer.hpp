#pragma once

#include <cstdint>
#include <vector>

#include "heron/curve.hpp"
#include "heron/localsolve.hpp"

namespace heron {

struct SelmerOptions {
  unsigned jobs = 1;
  // Decide only the coset representatives b1 > 0, b2 > 0 (b2 odd for odd n,
  // q not dividing b2 for even n) and extend by the torsion image. The
  // resulting group is identical.
  bool torsion_coset_pruning = false;
};

/// Local evidence for one candidate: verdicts in place order, up to and
/// including the first insolvable place. A verdict is computed once per
/// local square class and shared by every candidate in that class;
/// `decided_by` names the candidate whose torsor was actually solved.
struct CandidateRecord {
  DescentPair pair;
  bool solvable = false;
  std::vector<LocalVerdict> verdicts;
  std::vector<DescentPair> decided_by;
};

struct SelmerGroup {
  HeronianCurve curve;
  std::vector<DescentPair> elements;  // sorted
  // Non-torsion generators, as canonical_generators returns them.
  std::vector<DescentPair> generators;
  int k = 0;
  int rank = 0;
  std::vector<Place> places;
  std::vector<CandidateRecord> records;  // candidate order
};

/// Full 2-descent. Throws BudgetExhausted when some verdict stays unknown and
/// ClosureViolation when the solvable set is not a group containing the
/// torsion image.
SelmerGroup compute_selmer(const HeronianCurve& curve, const LocalSolveConfig& config = {},
                           const SelmerOptions& options = {});

int selmer_rank(const HeronianCurve& curve, const LocalSolveConfig& config = {},
                const SelmerOptions& options = {});

/// The coset representative of `pair` modulo the torsion image described in
/// SelmerOptions, for pairs with b1 b2 > 0.
DescentPair coset_representative(const HeronianCurve& curve, const DescentPair& pair);

/// Greedy basis of elements / torsion image: coset representatives are
/// scanned by ascending (b1, b2) and kept when independent. Returned sorted
/// by (b2, b1).
std::vector<DescentPair> canonical_generators(const SelmerGroup& group);

/// Rank over F_2 of the span of `pairs` modulo the torsion image.
int quotient_rank(const HeronianCurve& curve, const std::vector<DescentPair>& pairs);

}  // namespace heron
