#include "heron/selmer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <set>
#include <thread>

namespace heron {

namespace {

// Runs task(i) for i in [0, count) on up to `jobs` threads. If tasks throw,
// the exception of the smallest index is rethrown so failures do not depend
// on scheduling.
template <typename Task>
void parallel_for(std::size_t count, unsigned jobs, Task&& task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max(1u, jobs), count);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Gaussian elimination over F_2 on bit masks.
class XorBasis {
 public:
  bool insert(std::uint64_t v) {
    for (auto b : rows_) v = std::min(v, v ^ b);
    if (v == 0) return false;
    rows_.push_back(v);
    std::sort(rows_.rbegin(), rows_.rend());
    return true;
  }
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  std::vector<std::uint64_t> rows_;  // distinct leading bits, descending
};

int log2_exact(std::size_t size) {
  if (size == 0 || (size & (size - 1)) != 0) return -1;
  int k = 0;
  while ((std::size_t{1} << k) < size) ++k;
  return k;
}

bool is_coset_representative(const HeronianCurve& curve, const DescentPair& p) {
  if (p.b1 <= 0 || p.b2 <= 0) return false;
  if (curve.parity() == Parity::odd) return p.b2 % 2 != 0;
  return p.b2 % static_cast<i128>(curve.q()) != 0;
}

void check_group(const HeronianCurve& curve, const std::vector<DescentPair>& elements, int& k, int& rank) {
  const SquareClassBasis basis(curve);
  std::set<std::uint64_t> masks;
  for (const auto& e : elements) masks.insert(basis.pair_mask(e));
  for (auto a : masks) {
    for (auto b : masks) {
      if (!masks.contains(a ^ b)) {
        throw ClosureViolation("Selmer set not closed: " + to_string(basis.from_pair_mask(a)) + " * " +
                               to_string(basis.from_pair_mask(b)) + " is missing");
      }
    }
  }
  XorBasis torsion;
  for (const auto& t : torsion_image(curve)) {
    if (!masks.contains(basis.pair_mask(t))) {
      throw ClosureViolation("torsion class " + to_string(t) + " is not everywhere locally solvable");
    }
    torsion.insert(basis.pair_mask(t));
  }
  const int size_log = log2_exact(masks.size());
  if (size_log < 0) throw ClosureViolation("Selmer set size " + std::to_string(masks.size()) + " is not a power of 2");
  k = torsion.rank();
  rank = size_log - k;
}

}  // namespace

DescentPair coset_representative(const HeronianCurve& curve, const DescentPair& pair) {
  if ((pair.b1 > 0) != (pair.b2 > 0)) throw DomainError("coset_representative: b1 b2 must be positive");
  const SquareClassBasis basis(curve);
  DescentPair p = basis.canonical(pair);
  if (p.b1 < 0) p = basis.multiply(p, {-1, -1});
  const i128 t = curve.parity() == Parity::odd ? 2 * static_cast<i128>(curve.q()) : static_cast<i128>(curve.q());
  if (!is_coset_representative(curve, p)) p = basis.multiply(p, {1, t});
  return p;
}

int quotient_rank(const HeronianCurve& curve, const std::vector<DescentPair>& pairs) {
  const SquareClassBasis basis(curve);
  XorBasis span;
  for (const auto& t : torsion_image(curve)) span.insert(basis.pair_mask(t));
  const int base = span.rank();
  for (const auto& p : pairs) span.insert(basis.pair_mask(p));
  return span.rank() - base;
}

std::vector<DescentPair> canonical_generators(const SelmerGroup& group) {
  const SquareClassBasis basis(group.curve);
  std::set<DescentPair> reps;
  for (const auto& e : group.elements) reps.insert(coset_representative(group.curve, e));
  XorBasis span;
  for (const auto& t : torsion_image(group.curve)) span.insert(basis.pair_mask(t));
  std::vector<DescentPair> out;
  for (const auto& r : reps) {
    if (span.insert(basis.pair_mask(r))) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const DescentPair& a, const DescentPair& b) {
    return std::pair(a.b2, a.b1) < std::pair(b.b2, b.b1);
  });
  return out;
}

SelmerGroup compute_selmer(const HeronianCurve& curve, const LocalSolveConfig& config,
                           const SelmerOptions& options) {
  SelmerGroup group{curve, {}, {}, 0, 0, places_to_check(curve, {1, 1}), {}};
  const std::vector<DescentPair> candidates = candidate_pairs(curve);
  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    group.records.push_back({candidates[i], true, {}, {}});
    if (!options.torsion_coset_pruning || is_coset_representative(curve, candidates[i])) alive.push_back(i);
  }

  for (const Place& place : group.places) {
    // One torsor per local class: solvability depends only on the classes of
    // b1 and b2 in Q_l*/Q_l*^2.
    std::map<std::uint32_t, std::size_t> slot_of;
    std::vector<std::size_t> representatives;
    std::vector<std::size_t> slot(alive.size());
    for (std::size_t a = 0; a < alive.size(); ++a) {
      const auto cls = local_pair_class(candidates[alive[a]], place);
      auto [it, inserted] = slot_of.try_emplace(cls, representatives.size());
      if (inserted) representatives.push_back(alive[a]);
      slot[a] = it->second;
    }
    std::vector<LocalVerdict> verdicts(representatives.size());
    parallel_for(representatives.size(), options.jobs, [&](std::size_t r) {
      verdicts[r] = locally_solvable(space_for(curve, candidates[representatives[r]]), place.prime, config);
      if (verdicts[r].status == Status::unknown) {
        throw BudgetExhausted(place.prime, verdicts[r].level_reached,
                              "no certificate for " + to_string(candidates[representatives[r]]) + " at " +
                                  to_string(place) + " within level " + std::to_string(verdicts[r].level_reached));
      }
    });
    std::vector<std::size_t> still;
    for (std::size_t a = 0; a < alive.size(); ++a) {
      auto& rec = group.records[alive[a]];
      const LocalVerdict& v = verdicts[slot[a]];
      rec.verdicts.push_back(v);
      rec.decided_by.push_back(candidates[representatives[slot[a]]]);
      if (v.status == Status::solvable) {
        still.push_back(alive[a]);
      } else {
        rec.solvable = false;
      }
    }
    alive = std::move(still);
  }

  if (options.torsion_coset_pruning) {
    const SquareClassBasis basis(curve);
    std::set<DescentPair> kept;
    for (auto i : alive) kept.insert(candidates[i]);
    for (auto& rec : group.records) {
      const auto& p = rec.pair;
      if (is_coset_representative(curve, p)) continue;
      rec.solvable = (p.b1 > 0) == (p.b2 > 0) && kept.contains(coset_representative(curve, p));
    }
  }
  for (const auto& rec : group.records) {
    if (rec.solvable) group.elements.push_back(rec.pair);
  }
  std::sort(group.elements.begin(), group.elements.end());
  check_group(curve, group.elements, group.k, group.rank);
  group.generators = canonical_generators(group);
  return group;
}

int selmer_rank(const HeronianCurve& curve, const LocalSolveConfig& config, const SelmerOptions& options) {
  return compute_selmer(curve, config, options).rank;
}

}  // namespace heron
