// Property suites over every qualifying n up to a bound. Each check calls
// the local solver directly rather than going through compute_selmer.

#include <atomic>
#include <map>
#include <thread>

#include "heron/report.hpp"

namespace heron {

namespace {

std::vector<HeronianCurve> instances(std::uint64_t bound, std::optional<Parity> parity) {
  std::vector<HeronianCurve> out;
  for (std::uint64_t n = 2; n <= bound; ++n) {
    if (parity && (n % 2 == 1) != (*parity == Parity::odd)) continue;
    if (satisfies_hypotheses(n)) out.push_back(build_curve(n));
  }
  return out;
}

// Runs check(curve, result) over the curves on `jobs` threads, merging the
// per-curve results in curve order.
template <typename Check>
void over_curves(const std::vector<HeronianCurve>& curves, unsigned jobs, SuiteResult& suite, Check&& check) {
  std::vector<SuiteResult> parts(curves.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < curves.size(); i = next++) {
      try {
        check(curves[i], parts[i]);
      } catch (const std::exception& e) {
        parts[i].violations.push_back("n=" + std::to_string(curves[i].n()) + ": " + e.what());
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& part : parts) {
    suite.checks += part.checks;
    suite.violations.insert(suite.violations.end(), part.violations.begin(), part.violations.end());
  }
}

}  // namespace

SuiteResult suite_prime_obstructions(std::uint64_t bound, unsigned jobs) {
  SuiteResult suite{"prime obstructions: p = 3,7 (mod 8) dividing b1; (1,q) at p = 5 (mod 8)", 0, {}};
  over_curves(instances(bound, Parity::odd), jobs, suite, [](const HeronianCurve& curve, SuiteResult& out) {
    const auto n = std::to_string(curve.n());
    const auto candidates = candidate_pairs(curve);
    for (auto p : curve.odd_primes()) {
      const Place place{p};
      if (p % 8 == 3 || p % 8 == 7) {
        // The verdict at p depends only on the class of the pair in Q_p, so
        // one torsor per class covers every candidate.
        std::map<std::uint32_t, DescentPair> classes;
        for (const auto& pair : candidates) {
          if (pair.b1 % static_cast<i128>(p) == 0) classes.try_emplace(local_pair_class(pair, place), pair);
        }
        for (const auto& [cls, pair] : classes) {
          ++out.checks;
          const auto v = locally_solvable(space_for(curve, pair), p);
          if (v.status != Status::insolvable) {
            out.violations.push_back("n=" + n + ": " + to_string(pair) + " is " + to_string(v.status) + " at " +
                                     std::to_string(p));
          }
        }
      }
      if (p % 8 == 5) {
        ++out.checks;
        const DescentPair pair{1, static_cast<i128>(curve.q())};
        const auto v = locally_solvable(space_for(curve, pair), p);
        if (v.status != Status::insolvable) {
          out.violations.push_back("n=" + n + ": (1,q) is " + to_string(v.status) + " at " + std::to_string(p));
        }
      }
    }
  });
  return suite;
}

SuiteResult suite_family_solvable(std::uint64_t bound, unsigned jobs) {
  SuiteResult suite{"formula generating family is everywhere locally solvable", 0, {}};
  over_curves(instances(bound, std::nullopt), jobs, suite, [](const HeronianCurve& curve, SuiteResult& out) {
    for (const auto& pair : predict(curve).generator_family) {
      ++out.checks;
      const auto result = everywhere_locally_solvable(curve, pair);
      if (!result.solvable) {
        out.violations.push_back("n=" + std::to_string(curve.n()) + ": " + to_string(pair) + " fails at " +
                                 to_string(result.verdicts.back().place));
      }
    }
  });
  return suite;
}

SuiteResult suite_symbol_identity(std::uint64_t bound) {
  SuiteResult suite{"(p/q) = -1 for p = 5 and +1 for p = 1 (mod 8), odd n", 0, {}};
  for (const auto& curve : instances(bound, Parity::odd)) {
    for (auto p : curve.odd_primes()) {
      int expected = 0;
      if (p % 8 == 5) expected = -1;
      if (p % 8 == 1) expected = 1;
      if (expected == 0) continue;
      ++suite.checks;
      const int symbol = jacobi(static_cast<i128>(p), curve.q());
      if (symbol != expected) {
        suite.violations.push_back("n=" + std::to_string(curve.n()) + ": (" + std::to_string(p) + "/" +
                                   std::to_string(curve.q()) + ") = " + std::to_string(symbol));
      }
    }
  }
  return suite;
}

std::vector<SuiteResult> selftest(std::uint64_t bound, unsigned jobs) {
  return {suite_prime_obstructions(bound, jobs), suite_family_solvable(bound, jobs), suite_symbol_identity(bound)};
}

Json to_json(const SuiteResult& suite) {
  return Json{{"name", suite.name},
              {"checks", suite.checks},
              {"violations", suite.violations},
              {"passed", suite.passed()}};
}

}  // namespace heron
