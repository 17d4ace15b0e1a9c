#include "heron/localsolve.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "local_internal.hpp"

namespace heron {

std::string to_string(Place place) { return place.is_real() ? "inf" : std::to_string(place.prime); }

std::string to_string(Status status) {
  switch (status) {
    case Status::solvable:
      return "solvable";
    case Status::insolvable:
      return "insolvable";
    case Status::unknown:
      return "unknown";
  }
  return "unknown";
}

std::optional<i128> HomogeneousSpace::b1b2() const {
  i128 product;
  if (__builtin_mul_overflow(b1, b2, &product)) return std::nullopt;
  return product;
}

namespace {

std::string term(i128 coefficient, const std::string& var, bool leading) {
  std::string out;
  if (coefficient < 0) {
    out += leading ? "-" : " - ";
    coefficient = -coefficient;
  } else if (!leading) {
    out += " + ";
  }
  if (coefficient != 1) out += to_string(coefficient);
  return out + var;
}

std::string b1b2_text(const HomogeneousSpace& s, bool negate) {
  if (auto p = s.b1b2()) return to_string(negate ? -*p : *p);
  return std::string(negate ? "-" : "") + "(" + to_string(s.b1) + ")*(" + to_string(s.b2) + ")";
}

}  // namespace

std::string HomogeneousSpace::affine_string() const {
  std::string first = term(b1, "z1^2", true) + term(-b2, "z2^2", false) + " = 1";
  std::string second = term(b1, "z1^2", true);
  if (auto p = b1b2()) {
    second += term(-*p, "z3^2", false);
  } else {
    second += " + " + b1b2_text(*this, true) + "z3^2";
  }
  second += " = -" + to_string(n_squared());
  return "{" + first + ", " + second + "}";
}

std::string HomogeneousSpace::projective_string() const {
  std::string first = "-z0^2" + term(b1, "z1^2", false) + term(-b2, "z2^2", false) + " = 0";
  std::string second = to_string(n_squared()) + "z0^2" + term(b1, "z1^2", false);
  if (auto p = b1b2()) {
    second += term(-*p, "z3^2", false);
  } else {
    second += " + " + b1b2_text(*this, true) + "z3^2";
  }
  return "{" + first + ", " + second + " = 0}";
}

HomogeneousSpace space_for(const HeronianCurve& curve, const DescentPair& pair) {
  if (pair.b1 == 0 || pair.b2 == 0) throw DomainError("descent pair coordinates must be nonzero");
  return {pair.b1, pair.b2, curve.n()};
}

LocalVerdict real_solvable(const HomogeneousSpace& space) {
  LocalVerdict verdict;
  verdict.place = Place::real();
  const bool pos1 = space.b1 > 0;
  const bool pos2 = space.b2 > 0;
  if (pos1 && pos2) {
    verdict.status = Status::solvable;
    verdict.real_certificate = "b1 > 0, b2 > 0: x = b1 z1^2 >= 1 gives x - 1 = b2 z2^2 >= 0 and x + n^2 = b1 b2 z3^2 > 0";
  } else if (!pos1 && !pos2) {
    verdict.status = Status::solvable;
    verdict.real_certificate =
        "b1 < 0, b2 < 0: -n^2 < x = b1 z1^2 < 0 gives x - 1 = b2 z2^2 < 0 and x + n^2 = b1 b2 z3^2 > 0";
  } else {
    verdict.status = Status::insolvable;
    Obstruction ob;
    ob.kind = Obstruction::Kind::real_sign;
    ob.symbol_tag = !pos1 ? "b1 < 0, b2 > 0: b1 z1^2 - b2 z2^2 <= 0 cannot equal 1"
                          : "b1 > 0, b2 < 0: b1 z1^2 - b1 b2 z3^2 >= 0 cannot equal -n^2";
    verdict.obstruction = std::move(ob);
  }
  return verdict;
}

std::vector<Place> places_to_check(const HeronianCurve& curve, const DescentPair& pair) {
  std::set<std::uint64_t> primes{2, 3, curve.q()};
  for (auto p : curve.factored_n().primes) primes.insert(p);
  for (i128 b : {pair.b1, pair.b2}) {
    if (b == 0) throw DomainError("descent pair coordinates must be nonzero");
    u128 rest = b < 0 ? static_cast<u128>(-(b + 1)) + 1 : static_cast<u128>(b);
    for (auto p : curve.support_primes()) {
      while (rest % p == 0) rest /= p;
    }
    if (rest == 1) continue;
    if (rest > std::numeric_limits<std::uint64_t>::max()) {
      throw DomainError("cannot factor descent pair coordinate " + to_string(b));
    }
    // Pairs outside the descent support: factor the remaining cofactor
    // without insisting on square-freeness.
    auto m = static_cast<std::uint64_t>(rest);
    for (std::uint64_t d = 2; d * d <= m && d < (1u << 20); ++d) {
      if (m % d == 0) {
        primes.insert(d);
        while (m % d == 0) m /= d;
      }
    }
    if (m > 1) {
      for (auto p : factor_squarefree(m).primes) primes.insert(p);
    }
  }
  std::vector<Place> places{Place::real()};
  for (auto p : primes) places.push_back({p});
  return places;
}

LocalVerdict locally_solvable(const HomogeneousSpace& space, std::uint64_t l, const LocalSolveConfig& config) {
  if (l == 0) return real_solvable(space);
  if (!is_prime(l)) throw DomainError("locally_solvable: " + std::to_string(l) + " is not prime");
  if (l == 2 || l <= config.engine_prime_limit) return detail::survivor_search(space, l, config);
  return detail::image_decision(space, l, config);
}

EverywhereResult everywhere_locally_solvable(const HeronianCurve& curve, const DescentPair& pair,
                                             const LocalSolveConfig& config) {
  const HomogeneousSpace space = space_for(curve, pair);
  EverywhereResult result;
  result.solvable = true;
  for (const Place& place : places_to_check(curve, pair)) {
    LocalVerdict verdict = locally_solvable(space, place.prime, config);
    if (verdict.status == Status::unknown) {
      throw BudgetExhausted(place.prime, verdict.level_reached,
                            "no certificate for " + to_string(pair) + " at " + to_string(place) +
                                " within level " + std::to_string(verdict.level_reached));
    }
    const bool ok = verdict.status == Status::solvable;
    result.verdicts.push_back(std::move(verdict));
    if (!ok) {
      result.solvable = false;
      break;
    }
  }
  return result;
}

}  // namespace heron
