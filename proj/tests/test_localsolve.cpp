#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "heron/localsolve.hpp"
#include "oracles.hpp"

using namespace heron;

namespace {

std::vector<std::uint64_t> place_primes(const std::vector<Place>& places) {
  std::vector<std::uint64_t> out;
  for (const auto& p : places) out.push_back(p.prime);
  return out;
}

LocalSolveConfig image_everywhere() {
  LocalSolveConfig c;
  c.engine_prime_limit = 2;
  return c;
}

LocalSolveConfig engine_up_to(std::uint64_t l) {
  LocalSolveConfig c;
  c.engine_prime_limit = l;
  return c;
}

}  // namespace

TEST_CASE("space_for substitutes the pair") {
  CHECK(space_for(build_curve(15), {1, 1}).affine_string() == "{z1^2 - z2^2 = 1, z1^2 - z3^2 = -225}");
  CHECK(space_for(build_curve(391), {17, 1}).affine_string() == "{17z1^2 - z2^2 = 1, 17z1^2 - 17z3^2 = -152881}");
  CHECK(space_for(build_curve(130), {2, 1}).affine_string() == "{2z1^2 - z2^2 = 1, 2z1^2 - 2z3^2 = -16900}");
  CHECK(space_for(build_curve(15), {1, 1}).projective_string() ==
        "{-z0^2 + z1^2 - z2^2 = 0, 225z0^2 + z1^2 - z3^2 = 0}");
  CHECK_THROWS_AS(space_for(build_curve(15), {0, 1}), DomainError);
}

TEST_CASE("real place") {
  const auto at = [](i128 b1, i128 b2) { return real_solvable({b1, b2, 15}).status; };
  CHECK(at(-1, 1) == Status::insolvable);
  CHECK(at(-1, -1) == Status::solvable);
  CHECK(at(17, 1) == Status::solvable);
  // b1 z1^2 - b1 b2 z3^2 >= 0 when b1 > 0 > b2, so it cannot equal -n^2.
  CHECK(at(1, -1) == Status::insolvable);
  const auto v = real_solvable({-1, 1, 15});
  REQUIRE(v.obstruction.has_value());
  CHECK(v.obstruction->kind == Obstruction::Kind::real_sign);
  CHECK(real_solvable({3, 5, 15}).real_certificate.has_value());
}

TEST_CASE("places to check") {
  CHECK(place_primes(places_to_check(build_curve(15), {3, 1})) == std::vector<std::uint64_t>{0, 2, 3, 5, 113});
  CHECK(place_primes(places_to_check(build_curve(66), {1, 1})) ==
        std::vector<std::uint64_t>{0, 2, 3, 11, 4357});
  CHECK(place_primes(places_to_check(build_curve(391), {17, 1})) ==
        std::vector<std::uint64_t>{0, 2, 3, 17, 23, 76441});
  CHECK(place_primes(places_to_check(build_curve(15), {7, 1})) == std::vector<std::uint64_t>{0, 2, 3, 5, 7, 113});
}

TEST_CASE("documented local verdicts") {
  {
    const auto space = space_for(build_curve(391), {17, 1});
    const auto v = locally_solvable(space, 17, engine_up_to(17));
    REQUIRE(v.status == Status::solvable);
    REQUIRE(v.witness.has_value());
    CHECK(verify_witness(space, 17, *v.witness));
    // 17 z1^2 - z2^2 = 1 reduces to z2^2 = -1 (mod 17).
    const auto z = v.witness->point;
    CHECK((z[2] * z[2] + z[0] * z[0]) % 17 == 0);
    CHECK(locally_solvable(space, 17).status == Status::solvable);
  }
  CHECK(locally_solvable(space_for(build_curve(130), {2, 1}), 16901).status == Status::insolvable);
  {
    const auto space = space_for(build_curve(15), {1, 113});
    const auto v = locally_solvable(space, 3);
    REQUIRE(v.status == Status::solvable);
    CHECK(verify_witness(space, 3, *v.witness));
  }
  for (std::uint64_t n : {15ULL, 391ULL, 130ULL, 66ULL}) {
    const auto curve = build_curve(n);
    const auto q = static_cast<i128>(curve.q());
    for (const DescentPair pair : {DescentPair{q, 1}, DescentPair{2 * q, 3}, DescentPair{-q, -1}}) {
      CHECK(locally_solvable(space_for(curve, pair), curve.q()).status == Status::insolvable);
    }
  }
}

TEST_CASE("everywhere local solvability on documented pairs") {
  CHECK(everywhere_locally_solvable(build_curve(391), {17, 1}).solvable);
  CHECK(everywhere_locally_solvable(build_curve(391), {1, 76441}).solvable);
  const auto r = everywhere_locally_solvable(build_curve(715), {1, 255613});
  CHECK_FALSE(r.solvable);
  CHECK(r.verdicts.back().place.prime == 5);
}

TEST_CASE("obstructions tag the Legendre symbol when one explains them") {
  const auto v = locally_solvable(space_for(build_curve(130), {2, 1}), 16901);
  REQUIRE(v.obstruction.has_value());
  CHECK(v.obstruction->kind == Obstruction::Kind::local_image);
  CHECK(v.obstruction->symbol_tag == "(2/16901) = -1 with 16901 | n^2 + 1");
  CHECK(jacobi(2, 16901) == -1);
  const auto w = locally_solvable(space_for(build_curve(715), {1, 255613}), 5);
  REQUIRE(w.obstruction.has_value());
  CHECK(w.obstruction->symbol_tag == "(255613/5) = -1 with 5 | n");
}

TEST_CASE("unknown only when the level budget runs out") {
  LocalSolveConfig tight;
  tight.global_max_level = 1;
  // (17,1) at 17 needs a lift beyond level 1 because 17 divides b1.
  const auto v = locally_solvable(space_for(build_curve(391), {17, 1}), 17, [&] {
    auto c = tight;
    c.engine_prime_limit = 17;
    return c;
  }());
  CHECK(v.status == Status::unknown);
  CHECK(v.level_reached == 1);
  LocalSolveConfig capped;
  capped.survivor_cap = 2;
  CHECK_THROWS_AS(locally_solvable(space_for(build_curve(15), {3, 3}), 3, capped), BudgetExhausted);
}

TEST_CASE("verdicts match an independent local image at every small prime") {
  for (std::uint64_t n : {3ULL, 15ULL, 66ULL, 85ULL, 130ULL, 391ULL, 715ULL, 1155ULL}) {
    for (std::uint64_t l : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL}) {
      const auto image = oracle::local_image(n, l);
      REQUIRE(image.size() == (l == 2 ? 8u : 4u));
      for (auto b1 : oracle::class_representatives(l)) {
        for (auto b2 : oracle::class_representatives(l)) {
          const HomogeneousSpace space{b1, b2, n};
          const bool expected = image.contains({oracle::local_class(b1, l), oracle::local_class(b2, l)});
          const auto engine = locally_solvable(space, l, engine_up_to(31));
          INFO("n=" << n << " l=" << l << " b=(" << to_string(b1) << "," << to_string(b2) << ")");
          REQUIRE(engine.status == (expected ? Status::solvable : Status::insolvable));
          if (engine.witness) REQUIRE(verify_witness(space, l, *engine.witness));
          if (l != 2) {
            const auto by_image = locally_solvable(space, l, image_everywhere());
            REQUIRE(by_image.status == engine.status);
            if (by_image.witness) REQUIRE(verify_witness(space, l, *by_image.witness));
          }
        }
      }
    }
  }
}

TEST_CASE("local image at large primes matches the independent sampler") {
  for (std::uint64_t n : {15ULL, 391ULL, 67609ULL, 2210ULL}) {
    std::vector<std::uint64_t> primes = oracle::trial_factor(n);
    const std::uint64_t m = n * n + 1;
    primes.push_back(n % 2 ? m / 2 : m);
    for (std::uint64_t l : {37ULL, 41ULL, 101ULL, 113ULL, 1009ULL}) primes.push_back(l);
    for (auto l : primes) {
      if (l == 2) continue;
      const auto image = oracle::local_image(n, l);
      REQUIRE(image.size() == 4);
      for (auto b1 : oracle::class_representatives(l)) {
        for (auto b2 : oracle::class_representatives(l)) {
          const HomogeneousSpace space{b1, b2, n};
          const bool expected = image.contains({oracle::local_class(b1, l), oracle::local_class(b2, l)});
          const auto v = locally_solvable(space, l);
          INFO("n=" << n << " l=" << l);
          REQUIRE(v.status == (expected ? Status::solvable : Status::insolvable));
          if (v.witness) REQUIRE(verify_witness(space, l, *v.witness));
        }
      }
    }
  }
}

TEST_CASE("closed forms for the image at primes of n and at q") {
  // p | n: (b1, b2) is locally solvable iff b2 is a p-adic square class for
  // p = 1 (mod 4), and iff p divides neither b1 nor b2 for p = 3 (mod 4).
  // At q: iff b1 is a q-adic square class.
  for (std::uint64_t n = 3; n < 400; ++n) {
    if (!oracle::qualifies(n)) continue;
    std::vector<std::uint64_t> odd;
    for (auto p : oracle::trial_factor(n)) {
      if (p != 2) odd.push_back(p);
    }
    const std::uint64_t m = n * n + 1;
    const std::uint64_t q = n % 2 ? m / 2 : m;
    for (auto p : odd) {
      for (auto b1 : oracle::class_representatives(p)) {
        for (auto b2 : oracle::class_representatives(p)) {
          const bool expected = p % 4 == 1 ? oracle::is_local_square(b2, p)
                                           : b1 % static_cast<i128>(p) != 0 && b2 % static_cast<i128>(p) != 0;
          REQUIRE((locally_solvable({b1, b2, n}, p).status == Status::solvable) == expected);
        }
      }
    }
    for (auto b1 : oracle::class_representatives(q)) {
      for (auto b2 : oracle::class_representatives(q)) {
        REQUIRE((locally_solvable({b1, b2, n}, q).status == Status::solvable) == oracle::is_local_square(b1, q));
      }
    }
  }
}

TEST_CASE("survivor sets match brute force on small moduli") {
  std::mt19937_64 rng(7);
  const std::vector<std::int64_t> coefficients{1, -1, 2, -2, 3, -3, 5, -6, 7, 10, -11, 13, 15, -26};
  for (int trial = 0; trial < 12; ++trial) {
    const std::int64_t b1 = coefficients[rng() % coefficients.size()];
    const std::int64_t b2 = coefficients[rng() % coefficients.size()];
    const std::uint64_t n = 1 + rng() % 30;
    for (std::uint64_t l : {2ULL, 3ULL, 5ULL, 7ULL}) {
      for (int m = 1; m <= 3; ++m) {
        const auto expected = oracle::brute_survivors(b1, b2, n, l, m);
        const auto got = survivors({b1, b2, n}, l, m);
        const std::set<oracle::Point> got_set(got.begin(), got.end());
        INFO("b=(" << b1 << "," << b2 << ") n=" << n << " l=" << l << " m=" << m);
        REQUIRE(got.size() == got_set.size());
        REQUIRE(got_set == expected);
      }
    }
  }
}

TEST_CASE("an empty survivor set stays empty") {
  for (std::uint64_t n : {15ULL, 85ULL, 130ULL}) {
    const auto curve = build_curve(n);
    for (const auto& pair : candidate_pairs(curve)) {
      for (std::uint64_t l : {2ULL, 3ULL, 5ULL}) {
        const auto space = space_for(curve, pair);
        for (int m = 1; m <= 4; ++m) {
          if (!survivors(space, l, m).empty()) continue;
          REQUIRE(survivors(space, l, m + 1).empty());
          break;
        }
      }
    }
  }
}

TEST_CASE("every witness produced over whole candidate sets verifies") {
  for (std::uint64_t n : {15ULL, 66ULL, 391ULL}) {
    const auto curve = build_curve(n);
    for (const auto& pair : candidate_pairs(curve)) {
      const auto space = space_for(curve, pair);
      for (const auto& place : places_to_check(curve, pair)) {
        const auto v = locally_solvable(space, place.prime);
        REQUIRE(v.status != Status::unknown);
        if (v.status == Status::solvable && !place.is_real()) {
          REQUIRE(v.witness.has_value());
          REQUIRE(verify_witness(space, place.prime, *v.witness));
        }
        if (v.status == Status::insolvable) REQUIRE(v.obstruction.has_value());
      }
    }
  }
}

TEST_CASE("hensel_check rejects points off the torsor") {
  const HomogeneousSpace space{1, 1, 15};
  CHECK_FALSE(hensel_check(space, 3, {1, 1, 1, 1}, 2).has_value());
  CHECK_FALSE(hensel_check(space, 3, {0, 0, 0, 3}, 2).has_value());
  const auto points = survivors(space, 7, 2);
  REQUIRE_FALSE(points.empty());
  CHECK(hensel_check(space, 7, points.front(), 2).has_value());
}

TEST_CASE("level budget") {
  CHECK(level_budget({1, 1, 15}, 3) == 2 * 2 + 5);
  CHECK(level_budget({17, 1, 391}, 17) == 2 * 3 + 5);
  CHECK(level_budget({1, 1, 15}, 2) == 2 * (2 + 1) + 5);
}

TEST_CASE("local square classes") {
  CHECK(local_class(-1, Place::real()) == 1);
  CHECK(local_class(5, Place::real()) == 0);
  CHECK(local_class(12, Place{2}) == local_class(3, Place{2}));
  CHECK(local_class(2, Place{3}) == local_class(5, Place{3}));
  CHECK(local_class(Rational{3, 12}, Place{2}) == 0);
  CHECK(local_pair_class({5, 3}, Place{5}) != local_pair_class({1, 3}, Place{5}));
}
