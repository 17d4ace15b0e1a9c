#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heron/curve.hpp"

namespace heron {

/// A place of Q: the real place, or a finite prime.
struct Place {
  std::uint64_t prime = 0;  // 0 is the real place

  static constexpr Place real() { return {0}; }
  constexpr bool is_real() const { return prime == 0; }
  friend auto operator<=>(const Place&, const Place&) = default;
};

std::string to_string(Place place);

/// The torsor attached to (b1, b2):
///   b1 z1^2 - b2 z2^2 = 1,   b1 z1^2 - b1 b2 z3^2 = -n^2,
/// homogenized in (z0 : z1 : z2 : z3) as the diagonal quadrics
///   first  = -z0^2 + b1 z1^2 - b2 z2^2
///   second = n^2 z0^2 + b1 z1^2 - b1 b2 z3^2.
struct HomogeneousSpace {
  i128 b1 = 1;
  i128 b2 = 1;
  std::uint64_t n = 1;

  u128 n_squared() const { return static_cast<u128>(n) * n; }
  // b1 * b2, or nullopt when it overflows 128 bits.
  std::optional<i128> b1b2() const;
  std::string affine_string() const;
  std::string projective_string() const;
};

enum class Status { solvable, insolvable, unknown };

std::string to_string(Status status);

/// A point modulo l^level at which both forms vanish and the multivariate
/// Hensel criterion holds: the 2x2 Jacobian minor on `minor_columns` has
/// valuation `minor_valuation` with 2e < level (2e + 1 < level at l = 2).
struct HenselWitness {
  std::array<u128, 4> point{};
  int level = 0;
  std::array<int, 2> minor_columns{};
  int minor_valuation = 0;
};

struct Obstruction {
  enum class Kind {
    real_sign,    // sign analysis at the real place
    exhausted,    // no primitive point survives modulo l^level
    local_image,  // the class lies outside the local image of E(Q_l)
  };
  Kind kind = Kind::exhausted;
  int level = 0;
  // Legendre-symbol explanation when one applies; empty otherwise.
  std::string symbol_tag;
  // For local_image: x-coordinates of points of E(Q_l) whose classes,
  // together with the torsion classes, span the whole local image.
  std::vector<Rational> image_points;
  std::vector<std::uint32_t> image_classes;
};

struct LocalVerdict {
  Place place;
  Status status = Status::unknown;
  std::optional<HenselWitness> witness;
  std::optional<std::string> real_certificate;
  std::optional<Obstruction> obstruction;
  int level_reached = 0;
};

struct LocalSolveConfig {
  // Per-prime override of the lifting level budget.
  std::map<std::uint64_t, int> max_level;
  // Applies to every prime when set and no per-prime override exists.
  std::optional<int> global_max_level;
  std::size_t survivor_cap = 1'000'000;
  bool verbose_witness = false;
  // Odd primes above this are decided from the local image of E(Q_l)
  // instead of the survivor search. Survivor sets of torsors with bad
  // reduction grow like l^3 per level, so large l exceed the cap.
  std::uint64_t engine_prime_limit = 13;
};

HomogeneousSpace space_for(const HeronianCurve& curve, const DescentPair& pair);

LocalVerdict real_solvable(const HomogeneousSpace& space);

/// Real place first, then ascending primes: 2, 3, primes(n), q and the
/// primes of b1 b2. Every other prime has good reduction for the torsor.
std::vector<Place> places_to_check(const HeronianCurve& curve, const DescentPair& pair);

/// Decides whether the torsor has a Q_l-point. Throws BudgetExhausted when the
/// survivor cap is hit; returns Status::unknown only when the level budget runs out.
LocalVerdict locally_solvable(const HomogeneousSpace& space, std::uint64_t l,
                              const LocalSolveConfig& config = {});

struct EverywhereResult {
  bool solvable = false;
  std::vector<LocalVerdict> verdicts;
};

/// Stops at the first insolvable place; an unknown verdict is raised as
/// BudgetExhausted.
EverywhereResult everywhere_locally_solvable(const HeronianCurve& curve, const DescentPair& pair,
                                             const LocalSolveConfig& config = {});

// ---------------------------------------------------------------------------
// Survivor search internals, exposed for verification.

/// 2 v_l(4 n^2 (n^2 + 1) b1 b2) + 5, clipped so that l^level stays below 2^126.
int level_budget(const HomogeneousSpace& space, std::uint64_t l);

/// Primitive points modulo l^level on both forms, each scaled so that its
/// first unit coordinate is 1. Built incrementally from level 1.
std::vector<std::array<u128, 4>> survivors(const HomogeneousSpace& space, std::uint64_t l, int level,
                                           std::size_t cap = 1'000'000);

/// Checks the Hensel criterion at `point` modulo l^level.
std::optional<HenselWitness> hensel_check(const HomogeneousSpace& space, std::uint64_t l,
                                          const std::array<u128, 4>& point, int level);

bool verify_witness(const HomogeneousSpace& space, std::uint64_t l, const HenselWitness& witness);

// ---------------------------------------------------------------------------
// Local square classes.

/// Index of the class of b in Q_l^*/Q_l^*^2: 4 classes for odd l, 8 for
/// l = 2, 2 (the sign) for the real place.
std::uint32_t local_class(i128 b, Place place);
std::uint32_t local_class(const Rational& x, Place place);
/// Both coordinates packed as c1 | c2 << 4.
std::uint32_t local_pair_class(const DescentPair& pair, Place place);

/// The image of E(Q_l) in (Q_l^*/Q_l^*^2)^2 for an odd prime l, which has
/// exactly four elements.
struct LocalImage {
  std::uint64_t l = 0;
  std::vector<std::uint32_t> classes;  // sorted packed pair classes
  std::vector<Rational> points;        // x-coordinates used beyond torsion

  bool contains(std::uint32_t pair_class) const;
};

LocalImage local_image(std::uint64_t n, std::uint64_t l);

/// Whether x(x - 1)(x + n^2) is a nonzero square in Q_l (l odd).
bool is_local_point(std::uint64_t n, const Rational& x, std::uint64_t l);

/// Legendre-symbol reason for insolvability at l, when one is known.
std::string symbol_explanation(const HomogeneousSpace& space, std::uint64_t l);

}  // namespace heron
