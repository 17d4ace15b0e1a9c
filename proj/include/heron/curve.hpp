#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "heron/arith.hpp"

namespace heron {

enum class Parity { odd, even };

std::string to_string(Parity p);

/// A class (b1, b2) of (Q*/Q*^2)^2, stored as its signed square-free
/// representatives.
struct DescentPair {
  i128 b1 = 1;
  i128 b2 = 1;

  friend auto operator<=>(const DescentPair&, const DescentPair&) = default;
};

std::string to_string(const DescentPair& pair);

/// Counts of the odd prime factors of n by residue class mod 8.
struct OmegaCounts {
  std::array<int, 4> by_class{};  // residues 1, 3, 5, 7

  int operator[](int residue) const { return by_class[static_cast<std::size_t>(residue / 2)]; }
  int& operator[](int residue) { return by_class[static_cast<std::size_t>(residue / 2)]; }
  int total() const { return by_class[0] + by_class[1] + by_class[2] + by_class[3]; }
  bool operator==(const OmegaCounts&) const = default;
};

class HeronianCurve;
HeronianCurve build_curve(std::uint64_t n);

/// E_n : y^2 = x (x - 1) (x + n^2) with n square-free and n^2 + 1 = 2q
/// (n odd) or n^2 + 1 = q (n even) for a prime q. Only build_curve makes one.
class HeronianCurve {
 public:
  const FactoredInteger& factored_n() const { return n_; }
  std::uint64_t n() const { return n_.value; }
  Parity parity() const { return parity_; }
  std::uint64_t q() const { return q_; }
  const OmegaCounts& omega() const { return omega_; }
  // tan(theta/2) of the associated triangle, and its area.
  Rational tau() const { return {1, static_cast<i128>(n_.value)}; }
  std::uint64_t area() const { return n_.value; }
  u128 n_squared() const { return static_cast<u128>(n_.value) * n_.value; }
  // Odd primes of n, ascending.
  std::vector<std::uint64_t> odd_primes() const;
  // {2} U primes(n) U {q}, ascending: every prime allowed in a descent pair.
  const std::vector<std::uint64_t>& support_primes() const { return support_; }

 private:
  friend HeronianCurve build_curve(std::uint64_t n);
  HeronianCurve() = default;

  FactoredInteger n_;
  Parity parity_ = Parity::odd;
  std::uint64_t q_ = 0;
  OmegaCounts omega_;
  std::vector<std::uint64_t> support_;
};

/// F_2 coordinates for square classes supported on {-1} U support primes.
/// Bit 0 is the sign, bit i+1 the i-th support prime.
class SquareClassBasis {
 public:
  explicit SquareClassBasis(const HeronianCurve& curve);

  std::size_t dimension() const { return primes_.size() + 1; }
  // Square class of any nonzero integer; throws DomainError if an odd power
  // of a prime outside the support divides b.
  std::uint64_t to_mask(i128 b) const;
  i128 from_mask(std::uint64_t mask) const;
  std::uint64_t pair_mask(const DescentPair& p) const;  // b1 in low half
  DescentPair from_pair_mask(std::uint64_t mask) const;
  DescentPair multiply(const DescentPair& a, const DescentPair& b) const;
  DescentPair canonical(const DescentPair& p) const;

 private:
  std::vector<std::uint64_t> primes_;
};

/// The four classes of the torsion image.
std::vector<DescentPair> torsion_image(const HeronianCurve& curve);

/// Every class with both coordinates supported on {-1, 2, q, primes(n)},
/// in lexicographic order of (b1, b2).
std::vector<DescentPair> candidate_pairs(const HeronianCurve& curve);

}  // namespace heron
