#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heron/errors.hpp"

namespace heron {

using i128 = __int128;
using u128 = unsigned __int128;

std::string to_string(i128 v);
std::string to_string(u128 v);
// Accepts an optional leading '-' followed by decimal digits.
i128 parse_i128(std::string_view text);

/// A positive square-free integer together with its prime factorization.
struct FactoredInteger {
  std::uint64_t value = 1;
  std::vector<std::uint64_t> primes;  // ascending, each with exponent 1
  std::vector<int> residues_mod8;     // primes[i] % 8

  bool operator==(const FactoredInteger&) const = default;
};

/// Exact rational number num/den with den > 0; not necessarily reduced.
struct Rational {
  i128 num = 0;
  i128 den = 1;
};

namespace arith {

// Modular kernels. Moduli below 2^64 take the native 128-bit product path.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
u128 mul_mod(u128 a, u128 b, u128 m);
u128 pow_mod(u128 a, u128 e, u128 m);
u128 add_mod(u128 a, u128 b, u128 m);
u128 sub_mod(u128 a, u128 b, u128 m);
// a mod m in [0, m) for signed a.
u128 reduce(i128 a, u128 m);
// Inverse of a modulo m; requires gcd(a, m) = 1.
u128 inv_mod(u128 a, u128 m);

/// l^k, or nullopt when it does not fit below 2^127.
std::optional<u128> checked_pow(std::uint64_t l, int k);

/// Number of times l divides x; x must be nonzero.
int valuation(std::uint64_t l, i128 x);

}  // namespace arith

/// Jacobi symbol (a/m) for odd m >= 1.
int jacobi(i128 a, u128 m);

/// Deterministic for every m < 2^64.
bool is_prime(std::uint64_t m);

struct FactorBudget {
  std::uint64_t trial_bound = std::uint64_t{1} << 20;
  std::uint64_t rho_iterations = std::uint64_t{1} << 26;
};

/// Full factorization of a square-free n >= 1. Throws NotSquarefree(p) if
/// p^2 | n, Unfactored when the rho budget runs out.
FactoredInteger factor_squarefree(std::uint64_t n, const FactorBudget& budget = {});

/// Smaller square root of a modulo the odd prime p, when one exists.
std::optional<std::uint64_t> sqrt_mod(i128 a, std::uint64_t p);

/// Square root of the unit a modulo l^k for an odd prime l (k >= 1), by
/// Tonelli-Shanks followed by Newton lifting.
std::optional<u128> sqrt_mod_prime_power(u128 a, std::uint64_t l, int k);

/// Exponent of the prime l in the nonzero rational x.
int valuation(std::uint64_t l, const Rational& x);

}  // namespace heron
