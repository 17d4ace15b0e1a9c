#include "heron/arith.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>

namespace heron {

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
  return to_string(static_cast<u128>(v));
}

i128 parse_i128(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) throw DomainError("expected an integer");
  u128 value = 0;
  constexpr u128 limit = (~u128{0}) >> 1;
  for (char c : text) {
    if (c < '0' || c > '9') throw DomainError("expected an integer, got '" + std::string(text) + "'");
    const auto digit = static_cast<u128>(c - '0');
    if (value > (limit - digit) / 10) throw DomainError("integer out of range");
    value = value * 10 + digit;
  }
  return negative ? -static_cast<i128>(value) : static_cast<i128>(value);
}

namespace arith {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1) result = mul_mod(result, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return result;
}

u128 add_mod(u128 a, u128 b, u128 m) {
  return a >= m - b ? a - (m - b) : a + b;
}

u128 sub_mod(u128 a, u128 b, u128 m) { return a >= b ? a - b : m - (b - a); }

u128 mul_mod(u128 a, u128 b, u128 m) {
  constexpr u128 word = u128{1} << 64;
  if (m <= word) {
    const auto x = static_cast<std::uint64_t>(a % m);
    const auto y = static_cast<std::uint64_t>(b % m);
    return static_cast<u128>(x) * y % m;
  }
  a %= m;
  b %= m;
  if (a < word && b < word) {
    return a * b % m;
  }
  // Double-and-add; only reached for moduli above 2^64.
  u128 result = 0;
  for (int bit = 127 - std::countl_zero(static_cast<std::uint64_t>(b >> 64)); bit >= 0; --bit) {
    result = add_mod(result, result, m);
    if ((b >> bit) & 1) result = add_mod(result, a, m);
  }
  return result;
}

u128 pow_mod(u128 a, u128 e, u128 m) {
  u128 result = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1) result = mul_mod(result, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return result;
}

u128 reduce(i128 a, u128 m) {
  if (a >= 0) return static_cast<u128>(a) % m;
  const u128 magnitude = static_cast<u128>(-(a + 1)) + 1;
  const u128 r = magnitude % m;
  return r == 0 ? 0 : m - r;
}

u128 inv_mod(u128 a, u128 m) {
  if (m == 1) return 0;
  // Extended Euclid on signed values; moduli stay below 2^126.
  i128 old_r = static_cast<i128>(a % m), r = static_cast<i128>(m);
  i128 old_s = 1, s = 0;
  while (r != 0) {
    const i128 quotient = old_r / r;
    old_r -= quotient * r;
    std::swap(old_r, r);
    old_s -= quotient * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) throw DomainError("inv_mod: argument is not invertible");
  return reduce(old_s, m);
}

std::optional<u128> checked_pow(std::uint64_t l, int k) {
  constexpr u128 limit = u128{1} << 126;
  u128 result = 1;
  for (int i = 0; i < k; ++i) {
    if (result > limit / l) return std::nullopt;
    result *= l;
  }
  return result;
}

int valuation(std::uint64_t l, i128 x) {
  if (x == 0) throw DomainError("valuation of zero is undefined");
  const auto ll = static_cast<i128>(l);
  int v = 0;
  while (x % ll == 0) {
    x /= ll;
    ++v;
  }
  return v;
}

}  // namespace arith

int jacobi(i128 a, u128 m) {
  if (m == 0 || (m & 1) == 0) throw DomainError("jacobi: modulus must be odd and positive");
  u128 x = arith::reduce(a, m);
  u128 n = m;
  int t = 1;
  while (x != 0) {
    while ((x & 1) == 0) {
      x >>= 1;
      const auto r = static_cast<unsigned>(n & 7);
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(x, n);
    if ((x & 3) == 3 && (n & 3) == 3) t = -t;
    x %= n;
  }
  return n == 1 ? t : 0;
}

bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  static constexpr std::array<std::uint64_t, 12> small{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto p : small) {
    if (m % p == 0) return m == p;
  }
  if (m < 41 * 41) return true;
  std::uint64_t d = m - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Witness set that is exact for every 64-bit input.
  static constexpr std::array<std::uint64_t, 7> bases{2, 325, 9375, 28178, 450775, 9780504, 1795265022};
  for (auto base : bases) {
    const std::uint64_t a = base % m;
    if (a == 0) continue;
    std::uint64_t x = arith::pow_mod(a, d, m);
    if (x == 1 || x == m - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = arith::mul_mod(x, x, m);
      if (x == m - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0 when the
// iteration budget is spent.
std::uint64_t rho_factor(std::uint64_t n, std::uint64_t& budget) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1; budget > 0; ++c) {
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    const auto f = [&](std::uint64_t v) { return (arith::mul_mod(v, v, n) + c) % n; };
    constexpr std::uint64_t block = 128;
    for (std::uint64_t r = 1; g == 1 && budget > 0; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += block) {
        ys = y;
        const std::uint64_t steps = std::min(block, r - k);
        for (std::uint64_t i = 0; i < steps; ++i) {
          y = f(y);
          q = arith::mul_mod(q, x > y ? x - y : y - x, n);
        }
        budget = budget > steps ? budget - steps : 0;
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
  return 0;
}

void split(std::uint64_t n, std::uint64_t& budget, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t r = isqrt(n);
  if (r * r == n) {
    while (!is_prime(r)) {
      const std::uint64_t d = rho_factor(r, budget);
      if (d == 0) throw Unfactored(r);
      r = d;
    }
    throw NotSquarefree(r);
  }
  const std::uint64_t d = rho_factor(n, budget);
  if (d == 0) throw Unfactored(n);
  split(d, budget, out);
  split(n / d, budget, out);
}

}  // namespace

FactoredInteger factor_squarefree(std::uint64_t n, const FactorBudget& budget) {
  if (n == 0) throw DomainError("factor_squarefree: n must be positive");
  FactoredInteger result;
  result.value = n;
  std::uint64_t rest = n;
  std::vector<std::uint64_t> primes;
  for (std::uint64_t d = 2; d <= budget.trial_bound && d * d <= rest; d += (d == 2 ? 1 : 2)) {
    if (rest % d != 0) continue;
    rest /= d;
    if (rest % d == 0) throw NotSquarefree(d);
    primes.push_back(d);
  }
  std::uint64_t iterations = budget.rho_iterations;
  split(rest, iterations, primes);
  std::sort(primes.begin(), primes.end());
  if (auto dup = std::adjacent_find(primes.begin(), primes.end()); dup != primes.end()) {
    throw NotSquarefree(*dup);
  }
  result.primes = std::move(primes);
  for (auto p : result.primes) result.residues_mod8.push_back(static_cast<int>(p % 8));
  return result;
}

std::optional<std::uint64_t> sqrt_mod(i128 a, std::uint64_t p) {
  if (p == 2) return static_cast<std::uint64_t>(arith::reduce(a, 2));
  if (p < 2 || p % 2 == 0) throw DomainError("sqrt_mod: modulus must be an odd prime");
  const auto x = static_cast<std::uint64_t>(arith::reduce(a, p));
  if (x == 0) return 0;
  if (jacobi(x, p) != 1) return std::nullopt;
  std::uint64_t r;
  if (p % 4 == 3) {
    r = arith::pow_mod(x, (p + 1) / 4, p);
  } else {
    // Tonelli-Shanks.
    std::uint64_t q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    std::uint64_t z = 2;
    while (jacobi(z, p) != -1) ++z;
    std::uint64_t c = arith::pow_mod(z, q, p);
    r = arith::pow_mod(x, (q + 1) / 2, p);
    std::uint64_t t = arith::pow_mod(x, q, p);
    int m = s;
    while (t != 1) {
      int i = 0;
      std::uint64_t tt = t;
      while (tt != 1) {
        tt = arith::mul_mod(tt, tt, p);
        ++i;
      }
      std::uint64_t b = c;
      for (int j = 0; j < m - i - 1; ++j) b = arith::mul_mod(b, b, p);
      r = arith::mul_mod(r, b, p);
      c = arith::mul_mod(b, b, p);
      t = arith::mul_mod(t, c, p);
      m = i;
    }
  }
  return std::min(r, p - r);
}

std::optional<u128> sqrt_mod_prime_power(u128 a, std::uint64_t l, int k) {
  if (l % 2 == 0 || k < 1) throw DomainError("sqrt_mod_prime_power: odd prime and k >= 1 required");
  const auto modulus = arith::checked_pow(l, k);
  if (!modulus) throw DomainError("sqrt_mod_prime_power: modulus too large");
  const u128 m = *modulus;
  a %= m;
  if (a % l == 0) throw DomainError("sqrt_mod_prime_power: argument must be a unit");
  const auto root = sqrt_mod(static_cast<i128>(a % l), l);
  if (!root) return std::nullopt;
  u128 r = *root;
  for (int precision = 1; precision < k; precision *= 2) {
    // r <- r - (r^2 - a) / (2r)
    const u128 f = arith::sub_mod(arith::mul_mod(r, r, m), a, m);
    const u128 step = arith::mul_mod(f, arith::inv_mod(arith::add_mod(r, r, m), m), m);
    r = arith::sub_mod(r, step, m);
  }
  return r;
}

int valuation(std::uint64_t l, const Rational& x) {
  if (x.num == 0 || x.den == 0) throw DomainError("valuation: argument must be a nonzero rational");
  return arith::valuation(l, x.num) - arith::valuation(l, x.den);
}

}  // namespace heron
