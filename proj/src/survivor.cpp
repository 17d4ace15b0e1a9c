// Survivor search: primitive projective points modulo l^m on both forms,
// lifted one level at a time until a Hensel witness appears or none remain.

#include <algorithm>

#include "heron/localsolve.hpp"
#include "local_internal.hpp"

namespace heron {
namespace detail {

Forms::Forms(const HomogeneousSpace& space, u128 m) : modulus(m) {
  using arith::mul_mod;
  using arith::reduce;
  using arith::sub_mod;
  const u128 b1 = reduce(space.b1, m);
  const u128 b2 = reduce(space.b2, m);
  first = {reduce(-1, m), b1, reduce(-space.b2, m), 0};
  second = {space.n_squared() % m, b1, 0, sub_mod(0, mul_mod(b1, b2, m), m)};
}

u128 Forms::eval(const std::array<u128, 4>& c, const std::array<u128, 4>& z) const {
  u128 total = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (c[i] == 0) continue;
    const u128 zi = z[i] % modulus;
    total = arith::add_mod(total, arith::mul_mod(c[i], arith::mul_mod(zi, zi, modulus), modulus), modulus);
  }
  return total;
}

}  // namespace detail

namespace {

using Point = std::array<u128, 4>;
using detail::Forms;

int capped_valuation(u128 x, std::uint64_t l, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (v < cap && x % l == 0) {
    x /= l;
    ++v;
  }
  return v;
}

int pivot_of(const Point& z, std::uint64_t l) {
  for (int i = 0; i < 4; ++i) {
    if (z[static_cast<std::size_t>(i)] % l != 0) return i;
  }
  return -1;
}

// Jacobian of (first, second) is [2 a_i z_i ; 2 c_i z_i], so the minor on
// columns (i, j) equals 4 z_i z_j (a_i c_j - a_j c_i).
u128 minor(const Forms& f, const Point& z, int i, int j) {
  using arith::mul_mod;
  const u128 m = f.modulus;
  const auto a = [&](int k) { return f.first[static_cast<std::size_t>(k)]; };
  const auto c = [&](int k) { return f.second[static_cast<std::size_t>(k)]; };
  const u128 cross = arith::sub_mod(mul_mod(a(i), c(j), m), mul_mod(a(j), c(i), m), m);
  const u128 zz = mul_mod(z[static_cast<std::size_t>(i)] % m, z[static_cast<std::size_t>(j)] % m, m);
  return mul_mod(mul_mod(4 % m, zz, m), cross, m);
}

bool criterion_holds(std::uint64_t l, int e, int level) { return l == 2 ? 2 * e + 1 < level : 2 * e < level; }

std::optional<HenselWitness> check_with(const Forms& f, std::uint64_t l, const Point& point, int level) {
  Point z;
  for (std::size_t i = 0; i < 4; ++i) z[i] = point[i] % f.modulus;
  if (f.first_at(z) != 0 || f.second_at(z) != 0) return std::nullopt;
  if (pivot_of(z, l) < 0) return std::nullopt;
  HenselWitness best;
  best.point = z;
  best.level = level;
  best.minor_valuation = level;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const int e = capped_valuation(minor(f, z, i, j), l, level);
      if (e < best.minor_valuation) {
        best.minor_valuation = e;
        best.minor_columns = {i, j};
      }
    }
  }
  if (!criterion_holds(l, best.minor_valuation, level)) return std::nullopt;
  return best;
}

// Roots of c z^2 = r modulo the prime l.
std::vector<u128> roots_mod_prime(u128 c, u128 r, std::uint64_t l) {
  std::vector<u128> out;
  if (c == 0) {
    if (r == 0) {
      for (std::uint64_t z = 0; z < l; ++z) out.push_back(z);
    }
    return out;
  }
  const u128 target = arith::mul_mod(r, arith::inv_mod(c, l), u128{l});
  const auto s = sqrt_mod(static_cast<i128>(target), l);
  if (!s) return out;
  out.push_back(*s);
  if (*s != 0 && l != 2) out.push_back(l - *s);
  return out;
}

bool normalized(const Point& z, std::uint64_t l) {
  const int p = pivot_of(z, l);
  if (p < 0) return false;
  for (int i = 0; i < p; ++i) {
    if (z[static_cast<std::size_t>(i)] != 0) return false;
  }
  return z[static_cast<std::size_t>(p)] == 1;
}

// Level 1: normalized points have z0 in {0, 1}, and z1 in {0, 1} when z0 = 0.
// z2 and z3 come from square roots.
template <typename Visit>
void level_one(const HomogeneousSpace& space, std::uint64_t l, Visit&& visit) {
  const Forms f(space, l);
  for (std::uint64_t z0 = 0; z0 < 2; ++z0) {
    const std::uint64_t z1_end = z0 == 1 ? l : 2;
    for (std::uint64_t z1 = 0; z1 < z1_end; ++z1) {
      const Point partial{z0, z1, 0, 0};
      const u128 t1 = f.first_at(partial);
      const u128 t2 = f.second_at(partial);
      const auto r2 = roots_mod_prime(f.first[2], arith::sub_mod(0, t1, l), l);
      if (r2.empty()) continue;
      const auto r3 = roots_mod_prime(f.second[3], arith::sub_mod(0, t2, l), l);
      for (auto z2 : r2) {
        for (auto z3 : r3) {
          const Point z{z0, z1, z2, z3};
          if (normalized(z, l) && !visit(z)) return;
        }
      }
    }
  }
}

struct Solution {
  bool consistent = false;
  std::array<std::uint64_t, 3> particular{};
  std::vector<std::array<std::uint64_t, 3>> kernel;
};

// Solves a 2x3 system over F_l.
Solution solve_2x3(std::array<std::array<std::uint64_t, 4>, 2> rows, std::uint64_t l) {
  const auto mul = [l](std::uint64_t a, std::uint64_t b) { return arith::mul_mod(a, b, l); };
  const auto sub = [l](std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + l - b; };
  std::array<int, 2> pivot_col{-1, -1};
  int rank = 0;
  for (int col = 0; col < 3 && rank < 2; ++col) {
    int sel = -1;
    for (int r = rank; r < 2; ++r) {
      if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    std::swap(rows[static_cast<std::size_t>(rank)], rows[static_cast<std::size_t>(sel)]);
    auto& pr = rows[static_cast<std::size_t>(rank)];
    const auto inv = static_cast<std::uint64_t>(arith::inv_mod(pr[static_cast<std::size_t>(col)], l));
    for (auto& v : pr) v = mul(v, inv);
    for (int r = 0; r < 2; ++r) {
      if (r == rank) continue;
      auto& row = rows[static_cast<std::size_t>(r)];
      const std::uint64_t factor = row[static_cast<std::size_t>(col)];
      if (factor == 0) continue;
      for (std::size_t k = 0; k < 4; ++k) row[k] = sub(row[k], mul(factor, pr[k]));
    }
    pivot_col[static_cast<std::size_t>(rank)] = col;
    ++rank;
  }
  Solution s;
  for (int r = rank; r < 2; ++r) {
    if (rows[static_cast<std::size_t>(r)][3] != 0) return s;
  }
  s.consistent = true;
  for (int r = 0; r < rank; ++r) {
    s.particular[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(r)])] =
        rows[static_cast<std::size_t>(r)][3];
  }
  for (int free = 0; free < 3; ++free) {
    if (free == pivot_col[0] || free == pivot_col[1]) continue;
    std::array<std::uint64_t, 3> v{};
    v[static_cast<std::size_t>(free)] = 1;
    for (int r = 0; r < rank; ++r) {
      v[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(r)])] =
          sub(0, rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(free)]);
    }
    s.kernel.push_back(v);
  }
  return s;
}

// All lifts of the level-m survivors to level m + 1. Writing x' = x + l^m y,
// first(x') = first(x) + l^m grad(x).y mod l^(m+1) for m >= 1, so y solves a
// linear system over F_l. The pivot coordinate stays 1.
template <typename Visit>
void lift(const HomogeneousSpace& space, std::uint64_t l, int m, const std::vector<Point>& points,
          Visit&& visit) {
  const u128 lm = *arith::checked_pow(l, m);
  const auto next = arith::checked_pow(l, m + 1);
  if (!next) throw DomainError("lift: modulus exceeds 128 bits");
  const Forms f(space, *next);
  const Forms g(space, l);
  for (const Point& x : points) {
    const u128 r1 = f.first_at(x);
    const u128 r2 = f.second_at(x);
    if (r1 % lm != 0 || r2 % lm != 0) throw DomainError("lift: survivor does not vanish at its level");
    const int pivot = pivot_of(x, l);
    std::array<int, 3> free{};
    for (int i = 0, k = 0; i < 4; ++i) {
      if (i != pivot) free[static_cast<std::size_t>(k++)] = i;
    }
    std::array<std::array<std::uint64_t, 4>, 2> rows{};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto idx = static_cast<std::size_t>(free[k]);
      const u128 xi = x[idx] % l;
      rows[0][k] = static_cast<std::uint64_t>(arith::mul_mod(2 * g.first[idx] % l, xi, u128{l}));
      rows[1][k] = static_cast<std::uint64_t>(arith::mul_mod(2 * g.second[idx] % l, xi, u128{l}));
    }
    rows[0][3] = static_cast<std::uint64_t>(arith::sub_mod(0, (r1 / lm) % l, l));
    rows[1][3] = static_cast<std::uint64_t>(arith::sub_mod(0, (r2 / lm) % l, l));
    const Solution sol = solve_2x3(rows, l);
    if (!sol.consistent) continue;
    std::vector<std::uint64_t> coeffs(sol.kernel.size(), 0);
    while (true) {
      Point y = x;
      for (std::size_t k = 0; k < 3; ++k) {
        std::uint64_t yk = sol.particular[k];
        for (std::size_t b = 0; b < sol.kernel.size(); ++b) {
          yk = (yk + arith::mul_mod(coeffs[b], sol.kernel[b][k], l)) % l;
        }
        y[static_cast<std::size_t>(free[k])] += lm * yk;
      }
      if (!visit(y)) return;
      std::size_t b = 0;
      while (b < coeffs.size() && ++coeffs[b] == l) coeffs[b++] = 0;
      if (b == coeffs.size()) break;
    }
  }
}

}  // namespace

int level_budget(const HomogeneousSpace& space, std::uint64_t l) {
  const u128 n2 = space.n_squared();
  int v = arith::valuation(l, 4) + arith::valuation(l, static_cast<i128>(n2)) +
          arith::valuation(l, static_cast<i128>(n2 + 1)) + arith::valuation(l, space.b1) +
          arith::valuation(l, space.b2);
  int budget = 2 * v + 5;
  while (budget > 1 && !arith::checked_pow(l, budget)) --budget;
  return budget;
}

std::optional<HenselWitness> hensel_check(const HomogeneousSpace& space, std::uint64_t l, const Point& point,
                                          int level) {
  if (level < 1) return std::nullopt;
  const auto modulus = arith::checked_pow(l, level);
  if (!modulus) return std::nullopt;
  return check_with(Forms(space, *modulus), l, point, level);
}

bool verify_witness(const HomogeneousSpace& space, std::uint64_t l, const HenselWitness& w) {
  if (w.level < 1 || w.minor_columns[0] == w.minor_columns[1]) return false;
  const auto modulus = arith::checked_pow(l, w.level);
  if (!modulus) return false;
  const Forms f(space, *modulus);
  if (f.first_at(w.point) != 0 || f.second_at(w.point) != 0) return false;
  if (pivot_of(w.point, l) < 0) return false;
  const int e = capped_valuation(minor(f, w.point, w.minor_columns[0], w.minor_columns[1]), l, w.level);
  return e == w.minor_valuation && criterion_holds(l, e, w.level);
}

std::vector<Point> survivors(const HomogeneousSpace& space, std::uint64_t l, int level, std::size_t cap) {
  if (level < 1) throw DomainError("survivors: level must be positive");
  std::vector<Point> current;
  const auto keep = [&](int lvl) {
    return [&, lvl](const Point& z) {
      current.push_back(z);
      if (current.size() > cap) {
        throw BudgetExhausted(l, lvl, "survivor cap exceeded at " + std::to_string(l) + "^" + std::to_string(lvl));
      }
      return true;
    };
  };
  level_one(space, l, keep(1));
  for (int m = 1; m < level && !current.empty(); ++m) {
    std::vector<Point> previous;
    previous.swap(current);
    lift(space, l, m, previous, keep(m + 1));
  }
  std::sort(current.begin(), current.end());
  return current;
}

namespace detail {

LocalVerdict survivor_search(const HomogeneousSpace& space, std::uint64_t l, const LocalSolveConfig& config) {
  LocalVerdict verdict;
  verdict.place = {l};
  int budget = level_budget(space, l);
  if (auto it = config.max_level.find(l); it != config.max_level.end()) {
    budget = it->second;
  } else if (config.global_max_level) {
    budget = *config.global_max_level;
  }
  while (budget > 1 && !arith::checked_pow(l, budget)) --budget;

  std::vector<Point> current;
  std::optional<HenselWitness> witness;
  int level = 1;
  const auto consider = [&](const Forms& f) {
    return [&](const Point& z) {
      if (auto w = check_with(f, l, z, level)) {
        witness = *w;
        return false;
      }
      current.push_back(z);
      if (current.size() > config.survivor_cap) {
        throw BudgetExhausted(l, level,
                              "survivor cap " + std::to_string(config.survivor_cap) + " exceeded at " +
                                  std::to_string(l) + "^" + std::to_string(level));
      }
      return true;
    };
  };
  const Forms base(space, l);
  level_one(space, l, consider(base));
  while (!witness && !current.empty() && level < budget) {
    std::vector<Point> previous;
    previous.swap(current);
    const Forms f(space, *arith::checked_pow(l, level + 1));
    ++level;
    lift(space, l, level - 1, previous, consider(f));
  }
  verdict.level_reached = level;
  if (witness) {
    verdict.status = Status::solvable;
    verdict.witness = witness;
  } else if (current.empty()) {
    verdict.status = Status::insolvable;
    Obstruction ob;
    ob.kind = Obstruction::Kind::exhausted;
    ob.level = level;
    ob.symbol_tag = symbol_explanation(space, l);
    verdict.obstruction = std::move(ob);
  } else {
    verdict.status = Status::unknown;
  }
  return verdict;
}

}  // namespace detail
}  // namespace heron
