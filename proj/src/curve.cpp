#include "heron/curve.hpp"

#include <algorithm>
#include <limits>

namespace heron {

std::string to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

std::string to_string(const DescentPair& pair) {
  return "(" + to_string(pair.b1) + "," + to_string(pair.b2) + ")";
}

std::vector<std::uint64_t> HeronianCurve::odd_primes() const {
  std::vector<std::uint64_t> out;
  for (auto p : n_.primes) {
    if (p != 2) out.push_back(p);
  }
  return out;
}

HeronianCurve build_curve(std::uint64_t n) {
  if (n < 2) throw HypothesisFailed("n must be at least 2");
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw DomainError("n must be below 2^32 so that q fits in 64 bits");
  }
  HeronianCurve curve;
  curve.n_ = factor_squarefree(n);
  const std::uint64_t n2p1 = n * n + 1;
  if (n % 2 == 1) {
    curve.parity_ = Parity::odd;
    curve.q_ = n2p1 / 2;
  } else {
    curve.parity_ = Parity::even;
    curve.q_ = n2p1;
  }
  if (!is_prime(curve.q_)) {
    throw HypothesisFailed("n^2 + 1 = " + std::to_string(n2p1) +
                           (curve.parity_ == Parity::odd ? " is not twice a prime" : " is not prime"));
  }
  for (auto p : curve.n_.primes) {
    if (p != 2) ++curve.omega_[static_cast<int>(p % 8)];
  }
  curve.support_ = curve.n_.primes;
  if (curve.support_.empty() || curve.support_.front() != 2) curve.support_.insert(curve.support_.begin(), 2);
  curve.support_.push_back(curve.q_);  // q > n, so order is kept
  return curve;
}

SquareClassBasis::SquareClassBasis(const HeronianCurve& curve) : primes_(curve.support_primes()) {}

std::uint64_t SquareClassBasis::to_mask(i128 b) const {
  if (b == 0) throw DomainError("square class of zero");
  std::uint64_t mask = b < 0 ? 1 : 0;
  u128 rest = b < 0 ? static_cast<u128>(-(b + 1)) + 1 : static_cast<u128>(b);
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const u128 p = primes_[i];
    int parity = 0;
    while (rest % p == 0) {
      rest /= p;
      parity ^= 1;
    }
    if (parity) mask |= std::uint64_t{1} << (i + 1);
  }
  if (rest != 1) {
    // Anything left must be a perfect square to stay inside the support.
    auto r = static_cast<u128>(0);
    for (u128 lo = 0, hi = (u128{1} << 64) - 1; lo <= hi;) {
      const u128 mid = lo + (hi - lo) / 2;
      if (mid * mid <= rest) {
        r = mid;
        lo = mid + 1;
      } else {
        hi = mid - 1;
      }
    }
    if (r * r != rest) throw DomainError("square class outside the descent support: " + to_string(b));
  }
  return mask;
}

i128 SquareClassBasis::from_mask(std::uint64_t mask) const {
  i128 value = 1;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (mask & (std::uint64_t{1} << (i + 1))) value *= static_cast<i128>(primes_[i]);
  }
  return (mask & 1) ? -value : value;
}

std::uint64_t SquareClassBasis::pair_mask(const DescentPair& p) const {
  return to_mask(p.b1) | (to_mask(p.b2) << dimension());
}

DescentPair SquareClassBasis::from_pair_mask(std::uint64_t mask) const {
  const std::uint64_t low = (std::uint64_t{1} << dimension()) - 1;
  return {from_mask(mask & low), from_mask(mask >> dimension())};
}

DescentPair SquareClassBasis::multiply(const DescentPair& a, const DescentPair& b) const {
  return from_pair_mask(pair_mask(a) ^ pair_mask(b));
}

DescentPair SquareClassBasis::canonical(const DescentPair& p) const { return from_pair_mask(pair_mask(p)); }

std::vector<DescentPair> torsion_image(const HeronianCurve& curve) {
  const i128 t = curve.parity() == Parity::odd ? 2 * static_cast<i128>(curve.q()) : static_cast<i128>(curve.q());
  std::vector<DescentPair> image{{1, 1}, {1, t}, {-1, -1}, {-1, -t}};
  std::sort(image.begin(), image.end());
  return image;
}

std::vector<DescentPair> candidate_pairs(const HeronianCurve& curve) {
  const SquareClassBasis basis(curve);
  std::vector<i128> values;
  const std::uint64_t count = std::uint64_t{1} << basis.dimension();
  values.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) values.push_back(basis.from_mask(mask));
  std::sort(values.begin(), values.end());
  std::vector<DescentPair> pairs;
  pairs.reserve(values.size() * values.size());
  for (auto b1 : values) {
    for (auto b2 : values) pairs.push_back({b1, b2});
  }
  return pairs;
}

}  // namespace heron
