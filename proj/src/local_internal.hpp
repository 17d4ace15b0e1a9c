#pragma once

#include "heron/localsolve.hpp"

namespace heron::detail {

// Diagonal coefficients of both forms reduced modulo `modulus`.
struct Forms {
  Forms(const HomogeneousSpace& space, u128 modulus);

  u128 first_at(const std::array<u128, 4>& z) const { return eval(first, z); }
  u128 second_at(const std::array<u128, 4>& z) const { return eval(second, z); }
  u128 eval(const std::array<u128, 4>& coefficients, const std::array<u128, 4>& z) const;

  u128 modulus;
  std::array<u128, 4> first{};
  std::array<u128, 4> second{};
};

LocalVerdict survivor_search(const HomogeneousSpace& space, std::uint64_t l, const LocalSolveConfig& config);
LocalVerdict image_decision(const HomogeneousSpace& space, std::uint64_t l, const LocalSolveConfig& config);

}  // namespace heron::detail
