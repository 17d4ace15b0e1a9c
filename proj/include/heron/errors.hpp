#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace heron {

// Base for every failure the library reports. The CLI maps the concrete
// type onto its exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NotSquarefree : public Error {
 public:
  explicit NotSquarefree(std::uint64_t prime)
      : Error("not square-free: " + std::to_string(prime) + "^2 divides n"),
        prime_(prime) {}
  std::uint64_t prime() const noexcept { return prime_; }

 private:
  std::uint64_t prime_;
};

class Unfactored : public Error {
 public:
  explicit Unfactored(std::uint64_t cofactor)
      : Error("factorization budget exhausted on cofactor " +
              std::to_string(cofactor)),
        cofactor_(cofactor) {}
  std::uint64_t cofactor() const noexcept { return cofactor_; }

 private:
  std::uint64_t cofactor_;
};

class HypothesisFailed : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  BudgetExhausted(std::uint64_t place, int level, const std::string& what)
      : Error(what), place_(place), level_(level) {}
  // 0 stands for the real place.
  std::uint64_t place() const noexcept { return place_; }
  int level() const noexcept { return level_; }

 private:
  std::uint64_t place_;
  int level_;
};

class ClosureViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace heron
