#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shadowlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadParams : Error {
  using Error::Error;
};

struct NotAPermutation : Error {
  using Error::Error;
};

struct EmptyArgument : Error {
  using Error::Error;
};

struct SingletonSpace : Error {
  using Error::Error;
};

struct ZeroExponent : Error {
  using Error::Error;
};

struct NotAWalk : Error {
  explicit NotAWalk(std::size_t step, const std::string& what)
      : Error(what), step(step) {}
  std::size_t step;  // index of the first offending transition
};

struct UnknownPoint : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// The subset-automaton closure grew past the configured cap; the instance is
// too large for exact analysis at these scales.
struct StateCapExceeded : Error {
  StateCapExceeded(std::size_t states, std::size_t cap)
      : Error("state cap exceeded: " + std::to_string(states) + " states generated, cap " +
              std::to_string(cap)),
        states(states),
        cap(cap) {}
  std::size_t states;
  std::size_t cap;
};

// The windowed oracle ran past its step budget.
struct ExplosionGuard : Error {
  ExplosionGuard(std::size_t steps, std::size_t budget)
      : Error("walk enumeration budget exceeded: " + std::to_string(steps) + " steps, budget " +
              std::to_string(budget)),
        steps(steps),
        budget(budget) {}
  std::size_t steps;
  std::size_t budget;
};

}  // namespace shadowlab
