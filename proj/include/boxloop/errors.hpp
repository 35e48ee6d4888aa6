#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace boxloop {

// Malformed input: bad files, invalid maps, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed its configured cap.
class SizeError : public std::runtime_error {
 public:
  SizeError(const std::string& what_, std::size_t bound, std::size_t partial = 0)
      : std::runtime_error(what_ + " (cap " + std::to_string(bound) + ")"),
        bound_(bound),
        partial_(partial) {}

  std::size_t bound() const noexcept { return bound_; }
  std::size_t partial() const noexcept { return partial_; }

 private:
  std::size_t bound_;
  std::size_t partial_;
};

}  // namespace boxloop
