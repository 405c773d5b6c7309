#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polystab {

/// A combinatorial size exceeded a configured budget. Carries the offending
/// count so callers can report it (and raise the budget if they choose).
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::uint64_t count)
      : std::runtime_error(what), count_(count) {}
  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t count_;
};

}  // namespace polystab
