#pragma once

// Wall-clock limits for the semi-decision searches.

#include <chrono>
#include <optional>
#include <string>

#include "rankone/error.hpp"

namespace rankone {

class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  // No limit.
  Deadline() = default;
  static Deadline after(std::chrono::milliseconds ms) {
    Deadline d;
    d.at_ = Clock::now() + ms;
    return d;
  }

  bool limited() const noexcept { return at_.has_value(); }
  bool expired() const noexcept { return at_ && Clock::now() >= *at_; }

  void check(std::string const& what) const {
    if (expired()) {
      throw BudgetExhausted(what + ": wall-clock budget exhausted");
    }
  }

 private:
  std::optional<Clock::time_point> at_;
};

}  // namespace rankone
