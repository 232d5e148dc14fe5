#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nilspace {

/// Thrown when an exhaustive operation runs out of backtracking nodes.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::uint64_t limit);
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 1'000'000'000;

/// Node counter shared by every exhaustive operation running on this thread
/// while a BudgetScope is active. Without an active scope nothing is counted.
class Budget {
 public:
  explicit Budget(std::uint64_t limit = kDefaultNodeBudget) : limit_(limit) {}

  void charge(std::uint64_t nodes = 1) {
    used_ += nodes;
    if (used_ > limit_) throw BudgetExceeded(limit_);
  }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

class BudgetScope {
 public:
  explicit BudgetScope(Budget& budget);
  ~BudgetScope();
  BudgetScope(const BudgetScope&) = delete;
  BudgetScope& operator=(const BudgetScope&) = delete;

 private:
  Budget* previous_;
};

namespace detail {
inline thread_local Budget* active_budget = nullptr;
}

inline Budget* current_budget() { return detail::active_budget; }

inline void charge_nodes(std::uint64_t nodes = 1) {
  if (Budget* b = detail::active_budget) b->charge(nodes);
}

}  // namespace nilspace
