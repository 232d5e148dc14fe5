#include "nilspace/budget.hpp"

namespace nilspace {

BudgetExceeded::BudgetExceeded(std::uint64_t limit)
    : std::runtime_error("node budget of " + std::to_string(limit) + " exceeded"), limit_(limit) {}

BudgetScope::BudgetScope(Budget& budget) : previous_(detail::active_budget) {
  detail::active_budget = &budget;
}

BudgetScope::~BudgetScope() { detail::active_budget = previous_; }

}  // namespace nilspace
