#pragma once

#include <cstdint>

#include "presburger/errors.hpp"

namespace presburger {

// Resource limits for the symbolic operations. Defaults match the CLI
// defaults; every limit is overridable per call.
struct Limits {
  std::int64_t nodes = 1'000'000;   // formula nodes allocated per top-level operation
  std::int64_t pieces = 10'000;     // lattice pieces per decomposition
  std::int64_t galaxyCount = 64;    // largest finite galaxy counted exactly
  std::int64_t boxMax = 1 << 14;    // per-coordinate cap for auto-grown boxes
};

// Node-count meter. Installed per top-level operation via BudgetScope;
// formula constructors charge it through the thread-local pointer.
class Budget {
public:
  explicit Budget(std::int64_t limit) : remaining_(limit) {}

  void charge(std::int64_t n = 1) {
    remaining_ -= n;
    if (remaining_ < 0) throw BudgetError("node budget exceeded");
  }

private:
  std::int64_t remaining_;
};

Budget* currentBudget();

class BudgetScope {
public:
  explicit BudgetScope(Budget& b);
  ~BudgetScope();
  BudgetScope(const BudgetScope&) = delete;
  BudgetScope& operator=(const BudgetScope&) = delete;

private:
  Budget* prev_;
};

inline void chargeBudget(std::int64_t n = 1) {
  if (Budget* b = currentBudget()) b->charge(n);
}

} // namespace presburger
