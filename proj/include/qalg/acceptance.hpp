#ifndef QALG_ACCEPTANCE_HPP
#define QALG_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qalg/embedded.hpp"

namespace qalg::acceptance {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// The eight acceptance criteria, exact arithmetic throughout.
std::vector<CriterionResult> run_all(std::uint64_t seed = 2026,
                                     Index budget = kDefaultBudget);
CriterionResult run_one(int index, std::uint64_t seed = 2026,
                        Index budget = kDefaultBudget);

}  // namespace qalg::acceptance

#endif  // QALG_ACCEPTANCE_HPP
