// Acceptance battery: one pass/fail line per criterion, nonzero exit on any
// failure.  Also reachable as `qalg suite`.

#include <cstdio>

#include "qalg/acceptance.hpp"

int main() {
  bool all = true;
  for (int i = 1; i <= 8; ++i) {
    auto r = qalg::acceptance::run_one(i);
    std::printf("[%s] %d. %s: %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.index,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
