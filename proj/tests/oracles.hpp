#ifndef QALG_TESTS_ORACLES_HPP
#define QALG_TESTS_ORACLES_HPP

// Test-only oracles, independent of the library's elimination path.

#include <gmpxx.h>

#include "qalg/numeric.hpp"

namespace qalg::oracles {

// Rank via fraction-free (Bareiss) elimination over the integers after
// clearing denominators row by row.
inline Index bareiss_rank(const RatMatrix& m) {
  const Index rows = m.rows(), cols = m.cols();
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (Index i = 0; i < rows; ++i) {
    mpz_class lcm = 1;
    for (Index j = 0; j < cols; ++j)
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(i, j).get_den().get_mpz_t());
    for (Index j = 0; j < cols; ++j) {
      Rational scaled = m(i, j) * Rational(lcm);
      a[i][j] = scaled.get_num();
    }
  }
  mpz_class prev = 1;
  Index rank = 0;
  for (Index col = 0; col < cols && rank < rows; ++col) {
    Index pivot = -1;
    for (Index r = rank; r < rows; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[pivot], a[rank]);
    for (Index r = rank + 1; r < rows; ++r) {
      for (Index c = col + 1; c < cols; ++c) {
        mpz_class t = a[r][c] * a[rank][col] - a[r][col] * a[rank][c];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a[r][c] = t;
      }
      a[r][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

}  // namespace qalg::oracles

#endif
