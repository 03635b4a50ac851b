#ifndef QALG_NUMERIC_HPP
#define QALG_NUMERIC_HPP

#include <gmpxx.h>
#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

}  // namespace Eigen

namespace qalg {

using Rational = mpq_class;
using Index = Eigen::Index;

using RatMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

// Errors surfaced by the library.  The CLI maps these to exit codes.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAHModuleError : InvariantViolation {
  explicit NotAHModuleError(std::string msg, RatVector w = {})
      : InvariantViolation(std::move(msg)), witness(std::move(w)) {}
  RatVector witness;  // nonzero joint-kernel element, when available
};

// Parses "p/q" or "p"; canonicalizes, denominator > 0.
Rational parse_rational(const std::string& s);
std::string format_rational(const Rational& r);

// Deterministic RNG for all randomized checks.  A fixed seed fixes every
// sampled subspace, probe direction and test instance.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform integer in [lo, hi].
  long integer(long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return d(eng_);
  }
  Rational rational(long max_abs = 4) {
    return Rational(integer(-max_abs, max_abs));
  }
  RatVector vector(Index n, long max_abs = 4) {
    RatVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = rational(max_abs);
    return v;
  }
  RatMatrix matrix(Index rows, Index cols, long max_abs = 4) {
    RatMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = rational(max_abs);
    return m;
  }
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace qalg

#endif  // QALG_NUMERIC_HPP
