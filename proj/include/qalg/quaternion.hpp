#ifndef QALG_QUATERNION_HPP
#define QALG_QUATERNION_HPP

#include <array>
#include <vector>

#include "qalg/numeric.hpp"

namespace qalg {

// Quaternion over the rationals, basis (1, i1, i2, i3) with
// i1 i2 = i3 = -i2 i1, i2 i3 = i1, i3 i1 = i2, i1^2 = i2^2 = i3^2 = -1.
struct Quaternion {
  Rational r0, r1, r2, r3;

  Quaternion() : r0(0), r1(0), r2(0), r3(0) {}
  Quaternion(Rational a, Rational b, Rational c, Rational d)
      : r0(std::move(a)), r1(std::move(b)), r2(std::move(c)), r3(std::move(d)) {}
  static Quaternion one() { return {1, 0, 0, 0}; }
  static Quaternion i(int k);  // i(1) = i1, i(2) = i2, i(3) = i3

  Quaternion conj() const { return {r0, -r1, -r2, -r3}; }
  Rational norm2() const { return r0 * r0 + r1 * r1 + r2 * r2 + r3 * r3; }
  bool is_zero() const { return r0 == 0 && r1 == 0 && r2 == 0 && r3 == 0; }
  bool is_real() const { return r1 == 0 && r2 == 0 && r3 == 0; }
  bool is_imaginary() const { return r0 == 0; }

  Quaternion operator+(const Quaternion& q) const {
    return {r0 + q.r0, r1 + q.r1, r2 + q.r2, r3 + q.r3};
  }
  Quaternion operator-(const Quaternion& q) const {
    return {r0 - q.r0, r1 - q.r1, r2 - q.r2, r3 - q.r3};
  }
  Quaternion operator-() const { return {-r0, -r1, -r2, -r3}; }
  Quaternion operator*(const Quaternion& q) const {
    return {r0 * q.r0 - r1 * q.r1 - r2 * q.r2 - r3 * q.r3,
            r0 * q.r1 + r1 * q.r0 + r2 * q.r3 - r3 * q.r2,
            r0 * q.r2 + r2 * q.r0 + r3 * q.r1 - r1 * q.r3,
            r0 * q.r3 + r3 * q.r0 + r1 * q.r2 - r2 * q.r1};
  }
  Quaternion operator*(const Rational& s) const {
    return {r0 * s, r1 * s, r2 * s, r3 * s};
  }
  bool operator==(const Quaternion& q) const {
    return r0 == q.r0 && r1 == q.r1 && r2 == q.r2 && r3 == q.r3;
  }
  bool operator!=(const Quaternion& q) const { return !(*this == q); }

  Quaternion inverse() const;

  // Coordinates in the fixed (r0, r1, r2, r3) order.
  RatVector to_vector() const;
  static Quaternion from_vector(const RatVector& v, Index offset = 0);
};

// 4x4 real matrices of left / right multiplication: (q*x) = L(q) x,
// (x*q) = R(q) x on coordinate columns.
RatMatrix left_mult_matrix(const Quaternion& q);
RatMatrix right_mult_matrix(const Quaternion& q);

// Block-diagonal left multiplication by q on H^n = R^{4n} with slot i at
// coordinates 4i..4i+3.
RatMatrix left_mult_matrix(const Quaternion& q, Index slots);

// q . v without materializing the block matrix.
RatVector left_mult_apply(const Quaternion& q, const RatVector& v);

// Canonical probe directions for stability and fingerprints:
// i1, i2, i3, i1+i2, i2+i3, i3+i1, i1+i2+i3.
const std::vector<Quaternion>& canonical_probes();

// Seeded random nonzero imaginary direction with small integer components.
Quaternion random_imaginary(Rng& rng, long max_abs = 4);

}  // namespace qalg

#endif  // QALG_QUATERNION_HPP
