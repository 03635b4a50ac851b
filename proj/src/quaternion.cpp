#include "qalg/quaternion.hpp"

namespace qalg {

Quaternion Quaternion::i(int k) {
  switch (k) {
    case 1:
      return {0, 1, 0, 0};
    case 2:
      return {0, 0, 1, 0};
    case 3:
      return {0, 0, 0, 1};
    default:
      throw UsageError("Quaternion::i expects k in {1,2,3}");
  }
}

Quaternion Quaternion::inverse() const {
  Rational n = norm2();
  if (n == 0) throw InvariantViolation("inverse of zero quaternion");
  Quaternion c = conj();
  Rational inv = 1 / n;
  return {c.r0 * inv, c.r1 * inv, c.r2 * inv, c.r3 * inv};
}

RatVector Quaternion::to_vector() const {
  RatVector v(4);
  v << r0, r1, r2, r3;
  return v;
}

Quaternion Quaternion::from_vector(const RatVector& v, Index offset) {
  return {v(offset), v(offset + 1), v(offset + 2), v(offset + 3)};
}

RatMatrix left_mult_matrix(const Quaternion& q) {
  RatMatrix m(4, 4);
  // columns: q * e_h for e_h in (1, i1, i2, i3)
  for (int h = 0; h < 4; ++h) {
    Quaternion e;
    (h == 0 ? e.r0 : h == 1 ? e.r1 : h == 2 ? e.r2 : e.r3) = 1;
    Quaternion p = q * e;
    m(0, h) = p.r0;
    m(1, h) = p.r1;
    m(2, h) = p.r2;
    m(3, h) = p.r3;
  }
  return m;
}

RatMatrix right_mult_matrix(const Quaternion& q) {
  RatMatrix m(4, 4);
  for (int h = 0; h < 4; ++h) {
    Quaternion e;
    (h == 0 ? e.r0 : h == 1 ? e.r1 : h == 2 ? e.r2 : e.r3) = 1;
    Quaternion p = e * q;
    m(0, h) = p.r0;
    m(1, h) = p.r1;
    m(2, h) = p.r2;
    m(3, h) = p.r3;
  }
  return m;
}

RatMatrix left_mult_matrix(const Quaternion& q, Index slots) {
  RatMatrix block = left_mult_matrix(q);
  RatMatrix m = RatMatrix::Zero(4 * slots, 4 * slots);
  for (Index s = 0; s < slots; ++s)
    m.block(4 * s, 4 * s, 4, 4) = block;
  return m;
}

RatVector left_mult_apply(const Quaternion& q, const RatVector& v) {
  if (v.size() % 4 != 0) throw UsageError("left_mult_apply: size must be 4n");
  RatVector out(v.size());
  for (Index s = 0; s < v.size() / 4; ++s) {
    Quaternion p = q * Quaternion::from_vector(v, 4 * s);
    out(4 * s + 0) = p.r0;
    out(4 * s + 1) = p.r1;
    out(4 * s + 2) = p.r2;
    out(4 * s + 3) = p.r3;
  }
  return out;
}

const std::vector<Quaternion>& canonical_probes() {
  static const std::vector<Quaternion> probes = [] {
    Quaternion i1 = Quaternion::i(1), i2 = Quaternion::i(2),
               i3 = Quaternion::i(3);
    return std::vector<Quaternion>{i1,      i2,      i3,      i1 + i2,
                                   i2 + i3, i3 + i1, i1 + i2 + i3};
  }();
  return probes;
}

Quaternion random_imaginary(Rng& rng, long max_abs) {
  for (;;) {
    Quaternion q(0, rng.rational(max_abs), rng.rational(max_abs),
                 rng.rational(max_abs));
    if (!q.is_zero()) return q;
  }
}

}  // namespace qalg
