#include "qalg/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace qalg {

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw UsageError("empty rational literal");
  try {
    Rational r(s);
    r.canonicalize();
    if (r.get_den() <= 0) throw UsageError("nonpositive denominator: " + s);
    return r;
  } catch (const std::invalid_argument&) {
    throw UsageError("bad rational literal: " + s);
  }
}

std::string format_rational(const Rational& r) {
  return r.get_den() == 1 ? r.get_num().get_str() : r.get_str();
}

namespace {

// Pivot choice: any nonzero entry gives the same canonical RREF; preferring a
// short one damps coefficient growth.
size_t entry_size(const Rational& r) {
  return mpz_sizeinbase(r.get_num().get_mpz_t(), 2) +
         mpz_sizeinbase(r.get_den().get_mpz_t(), 2);
}

}  // namespace

RatMatrix rref(RatMatrix m) {
  const Index rows = m.rows(), cols = m.cols();
  Index lead = 0;
  for (Index col = 0; col < cols && lead < rows; ++col) {
    Index pivot = -1;
    size_t best = 0;
    for (Index r = lead; r < rows; ++r) {
      if (m(r, col) != 0) {
        size_t sz = entry_size(m(r, col));
        if (pivot < 0 || sz < best) {
          pivot = r;
          best = sz;
        }
      }
    }
    if (pivot < 0) continue;
    if (pivot != lead) m.row(pivot).swap(m.row(lead));
    {
      Rational inv = 1 / m(lead, col);
      for (Index c = col; c < cols; ++c)
        if (m(lead, c) != 0) m(lead, c) *= inv;
    }
    for (Index r = 0; r < rows; ++r) {
      if (r == lead) continue;
      const Rational& f = m(r, col);
      if (f == 0) continue;
      for (Index c = col + 1; c < cols; ++c)
        if (m(lead, c) != 0) m(r, c) -= f * m(lead, c);
      m(r, col) = 0;
    }
    ++lead;
  }
  return m.topRows(lead).eval();
}

Index rank_of(const RatMatrix& m) { return rref(m).rows(); }

RatMatrix kernel_basis(const RatMatrix& m) {
  const Index cols = m.cols();
  RatMatrix r = rref(m);
  std::vector<Index> pivot_col(r.rows());
  std::vector<bool> is_pivot(cols, false);
  for (Index i = 0; i < r.rows(); ++i) {
    Index c = 0;
    while (c < cols && r(i, c) == 0) ++c;
    pivot_col[i] = c;
    if (c < cols) is_pivot[c] = true;
  }
  RatMatrix out(cols - r.rows(), cols);
  out.setZero();
  Index k = 0;
  for (Index free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    out(k, free_col) = 1;
    for (Index i = 0; i < r.rows(); ++i)
      if (pivot_col[i] < cols) out(k, pivot_col[i]) = -r(i, free_col);
    ++k;
  }
  return rref(std::move(out));
}

Subspace Subspace::full(Index ambient) {
  Subspace s;
  s.ambient_ = ambient;
  s.basis_ = RatMatrix::Identity(ambient, ambient);
  return s;
}

Subspace Subspace::from_rows(const RatMatrix& rows) {
  Subspace s;
  s.ambient_ = rows.cols();
  s.basis_ = rref(rows);
  return s;
}

Subspace Subspace::from_canonical(RatMatrix canon) {
  Subspace s;
  s.ambient_ = canon.cols();
  s.basis_ = std::move(canon);
  return s;
}

RatVector Subspace::reduce(const RatVector& v) const {
  if (v.size() != ambient_) throw UsageError("ambient-dimension mismatch");
  RatVector w = v;
  for (Index i = 0; i < basis_.rows(); ++i) {
    Index c = 0;
    while (c < ambient_ && basis_(i, c) == 0) ++c;
    if (c == ambient_ || w(c) == 0) continue;
    const Rational f = w(c);
    for (Index j = c; j < ambient_; ++j)
      if (basis_(i, j) != 0) w(j) -= f * basis_(i, j);
  }
  return w;
}

bool Subspace::contains(const RatVector& v) const {
  RatVector w = reduce(v);
  for (Index j = 0; j < w.size(); ++j)
    if (w(j) != 0) return false;
  return true;
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_ != ambient_) return false;
  for (Index i = 0; i < other.basis_.rows(); ++i)
    if (!contains(other.basis_.row(i).transpose())) return false;
  return true;
}

bool Subspace::operator==(const Subspace& o) const {
  return ambient_ == o.ambient_ && basis_.rows() == o.basis_.rows() &&
         basis_ == o.basis_;
}

RatVector Subspace::coordinates(const RatVector& v) const {
  RatVector coeff(basis_.rows());
  RatVector w = v;
  for (Index i = 0; i < basis_.rows(); ++i) {
    Index c = 0;
    while (c < ambient_ && basis_(i, c) == 0) ++c;
    coeff(i) = (c < ambient_) ? w(c) : Rational(0);
    if (coeff(i) == 0) continue;
    for (Index j = c; j < ambient_; ++j)
      if (basis_(i, j) != 0) w(j) -= coeff(i) * basis_(i, j);
  }
  for (Index j = 0; j < w.size(); ++j)
    if (w(j) != 0) throw InvariantViolation("vector not in subspace");
  return coeff;
}

Subspace Subspace::map_through(const RatMatrix& m) const {
  if (m.cols() != ambient_) throw UsageError("map/ambient mismatch");
  return Subspace::from_rows(basis_ * m.transpose());
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw UsageError("ambient-dimension mismatch in intersect");
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient_dim());
  // x = u A = v B; solve (u, -v) in the left kernel of [A; B].
  RatMatrix stacked(a.dim() + b.dim(), a.ambient_dim());
  stacked.topRows(a.dim()) = a.basis();
  stacked.bottomRows(b.dim()) = b.basis();
  RatMatrix ker = kernel_basis(stacked.transpose());
  RatMatrix vecs(ker.rows(), a.ambient_dim());
  for (Index i = 0; i < ker.rows(); ++i)
    vecs.row(i) = ker.row(i).head(a.dim()) * a.basis();
  return Subspace::from_rows(vecs);
}

Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw UsageError("ambient-dimension mismatch in sum");
  RatMatrix stacked(a.dim() + b.dim(), a.ambient_dim());
  stacked.topRows(a.dim()) = a.basis();
  stacked.bottomRows(b.dim()) = b.basis();
  return Subspace::from_rows(stacked);
}

Subspace kernel(const RatMatrix& m) {
  return Subspace::from_canonical(kernel_basis(m));
}

Subspace image(const RatMatrix& m) {
  return Subspace::from_rows(m.transpose());
}

RatMatrix quotient_basis(const Subspace& a, const Subspace& b) {
  if (!a.contains(b))
    throw InvariantViolation("quotient_basis: b is not contained in a");
  RatMatrix reps(a.dim() - b.dim(), a.ambient_dim());
  Index k = 0;
  Subspace seen = b;
  for (Index i = 0; i < a.dim(); ++i) {
    RatVector v = seen.reduce(a.basis().row(i).transpose());
    bool zero = true;
    for (Index j = 0; j < v.size(); ++j)
      if (v(j) != 0) {
        zero = false;
        break;
      }
    if (zero) continue;
    reps.row(k++) = v.transpose();
    seen = sum(seen, Subspace::from_rows(v.transpose()));
  }
  if (k != reps.rows())
    throw InvariantViolation("quotient_basis: dimension bookkeeping failed");
  return rref(std::move(reps));
}

std::optional<RatVector> solve_in_rowspace(const RatMatrix& rows,
                                           const RatVector& target) {
  // Solve rows^T x = target; free variables are set to zero.
  const Index n = rows.rows(), m = rows.cols();
  if (target.size() != m) throw UsageError("solve_in_rowspace: size mismatch");
  RatMatrix aug(m, n + 1);
  aug.leftCols(n) = rows.transpose();
  aug.col(n) = target;
  RatMatrix r = rref(std::move(aug));
  RatVector x = RatVector::Zero(n);
  for (Index i = 0; i < r.rows(); ++i) {
    Index c = 0;
    while (c <= n && r(i, c) == 0) ++c;
    if (c == n) return std::nullopt;  // 0 = 1 row: inconsistent
    if (c < n) x(c) = r(i, n);
  }
  return x;
}

}  // namespace qalg
