#ifndef QALG_LINALG_HPP
#define QALG_LINALG_HPP

#include <optional>
#include <vector>

#include "qalg/numeric.hpp"

namespace qalg {

// Reduced row-echelon form with zero rows removed.  Unique for a given row
// space, so it doubles as a canonical form for subspaces.
RatMatrix rref(RatMatrix m);
Index rank_of(const RatMatrix& m);

// Right kernel {x : m x = 0}, rows of the result form a canonical basis.
RatMatrix kernel_basis(const RatMatrix& m);

// A rational subspace of R^N in canonical form: basis rows are in RREF with
// strictly increasing pivot columns.  Two Subspaces are equal as sets iff
// their representations are identical.
class Subspace {
 public:
  Subspace() : ambient_(0), basis_(0, 0) {}

  static Subspace zero(Index ambient) {
    Subspace s;
    s.ambient_ = ambient;
    s.basis_.resize(0, ambient);
    return s;
  }
  static Subspace full(Index ambient);
  // Span of the given rows (need not be independent).
  static Subspace from_rows(const RatMatrix& rows);
  // Trusts that `canon` is already canonical; used internally.
  static Subspace from_canonical(RatMatrix canon);

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.rows(); }
  const RatMatrix& basis() const { return basis_; }

  bool contains(const RatVector& v) const;
  bool contains(const Subspace& other) const;
  bool operator==(const Subspace& o) const;
  bool operator!=(const Subspace& o) const { return !(*this == o); }

  // Residue of v after reduction against the basis (zero iff v is a member).
  RatVector reduce(const RatVector& v) const;
  // Coordinates of a member vector in the canonical basis.
  RatVector coordinates(const RatVector& v) const;

  // Image under a linear map given by `m` acting on column vectors
  // (ambient -> m.rows()).
  Subspace map_through(const RatMatrix& m) const;

 private:
  Index ambient_;
  RatMatrix basis_;
};

Subspace intersect(const Subspace& a, const Subspace& b);
Subspace sum(const Subspace& a, const Subspace& b);
// Right kernel / column space of a matrix, as subspaces.
Subspace kernel(const RatMatrix& m);
Subspace image(const RatMatrix& m);
// Coset representatives of a/b; requires b <= a.
RatMatrix quotient_basis(const Subspace& a, const Subspace& b);

// Solves x * rows = target for a single row vector; nullopt when target is
// not in the row space.
std::optional<RatVector> solve_in_rowspace(const RatMatrix& rows,
                                           const RatVector& target);

}  // namespace qalg

#endif  // QALG_LINALG_HPP
