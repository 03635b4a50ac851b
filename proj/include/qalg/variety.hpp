#ifndef QALG_VARIETY_HPP
#define QALG_VARIETY_HPP

#include "qalg/halgebra.hpp"

namespace qalg {

// theta_x(y): full contraction of a flat grade-k element y (in
// H (x) ((Q^dagger)*)^(x) k, dual dim d) against x^(x) k, x given in the
// canonical Q^dagger basis coordinates.
Quaternion eval_theta(const RatVector& x, const RatVector& y, Index k,
                      Index d);

// H-valued quadratic forms and their expansion into real polynomial
// equations on Q^dagger = R^d.  Monomials x_a x_b (a <= b) are ordered
// lexicographically; the last column is the constant term.
struct QuadraticSystem {
  Index qdual_dim = 0;
  std::vector<std::vector<Quaternion>> forms;  // packed symmetric coefficients
  std::vector<Quaternion> constants;           // one per form
  RatMatrix real_equations;                    // canonical RREF, rows x [monos|1]

  Index monomial_count() const { return qdual_dim * (qdual_dim + 1) / 2; }
  bool member(const RatVector& x) const;  // exact vanishing of every row
};

Index monomial_index(Index a, Index b, Index d);

// Homogeneous system of psi_y for y in a grade-2 generator subspace
// (canonical Q^dagger coordinates, zero constants).
QuadraticSystem emit_equations(const FreeAlgebra& alg,
                               const FactoredSpace& gens_grade2);

// Exact rank of the Jacobian of the system at a point.
Index jacobian_rank(const QuadraticSystem& sys, const RatVector& x);

// ---------------------------------------------------------------------------
// The Eguchi-Hanson family P^lambda over Q = R^3 (x) Y.
// ---------------------------------------------------------------------------

// Coordinate chart on Q^dagger = R^3 (x) Y^dagger: a point is a triple
// (v_1, v_2, v_3) of vectors in R^3 with x_{(l,t)} = v_t[l]; the Y^dagger
// basis beta_t is normalized against the map nu(q1,q2,q3) = i1 q1 + i2 q2 +
// i3 q3 so that beta_t corresponds to i_t.
struct EHChart {
  RatMatrix to_canonical;  // 9x9: v-coordinates -> canonical dagger coords
  RatVector point(const RatVector& v1, const RatVector& v2,
                  const RatVector& v3) const;  // chart coords of a triple
};

struct EHFamily {
  RatMatrix lambda;    // 3x3 symmetric, trace zero
  int case_index = 1;  // normal form: 1: a=b=0; 2: a>0=b; 3: b>0
  FreeAlgebra algebra;       // factored F^{R^3 (x) Y}, symmetric-power grades
  IdealData ideal;           // graded ideal (the lambda = 0 symbols)
  QuotientAlgebra quotient;  // graded quotient B = (+) R^{2j+1} (x) S_H^j Y
  QuadraticSystem system;    // deformed equations, v-coordinates
  EHChart chart;
  // Filtered dims of I^lambda and P^lambda at levels k = 0..K (doubled
  // labels 2k); for every lambda these match the graded partial sums.
  std::vector<Index> filtered_ideal_dims;
  std::vector<Index> filtered_quotient_dims;
};

// label_truncation is in the doubled grading of the cone (generator sits
// at grade 2);
// the free algebra is built through symmetric power label_truncation / 2.
EHFamily eh_family(const RatMatrix& lambda, Index label_truncation = 8,
                   Index budget = kDefaultBudget);

// The undeformed orthogonal-frame system in v-coordinates:
// v1.v1 = v2.v2 = v3.v3, v1.v2 = v2.v3 = v3.v1 = 0.
QuadraticSystem eh_reference_system();
// The system with constants from a symmetric 3x3 matrix a:
// v_j.v_j - a_jj all equal, v_j.v_k = a_jk.
QuadraticSystem eh_reference_system(const RatMatrix& a);

// Membership is preserved under an exact rotation: checks that every
// equation recombines into the system after substituting x -> R^{-1} x
// (chart-wise action v_t -> R v_t).
bool so3_action_check(const QuadraticSystem& sys, const RatMatrix& rotation);

// dim V_m at a sample point: the span of first derivatives of psi over the
// grade-1 (and optionally grade-2) elements restricted to the tangent space
// of the variety; 12 exactly when the hypercomplex structure is determined.
Index reconstruction_rank(const EHFamily& fam, const RatVector& x,
                          bool include_grade2 = true);

}  // namespace qalg

#endif  // QALG_VARIETY_HPP
