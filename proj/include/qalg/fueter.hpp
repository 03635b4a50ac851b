#ifndef QALG_FUETER_HPP
#define QALG_FUETER_HPP

#include "qalg/embedded.hpp"

namespace qalg {

// H-valued polynomials on H = R^4, coordinates (x0, x1, x2, x3).  A degree-k
// space is spanned by monomials x0^a x1^b x2^c x3^d with a+b+c+d = k, ordered
// lexicographically by exponent tuple (descending), with quaternion
// coefficients in slots: coordinate 4*m + h for monomial m.
struct PolySpace {
  Index degree = 0;
  std::vector<std::array<Index, 4>> monomials;

  static PolySpace of_degree(Index k);
  Index count() const { return static_cast<Index>(monomials.size()); }
  Index real_dim() const { return 4 * count(); }
  Index index_of(const std::array<Index, 4>& expo) const;
};

// The flat complex structures on 1-forms: I1 dx2 = dx3, I2 dx3 = dx1,
// I3 dx1 = dx2, Ij dx0 = dxj; returned as a signed permutation on the
// dx-index: (index, sign) = act(j, i).
std::pair<Index, Rational> flat_complex_structure(int j, Index i);

// Matrix of D(a) = d a0 + I1(d a1) + I2(d a2) + I3(d a3) from degree-k
// polynomials to 1-forms with degree-(k-1) coefficients.
RatMatrix fueter_matrix(Index k);

// Matrix of the alternative form D~(a) = da - I1(da) i1 - I2(da) i2 -
// I3(da) i3 (an H-valued 1-form; rows blocked by dx index then H component).
RatMatrix fueter_matrix_alt(Index k);

struct FueterKernel {
  PolySpace polys;
  Subspace kernel_space;  // subspace of R^{4 M_k}
  AHModule module;        // AH presentation: left H-action, prime = I-valued
  RatMatrix hbasis;
};

// Exact kernel of D on homogeneous degree-k polynomials.
FueterKernel fueter_kernel(Index k);

// Dimensions of the sigma-invariant part (sigma: q -> -q pullback) of the
// kernel per degree 0..k_max: full space for even degrees, zero for odd.
std::vector<Index> invariant_grades(Index k_max);

// delta = I1 (x) I1 + I2 (x) I2 + I3 (x) I3 on 2-forms of R^{4n}; returns
// the eigenspace dimensions (dim Lambda_+, dim Lambda_-) for eigenvalues
// 3 and -1 and verifies delta^2 = 2 delta + 3 exactly.
std::pair<Index, Index> delta_split(Index n);

}  // namespace qalg

#endif  // QALG_FUETER_HPP
