#include "qalg/fueter.hpp"

#include <algorithm>

namespace qalg {

PolySpace PolySpace::of_degree(Index k) {
  PolySpace p;
  p.degree = k;
  // lexicographically descending exponent tuples with a+b+c+d = k
  for (Index a = k; a >= 0; --a)
    for (Index b = k - a; b >= 0; --b)
      for (Index c = k - a - b; c >= 0; --c)
        p.monomials.push_back({a, b, c, k - a - b - c});
  return p;
}

Index PolySpace::index_of(const std::array<Index, 4>& expo) const {
  for (Index m = 0; m < count(); ++m)
    if (monomials[m] == expo) return m;
  throw UsageError("PolySpace: exponent tuple not of this degree");
}

std::pair<Index, Rational> flat_complex_structure(int j, Index i) {
  // I1 dx2 = dx3, I2 dx3 = dx1, I3 dx1 = dx2, Ij dx0 = dxj, Ij^2 = -1
  static const Index plus[4][4] = {
      // plus[j][i] = target index, sign in minus[j][i]
      {0, 0, 0, 0},
      {1, 0, 3, 2},  // I1: dx0->dx1, dx1->-dx0, dx2->dx3, dx3->-dx2
      {2, 3, 0, 1},  // I2: dx0->dx2, dx1->-dx3, dx2->-dx0, dx3->dx1
      {3, 2, 1, 0},  // I3: dx0->dx3, dx1->dx2, dx2->-dx1, dx3->-dx0
  };
  static const int sign[4][4] = {
      {0, 0, 0, 0},
      {1, -1, 1, -1},
      {1, -1, -1, 1},
      {1, 1, -1, -1},
  };
  return {plus[j][i], Rational(sign[j][i])};
}

RatMatrix fueter_matrix(Index k) {
  PolySpace pk = PolySpace::of_degree(k);
  PolySpace pk1 = PolySpace::of_degree(k > 0 ? k - 1 : 0);
  const Index rows = (k == 0) ? 4 : 4 * pk1.count();
  RatMatrix d = RatMatrix::Zero(rows, pk.real_dim());
  if (k == 0) return d;  // constants die
  for (Index m = 0; m < pk.count(); ++m) {
    const auto& e = pk.monomials[m];
    for (Index i = 0; i < 4; ++i) {
      if (e[i] == 0) continue;
      std::array<Index, 4> de = e;
      de[i] -= 1;
      Index mp = pk1.index_of(de);
      Rational w(e[i]);
      // h = 0: da0 contributes to dx_i
      d(i * pk1.count() + mp, 4 * m + 0) += w;
      // h = j: Ij(d a_j)
      for (int j = 1; j <= 3; ++j) {
        auto [ip, s] = flat_complex_structure(j, i);
        d(ip * pk1.count() + mp, 4 * m + j) += w * s;
      }
    }
  }
  return d;
}

RatMatrix fueter_matrix_alt(Index k) {
  PolySpace pk = PolySpace::of_degree(k);
  PolySpace pk1 = PolySpace::of_degree(k > 0 ? k - 1 : 0);
  const Index rows = (k == 0) ? 16 : 16 * pk1.count();
  RatMatrix d = RatMatrix::Zero(rows, pk.real_dim());
  if (k == 0) return d;
  for (Index m = 0; m < pk.count(); ++m) {
    const auto& e = pk.monomials[m];
    for (Index i = 0; i < 4; ++i) {
      if (e[i] == 0) continue;
      std::array<Index, 4> de = e;
      de[i] -= 1;
      Index mp = pk1.index_of(de);
      Rational w(e[i]);
      // da: quaternion component g at dx_i
      for (Index g = 0; g < 4; ++g)
        d((i * 4 + g) * pk1.count() + mp, 4 * m + g) += w;
      // -Ij(da) i_j: Ij moves dx_i to s dx_{i'}; the value is right-multiplied
      for (int j = 1; j <= 3; ++j) {
        auto [ip, s] = flat_complex_structure(j, i);
        RatMatrix rm = right_mult_matrix(Quaternion::i(j));
        for (Index g = 0; g < 4; ++g)
          for (Index h = 0; h < 4; ++h)
            if (rm(g, h) != 0)
              d((ip * 4 + g) * pk1.count() + mp, 4 * m + h) -= w * s * rm(g, h);
      }
    }
  }
  return d;
}

FueterKernel fueter_kernel(Index k) {
  FueterKernel out;
  out.polys = PolySpace::of_degree(k);
  out.kernel_space = kernel(fueter_matrix(k));
  // prime part: I-valued elements, i.e. zero real component per monomial
  const Subspace& ks = out.kernel_space;
  Subspace prime = Subspace::zero(out.polys.real_dim());
  if (ks.dim() > 0) {
    RatMatrix m(out.polys.count(), ks.dim());
    for (Index j = 0; j < ks.dim(); ++j)
      for (Index mm = 0; mm < out.polys.count(); ++mm)
        m(mm, j) = ks.basis()(j, 4 * mm);
    prime = Subspace::from_rows(kernel_basis(m) * ks.basis());
  }
  out.hbasis = extract_h_basis(ks);
  RatMatrix coords = h_coordinates_matrix(out.hbasis);
  out.module = AHModule::make(out.hbasis.rows(), prime.map_through(coords));
  return out;
}

std::vector<Index> invariant_grades(Index k_max) {
  std::vector<Index> dims;
  for (Index k = 0; k <= k_max; ++k) {
    FueterKernel fk = fueter_kernel(k);
    // pullback of q -> -q scales degree-k monomials by (-1)^k
    RatMatrix p = RatMatrix::Identity(fk.polys.real_dim(), fk.polys.real_dim());
    if (k % 2 == 1) p = -p;
    RatMatrix fixed =
        p - RatMatrix::Identity(fk.polys.real_dim(), fk.polys.real_dim());
    dims.push_back(intersect(fk.kernel_space, kernel(fixed)).dim());
  }
  return dims;
}

namespace {

Index wedge_index(Index a, Index b, Index n4) {
  if (a > b) std::swap(a, b);
  return a * (2 * n4 - a - 1) / 2 + (b - a - 1);
}

// Ij on a 1-form index of R^{4n}: per-slot flat structure.
std::pair<Index, Rational> slot_structure(int j, Index idx) {
  Index slot = idx / 4;
  auto [ip, s] = flat_complex_structure(j, idx % 4);
  return {4 * slot + ip, s};
}

}  // namespace

std::pair<Index, Index> delta_split(Index n) {
  if (n < 1) throw UsageError("delta_split: n >= 1");
  const Index n4 = 4 * n;
  const Index dim = n4 * (n4 - 1) / 2;
  RatMatrix delta = RatMatrix::Zero(dim, dim);
  for (Index a = 0; a < n4; ++a)
    for (Index b = a + 1; b < n4; ++b)
      for (int j = 1; j <= 3; ++j) {
        auto [ap, sa] = slot_structure(j, a);
        auto [bp, sb] = slot_structure(j, b);
        Rational s = sa * sb;
        if (ap > bp) s = -s;
        delta(wedge_index(ap, bp, n4), wedge_index(a, b, n4)) += s;
      }
  RatMatrix identity = RatMatrix::Identity(dim, dim);
  if (RatMatrix(delta * delta - 2 * delta - 3 * identity) !=
      RatMatrix(RatMatrix::Zero(dim, dim)))
    throw InvariantViolation("delta_split: delta^2 != 2 delta + 3");
  Index plus = kernel(RatMatrix(delta - 3 * identity)).dim();
  Index minus = kernel(RatMatrix(delta + identity)).dim();
  if (plus + minus != dim)
    throw InvariantViolation("delta_split: eigenspaces do not fill");
  return {plus, minus};
}

}  // namespace qalg
