#include "qalg/embedded.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qalg {

namespace {

void check_budget(Index ambient, Index budget) {
  if (ambient > budget) {
    std::ostringstream msg;
    msg << "ambient dimension " << ambient << " exceeds budget " << budget;
    throw BudgetExceeded(msg.str());
  }
}

std::vector<std::vector<int>> all_permutations(int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

int perm_sign(const std::vector<int>& p) {
  int inversions = 0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

// Prime part of an H-submodule: members whose real H-components all vanish.
Subspace prime_of(const Subspace& space, Index dual_product) {
  if (space.dim() == 0) return space;
  RatMatrix m(dual_product, space.dim());
  for (Index j = 0; j < space.dim(); ++j)
    for (Index d = 0; d < dual_product; ++d)
      m(d, j) = space.basis()(j, 4 * d);
  RatMatrix ker = kernel_basis(m);
  return Subspace::from_rows(ker * space.basis());
}

}  // namespace

EmbeddedModule make_embedded(std::vector<Index> factor_dims, Subspace space,
                             Subspace prime) {
  EmbeddedModule e;
  e.factor_dims = std::move(factor_dims);
  e.space = std::move(space);
  e.prime = std::move(prime);
  e.hbasis = extract_h_basis(e.space);
  e.coords = h_coordinates_matrix(e.hbasis);
  Subspace uprime = e.prime.map_through(e.coords);
  e.base = AHModule::make(e.hbasis.rows(), uprime);
  return e;
}

EmbeddedModule embedded_unit() {
  RatMatrix prime_rows(3, 4);
  prime_rows.setZero();
  prime_rows(0, 1) = prime_rows(1, 2) = prime_rows(2, 3) = 1;
  return make_embedded({}, Subspace::full(4), Subspace::from_rows(prime_rows));
}

RatMatrix iota_matrix(const AHModule& u) {
  const Index d = u.dagger_dim(), n = u.rank();
  RatMatrix m(4 * d, 4 * n);
  for (Index k = 0; k < d; ++k)
    for (Index i = 0; i < n; ++i)
      m.block(4 * k, 4 * i, 4, 4) = right_mult_matrix(Quaternion::from_vector(
          u.dagger().basis().row(k).transpose(), 4 * i));
  return m;
}

EmbeddedModule iota(const AHModule& u) {
  RatMatrix m = iota_matrix(u);
  Subspace space = Subspace::full(u.dim()).map_through(m);
  Subspace prime = u.uprime().map_through(m);
  return make_embedded({u.dagger_dim()}, std::move(space), std::move(prime));
}

EmbeddedModule slab_product(const EmbeddedModule& a, const EmbeddedModule& b,
                            Index budget) {
  const Index d1 = a.dual_product(), d2 = b.dual_product();
  check_budget(4 * d1 * d2, budget);
  std::vector<Index> factors = a.factor_dims;
  factors.insert(factors.end(), b.factor_dims.begin(), b.factor_dims.end());
  if (a.dim() == 0 || b.dim() == 0) {
    Subspace z = Subspace::zero(4 * d1 * d2);
    return make_embedded(std::move(factors), z, z);
  }
  // Candidates w (x) e_nu from a; constraint: for each first-group index mu
  // the (H, second-group) slice lies in b.space.
  const RatMatrix& abasis = a.space.basis();
  RatMatrix bperp = kernel_basis(b.space.basis());
  const Index na = a.dim();
  RatMatrix m = RatMatrix::Zero(bperp.rows() * d1, na * d2);
  for (Index w = 0; w < na; ++w)
    for (Index nu = 0; nu < d2; ++nu)
      for (Index f = 0; f < bperp.rows(); ++f)
        for (Index mu = 0; mu < d1; ++mu) {
          Rational acc = 0;
          for (Index h = 0; h < 4; ++h) {
            const Rational& x = abasis(w, 4 * mu + h);
            if (x != 0 && bperp(f, 4 * nu + h) != 0)
              acc += x * bperp(f, 4 * nu + h);
          }
          if (acc != 0) m(f * d1 + mu, w * d2 + nu) = acc;
        }
  RatMatrix coeff = kernel_basis(m);
  RatMatrix rows = RatMatrix::Zero(coeff.rows(), 4 * d1 * d2);
  for (Index r = 0; r < coeff.rows(); ++r)
    for (Index w = 0; w < na; ++w)
      for (Index nu = 0; nu < d2; ++nu) {
        const Rational& c = coeff(r, w * d2 + nu);
        if (c == 0) continue;
        for (Index mu = 0; mu < d1; ++mu)
          for (Index h = 0; h < 4; ++h) {
            const Rational& x = abasis(w, 4 * mu + h);
            if (x != 0) rows(r, 4 * (mu * d2 + nu) + h) += c * x;
          }
      }
  Subspace space = Subspace::from_rows(rows);
  Subspace prime = prime_of(space, d1 * d2);
  return make_embedded(std::move(factors), std::move(space), std::move(prime));
}

EmbeddedModule qtensor(const AHModule& u, const AHModule& v, Index budget) {
  return slab_product(iota(u), iota(v), budget);
}

EmbeddedModule qtensor_multi(const std::vector<AHModule>& mods, Index budget) {
  if (mods.empty()) return embedded_unit();
  EmbeddedModule acc = iota(mods[0]);
  for (size_t t = 1; t < mods.size(); ++t)
    acc = slab_product(acc, iota(mods[t]), budget);
  return acc;
}

EmbeddedModule qtensor_k(const AHModule& u, Index k, Index budget) {
  if (k < 0) throw UsageError("qtensor_k: k must be nonnegative");
  return qtensor_multi(std::vector<AHModule>(k, u), budget);
}

RatVector apply_factor_map(const RatVector& x, const RatMatrix& L) {
  const Index ds = L.cols(), dt = L.rows();
  if (x.size() != 4 * ds)
    throw UsageError("apply_factor_map: vector/matrix size mismatch");
  RatVector y = RatVector::Zero(4 * dt);
  for (Index m = 0; m < ds; ++m)
    for (Index h = 0; h < 4; ++h) {
      const Rational& v = x(4 * m + h);
      if (v == 0) continue;
      for (Index mp = 0; mp < dt; ++mp)
        if (L(mp, m) != 0) y(4 * mp + h) += L(mp, m) * v;
    }
  return y;
}

RatVector permute_factors(const RatVector& x, const std::vector<Index>& dims,
                          const std::vector<int>& perm) {
  const int k = static_cast<int>(dims.size());
  Index d = 1;
  for (Index f : dims) d *= f;
  std::vector<Index> out_dims(k);
  for (int p = 0; p < k; ++p) out_dims[p] = dims[perm[p]];
  RatVector y = RatVector::Zero(x.size());
  std::vector<Index> digit(k);
  for (Index m = 0; m < d; ++m) {
    Index rem = m;
    for (int p = k - 1; p >= 0; --p) {
      digit[p] = rem % dims[p];
      rem /= dims[p];
    }
    Index out = 0;
    for (int p = 0; p < k; ++p) out = out * out_dims[p] + digit[perm[p]];
    for (Index h = 0; h < 4; ++h) y(4 * out + h) = x(4 * m + h);
  }
  return y;
}

RatVector symmetrize_factors(const RatVector& x,
                             const std::vector<Index>& dims, bool antisym) {
  const int k = static_cast<int>(dims.size());
  for (Index f : dims)
    if (f != dims[0])
      throw UsageError("symmetrize_factors: factors must have equal dims");
  if (k <= 1) return x;
  RatVector acc = RatVector::Zero(x.size());
  Index count = 0;
  for (const auto& p : all_permutations(k)) {
    RatVector px = permute_factors(x, dims, p);
    if (antisym && perm_sign(p) < 0)
      acc -= px;
    else
      acc += px;
    ++count;
  }
  return acc / Rational(count);
}

EmbeddedModule projector_image(const EmbeddedModule& e, bool antisym) {
  RatMatrix rows(e.dim(), e.ambient_dim());
  for (Index i = 0; i < e.dim(); ++i) {
    RatVector img = symmetrize_factors(e.space.basis().row(i).transpose(),
                                       e.factor_dims, antisym);
    if (!e.space.contains(img))
      throw InvariantViolation("projector_image: subspace not invariant");
    rows.row(i) = img.transpose();
  }
  Subspace space = Subspace::from_rows(rows);
  RatMatrix prows(e.prime_dim(), e.ambient_dim());
  for (Index i = 0; i < e.prime_dim(); ++i)
    prows.row(i) = symmetrize_factors(e.prime.basis().row(i).transpose(),
                                      e.factor_dims, antisym)
                       .transpose();
  Subspace prime = Subspace::from_rows(prows);
  return make_embedded(e.factor_dims, std::move(space), std::move(prime));
}

EmbeddedModule sym_power(const AHModule& u, Index k, Index budget) {
  if (k == 0) return embedded_unit();
  EmbeddedModule full = qtensor_k(u, k, budget);
  return k == 1 ? full : projector_image(full, /*antisym=*/false);
}

EmbeddedModule alt_power(const AHModule& u, Index k, Index budget) {
  if (k == 0) return embedded_unit();
  EmbeddedModule full = qtensor_k(u, k, budget);
  return k == 1 ? full : projector_image(full, /*antisym=*/true);
}

std::optional<RatVector> elem_tensor(const RatVector& u, const RatVector& v,
                                     const AHModule& U, const AHModule& V) {
  const Index d1 = U.dagger_dim(), d2 = V.dagger_dim();
  std::vector<Quaternion> au(d1), bv(d2);
  for (Index m = 0; m < d1; ++m) au[m] = U.pair(m, u);
  for (Index n = 0; n < d2; ++n) bv[n] = V.pair(n, v);
  for (Index m = 0; m < d1; ++m)
    for (Index n = 0; n < d2; ++n)
      if (au[m] * bv[n] != bv[n] * au[m]) return std::nullopt;
  RatVector t(4 * d1 * d2);
  for (Index m = 0; m < d1; ++m)
    for (Index n = 0; n < d2; ++n) {
      Quaternion q = au[m] * bv[n];
      t(4 * (m * d2 + n) + 0) = q.r0;
      t(4 * (m * d2 + n) + 1) = q.r1;
      t(4 * (m * d2 + n) + 2) = q.r2;
      t(4 * (m * d2 + n) + 3) = q.r3;
    }
  return t;
}

EmbeddedModule embedded_submodule(const EmbeddedModule& parent,
                                  const Subspace& subspace) {
  if (!parent.space.contains(subspace))
    throw UsageError("embedded_submodule: not a subspace of the parent");
  Subspace prime = intersect(subspace, parent.prime);
  return make_embedded(parent.factor_dims, subspace, std::move(prime));
}

AHMorphism induced_morphism(const EmbeddedModule& a, const EmbeddedModule& b,
                            const RatMatrix& L) {
  const Index na = a.base.rank(), nb = b.base.rank();
  std::vector<std::vector<Quaternion>> coeff(na, std::vector<Quaternion>(nb));
  for (Index i = 0; i < na; ++i) {
    RatVector img = apply_factor_map(a.hbasis.row(i).transpose(), L);
    if (!b.space.contains(img))
      throw InvariantViolation("induced_morphism: image leaves the target");
    RatVector c = b.coords * img;
    for (Index j = 0; j < nb; ++j)
      coeff[i][j] = Quaternion::from_vector(c, 4 * j);
  }
  return AHMorphism(a.base, b.base, std::move(coeff));
}

TensorMorphismResult tensor_morphism(const AHMorphism& f, const AHMorphism& g,
                                     Index budget) {
  EmbeddedModule src = qtensor(f.source(), g.source(), budget);
  EmbeddedModule dst = qtensor(f.target(), g.target(), budget);
  RatMatrix lf = f.dagger_matrix().transpose();  // (U^dagger)* -> (W^dagger)*
  RatMatrix lg = g.dagger_matrix().transpose();
  const Index dtf = lf.rows(), dsf = lf.cols();
  const Index dtg = lg.rows(), dsg = lg.cols();
  RatMatrix L = RatMatrix::Zero(dtf * dtg, dsf * dsg);
  for (Index i = 0; i < dtf; ++i)
    for (Index j = 0; j < dsf; ++j) {
      if (lf(i, j) == 0) continue;
      for (Index k = 0; k < dtg; ++k)
        for (Index l = 0; l < dsg; ++l)
          if (lg(k, l) != 0) L(i * dtg + k, j * dsg + l) = lf(i, j) * lg(k, l);
    }
  AHMorphism phi = induced_morphism(src, dst, L);
  return TensorMorphismResult{std::move(phi), std::move(L), std::move(src),
                              std::move(dst)};
}

}  // namespace qalg
