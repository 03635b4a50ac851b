#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qalg/embedded.hpp"

using namespace qalg;

namespace {

Quaternion I1 = Quaternion::i(1);
Quaternion I2 = Quaternion::i(2);

// Dimension-theorem oracle: (j, r) x (k, s) -> (js + rk - rs, rs), dims
// (4l, 2l + t).
struct DimOracle {
  Index j, r;
  DimOracle tensored(const DimOracle& o) const {
    return {j * o.r + r * o.j - r * o.r, r * o.r};
  }
  Index dim() const { return 4 * j; }
  Index prime_dim() const { return 2 * j + r; }
};

DimOracle oracle_of(const AHModule& m) {
  return {m.rank(), m.virtual_dim()};
}

// The standard counterexample to right-exactness: 0 -> U -> V -> W -> 0
// with U' = 0, V' spanned by (1,i1),(1,i2), W' = <i1,i2>, and Z = W.
struct ExactnessExample {
  AHModule u, v, w;
  AHMorphism phi, psi;
  ExactnessExample()
      : u(AHModule::make(1, Subspace::zero(4))),
        v(make_v()),
        w(make_w()),
        phi(u, v, {{Quaternion::one(), Quaternion()}}),
        psi(v, w, {{Quaternion()}, {Quaternion::one()}}) {}

  static AHModule make_w() {
    RatMatrix rows(2, 4);
    rows.setZero();
    rows(0, 1) = 1;
    rows(1, 2) = 1;
    return AHModule::make(1, Subspace::from_rows(rows));
  }
  static AHModule make_v() {
    RatMatrix rows(2, 8);
    rows.setZero();
    rows(0, 0) = 1;
    rows(0, 5) = 1;  // (1, i1)
    rows(1, 0) = 1;
    rows(1, 6) = 1;  // (1, i2)
    return AHModule::make(2, Subspace::from_rows(rows));
  }
};

}  // namespace

TEST_CASE("iota embeds injectively; H maps onto H (x) R") {
  AHModule h = AHModule::quaternions();
  EmbeddedModule eh = iota(h);
  CHECK(eh.factor_dims == std::vector<Index>{1});
  CHECK(eh.dim() == 4);
  CHECK(eh.prime_dim() == 3);

  EmbeddedModule ey = iota(y_module());
  CHECK(ey.ambient_dim() == 12);
  CHECK(ey.dim() == 8);
  CHECK(kernel(iota_matrix(y_module())).dim() == 0);
  CHECK(kernel(iota_matrix(u_linear())).dim() == 0);
}

TEST_CASE("H acts as unit: qtensor(H, Y) has the Y fingerprint") {
  EmbeddedModule t = qtensor(AHModule::quaternions(), y_module());
  CHECK(fingerprints_match(t.base, y_module()));
  EmbeddedModule t2 = qtensor(y_module(), AHModule::quaternions());
  CHECK(fingerprints_match(t2.base, y_module()));
}

TEST_CASE("Y (x)_H Y has dims (12, 7)") {
  EmbeddedModule t = qtensor(y_module(), y_module());
  CHECK(t.dim() == 12);
  CHECK(t.prime_dim() == 7);
  CHECK(t.base.rank() == 3);
  CHECK(t.base.virtual_dim() == 1);
}

TEST_CASE("the product of two nonzero modules can vanish") {
  AHModule a = AHModule::make(1, Subspace::zero(4));
  EmbeddedModule t = qtensor(a, a);
  CHECK(t.dim() == 0);
  CHECK(t.base.rank() == 0);
}

TEST_CASE("dimension theorem on seeded stable pairs") {
  Rng rng(2101);
  for (int trial = 0; trial < 6; ++trial) {
    Index j = rng.integer(1, 3);
    Index r = rng.integer(1, std::min<Index>(j, 2));
    Index k = rng.integer(1, 3);
    Index s = rng.integer(1, std::min<Index>(k, 2));
    AHModule a = random_stable(j, r, rng.raw());
    AHModule b = random_stable(k, s, rng.raw());
    DimOracle expect = oracle_of(a).tensored(oracle_of(b));
    EmbeddedModule t = qtensor(a, b);
    CHECK(t.dim() == expect.dim());
    CHECK(t.prime_dim() == expect.prime_dim());
  }
}

TEST_CASE("stability closure: stable (x)_H stable is stable") {
  EmbeddedModule t = qtensor(y_module(), y_module());
  CHECK(is_stable(t.base, {}, 10, 5).stable);
  AHModule a = random_stable(2, 1, 31), b = random_stable(2, 2, 32);
  CHECK(is_stable(qtensor(a, b).base, {}, 10, 6).stable);
}

TEST_CASE("commutativity at fingerprint level") {
  AHModule a = random_stable(2, 1, 41), b = random_stable(3, 2, 42);
  CHECK(fingerprints_match(qtensor(a, b).base, qtensor(b, a).base));
}

TEST_CASE("right-exactness counterexample: base sequence AH-exact, tensored "
          "exactly at the third position") {
  ExactnessExample ex;
  AHMorphism zin = AHMorphism::zero(AHModule::zero_module(), ex.u);
  AHMorphism zout = AHMorphism::zero(ex.w, AHModule::zero_module());
  auto rep = check_sequence({zin, ex.phi, ex.psi, zout});
  CHECK(rep.ah_exact);

  AHModule z = ex.w;  // Z = W
  // U (x) Z = 0, V (x) Z = 0, W (x) Z = W
  EmbeddedModule uz = qtensor(ex.u, z);
  EmbeddedModule vz = qtensor(ex.v, z);
  EmbeddedModule wz = qtensor(ex.w, z);
  CHECK(uz.dim() == 0);
  CHECK(vz.dim() == 0);
  CHECK(wz.dim() == 4);
  CHECK(wz.prime_dim() == 2);
  CHECK(fingerprints_match(wz.base, ex.w));

  AHMorphism idz = AHMorphism::identity(z);
  AHMorphism phi_z = tensor_morphism(ex.phi, idz).morphism;
  AHMorphism psi_z = tensor_morphism(ex.psi, idz).morphism;
  AHMorphism tin = AHMorphism::zero(AHModule::zero_module(), phi_z.source());
  AHMorphism tout =
      AHMorphism::zero(psi_z.target(), AHModule::zero_module());
  auto trep = check_sequence({tin, phi_z, psi_z, tout});
  CHECK_FALSE(trep.ah_exact);
  // positions: after 0->, at UZ, at VZ, at WZ; failure only at the last
  REQUIRE(trep.positions.size() == 3);
  CHECK(trep.positions[0].module_exact);
  CHECK(trep.positions[0].prime_exact);
  CHECK(trep.positions[1].module_exact);
  CHECK(trep.positions[1].prime_exact);
  bool third_ok =
      trep.positions[2].module_exact && trep.positions[2].prime_exact;
  CHECK_FALSE(third_ok);
  // image of psi (x) id is strictly smaller than W (x) Z
  CHECK(trep.positions[2].image_dim < wz.dim());
}

TEST_CASE("left-exactness always; right-exactness for stable sequences") {
  Rng rng(88);
  for (int trial = 0; trial < 4; ++trial) {
    AHModule u = random_stable(1, 1, rng.raw());
    AHModule w = random_stable(2, 1, rng.raw());
    AHModule v = direct_sum(u, w);
    std::vector<std::vector<Quaternion>> cphi(1, std::vector<Quaternion>(3));
    cphi[0][0] = Quaternion::one();
    AHMorphism phi(u, v, cphi);
    std::vector<std::vector<Quaternion>> cpsi(3, std::vector<Quaternion>(2));
    cpsi[1][0] = Quaternion::one();
    cpsi[2][1] = Quaternion::one();
    AHMorphism psi(v, w, cpsi);
    auto base_rep = check_sequence(
        {AHMorphism::zero(AHModule::zero_module(), u), phi, psi,
         AHMorphism::zero(w, AHModule::zero_module())});
    REQUIRE(base_rep.ah_exact);

    AHModule z = random_stable(2, 1, rng.raw());  // semistable in particular
    AHMorphism idz = AHMorphism::identity(z);
    AHMorphism phi_z = tensor_morphism(phi, idz).morphism;
    AHMorphism psi_z = tensor_morphism(psi, idz).morphism;
    auto rep = check_sequence(
        {AHMorphism::zero(AHModule::zero_module(), phi_z.source()), phi_z,
         psi_z, AHMorphism::zero(psi_z.target(), AHModule::zero_module())});
    // stable U, W and semistable Z: AH-exact everywhere (right-exactness)
    CHECK(rep.ah_exact);
  }
}

TEST_CASE("k-fold products agree with binary ones") {
  EmbeddedModule one = qtensor_k(y_module(), 1);
  CHECK(fingerprints_match(one.base, y_module()));

  EmbeddedModule two = qtensor_k(y_module(), 2);
  EmbeddedModule bin = qtensor(y_module(), y_module());
  CHECK(two.dim() == bin.dim());
  CHECK(two.prime_dim() == bin.prime_dim());
}

TEST_CASE("triple product of u_linear: dims follow the iterated theorem") {
  // (j,r) = (3,2); twice tensored: (3,2)x(3,2) = (8,4); then x(3,2) = (20,8).
  DimOracle u{3, 2};
  DimOracle twice = u.tensored(u);
  CHECK(twice.j == 8);
  CHECK(twice.r == 4);
  DimOracle thrice = twice.tensored(u);
  CHECK(thrice.j == 20);
  CHECK(thrice.r == 8);

  EmbeddedModule t3 = qtensor_k(u_linear(), 3);
  CHECK(t3.dim() == thrice.dim());        // 80
  CHECK(t3.prime_dim() == thrice.prime_dim());  // 48

  // associativity at dimension level, via iterated pairing
  EmbeddedModule left = qtensor(qtensor(u_linear(), u_linear()).base, u_linear());
  EmbeddedModule right = qtensor(u_linear(), qtensor(u_linear(), u_linear()).base);
  CHECK(left.dim() == t3.dim());
  CHECK(right.dim() == t3.dim());
  CHECK(left.prime_dim() == t3.prime_dim());
  CHECK(right.prime_dim() == t3.prime_dim());
}

TEST_CASE("symmetric and antisymmetric powers of Y") {
  EmbeddedModule full = qtensor_k(y_module(), 2);
  EmbeddedModule s2 = sym_power(y_module(), 2);
  EmbeddedModule a2 = alt_power(y_module(), 2);
  CHECK(s2.dim() == 12);  // S_H^2 Y = Y (x)_H Y entirely
  CHECK(s2.prime_dim() == 7);
  CHECK(s2.space == full.space);
  CHECK(a2.dim() == 0);   // Lambda_H^2 Y = 0
}

TEST_CASE("powers of u_linear match the binomial formulas") {
  EmbeddedModule s2 = sym_power(u_linear(), 2);
  CHECK(s2.dim() == 24);
  CHECK(s2.prime_dim() == 15);

  EmbeddedModule a2 = alt_power(u_linear(), 2);
  CHECK(a2.dim() == 8);
  CHECK(a2.prime_dim() == 5);
  CHECK(fingerprints_match(a2.base, y_module()));  // Lambda_H^2 U = Y

  EmbeddedModule s3 = sym_power(u_linear(), 3);
  CHECK(s3.dim() == 40);  // 2(k+1)(k+2) at k = 3
  CHECK(s3.prime_dim() == 24);
}

TEST_CASE("binomial formulas on a random stable module") {
  // j = 2, r = 1: S^2 has k = (j-r) C(r+1, 1) + C(r+1, 2) = 2 + 1 = 3,
  // s = 1; Lambda^2 has l = (j-r) C(0,1) + C(1,2) = 0.
  AHModule m = random_stable(2, 1, 555);
  EmbeddedModule s2 = sym_power(m, 2);
  CHECK(s2.dim() == 12);
  CHECK(s2.prime_dim() == 7);
  CHECK(alt_power(m, 2).dim() == 0);
}

TEST_CASE("sigma_H is an exact projector onto the symmetric part") {
  EmbeddedModule t = qtensor_k(u_linear(), 2);
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    RatVector c = rng.vector(t.dim());
    RatVector x = t.space.basis().transpose() * c;
    RatVector sx = symmetrize_factors(x, t.factor_dims);
    RatVector ssx = symmetrize_factors(sx, t.factor_dims);
    CHECK(sx == ssx);
    CHECK(t.space.contains(sx));
  }
  // sigma_H maps primes to primes
  for (Index i = 0; i < t.prime_dim(); ++i) {
    RatVector p = symmetrize_factors(t.prime.basis().row(i).transpose(),
                                     t.factor_dims);
    CHECK(sym_power(u_linear(), 2).prime.contains(p));
  }
}

TEST_CASE("tensor of identities is the identity") {
  AHModule y = y_module();
  auto res = tensor_morphism(AHMorphism::identity(y), AHMorphism::identity(y));
  CHECK(res.morphism.real_matrix() ==
        AHMorphism::identity(res.source.base).real_matrix());
}

TEST_CASE("tensor of injective morphisms is injective") {
  Rng rng(212);
  AHModule u = random_stable(1, 1, rng.raw());
  AHModule w = random_stable(2, 1, rng.raw());
  AHModule x = random_stable(2, 1, rng.raw());
  // inclusion of u into direct sum, identity on x
  AHModule v = direct_sum(u, w);
  std::vector<std::vector<Quaternion>> c(1, std::vector<Quaternion>(3));
  c[0][0] = Quaternion::one();
  AHMorphism f(u, v, c);
  auto res = tensor_morphism(f, AHMorphism::identity(x));
  CHECK(kernel(res.morphism.real_matrix()).dim() == 0);
}

TEST_CASE("slot functionals lambda(alpha (x) beta) span the product dagger") {
  // the (a,b)-slot of the embedding is the functional lambda(alpha_a (x)
  // beta_b); restricted to the product these span its dagger exactly
  Rng rng(61);
  for (int t = 0; t < 3; ++t) {
    AHModule a = random_stable(2, 1, rng.raw());
    AHModule b = random_stable(rng.integer(1, 2), 1, rng.raw());
    EmbeddedModule w = qtensor(a, b);
    if (w.base.rank() == 0) continue;
    const Index slots = w.dual_product();
    RatMatrix functionals(slots, 4 * w.base.rank());
    for (Index m = 0; m < slots; ++m)
      for (Index i = 0; i < w.base.rank(); ++i)
        for (Index h = 0; h < 4; ++h)
          functionals(m, 4 * i + h) = w.hbasis(i, 4 * m + h);
    Subspace span = Subspace::from_rows(functionals);
    CHECK(span.dim() == w.base.dagger_dim());
    CHECK(w.base.dagger().contains(span));
  }
}

TEST_CASE("element tensors: units pair with everything, generic pairs fail") {
  AHModule h = AHModule::quaternions();
  AHModule y = y_module();
  RatVector one = RatVector::Zero(4);
  one(0) = 1;
  Rng rng(77);
  for (int t = 0; t < 5; ++t) {
    RatVector a = rng.vector(8);
    auto e = elem_tensor(one, a, h, y);
    CHECK(e.has_value());  // alpha(1) is real for H
    if (e) {
      bool nonzero = false;
      for (Index i = 0; i < e->size(); ++i) nonzero |= ((*e)(i) != 0);
      bool a_nonzero = false;
      for (Index i = 0; i < a.size(); ++i) a_nonzero |= (a(i) != 0);
      CHECK(nonzero == a_nonzero);
    }
  }

  // generic pair in modules with full daggers violates commutation
  AHModule z = AHModule::make(1, Subspace::zero(4));
  bool saw_incompatible = false;
  for (int t = 0; t < 10 && !saw_incompatible; ++t) {
    RatVector a = rng.vector(4), b = rng.vector(4);
    saw_incompatible = !elem_tensor(a, b, z, z).has_value();
  }
  CHECK(saw_incompatible);
}

TEST_CASE("element tensors exist inside a common sector") {
  // u, v in U_q = {u : alpha(u) in <1, q>} for q = i1: values commute.
  AHModule y = y_module();
  RatMatrix cons(2 * y.dagger_dim(), y.dim());
  for (Index m = 0; m < y.dagger_dim(); ++m)
    for (Index g = 0; g < y.dim(); ++g) {
      RatVector e = RatVector::Zero(y.dim());
      e(g) = 1;
      Quaternion val = y.pair(m, e);
      cons(2 * m + 0, g) = val.r2;
      cons(2 * m + 1, g) = val.r3;
    }
  Subspace uq = kernel(cons);
  REQUIRE(uq.dim() >= 2);
  RatVector u = uq.basis().row(0).transpose();
  RatVector v = uq.basis().row(uq.dim() - 1).transpose();
  auto e = elem_tensor(u, v, y, y);
  CHECK(e.has_value());
}
