#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qalg/variety.hpp"

using namespace qalg;

namespace {

RatVector vec3(int a, int b, int c) {
  RatVector v(3);
  v << Rational(a), Rational(b), Rational(c);
  return v;
}

RatMatrix diag_lambda(const Rational& a, const Rational& b) {
  RatMatrix l = RatMatrix::Zero(3, 3);
  l(0, 0) = a;
  l(1, 1) = b;
  l(2, 2) = -a - b;
  return l;
}

}  // namespace

TEST_CASE("eval_theta basics: unit, homogeneity in x") {
  // grade 0: y = 1 in H pairs to 1
  RatVector one = RatVector::Zero(4);
  one(0) = 1;
  RatVector x0(9);
  x0.setZero();
  CHECK(eval_theta(RatVector::Zero(9), one, 0, 9) == Quaternion::one());

  // x = 0 kills positive degrees
  Rng rng(5);
  RatVector y = rng.vector(4 * 81);
  CHECK(eval_theta(RatVector::Zero(9), y, 2, 9).is_zero());

  // scaling: theta_{s x}(y) = s^2 theta_x(y) for grade 2
  RatVector x = rng.vector(9);
  Quaternion base = eval_theta(x, y, 2, 9);
  Quaternion scaled = eval_theta(RatVector(3 * x), y, 2, 9);
  CHECK(scaled == base * Rational(9));
}

TEST_CASE("undeformed family: equations (37), membership, homogeneity") {
  EHFamily fam = eh_family(RatMatrix::Zero(3, 3), 6);
  CHECK(fam.case_index == 1);
  CHECK(fam.system.real_equations.rows() == 5);
  CHECK(fam.system.real_equations == eh_reference_system().real_equations);

  // orthonormal frames of both orientations are members; the origin too
  RatVector plus = fam.chart.point(vec3(1, 0, 0), vec3(0, 1, 0), vec3(0, 0, 1));
  RatVector minus = fam.chart.point(vec3(0, 1, 0), vec3(1, 0, 0), vec3(0, 0, 1));
  CHECK(fam.system.member(RatVector::Zero(9)));
  CHECK(fam.system.member(plus));
  CHECK(fam.system.member(minus));
  CHECK(fam.system.member(RatVector(7 * plus)));  // homogeneous: cone
  // unequal lengths violate the system
  CHECK_FALSE(fam.system.member(
      fam.chart.point(vec3(1, 0, 0), vec3(0, 2, 0), vec3(0, 0, 1))));
  // scaled frame of either orientation: still members (two orbit families)
  CHECK(fam.system.member(
      fam.chart.point(vec3(2, 0, 0), vec3(0, 2, 0), vec3(0, 0, 2))));
  CHECK(fam.system.member(
      fam.chart.point(vec3(0, 2, 0), vec3(2, 0, 0), vec3(0, 0, 2))));
}

TEST_CASE("undeformed family: graded ideal and quotient dims at labels <= 6") {
  EHFamily fam = eh_family(RatMatrix::Zero(3, 3), 6);
  // free algebra grades: dim S_H^j Q = 2(j+1)^2(j+2)
  CHECK(fam.algebra.grade_dim(0) == 4);
  CHECK(fam.algebra.grade_dim(1) == 24);
  CHECK(fam.algebra.grade_dim(2) == 72);
  CHECK(fam.algebra.grade_dim(3) == 160);
  // ideal dims 2j(j-1)(j+1) at label 2j
  CHECK(fam.ideal.graded[2].dim() == 12);
  CHECK(fam.ideal.graded[3].dim() == 48);
  // quotient dims 4(2j+1)(j+1)
  CHECK(fam.quotient.grades[0].dim == 4);
  CHECK(fam.quotient.grades[1].dim == 24);
  CHECK(fam.quotient.grades[2].dim == 60);
  CHECK(fam.quotient.grades[3].dim == 112);
  CHECK(fam.quotient.all_ok);
  // filtered dims match the graded partial sums (lambda = 0)
  Index acc = 0, facc = 0;
  for (Index k = 0; k <= 3; ++k) {
    acc += fam.ideal.graded[k].dim();
    CHECK(fam.filtered_ideal_dims[k] == acc);
    facc += fam.algebra.grade_dim(k);
    CHECK(fam.filtered_quotient_dims[k] == facc - acc);
  }
}

TEST_CASE("diagonal lambda reproduces the shifted equations (40)") {
  RatMatrix l = diag_lambda(Rational(1), Rational(0));  // diag(1, 0, -1)
  EHFamily fam = eh_family(l, 4);
  CHECK(fam.case_index == 3);  // distinct eigenvalues
  CHECK(fam.system.real_equations == eh_reference_system(l).real_equations);

  // rational membership witness: v1=(3,0,0), v2=(0,2,0), v3=(0,0,1) solves
  // v1.v1 - a11 = v2.v2 - a22 = v3.v3 - a33 for lambda built from it
  RatMatrix l2 = RatMatrix::Zero(3, 3);
  Rational s = Rational(9 + 4 + 1) / 3;
  l2(0, 0) = 9 - s;
  l2(1, 1) = 4 - s;
  l2(2, 2) = 1 - s;
  EHFamily fam2 = eh_family(l2, 4);
  CHECK(fam2.case_index == 3);
  RatVector pt = fam2.chart.point(vec3(3, 0, 0), vec3(0, 2, 0), vec3(0, 0, 1));
  CHECK(fam2.system.member(pt));
  // nonsingular point: full Jacobian rank 5
  CHECK(jacobian_rank(fam2.system, pt) == 5);
  // the variety determines the hypercomplex structure here: dim V_m = 12
  CHECK(reconstruction_rank(fam2, pt) == 12);
  CHECK(reconstruction_rank(fam2, pt, /*include_grade2=*/false) == 12);
}

TEST_CASE("case 2: repeated smallest eigenvalue, singular special orbit") {
  RatMatrix l = diag_lambda(Rational(2), Rational(-1));  // diag(2,-1,-1)
  EHFamily fam = eh_family(l, 4);
  CHECK(fam.case_index == 2);
  // special orbit {(v1, 0, 0): v1.v1 = 3}; (1,1,1) is a rational point
  RatVector special = fam.chart.point(vec3(1, 1, 1), vec3(0, 0, 0),
                                      vec3(0, 0, 0));
  CHECK(fam.system.member(special));
  CHECK(jacobian_rank(fam.system, special) < 5);  // singular on S^2
}

TEST_CASE("filtered ideal dims match graded symbols for deformed lambda") {
  RatMatrix l = diag_lambda(Rational(1), Rational(0));
  EHFamily fam = eh_family(l, 6);
  Index acc = 0;
  for (Index k = 0; k <= 3; ++k) {
    acc += fam.ideal.graded[k].dim();
    CHECK(fam.filtered_ideal_dims[k] == acc);
  }
}

TEST_CASE("SO(3) invariance of the systems") {
  EHFamily fam0 = eh_family(RatMatrix::Zero(3, 3), 4);
  RatMatrix identity = RatMatrix::Identity(3, 3);
  CHECK(so3_action_check(fam0.system, identity));

  // rational rotation (3/5, 4/5 block)
  RatMatrix rot = RatMatrix::Zero(3, 3);
  rot(0, 0) = Rational(3, 5);
  rot(0, 1) = Rational(-4, 5);
  rot(1, 0) = Rational(4, 5);
  rot(1, 1) = Rational(3, 5);
  rot(2, 2) = 1;
  CHECK(so3_action_check(fam0.system, rot));

  // cyclic axis permutation, det +1
  RatMatrix cyc = RatMatrix::Zero(3, 3);
  cyc(1, 0) = cyc(2, 1) = cyc(0, 2) = 1;
  CHECK(so3_action_check(fam0.system, cyc));

  // rotated members stay members, deformed case included
  RatMatrix l = diag_lambda(Rational(2), Rational(-1));
  EHFamily fam = eh_family(l, 4);
  CHECK(so3_action_check(fam.system, rot));
  RatVector special = fam.chart.point(vec3(1, 1, 1), vec3(0, 0, 0),
                                      vec3(0, 0, 0));
  RatVector rv1(3);
  rv1 << Rational(3, 5) * 1 + Rational(-4, 5) * 1,
      Rational(4, 5) * 1 + Rational(3, 5) * 1, Rational(1);
  RatVector rotated = fam.chart.point(rv1, vec3(0, 0, 0), vec3(0, 0, 0));
  CHECK(fam.system.member(rotated));

  // non-orthogonal input is rejected
  RatMatrix bad = RatMatrix::Identity(3, 3);
  bad(0, 0) = 2;
  CHECK_THROWS_AS(so3_action_check(fam0.system, bad), InvariantViolation);
}

TEST_CASE("equation emission is canonical under generator recombination") {
  // psi of q.s is q.psi_s: the real row space is invariant under H-linear
  // recombination of the generators; emitted equations from the canonical
  // basis therefore already span the full system.  Check against a manual
  // expansion through eval_theta at sampled points.
  EHFamily fam = eh_family(RatMatrix::Zero(3, 3), 4);
  Rng rng(31);
  for (int t = 0; t < 8; ++t) {
    RatVector v = rng.vector(9, 2);
    bool in = fam.system.member(v);
    // oracle: v is a member iff all psi_s(B v) vanish over the J basis
    bool oracle = true;
    const FactoredSpace& gens = fam.ideal.graded[2];
    RatVector xc = fam.chart.to_canonical * v;
    for (Index i = 0; i < gens.real_part.dim() && oracle; ++i)
      for (Index j = 0; j < gens.core.dim() && oracle; ++j) {
        RatVector flat = expand_factored(
            gens.real_part.basis().row(i).transpose(),
            gens.core.space.basis().row(j).transpose(), 3, 3, 2);
        oracle = eval_theta(xc, flat, 2, 9).is_zero();
      }
    CHECK(in == oracle);
  }
}

TEST_CASE("theta is compatible with symmetrization and element products") {
  // contraction against x^(x)k is blind to sigma_H
  Rng rng(53);
  for (int t = 0; t < 5; ++t) {
    RatVector x = rng.vector(9, 2);
    // random flat product element over the 9-dim dual factors
    RatVector flat = rng.vector(4 * 81, 2);
    RatVector sym = symmetrize_factors(flat, {9, 9});
    CHECK(eval_theta(x, sym, 2, 9) == eval_theta(x, flat, 2, 9));
  }

  // theta of an element tensor is the product of the factor evaluations;
  // draw the pair from a common sector U_q so the product exists
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
  int checked = 0;
  for (int t = 0; t < 5; ++t) {
    RatVector cu = rng.vector(uq.dim(), 2), cv = rng.vector(uq.dim(), 2);
    RatVector u = uq.basis().transpose() * cu;
    RatVector v = uq.basis().transpose() * cv;
    auto e = elem_tensor(u, v, y, y);
    REQUIRE(e.has_value());
    RatVector x = rng.vector(3, 2);
    Quaternion theta_u, theta_v;
    for (Index m = 0; m < 3; ++m) {
      theta_u = theta_u + y.pair(m, u) * x(m);
      theta_v = theta_v + y.pair(m, v) * x(m);
    }
    CHECK(eval_theta(x, *e, 2, 3) == theta_u * theta_v);
    ++checked;
  }
  CHECK(checked == 5);
}

TEST_CASE("factored Eguchi-Hanson pipeline agrees with generic embeddings") {
  EHFamily fam = eh_family(RatMatrix::Zero(3, 3), 6);
  AHModule carrier = fam.algebra.generator();

  // grade 2 both ways: S_H^2(R^3 (x) Y) generically in the 4*81 ambient
  EmbeddedModule generic2 = sym_power(carrier, 2);
  CHECK(generic2.dim() == fam.algebra.grade_dim(2));
  CHECK(generic2.prime_dim() == fam.algebra.grade_prime_dim(2));

  // J expanded into the generic ambient spans an AH-submodule of it
  const FactoredSpace& gens = fam.ideal.graded[2];
  RatMatrix jflat(12, 4 * 81);
  Index r = 0;
  for (Index i = 0; i < gens.real_part.dim(); ++i)
    for (Index j = 0; j < gens.core.dim(); ++j)
      jflat.row(r++) =
          expand_factored(gens.real_part.basis().row(i).transpose(),
                          gens.core.space.basis().row(j).transpose(), 3, 3, 2)
              .transpose();
  Subspace jspan = Subspace::from_rows(jflat);
  CHECK(jspan.dim() == 12);
  CHECK(generic2.space.contains(jspan));
  EmbeddedModule jemb = embedded_submodule(generic2, jspan);

  // I^3 generically: sigma(J (x)_H grade_1) inside the 4*9^3 ambient
  EmbeddedModule prod = slab_product(jemb, iota(carrier));
  CHECK(prod.dim() == 48);  // dimension theorem: (3,1) x (6,3) -> l = 12
  RatMatrix rows(prod.dim(), prod.ambient_dim());
  for (Index i = 0; i < prod.dim(); ++i)
    rows.row(i) = symmetrize_factors(prod.space.basis().row(i).transpose(),
                                     prod.factor_dims)
                      .transpose();
  Subspace i3_generic = Subspace::from_rows(rows);
  CHECK(i3_generic.dim() == fam.ideal.graded[3].dim());  // 48

  // the factored I^3 basis expands into the generic sigma image
  const FactoredSpace& i3 = fam.ideal.graded[3];
  for (Index i = 0; i < i3.real_part.dim(); ++i)
    for (Index j = 0; j < i3.core.dim(); ++j) {
      RatVector v = expand_factored(i3.real_part.basis().row(i).transpose(),
                                    i3.core.space.basis().row(j).transpose(),
                                    3, 3, 3);
      CHECK(i3_generic.contains(v));
    }
}

TEST_CASE("deformed variety: sampled nonsingular points on rotated orbits") {
  // case 3 built around a known rational frame, then moved by an exact
  // rotation: membership, full Jacobian rank, reconstruction rank 12
  RatMatrix l2 = RatMatrix::Zero(3, 3);
  Rational s = Rational(9 + 4 + 1) / 3;
  l2(0, 0) = 9 - s;
  l2(1, 1) = 4 - s;
  l2(2, 2) = 1 - s;
  EHFamily fam = eh_family(l2, 4);
  RatMatrix rot = RatMatrix::Zero(3, 3);
  rot(0, 0) = Rational(3, 5);
  rot(0, 1) = Rational(-4, 5);
  rot(1, 0) = Rational(4, 5);
  rot(1, 1) = Rational(3, 5);
  rot(2, 2) = 1;
  RatVector v1 = rot * vec3(3, 0, 0);
  RatVector v2 = rot * vec3(0, 2, 0);
  RatVector v3 = rot * vec3(0, 0, 1);
  RatVector pt = fam.chart.point(v1, v2, v3);
  CHECK(fam.system.member(pt));
  CHECK(jacobian_rank(fam.system, pt) == 5);
  CHECK(reconstruction_rank(fam, pt) == 12);
}

TEST_CASE("zero generators emit the empty system") {
  FreeAlgebra alg = FreeAlgebra::build_factored(3, y_module(), 2);
  FactoredSpace none{Subspace::zero(9), alg.core_power(2)};
  QuadraticSystem sys = emit_equations(alg, none);
  CHECK(sys.real_equations.rows() == 0);
  Rng rng(7);
  // empty system: the variety is the whole of Q^dagger
  for (int t = 0; t < 3; ++t) CHECK(sys.member(rng.vector(9)));
}

TEST_CASE("reconstruction failure modes at dimension level") {
  // free algebras have no equations: the variety is the whole of Q^dagger.
  // For Q = Y it is R^3; for Q = Y (x)_H Y (the moment-map module with dims
  // (12, 7, 5)) it is R^5.
  AHModule z = qtensor(y_module(), y_module()).base;
  CHECK(z.dim() == 12);
  CHECK(z.uprime_dim() == 7);
  CHECK(z.dagger_dim() == 5);
  FreeAlgebra fz = FreeAlgebra::build(z, 2);
  FactoredSpace none{Subspace::zero(1),
                     embedded_submodule(fz.grade(2).core,
                                        Subspace::zero(fz.core_power(2)
                                                           .ambient_dim()))};
  QuadraticSystem sys = emit_equations(fz, none);
  CHECK(sys.real_equations.rows() == 0);

  // a generic corank-1 H-submodule Q of U + U has dims (20, 12, 8); the span
  // of first derivatives of its linear functions has dimension 12k - 4 = 20,
  // short of the 12k = 24 needed to determine the structure.
  AHModule uu = direct_sum(u_linear(), u_linear());
  Rng rng(2300);
  AHModule q;
  bool found = false;
  for (int t = 0; t < 50 && !found; ++t) {
    RatMatrix hrows(5, 24);
    for (Index i = 0; i < 5; ++i) {
      RatVector v = RatVector::Zero(24);
      for (Index s = 0; s < 6; ++s) {
        Quaternion c(rng.rational(2), rng.rational(2), rng.rational(2),
                     rng.rational(2));
        v(4 * s + 0) = c.r0;
        v(4 * s + 1) = c.r1;
        v(4 * s + 2) = c.r2;
        v(4 * s + 3) = c.r3;
      }
      hrows.row(i) = v.transpose();
    }
    // H-span of the rows
    RatMatrix full(20, 24);
    for (Index i = 0; i < 5; ++i) {
      RatVector v = hrows.row(i).transpose();
      full.row(4 * i) = v.transpose();
      for (int k = 1; k <= 3; ++k)
        full.row(4 * i + k) =
            left_mult_apply(Quaternion::i(k), v).transpose();
    }
    Subspace w = Subspace::from_rows(full);
    if (w.dim() != 20) continue;
    try {
      q = submodule(uu, w).module;
    } catch (const NotAHModuleError&) {
      continue;
    }
    if (q.uprime_dim() == 12 && q.dagger_dim() == 8 &&
        is_stable(q, {}, 10, rng.raw()).stable)
      found = true;
  }
  REQUIRE(found);
  // rank of iota(Q) as homomorphisms Q^dagger -> H
  EmbeddedModule eq = iota(q);
  CHECK(rank_of(eq.space.basis()) == 20);  // dim V_m = 12k - 4
  CHECK(20 < 12 * 2);
}

TEST_CASE("lambda validation") {
  RatMatrix bad = RatMatrix::Zero(3, 3);
  bad(0, 1) = 1;  // not symmetric
  CHECK_THROWS_AS(eh_family(bad, 4), InvariantViolation);
  RatMatrix trace = RatMatrix::Identity(3, 3);
  CHECK_THROWS_AS(eh_family(trace, 4), InvariantViolation);
}
