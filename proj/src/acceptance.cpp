#include "qalg/acceptance.hpp"

#include <chrono>
#include <functional>
#include <sstream>

#include "qalg/fueter.hpp"
#include "qalg/variety.hpp"

namespace qalg::acceptance {

namespace {

struct Check {
  bool ok = true;
  std::ostringstream log;
  int done = 0;

  void expect(bool cond, const std::string& what) {
    ++done;
    if (!cond) {
      ok = false;
      log << (log.str().empty() ? "" : "; ") << what;
    }
  }
};

struct JR {
  Index j, r;
  JR tensored(const JR& o) const {
    return {j * o.r + r * o.j - r * o.r, r * o.r};
  }
};

// 1. Dimension theorem on >= 50 seeded pairs, zero tolerance.
CriterionResult dimension_theorem(std::uint64_t seed, Index budget) {
  Check c;
  Rng rng(seed);
  int pairs = 0;
  // 40 stable x stable pairs
  while (pairs < 40) {
    Index j = rng.integer(1, 3);
    Index r = rng.integer(1, std::min<Index>(j, 2));
    Index k = rng.integer(1, 3);
    Index s = rng.integer(1, std::min<Index>(k, 2));
    AHModule u = random_stable(j, r, rng.raw());
    AHModule v = random_stable(k, s, rng.raw());
    JR expect = JR{j, r}.tensored(JR{k, s});
    EmbeddedModule t = qtensor(u, v, budget);
    c.expect(t.dim() == 4 * expect.j && t.prime_dim() == 2 * expect.j + expect.r,
             "stable pair dims");
    ++pairs;
  }
  // 10 pairs with V semistable but not stable: m-fold sums of X_q (s = 0)
  while (pairs < 50) {
    Index j = rng.integer(1, 3);
    Index r = rng.integer(1, std::min<Index>(j, 2));
    AHModule u = random_stable(j, r, rng.raw());
    Index copies = rng.integer(1, 2);
    Quaternion q = random_imaginary(rng);
    AHModule v = x_q(q);
    for (Index i = 1; i < copies; ++i) v = direct_sum(v, x_q(q));
    JR expect = JR{j, r}.tensored(JR{copies, 0});
    EmbeddedModule t = qtensor(u, v, budget);
    c.expect(t.dim() == 4 * expect.j && t.prime_dim() == 2 * expect.j + expect.r,
             "semistable pair dims");
    ++pairs;
  }
  std::ostringstream d;
  d << pairs << " seeded pairs, dims = (4l, 2l+t) with l = js+rk-rs, t = rs";
  return {1, "dimension theorem suite", c.ok,
          c.ok ? d.str() : c.log.str()};
}

Index binom(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  Index r = 1;
  for (Index i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// 2. Binomial power suite.
CriterionResult binomial_powers(std::uint64_t seed, Index budget) {
  Check c;
  Rng rng(seed + 1);
  const std::pair<Index, Index> shapes[] = {{1, 1}, {2, 1}, {2, 2}, {3, 1},
                                            {3, 2}};
  for (auto [j, r] : shapes) {
    AHModule u = random_stable(j, r, rng.raw());
    for (Index n = 2; n <= 3; ++n) {
      Index sk = (j - r) * binom(r + n - 1, n - 1) + binom(r + n - 1, n);
      Index ss = binom(r + n - 1, n);
      Index al = (j - r) * binom(r - 1, n - 1) + binom(r, n);
      Index at = binom(r, n);
      EmbeddedModule sp = sym_power(u, n, budget);
      EmbeddedModule ap = alt_power(u, n, budget);
      std::ostringstream tag;
      tag << "(j,r,n)=(" << j << "," << r << "," << n << ")";
      c.expect(sp.dim() == 4 * sk && sp.prime_dim() == 2 * sk + ss,
               "S_H dims at " + tag.str());
      c.expect(ap.dim() == 4 * al && ap.prime_dim() == 2 * al + at,
               "Lambda_H dims at " + tag.str());
    }
  }
  return {2, "binomial power suite", c.ok,
          c.ok ? "S_H^n / Lambda_H^n dims exact for j<=3, r<=2, n<=3"
               : c.log.str()};
}

// 3. Canonical modules.
CriterionResult canonical_modules(std::uint64_t seed, Index budget) {
  Check c;
  AHModule y = y_module();
  c.expect(y.dim() == 8 && y.uprime_dim() == 5 && y.dagger_dim() == 3,
           "Y dims (8,5,3)");
  c.expect(is_stable(y, seed, 20).stable, "Y stable");
  EmbeddedModule yy = qtensor(y, y, budget);
  c.expect(yy.dim() == 12 && yy.prime_dim() == 7, "Y(x)Y dims (12,7)");
  c.expect(alt_power(y, 2, budget).dim() == 0, "Lambda^2 Y = 0");
  AHModule u = u_linear();
  c.expect(u.dim() == 12 && u.uprime_dim() == 8 && u.dagger_dim() == 4,
           "U dims (12,8,4)");
  c.expect(is_stable(u, seed, 20).stable, "U stable");
  EmbeddedModule a2 = alt_power(u, 2, budget);
  c.expect(fingerprints_match(a2.base, y), "Lambda^2 U = Y");
  for (Index k = 0; k <= 4; ++k) {
    EmbeddedModule sk = sym_power(u, k, budget);
    c.expect(sk.dim() == 2 * (k + 1) * (k + 2), "S_H^k U dim at k");
  }
  return {3, "canonical modules", c.ok,
          c.ok ? "Y, Y(x)Y, Lambda^2, u_linear and its powers exact"
               : c.log.str()};
}

// 4. Exactness suite.
CriterionResult exactness_suite(std::uint64_t seed, Index budget) {
  Check c;
  // Example 1.3 bit-exact
  AHModule u = AHModule::make(1, Subspace::zero(4));
  RatMatrix vp(2, 8);
  vp.setZero();
  vp(0, 0) = 1;
  vp(0, 5) = 1;
  vp(1, 0) = 1;
  vp(1, 6) = 1;
  AHModule v = AHModule::make(2, Subspace::from_rows(vp));
  RatMatrix wp(2, 4);
  wp.setZero();
  wp(0, 1) = 1;
  wp(1, 2) = 1;
  AHModule w = AHModule::make(1, Subspace::from_rows(wp));
  AHMorphism phi(u, v, {{Quaternion::one(), Quaternion()}});
  AHMorphism psi(v, w, {{Quaternion()}, {Quaternion::one()}});
  auto base = check_sequence({AHMorphism::zero(AHModule(), u), phi, psi,
                              AHMorphism::zero(w, AHModule())});
  c.expect(base.ah_exact, "example sequence AH-exact");
  AHModule z = w;
  EmbeddedModule uz = qtensor(u, z, budget), vz = qtensor(v, z, budget),
                 wz = qtensor(w, z, budget);
  c.expect(uz.dim() == 0 && vz.dim() == 0 && wz.dim() == 4,
           "tensored dims 0, 0, 4");
  AHMorphism idz = AHMorphism::identity(z);
  AHMorphism phz = tensor_morphism(phi, idz, budget).morphism;
  AHMorphism psz = tensor_morphism(psi, idz, budget).morphism;
  auto trep = check_sequence({AHMorphism::zero(AHModule(), phz.source()), phz,
                              psz,
                              AHMorphism::zero(psz.target(), AHModule())});
  bool pos12 = trep.positions[0].module_exact && trep.positions[0].prime_exact &&
               trep.positions[1].module_exact && trep.positions[1].prime_exact;
  bool pos3 = trep.positions[2].module_exact && trep.positions[2].prime_exact;
  c.expect(pos12 && !pos3, "failure localized at the third position");

  // randomized left- and right-exactness
  Rng rng(seed + 2);
  for (int t = 0; t < 20; ++t) {
    AHModule a = random_stable(1, 1, rng.raw());
    AHModule b = random_stable(2, rng.integer(1, 2), rng.raw());
    AHModule m = direct_sum(a, b);
    std::vector<std::vector<Quaternion>> cf(1, std::vector<Quaternion>(3));
    cf[0][0] = Quaternion::one();
    AHMorphism f(a, m, cf);
    std::vector<std::vector<Quaternion>> cg(3, std::vector<Quaternion>(2));
    cg[1][0] = Quaternion::one();
    cg[2][1] = Quaternion::one();
    AHMorphism g(m, b, cg);
    AHModule zz = random_stable(2, 1, rng.raw());
    AHMorphism iz = AHMorphism::identity(zz);
    AHMorphism fz = tensor_morphism(f, iz, budget).morphism;
    AHMorphism gz = tensor_morphism(g, iz, budget).morphism;
    auto rep = check_sequence({AHMorphism::zero(AHModule(), fz.source()), fz,
                               gz,
                               AHMorphism::zero(gz.target(), AHModule())});
    c.expect(rep.positions[0].module_exact && rep.positions[0].prime_exact &&
                 rep.positions[1].module_exact && rep.positions[1].prime_exact,
             "left-exactness holds");
    c.expect(rep.ah_exact, "right-exactness holds for stable sequences");
  }
  return {4, "exactness suite", c.ok,
          c.ok ? "example reproduced; 20 random left/right-exact instances"
               : c.log.str()};
}

// 5. Fueter bridge.
CriterionResult fueter_bridge(std::uint64_t, Index budget) {
  Check c;
  const Index expected[] = {4, 12, 24, 40, 60, 84};
  for (Index k = 0; k <= 5; ++k)
    c.expect(fueter_kernel(k).kernel_space.dim() == expected[k],
             "kernel dim at degree k");
  for (Index k = 0; k <= 3; ++k) {
    FueterKernel fk = fueter_kernel(k);
    EmbeddedModule sk = sym_power(u_linear(), k, budget);
    c.expect(fingerprints_match(fk.module, sk.base),
             "fingerprint match with S_H^k(u_linear)");
  }
  return {5, "Fueter bridge", c.ok,
          c.ok ? "dims 4,12,24,40,60,84; fingerprints match S_H^k(u_linear)"
               : c.log.str()};
}

// 6. Eguchi-Hanson battery.
CriterionResult eguchi_hanson(std::uint64_t, Index budget) {
  Check c;
  EHFamily fam = eh_family(RatMatrix::Zero(3, 3), 8, budget);
  for (Index j = 0; j <= 4; ++j) {
    Index l = (2 * j + 1) * (j + 1);
    Index t = 2 * j + 1;
    Index idim = 2 * j * (j - 1) * (j + 1);
    c.expect(fam.ideal.graded[j].dim() == idim, "ideal dim at 2j");
    c.expect(fam.quotient.grades[j].dim == 4 * l, "quotient dim at 2j");
    c.expect(fam.quotient.grades[j].prime_dim == 2 * l + t,
             "quotient prime dim at 2j");
    c.expect(fam.quotient.grades[j].exact, "grade exactness");
    c.expect(fam.algebra.grade_dim(j) == 4 * l + idim, "free dim at 2j");
  }
  c.expect(fam.ideal.all_stationary, "ideal stationary");
  c.expect(fam.system.real_equations == eh_reference_system().real_equations,
           "lambda = 0 equations are (37)");
  RatMatrix diag = RatMatrix::Zero(3, 3);
  diag(0, 0) = 3;
  diag(1, 1) = 1;
  diag(2, 2) = -4;
  EHFamily def = eh_family(diag, 4, budget);
  c.expect(def.system.real_equations ==
               eh_reference_system(diag).real_equations,
           "diagonal lambda equations are (40)");
  std::vector<Index> grades = invariant_grades(4);
  const Index cone[] = {4, 0, 24, 0, 60};
  for (Index k = 0; k <= 4; ++k)
    c.expect(grades[k] == cone[k], "Z/2-invariant Fueter grade");
  return {6, "Eguchi-Hanson battery", c.ok,
          c.ok ? "free/ideal/quotient dims at labels <= 8; equations (37) and "
                 "(40); Z/2 cone grades"
               : c.log.str()};
}

// 7. HP/HL axioms.
CriterionResult hp_hl_axioms(std::uint64_t, Index budget) {
  Check c;
  {
    HLAlgebra so3 = hl_from_lie(LieAlgebra::so3());
    HLAxiomReport rep = check_hl_axioms(so3, budget,
                                        /*allow_generic_cube=*/true);
    c.expect(rep.morphism_ok, "so(3): xi is an AH-morphism");
    c.expect(rep.antisym_ok, "so(3): S_H^2 A <= Ker xi");
    c.expect(rep.jacobi_ok && rep.jacobi_generic && rep.lambda3_dim == 16,
             "so(3): Jacobi on the generic Lambda_H^3 A");
    PoissonReport prep = poisson_on_free(so3, 3, budget,
                                         /*allow_generic_cube=*/false);
    c.expect(prep.p2i_ok, "so(3): P2(i)");
    c.expect(prep.derivation_ok, "so(3): derivation identity");
    c.expect(prep.graded_ok, "so(3): bracket grading");
    c.expect(prep.mixed_antisym_ok, "so(3): bracket antisymmetry at (1,2)");
  }
  {
    HLAlgebra sol = hl_from_lie(LieAlgebra::solvable2());
    HLAxiomReport rep = check_hl_axioms(sol, budget, true);
    c.expect(rep.morphism_ok && rep.antisym_ok && rep.jacobi_ok,
             "solvable: HL axioms");
    PoissonReport prep = poisson_on_free(sol, 3, budget, true);
    c.expect(prep.p2i_ok && prep.derivation_ok && prep.graded_ok &&
                 prep.mixed_antisym_ok,
             "solvable: P2, grading, mixed antisymmetry");
  }
  return {7, "HP/HL axioms", c.ok,
          c.ok ? "so(3) and solvable(2): antisymmetry, Jacobi, P2(i), "
                 "derivation identity at K = 3"
               : c.log.str()};
}

// 8. Axiom A at truncation.
CriterionResult axiom_a(std::uint64_t, Index budget) {
  Check c;
  FreeAlgebra fy = FreeAlgebra::build(y_module(), 4, budget);
  AxiomAReport ry = axiom_a_check(fy);
  c.expect(ry.all_ok(), "free_algebra(Y, 4) axiom A");
  FreeAlgebra fu = FreeAlgebra::build(u_linear(), 3, budget);
  AxiomAReport ru = axiom_a_check(fu);
  c.expect(ru.all_ok(), "free_algebra(u_linear, 3) axiom A");
  return {8, "axiom A at truncation", c.ok,
          c.ok ? "commutativity, associativity, identity for F^Y(4) and "
                 "F^U(3)"
               : c.log.str()};
}

using Runner = CriterionResult (*)(std::uint64_t, Index);
const Runner kRunners[] = {dimension_theorem, binomial_powers,
                           canonical_modules, exactness_suite, fueter_bridge,
                           eguchi_hanson,     hp_hl_axioms,    axiom_a};

}  // namespace

CriterionResult run_one(int index, std::uint64_t seed, Index budget) {
  if (index < 1 || index > 8)
    throw UsageError("acceptance criterion index must be 1..8");
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r = kRunners[index - 1](seed, budget);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0)
                  .count();
  return r;
}

std::vector<CriterionResult> run_all(std::uint64_t seed, Index budget) {
  std::vector<CriterionResult> out;
  for (int i = 1; i <= 8; ++i) out.push_back(run_one(i, seed, budget));
  return out;
}

}  // namespace qalg::acceptance
