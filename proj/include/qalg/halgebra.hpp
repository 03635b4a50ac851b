#ifndef QALG_HALGEBRA_HPP
#define QALG_HALGEBRA_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qalg/embedded.hpp"

namespace qalg {

// ---------------------------------------------------------------------------
// Real-factor utilities (no H component): subspaces of (R^m)^{(x) k}.
// ---------------------------------------------------------------------------

RatVector real_permute(const RatVector& x, const std::vector<Index>& dims,
                       const std::vector<int>& perm);
RatVector real_symmetrize(const RatVector& x, const std::vector<Index>& dims,
                          bool antisym = false);
// S^k(R^m) or Lambda^k(R^m) inside R^{m^k}.
Subspace real_power_space(Index m, Index k, bool antisym = false);

// Kronecker product of a real-factor vector (size m^k) with an ambient core
// vector (size 4 d^k): the expansion of a factored tensor into the flat
// ambient over (R^m (x) D_core)^(x) k.
RatVector expand_factored(const RatVector& real_vec, const RatVector& core_vec,
                          Index m, Index d, Index k);

// ---------------------------------------------------------------------------
// Lie algebras by structure constants.
// ---------------------------------------------------------------------------

struct LieAlgebra {
  Index dim = 0;
  // c[i][j][k]: [e_i, e_j] = sum_k c[i][j][k] e_k
  std::vector<std::vector<std::vector<Rational>>> c;

  static LieAlgebra abelian(Index m);
  static LieAlgebra so3();        // c_ijk = epsilon_ijk
  static LieAlgebra solvable2();  // [e1, e2] = e1
  // Throws InvariantViolation unless antisymmetry and Jacobi hold.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Graded free H-algebras, truncated at grade K.
// ---------------------------------------------------------------------------

// A grade (or a graded piece of an ideal) in factored form:
// real_part (x) core inside (R^m)^{(x) k} (x) [H (x) (C^dagger*)^{(x) k}].
// For plain carriers m = 1 and real_part is R^1.
struct FactoredSpace {
  Subspace real_part;
  EmbeddedModule core;

  Index dim() const { return real_part.dim() * core.dim(); }
  Index prime_dim() const { return real_part.dim() * core.prime_dim(); }
};

class FreeAlgebra {
 public:
  // F^Q for a plain generator Q (multiplicity 1).
  static FreeAlgebra build(const AHModule& gen, Index truncation,
                           Index budget = kDefaultBudget);
  // F^Q for Q = R^m (x) C.  Requires the tensor powers of C to be entirely
  // symmetric (checked; true for C = Y), which makes every grade a pure
  // product S^k(R^m) (x) (x)_H^k C.
  static FreeAlgebra build_factored(Index multiplicity, const AHModule& core,
                                    Index truncation,
                                    Index budget = kDefaultBudget);

  Index truncation() const { return K_; }
  Index multiplicity() const { return m_; }
  const AHModule& core_module() const { return core_; }
  AHModule generator() const;  // R^m (x) core as a plain module
  bool generator_stable() const { return gen_stable_; }
  bool core_all_symmetric() const { return core_all_symmetric_; }
  Index budget() const { return budget_; }

  const FactoredSpace& grade(Index k) const;
  const EmbeddedModule& core_power(Index k) const;  // (x)_H^k core, flat
  Index grade_dim(Index k) const { return grade(k).dim(); }
  Index grade_prime_dim(Index k) const { return grade(k).prime_dim(); }
  // Expanded abstract module of grade k (R^p (x) core-base).
  AHModule grade_module(Index k) const;

  // Flat realization of grade_j (x)_H grade_k inside (x)_H^{j+k} Q
  // (restricted to a subspace of either side when given).
  FactoredSpace product_space(const FactoredSpace& a, Index ja,
                              const FactoredSpace& b, Index jb) const;
  // sigma_H applied to a flat product: the mu_{j,k} image.
  FactoredSpace mu_image(const FactoredSpace& product, Index total) const;

 private:
  Index m_ = 1;
  AHModule core_;
  Index K_ = 0;
  Index budget_ = kDefaultBudget;
  bool gen_stable_ = false;
  bool core_all_symmetric_ = false;
  std::vector<EmbeddedModule> powers_;  // (x)_H^k core
  std::vector<FactoredSpace> grades_;
};

// ---------------------------------------------------------------------------
// Axiom A verification.
// ---------------------------------------------------------------------------

struct AxiomAReport {
  bool commutativity_ok = true;
  bool associativity_ok = true;
  bool identity_ok = true;
  std::vector<std::string> violations;
  bool all_ok() const {
    return commutativity_ok && associativity_ok && identity_ok;
  }
};

// mu hook for fault-injection tests: maps a flat (j+k)-factor ambient vector
// to its product image (the default is sigma_H).  Plain carriers only.
using MuFn = std::function<RatVector(Index j, Index k, const RatVector&)>;

AxiomAReport axiom_a_check(const FreeAlgebra& alg);
AxiomAReport axiom_a_check(const FreeAlgebra& alg, const MuFn& mu);

// ---------------------------------------------------------------------------
// Stable graded ideals and quotients.
// ---------------------------------------------------------------------------

struct IdealData {
  Index g0 = 0;                       // generator grade
  std::vector<FactoredSpace> graded;  // I^k for k = 0..K
  std::vector<bool> stationary;       // mu(I^{k-1} (x) grade_1) == I^k
  bool all_stationary = true;
};

// I generated by `gens` inside grade g0: I^k = sigma_H(gens (x)_H
// grade_{k-g0}).  gens.core must be an H-closed subspace of the grade core.
IdealData ideal_from_generators(const FreeAlgebra& alg, Index g0,
                                const FactoredSpace& gens);
// Convenience: generators given as a subspace of the flat grade-g0 core
// ambient (plain carriers).
IdealData ideal_from_generators(const FreeAlgebra& alg, Index g0,
                                const Subspace& gens_core);

struct QuotientGrade {
  Index dim = 0;
  Index prime_dim = 0;
  bool ah_ok = true;
  bool exact = true;   // dims of 0 -> I^k -> A^k -> B^k -> 0 are AH-exact
  bool stable = true;  // Monte-Carlo, reported not enforced
  AHModule module;
};

struct QuotientAlgebra {
  std::vector<QuotientGrade> grades;
  bool all_ok = true;
};

QuotientAlgebra quotient_algebra(const FreeAlgebra& alg, const IdealData& ideal,
                                 std::uint64_t seed = 17);

// ---------------------------------------------------------------------------
// HL-algebras from Lie structure constants (carrier g (x) Y).
// ---------------------------------------------------------------------------

struct HLAlgebra {
  LieAlgebra lie;
  AHModule carrier;  // R^m (x) Y expanded
  AHModule y;
  // xi realized as id_H (x) l_xi on flat ambients:
  // (A^dagger*)^(x)2 -> (A^dagger*) (x) (Y^dagger*).
  RatMatrix l_xi;
};

HLAlgebra hl_from_lie(const LieAlgebra& g);

struct HLAxiomReport {
  bool morphism_ok = false;   // xi maps A (x)_H A into A (x)_H Y, primes too
  bool antisym_ok = false;    // S_H^2 A <= Ker xi
  bool jacobi_ok = false;     // Lambda_H^3 A <= Ker (xi (x) id) o (id (x) xi)
  bool jacobi_generic = false;  // Lambda_H^3 A built in the flat ambient
  Index lambda3_dim = 0;
};

HLAxiomReport check_hl_axioms(const HLAlgebra& hl,
                              Index budget = kDefaultBudget,
                              bool allow_generic_cube = true);

struct PoissonReport {
  bool p2i_ok = false;         // xi(1 (x) a) = 0
  bool xi11_matches = false;   // xi_{1,1} equals the HL bracket
  bool derivation_ok = false;  // xi o (mu (x) id) = 2 (mu (x) id) o (id (x) xi)
  bool graded_ok = false;      // xi_{k,l} lands in grade k+l-1 (Axiom PG)
  bool mixed_antisym_ok = false;  // xi_{1,2}(x) = -xi_{2,1}(blockswap x)
};

PoissonReport poisson_on_free(const HLAlgebra& hl, Index truncation,
                              Index budget = kDefaultBudget,
                              bool allow_generic_cube = true);

// ---------------------------------------------------------------------------
// Associated graded module of a filtration.
// ---------------------------------------------------------------------------

// Per-step quotients A_k / A_{k-1} of a nested filtration by H-closed
// subspaces of `total`; throws InvariantViolation naming the grade index when
// a step quotient fails the AH-condition.
std::vector<AHModule> associated_graded(const AHModule& total,
                                        const std::vector<Subspace>& levels);

// The natural filtration of a (plain-carrier) free algebra inside the direct
// sum of its grade modules: returns (total, levels).
std::pair<AHModule, std::vector<Subspace>> natural_filtration(
    const FreeAlgebra& alg);

}  // namespace qalg

#endif  // QALG_HALGEBRA_HPP
