#ifndef QALG_EMBEDDED_HPP
#define QALG_EMBEDDED_HPP

#include <optional>
#include <vector>

#include "qalg/ahmodule.hpp"

namespace qalg {

// Default cap on embedded ambient real dimensions (4 * prod of dual dims).
inline constexpr Index kDefaultBudget = 40000;

// An AH-module realized inside H (x) D_1 (x) ... (x) D_k where D_i is the
// dual (dagger)* space of a source module.  Ambient coordinate layout:
// 4*m + h with h the H-component and m the mixed-radix factor index
// (factor 0 slowest).  `space` is an H-submodule, `prime` its intersection
// with I (x) D_1 (x) ... (x) D_k.
struct EmbeddedModule {
  std::vector<Index> factor_dims;
  Subspace space;
  Subspace prime;
  AHModule base;      // abstract presentation after H-basis extraction
  RatMatrix hbasis;   // rows: H-basis of `space` in ambient coordinates
  RatMatrix coords;   // ambient -> R^{4 rank}: base coordinates of members

  Index dual_product() const {
    Index d = 1;
    for (Index f : factor_dims) d *= f;
    return d;
  }
  Index ambient_dim() const { return 4 * dual_product(); }
  Index dim() const { return space.dim(); }
  Index prime_dim() const { return prime.dim(); }
};

// Builds base/hbasis/coords from factors + space + prime.
EmbeddedModule make_embedded(std::vector<Index> factor_dims, Subspace space,
                             Subspace prime);

// The AH-module H = S_H^0 U as an embedded module with no dual factors.
EmbeddedModule embedded_unit();

// iota_U : U -> H (x) (U^dagger)*, iota(u).alpha = alpha(u); returns the
// image as an embedded module together with the 4d x 4n matrix of iota.
RatMatrix iota_matrix(const AHModule& u);
EmbeddedModule iota(const AHModule& u);

// Flat realization of the quaternionic tensor product of two embedded
// AH-submodules: the intersection of the two slab constraints in
// H (x) (factors of a) (x) (factors of b).
EmbeddedModule slab_product(const EmbeddedModule& a, const EmbeddedModule& b,
                            Index budget = kDefaultBudget);

// U (x)_H V and k-fold products, built in one flat ambient.
EmbeddedModule qtensor(const AHModule& u, const AHModule& v,
                       Index budget = kDefaultBudget);
EmbeddedModule qtensor_multi(const std::vector<AHModule>& mods,
                             Index budget = kDefaultBudget);
EmbeddedModule qtensor_k(const AHModule& u, Index k,
                         Index budget = kDefaultBudget);

// y = (id_H (x) L) x on ambient vectors; L acts on the whole dual-factor
// space.
RatVector apply_factor_map(const RatVector& x, const RatMatrix& L);

// Factor permutation: output factor p carries input factor perm[p].
RatVector permute_factors(const RatVector& x, const std::vector<Index>& dims,
                          const std::vector<int>& perm);

// Average over all k! simultaneous factor permutations (signed when
// `antisym`); the ambient realization of sigma_H.
RatVector symmetrize_factors(const RatVector& x,
                             const std::vector<Index>& dims,
                             bool antisym = false);

// sigma_H restricted to an embedded module (asserts invariance of the
// subspace); image of the projector together with its prime part.
EmbeddedModule projector_image(const EmbeddedModule& e, bool antisym);

EmbeddedModule sym_power(const AHModule& u, Index k,
                         Index budget = kDefaultBudget);
EmbeddedModule alt_power(const AHModule& u, Index k,
                         Index budget = kDefaultBudget);

// Element u (x)_H v; requires alpha(u) beta(v) = beta(v) alpha(u) for all
// dagger basis elements.  nullopt when the commutation precondition fails.
std::optional<RatVector> elem_tensor(const RatVector& u, const RatVector& v,
                                     const AHModule& U, const AHModule& V);

// An embedded AH-submodule of a parent sharing its factors.
EmbeddedModule embedded_submodule(const EmbeddedModule& parent,
                                  const Subspace& subspace);

struct TensorMorphismResult {
  AHMorphism morphism;       // between the base presentations
  RatMatrix factor_map;      // L with the realization id_H (x) L
  EmbeddedModule source, target;
};

// phi (x)_H psi : U (x)_H V -> W (x)_H X realized as
// id (x) (phi^x)* (x) (psi^x)*.
TensorMorphismResult tensor_morphism(const AHMorphism& f, const AHMorphism& g,
                                     Index budget = kDefaultBudget);

// Abstract AH-morphism between embedded bases induced by an ambient factor
// map L (must map a.space into b.space).
AHMorphism induced_morphism(const EmbeddedModule& a, const EmbeddedModule& b,
                            const RatMatrix& L);

}  // namespace qalg

#endif  // QALG_EMBEDDED_HPP
