#ifndef QALG_AHMODULE_HPP
#define QALG_AHMODULE_HPP

#include <optional>
#include <string>
#include <vector>

#include "qalg/linalg.hpp"
#include "qalg/quaternion.hpp"

namespace qalg {

// An AH-module: a left H-module U = H^n together with a real subspace
// U' of R^{4n}, subject to the separation condition that no nonzero u in U
// is annihilated by every alpha in U^dagger.  Slot i of H^n occupies real
// coordinates 4i..4i+3 in the order (r0, r1, r2, r3).
//
// U^x is identified with H^n via alpha(u) = sum_i u_i a_i, and U^dagger is
// the real solution space of Re(sum_i u_i a_i) = 0 over all u in U'.
class AHModule {
 public:
  // The zero module.
  AHModule() : n_(0), uprime_(Subspace::zero(0)), dagger_(Subspace::zero(0)) {}

  // Validates the AH-condition; throws NotAHModuleError with a witness
  // otherwise.
  static AHModule make(Index rank, Subspace uprime);
  // H with H' = I.
  static AHModule quaternions();
  static AHModule zero_module() { return make(0, Subspace::zero(0)); }

  Index rank() const { return n_; }              // quaternionic rank n
  Index dim() const { return 4 * n_; }           // real dimension
  const Subspace& uprime() const { return uprime_; }
  const Subspace& dagger() const { return dagger_; }
  Index uprime_dim() const { return uprime_.dim(); }
  Index dagger_dim() const { return dagger_.dim(); }
  // r with dim U' = 2n + r; may be negative.
  Index virtual_dim() const { return uprime_.dim() - 2 * n_; }

  // alpha(u) for alpha given by dagger-basis row `which`.
  Quaternion pair(Index which, const RatVector& u) const;

  bool operator==(const AHModule& o) const {
    return n_ == o.n_ && uprime_ == o.uprime_;
  }

 private:
  AHModule(Index n, Subspace uprime, Subspace dagger)
      : n_(n), uprime_(std::move(uprime)), dagger_(std::move(dagger)) {}
  Index n_;
  Subspace uprime_;
  Subspace dagger_;  // basis rows = coefficient vectors of U^dagger in H^n
};

// Probe module X_q = H with X_q' = {p : pq = -qp}; q nonzero imaginary.
AHModule x_q(const Quaternion& q);

// Y = {(q1,q2,q3) in H^3 : q1 i1 + q2 i2 + q3 i3 = 0}, presented with rank 2.
AHModule y_module();

// Linear q-holomorphic functions on H: rank 3, in coordinates (q1,q2,q3)
// U' = {q_j in I, q1 i1 + q2 i2 + q3 i3 in I}.
AHModule u_linear();

// dim(U' ∩ q U') for a probe direction.
Index sector_dim(const AHModule& u, const Quaternion& q);
// The H-span of U' ∩ q U'.
Subspace sector_span(const AHModule& u, const Quaternion& q);

struct SemistabilityEvidence {
  bool semistable = false;
  std::vector<Index> sector_dims;  // one per probe
  Index span_dim = 0;              // dim of the joint H-span
};

SemistabilityEvidence is_semistable(const AHModule& u,
                                    const std::vector<Quaternion>& probes);

struct StabilityReport {
  bool semistable = false;
  bool stable = false;
  std::vector<Index> probe_sector_dims;   // canonical + supplied probes
  std::vector<Index> random_sector_dims;  // seeded random directions
};

// Monte-Carlo stability: sector dimension equals 2r at each canonical probe,
// each supplied probe and `random_count` seeded random directions.
StabilityReport is_stable(const AHModule& u,
                          const std::vector<Quaternion>& probes,
                          Index random_count, std::uint64_t seed);
StabilityReport is_stable(const AHModule& u, std::uint64_t seed = 1,
                          Index random_count = 20);

// Rejection-samples a random stable module with dim U = 4j, dim U' = 2j+r.
AHModule random_stable(Index j, Index r, std::uint64_t seed);

AHModule direct_sum(const AHModule& a, const AHModule& b);

// n copies of m, slots blocked per copy.
AHModule tensor_with_rn(Index n, const AHModule& m);

// w must be closed under left multiplication by i1, i2, i3; the result has
// U' = w ∩ V' in extracted H-basis coordinates.
struct SubmoduleResult {
  AHModule module;
  RatMatrix hbasis;  // rows: H-basis of w in ambient coordinates of parent
};
SubmoduleResult submodule(const AHModule& v, const Subspace& w);

// Quotient by an H-closed subspace whose prime part is w ∩ U'.  Returns
// nullopt (with witness) when U/V fails the AH-condition.
struct QuotientResult {
  std::optional<AHModule> module;
  RatVector witness;      // joint-kernel witness when construction fails
  RatMatrix projection;   // real matrix R^{4n} -> R^{4m} of the quotient map
};
QuotientResult quotient(const AHModule& u, const Subspace& v);

// Greedy extraction of an H-basis from an H-closed subspace of H^N: pick the
// basis row with the smallest leading pivot not in the current H-span, adjoin
// its i1,i2,i3 multiples.  Rows of the result are the H-basis vectors.
RatMatrix extract_h_basis(const Subspace& w);

// Coordinates of members of the H-span of `hbasis` (rows, H-independent) as
// elements of H^m: real matrix mapping ambient -> R^{4m}.
RatMatrix h_coordinates_matrix(const RatMatrix& hbasis);

struct IsoFingerprint {
  Index quat_rank = 0;
  Index uprime_dim = 0;
  Index dagger_dim = 0;
  Index virtual_dim = 0;
  std::vector<Index> sector_dims;  // at canonical_probes()

  bool operator==(const IsoFingerprint& o) const {
    return quat_rank == o.quat_rank && uprime_dim == o.uprime_dim &&
           dagger_dim == o.dagger_dim && virtual_dim == o.virtual_dim &&
           sector_dims == o.sector_dims;
  }
  bool operator!=(const IsoFingerprint& o) const { return !(*this == o); }
};

IsoFingerprint fingerprint(const AHModule& u);
bool fingerprints_match(const AHModule& a, const AHModule& b);

// AH-morphism phi(u)_j = sum_i u_i C_ij; coeff is n_source x n_target over H.
class AHMorphism {
 public:
  AHMorphism(AHModule source, AHModule target,
             std::vector<std::vector<Quaternion>> coeff);
  static AHMorphism identity(const AHModule& u);
  static AHMorphism zero(const AHModule& source, const AHModule& target);

  const AHModule& source() const { return source_; }
  const AHModule& target() const { return target_; }
  const RatMatrix& real_matrix() const { return real_; }  // 4nt x 4ns

  RatVector apply(const RatVector& u) const { return real_ * u; }
  bool maps_prime_to_prime() const;
  // phi^x restricted to daggers: matrix in the chosen dagger bases,
  // d_source x d_target (columns indexed by target dagger basis).
  RatMatrix dagger_matrix() const;

  AHMorphism compose_after(const AHMorphism& inner) const;  // this ∘ inner
  const std::vector<std::vector<Quaternion>>& coeff() const { return coeff_; }

 private:
  AHModule source_, target_;
  std::vector<std::vector<Quaternion>> coeff_;
  RatMatrix real_;
};

struct SequencePosition {
  bool module_exact = false;
  bool prime_exact = false;
  Index image_dim = 0, kernel_dim = 0;
  Index prime_image_dim = 0, prime_kernel_dim = 0;
};

struct SequenceReport {
  std::vector<SequencePosition> positions;  // interior positions
  bool ah_exact = true;
};

// Exactness of 0 -> M0 -> M1 -> ... -> Mk -> 0 at the interior modules,
// at module level and at prime level.
SequenceReport check_sequence(const std::vector<AHMorphism>& fs);

}  // namespace qalg

#endif  // QALG_AHMODULE_HPP
