#include "qalg/ahmodule.hpp"

#include <map>
#include <sstream>

namespace qalg {

namespace {

// Row of the pairing constraint Re(sum_i u_i a_i) = 0 as a functional of the
// coefficient vector a: for slot i the contribution is
// u_{i0} a_{i0} - u_{i1} a_{i1} - u_{i2} a_{i2} - u_{i3} a_{i3}.
RatMatrix dagger_constraints(Index n, const Subspace& uprime) {
  RatMatrix c(uprime.dim(), 4 * n);
  for (Index row = 0; row < uprime.dim(); ++row) {
    for (Index i = 0; i < n; ++i) {
      c(row, 4 * i + 0) = uprime.basis()(row, 4 * i + 0);
      c(row, 4 * i + 1) = -uprime.basis()(row, 4 * i + 1);
      c(row, 4 * i + 2) = -uprime.basis()(row, 4 * i + 2);
      c(row, 4 * i + 3) = -uprime.basis()(row, 4 * i + 3);
    }
  }
  return c;
}

// Real matrix of u -> sum_i u_i a_i for a fixed coefficient vector a in H^n:
// one 4x4 right-multiplication block per slot, stacked horizontally.
RatMatrix right_action_matrix(const RatVector& a, Index n) {
  RatMatrix m(4, 4 * n);
  for (Index i = 0; i < n; ++i)
    m.block(0, 4 * i, 4, 4) = right_mult_matrix(Quaternion::from_vector(a, 4 * i));
  return m;
}

}  // namespace

AHModule AHModule::make(Index rank, Subspace uprime) {
  if (uprime.ambient_dim() != 4 * rank)
    throw UsageError("make_ah_module: uprime ambient must be 4n");
  Subspace dagger = kernel(dagger_constraints(rank, uprime));
  // Joint kernel of u -> alpha(u) over a basis of U^dagger.
  RatMatrix stacked(4 * dagger.dim(), 4 * rank);
  for (Index k = 0; k < dagger.dim(); ++k)
    stacked.middleRows(4 * k, 4) =
        right_action_matrix(dagger.basis().row(k).transpose(), rank);
  Subspace joint = (dagger.dim() == 0 && rank > 0)
                       ? Subspace::full(4 * rank)
                       : kernel(stacked);
  if (rank > 0 && joint.dim() > 0) {
    std::ostringstream msg;
    msg << "not an AH-module: joint kernel has dimension " << joint.dim();
    throw NotAHModuleError(msg.str(), joint.basis().row(0).transpose());
  }
  return AHModule(rank, std::move(uprime), std::move(dagger));
}

AHModule AHModule::quaternions() {
  RatMatrix rows(3, 4);
  rows.setZero();
  rows(0, 1) = rows(1, 2) = rows(2, 3) = 1;
  return make(1, Subspace::from_rows(rows));
}

Quaternion AHModule::pair(Index which, const RatVector& u) const {
  Quaternion acc;
  for (Index i = 0; i < n_; ++i) {
    Quaternion ui = Quaternion::from_vector(u, 4 * i);
    Quaternion ai = Quaternion::from_vector(
        dagger_.basis().row(which).transpose(), 4 * i);
    acc = acc + ui * ai;
  }
  return acc;
}

AHModule x_q(const Quaternion& q) {
  if (!q.is_imaginary() || q.is_zero())
    throw UsageError("x_q: direction must be nonzero imaginary");
  // {p : pq = -qp} = kernel of p -> pq + qp.
  RatMatrix m = right_mult_matrix(q) + left_mult_matrix(q);
  return AHModule::make(1, kernel(m));
}

namespace {

// Constraint map H^3 -> H, (q1,q2,q3) -> q1 i1 + q2 i2 + q3 i3.
RatMatrix y_constraint_matrix() {
  RatMatrix m(4, 12);
  for (int j = 1; j <= 3; ++j)
    m.block(0, 4 * (j - 1), 4, 4) = right_mult_matrix(Quaternion::i(j));
  return m;
}

Subspace imaginary_slots(Index n) {
  RatMatrix rows(3 * n, 4 * n);
  rows.setZero();
  for (Index i = 0; i < n; ++i)
    for (Index h = 1; h < 4; ++h) rows(3 * i + h - 1, 4 * i + h) = 1;
  return Subspace::from_rows(rows);
}

}  // namespace

AHModule y_module() {
  Subspace w = kernel(y_constraint_matrix());
  return submodule(AHModule::make(3, imaginary_slots(3)), w).module;
}

AHModule u_linear() {
  // (q1,q2,q3) with q_j imaginary and q1 i1 + q2 i2 + q3 i3 imaginary.
  RatMatrix c(4, 12);
  c.setZero();
  c(0, 0) = 1;
  c(1, 4) = 1;
  c(2, 8) = 1;
  c.row(3) = y_constraint_matrix().row(0);
  return AHModule::make(3, kernel(c));
}

Subspace q_image(const AHModule& u, const Quaternion& q) {
  RatMatrix rows(u.uprime_dim(), u.dim());
  for (Index i = 0; i < u.uprime_dim(); ++i)
    rows.row(i) =
        left_mult_apply(q, u.uprime().basis().row(i).transpose()).transpose();
  return Subspace::from_rows(rows);
}

Index sector_dim(const AHModule& u, const Quaternion& q) {
  return intersect(u.uprime(), q_image(u, q)).dim();
}

Subspace sector_span(const AHModule& u, const Quaternion& q) {
  Subspace sector = intersect(u.uprime(), q_image(u, q));
  RatMatrix rows(4 * sector.dim(), u.dim());
  for (Index i = 0; i < sector.dim(); ++i) {
    RatVector v = sector.basis().row(i).transpose();
    rows.row(4 * i) = v.transpose();
    for (int k = 1; k <= 3; ++k)
      rows.row(4 * i + k) = left_mult_apply(Quaternion::i(k), v).transpose();
  }
  return Subspace::from_rows(rows);
}

SemistabilityEvidence is_semistable(const AHModule& u,
                                    const std::vector<Quaternion>& probes) {
  if (probes.empty()) throw UsageError("is_semistable: empty probe list");
  SemistabilityEvidence ev;
  Subspace span = Subspace::zero(u.dim());
  for (const Quaternion& q : probes) {
    if (!q.is_imaginary() || q.is_zero())
      throw UsageError("is_semistable: probes must be nonzero imaginary");
    ev.sector_dims.push_back(sector_dim(u, q));
    span = sum(span, sector_span(u, q));
  }
  ev.span_dim = span.dim();
  ev.semistable = (span.dim() == u.dim());
  return ev;
}

StabilityReport is_stable(const AHModule& u,
                          const std::vector<Quaternion>& probes,
                          Index random_count, std::uint64_t seed) {
  StabilityReport rep;
  std::vector<Quaternion> all = canonical_probes();
  all.insert(all.end(), probes.begin(), probes.end());
  rep.semistable = is_semistable(u, all).semistable;
  Index r = u.virtual_dim();
  bool flat = true;
  for (const Quaternion& q : all) {
    Index d = sector_dim(u, q);
    rep.probe_sector_dims.push_back(d);
    flat = flat && (d == 2 * r);
  }
  Rng rng(seed);
  for (Index k = 0; k < random_count; ++k) {
    Index d = sector_dim(u, random_imaginary(rng));
    rep.random_sector_dims.push_back(d);
    flat = flat && (d == 2 * r);
  }
  rep.stable = rep.semistable && r >= 0 && flat;
  return rep;
}

StabilityReport is_stable(const AHModule& u, std::uint64_t seed,
                          Index random_count) {
  return is_stable(u, {}, random_count, seed);
}

AHModule random_stable(Index j, Index r, std::uint64_t seed) {
  if (!(0 < r && r <= j)) throw UsageError("random_stable: need 0 < r <= j");
  Rng rng(seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Subspace uprime = Subspace::from_rows(rng.matrix(2 * j + r, 4 * j, 3));
    if (uprime.dim() != 2 * j + r) continue;
    try {
      AHModule cand = AHModule::make(j, uprime);
      if (is_stable(cand, {}, 20, rng.raw()).stable) return cand;
    } catch (const NotAHModuleError&) {
      continue;
    }
  }
  throw InvariantViolation("random_stable: retry limit exceeded");
}

AHModule direct_sum(const AHModule& a, const AHModule& b) {
  RatMatrix rows(a.uprime_dim() + b.uprime_dim(), a.dim() + b.dim());
  rows.setZero();
  rows.topLeftCorner(a.uprime_dim(), a.dim()) = a.uprime().basis();
  rows.bottomRightCorner(b.uprime_dim(), b.dim()) = b.uprime().basis();
  return AHModule::make(a.rank() + b.rank(), Subspace::from_rows(rows));
}

AHModule tensor_with_rn(Index n, const AHModule& m) {
  AHModule acc = m;
  for (Index k = 1; k < n; ++k) acc = direct_sum(acc, m);
  return n == 0 ? AHModule::zero_module() : acc;
}

namespace {

// Incremental row space with pivot bookkeeping; rows normalized to leading 1.
class RowSpace {
 public:
  explicit RowSpace(Index ambient) : ambient_(ambient) {}

  RatVector residue(RatVector v) const {
    for (const auto& [p, row] : rows_) {
      const Rational f = v(p);
      if (f == 0) continue;
      for (Index j = p; j < ambient_; ++j)
        if (row(j) != 0) v(j) -= f * row(j);
    }
    return v;
  }
  // Returns false when v was already in the span.
  bool insert(const RatVector& v) {
    RatVector r = residue(v);
    Index p = 0;
    while (p < ambient_ && r(p) == 0) ++p;
    if (p == ambient_) return false;
    const Rational inv = 1 / r(p);
    for (Index j = p; j < ambient_; ++j)
      if (r(j) != 0) r(j) *= inv;
    rows_.emplace(p, std::move(r));
    return true;
  }
  Index dim() const { return static_cast<Index>(rows_.size()); }

 private:
  Index ambient_;
  std::map<Index, RatVector> rows_;
};

}  // namespace

RatMatrix extract_h_basis(const Subspace& w) {
  if (w.ambient_dim() % 4 != 0)
    throw UsageError("extract_h_basis: ambient must be 4N");
  std::vector<RatVector> basis;
  RowSpace span(w.ambient_dim());
  // Basis rows are pivot-ordered; the first not in the current H-span has the
  // smallest leading pivot.
  for (Index i = 0; i < w.dim() && span.dim() < w.dim(); ++i) {
    RatVector v = w.basis().row(i).transpose();
    if (!span.insert(v)) continue;
    basis.push_back(v);
    for (int k = 1; k <= 3; ++k) {
      RatVector m = left_mult_apply(Quaternion::i(k), v);
      if (!w.contains(m))
        throw InvariantViolation("extract_h_basis: subspace is not H-closed");
      span.insert(m);
    }
  }
  if (span.dim() != w.dim())
    throw InvariantViolation("extract_h_basis: span mismatch");
  RatMatrix out(static_cast<Index>(basis.size()), w.ambient_dim());
  for (Index i = 0; i < out.rows(); ++i) out.row(i) = basis[i].transpose();
  return out;
}

RatMatrix h_coordinates_matrix(const RatMatrix& hbasis) {
  const Index m = hbasis.rows();
  const Index amb = hbasis.cols();
  // Columns of S: the full H-basis q_h * b_i of the span.
  RatMatrix s(amb, 4 * m);
  for (Index i = 0; i < m; ++i) {
    RatVector b = hbasis.row(i).transpose();
    s.col(4 * i + 0) = b;
    for (int k = 1; k <= 3; ++k)
      s.col(4 * i + k) = left_mult_apply(Quaternion::i(k), b);
  }
  // For x in the span, S c = x has a unique solution, determined by any 4m
  // independent rows of S.  Pick pivot rows via the RREF of S^T and invert
  // the square subsystem.
  RatMatrix st = rref(s.transpose());
  std::vector<Index> pivot_rows;
  for (Index i = 0; i < st.rows(); ++i) {
    Index c = 0;
    while (c < amb && st(i, c) == 0) ++c;
    pivot_rows.push_back(c);
  }
  if (static_cast<Index>(pivot_rows.size()) != 4 * m)
    throw InvariantViolation("h_coordinates_matrix: dependent H-basis");
  RatMatrix aug(4 * m, 8 * m);
  for (Index i = 0; i < 4 * m; ++i) {
    aug.row(i).head(4 * m) = s.row(pivot_rows[i]);
    aug.row(i).tail(4 * m).setZero();
    aug(i, 4 * m + i) = 1;
  }
  RatMatrix r = rref(std::move(aug));
  // rows of r: [I | inv]; scatter inv's columns to the pivot-row positions
  RatMatrix p = RatMatrix::Zero(4 * m, amb);
  for (Index i = 0; i < 4 * m; ++i)
    for (Index j = 0; j < 4 * m; ++j)
      p(i, pivot_rows[j]) = r(i, 4 * m + j);
  return p;
}

SubmoduleResult submodule(const AHModule& v, const Subspace& w) {
  RatMatrix hbasis = extract_h_basis(w);
  RatMatrix coords = h_coordinates_matrix(hbasis);  // ambient -> R^{4m}
  Subspace wprime = intersect(w, v.uprime());
  Subspace uprime_sub = wprime.map_through(coords);
  return SubmoduleResult{AHModule::make(hbasis.rows(), uprime_sub), hbasis};
}

QuotientResult quotient(const AHModule& u, const Subspace& v) {
  // v must be H-closed; pick slot representatives e_j not in v + chosen
  // H-spans, greedily, to present U/V as H^m.
  QuotientResult res;
  const Index n = u.rank();
  for (int k = 1; k <= 2; ++k)
    for (Index i = 0; i < v.dim(); ++i)
      if (!v.contains(
              left_mult_apply(Quaternion::i(k), v.basis().row(i).transpose())))
        throw InvariantViolation("quotient: subspace is not H-closed");
  RatMatrix vmat = v.basis();
  Subspace accum = v;
  std::vector<Index> free_slots;
  for (Index j = 0; j < n; ++j) {
    RatVector e = RatVector::Zero(4 * n);
    e(4 * j) = 1;
    if (accum.contains(e)) continue;
    free_slots.push_back(j);
    RatMatrix mult(4, 4 * n);
    mult.row(0) = e.transpose();
    for (int k = 1; k <= 3; ++k)
      mult.row(k) = left_mult_apply(Quaternion::i(k), e).transpose();
    accum = sum(accum, Subspace::from_rows(mult));
  }
  const Index m = static_cast<Index>(free_slots.size());
  if (accum.dim() != 4 * n)
    throw InvariantViolation("quotient: submodule is not H-closed");
  // Projection: solve u = v_part + sum_j q_j e_{slot j}; coordinates of q_j
  // via the augmented column reduction against [v basis | H-basis of slots].
  RatMatrix cols(4 * n, v.dim() + 4 * m);
  for (Index i = 0; i < v.dim(); ++i) cols.col(i) = vmat.row(i).transpose();
  for (Index jj = 0; jj < m; ++jj) {
    RatVector e = RatVector::Zero(4 * n);
    e(4 * free_slots[jj]) = 1;
    cols.col(v.dim() + 4 * jj) = e;
    for (int k = 1; k <= 3; ++k)
      cols.col(v.dim() + 4 * jj + k) = left_mult_apply(Quaternion::i(k), e);
  }
  RatMatrix aug(4 * n, cols.cols() + 4 * n);
  aug.leftCols(cols.cols()) = cols;
  aug.rightCols(4 * n) = RatMatrix::Identity(4 * n, 4 * n);
  RatMatrix r = rref(std::move(aug));
  RatMatrix proj = RatMatrix::Zero(4 * m, 4 * n);
  for (Index i = 0; i < r.rows(); ++i) {
    Index c = 0;
    while (c < cols.cols() + 4 * n && r(i, c) == 0) ++c;
    if (c >= v.dim() && c < cols.cols())
      proj.row(c - v.dim()) = r.row(i).tail(4 * n);
  }
  res.projection = proj;
  Subspace qprime = u.uprime().map_through(proj);
  try {
    res.module = AHModule::make(m, qprime);
  } catch (const NotAHModuleError& e) {
    res.witness = e.witness;
  }
  return res;
}

IsoFingerprint fingerprint(const AHModule& u) {
  IsoFingerprint fp;
  fp.quat_rank = u.rank();
  fp.uprime_dim = u.uprime_dim();
  fp.dagger_dim = u.dagger_dim();
  fp.virtual_dim = u.virtual_dim();
  for (const Quaternion& q : canonical_probes())
    fp.sector_dims.push_back(u.rank() == 0 ? 0 : sector_dim(u, q));
  return fp;
}

bool fingerprints_match(const AHModule& a, const AHModule& b) {
  return fingerprint(a) == fingerprint(b);
}

AHMorphism::AHMorphism(AHModule source, AHModule target,
                       std::vector<std::vector<Quaternion>> coeff)
    : source_(std::move(source)),
      target_(std::move(target)),
      coeff_(std::move(coeff)) {
  const Index ns = source_.rank(), nt = target_.rank();
  if (static_cast<Index>(coeff_.size()) != ns ||
      (ns > 0 && static_cast<Index>(coeff_[0].size()) != nt))
    throw UsageError("AHMorphism: coefficient matrix shape mismatch");
  real_ = RatMatrix::Zero(4 * nt, 4 * ns);
  for (Index i = 0; i < ns; ++i)
    for (Index j = 0; j < nt; ++j)
      real_.block(4 * j, 4 * i, 4, 4) = right_mult_matrix(coeff_[i][j]);
}

AHMorphism AHMorphism::identity(const AHModule& u) {
  std::vector<std::vector<Quaternion>> c(
      u.rank(), std::vector<Quaternion>(u.rank()));
  for (Index i = 0; i < u.rank(); ++i) c[i][i] = Quaternion::one();
  return AHMorphism(u, u, std::move(c));
}

AHMorphism AHMorphism::zero(const AHModule& source, const AHModule& target) {
  std::vector<std::vector<Quaternion>> c(
      source.rank(), std::vector<Quaternion>(target.rank()));
  return AHMorphism(source, target, std::move(c));
}

bool AHMorphism::maps_prime_to_prime() const {
  return target_.uprime().contains(source_.uprime().map_through(real_));
}

RatMatrix AHMorphism::dagger_matrix() const {
  // phi^x(beta)_i = sum_j C_ij beta_j; express images of target dagger basis
  // in source dagger coordinates.
  const Index ns = source_.rank(), nt = target_.rank();
  RatMatrix phix = RatMatrix::Zero(4 * ns, 4 * nt);
  for (Index i = 0; i < ns; ++i)
    for (Index j = 0; j < nt; ++j)
      phix.block(4 * i, 4 * j, 4, 4) = left_mult_matrix(coeff_[i][j]);
  RatMatrix out(source_.dagger_dim(), target_.dagger_dim());
  for (Index k = 0; k < target_.dagger_dim(); ++k) {
    RatVector img = phix * target_.dagger().basis().row(k).transpose();
    out.col(k) = source_.dagger().coordinates(img);
  }
  return out;
}

AHMorphism AHMorphism::compose_after(const AHMorphism& inner) const {
  const Index na = inner.source_.rank();
  const Index nc = target_.rank();
  std::vector<std::vector<Quaternion>> c(na, std::vector<Quaternion>(nc));
  for (Index i = 0; i < na; ++i)
    for (Index k = 0; k < nc; ++k) {
      Quaternion acc;
      for (Index j = 0; j < inner.target_.rank(); ++j)
        acc = acc + inner.coeff_[i][j] * coeff_[j][k];
      c[i][k] = acc;
    }
  return AHMorphism(inner.source_, target_, std::move(c));
}

SequenceReport check_sequence(const std::vector<AHMorphism>& fs) {
  SequenceReport rep;
  for (size_t k = 0; k + 1 < fs.size(); ++k) {
    if (!(fs[k].target() == fs[k + 1].source()))
      throw UsageError("check_sequence: morphisms are not composable");
    SequencePosition pos;
    Subspace img = Subspace::full(fs[k].source().dim())
                       .map_through(fs[k].real_matrix());
    Subspace ker = kernel(fs[k + 1].real_matrix());
    pos.image_dim = img.dim();
    pos.kernel_dim = ker.dim();
    pos.module_exact = (img == ker);
    Subspace pimg = fs[k].source().uprime().map_through(fs[k].real_matrix());
    Subspace pker = intersect(ker, fs[k].target().uprime());
    pos.prime_image_dim = pimg.dim();
    pos.prime_kernel_dim = pker.dim();
    pos.prime_exact = (pimg == pker);
    rep.ah_exact = rep.ah_exact && pos.module_exact && pos.prime_exact;
    rep.positions.push_back(pos);
  }
  return rep;
}

}  // namespace qalg
