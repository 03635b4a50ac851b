#include "qalg/variety.hpp"

#include <algorithm>
#include <sstream>

namespace qalg {

Quaternion eval_theta(const RatVector& x, const RatVector& y, Index k,
                      Index d) {
  if (x.size() != d) throw UsageError("eval_theta: point size mismatch");
  Index dk = 1;
  for (Index i = 0; i < k; ++i) dk *= d;
  if (y.size() != 4 * dk) throw UsageError("eval_theta: element size mismatch");
  Quaternion acc;
  std::vector<Index> digits(k);
  for (Index m = 0; m < dk; ++m) {
    Quaternion ym = Quaternion::from_vector(y, 4 * m);
    if (ym.is_zero()) continue;
    Rational weight = 1;
    Index rem = m;
    bool zero = false;
    for (Index p = k; p-- > 0;) {
      digits[p] = rem % d;
      rem /= d;
    }
    for (Index p = 0; p < k && !zero; ++p) {
      if (x(digits[p]) == 0)
        zero = true;
      else
        weight *= x(digits[p]);
    }
    if (zero) continue;
    acc = acc + ym * weight;
  }
  return acc;
}

Index monomial_index(Index a, Index b, Index d) {
  if (a > b) std::swap(a, b);
  return a * d - a * (a - 1) / 2 + (b - a);
}

bool QuadraticSystem::member(const RatVector& x) const {
  if (x.size() != qdual_dim) throw UsageError("member: point size mismatch");
  for (Index r = 0; r < real_equations.rows(); ++r) {
    Rational acc = real_equations(r, monomial_count());
    for (Index a = 0; a < qdual_dim; ++a) {
      if (x(a) == 0) continue;
      for (Index b = a; b < qdual_dim; ++b) {
        const Rational& c = real_equations(r, monomial_index(a, b, qdual_dim));
        if (c != 0 && x(b) != 0) acc += c * x(a) * x(b);
      }
    }
    if (acc != 0) return false;
  }
  return true;
}

namespace {

// Packed symmetric quaternion coefficients of the quadratic form of a flat
// grade-2 element y: psi_y(x) = sum_{m,m'} y_{(m,m')} x_m x_{m'}.
std::vector<Quaternion> quadratic_coefficients(const RatVector& y, Index d) {
  std::vector<Quaternion> coeff(d * (d + 1) / 2);
  for (Index a = 0; a < d; ++a)
    for (Index b = a; b < d; ++b) {
      Quaternion q = Quaternion::from_vector(y, 4 * (a * d + b));
      if (a != b) q = q + Quaternion::from_vector(y, 4 * (b * d + a));
      coeff[monomial_index(a, b, d)] = q;
    }
  return coeff;
}

RatMatrix canonical_rows(std::vector<RatVector> rows, Index width) {
  RatMatrix m(static_cast<Index>(rows.size()), width);
  for (Index i = 0; i < m.rows(); ++i) m.row(i) = rows[i].transpose();
  return rref(std::move(m));
}

Rational component(const Quaternion& q, Index h) {
  return h == 0 ? q.r0 : h == 1 ? q.r1 : h == 2 ? q.r2 : q.r3;
}

}  // namespace

QuadraticSystem emit_equations(const FreeAlgebra& alg,
                               const FactoredSpace& gens_grade2) {
  const Index d = alg.multiplicity() * alg.core_module().dagger_dim();
  QuadraticSystem sys;
  sys.qdual_dim = d;
  std::vector<RatVector> rows;
  for (Index i = 0; i < gens_grade2.real_part.dim(); ++i)
    for (Index j = 0; j < gens_grade2.core.dim(); ++j) {
      RatVector flat = expand_factored(
          gens_grade2.real_part.basis().row(i).transpose(),
          gens_grade2.core.space.basis().row(j).transpose(),
          alg.multiplicity(), alg.core_module().dagger_dim(), 2);
      std::vector<Quaternion> coeff = quadratic_coefficients(flat, d);
      sys.forms.push_back(coeff);
      sys.constants.push_back(Quaternion());
      for (Index h = 0; h < 4; ++h) {
        RatVector row = RatVector::Zero(sys.monomial_count() + 1);
        for (Index mi = 0; mi < sys.monomial_count(); ++mi)
          row(mi) = component(coeff[mi], h);
        rows.push_back(row);
      }
    }
  sys.real_equations =
      canonical_rows(std::move(rows), sys.monomial_count() + 1);
  return sys;
}

Index jacobian_rank(const QuadraticSystem& sys, const RatVector& x) {
  const Index d = sys.qdual_dim;
  RatMatrix jac = RatMatrix::Zero(sys.real_equations.rows(), d);
  for (Index r = 0; r < sys.real_equations.rows(); ++r)
    for (Index a = 0; a < d; ++a)
      for (Index b = a; b < d; ++b) {
        const Rational& c = sys.real_equations(r, monomial_index(a, b, d));
        if (c == 0) continue;
        jac(r, a) += c * x(b);
        jac(r, b) += c * x(a);
      }
  return rank_of(jac);
}

// ---------------------------------------------------------------------------
// Eguchi-Hanson machinery.
// ---------------------------------------------------------------------------

namespace {

struct YData {
  AHModule y;
  RatMatrix hbasis;          // 2 x 12, H-basis inside H^3
  RatMatrix beta_in_dagger;  // 3 x 3: beta_t rows in canonical dagger coords
};

// nu(y) = i1 q1 + i2 q2 + i3 q3 on rank-2 coordinates via the H^3 embedding.
Quaternion nu_of(const YData& yd, const RatVector& coords) {
  RatVector amb = RatVector::Zero(12);
  for (Index i = 0; i < 2; ++i) {
    Quaternion qi = Quaternion::from_vector(coords, 4 * i);
    for (Index s = 0; s < 3; ++s) {
      Quaternion slot =
          qi * Quaternion::from_vector(yd.hbasis.row(i).transpose(), 4 * s);
      amb(4 * s + 0) += slot.r0;
      amb(4 * s + 1) += slot.r1;
      amb(4 * s + 2) += slot.r2;
      amb(4 * s + 3) += slot.r3;
    }
  }
  Quaternion acc;
  for (int j = 1; j <= 3; ++j)
    acc = acc + Quaternion::i(j) * Quaternion::from_vector(amb, 4 * (j - 1));
  return acc;
}

YData build_y_data() {
  YData yd;
  RatMatrix cons(4, 12);
  for (int j = 1; j <= 3; ++j)
    cons.block(0, 4 * (j - 1), 4, 4) = right_mult_matrix(Quaternion::i(j));
  Subspace w = kernel(cons);
  RatMatrix prime_rows(9, 12);
  prime_rows.setZero();
  for (Index i = 0; i < 3; ++i)
    for (Index h = 1; h < 4; ++h) prime_rows(3 * i + h - 1, 4 * i + h) = 1;
  AHModule h3 = AHModule::make(3, Subspace::from_rows(prime_rows));
  auto sub = submodule(h3, w);
  yd.y = sub.module;
  yd.hbasis = sub.hbasis;
  // nu as a real 4x8 matrix on rank-2 coordinates
  RatMatrix nu_mat(4, 8);
  for (Index g = 0; g < 8; ++g) {
    RatVector e = RatVector::Zero(8);
    e(g) = 1;
    Quaternion v = nu_of(yd, e);
    nu_mat(0, g) = v.r0;
    nu_mat(1, g) = v.r1;
    nu_mat(2, g) = v.r2;
    nu_mat(3, g) = v.r3;
  }
  // w_t with nu(w_t) = i_t, then beta_t normalized by Re(beta_t(w_s)) = d_ts
  RatMatrix w_reps(3, 8);
  for (int t = 1; t <= 3; ++t) {
    auto sol = solve_in_rowspace(nu_mat.transpose(),
                                 Quaternion::i(t).to_vector());
    if (!sol)
      throw InvariantViolation("eh chart: nu is not surjective onto I");
    w_reps.row(t - 1) = sol->transpose();
  }
  RatMatrix pairings(3, 3);  // (dagger basis k, w_s)
  for (Index k = 0; k < 3; ++k)
    for (Index s = 0; s < 3; ++s)
      pairings(k, s) = yd.y.pair(k, w_reps.row(s).transpose()).r0;
  RatMatrix aug(3, 6);
  aug.leftCols(3) = pairings;
  aug.rightCols(3) = RatMatrix::Identity(3, 3);
  RatMatrix r = rref(std::move(aug));
  for (Index i = 0; i < 3; ++i)
    if (r(i, i) != 1)
      throw InvariantViolation("eh chart: degenerate dagger pairing");
  yd.beta_in_dagger = r.rightCols(3).transpose();
  return yd;
}

RatMatrix eh_chart_matrix(const YData& yd) {
  // x_{(l,t)} multiplies e_l (x) beta_t; the carrier dagger basis is
  // blockwise with the canonical Y-dagger basis inside each block.
  RatMatrix to_canonical = RatMatrix::Zero(9, 9);
  for (Index l = 0; l < 3; ++l)
    for (Index t = 0; t < 3; ++t)
      for (Index tp = 0; tp < 3; ++tp)
        to_canonical(3 * l + tp, 3 * l + t) = yd.beta_in_dagger(t, tp);
  return to_canonical;
}

// rows of the six dot-product quadratics v_a . v_b over v-monomials
RatMatrix dot_basis_rows() {
  RatMatrix rows = RatMatrix::Zero(6, 45);
  Index r = 0;
  for (Index a = 0; a < 3; ++a)
    for (Index b = a; b < 3; ++b) {
      for (Index l = 0; l < 3; ++l)
        rows(r, monomial_index(3 * l + a, 3 * l + b, 9)) += 1;
      ++r;
    }
  return rows;
}

std::vector<Rational> poly_gcd(std::vector<Rational> a,
                               std::vector<Rational> b) {
  auto trim = [](std::vector<Rational>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
  };
  trim(a);
  trim(b);
  while (!b.empty()) {
    while (a.size() >= b.size() && !a.empty()) {
      Rational f = a.back() / b.back();
      size_t shift = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
      trim(a);
      if (a.size() < b.size()) break;
    }
    std::swap(a, b);
    trim(b);
  }
  return a;
}

int classify_lambda(const RatMatrix& lam) {
  bool zero = true;
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) zero &= (lam(i, j) == 0);
  if (zero) return 1;
  Rational tr = lam(0, 0) + lam(1, 1) + lam(2, 2);
  Rational sum2 = lam(0, 0) * lam(1, 1) - lam(0, 1) * lam(1, 0) +
                  lam(0, 0) * lam(2, 2) - lam(0, 2) * lam(2, 0) +
                  lam(1, 1) * lam(2, 2) - lam(1, 2) * lam(2, 1);
  Rational det = lam(0, 0) * (lam(1, 1) * lam(2, 2) - lam(1, 2) * lam(2, 1)) -
                 lam(0, 1) * (lam(1, 0) * lam(2, 2) - lam(1, 2) * lam(2, 0)) +
                 lam(0, 2) * (lam(1, 0) * lam(2, 1) - lam(1, 1) * lam(2, 0));
  std::vector<Rational> p = {-det, sum2, -tr, Rational(1)};
  std::vector<Rational> dp = {sum2, -2 * tr, Rational(3)};
  std::vector<Rational> g = poly_gcd(p, dp);
  if (g.size() <= 1) return 3;  // squarefree: three distinct eigenvalues
  if (g.size() == 2) {
    // repeated eigenvalue r; remaining one is tr - 2r.  In the normal form
    // (alpha >= beta >= gamma, a = alpha-gamma, b = beta-gamma) case 2 is
    // exactly "the repeated eigenvalue is the smallest".
    Rational rr = -g[0] / g[1];
    Rational ss = tr - 2 * rr;
    return rr < ss ? 2 : 3;
  }
  return 1;  // triple root of a traceless matrix means lambda = 0
}

}  // namespace

RatVector EHChart::point(const RatVector& v1, const RatVector& v2,
                         const RatVector& v3) const {
  RatVector v = RatVector::Zero(9);
  for (Index l = 0; l < 3; ++l) {
    v(3 * l + 0) = v1(l);
    v(3 * l + 1) = v2(l);
    v(3 * l + 2) = v3(l);
  }
  return v;
}

QuadraticSystem eh_reference_system() {
  return eh_reference_system(RatMatrix::Zero(3, 3));
}

QuadraticSystem eh_reference_system(const RatMatrix& a) {
  QuadraticSystem sys;
  sys.qdual_dim = 9;
  RatMatrix dots = dot_basis_rows();
  auto dot_row = [&](Index i, Index j) {
    if (i > j) std::swap(i, j);
    Index r = 0;
    for (Index ii = 0; ii < 3; ++ii)
      for (Index jj = ii; jj < 3; ++jj) {
        if (ii == i && jj == j) return RatVector(dots.row(r).transpose());
        ++r;
      }
    throw UsageError("dot_row");
  };
  std::vector<RatVector> rows;
  RatVector row = RatVector::Zero(46);
  row.head(45) = dot_row(0, 0) - dot_row(1, 1);
  row(45) = -(a(0, 0) - a(1, 1));
  rows.push_back(row);
  row.setZero();
  row.head(45) = dot_row(1, 1) - dot_row(2, 2);
  row(45) = -(a(1, 1) - a(2, 2));
  rows.push_back(row);
  const Index pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (auto& pr : pairs) {
    row.setZero();
    row.head(45) = dot_row(pr[0], pr[1]);
    row(45) = -a(pr[0], pr[1]);
    rows.push_back(row);
  }
  sys.real_equations = canonical_rows(std::move(rows), 46);
  return sys;
}

EHFamily eh_family(const RatMatrix& lambda, Index label_truncation,
                   Index budget) {
  if (lambda.rows() != 3 || lambda.cols() != 3)
    throw UsageError("eh_family: lambda must be 3x3");
  if (lambda != RatMatrix(lambda.transpose()))
    throw InvariantViolation("eh_family: lambda must be symmetric");
  if (lambda(0, 0) + lambda(1, 1) + lambda(2, 2) != 0)
    throw InvariantViolation("eh_family: lambda must be trace-free");
  if (label_truncation % 2 != 0 || label_truncation < 4)
    throw UsageError("eh_family: label truncation must be even and >= 4");
  const Index K = label_truncation / 2;

  EHFamily fam;
  fam.lambda = lambda;
  fam.case_index = classify_lambda(lambda);

  YData yd = build_y_data();
  fam.chart.to_canonical = eh_chart_matrix(yd);
  fam.algebra = FreeAlgebra::build_factored(3, yd.y, K, budget);

  // J = <h> (x) S_H^2 Y in grade 2, h the Euclidean metric on R^3.
  RatVector h = RatVector::Zero(9);
  h(0) = h(4) = h(8) = 1;
  FactoredSpace gens{Subspace::from_rows(h.transpose()),
                     fam.algebra.core_power(2)};
  fam.ideal = ideal_from_generators(fam.algebra, 2, gens);
  fam.quotient = quotient_algebra(fam.algebra, fam.ideal);

  // Deformed equations: psi_y for y = (lambda(s), s) in J^lambda.  The
  // homogeneous part is psi_s pulled to v-coordinates through the chart; the
  // constant comes from expressing each real component in the dot-product
  // basis and substituting v_j.v_k -> a_jk, realizing the identification
  // (S_H^2 Y)^dagger = S^2_0 R^3 in coordinates.
  RatMatrix dots = dot_basis_rows();
  const RatMatrix& B = fam.chart.to_canonical;
  std::vector<RatVector> eq_rows;
  std::vector<RatVector> lambda_rhs;
  RatMatrix jflat(12, 4 * 81);
  {
    Index r = 0;
    for (Index i = 0; i < gens.real_part.dim(); ++i)
      for (Index j = 0; j < gens.core.dim(); ++j)
        jflat.row(r++) =
            expand_factored(gens.real_part.basis().row(i).transpose(),
                            gens.core.space.basis().row(j).transpose(), 3, 3,
                            2)
                .transpose();
  }
  fam.system.qdual_dim = 9;
  for (Index jrow = 0; jrow < jflat.rows(); ++jrow) {
    std::vector<Quaternion> coeff =
        quadratic_coefficients(jflat.row(jrow).transpose(), 9);
    // substitute x = B v: Qv = B^T Qc B on the unpacked coefficients
    std::vector<Quaternion> vcoeff(45);
    for (Index a = 0; a < 9; ++a)
      for (Index b = a; b < 9; ++b) {
        Quaternion acc;
        for (Index p = 0; p < 9; ++p)
          for (Index q = p; q < 9; ++q) {
            Quaternion cpq = coeff[monomial_index(p, q, 9)];
            if (cpq.is_zero()) continue;
            Rational w;
            if (p == q)
              w = B(p, a) * B(p, b) * (a == b ? 1 : 2);
            else if (a == b)
              w = B(p, a) * B(q, a);
            else
              w = B(p, a) * B(q, b) + B(p, b) * B(q, a);
            if (w != 0) acc = acc + cpq * w;
          }
        vcoeff[monomial_index(a, b, 9)] = acc;
      }
    fam.system.forms.push_back(vcoeff);
    RatVector lam_s(4);
    for (Index hc = 0; hc < 4; ++hc) {
      RatVector row = RatVector::Zero(46);
      for (Index mi = 0; mi < 45; ++mi) row(mi) = component(vcoeff[mi], hc);
      auto rep = solve_in_rowspace(dots, row.head(45));
      if (!rep)
        throw InvariantViolation(
            "eh_family: psi component leaves the rotation-invariant span");
      Rational cst = 0;
      Index r = 0;
      for (Index ii = 0; ii < 3; ++ii)
        for (Index jj = ii; jj < 3; ++jj) cst += (*rep)(r++) * lambda(ii, jj);
      row(45) = -cst;
      lam_s(hc) = -cst;
      eq_rows.push_back(row);
    }
    lambda_rhs.push_back(lam_s);
    fam.system.constants.push_back(Quaternion::from_vector(lam_s, 0));
  }
  fam.system.real_equations = canonical_rows(std::move(eq_rows), 46);

  // Filtered ideal of J^lambda = {(lambda(s), s)}: mu(J^lambda (x)_H grade_m)
  // contributes pairs (lambda-hat contraction, sigma(s x)) in
  // grade_m (+) grade_{m+2}.  lambda-hat is realized by a tensor Lambda in
  // (Q^dagger)^(x)2 with s . Lambda = lambda(s) on J.
  RatVector lam_vec;
  {
    RatMatrix a(4 * 12, 81);
    RatVector b(4 * 12);
    for (Index i = 0; i < 12; ++i)
      for (Index hc = 0; hc < 4; ++hc) {
        for (Index mm = 0; mm < 81; ++mm)
          a(4 * i + hc, mm) = jflat(i, 4 * mm + hc);
        b(4 * i + hc) = lambda_rhs[i](hc);
      }
    auto sol = solve_in_rowspace(a.transpose(), b);
    if (!sol) throw InvariantViolation("eh_family: lambda is not realizable");
    lam_vec = *sol;
  }
  std::vector<Index> offset(K + 1), gdim(K + 1);
  Index total = 0;
  for (Index k = 0; k <= K; ++k) {
    offset[k] = total;
    gdim[k] = fam.algebra.grade(k).real_part.dim() *
              fam.algebra.grade(k).core.dim();
    total += gdim[k];
  }
  std::vector<RatVector> ideal_rows;
  std::vector<Index> piece_level;
  for (Index m = 0; m + 2 <= K; ++m) {
    const FactoredSpace& gm = fam.algebra.grade(m);
    const EmbeddedModule& tm2 = fam.algebra.core_power(m + 2);
    const EmbeddedModule& tm = fam.algebra.core_power(m);
    Index dm = 1;
    for (Index p = 0; p < m; ++p) dm *= 3;
    for (Index i = 0; i < gm.real_part.dim(); ++i) {
      // real part of J (x) grade_m: h (x) r; slices over (a1, a2) are
      // delta_{a1 a2} r
      RatVector r_small = gm.real_part.basis().row(i).transpose();
      RatVector rj = RatVector::Zero(9 * dm);
      for (Index l = 0; l < 3; ++l)
        for (Index o = 0; o < dm; ++o) rj((l * 3 + l) * dm + o) = r_small(o);
      RatVector rs = real_symmetrize(rj, std::vector<Index>(m + 2, 3));
      RatVector rs_coords =
          fam.algebra.grade(m + 2).real_part.coordinates(rs);
      for (Index j = 0; j < tm2.dim(); ++j) {
        RatVector c = tm2.space.basis().row(j).transpose();
        RatVector row = RatVector::Zero(total);
        RatVector c_coords = tm2.space.coordinates(c);
        for (Index rc = 0; rc < rs_coords.size(); ++rc)
          for (Index cc = 0; cc < c_coords.size(); ++cc)
            if (rs_coords(rc) != 0 && c_coords(cc) != 0)
              row(offset[m + 2] + rc * tm2.dim() + cc) +=
                  rs_coords(rc) * c_coords(cc);
        // grade-m block: sum over a of the Lambda (a,a)-block contraction
        RatVector ccon = RatVector::Zero(4 * dm);
        for (Index aa = 0; aa < 3; ++aa)
          for (Index t1 = 0; t1 < 3; ++t1)
            for (Index t2 = 0; t2 < 3; ++t2) {
              const Rational& lv = lam_vec((3 * aa + t1) * 9 + (3 * aa + t2));
              if (lv == 0) continue;
              for (Index o = 0; o < dm; ++o)
                for (Index hh = 0; hh < 4; ++hh) {
                  const Rational& cv = c(4 * ((t1 * 3 + t2) * dm + o) + hh);
                  if (cv != 0) ccon(4 * o + hh) += lv * cv;
                }
            }
        bool cz = true;
        for (Index o = 0; o < ccon.size(); ++o) cz &= (ccon(o) == 0);
        if (!cz) {
          if (!tm.space.contains(ccon))
            throw InvariantViolation(
                "eh_family: contracted element leaves the grade");
          RatVector cco = tm.space.coordinates(ccon);
          // the real factor of the contraction is r_small itself
          RatVector rco = gm.real_part.coordinates(r_small);
          for (Index rc = 0; rc < rco.size(); ++rc)
            for (Index cc = 0; cc < cco.size(); ++cc)
              if (rco(rc) != 0 && cco(cc) != 0)
                row(offset[m] + rc * tm.dim() + cc) += rco(rc) * cco(cc);
        }
        ideal_rows.push_back(row);
        piece_level.push_back(m + 2);
      }
    }
  }
  for (Index k = 0; k <= K; ++k) {
    std::vector<RatVector> upto;
    for (size_t i = 0; i < ideal_rows.size(); ++i)
      if (piece_level[i] <= k) upto.push_back(ideal_rows[i]);
    RatMatrix canon = canonical_rows(std::move(upto), total);
    Index idim = canon.rows();
    fam.filtered_ideal_dims.push_back(idim);
    Index fdim = 0;
    for (Index j = 0; j <= k; ++j) fdim += gdim[j];
    fam.filtered_quotient_dims.push_back(fdim - idim);
  }
  return fam;
}

bool so3_action_check(const QuadraticSystem& sys, const RatMatrix& rotation) {
  if (rotation.rows() != 3 || rotation.cols() != 3)
    throw UsageError("so3_action_check: rotation must be 3x3");
  if (RatMatrix(rotation.transpose() * rotation) != RatMatrix::Identity(3, 3))
    throw InvariantViolation("so3_action_check: rotation is not orthogonal");
  Rational det =
      rotation(0, 0) *
          (rotation(1, 1) * rotation(2, 2) - rotation(1, 2) * rotation(2, 1)) -
      rotation(0, 1) *
          (rotation(1, 0) * rotation(2, 2) - rotation(1, 2) * rotation(2, 0)) +
      rotation(0, 2) *
          (rotation(1, 0) * rotation(2, 1) - rotation(1, 1) * rotation(2, 0));
  if (det != 1)
    throw InvariantViolation("so3_action_check: rotation must have det 1");
  const Index d = sys.qdual_dim;
  // substitution x -> R^{-1} x acting chart-wise on the l-index
  RatMatrix minv = RatMatrix::Zero(d, d);
  for (Index l = 0; l < 3; ++l)
    for (Index lp = 0; lp < 3; ++lp)
      for (Index t = 0; t < 3; ++t)
        minv(3 * l + t, 3 * lp + t) = rotation(lp, l);  // R^{-1} = R^T
  Subspace rowspace = Subspace::from_canonical(sys.real_equations);
  for (Index r = 0; r < sys.real_equations.rows(); ++r) {
    RatVector trow = RatVector::Zero(sys.monomial_count() + 1);
    for (Index a = 0; a < d; ++a)
      for (Index b = a; b < d; ++b) {
        const Rational& c = sys.real_equations(r, monomial_index(a, b, d));
        if (c == 0) continue;
        for (Index p = 0; p < d; ++p) {
          if (minv(a, p) == 0) continue;
          for (Index q = 0; q < d; ++q)
            if (minv(b, q) != 0)
              trow(monomial_index(p, q, d)) += c * minv(a, p) * minv(b, q);
        }
      }
    trow(sys.monomial_count()) = sys.real_equations(r, sys.monomial_count());
    if (!rowspace.contains(trow)) return false;
  }
  return true;
}

Index reconstruction_rank(const EHFamily& fam, const RatVector& x,
                          bool include_grade2) {
  const QuadraticSystem& sys = fam.system;
  const Index d = sys.qdual_dim;
  RatMatrix jac = RatMatrix::Zero(sys.real_equations.rows(), d);
  for (Index r = 0; r < sys.real_equations.rows(); ++r)
    for (Index a = 0; a < d; ++a)
      for (Index b = a; b < d; ++b) {
        const Rational& c = sys.real_equations(r, monomial_index(a, b, d));
        if (c == 0) continue;
        jac(r, a) += c * x(b);
        jac(r, b) += c * x(a);
      }
  Subspace tangent = kernel(jac);
  RatVector xc = fam.chart.to_canonical * x;
  std::vector<RatVector> rows;
  const FactoredSpace& grade1 = fam.algebra.grade(1);
  for (Index i = 0; i < grade1.real_part.dim(); ++i)
    for (Index j = 0; j < grade1.core.dim(); ++j) {
      RatVector y = expand_factored(
          grade1.real_part.basis().row(i).transpose(),
          grade1.core.space.basis().row(j).transpose(), 3, 3, 1);
      RatVector row(4 * tangent.dim());
      for (Index t = 0; t < tangent.dim(); ++t) {
        RatVector tc =
            fam.chart.to_canonical * tangent.basis().row(t).transpose();
        row.segment(4 * t, 4) = eval_theta(tc, y, 1, 9).to_vector();
      }
      rows.push_back(row);
    }
  if (include_grade2) {
    const FactoredSpace& grade2 = fam.algebra.grade(2);
    for (Index i = 0; i < grade2.real_part.dim(); ++i)
      for (Index j = 0; j < grade2.core.dim(); ++j) {
        RatVector y = expand_factored(
            grade2.real_part.basis().row(i).transpose(),
            grade2.core.space.basis().row(j).transpose(), 3, 3, 2);
        RatVector row(4 * tangent.dim());
        for (Index t = 0; t < tangent.dim(); ++t) {
          RatVector tc =
              fam.chart.to_canonical * tangent.basis().row(t).transpose();
          Quaternion val;
          for (Index p = 0; p < 9; ++p)
            for (Index q = 0; q < 9; ++q) {
              Quaternion ypq = Quaternion::from_vector(y, 4 * (p * 9 + q));
              if (ypq.is_zero()) continue;
              Rational w = xc(p) * tc(q) + tc(p) * xc(q);
              if (w != 0) val = val + ypq * w;
            }
          row.segment(4 * t, 4) = val.to_vector();
        }
        rows.push_back(row);
      }
  }
  RatMatrix m(static_cast<Index>(rows.size()), 4 * tangent.dim());
  for (Index i = 0; i < m.rows(); ++i) m.row(i) = rows[i].transpose();
  return rank_of(m);
}

}  // namespace qalg
