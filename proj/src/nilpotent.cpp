#include "rigidity/nilpotent.hpp"

#include <complex>

#include "rigidity/matrix_core.hpp"

namespace rigidity {

QVec NilpotentAlgebra::bracket_vec(const QVec& x, const QVec& y) const {
  QVec out(dim, BigRat(0));
  for (int i = 0; i < dim; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < dim; ++j) {
      if (y[j] == 0) continue;
      BigRat c = x[i] * y[j];
      const QVec& bij = bracket[i][j];
      for (int k = 0; k < dim; ++k)
        if (bij[k] != 0) out[k] += c * bij[k];
    }
  }
  return out;
}

namespace {

QVec unit(int dim, int i) {
  QVec v(dim, BigRat(0));
  v[i] = 1;
  return v;
}

}  // namespace

void NilpotentAlgebra::validate() const {
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        if (bracket[i][j][k] != -bracket[j][i][k])
          fail(errc::jacobi_violation, "structure constants not antisymmetric");
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = j + 1; k < dim; ++k) {
        QVec s = bracket_vec(bracket[i][j], unit(dim, k));
        s = qadd(s, bracket_vec(bracket[j][k], unit(dim, i)));
        s = qadd(s, bracket_vec(bracket[k][i], unit(dim, j)));
        if (!is_zero(s))
          fail(errc::jacobi_violation,
               "Jacobi identity fails on basis triple (" + std::to_string(i) + "," +
                   std::to_string(j) + "," + std::to_string(k) + ")");
      }
}

CentralTower central_series(const NilpotentAlgebra& alg) {
  alg.validate();
  CentralTower tower;
  NilpotentAlgebra cur = alg;
  while (cur.dim > 0) {
    // Center: x with [x, e_j] = 0 for all j. Rows indexed by (j, component).
    QMatrix M(cur.dim * cur.dim, cur.dim);
    for (int j = 0; j < cur.dim; ++j)
      for (int k = 0; k < cur.dim; ++k)
        for (int i = 0; i < cur.dim; ++i) M(j * cur.dim + k, i) = cur.bracket[i][j][k];
    std::vector<QVec> ker = M.kernel();
    if (ker.empty())
      fail(errc::not_nilpotent, "nonzero algebra with trivial center is not nilpotent");

    ZMatrix center_rows = saturate_lattice(ker, cur.dim);
    const int cdim = int(center_rows.size());
    ZMatrix W = complete_to_unimodular(center_rows, cur.dim);

    TowerLayer layer;
    layer.algebra = cur;
    layer.center_dim = cdim;
    for (const auto& row : center_rows) {
      QVec v(cur.dim);
      for (int i = 0; i < cur.dim; ++i) v[i] = BigRat(row[i]);
      layer.center_basis.push_back(std::move(v));
    }

    // Coordinates w.r.t. the W-row basis: y = W^{-T} x; the quotient keeps the
    // trailing dim - cdim coordinates.
    QMatrix Wq(cur.dim, cur.dim);
    for (int i = 0; i < cur.dim; ++i)
      for (int j = 0; j < cur.dim; ++j) Wq(i, j) = BigRat(W[i][j]);
    QMatrix WinvT = Wq.inverse().transposed();
    const int qdim = cur.dim - cdim;
    QMatrix P(qdim, cur.dim);
    for (int a = 0; a < qdim; ++a)
      for (int i = 0; i < cur.dim; ++i) P(a, i) = WinvT(cdim + a, i);
    layer.projection = P;
    tower.layers.push_back(layer);

    // Quotient structure constants on classes of w_{cdim+a}.
    NilpotentAlgebra next;
    next.dim = qdim;
    next.bracket.assign(qdim, std::vector<QVec>(qdim, QVec(qdim, BigRat(0))));
    for (int a = 0; a < qdim; ++a)
      for (int b = 0; b < qdim; ++b) {
        QVec wa(cur.dim), wb(cur.dim);
        for (int i = 0; i < cur.dim; ++i) {
          wa[i] = BigRat(W[cdim + a][i]);
          wb[i] = BigRat(W[cdim + b][i]);
        }
        next.bracket[a][b] = P * cur.bracket_vec(wa, wb);
      }
    cur = next;
    if (tower.degree() > alg.dim)
      fail(errc::not_nilpotent, "central series does not terminate");
  }
  return tower;
}

AlgebraAutomorphism check_automorphism(const NilpotentAlgebra& alg, const QMatrix& phi) {
  if (phi.rows() != alg.dim || phi.cols() != alg.dim)
    fail(errc::dimension_mismatch, "automorphism dimension mismatch");
  for (int i = 0; i < alg.dim; ++i)
    for (int j = i + 1; j < alg.dim; ++j) {
      QVec lhs = phi * alg.bracket[i][j];
      QVec ei(alg.dim, BigRat(0)), ej(alg.dim, BigRat(0));
      ei[i] = 1;
      ej[j] = 1;
      QVec rhs = alg.bracket_vec(phi * ei, phi * ej);
      if (lhs != rhs)
        fail(errc::bracket_not_preserved,
             "bracket [e" + std::to_string(i) + ",e" + std::to_string(j) + "] not preserved");
    }
  if (!phi.is_integer()) fail(errc::lattice_not_preserved, "matrix has non-integer entries");
  BigRat dt = phi.det();
  if (dt != 1 && dt != -1) fail(errc::lattice_not_preserved, "determinant not +-1");
  return AlgebraAutomorphism{phi};
}

QMatrix descend_automorphism(const CentralTower& tower, const QMatrix& phi, int level) {
  if (level < 0 || level > tower.degree())
    fail(errc::level_out_of_range, "tower has degree " + std::to_string(tower.degree()));
  QMatrix cur = phi;
  for (int i = 0; i < level; ++i) {
    const TowerLayer& layer = tower.layers[i];
    const QMatrix& P = layer.projection;
    const int d = layer.algebra.dim;
    const int qdim = P.rows();
    // Section: solve P s_b = e_b with the pseudo-solution through the
    // completed basis; any preimage works because phi preserves the center.
    QMatrix S(d, qdim);
    {
      QMatrix Pt = P;  // solve P * x = unit for each quotient basis vector
      for (int b = 0; b < qdim; ++b) {
        QVec rhs(qdim, BigRat(0));
        rhs[b] = 1;
        auto sol = solve_linear(Pt, rhs);
        if (!sol) fail(errc::bad_input, "projection not surjective");
        for (int r = 0; r < d; ++r) S(r, b) = (*sol)[r];
      }
    }
    QMatrix next = P * cur * S;
    // Well-definedness: the descended map must intertwine the projection.
    if (!(P * cur == next * P))
      fail(errc::bracket_not_preserved, "map does not descend through the tower");
    cur = next;
  }
  return cur;
}

QMatrix descend_automorphism(const NilpotentAlgebra& alg, const QMatrix& phi, int level) {
  check_automorphism(alg, phi);
  return descend_automorphism(central_series(alg), phi, level);
}

LayerHyperbolicity layer_hyperbolicity(const NilpotentAlgebra& alg, const QMatrix& phi,
                                       double tol) {
  check_automorphism(alg, phi);
  CentralTower tower = central_series(alg);
  LayerHyperbolicity out;
  out.all_hyperbolic = true;
  QMatrix cur = phi;
  for (int i = 0; i < tower.degree(); ++i) {
    const TowerLayer& layer = tower.layers[i];
    // Restriction of the level map to the center, in center-basis coordinates.
    const int k = layer.center_dim;
    const int d = layer.algebra.dim;
    QMatrix C(d, k);
    for (int b = 0; b < k; ++b)
      for (int r = 0; r < d; ++r) C(r, b) = layer.center_basis[b][r];
    QMatrix R(k, k);
    for (int b = 0; b < k; ++b) {
      QVec img = cur * layer.center_basis[b];
      auto sol = solve_linear(C, img);
      if (!sol) fail(errc::bracket_not_preserved, "center not preserved by the map");
      for (int r = 0; r < k; ++r) R(r, b) = (*sol)[r];
    }
    LayerReport rep;
    rep.level = i;
    rep.center_dim = k;
    for (const auto& z : eigenvalues(R)) rep.center_moduli.push_back(std::abs(z));
    rep.hyperbolic = true;
    for (double m : rep.center_moduli)
      if (std::abs(m - 1.0) <= tol) rep.hyperbolic = false;
    if (!rep.hyperbolic) out.all_hyperbolic = false;
    out.layers.push_back(std::move(rep));
    if (i + 1 < tower.degree()) cur = descend_automorphism(tower, phi, i + 1);
  }
  return out;
}

}  // namespace rigidity
