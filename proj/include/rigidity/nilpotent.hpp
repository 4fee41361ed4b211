#pragma once

#include <string>
#include <vector>

#include "rigidity/qmatrix.hpp"

namespace rigidity {

// Rational nilpotent Lie algebra in a lattice-adapted basis: the lattice is
// Z^d in the given coordinates.
struct NilpotentAlgebra {
  int dim = 0;
  // bracket[i][j] = coefficients of [e_i, e_j].
  std::vector<std::vector<QVec>> bracket;

  static NilpotentAlgebra zero() { return NilpotentAlgebra{}; }

  QVec bracket_vec(const QVec& x, const QVec& y) const;
  // Antisymmetry and the Jacobi identity, exact. Throws JacobiViolation.
  void validate() const;
};

struct TowerLayer {
  NilpotentAlgebra algebra;            // n_i
  std::vector<QVec> center_basis;      // saturated integer basis of Z(n_i)
  int center_dim = 0;                  // d_i
  QMatrix projection;                  // n_i -> n_{i+1}, integer, surjective
};

struct CentralTower {
  std::vector<TowerLayer> layers;  // layers[0..r-1]; the final zero algebra is implicit
  int degree() const { return int(layers.size()); }
};

// Upper central series n_{i+1} = n_i / Z(n_i) down to zero.
// Throws NotNilpotent when a nonzero layer has trivial center.
CentralTower central_series(const NilpotentAlgebra& alg);

struct AlgebraAutomorphism {
  QMatrix matrix;
};

// Validates bracket preservation and lattice preservation (integer entries,
// det = ±1). Throws BracketNotPreserved(i,j) / LatticeNotPreserved.
AlgebraAutomorphism check_automorphism(const NilpotentAlgebra& alg, const QMatrix& phi);

// Induced matrix on tower layer `level` (level = degree gives the 0x0 matrix).
QMatrix descend_automorphism(const NilpotentAlgebra& alg, const QMatrix& phi, int level);
QMatrix descend_automorphism(const CentralTower& tower, const QMatrix& phi, int level);

struct LayerReport {
  int level = 0;
  int center_dim = 0;
  std::vector<double> center_moduli;
  bool hyperbolic = false;
};

struct LayerHyperbolicity {
  std::vector<LayerReport> layers;
  bool all_hyperbolic = false;
};

// Moduli of the descended map restricted to each layer's center.
LayerHyperbolicity layer_hyperbolicity(const NilpotentAlgebra& alg, const QMatrix& phi,
                                       double tol = 1e-9);

}  // namespace rigidity
