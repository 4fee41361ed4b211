#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "rigidity/qmatrix.hpp"

namespace rigidity {

// Square integer matrix, arbitrary-precision entries.
struct IntMatrix {
  int d = 0;
  std::vector<BigInt> entries;  // row-major, d*d

  IntMatrix() = default;
  explicit IntMatrix(int dim) : d(dim), entries(size_t(dim) * dim, BigInt(0)) {}

  BigInt& at(int i, int j) { return entries[size_t(i) * d + j]; }
  const BigInt& at(int i, int j) const { return entries[size_t(i) * d + j]; }

  QMatrix to_q() const {
    QMatrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = BigRat(at(i, j));
    return m;
  }

  Eigen::MatrixXd to_eigen() const {
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = to_double(at(i, j));
    return m;
  }

  BigRat det() const { return to_q().det(); }
  bool is_unimodular() const {
    BigRat dt = det();
    return dt == 1 || dt == -1;
  }
};

constexpr double kDefaultTol = 1e-9;

// Roots of the exact characteristic polynomial, floating point.
std::vector<std::complex<double>> eigenvalues(const QMatrix& m);
std::vector<std::complex<double>> eigenvalues(const IntMatrix& m);

struct HyperbolicityReport {
  bool hyperbolic = false;
  std::vector<double> moduli;  // sorted descending
};

// True iff every eigenvalue modulus differs from 1 by more than tol.
HyperbolicityReport is_hyperbolic(const IntMatrix& m, double tol = kDefaultTol);

struct HyperbolicSplitting {
  int d = 0;
  double tol = kDefaultTol;
  Eigen::MatrixXd e_stable;    // d×ds, orthonormal columns spanning E^s
  Eigen::MatrixXd e_unstable;  // d×du, orthonormal columns spanning E^u
  double lambda_s = 0.0;       // max stable modulus (0 when E^s = 0)
  double lambda_u = 0.0;       // min unstable modulus (inf when E^u = 0)

  // Oblique coordinate maps: x = e_stable*(Ls x) + e_unstable*(Lu x).
  Eigen::MatrixXd Ls, Lu;
  // Restrictions of the source matrix in the subspace frames.
  Eigen::MatrixXd Bs, Bu;
  // Spectral projectors P_s + P_u = I, each along the other subspace.
  Eigen::MatrixXd proj_s, proj_u;

  int dim_s() const { return int(e_stable.cols()); }
  int dim_u() const { return int(e_unstable.cols()); }
};

HyperbolicSplitting hyperbolic_splitting(const IntMatrix& m, double tol = kDefaultTol);

struct AdaptedNorm {
  Eigen::MatrixXd gram;  // SPD matrix of the adapted inner product
  double lambda = 0.0;   // certified rate in (0,1)
  // Cholesky factors of the per-subspace grams in subspace coordinates:
  // the adapted box norm is |v| = max(|Rs*Ls*v|_2, |Ru*Lu*v|_2).
  Eigen::MatrixXd Rs, Ru;
  int power_s = 0, power_u = 0;  // averaging depths used by the construction
};

// Builds a norm with |Av| <= lambda|v| on E^s and |A^{-1}v| <= lambda|v| on
// E^u, lambda = max(lambda_s, 1/lambda_u)*(1+margin).
AdaptedNorm adapted_norm(const IntMatrix& m, const HyperbolicSplitting& split,
                         double margin);

struct RegularityProfile {
  int n = 0;
  int ad_unit_eigen_count = 0;
  int ad_circle_eigen_count = 0;
  bool regular = false;
  bool r_regular = false;
  int ambient_minimum = 0;  // n-1 for SL(n)
};

RegularityProfile regularity_profile(const IntMatrix& m, double tol = kDefaultTol);

struct RankOneReport {
  int rank = 0;
  bool is_rank_one = false;
};

RankOneReport rank_one_factor_test(const std::vector<std::vector<double>>& log_vectors);

}  // namespace rigidity
