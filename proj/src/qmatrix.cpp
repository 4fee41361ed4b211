#include "rigidity/qmatrix.hpp"

#include <algorithm>

namespace rigidity {

QMatrix QMatrix::operator*(const QMatrix& o) const {
  QMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const BigRat& aik = (*this)(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
    }
  return r;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
  QMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
  QMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

QVec QMatrix::operator*(const QVec& v) const {
  QVec r(rows_, BigRat(0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0) r[i] += (*this)(i, j) * v[j];
  return r;
}

QMatrix QMatrix::scaled(const BigRat& c) const {
  QMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = c * a_[i];
  return r;
}

QMatrix QMatrix::transposed() const {
  QMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

int rref(QMatrix& aug, int lhs_cols, std::vector<int>* pivot_cols) {
  int rank = 0;
  const int rows = aug.rows();
  for (int col = 0; col < lhs_cols && rank < rows; ++col) {
    int piv = -1;
    for (int i = rank; i < rows; ++i)
      if (aug(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < aug.cols(); ++j) std::swap(aug(piv, j), aug(rank, j));
    BigRat inv = BigRat(1) / aug(rank, col);
    for (int j = col; j < aug.cols(); ++j) aug(rank, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == rank || aug(i, col) == 0) continue;
      BigRat f = aug(i, col);
      for (int j = col; j < aug.cols(); ++j) aug(i, j) -= f * aug(rank, j);
    }
    if (pivot_cols) pivot_cols->push_back(col);
    ++rank;
  }
  return rank;
}

BigRat QMatrix::det() const {
  if (rows_ != cols_) fail(errc::non_square, "determinant of non-square matrix");
  QMatrix m = *this;
  BigRat d = 1;
  for (int col = 0; col < cols_; ++col) {
    int piv = -1;
    for (int i = col; i < rows_; ++i)
      if (m(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != col) {
      for (int j = 0; j < cols_; ++j) std::swap(m(piv, j), m(col, j));
      d = -d;
    }
    d *= m(col, col);
    BigRat inv = BigRat(1) / m(col, col);
    for (int i = col + 1; i < rows_; ++i) {
      if (m(i, col) == 0) continue;
      BigRat f = m(i, col) * inv;
      for (int j = col; j < cols_; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return d;
}

int QMatrix::rank() const {
  QMatrix m = *this;
  return rref(m, cols_);
}

QMatrix QMatrix::inverse() const {
  if (rows_ != cols_) fail(errc::non_square, "inverse of non-square matrix");
  QMatrix aug(rows_, 2 * cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, cols_ + i) = 1;
  }
  int r = rref(aug, cols_);
  if (r != cols_) fail(errc::not_invertible, "singular matrix");
  QMatrix inv(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
  return inv;
}

std::vector<QVec> QMatrix::kernel() const {
  QMatrix m = *this;
  std::vector<int> pivots;
  rref(m, cols_, &pivots);
  std::vector<bool> is_pivot(cols_, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<QVec> basis;
  for (int free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    QVec v(cols_, BigRat(0));
    v[free] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(int(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<BigRat> QMatrix::char_poly() const {
  if (rows_ != cols_) fail(errc::non_square, "char_poly of non-square matrix");
  const int n = rows_;
  std::vector<BigRat> c(n + 1, BigRat(0));
  c[n] = 1;
  QMatrix M = QMatrix(n, n);  // M_0 = 0
  for (int k = 1; k <= n; ++k) {
    // M_k = A*(M_{k-1} + c_{n-k+1} I)
    QMatrix t = M;
    for (int i = 0; i < n; ++i) t(i, i) += c[n - k + 1];
    M = (*this) * t;
    BigRat tr = 0;
    for (int i = 0; i < n; ++i) tr += M(i, i);
    c[n - k] = -tr / k;
  }
  return c;
}

std::optional<QVec> solve_linear(const QMatrix& A, const QVec& b) {
  QMatrix aug(A.rows(), A.cols() + 1);
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) aug(i, j) = A(i, j);
    aug(i, A.cols()) = b[i];
  }
  std::vector<int> pivots;
  rref(aug, A.cols(), &pivots);
  for (int i = 0; i < A.rows(); ++i) {
    bool all_zero = true;
    for (int j = 0; j < A.cols(); ++j)
      if (aug(i, j) != 0) {
        all_zero = false;
        break;
      }
    if (all_zero && aug(i, A.cols()) != 0) return std::nullopt;
  }
  QVec x(A.cols(), BigRat(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(int(r), A.cols());
  return x;
}

namespace {

// Row-style Hermite reduction of the d×k matrix T, tracking the unimodular U
// with U*T upper-triangularized. Returns the rank.
int hermite_rows(ZMatrix& T, ZMatrix& U) {
  const int d = int(T.size());
  const int k = d ? int(T[0].size()) : 0;
  int row = 0;
  for (int col = 0; col < k && row < d; ++col) {
    // Euclidean elimination in column `col` among rows >= row.
    while (true) {
      int piv = -1;
      BigInt best = 0;
      for (int i = row; i < d; ++i) {
        if (T[i][col] == 0) continue;
        BigInt a = T[i][col] < 0 ? BigInt(-T[i][col]) : T[i][col];
        if (piv < 0 || a < best) {
          piv = i;
          best = a;
        }
      }
      if (piv < 0) break;
      std::swap(T[piv], T[row]);
      std::swap(U[piv], U[row]);
      bool done = true;
      for (int i = row + 1; i < d; ++i) {
        if (T[i][col] == 0) continue;
        BigInt q = T[i][col] / T[row][col];
        for (int j = 0; j < k; ++j) T[i][j] -= q * T[row][j];
        for (int j = 0; j < d; ++j) U[i][j] -= q * U[row][j];
        if (T[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (T[row][col] == 0) continue;
    if (T[row][col] < 0) {
      for (auto& x : T[row]) x = -x;
      for (auto& x : U[row]) x = -x;
    }
    ++row;
  }
  return row;
}

// Returns U^{-T} where U is unimodular (exact, integer result).
ZMatrix unimodular_inverse_transpose(const ZMatrix& U) {
  const int d = int(U.size());
  QMatrix q(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) q(i, j) = BigRat(U[i][j]);
  QMatrix inv = q.inverse().transposed();
  ZMatrix out(d, std::vector<BigInt>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (!is_integer(inv(i, j))) fail(errc::bad_input, "matrix not unimodular");
      out[i][j] = rat_num(inv(i, j));
    }
  return out;
}

// Shared core: returns rows of U^{-T} where the first `rank` rows span the
// saturation of the row space of `rows_q` intersected with Z^d.
std::pair<ZMatrix, int> lattice_rows(const std::vector<QVec>& rows_q, int d) {
  // Scale rows to primitive integer vectors.
  ZMatrix B;
  for (const auto& v : rows_q) {
    BigInt l = 1;
    for (const auto& x : v) l = big_lcm(l, rat_den(x));
    if (l == 0) l = 1;
    std::vector<BigInt> w(d);
    BigInt g = 0;
    for (int j = 0; j < d; ++j) {
      BigRat s = v[j] * BigRat(l);
      w[j] = rat_num(s);
      g = big_gcd(g, w[j]);
    }
    if (g > 1)
      for (auto& x : w) x /= g;
    B.push_back(std::move(w));
  }
  const int k = int(B.size());
  // T = B^T (d×k), reduce rows of T.
  ZMatrix T(d, std::vector<BigInt>(k, BigInt(0)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < d; ++j) T[j][i] = B[i][j];
  ZMatrix U(d, std::vector<BigInt>(d, BigInt(0)));
  for (int i = 0; i < d; ++i) U[i][i] = 1;
  int rank = hermite_rows(T, U);
  return {unimodular_inverse_transpose(U), rank};
}

}  // namespace

ZMatrix saturate_lattice(const std::vector<QVec>& subspace_basis, int d) {
  auto [M, rank] = lattice_rows(subspace_basis, d);
  ZMatrix out(M.begin(), M.begin() + rank);
  return out;
}

namespace {

BigRat int_rows_det(const ZMatrix& rows) {
  const int d = int(rows.size());
  QMatrix q(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) q(i, j) = BigRat(rows[i][j]);
  return q.det();
}

}  // namespace

ZMatrix complete_to_unimodular(const ZMatrix& basis, int d) {
  const int k = int(basis.size());
  // Prefer completing with standard basis vectors so axis-aligned quotients
  // keep their natural coordinates; greedy choice checked by the final det.
  {
    ZMatrix W = basis;
    int have = k;
    for (int i = 0; i < d && have < d; ++i) {
      std::vector<BigInt> e(d, BigInt(0));
      e[i] = 1;
      ZMatrix trial = W;
      trial.push_back(e);
      QMatrix q(int(trial.size()), d);
      for (size_t r = 0; r < trial.size(); ++r)
        for (int c = 0; c < d; ++c) q(int(r), c) = BigRat(trial[r][c]);
      if (q.rank() == int(trial.size())) {
        W = std::move(trial);
        ++have;
      }
    }
    if (have == d) {
      BigRat det = int_rows_det(W);
      if (det == 1 || det == -1) return W;
    }
  }
  std::vector<QVec> rows_q;
  for (const auto& r : basis) {
    QVec v(d);
    for (int j = 0; j < d; ++j) v[j] = BigRat(r[j]);
    rows_q.push_back(std::move(v));
  }
  auto [M, rank] = lattice_rows(rows_q, d);
  if (rank != k) fail(errc::bad_input, "basis rows not independent");
  ZMatrix W = basis;
  for (int i = rank; i < d; ++i) W.push_back(M[i]);
  BigRat det = int_rows_det(W);
  if (det != 1 && det != -1)
    fail(errc::lattice_not_preserved, "rows do not span a saturated lattice");
  return W;
}

const char* errc_name(errc c) {
  switch (c) {
    case errc::non_square: return "NonSquare";
    case errc::tolerance_out_of_range: return "ToleranceOutOfRange";
    case errc::not_hyperbolic: return "NotHyperbolic";
    case errc::margin_too_large: return "MarginTooLarge";
    case errc::not_unimodular: return "NotUnimodular";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::invalid_rank: return "InvalidRank";
    case errc::not_dominant: return "NotDominant";
    case errc::not_integral: return "NotIntegral";
    case errc::empty_weight_set: return "EmptyWeightSet";
    case errc::not_nilpotent: return "NotNilpotent";
    case errc::jacobi_violation: return "JacobiViolation";
    case errc::bracket_not_preserved: return "BracketNotPreserved";
    case errc::lattice_not_preserved: return "LatticeNotPreserved";
    case errc::level_out_of_range: return "LevelOutOfRange";
    case errc::not_invertible: return "NotInvertible";
    case errc::budget: return "Budget";
    case errc::insufficient_samples: return "InsufficientSamples";
    case errc::transversality_failure: return "TransversalityFailure";
    case errc::no_finite_power: return "NoFinitePower";
    case errc::cone_violation: return "ConeViolation";
    case errc::unknown_generator: return "UnknownGenerator";
    case errc::unsolvable: return "UNSOLVABLE";
    case errc::bad_input: return "BadInput";
  }
  return "Unknown";
}

}  // namespace rigidity
