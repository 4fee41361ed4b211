#pragma once

#include <optional>
#include <vector>

#include "rigidity/errors.hpp"
#include "rigidity/rational.hpp"

namespace rigidity {

// Dense matrix over arbitrary-precision rationals. All operations are exact.
class QMatrix {
 public:
  QMatrix() : rows_(0), cols_(0) {}
  QMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, BigRat(0)) {}

  static QMatrix identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  BigRat& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const BigRat& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  bool operator==(const QMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  QMatrix operator*(const QMatrix& o) const;
  QMatrix operator+(const QMatrix& o) const;
  QMatrix operator-(const QMatrix& o) const;
  QVec operator*(const QVec& v) const;
  QMatrix scaled(const BigRat& c) const;
  QMatrix transposed() const;

  bool is_zero() const {
    for (const auto& x : a_)
      if (x != 0) return false;
    return true;
  }

  bool is_integer() const {
    for (const auto& x : a_)
      if (!rigidity::is_integer(x)) return false;
    return true;
  }

  BigRat det() const;
  int rank() const;

  // Inverse; throws domain_error(not_invertible) on singular input.
  QMatrix inverse() const;

  // Basis of the right kernel, one QVec per basis vector.
  std::vector<QVec> kernel() const;

  // Characteristic polynomial coefficients c_0..c_n with
  // p(x) = c_n x^n + ... + c_1 x + c_0 and c_n = 1 (Faddeev–LeVerrier).
  std::vector<BigRat> char_poly() const;

  std::vector<double> to_double() const {
    std::vector<double> out(a_.size());
    for (size_t i = 0; i < a_.size(); ++i) out[i] = rigidity::to_double(a_[i]);
    return out;
  }

 private:
  int rows_, cols_;
  std::vector<BigRat> a_;
};

// Solves A x = b exactly. Returns nullopt when inconsistent; otherwise the
// particular solution with non-pivot unknowns set to zero.
std::optional<QVec> solve_linear(const QMatrix& A, const QVec& b);

// Row-reduces [A | B] in place and returns the rank of A (used by solvers that
// need pivot bookkeeping).
int rref(QMatrix& aug, int lhs_cols, std::vector<int>* pivot_cols = nullptr);

// --- integer lattice helpers -------------------------------------------------

using ZMatrix = std::vector<std::vector<BigInt>>;

// Extends the rows of `basis` (k primitive, saturated, independent integer
// vectors of length d) to a d×d unimodular matrix whose first k rows are
// `basis`. Throws if the rows are not extendable (non-primitive input).
ZMatrix complete_to_unimodular(const ZMatrix& basis, int d);

// Given a rational subspace basis, returns a basis of the saturated integer
// lattice (subspace ∩ Z^d), i.e. primitive integer vectors spanning it.
ZMatrix saturate_lattice(const std::vector<QVec>& subspace_basis, int d);

}  // namespace rigidity
