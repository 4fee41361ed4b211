#include <doctest.h>

#include "rigidity/qmatrix.hpp"

using namespace rigidity;

namespace {

QMatrix from_rows(std::vector<std::vector<long long>> rows) {
  QMatrix m(int(rows.size()), int(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(int(i), int(j)) = BigRat(rows[i][j]);
  return m;
}

}  // namespace

TEST_CASE("exact determinant, inverse and product") {
  QMatrix a = from_rows({{2, 1}, {1, 1}});
  CHECK(a.det() == BigRat(1));
  QMatrix inv = a.inverse();
  CHECK(inv(0, 0) == BigRat(1));
  CHECK(inv(0, 1) == BigRat(-1));
  CHECK(inv(1, 0) == BigRat(-1));
  CHECK(inv(1, 1) == BigRat(2));
  CHECK(a * inv == QMatrix::identity(2));

  QMatrix s = from_rows({{0, 1}, {1, 0}});
  CHECK(s.det() == BigRat(-1));
}

TEST_CASE("char_poly of the cat map is x^2 - 3x + 1") {
  QMatrix a = from_rows({{2, 1}, {1, 1}});
  auto c = a.char_poly();
  REQUIRE(c.size() == 3);
  CHECK(c[2] == BigRat(1));
  CHECK(c[1] == BigRat(-3));
  CHECK(c[0] == BigRat(1));
}

TEST_CASE("char_poly matches direct expansion on a rational 3x3") {
  QMatrix a(3, 3);
  a(0, 0) = BigRat(1, 2);
  a(0, 2) = BigRat(3);
  a(1, 1) = BigRat(-2);
  a(2, 0) = BigRat(1, 3);
  a(2, 2) = BigRat(5);
  // charpoly = (x+2) * ((x - 1/2)(x - 5) - 1) expanded exactly.
  auto c = a.char_poly();
  CHECK(c[3] == BigRat(1));
  CHECK(c[2] == BigRat(-7, 2));   // -(trace)
  CHECK(c[1] == BigRat(-19, 2));  // sum of principal 2x2 minors
  CHECK(c[0] == BigRat(3));  // (-1)^n det
  CHECK(a.det() == BigRat(-3));
}

TEST_CASE("kernel and solve") {
  QMatrix a = from_rows({{1, 2, 3}, {2, 4, 6}});
  auto ker = a.kernel();
  CHECK(ker.size() == 2);
  for (const auto& v : ker) CHECK(is_zero(a * v));
  CHECK(a.rank() == 1);

  QVec b{BigRat(6), BigRat(12)};
  auto x = solve_linear(a, b);
  REQUIRE(x.has_value());
  CHECK(a * *x == b);

  QVec bad{BigRat(6), BigRat(11)};
  CHECK_FALSE(solve_linear(a, bad).has_value());
}

TEST_CASE("saturate_lattice produces primitive saturated bases") {
  // span{(1,1),(1,-1)} over Q is all of Q^2; its saturation is Z^2 even
  // though the input rows only span an index-2 sublattice.
  std::vector<QVec> rows = {{BigRat(1), BigRat(1)}, {BigRat(1), BigRat(-1)}};
  ZMatrix sat = saturate_lattice(rows, 2);
  REQUIRE(sat.size() == 2);
  QMatrix m(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = BigRat(sat[i][j]);
  BigRat d = m.det();
  CHECK((d == 1 || d == -1));

  // Rational scaling: span{(1/2, 1/3)} saturates to the primitive (3,2).
  std::vector<QVec> frac = {{BigRat(1, 2), BigRat(1, 3)}};
  ZMatrix sat2 = saturate_lattice(frac, 2);
  REQUIRE(sat2.size() == 1);
  CHECK(big_gcd(sat2[0][0], sat2[0][1]) == 1);
  CHECK(sat2[0][0] * 2 == sat2[0][1] * 3);
}

TEST_CASE("complete_to_unimodular extends saturated rows") {
  ZMatrix basis = {{BigInt(2), BigInt(1)}};
  ZMatrix w = complete_to_unimodular(basis, 2);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == basis[0]);
  QMatrix m(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = BigRat(w[i][j]);
  BigRat d = m.det();
  CHECK((d == 1 || d == -1));

  // Non-primitive rows cannot be completed.
  ZMatrix bad = {{BigInt(2), BigInt(0)}};
  CHECK_THROWS_AS(complete_to_unimodular(bad, 2), domain_error);
}
