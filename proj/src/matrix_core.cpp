#include "rigidity/matrix_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rigidity {

namespace {

// Polynomials over Q, ascending coefficients. Used to split the exact
// characteristic polynomial into square-free factors before any floating
// point enters: repeated roots are exactly recovered with their
// multiplicities and the remaining simple roots are well conditioned.
using QPoly = std::vector<BigRat>;

int pdeg(const QPoly& p) {
  for (int i = int(p.size()) - 1; i >= 0; --i)
    if (p[i] != 0) return i;
  return -1;
}

QPoly ptrim(QPoly p) {
  p.resize(size_t(std::max(pdeg(p), 0)) + 1);
  return p;
}

QPoly pmonic(QPoly p) {
  int d = pdeg(p);
  if (d < 0) return p;
  BigRat lead = p[d];
  for (auto& c : p) c /= lead;
  return ptrim(p);
}

QPoly pderive(const QPoly& p) {
  if (p.size() <= 1) return {BigRat(0)};
  QPoly out(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i] * BigRat(int(i));
  return ptrim(out);
}

// p = q*d + r with deg r < deg d; returns {q, r}.
std::pair<QPoly, QPoly> pdivmod(QPoly p, const QPoly& d) {
  int dd = pdeg(d);
  QPoly q(std::max(pdeg(p) - dd + 1, 1), BigRat(0));
  while (pdeg(p) >= dd && pdeg(p) >= 0) {
    int shift = pdeg(p) - dd;
    BigRat f = p[pdeg(p)] / d[dd];
    q[shift] += f;
    for (int i = 0; i <= dd; ++i) p[size_t(i + shift)] -= f * d[size_t(i)];
    p = ptrim(p);
    if (pdeg(p) < 0) break;
  }
  return {ptrim(q), ptrim(p)};
}

QPoly pgcd(QPoly a, QPoly b) {
  a = pmonic(a);
  b = pmonic(b);
  while (pdeg(b) >= 0 && !(pdeg(b) == 0 && b[0] == 0)) {
    auto [q, r] = pdivmod(a, b);
    a = b;
    b = pmonic(r);
    if (pdeg(b) < 0 || (pdeg(b) == 0 && b[0] == 0)) break;
    if (pdeg(b) == 0) return {BigRat(1)};
  }
  return pmonic(a);
}

// Yun's square-free decomposition: returns (factor, multiplicity) pairs.
std::vector<std::pair<QPoly, int>> squarefree(const QPoly& f) {
  std::vector<std::pair<QPoly, int>> out;
  QPoly fp = pderive(f);
  QPoly g = pgcd(f, fp);
  if (pdeg(g) <= 0) {
    out.emplace_back(pmonic(f), 1);
    return out;
  }
  QPoly c = pdivmod(f, g).first;
  QPoly d = ptrim(QPoly());
  {
    QPoly t = pdivmod(fp, g).first;
    QPoly cp = pderive(c);
    d.assign(std::max(t.size(), cp.size()), BigRat(0));
    for (size_t i = 0; i < t.size(); ++i) d[i] += t[i];
    for (size_t i = 0; i < cp.size(); ++i) d[i] -= cp[i];
    d = ptrim(d);
  }
  for (int i = 1; pdeg(c) > 0; ++i) {
    QPoly a = pgcd(c, d);
    if (pdeg(a) > 0) out.emplace_back(a, i);
    c = pdivmod(c, a).first;
    QPoly t = pdivmod(d, a).first;
    QPoly cp = pderive(c);
    d.assign(std::max(t.size(), cp.size()), BigRat(0));
    for (size_t k = 0; k < t.size(); ++k) d[k] += t[k];
    for (size_t k = 0; k < cp.size(); ++k) d[k] -= cp[k];
    d = ptrim(d);
  }
  return out;
}

std::complex<double> phorner(const std::vector<double>& c, std::complex<double> x) {
  std::complex<double> v = 0.0;
  for (int i = int(c.size()) - 1; i >= 0; --i) v = v * x + c[size_t(i)];
  return v;
}

// Roots of a square-free rational polynomial: companion eigenvalues polished
// by Newton on the exact coefficients.
std::vector<std::complex<double>> squarefree_roots(const QPoly& q) {
  int n = pdeg(q);
  std::vector<std::complex<double>> roots;
  if (n <= 0) return roots;
  std::vector<double> cd(q.size());
  for (size_t i = 0; i < q.size(); ++i) cd[i] = to_double(q[i]);
  std::vector<double> cdp(cd.size() - 1);
  for (size_t i = 1; i < cd.size(); ++i) cdp[i - 1] = cd[i] * double(i);

  if (n == 1) {
    roots.emplace_back(-cd[0] / cd[1], 0.0);
    return roots;
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -cd[size_t(i)] / cd[size_t(n)];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (int i = 0; i < n; ++i) {
    std::complex<double> r = es.eigenvalues()[i];
    for (int it = 0; it < 60; ++it) {
      std::complex<double> num = phorner(cd, r);
      std::complex<double> den = phorner(cdp, r);
      if (std::abs(den) == 0.0) break;
      std::complex<double> step = num / den;
      r -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(r))) break;
    }
    if (std::abs(r.imag()) <= 1e-12 * (1.0 + std::abs(r.real()))) r = {r.real(), 0.0};
    roots.push_back(r);
  }
  return roots;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const QMatrix& m) {
  const int n = m.rows();
  if (n == 0) return {};
  QPoly p = m.char_poly();
  std::vector<std::complex<double>> out;
  for (const auto& [factor, mult] : squarefree(p)) {
    auto roots = squarefree_roots(factor);
    for (const auto& r : roots)
      for (int k = 0; k < mult; ++k) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

std::vector<std::complex<double>> eigenvalues(const IntMatrix& m) {
  return eigenvalues(m.to_q());
}

HyperbolicityReport is_hyperbolic(const IntMatrix& m, double tol) {
  if (m.d <= 0 || m.entries.size() != size_t(m.d) * m.d)
    fail(errc::non_square, "matrix must be square and nonempty");
  if (!(tol > 0.0 && tol < 0.5)) fail(errc::tolerance_out_of_range, "tol must lie in (0, 0.5)");
  HyperbolicityReport rep;
  auto eig = eigenvalues(m);
  rep.moduli.reserve(eig.size());
  for (const auto& z : eig) rep.moduli.push_back(std::abs(z));
  std::sort(rep.moduli.rbegin(), rep.moduli.rend());
  rep.hyperbolic = true;
  for (double mod : rep.moduli)
    if (std::abs(mod - 1.0) <= tol) rep.hyperbolic = false;
  return rep;
}

namespace {

// Deterministic low-discrepancy frame used to seed subspace iteration.
Eigen::MatrixXd seed_frame(int d, int k, unsigned salt) {
  Eigen::MatrixXd v(d, k);
  unsigned long long s = 0x9e3779b97f4a7c15ull + salt;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < d; ++i) {
      s ^= s << 13;
      s ^= s >> 7;
      s ^= s << 17;
      v(i, j) = double(s % 2048) / 1024.0 - 1.0;
    }
  return Eigen::HouseholderQR<Eigen::MatrixXd>(v).householderQ() *
         Eigen::MatrixXd::Identity(d, k);
}

// Dominant invariant subspace of T of dimension k by orthogonal iteration.
// Relies on the modulus gap across the unit circle for convergence.
Eigen::MatrixXd dominant_subspace(const Eigen::MatrixXd& T, int k) {
  const int d = int(T.rows());
  if (k == 0) return Eigen::MatrixXd(d, 0);
  if (k == d) return Eigen::MatrixXd::Identity(d, d);
  double scale = T.norm();
  for (unsigned attempt = 0; attempt < 4; ++attempt) {
    Eigen::MatrixXd v = seed_frame(d, k, attempt);
    for (int iter = 0; iter < 5000; ++iter) {
      Eigen::MatrixXd w = T * v;
      v = Eigen::HouseholderQR<Eigen::MatrixXd>(w).householderQ() *
          Eigen::MatrixXd::Identity(d, k);
      if (iter % 4 == 3) {
        Eigen::MatrixXd tv = T * v;
        double res = (tv - v * (v.transpose() * tv)).norm();
        if (res <= 1e-14 * scale * std::max(1.0, tv.norm() / scale)) return v;
      }
    }
    Eigen::MatrixXd tv = T * v;
    if ((tv - v * (v.transpose() * tv)).norm() <= 1e-11 * std::max(scale, tv.norm())) return v;
  }
  fail(errc::not_hyperbolic, "invariant subspace iteration did not converge");
}

}  // namespace

HyperbolicSplitting hyperbolic_splitting(const IntMatrix& m, double tol) {
  HyperbolicityReport rep = is_hyperbolic(m, tol);
  if (!rep.hyperbolic) fail(errc::not_hyperbolic, "matrix has an eigenvalue on the unit circle");

  HyperbolicSplitting s;
  s.d = m.d;
  s.tol = tol;
  int du = 0;
  double ls = 0.0, lu = std::numeric_limits<double>::infinity();
  for (double mod : rep.moduli) {
    if (mod > 1.0) {
      ++du;
      lu = std::min(lu, mod);
    } else {
      ls = std::max(ls, mod);
    }
  }
  s.lambda_s = ls;
  s.lambda_u = lu;

  Eigen::MatrixXd A = m.to_eigen();
  QMatrix qinv = m.to_q().inverse();
  Eigen::MatrixXd Ainv(m.d, m.d);
  {
    auto flat = qinv.to_double();
    for (int i = 0; i < m.d; ++i)
      for (int j = 0; j < m.d; ++j) Ainv(i, j) = flat[size_t(i) * m.d + j];
  }

  s.e_unstable = dominant_subspace(A, du);
  s.e_stable = dominant_subspace(Ainv, m.d - du);

  // Oblique coordinates from the combined frame.
  Eigen::MatrixXd B(m.d, m.d);
  B << s.e_stable, s.e_unstable;
  Eigen::MatrixXd Binv = B.inverse();
  s.Ls = Binv.topRows(s.dim_s());
  s.Lu = Binv.bottomRows(s.dim_u());
  s.Bs = s.Ls * A * s.e_stable;
  s.Bu = s.Lu * A * s.e_unstable;
  s.proj_s = s.e_stable * s.Ls;
  s.proj_u = s.e_unstable * s.Lu;
  return s;
}

AdaptedNorm adapted_norm(const IntMatrix& m, const HyperbolicSplitting& split, double margin) {
  if (m.d != split.d) fail(errc::dimension_mismatch, "splitting does not match the matrix");
  if (!(margin >= 0.0 && margin < 1.0)) fail(errc::margin_too_large, "margin must lie in [0,1)");
  double base = std::max(split.lambda_s,
                         std::isinf(split.lambda_u) ? 0.0 : 1.0 / split.lambda_u);
  double lambda = base * (1.0 + margin);
  if (lambda >= 1.0) fail(errc::margin_too_large, "rate*(1+margin) >= 1");

  auto build = [lambda](const Eigen::MatrixXd& T, int* power) -> Eigen::MatrixXd {
    const int k = int(T.rows());
    if (k == 0) {
      *power = 0;
      return Eigen::MatrixXd(0, 0);
    }
    // Smallest m with |T^m| <= lambda^m, then G = sum lambda^{-2j} (T^j)' T^j.
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(k, k);
    double bound = 1.0;
    int mm = -1;
    for (int j = 1; j <= 256; ++j) {
      p = T * p;
      bound *= lambda;
      double nrm = p.jacobiSvd().singularValues()(0);
      if (nrm <= bound * (1.0 + 1e-12)) {
        mm = j;
        break;
      }
    }
    if (mm < 0)
      fail(errc::margin_too_large,
           "no adapted-norm certificate at this margin; increase margin");
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(k, k);
    double w = 1.0;
    for (int j = 0; j < mm; ++j) {
      g += w * q.transpose() * q;
      q = T * q;
      w /= lambda * lambda;
    }
    *power = mm;
    return g;
  };

  AdaptedNorm norm;
  norm.lambda = lambda;
  Eigen::MatrixXd Gs = build(split.Bs, &norm.power_s);
  Eigen::MatrixXd Gu = split.dim_u() ? build(split.Bu.inverse(), &norm.power_u)
                                     : Eigen::MatrixXd(0, 0);
  auto chol = [](const Eigen::MatrixXd& g) -> Eigen::MatrixXd {
    if (g.rows() == 0) return g;
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    return Eigen::MatrixXd(llt.matrixU());
  };
  norm.Rs = chol(Gs);
  norm.Ru = chol(Gu);
  norm.gram = Eigen::MatrixXd::Zero(split.d, split.d);
  if (split.dim_s()) norm.gram += split.Ls.transpose() * Gs * split.Ls;
  if (split.dim_u()) norm.gram += split.Lu.transpose() * Gu * split.Lu;
  return norm;
}

RegularityProfile regularity_profile(const IntMatrix& m, double tol) {
  if (m.d <= 0 || m.entries.size() != size_t(m.d) * m.d)
    fail(errc::non_square, "matrix must be square and nonempty");
  if (m.det() != 1) fail(errc::not_unimodular, "regularity profile requires det = 1");
  RegularityProfile prof;
  prof.n = m.d;
  prof.ambient_minimum = m.d - 1;
  auto eig = eigenvalues(m);
  // Ad-eigenvalues of g in SL(n): ratios lambda_i/lambda_j (i != j) plus 1 with
  // multiplicity n-1 from the Cartan directions.
  int unit = m.d - 1;
  int circle = m.d - 1;
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j) {
      if (i == j) continue;
      std::complex<double> ratio = eig[i] / eig[j];
      if (std::abs(ratio - std::complex<double>(1.0, 0.0)) <= tol) ++unit;
      if (std::abs(std::abs(ratio) - 1.0) <= tol) ++circle;
    }
  prof.ad_unit_eigen_count = unit;
  prof.ad_circle_eigen_count = circle;
  prof.regular = (unit == prof.ambient_minimum);
  prof.r_regular = (circle == prof.ambient_minimum);
  return prof;
}

RankOneReport rank_one_factor_test(const std::vector<std::vector<double>>& log_vectors) {
  if (log_vectors.empty()) fail(errc::dimension_mismatch, "empty input");
  const size_t dim = log_vectors.front().size();
  for (const auto& v : log_vectors)
    if (v.size() != dim) fail(errc::dimension_mismatch, "inconsistent vector dimensions");
  Eigen::MatrixXd m(log_vectors.size(), dim);
  for (size_t i = 0; i < log_vectors.size(); ++i)
    for (size_t j = 0; j < dim; ++j) m(int(i), int(j)) = log_vectors[i][j];
  RankOneReport rep;
  if (dim == 0) {
    rep.rank = 0;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    double thresh = std::max(top * 1e-10, 1e-12);
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > thresh) ++r;
    rep.rank = r;
  }
  rep.is_rank_one = rep.rank <= 1;
  return rep;
}

}  // namespace rigidity
