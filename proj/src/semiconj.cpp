#include "rigidity/semiconj.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <mutex>

#include "rigidity/rng.hpp"

namespace rigidity {

namespace {

inline double wrap01(double x) {
  double w = x - std::floor(x);
  return w < 1.0 ? w : 0.0;
}

inline void matvec(const double* m, const double* v, double* out, int rows, int cols) {
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    const double* row = m + size_t(i) * cols;
    for (int j = 0; j < cols; ++j) s += row[j] * v[j];
    out[i] = s;
  }
}

// Solve the small dense system M x = b in place (partial pivoting), d <= 4.
bool solve_small(double* m, double* b, int d) {
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r)
      if (std::abs(m[r * d + c]) > std::abs(m[piv * d + c])) piv = r;
    if (std::abs(m[piv * d + c]) < 1e-300) return false;
    if (piv != c) {
      for (int j = 0; j < d; ++j) std::swap(m[c * d + j], m[piv * d + j]);
      std::swap(b[c], b[piv]);
    }
    for (int r = c + 1; r < d; ++r) {
      double f = m[r * d + c] / m[c * d + c];
      if (f == 0.0) continue;
      for (int j = c; j < d; ++j) m[r * d + j] -= f * m[c * d + j];
      b[r] -= f * b[c];
    }
  }
  for (int r = d - 1; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < d; ++j) s -= m[r * d + j] * b[j];
    b[r] = s / m[r * d + r];
  }
  return true;
}

std::vector<double> eigen_to_flat(const Eigen::MatrixXd& m) {
  std::vector<double> out(size_t(m.rows()) * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out[size_t(i) * m.cols() + j] = m(i, j);
  return out;
}

double op_norm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return m.jacobiSvd().singularValues()(0);
}

}  // namespace

double torus_distance(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    double d = std::abs(a[i] - b[i]);
    d -= std::floor(d);
    d = std::min(d, 1.0 - d);
    s += d * d;
  }
  return std::sqrt(s);
}

size_t PeriodicDisplacement::node_count() const {
  size_t n = 1;
  for (int s : shape) n *= size_t(s);
  return n;
}

size_t PeriodicDisplacement::node_index(const std::vector<int>& idx) const {
  size_t flat = 0;
  for (int a = 0; a < dim; ++a) flat = flat * shape[a] + idx[a];
  return flat;
}

void PeriodicDisplacement::node_coords(size_t flat, double* x) const {
  for (int a = dim - 1; a >= 0; --a) {
    x[a] = double(flat % shape[a]) / shape[a];
    flat /= shape[a];
  }
}

void PeriodicDisplacement::eval(const double* x, double* out) const {
  if (dim == 2) {
    // Bilinear fast path for the dominant 2-torus case.
    const int n0 = shape[0], n1 = shape[1];
    double t0 = wrap01(x[0]) * n0, t1 = wrap01(x[1]) * n1;
    int a0 = int(t0), b0 = int(t1);
    if (a0 >= n0) a0 = n0 - 1;
    if (b0 >= n1) b0 = n1 - 1;
    double f0 = t0 - a0, f1 = t1 - b0;
    int a1 = a0 + 1 == n0 ? 0 : a0 + 1;
    int b1 = b0 + 1 == n1 ? 0 : b0 + 1;
    const double* p00 = values.data() + (size_t(a0) * n1 + b0) * 2;
    const double* p01 = values.data() + (size_t(a0) * n1 + b1) * 2;
    const double* p10 = values.data() + (size_t(a1) * n1 + b0) * 2;
    const double* p11 = values.data() + (size_t(a1) * n1 + b1) * 2;
    double w00 = (1 - f0) * (1 - f1), w01 = (1 - f0) * f1;
    double w10 = f0 * (1 - f1), w11 = f0 * f1;
    out[0] = w00 * p00[0] + w01 * p01[0] + w10 * p10[0] + w11 * p11[0];
    out[1] = w00 * p00[1] + w01 * p01[1] + w10 * p10[1] + w11 * p11[1];
    return;
  }
  int i0[kMaxTorusDim], i1[kMaxTorusDim];
  double w1[kMaxTorusDim];
  for (int a = 0; a < dim; ++a) {
    double t = wrap01(x[a]) * shape[a];
    int base = int(t);
    if (base >= shape[a]) base = shape[a] - 1;  // guards t == shape from rounding
    w1[a] = t - base;
    i0[a] = base;
    i1[a] = base + 1 == shape[a] ? 0 : base + 1;
  }
  for (int c = 0; c < dim; ++c) out[c] = 0.0;
  const int corners = 1 << dim;
  for (int mask = 0; mask < corners; ++mask) {
    double weight = 1.0;
    size_t flat = 0;
    for (int a = 0; a < dim; ++a) {
      bool hi = (mask >> a) & 1;
      weight *= hi ? w1[a] : 1.0 - w1[a];
      flat = flat * shape[a] + (hi ? i1[a] : i0[a]);
    }
    if (weight == 0.0) continue;
    const double* v = values.data() + flat * dim;
    for (int c = 0; c < dim; ++c) out[c] += weight * v[c];
  }
}

void PeriodicDisplacement::eval_jacobian(const double* x, double* jac) const {
  if (dim == 2) {
    const int n0 = shape[0], n1 = shape[1];
    double t0 = wrap01(x[0]) * n0, t1 = wrap01(x[1]) * n1;
    int a0 = int(t0), b0 = int(t1);
    if (a0 >= n0) a0 = n0 - 1;
    if (b0 >= n1) b0 = n1 - 1;
    double f0 = t0 - a0, f1 = t1 - b0;
    int a1 = a0 + 1 == n0 ? 0 : a0 + 1;
    int b1 = b0 + 1 == n1 ? 0 : b0 + 1;
    const double* p00 = values.data() + (size_t(a0) * n1 + b0) * 2;
    const double* p01 = values.data() + (size_t(a0) * n1 + b1) * 2;
    const double* p10 = values.data() + (size_t(a1) * n1 + b0) * 2;
    const double* p11 = values.data() + (size_t(a1) * n1 + b1) * 2;
    for (int c = 0; c < 2; ++c) {
      jac[c * 2 + 0] =
          n0 * ((1 - f1) * (p10[c] - p00[c]) + f1 * (p11[c] - p01[c]));
      jac[c * 2 + 1] =
          n1 * ((1 - f0) * (p01[c] - p00[c]) + f0 * (p11[c] - p10[c]));
    }
    return;
  }
  int i0[kMaxTorusDim], i1[kMaxTorusDim];
  double w1[kMaxTorusDim];
  for (int a = 0; a < dim; ++a) {
    double t = wrap01(x[a]) * shape[a];
    int base = int(t);
    if (base >= shape[a]) base = shape[a] - 1;
    w1[a] = t - base;
    i0[a] = base;
    i1[a] = base + 1 == shape[a] ? 0 : base + 1;
  }
  for (int i = 0; i < dim * dim; ++i) jac[i] = 0.0;
  const int corners = 1 << dim;
  for (int mask = 0; mask < corners; ++mask) {
    size_t flat = 0;
    for (int a = 0; a < dim; ++a) {
      bool hi = (mask >> a) & 1;
      flat = flat * shape[a] + (hi ? i1[a] : i0[a]);
    }
    const double* v = values.data() + flat * dim;
    for (int axis = 0; axis < dim; ++axis) {
      double weight = double(shape[axis]);  // d/dx of the axis hat function
      if (!((mask >> axis) & 1)) weight = -weight;
      for (int a = 0; a < dim; ++a) {
        if (a == axis) continue;
        bool hi = (mask >> a) & 1;
        weight *= hi ? w1[a] : 1.0 - w1[a];
      }
      for (int c = 0; c < dim; ++c) jac[c * dim + axis] += weight * v[c];
    }
  }
}

double PeriodicDisplacement::sup_norm() const {
  double best = 0.0;
  const size_t n = node_count();
  for (size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int c = 0; c < dim; ++c) s += values[i * dim + c] * values[i * dim + c];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

double PeriodicDisplacement::lipschitz_bound() const {
  // Max over cells of the interpolant gradient norm, bounded by finite
  // differences of adjacent nodes.
  double best = 0.0;
  const size_t n = node_count();
  std::vector<int> idx(dim, 0);
  for (size_t flat = 0; flat < n; ++flat) {
    size_t rem = flat;
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = int(rem % shape[a]);
      rem /= shape[a];
    }
    for (int a = 0; a < dim; ++a) {
      std::vector<int> nb = idx;
      nb[a] = (idx[a] + 1) % shape[a];
      size_t other = node_index(nb);
      double s = 0.0;
      for (int c = 0; c < dim; ++c) {
        double diff = (values[other * dim + c] - values[flat * dim + c]) * shape[a];
        s += diff * diff;
      }
      best = std::max(best, s);
    }
  }
  return std::sqrt(best) * std::sqrt(double(dim));
}

PeriodicDisplacement expand_modes(int dim, const std::vector<int>& shape,
                                  const std::vector<TrigMode>& modes) {
  PeriodicDisplacement u;
  u.dim = dim;
  u.shape = shape;
  u.values.assign(u.node_count() * dim, 0.0);
  const size_t n = u.node_count();
  std::vector<double> x(dim);
  for (size_t flat = 0; flat < n; ++flat) {
    u.node_coords(flat, x.data());
    for (const auto& mode : modes) {
      double phase = mode.phase;
      for (int a = 0; a < dim; ++a) phase += 2.0 * M_PI * mode.k[a] * x[a];
      double s = std::sin(phase);
      for (int c = 0; c < dim; ++c) u.values[flat * dim + c] += mode.amp[c] * s;
    }
  }
  return u;
}

TorusMap::TorusMap(const IntMatrix& A, const PeriodicDisplacement& u) : d_(A.d), u_(&u) {
  if (A.d != u.dim) fail(errc::dimension_mismatch, "matrix and field dimensions differ");
  if (A.d < 1 || A.d > kMaxTorusDim)
    fail(errc::bad_input, "torus dimension must lie in 1..4");
  for (int s : u.shape)
    if (s < 2 || s > kMaxGridPerAxis) fail(errc::bad_input, "grid size must lie in 2..1024");
  Eigen::MatrixXd ad = A.to_eigen();
  QMatrix qinv = A.to_q().inverse();
  auto flat = qinv.to_double();
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) {
      a_[i * d_ + j] = ad(i, j);
      ainv_[i * d_ + j] = flat[size_t(i) * d_ + j];
    }
}

void TorusMap::apply(const double* x, double* y) const {
  double ux[kMaxTorusDim];
  u_->eval(x, ux);
  double ax[kMaxTorusDim];
  matvec(a_.data(), x, ax, d_, d_);
  for (int i = 0; i < d_; ++i) y[i] = wrap01(ax[i] + ux[i]);
}

void TorusMap::apply_inverse(const double* y, double* x) const {
  // Contraction x <- A^{-1}(y - u(x)) seeded at A^{-1}y; a chord-Newton
  // finish (Jacobian refreshed sparingly) reaches the 1e-12 displacement
  // criterion when the plain iteration contracts slowly.
  double cur[kMaxTorusDim], nxt[kMaxTorusDim], ux[kMaxTorusDim], rhs[kMaxTorusDim];
  matvec(ainv_.data(), y, cur, d_, d_);
  double prev_disp = 1e300;
  for (int it = 0; it < 3; ++it) {
    u_->eval(cur, ux);
    for (int i = 0; i < d_; ++i) rhs[i] = y[i] - ux[i];
    matvec(ainv_.data(), rhs, nxt, d_, d_);
    double disp = 0.0;
    for (int i = 0; i < d_; ++i) {
      disp = std::max(disp, std::abs(nxt[i] - cur[i]));
      cur[i] = nxt[i];
    }
    if (disp <= 1e-12) {
      for (int i = 0; i < d_; ++i) x[i] = wrap01(cur[i]);
      return;
    }
    if (it > 2 && disp > 2.0 * prev_disp && disp > 0.25)
      fail(errc::not_invertible, "preimage contraction diverges");
    prev_disp = disp;
  }
  // Chord Newton on F(x) = Ax + u(x) - y with the interpolant's exact cell
  // Jacobian, refactored only when progress stalls.
  double J[kMaxTorusDim * kMaxTorusDim];
  bool have_jac = false;
  prev_disp = 1e300;
  for (int it = 0; it < 40; ++it) {
    u_->eval(cur, ux);
    double F[kMaxTorusDim];
    matvec(a_.data(), cur, F, d_, d_);
    for (int i = 0; i < d_; ++i) F[i] += ux[i] - y[i];
    if (!have_jac || (it % 6 == 5)) {
      double Ju[kMaxTorusDim * kMaxTorusDim];
      u_->eval_jacobian(cur, Ju);
      for (int i = 0; i < d_ * d_; ++i) J[i] = a_[i] + Ju[i];
      have_jac = true;
    }
    if (d_ == 2) {
      double det = J[0] * J[3] - J[1] * J[2];
      if (std::abs(det) < 1e-300)
        fail(errc::not_invertible, "singular Jacobian in preimage solve");
      double s0 = (J[3] * F[0] - J[1] * F[1]) / det;
      double s1 = (J[0] * F[1] - J[2] * F[0]) / det;
      F[0] = s0;
      F[1] = s1;
    } else {
      double Jc[kMaxTorusDim * kMaxTorusDim];
      std::memcpy(Jc, J, sizeof(double) * size_t(d_) * d_);
      if (!solve_small(Jc, F, d_))
        fail(errc::not_invertible, "singular Jacobian in preimage solve");
    }
    double disp = 0.0;
    for (int i = 0; i < d_; ++i) {
      cur[i] -= F[i];
      disp = std::max(disp, std::abs(F[i]));
    }
    if (disp <= 1e-12) {
      for (int i = 0; i < d_; ++i) x[i] = wrap01(cur[i]);
      return;
    }
    if (disp > prev_disp * 4.0 && disp > 0.5)
      fail(errc::not_invertible, "preimage Newton diverges");
    prev_disp = disp;
  }
  fail(errc::not_invertible, "preimage iteration did not reach 1e-12 displacement");
}

void TorusMap::check_invertible_on_grid(int max_nodes_per_axis) const {
  std::vector<int> shape;
  for (int s : u_->shape) shape.push_back(std::min(s, max_nodes_per_axis));
  size_t n = 1;
  for (int s : shape) n *= size_t(s);
  std::atomic<bool> failed{false};
  parallel_for(n, [&](size_t lo, size_t hi) {
    double y[kMaxTorusDim], cur[kMaxTorusDim], nxt[kMaxTorusDim];
    double ux[kMaxTorusDim], rhs[kMaxTorusDim];
    for (size_t flat = lo; flat < hi && !failed.load(std::memory_order_relaxed); ++flat) {
      size_t rem = flat;
      for (int a = d_ - 1; a >= 0; --a) {
        y[a] = double(rem % shape[a]) / shape[a];
        rem /= shape[a];
      }
      matvec(ainv_.data(), y, cur, d_, d_);
      bool ok = false;
      for (int it = 0; it < 256; ++it) {
        u_->eval(cur, ux);
        for (int i = 0; i < d_; ++i) rhs[i] = y[i] - ux[i];
        matvec(ainv_.data(), rhs, nxt, d_, d_);
        double disp = 0.0;
        for (int i = 0; i < d_; ++i) {
          disp = std::max(disp, std::abs(nxt[i] - cur[i]));
          cur[i] = nxt[i];
        }
        if (disp <= 1e-12) {
          ok = true;
          break;
        }
        if (disp > 1e3) break;
      }
      if (!ok) failed.store(true, std::memory_order_relaxed);
    }
  });
  if (failed.load())
    fail(errc::not_invertible, "preimage contraction fails on the check lattice");
}

SeriesEvaluator::SeriesEvaluator(const IntMatrix& A, const PeriodicDisplacement& u, double tol,
                                 int max_terms, double margin)
    : d_(A.d), map_(A, u) {
  split_ = hyperbolic_splitting(A);  // throws NotHyperbolic
  ds_ = split_.dim_s();
  du_ = split_.dim_u();
  Vs_ = eigen_to_flat(split_.e_stable);
  Vu_ = eigen_to_flat(split_.e_unstable);
  Ls_ = eigen_to_flat(split_.Ls);
  Lu_ = eigen_to_flat(split_.Lu);
  Eigen::MatrixXd bu_inv = du_ ? Eigen::MatrixXd(split_.Bu.inverse()) : Eigen::MatrixXd(0, 0);
  bs_ = eigen_to_flat(split_.Bs);
  bu_inv_ = eigen_to_flat(bu_inv);

  const double sup_u = u.sup_norm();
  if (sup_u == 0.0) {
    K_ = 0;
    return;
  }

  // Tail bound: exact sums of restricted power norms, sharpened by the
  // adapted-rate geometric bound.
  const int probe = max_terms + 64;
  std::vector<double> au(probe + 2, 0.0), bs(probe + 2, 0.0);
  {
    Eigen::MatrixXd pu = Eigen::MatrixXd::Identity(du_, du_);
    for (int k = 0; k <= probe; ++k) {
      if (du_) {
        pu = bu_inv * pu;
        au[k] = op_norm(pu);  // |Bu^{-(k+1)}|
      }
    }
    Eigen::MatrixXd ps = Eigen::MatrixXd::Identity(ds_, ds_);
    for (int k = 1; k <= probe; ++k) {
      if (ds_) bs[k] = op_norm(ps);  // |Bs^{k-1}|
      if (ds_) ps = split_.Bs * ps;
    }
  }
  double cu = op_norm(split_.e_unstable) * op_norm(split_.Lu);
  double cs = op_norm(split_.e_stable) * op_norm(split_.Ls);

  AdaptedNorm an = adapted_norm(A, split_, margin);
  double lambda = an.lambda;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ges(an.gram);
  double equiv = std::sqrt(ges.eigenvalues().maxCoeff() /
                           std::max(ges.eigenvalues().minCoeff(), 1e-300));

  auto tail = [&](int K) {
    double su = 0.0, ss = 0.0;
    for (int k = K; k <= probe; ++k) su += au[k];
    for (int k = K + 1; k <= probe; ++k) ss += bs[k];
    double exact = sup_u * (cu * su + cs * ss);
    double geo = sup_u * equiv *
                 (std::pow(lambda, K + 1) + std::pow(lambda, K)) / (1.0 - lambda);
    return std::min(exact, geo);
  };

  int K = 0;
  while (K <= max_terms && tail(K) > tol / 4.0) ++K;
  if (K > max_terms)
    fail(errc::budget, "max_terms reached before the truncation bound met tol/4");
  K_ = K;

  Eigen::MatrixXd pu = Eigen::MatrixXd::Identity(du_, du_);
  for (int k = 0; k < K_; ++k) {
    if (du_) pu = bu_inv * pu;
    bu_inv_pow_.push_back(eigen_to_flat(pu));  // Bu^{-(k+1)}
  }
  Eigen::MatrixXd ps = Eigen::MatrixXd::Identity(ds_, ds_);
  for (int k = 0; k < K_; ++k) {
    bs_pow_.push_back(eigen_to_flat(ps));  // Bs^k
    if (ds_) ps = split_.Bs * ps;
  }
}

void SeriesEvaluator::build_orbit(const double* x, int fwd_extra, OrbitCache& cache) const {
  const int nf = K_ + fwd_extra;
  cache.fwd.resize(size_t(nf) + 1);
  cache.ufwd.resize(size_t(nf) + 1);
  cache.bwd.resize(size_t(K_) + 1);
  cache.ubwd.resize(size_t(K_) + 1);
  for (int i = 0; i < d_; ++i) cache.fwd[0][i] = wrap01(x[i]);
  const double* A = map_.a();
  for (int k = 0; k <= nf; ++k) {
    map_.field().eval(cache.fwd[size_t(k)].data(), cache.ufwd[size_t(k)].data());
    if (k == nf) break;
    double ax[kMaxTorusDim];
    matvec(A, cache.fwd[size_t(k)].data(), ax, d_, d_);
    for (int i = 0; i < d_; ++i)
      cache.fwd[size_t(k) + 1][i] = wrap01(ax[i] + cache.ufwd[size_t(k)][i]);
  }
  cache.bwd[0] = cache.fwd[0];
  cache.ubwd[0] = cache.ufwd[0];
  for (int k = 1; k <= K_; ++k) {
    map_.apply_inverse(cache.bwd[size_t(k) - 1].data(), cache.bwd[size_t(k)].data());
    map_.field().eval(cache.bwd[size_t(k)].data(), cache.ubwd[size_t(k)].data());
  }
}

void SeriesEvaluator::series_from_cache(const OrbitCache& cache, int fwd_offset,
                                        int bwd_offset, double* w_out) const {
  double cu[kMaxTorusDim] = {0, 0, 0, 0};
  double cs[kMaxTorusDim] = {0, 0, 0, 0};
  double p[kMaxTorusDim], t[kMaxTorusDim];
  for (int k = 0; k < K_; ++k) {
    if (du_) {
      matvec(Lu_.data(), cache.ufwd[size_t(k + fwd_offset)].data(), p, du_, d_);
      matvec(bu_inv_pow_[k].data(), p, t, du_, du_);
      for (int i = 0; i < du_; ++i) cu[i] += t[i];
    }
  }
  for (int k = 1; k <= K_; ++k) {
    if (ds_) {
      matvec(Ls_.data(), cache.ubwd[size_t(k + bwd_offset)].data(), p, ds_, d_);
      matvec(bs_pow_[k - 1].data(), p, t, ds_, ds_);
      for (int i = 0; i < ds_; ++i) cs[i] += t[i];
    }
  }
  double wu[kMaxTorusDim], ws[kMaxTorusDim];
  matvec(Vu_.data(), cu, wu, d_, du_ ? du_ : 0);
  matvec(Vs_.data(), cs, ws, d_, ds_ ? ds_ : 0);
  for (int i = 0; i < d_; ++i) w_out[i] = (du_ ? wu[i] : 0.0) - (ds_ ? ws[i] : 0.0);
}

void SeriesEvaluator::eval_w(const double* x, double* w_out) const {
  if (K_ == 0) {
    for (int i = 0; i < d_; ++i) w_out[i] = 0.0;
    return;
  }
  OrbitCache cache;
  build_orbit(x, 0, cache);
  series_from_cache(cache, 0, 0, w_out);
}

void SeriesEvaluator::eval_picard(const double* x, int iters, double* w_out) const {
  // Nested recursion unrolled along the orbit, deepest term first.
  std::vector<std::array<double, kMaxTorusDim>> fwd(iters + 1), bwd(iters + 1);
  for (int i = 0; i < d_; ++i) fwd[0][i] = wrap01(x[i]);
  for (int k = 1; k <= iters; ++k) map_.apply(fwd[k - 1].data(), fwd[k].data());
  for (int i = 0; i < d_; ++i) bwd[0][i] = wrap01(x[i]);
  for (int k = 1; k <= iters; ++k) map_.apply_inverse(bwd[k - 1].data(), bwd[k].data());

  double cu[kMaxTorusDim] = {0, 0, 0, 0};
  double cs[kMaxTorusDim] = {0, 0, 0, 0};
  double uv[kMaxTorusDim], p[kMaxTorusDim], t[kMaxTorusDim];
  for (int k = iters - 1; k >= 0; --k) {
    map_.field().eval(fwd[k].data(), uv);
    if (du_) {
      matvec(Lu_.data(), uv, p, du_, d_);
      for (int i = 0; i < du_; ++i) p[i] += cu[i];
      matvec(bu_inv_.data(), p, t, du_, du_);
      for (int i = 0; i < du_; ++i) cu[i] = t[i];
    }
  }
  for (int k = iters; k >= 1; --k) {
    map_.field().eval(bwd[k].data(), uv);
    if (ds_) {
      matvec(Ls_.data(), uv, p, ds_, d_);
      matvec(bs_.data(), cs, t, ds_, ds_);
      for (int i = 0; i < ds_; ++i) cs[i] = p[i] + t[i];
    }
  }
  double wu[kMaxTorusDim], ws[kMaxTorusDim];
  matvec(Vu_.data(), cu, wu, d_, du_ ? du_ : 0);
  matvec(Vs_.data(), cs, ws, d_, ds_ ? ds_ : 0);
  for (int i = 0; i < d_; ++i) w_out[i] = (du_ ? wu[i] : 0.0) - (ds_ ? ws[i] : 0.0);
}

double SeriesEvaluator::residual_at(const double* x) const {
  if (K_ == 0) {
    // Exact linear case: h = id, residual is the field itself.
    double uv[kMaxTorusDim];
    map_.field().eval(x, uv);
    double zero[kMaxTorusDim] = {0, 0, 0, 0};
    return torus_distance(uv, zero, d_);
  }
  // Single shared orbit yields both w(x) and w(f x): forward terms of w(f x)
  // shift by one, its backward terms are x, bwd_1, ..., bwd_{K-1}.
  OrbitCache cache;
  build_orbit(x, 1, cache);
  double w_x[kMaxTorusDim], w_fx[kMaxTorusDim];
  series_from_cache(cache, 0, 0, w_x);
  series_from_cache(cache, 1, -1, w_fx);

  double lhs[kMaxTorusDim], hx[kMaxTorusDim], rhs[kMaxTorusDim];
  for (int i = 0; i < d_; ++i) hx[i] = cache.fwd[0][i] + w_x[i];
  matvec(map_.a(), hx, lhs, d_, d_);
  for (int i = 0; i < d_; ++i) rhs[i] = cache.fwd[1][i] + w_fx[i];
  return torus_distance(lhs, rhs, d_);
}

SemiconjugacySolution solve_semiconjugacy(const IntMatrix& A, const PeriodicDisplacement& u,
                                          const SolveOptions& opts) {
  SeriesEvaluator ev(A, u, opts.tol, opts.max_terms, opts.margin);
  ev.map().check_invertible_on_grid();

  SemiconjugacySolution sol;
  sol.splitting = ev.splitting();
  sol.series_terms = ev.terms();

  sol.w.dim = u.dim;
  sol.w.shape = u.shape;
  sol.w.values.assign(u.node_count() * u.dim, 0.0);
  parallel_for(u.node_count(), [&](size_t lo, size_t hi) {
    double x[kMaxTorusDim], w[kMaxTorusDim];
    for (size_t flat = lo; flat < hi; ++flat) {
      sol.w.node_coords(flat, x);
      ev.eval_w(x, w);
      for (int c = 0; c < u.dim; ++c) sol.w.values[flat * u.dim + c] = w[c];
    }
  });
  sol.sup_w = sol.w.sup_norm();

  // Verification on a finer grid; series-evaluated h for residual_sup and the
  // interpolated-w oracle for transparency.
  PeriodicDisplacement fine;
  fine.dim = u.dim;
  for (int s : u.shape) fine.shape.push_back(std::min(s * opts.verify_refine, kMaxGridPerAxis));
  const size_t n_fine = fine.node_count();
  const int workers = std::max(1, thread_budget());
  std::vector<double> max_series(workers, 0.0), max_interp(workers, 0.0);
  std::atomic<int> next_worker{0};
  parallel_for(n_fine, [&](size_t lo, size_t hi) {
    int wid = next_worker.fetch_add(1) % workers;
    double x[kMaxTorusDim], fx[kMaxTorusDim], wx[kMaxTorusDim], wfx[kMaxTorusDim];
    double lhs[kMaxTorusDim], hx[kMaxTorusDim], rhs[kMaxTorusDim];
    for (size_t flat = lo; flat < hi; ++flat) {
      fine.node_coords(flat, x);
      max_series[wid] = std::max(max_series[wid], ev.residual_at(x));
      ev.map().apply(x, fx);
      sol.w.eval(x, wx);
      sol.w.eval(fx, wfx);
      for (int i = 0; i < u.dim; ++i) hx[i] = x[i] + wx[i];
      matvec(ev.map().a(), hx, lhs, u.dim, u.dim);
      for (int i = 0; i < u.dim; ++i) rhs[i] = fx[i] + wfx[i];
      max_interp[wid] = std::max(max_interp[wid], torus_distance(lhs, rhs, u.dim));
    }
  });
  sol.residual_sup = *std::max_element(max_series.begin(), max_series.end());
  sol.residual_grid_interp = *std::max_element(max_interp.begin(), max_interp.end());
  if (sol.residual_sup > opts.tol)
    fail(errc::budget, "verified residual exceeds the requested tolerance");
  return sol;
}

double residual(const IntMatrix& A, const PeriodicDisplacement& u,
                const PeriodicDisplacement& w, const std::vector<std::vector<double>>& samples) {
  if (A.d != u.dim || A.d != w.dim) fail(errc::dimension_mismatch, "dimension mismatch");
  TorusMap map(A, u);
  double worst = 0.0;
  double fx[kMaxTorusDim], wx[kMaxTorusDim], wfx[kMaxTorusDim];
  double lhs[kMaxTorusDim], hx[kMaxTorusDim], rhs[kMaxTorusDim];
  for (const auto& pt : samples) {
    if (int(pt.size()) != A.d) fail(errc::dimension_mismatch, "sample dimension mismatch");
    map.apply(pt.data(), fx);
    w.eval(pt.data(), wx);
    w.eval(fx, wfx);
    for (int i = 0; i < A.d; ++i) hx[i] = pt[i] + wx[i];
    matvec(map.a(), hx, lhs, A.d, A.d);
    for (int i = 0; i < A.d; ++i) rhs[i] = fx[i] + wfx[i];
    worst = std::max(worst, torus_distance(lhs, rhs, A.d));
  }
  return worst;
}

HolderEstimate holder_exponent_estimate(const PeriodicDisplacement& w, const IntMatrix& A,
                                        const PeriodicDisplacement& u, int pair_samples,
                                        uint64_t seed) {
  (void)A;
  (void)u;
  if (pair_samples < 8) fail(errc::insufficient_samples, "need at least 8 pairs");
  Rng rng(seed);
  const int d = w.dim;
  double x[kMaxTorusDim], y[kMaxTorusDim], wx[kMaxTorusDim], wy[kMaxTorusDim];
  double hx[kMaxTorusDim], hy[kMaxTorusDim];
  std::vector<double> lx, ly;
  for (int s = 0; s < pair_samples; ++s) {
    double r = std::pow(10.0, rng.uniform(-5.0, -2.5));
    double dir[kMaxTorusDim], norm = 0.0;
    for (int i = 0; i < d; ++i) {
      x[i] = rng.uniform();
      dir[i] = rng.gaussian();
      norm += dir[i] * dir[i];
    }
    norm = std::sqrt(std::max(norm, 1e-300));
    for (int i = 0; i < d; ++i) y[i] = wrap01(x[i] + r * dir[i] / norm);
    w.eval(x, wx);
    w.eval(y, wy);
    for (int i = 0; i < d; ++i) {
      hx[i] = x[i] + wx[i];
      hy[i] = y[i] + wy[i];
    }
    double dxy = torus_distance(x, y, d), dh = torus_distance(hx, hy, d);
    if (dxy <= 0.0 || dh <= 0.0) continue;
    lx.push_back(std::log(dxy));
    ly.push_back(std::log(dh));
  }
  if (lx.size() < 8) fail(errc::insufficient_samples, "too many degenerate pairs");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(lx.size());
  my /= double(lx.size());
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  HolderEstimate est;
  est.exponent = num / den;
  est.pairs_used = int(lx.size());
  return est;
}

}  // namespace rigidity
