#pragma once

#include <array>
#include <vector>

#include "rigidity/matrix_core.hpp"

namespace rigidity {

constexpr int kMaxTorusDim = 4;
constexpr int kMaxGridPerAxis = 1024;

// Z^d-periodic displacement field sampled on a uniform torus grid with
// multilinear interpolation between nodes.
struct PeriodicDisplacement {
  int dim = 0;
  std::vector<int> shape;        // nodes per axis
  std::vector<double> values;    // node-major, dim components per node

  size_t node_count() const;
  size_t node_index(const std::vector<int>& idx) const;
  void node_coords(size_t flat, double* x) const;

  void eval(const double* x, double* out) const;
  // Jacobian of the interpolant at x (exact per cell), row-major dim x dim.
  void eval_jacobian(const double* x, double* jac) const;
  double sup_norm() const;
  // An upper bound for the interpolant's Lipschitz constant from grid data.
  double lipschitz_bound() const;
};

struct TrigMode {
  std::vector<int> k;       // integer frequency vector
  std::vector<double> amp;  // one amplitude per component
  double phase = 0.0;       // u += amp * sin(2*pi*(k.x) + phase)
};

PeriodicDisplacement expand_modes(int dim, const std::vector<int>& shape,
                                  const std::vector<TrigMode>& modes);

// f = A + u acting on the torus: forward evaluation and exact-tolerance
// preimages via the contraction x <- A^{-1}(y - u(x)) with Newton finishing.
class TorusMap {
 public:
  TorusMap(const IntMatrix& A, const PeriodicDisplacement& u);

  int dim() const { return d_; }
  void apply(const double* x, double* y) const;        // wrapped to [0,1)
  void apply_inverse(const double* y, double* x) const;  // throws NotInvertible
  // Spec'd invertibility pre-check: pure contraction on a node lattice.
  void check_invertible_on_grid(int max_nodes_per_axis = 64) const;

  const double* a() const { return a_.data(); }
  const double* a_inv() const { return ainv_.data(); }
  const PeriodicDisplacement& field() const { return *u_; }

 private:
  int d_;
  std::array<double, kMaxTorusDim * kMaxTorusDim> a_{}, ainv_{};
  const PeriodicDisplacement* u_;
};

struct SolveOptions {
  double tol = 1e-8;
  int max_terms = 512;
  double margin = 0.01;   // adapted-norm margin for the truncation bound
  int verify_refine = 2;  // verification grid is this factor finer per axis
};

struct SemiconjugacySolution {
  PeriodicDisplacement w;     // corrector sampled on the solve grid
  double residual_sup = 0.0;  // sup residual over the verification grid,
                              // h evaluated by the truncated series
  double residual_grid_interp = 0.0;  // same sup with w interpolated (oracle view)
  int series_terms = 0;       // K
  HyperbolicSplitting splitting;
  double sup_w = 0.0;
};

// Evaluates the two-sided correction series pointwise; shared by the solver,
// the verification pass and the Picard cross-check.
class SeriesEvaluator {
 public:
  SeriesEvaluator(const IntMatrix& A, const PeriodicDisplacement& u, double tol,
                  int max_terms, double margin);

  int terms() const { return K_; }
  const HyperbolicSplitting& splitting() const { return split_; }
  const TorusMap& map() const { return map_; }

  void eval_w(const double* x, double* w_out) const;
  // Independent evaluation path: nested Picard recursion
  // w_n = A^{-1}P u + A^{-1}P (w_{n-1} o f), unstable forward / stable backward.
  void eval_picard(const double* x, int iters, double* w_out) const;
  // Residual at x with h = id + w evaluated through the series (single shared
  // orbit for both w(x) and w(f x)).
  double residual_at(const double* x) const;

 private:
  struct OrbitCache {
    std::vector<std::array<double, kMaxTorusDim>> fwd, bwd;    // orbit points
    std::vector<std::array<double, kMaxTorusDim>> ufwd, ubwd;  // u along them
  };
  // Forward orbit of length K+extra (u evaluated once per point, reused for
  // stepping and for the series) plus the backward orbit of length K.
  void build_orbit(const double* x, int fwd_extra, OrbitCache& cache) const;
  void series_from_cache(const OrbitCache& cache, int fwd_offset, int bwd_offset,
                         double* w_out) const;

  int d_, K_;
  int ds_, du_;
  TorusMap map_;
  HyperbolicSplitting split_;
  std::vector<double> Vs_, Vu_, Ls_, Lu_;       // frames and coordinate maps
  std::vector<std::vector<double>> bu_inv_pow_;  // Bu^{-(k+1)}, k = 0..K-1
  std::vector<std::vector<double>> bs_pow_;      // Bs^{k-1},   k = 1..K
  std::vector<double> bs_, bu_inv_;
};

SemiconjugacySolution solve_semiconjugacy(const IntMatrix& A, const PeriodicDisplacement& u,
                                          const SolveOptions& opts = {});

// Solver-independent oracle: sup over samples of
// torus-distance(A(x + w(x)), f(x) + w(f(x))) with w interpolated.
double residual(const IntMatrix& A, const PeriodicDisplacement& u,
                const PeriodicDisplacement& w, const std::vector<std::vector<double>>& samples);

struct HolderEstimate {
  double exponent = 0.0;
  int pairs_used = 0;
};

// Least-squares slope of log dist(h(x),h(y)) against log dist(x,y) over
// random close pairs; diagnostic only.
HolderEstimate holder_exponent_estimate(const PeriodicDisplacement& w, const IntMatrix& A,
                                        const PeriodicDisplacement& u, int pair_samples,
                                        uint64_t seed = 1);

double torus_distance(const double* a, const double* b, int dim);

}  // namespace rigidity
