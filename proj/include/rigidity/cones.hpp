#pragma once

#include <optional>
#include <vector>

#include "rigidity/matrix_core.hpp"

namespace rigidity {

// Splitting of the reference Anosov map plus the adapted box norm
// |v| = max(|v^s|, |v^u|) in which all cone arithmetic is done.
struct ConeFrame {
  HyperbolicSplitting split;
  AdaptedNorm norm;
  double lambda = 0.0;  // adapted rate
  // Coordinate transforms into the normed subspace frames.
  Eigen::MatrixXd Ts, Tu;        // v -> Rs*Ls*v, Ru*Lu*v
  Eigen::MatrixXd Ts_back, Tu_back;  // right inverses used to build sample vectors
};

ConeFrame make_cone_frame(const IntMatrix& f, double margin = 0.0);

struct ConeConstants {
  double r = 0.0;       // conorm lower bound of the unstable block of Dg
  double C = 0.0;       // operator bound for Dg in the box norm
  double lambda = 0.0;  // adapted rate of f
  bool empirical = false;
};

// Exact route (linear g): the blocks of Dg in the adapted frame.
// Throws TransversalityFailure when the d-block is singular.
ConeConstants cone_constants(const ConeFrame& frame, const Eigen::MatrixXd& dg);

// Sampled route (nonlinear g): Jacobian samples over a grid with 0.9/1.1
// safety margins; result is flagged empirical.
ConeConstants cone_constants_sampled(const ConeFrame& frame,
                                     const std::vector<Eigen::MatrixXd>& jacobians);

struct ConeCertificate {
  double r = 0.0, C = 0.0, lambda = 0.0;
  double delta0 = 0.0, T = 0.0;
  double epsilon = 0.0;
  long long N = 0;
  double slack_cone_entry = 0.0;   // delta0 - lambda^{2N} eps
  double slack_cone_half = 0.0;    // eps/2 - lambda^{2N} T
  double slack_expansion = 0.0;    // lambda^{-N}(r lambda^{-N} - C lambda^N eps) - 2
  bool empirical = false;
};

// Smallest N with lambda^{2N} eps <= delta0, lambda^{2N} T <= eps/2 and
// lambda^{-N}(r lambda^{-N} - C lambda^N eps) >= 2; delta0 defaults to r/(2C).
ConeCertificate certify_power(const ConeConstants& constants, double epsilon,
                              std::optional<double> delta0_override = std::nullopt);

struct ConeViolationInfo {
  double point[4] = {0, 0, 0, 0};
  double margin = 0.0;
  bool unstable_side = false;
};

struct ConeCheckReport {
  int samples = 0;
  int violations = 0;
  double worst_expansion_margin_u = 0.0;  // min over samples of |DFv|-2|v|
  double worst_expansion_margin_s = 0.0;
  double worst_cone_margin_u = 0.0;  // min of (eps/2)|wu| - |ws| on images
  double worst_cone_margin_s = 0.0;
  bool passed = false;
  std::optional<ConeViolationInfo> first_violation;
};

// DF given as an ordered factor list (leftmost applied last). Checks cone
// invariance into the eps/2 cones and 2-expansion, forward on unstable cones
// and for the inverse on stable cones, over seeded boundary samples.
ConeCheckReport numeric_cone_check(const ConeFrame& frame,
                                   const std::vector<Eigen::MatrixXd>& factors, double epsilon,
                                   int samples, uint64_t seed);

// Membership test for the Anosov semigroup: the candidate itself must pass
// the cone check.
ConeCheckReport semigroup_member(const ConeFrame& frame, const Eigen::MatrixXd& candidate,
                                 double epsilon, int samples, uint64_t seed);

}  // namespace rigidity
