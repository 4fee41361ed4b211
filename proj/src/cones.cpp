#include "rigidity/cones.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "rigidity/rng.hpp"

namespace rigidity {

namespace {

double op_norm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return m.jacobiSvd().singularValues()(0);
}

double conorm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  auto sv = m.jacobiSvd().singularValues();
  return sv(sv.size() - 1);
}

struct BlockDecomp {
  Eigen::MatrixXd a, b, c, d;  // [s<-s, s<-u; u<-s, u<-u] in the adapted frames
};

BlockDecomp blocks(const ConeFrame& frame, const Eigen::MatrixXd& dg) {
  BlockDecomp bd;
  bd.a = frame.Ts * dg * frame.Ts_back;
  bd.b = frame.Ts * dg * frame.Tu_back;
  bd.c = frame.Tu * dg * frame.Ts_back;
  bd.d = frame.Tu * dg * frame.Tu_back;
  return bd;
}

ConeConstants constants_from_blocks(const ConeFrame& frame, const BlockDecomp& bd) {
  ConeConstants k;
  k.lambda = frame.lambda;
  k.r = conorm(bd.d);
  if (k.r <= 1e-12)
    fail(errc::transversality_failure, "Dg E^u does not intersect E^s transversally");
  k.C = std::max(op_norm(bd.a) + op_norm(bd.b), op_norm(bd.c) + op_norm(bd.d));
  k.C = std::max(k.C, 1e-300);
  return k;
}

}  // namespace

ConeFrame make_cone_frame(const IntMatrix& f, double margin) {
  ConeFrame frame;
  frame.split = hyperbolic_splitting(f);
  if (frame.split.dim_s() == 0 || frame.split.dim_u() == 0)
    fail(errc::bad_input, "cone analysis needs nontrivial stable and unstable bundles");
  frame.norm = adapted_norm(f, frame.split, margin);
  frame.lambda = frame.norm.lambda;
  frame.Ts = frame.norm.Rs * frame.split.Ls;
  frame.Tu = frame.norm.Ru * frame.split.Lu;
  frame.Ts_back = frame.split.e_stable * frame.norm.Rs.inverse();
  frame.Tu_back = frame.split.e_unstable * frame.norm.Ru.inverse();
  return frame;
}

ConeConstants cone_constants(const ConeFrame& frame, const Eigen::MatrixXd& dg) {
  if (dg.rows() != frame.split.d || dg.cols() != frame.split.d)
    fail(errc::dimension_mismatch, "Dg dimension mismatch");
  return constants_from_blocks(frame, blocks(frame, dg));
}

ConeConstants cone_constants_sampled(const ConeFrame& frame,
                                     const std::vector<Eigen::MatrixXd>& jacobians) {
  if (jacobians.empty()) fail(errc::bad_input, "no Jacobian samples");
  double r = 1e300, C = 0.0;
  for (const auto& dg : jacobians) {
    ConeConstants k = constants_from_blocks(frame, blocks(frame, dg));
    r = std::min(r, k.r);
    C = std::max(C, k.C);
  }
  ConeConstants k;
  k.lambda = frame.lambda;
  k.r = 0.9 * r;  // sampling evidences but cannot certify the true inf/sup
  k.C = 1.1 * C;
  k.empirical = true;
  if (k.r <= 1e-12) fail(errc::transversality_failure, "sampled d-block nearly singular");
  return k;
}

ConeCertificate certify_power(const ConeConstants& constants, double epsilon,
                              std::optional<double> delta0_override) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) fail(errc::bad_input, "epsilon must lie in (0,1]");
  if (!(constants.r > 0.0)) fail(errc::transversality_failure, "r must be positive");
  if (!(constants.lambda > 0.0 && constants.lambda < 1.0))
    fail(errc::no_finite_power, "adapted rate must lie in (0,1)");

  ConeCertificate cert;
  cert.r = constants.r;
  cert.C = constants.C;
  cert.lambda = constants.lambda;
  cert.epsilon = epsilon;
  cert.empirical = constants.empirical;
  cert.delta0 = delta0_override.value_or(constants.r / (2.0 * constants.C));
  if (!(cert.delta0 > 0.0) || constants.r - constants.C * cert.delta0 <= 0.0)
    fail(errc::no_finite_power, "delta0 must satisfy r - C*delta0 > 0");
  cert.T = constants.C * (cert.delta0 + 1.0) / (constants.r - constants.C * cert.delta0);

  const double lam = constants.lambda;
  for (long long n = 1; n <= 4000000; ++n) {
    double l2n = std::pow(lam, 2.0 * n);
    double ln = std::pow(lam, double(n));
    double cone_entry = cert.delta0 - l2n * epsilon;
    double cone_half = epsilon / 2.0 - l2n * cert.T;
    double expansion = (constants.r / ln - constants.C * ln * epsilon) / ln - 2.0;
    if (cone_entry >= 0.0 && cone_half >= 0.0 && expansion >= 0.0) {
      cert.N = n;
      cert.slack_cone_entry = cone_entry;
      cert.slack_cone_half = cone_half;
      cert.slack_expansion = expansion;
      return cert;
    }
  }
  fail(errc::no_finite_power, "no power within the search bound");
}

ConeCheckReport numeric_cone_check(const ConeFrame& frame,
                                   const std::vector<Eigen::MatrixXd>& factors, double epsilon,
                                   int samples, uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) fail(errc::bad_input, "epsilon must lie in (0,1]");
  const int d = frame.split.d;
  Eigen::MatrixXd DF = Eigen::MatrixXd::Identity(d, d);
  for (const auto& m : factors) {
    if (m.rows() != d || m.cols() != d) fail(errc::dimension_mismatch, "factor dimension");
    DF = DF * m;
  }
  Eigen::MatrixXd DFinv = DF.inverse();

  const int ds = frame.split.dim_s(), du = frame.split.dim_u();
  Rng rng(seed);
  ConeCheckReport rep;
  rep.samples = samples;
  rep.worst_expansion_margin_u = 1e300;
  rep.worst_expansion_margin_s = 1e300;
  rep.worst_cone_margin_u = 1e300;
  rep.worst_cone_margin_s = 1e300;

  auto unit = [&](int n) {
    Eigen::VectorXd v(n);
    double norm = 0.0;
    while (norm == 0.0) {
      for (int i = 0; i < n; ++i) v(i) = rng.gaussian();
      norm = v.norm();
    }
    return Eigen::VectorXd(v / norm);
  };

  for (int s = 0; s < samples; ++s) {
    double x[4];
    for (int i = 0; i < d && i < 4; ++i) x[i] = rng.uniform();

    // Boundary vector of the unstable cone: |vs| = eps, |vu| = 1.
    Eigen::VectorXd v =
        frame.Ts_back * (epsilon * unit(ds)) + frame.Tu_back * unit(du);
    Eigen::VectorXd w = DF * v;
    double ws = (frame.Ts * w).norm(), wu = (frame.Tu * w).norm();
    double v_box = std::max(epsilon, 1.0);
    double w_box = std::max(ws, wu);
    double cone_margin = (epsilon / 2.0) * wu - ws;
    double exp_margin = w_box - 2.0 * v_box;
    rep.worst_cone_margin_u = std::min(rep.worst_cone_margin_u, cone_margin);
    rep.worst_expansion_margin_u = std::min(rep.worst_expansion_margin_u, exp_margin);
    bool bad_u = cone_margin < 0.0 || exp_margin < 0.0;

    // Boundary vector of the stable cone, checked under DF^{-1}.
    Eigen::VectorXd vs = frame.Ts_back * unit(ds) + frame.Tu_back * (epsilon * unit(du));
    Eigen::VectorXd wi = DFinv * vs;
    double wis = (frame.Ts * wi).norm(), wiu = (frame.Tu * wi).norm();
    double cone_margin_s = (epsilon / 2.0) * wis - wiu;
    double exp_margin_s = std::max(wis, wiu) - 2.0 * std::max(epsilon, 1.0);
    rep.worst_cone_margin_s = std::min(rep.worst_cone_margin_s, cone_margin_s);
    rep.worst_expansion_margin_s = std::min(rep.worst_expansion_margin_s, exp_margin_s);
    bool bad_s = cone_margin_s < 0.0 || exp_margin_s < 0.0;

    if (bad_u || bad_s) {
      ++rep.violations;
      if (!rep.first_violation) {
        ConeViolationInfo info;
        for (int i = 0; i < d && i < 4; ++i) info.point[i] = x[i];
        info.unstable_side = bad_u;
        info.margin = bad_u ? std::min(cone_margin, exp_margin)
                            : std::min(cone_margin_s, exp_margin_s);
        rep.first_violation = info;
      }
    }
  }
  rep.passed = rep.violations == 0;
  return rep;
}

ConeCheckReport semigroup_member(const ConeFrame& frame, const Eigen::MatrixXd& candidate,
                                 double epsilon, int samples, uint64_t seed) {
  return numeric_cone_check(frame, {candidate}, epsilon, samples, seed);
}

}  // namespace rigidity
