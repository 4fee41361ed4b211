#include <fstream>
#include <sstream>

#include "rigidity/cones.hpp"
#include "rigidity/json_io.hpp"
#include "rigidity/rng.hpp"

namespace rigidity {

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::bad_input, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(errc::bad_input, std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return j;
}

// Fetches config[key] or loads config[key+"_path"].
json need_input(const json& config, const std::string& key) {
  if (config.contains(key)) return config.at(key);
  if (config.contains(key + "_path"))
    return load_json_file(config.at(key + "_path").get<std::string>());
  fail(errc::bad_input, "missing input: " + key);
}

bool has_input(const json& config, const std::string& key) {
  return config.contains(key) || config.contains(key + "_path");
}

std::vector<BigInt> parse_coeff_list(const json& j) {
  std::vector<BigInt> out;
  if (j.is_string()) {
    std::stringstream ss(j.get<std::string>());
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(BigInt(tok));
  } else {
    for (const auto& e : j) out.push_back(bigint_from_json(e));
  }
  return out;
}

json cmd_hyperbolic(const json& config) {
  IntMatrix m = matrix_from_json(need_input(config, "matrix"));
  double tol = config.value("tol", kDefaultTol);
  auto rep = is_hyperbolic(m, tol);
  if (!rep.hyperbolic) {
    json err{{"schema", "v1"}, {"error", "NotHyperbolic"}, {"moduli", rep.moduli}};
    throw domain_error(errc::not_hyperbolic, err.dump());
  }
  return json{{"schema", "v1"},
              {"command", "hyperbolic"},
              {"hyperbolic", true},
              {"moduli", rep.moduli},
              {"tol", tol}};
}

json cmd_splitting(const json& config) {
  IntMatrix m = matrix_from_json(need_input(config, "matrix"));
  double tol = config.value("tol", kDefaultTol);
  HyperbolicSplitting s = hyperbolic_splitting(m, tol);
  auto cols = [](const Eigen::MatrixXd& b) {
    json out = json::array();
    for (int j = 0; j < b.cols(); ++j) {
      json col = json::array();
      for (int i = 0; i < b.rows(); ++i) col.push_back(b(i, j));
      out.push_back(col);
    }
    return out;
  };
  json out{{"schema", "v1"},     {"command", "splitting"},
           {"dim", s.d},         {"dim_stable", s.dim_s()},
           {"dim_unstable", s.dim_u()},
           {"lambda_s", s.lambda_s},
           {"lambda_u", s.lambda_u},
           {"e_stable", cols(s.e_stable)},
           {"e_unstable", cols(s.e_unstable)},
           {"tol", tol}};
  if (config.value("adapted_norm", false) || config.contains("margin")) {
    double margin = config.value("margin", 0.01);
    AdaptedNorm n = adapted_norm(m, s, margin);
    json gram = json::array();
    for (int i = 0; i < s.d; ++i) {
      json row = json::array();
      for (int j = 0; j < s.d; ++j) row.push_back(n.gram(i, j));
      gram.push_back(row);
    }
    out["adapted_norm"] = json{{"lambda", n.lambda}, {"gram", gram}, {"margin", margin}};
  }
  return out;
}

json cmd_regularity(const json& config) {
  IntMatrix m = matrix_from_json(need_input(config, "matrix"));
  double tol = config.value("tol", kDefaultTol);
  RegularityProfile p = regularity_profile(m, tol);
  return json{{"schema", "v1"},
              {"command", "regularity"},
              {"n", p.n},
              {"ad_unit_eigen_count", p.ad_unit_eigen_count},
              {"ad_circle_eigen_count", p.ad_circle_eigen_count},
              {"regular", p.regular},
              {"r_regular", p.r_regular},
              {"ambient_minimum", p.ambient_minimum}};
}

json cmd_rank1(const json& config) {
  json input = need_input(config, "vectors");
  std::vector<std::vector<double>> vecs;
  const json& arr = input.is_object() ? input.at("vectors") : input;
  for (const auto& v : arr) vecs.push_back(v.get<std::vector<double>>());
  RankOneReport rep = rank_one_factor_test(vecs);
  return json{{"schema", "v1"},
              {"command", "rank1"},
              {"rank", rep.rank},
              {"is_rank_one", rep.is_rank_one}};
}

json cmd_nonres(const json& config) {
  RootFamily family = parse_family(config.at("family").get<std::string>());
  int rank = config.at("rank").get<int>();
  RootSystem rs = build_root_system(family, rank);
  WeightSet ws;
  if (config.contains("highest_weight")) {
    auto coeffs = parse_coeff_list(config.at("highest_weight"));
    ws = weights_from_highest(rs, weight_from_coefficients(rs, coeffs));
  } else if (config.contains("weights")) {
    for (const auto& w : config.at("weights")) ws.weights.push_back(qvec_from_json(w));
    ws.source = "explicit";
  } else {
    fail(errc::bad_input, "nonres needs highest_weight or weights");
  }
  ResonanceReport rep = resonance_analysis(rs, ws);
  return resonance_report_to_json(rs, ws, rep);
}

json cmd_gcd_rows(const json& config) {
  RootFamily family = parse_family(config.at("family").get<std::string>());
  int rank = config.at("rank").get<int>();
  RootSystem rs = build_root_system(family, rank);
  json gcds = json::array();
  for (const auto& g : cartan_row_gcds(rs)) gcds.push_back(bigint_to_json(g));
  json cartan = json::array();
  for (const auto& row : rs.cartan) {
    json jr = json::array();
    for (const auto& e : row) jr.push_back(bigint_to_json(e));
    cartan.push_back(jr);
  }
  return json{{"schema", "v1"},
              {"command", "gcd-rows"},
              {"family", family_name(family)},
              {"rank", rank},
              {"cartan", cartan},
              {"row_gcds", gcds}};
}

json cmd_nilpotent(const json& config) {
  NilpotentAlgebra alg = algebra_from_json(need_input(config, "algebra"));
  CentralTower tower = central_series(alg);
  json layers = json::array();
  for (const auto& layer : tower.layers)
    layers.push_back(json{{"dim", layer.algebra.dim}, {"center_dim", layer.center_dim}});
  json out{{"schema", "v1"},
           {"command", "nilpotent"},
           {"dim", alg.dim},
           {"degree", tower.degree()},
           {"layers", layers}};
  if (has_input(config, "automorphism")) {
    QMatrix phi = qmatrix_from_json(need_input(config, "automorphism"));
    check_automorphism(alg, phi);
    LayerHyperbolicity hyp = layer_hyperbolicity(alg, phi);
    json jl = json::array();
    for (const auto& rep : hyp.layers)
      jl.push_back(json{{"level", rep.level},
                        {"center_dim", rep.center_dim},
                        {"center_moduli", rep.center_moduli},
                        {"hyperbolic", rep.hyperbolic}});
    out["automorphism_valid"] = true;
    out["layer_hyperbolicity"] = jl;
    out["all_layers_hyperbolic"] = hyp.all_hyperbolic;
    json descended = json::array();
    for (int level = 0; level <= tower.degree(); ++level)
      descended.push_back(qmatrix_to_json(descend_automorphism(tower, phi, level)));
    out["descended"] = descended;
  }
  return out;
}

json cmd_semiconj(const json& config) {
  IntMatrix A = matrix_from_json(need_input(config, "matrix"));
  PeriodicDisplacement u = field_from_json(need_input(config, "field"));
  SolveOptions opts;
  opts.tol = config.value("tol", 1e-8);
  opts.max_terms = config.value("max_terms", 512);
  opts.margin = config.value("margin", 0.01);
  SemiconjugacySolution sol = solve_semiconjugacy(A, u, opts);
  json out{{"schema", "v1"},
           {"command", "semiconj"},
           {"residual_sup", sol.residual_sup},
           {"residual_grid_interp", sol.residual_grid_interp},
           {"series_terms", sol.series_terms},
           {"grid", sol.w.shape},
           {"sup_w", sol.sup_w},
           {"lambda_s", sol.splitting.lambda_s},
           {"lambda_u", sol.splitting.lambda_u},
           {"tol", opts.tol}};
  if (config.contains("out")) {
    std::ofstream f(config.at("out").get<std::string>());
    if (!f) fail(errc::bad_input, "cannot write corrector file");
    f << field_to_json(sol.w).dump(2) << "\n";
    out["corrector_path"] = config.at("out");
  }
  return out;
}

json cmd_cone_cert(const json& config) {
  IntMatrix f = matrix_from_json(need_input(config, "f"));
  double eps = config.value("eps", 1.0);
  double margin = config.value("margin", 0.0);
  ConeFrame frame = make_cone_frame(f, margin);

  ConeConstants constants;
  json g_json = need_input(config, "g");
  if (g_json.contains("jacobians")) {
    std::vector<Eigen::MatrixXd> jacs;
    for (const auto& jj : g_json.at("jacobians")) {
      QMatrix q = qmatrix_from_json(jj);
      Eigen::MatrixXd m(q.rows(), q.cols());
      auto flat = q.to_double();
      for (int i = 0; i < q.rows(); ++i)
        for (int j = 0; j < q.cols(); ++j) m(i, j) = flat[size_t(i) * q.cols() + j];
      jacs.push_back(m);
    }
    constants = cone_constants_sampled(frame, jacs);
  } else {
    constants = cone_constants(frame, matrix_from_json(g_json).to_eigen());
  }

  std::optional<double> delta0;
  if (config.contains("delta0")) delta0 = config.at("delta0").get<double>();
  ConeCertificate cert = certify_power(constants, eps, delta0);
  json out{{"schema", "v1"},
           {"command", "cone-cert"},
           {"r", cert.r},
           {"C", cert.C},
           {"lambda", cert.lambda},
           {"delta0", cert.delta0},
           {"T", cert.T},
           {"epsilon", cert.epsilon},
           {"N", cert.N},
           {"slack_cone_entry", cert.slack_cone_entry},
           {"slack_cone_half", cert.slack_cone_half},
           {"slack_expansion", cert.slack_expansion},
           {"empirical", cert.empirical}};
  if (config.value("verify", false)) {
    int samples = config.value("samples", 10000);
    uint64_t seed = config.value("seed", 0ull);
    // F = f^N g f^N with the certified power.
    std::vector<Eigen::MatrixXd> factors;
    Eigen::MatrixXd fe = f.to_eigen();
    Eigen::MatrixXd fn = Eigen::MatrixXd::Identity(f.d, f.d);
    for (long long i = 0; i < cert.N; ++i) fn = fn * fe;
    factors.push_back(fn);
    if (!g_json.contains("jacobians")) factors.push_back(matrix_from_json(g_json).to_eigen());
    factors.push_back(fn);
    ConeCheckReport rep = numeric_cone_check(frame, factors, eps, samples, seed);
    out["verify"] = json{{"samples", rep.samples},
                         {"violations", rep.violations},
                         {"passed", rep.passed},
                         {"worst_expansion_margin_u", rep.worst_expansion_margin_u},
                         {"worst_expansion_margin_s", rep.worst_expansion_margin_s},
                         {"worst_cone_margin_u", rep.worst_cone_margin_u},
                         {"worst_cone_margin_s", rep.worst_cone_margin_s},
                         {"seed", seed}};
    if (!rep.passed)
      throw domain_error(errc::cone_violation, out.dump());
  }
  return out;
}

json cmd_lift(const json& config) {
  GroupPresentation pres = presentation_from_json(need_input(config, "presentation"));
  json rho_json = need_input(config, "rho");
  std::vector<QMatrix> mats;
  for (const auto& name : pres.generators) {
    if (!rho_json.contains(name)) fail(errc::bad_input, "rho missing generator " + name);
    QMatrix m = qmatrix_from_json(rho_json.at(name));
    if (!m.is_integer()) fail(errc::bad_input, "rho matrices must be integer");
    mats.push_back(m);
  }
  Representation rep = Representation::make(std::move(mats));
  json defects_json = need_input(config, "defects");
  std::vector<QVec> defects(pres.relators.size(), QVec(rep.vdim, BigRat(0)));
  for (auto it = defects_json.begin(); it != defects_json.end(); ++it) {
    int idx = std::stoi(it.key());
    if (idx < 0 || idx >= int(pres.relators.size()))
      fail(errc::bad_input, "defect index out of range");
    defects[idx] = qvec_from_json(it.value());
    if (int(defects[idx].size()) != rep.vdim)
      fail(errc::dimension_mismatch, "defect dimension mismatch");
  }
  TwistedSystem sys = TwistedSystem::make(std::move(pres), std::move(rep), std::move(defects));
  LiftingSolution sol = solve_lifting(sys);
  if (!sol.solvable) {
    json err{{"schema", "v1"},
             {"error", "UNSOLVABLE"},
             {"detail", "presentation-level obstruction over Q"}};
    throw domain_error(errc::unsolvable, err.dump());
  }
  auto corrected = corrected_defect(sys, sol.eta);
  bool all_zero = true;
  for (const auto& v : corrected)
    if (!is_zero(v)) all_zero = false;
  json eta = json::object();
  for (size_t g = 0; g < sys.presentation.generators.size(); ++g)
    eta[sys.presentation.generators[g]] = qvec_to_json(sol.eta[g]);
  return json{{"schema", "v1"},
              {"command", "lift"},
              {"solvable", true},
              {"q", bigint_to_json(sol.denominator)},
              {"eta", eta},
              {"corrected_defects_zero", all_zero}};
}

}  // namespace

json dispatch(const json& config) {
  if (!config.is_object() || !config.contains("command"))
    fail(errc::bad_input, "config must carry a command");
  std::string cmd = config.at("command").get<std::string>();
  if (cmd == "hyperbolic") return cmd_hyperbolic(config);
  if (cmd == "splitting") return cmd_splitting(config);
  if (cmd == "regularity") return cmd_regularity(config);
  if (cmd == "rank1") return cmd_rank1(config);
  if (cmd == "nonres") return cmd_nonres(config);
  if (cmd == "gcd-rows") return cmd_gcd_rows(config);
  if (cmd == "nilpotent") return cmd_nilpotent(config);
  if (cmd == "semiconj") return cmd_semiconj(config);
  if (cmd == "cone-cert") return cmd_cone_cert(config);
  if (cmd == "lift") return cmd_lift(config);
  fail(errc::bad_input, "unknown command " + cmd);
}

std::string render_report(const json& report) {
  std::ostringstream out;
  auto line = [&](const std::string& k, const json& v) {
    out << "  " << k;
    for (size_t i = k.size(); i < 26; ++i) out << ' ';
    out << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  };
  std::string cmd = report.value("command", report.contains("error") ? "error" : "report");
  out << cmd << "\n";
  if (cmd == "cone-cert") {
    for (const char* k : {"r", "C", "lambda", "delta0", "T"}) line(k, report.at(k));
    line("N", report.at("N"));
    line("slack_cone_entry", report.at("slack_cone_entry"));
    line("slack_cone_half", report.at("slack_cone_half"));
    line("slack_expansion", report.at("slack_expansion"));
    if (report.contains("verify")) {
      line("verify.samples", report["verify"]["samples"]);
      line("verify.violations", report["verify"]["violations"]);
    }
    return out.str();
  }
  if (cmd == "nonres") {
    auto list = [&](const char* key) {
      std::string s;
      for (const auto& r : report.at(key)) s += r.dump() + " ";
      return s;
    };
    line("classification", report.at("classification"));
    line("resonant", json(list("resonant")));
    line("nonresonant", json(list("nonresonant")));
    line("all_weights_nontrivial", report.at("all_weights_nontrivial"));
    return out.str();
  }
  if (cmd == "semiconj") {
    line("residual_sup", report.at("residual_sup"));
    line("series_terms", report.at("series_terms"));
    line("grid", report.at("grid"));
    line("sup_w", report.at("sup_w"));
    return out.str();
  }
  for (auto it = report.begin(); it != report.end(); ++it) {
    if (it.key() == "schema" || it.key() == "command") continue;
    if (it.value().is_array() && it.value().size() > 8) {
      line(it.key(), json("[" + std::to_string(it.value().size()) + " entries]"));
      continue;
    }
    line(it.key(), it.value());
  }
  return out.str();
}

}  // namespace rigidity
