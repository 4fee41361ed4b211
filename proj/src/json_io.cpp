#include "rigidity/json_io.hpp"

#include <fstream>
#include <sstream>

namespace rigidity {

BigInt bigint_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<long long>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  fail(errc::bad_input, "expected integer or integer string");
}

json bigint_to_json(const BigInt& v) {
  static const BigInt lo = -(BigInt(1) << 53), hi = BigInt(1) << 53;
  if (v > lo && v < hi) return json(v.convert_to<long long>());
  return json(v.str());
}

namespace {

BigRat bigrat_from_json(const json& j) {
  if (j.is_number_integer()) return BigRat(j.get<long long>());
  if (j.is_string()) return BigRat(j.get<std::string>());
  fail(errc::bad_input, "expected rational as integer or \"p/q\" string");
}

json bigrat_to_json(const BigRat& v) {
  if (is_integer(v)) return bigint_to_json(rat_num(v));
  return json(v.str());
}

}  // namespace

IntMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("entries")) fail(errc::bad_input, "matrix needs entries");
  const auto& rows = j.at("entries");
  int d = j.contains("d") ? j.at("d").get<int>() : int(rows.size());
  if (d <= 0 || int(rows.size()) != d) fail(errc::non_square, "matrix must be d x d");
  IntMatrix m(d);
  for (int i = 0; i < d; ++i) {
    if (int(rows[i].size()) != d) fail(errc::non_square, "matrix must be d x d");
    for (int jj = 0; jj < d; ++jj) m.at(i, jj) = bigint_from_json(rows[i][jj]);
  }
  return m;
}

json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.d; ++i) {
    json row = json::array();
    for (int j = 0; j < m.d; ++j) row.push_back(bigint_to_json(m.at(i, j)));
    rows.push_back(row);
  }
  return json{{"d", m.d}, {"entries", rows}};
}

QMatrix qmatrix_from_json(const json& j) {
  const auto& rows = j.is_object() ? j.at("entries") : j;
  int r = int(rows.size());
  if (r == 0) fail(errc::bad_input, "empty matrix");
  int c = int(rows[0].size());
  QMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (int(rows[i].size()) != c) fail(errc::bad_input, "ragged matrix");
    for (int jj = 0; jj < c; ++jj) m(i, jj) = bigrat_from_json(rows[i][jj]);
  }
  return m;
}

json qmatrix_to_json(const QMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(bigrat_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json qvec_to_json(const QVec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(bigrat_to_json(x));
  return out;
}

QVec qvec_from_json(const json& j) {
  QVec v;
  for (const auto& e : j) v.push_back(bigrat_from_json(e));
  return v;
}

PeriodicDisplacement field_from_json(const json& j) {
  PeriodicDisplacement u;
  u.dim = j.at("dim").get<int>();
  if (u.dim < 1 || u.dim > kMaxTorusDim) fail(errc::bad_input, "field dim must lie in 1..4");
  for (const auto& s : j.at("grid")) {
    int n = s.get<int>();
    if (n < 2 || n > kMaxGridPerAxis) fail(errc::bad_input, "grid size must lie in 2..1024");
    u.shape.push_back(n);
  }
  if (int(u.shape.size()) != u.dim) fail(errc::bad_input, "grid rank != dim");
  if (j.contains("modes")) {
    std::vector<TrigMode> modes;
    for (const auto& mj : j.at("modes")) {
      TrigMode mode;
      for (const auto& k : mj.at("k")) mode.k.push_back(k.get<int>());
      for (const auto& a : mj.at("amp")) mode.amp.push_back(a.get<double>());
      mode.phase = mj.value("phase", 0.0);
      if (int(mode.k.size()) != u.dim || int(mode.amp.size()) != u.dim)
        fail(errc::bad_input, "mode k/amp must have dim entries");
      modes.push_back(std::move(mode));
    }
    return expand_modes(u.dim, u.shape, modes);
  }
  const auto& vals = j.at("values");
  if (vals.size() != u.node_count() * size_t(u.dim))
    fail(errc::bad_input, "values length must be nodes*dim");
  u.values.reserve(vals.size());
  for (const auto& v : vals) u.values.push_back(v.get<double>());
  return u;
}

json field_to_json(const PeriodicDisplacement& u) {
  return json{{"schema", "v1"}, {"dim", u.dim}, {"grid", u.shape}, {"values", u.values}};
}

NilpotentAlgebra algebra_from_json(const json& j) {
  NilpotentAlgebra alg;
  alg.dim = j.at("dim").get<int>();
  if (alg.dim < 0 || alg.dim > 16) fail(errc::bad_input, "algebra dim out of range");
  alg.bracket.assign(alg.dim, std::vector<QVec>(alg.dim, QVec(alg.dim, BigRat(0))));
  if (j.contains("brackets"))
    for (const auto& b : j.at("brackets")) {
      int i = b.at("i").get<int>(), jj = b.at("j").get<int>();
      if (i < 0 || jj < 0 || i >= alg.dim || jj >= alg.dim)
        fail(errc::bad_input, "bracket index out of range");
      QVec c = qvec_from_json(b.at("coeffs"));
      if (int(c.size()) != alg.dim) fail(errc::bad_input, "bracket coeffs must have dim entries");
      alg.bracket[i][jj] = c;
      alg.bracket[jj][i] = qneg(c);
    }
  return alg;
}

GroupPresentation presentation_from_json(const json& j) {
  GroupPresentation pres;
  for (const auto& g : j.at("generators")) pres.generators.push_back(g.get<std::string>());
  if (j.contains("relators"))
    for (const auto& r : j.at("relators")) {
      std::vector<std::string> toks;
      for (const auto& t : r) toks.push_back(t.get<std::string>());
      pres.relators.push_back(pres.parse_word(toks));
    }
  pres.validate();
  return pres;
}

json root_system_to_json(const RootSystem& rs) {
  json roots = json::array();
  for (const auto& r : rs.roots) roots.push_back(qvec_to_json(r));
  json simples = json::array();
  for (const auto& r : rs.simple_roots) simples.push_back(qvec_to_json(r));
  json cartan = json::array();
  for (const auto& row : rs.cartan) {
    json jr = json::array();
    for (const auto& e : row) jr.push_back(bigint_to_json(e));
    cartan.push_back(jr);
  }
  json fw = json::array();
  for (const auto& w : rs.fundamental_weights) fw.push_back(qvec_to_json(w));
  return json{{"schema", "v1"},
              {"family", family_name(rs.family)},
              {"rank", rs.rank},
              {"dim", rs.dim},
              {"roots", roots},
              {"simple_roots", simples},
              {"cartan", cartan},
              {"fundamental_weights", fw}};
}

json resonance_report_to_json(const RootSystem& rs, const WeightSet& ws,
                              const ResonanceReport& rep) {
  json weights = json::array();
  for (const auto& w : ws.weights) weights.push_back(qvec_to_json(w));
  json res = json::array(), nonres = json::array(), trace = json::array();
  for (const auto& r : rep.resonant) res.push_back(qvec_to_json(r));
  for (const auto& r : rep.nonresonant) nonres.push_back(qvec_to_json(r));
  for (const auto& r : rep.generation_trace) trace.push_back(qvec_to_json(r));
  auto nontriv = weights_all_nontrivial(rs, ws);
  json out{{"schema", "v1"},
           {"command", "nonres"},
           {"family", family_name(rs.family)},
           {"rank", rs.rank},
           {"weights", weights},
           {"weight_source", ws.source},
           {"resonant", res},
           {"nonresonant", nonres},
           {"classification", rep.classification},
           {"generation_trace", trace},
           {"all_weights_nontrivial", nontriv.all_nontrivial}};
  if (!ws.highest.empty()) out["highest_weight"] = qvec_to_json(ws.highest);
  if (rep.bc_caveat) out["bc_caveat"] = true;
  return out;
}

json error_report(const domain_error& e) {
  json out{{"schema", "v1"}, {"error", errc_name(e.code())}};
  if (!e.detail().empty()) out["detail"] = e.detail();
  return out;
}

}  // namespace rigidity
