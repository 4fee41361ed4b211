#include "rigidity_lab.h"

#include <cstring>
#include <new>
#include <string>

#include "rigidity/json_io.hpp"

using rigidity::domain_error;
using rigidity::json;

struct rl_matrix {
  rigidity::IntMatrix m;
};

struct rl_root_system {
  rigidity::RootSystem rs;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** slot, const std::string& s) {
  if (slot) *slot = dup_string(s);
}

rl_status domain_status(const domain_error& e, char** report) {
  // Domain errors whose detail is already a structured report pass through.
  json j = e.detail().size() && e.detail().front() == '{'
               ? json::parse(e.detail(), nullptr, false)
               : json();
  if (!j.is_object()) j = rigidity::error_report(e);
  put(report, j.dump());
  return e.code() == rigidity::errc::bad_input ? RL_E_BAD_INPUT : RL_E_DOMAIN;
}

template <typename Fn>
rl_status guarded(char** report, Fn&& fn) {
  try {
    return fn();
  } catch (const domain_error& e) {
    return domain_status(e, report);
  } catch (const json::exception& e) {
    put(report, json{{"schema", "v1"}, {"error", "BadInput"}, {"detail", e.what()}}.dump());
    return RL_E_BAD_INPUT;
  } catch (const std::exception& e) {
    put(report, json{{"schema", "v1"}, {"error", "Internal"}, {"detail", e.what()}}.dump());
    return RL_E_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* rl_version(void) { return "rigidity-lab 1.0.0"; }

void rl_string_free(char* s) { std::free(s); }

rl_status rl_run(const char* config_json, char** report_json) {
  if (!config_json) return RL_E_BAD_INPUT;
  return guarded(report_json, [&]() -> rl_status {
    json config = json::parse(config_json);
    json report = rigidity::dispatch(config);
    put(report_json, report.dump());
    return RL_OK;
  });
}

rl_status rl_matrix_parse(const char* matrix_json, rl_matrix** out) {
  if (!matrix_json || !out) return RL_E_BAD_INPUT;
  return guarded(nullptr, [&]() -> rl_status {
    auto* h = new rl_matrix{rigidity::matrix_from_json(json::parse(matrix_json))};
    *out = h;
    return RL_OK;
  });
}

void rl_matrix_free(rl_matrix* m) { delete m; }

int rl_matrix_dim(const rl_matrix* m) { return m ? m->m.d : 0; }

rl_status rl_matrix_is_hyperbolic(const rl_matrix* m, double tol, int* hyperbolic,
                                  char** moduli_json) {
  if (!m || !hyperbolic) return RL_E_BAD_INPUT;
  return guarded(moduli_json, [&]() -> rl_status {
    auto rep = rigidity::is_hyperbolic(m->m, tol > 0 ? tol : rigidity::kDefaultTol);
    *hyperbolic = rep.hyperbolic ? 1 : 0;
    put(moduli_json, json(rep.moduli).dump());
    return RL_OK;
  });
}

rl_status rl_matrix_splitting(const rl_matrix* m, double tol, char** report_json) {
  if (!m) return RL_E_BAD_INPUT;
  return guarded(report_json, [&]() -> rl_status {
    json config{{"command", "splitting"}, {"matrix", rigidity::matrix_to_json(m->m)}};
    if (tol > 0) config["tol"] = tol;
    put(report_json, rigidity::dispatch(config).dump());
    return RL_OK;
  });
}

rl_status rl_root_system_build(const char* family, int rank, rl_root_system** out) {
  if (!family || !out) return RL_E_BAD_INPUT;
  return guarded(nullptr, [&]() -> rl_status {
    auto* h = new rl_root_system{
        rigidity::build_root_system(rigidity::parse_family(family), rank)};
    *out = h;
    return RL_OK;
  });
}

void rl_root_system_free(rl_root_system* rs) { delete rs; }

rl_status rl_root_system_nonres(const rl_root_system* rs, const char* coeffs_json,
                                char** report_json) {
  if (!rs || !coeffs_json) return RL_E_BAD_INPUT;
  return guarded(report_json, [&]() -> rl_status {
    std::vector<rigidity::BigInt> coeffs;
    for (const auto& c : json::parse(coeffs_json)) coeffs.push_back(rigidity::bigint_from_json(c));
    auto lambda = rigidity::weight_from_coefficients(rs->rs, coeffs);
    auto ws = rigidity::weights_from_highest(rs->rs, lambda);
    auto rep = rigidity::resonance_analysis(rs->rs, ws);
    put(report_json, rigidity::resonance_report_to_json(rs->rs, ws, rep).dump());
    return RL_OK;
  });
}

rl_status rl_root_system_to_json(const rl_root_system* rs, char** json_out) {
  if (!rs) return RL_E_BAD_INPUT;
  return guarded(json_out, [&]() -> rl_status {
    put(json_out, rigidity::root_system_to_json(rs->rs).dump());
    return RL_OK;
  });
}

rl_status rl_lift_solve(const char* presentation_json, const char* rho_json,
                        const char* defects_json, char** report_json) {
  if (!presentation_json || !rho_json || !defects_json) return RL_E_BAD_INPUT;
  return guarded(report_json, [&]() -> rl_status {
    json config{{"command", "lift"},
                {"presentation", json::parse(presentation_json)},
                {"rho", json::parse(rho_json)},
                {"defects", json::parse(defects_json)}};
    put(report_json, rigidity::dispatch(config).dump());
    return RL_OK;
  });
}

}  // extern "C"
