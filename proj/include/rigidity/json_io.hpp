#pragma once

#include <json.hpp>

#include "rigidity/cohomology.hpp"
#include "rigidity/matrix_core.hpp"
#include "rigidity/nilpotent.hpp"
#include "rigidity/rootdata.hpp"
#include "rigidity/semiconj.hpp"

namespace rigidity {

using json = nlohmann::json;

// {"d": n, "entries": [[...]]}; entries accepted as numbers or strings.
IntMatrix matrix_from_json(const json& j);
json matrix_to_json(const IntMatrix& m);

QMatrix qmatrix_from_json(const json& j);  // rational entries, "p/q" strings allowed
json qmatrix_to_json(const QMatrix& m);

json qvec_to_json(const QVec& v);
QVec qvec_from_json(const json& j);

// Displacement fields: either {"dim","grid","values":[...]} (node-major,
// dim components per node) or {"dim","grid","modes":[{"k","amp","phase"}]}
// expanded to the grid on load.
PeriodicDisplacement field_from_json(const json& j);
json field_to_json(const PeriodicDisplacement& u);

// {"dim": d, "brackets": [{"i":..,"j":..,"coeffs":[..]}]}, zero brackets omitted.
NilpotentAlgebra algebra_from_json(const json& j);

// {"generators": ["a","b"], "relators": [["a","b","a^-1","b^-1"]]}
GroupPresentation presentation_from_json(const json& j);

json root_system_to_json(const RootSystem& rs);
json resonance_report_to_json(const RootSystem& rs, const WeightSet& ws,
                              const ResonanceReport& rep);

BigInt bigint_from_json(const json& j);
json bigint_to_json(const BigInt& v);

// Top-level dispatch: config = {"command": ..., inline objects or *_path
// file references, tolerances, seed}. Returns the report; throws
// domain_error on domain failures and json/bad_input errors otherwise.
json dispatch(const json& config);

// Human-readable rendering of a report (one table).
std::string render_report(const json& report);

json error_report(const domain_error& e);

}  // namespace rigidity
