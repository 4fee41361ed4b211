#pragma once

#include <set>
#include <string>
#include <vector>

#include "rigidity/qmatrix.hpp"

namespace rigidity {

enum class RootFamily { A, B, C, D, BC, E6, E7, E8, F4, G2 };

RootFamily parse_family(const std::string& name);
std::string family_name(RootFamily f);

struct QVecLess {
  bool operator()(const QVec& a, const QVec& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) return true;
      if (a[i] > b[i]) return false;
    }
    return false;
  }
};

using QVecSet = std::set<QVec, QVecLess>;

struct RootSystem {
  RootFamily family;
  int rank = 0;
  int dim = 0;  // ambient epsilon-coordinate dimension
  std::vector<QVec> roots;  // nonzero roots, closed under negation
  std::vector<QVec> simple_roots;
  std::vector<QVec> positive_roots;
  std::vector<std::vector<BigInt>> cartan;
  std::vector<QVec> fundamental_weights;

  // 2<v,root>/<root,root>
  BigRat pair2(const QVec& v, const QVec& root) const;
  // Pairings of v against every simple root; the zero vector here means v is
  // the trivial functional on the split Cartan (modulo the W-invariant
  // complement of the root span).
  QVec pairing_vector(const QVec& v) const;
  bool is_trivial_functional(const QVec& v) const;
  bool is_root(const QVec& v) const;
  int root_index(const QVec& v) const;  // -1 when not a root

  // addition_table[i][j] = index of roots[i]+roots[j], or -1.
  std::vector<std::vector<int>> addition_table;

 private:
  mutable std::map<QVec, int, QVecLess> root_lookup_;
};

// Builds the root system from tables in the epsilon-coordinate model and
// cross-checks Cartan and fundamental-weight identities. Throws InvalidRank.
RootSystem build_root_system(RootFamily family, int rank);

struct WeightSet {
  std::vector<QVec> weights;
  std::string source;  // "explicit" | "highest_weight"
  QVec highest;        // populated for highest_weight sources
};

// Orbit of v under the Weyl group generated by the simple reflections.
std::vector<QVec> weyl_orbit(const RootSystem& rs, const QVec& v);

// Saturated weight support of the highest-weight representation:
// start {lambda}; for mu in the set and positive root a with
// m = 2<mu,a>/<a,a> > 0 add mu-a, ..., mu-m*a; iterate to a fixpoint.
WeightSet weights_from_highest(const RootSystem& rs, const QVec& lambda);

// Convenience: lambda = sum coeff[i]*fundamental_weight[i].
QVec weight_from_coefficients(const RootSystem& rs, const std::vector<BigInt>& coeffs);

struct ResonanceReport {
  std::vector<QVec> resonant;
  std::vector<QVec> nonresonant;
  std::string classification;  // "strong" | "weak" | "none"
  std::vector<QVec> generation_trace;  // roots added during the closure
  bool bc_caveat = false;
};

// A root z is resonant iff z = c*chi for some weight chi and c > 0, tested
// exactly on simple-root pairing vectors. Classification: strong iff no
// resonant roots; weak iff the non-resonant roots generate everything under
// root addition; none otherwise.
ResonanceReport resonance_analysis(const RootSystem& rs, const WeightSet& ws);

// Smallest superset of `seed` closed under root addition (alpha+beta kept
// when it is again a root), optionally recording the added roots.
QVecSet root_addition_closure(const RootSystem& rs, const std::vector<QVec>& seed,
                              std::vector<QVec>* trace = nullptr);

std::string nonresonance_class(const RootSystem& rs, const WeightSet& ws);

std::vector<BigInt> cartan_row_gcds(const RootSystem& rs);

struct NontrivialityReport {
  bool all_nontrivial = false;
  bool empty_warning = false;
};

NontrivialityReport weights_all_nontrivial(const RootSystem& rs, const WeightSet& ws);

}  // namespace rigidity
