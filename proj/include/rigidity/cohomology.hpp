#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rigidity/qmatrix.hpp"

namespace rigidity {

// Word over a presentation's alphabet: signed 1-based generator indices,
// +k for g_k and -k for g_k^{-1}.
using Word = std::vector<int>;

Word reduce_word(Word w);
Word inverse_word(const Word& w);
Word concat(const Word& a, const Word& b);

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  void validate() const;  // indices in range, relators freely reduced
  int find_generator(const std::string& name) const;  // -1 when absent
  Word parse_word(const std::vector<std::string>& tokens) const;
};

// Representation of the free group on the generators by invertible integer
// matrices; inverses are exact over Q.
struct Representation {
  int vdim = 0;
  std::vector<QMatrix> rho;
  std::vector<QMatrix> rho_inv;

  static Representation make(std::vector<QMatrix> generators);
  QMatrix psi(const Word& w) const;
};

struct TwistedSystem {
  GroupPresentation presentation;
  Representation rep;
  std::vector<QVec> defects;  // one d-vector per relator

  // Requires psi(relator) = identity for every relator.
  static TwistedSystem make(GroupPresentation pres, Representation rep,
                            std::vector<QVec> defects);
  // Derives the defect table from per-generator lift translations via the
  // affine accumulation (used by tests and synthetic inputs).
  static TwistedSystem from_letter_lifts(GroupPresentation pres, Representation rep,
                                         const std::vector<QVec>& letter_lifts);
};

// Finitely supported cochain in C^k(Gamma, Q^d); keys are tuples of reduced
// words, lookups default to zero. Degree 0 stores a single vector.
struct Cochain {
  int degree = 0;
  int vdim = 0;
  QVec constant;  // degree-0 value
  std::map<std::vector<Word>, QVec> table;

  QVec eval(const std::vector<Word>& tuple) const;
  void set(std::vector<Word> tuple, QVec value);
};

// d_{psi,k} f evaluated on a (k+1)-tuple of words, exact over Q.
QVec coboundary_eval(const Representation& rep, int k, const Cochain& f,
                     const std::vector<Word>& tuple);

// Affine accumulation of per-generator translations over a word:
// T(w.g) = T(w) + psi(w) t_g, T(w.g^{-1}) = T(w) - psi(w g^{-1}) t_g.
QVec affine_accumulate(const Representation& rep, const Word& w,
                       const std::vector<QVec>& letter_table);

// Accumulated central deck element of a word: contributions of literal
// relator occurrences (and inverses), twisted by psi of the prefix.
// Letters contribute nothing (a letter's lift is itself).
QVec word_defect(const TwistedSystem& sys, const Word& w);

struct RelatorEquation {
  std::vector<QMatrix> coefficients;  // one vdim x vdim matrix per generator
  QVec rhs;                           // -defect
};

RelatorEquation relator_equation(const TwistedSystem& sys, int relator_index);

struct LiftingSolution {
  bool solvable = false;
  std::vector<QVec> eta;  // per generator, when solvable
  BigInt denominator = 1;  // lcm of denominators (Claim-9.3 style q)
};

// Exact solve of the stacked relator equations; free unknowns zeroed.
LiftingSolution solve_lifting(const TwistedSystem& sys);

// Recomputes every relator defect after the eta-correction via the direct
// affine recursion; exact zeros certify a lifting solution.
std::vector<QVec> corrected_defect(const TwistedSystem& sys, const std::vector<QVec>& eta);

}  // namespace rigidity
