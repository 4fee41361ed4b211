#include "rigidity/cohomology.hpp"

#include <algorithm>

namespace rigidity {

Word reduce_word(Word w) {
  Word out;
  for (int s : w) {
    if (!out.empty() && out.back() == -s)
      out.pop_back();
    else
      out.push_back(s);
  }
  return out;
}

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& s : out) s = -s;
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void GroupPresentation::validate() const {
  const int m = int(generators.size());
  for (const auto& r : relators) {
    for (int s : r) {
      int g = s > 0 ? s : -s;
      if (g < 1 || g > m) fail(errc::unknown_generator, "relator letter out of range");
    }
    if (reduce_word(r) != r) fail(errc::bad_input, "relator not freely reduced");
  }
}

int GroupPresentation::find_generator(const std::string& name) const {
  for (size_t i = 0; i < generators.size(); ++i)
    if (generators[i] == name) return int(i);
  return -1;
}

Word GroupPresentation::parse_word(const std::vector<std::string>& tokens) const {
  Word w;
  for (const auto& tok : tokens) {
    bool inv = false;
    std::string name = tok;
    if (auto pos = tok.find("^-1"); pos != std::string::npos) {
      inv = true;
      name = tok.substr(0, pos);
    }
    int g = find_generator(name);
    if (g < 0) fail(errc::unknown_generator, "unknown generator " + name);
    w.push_back(inv ? -(g + 1) : g + 1);
  }
  return w;
}

Representation Representation::make(std::vector<QMatrix> generators) {
  Representation rep;
  if (generators.empty()) fail(errc::bad_input, "representation needs at least one matrix");
  rep.vdim = generators.front().rows();
  for (auto& m : generators) {
    if (m.rows() != rep.vdim || m.cols() != rep.vdim)
      fail(errc::dimension_mismatch, "representation matrices must share a square shape");
    rep.rho_inv.push_back(m.inverse());
    rep.rho.push_back(std::move(m));
  }
  return rep;
}

QMatrix Representation::psi(const Word& w) const {
  QMatrix out = QMatrix::identity(vdim);
  for (int s : w) out = out * (s > 0 ? rho[s - 1] : rho_inv[-s - 1]);
  return out;
}

TwistedSystem TwistedSystem::make(GroupPresentation pres, Representation rep,
                                  std::vector<QVec> defects) {
  pres.validate();
  if (pres.generators.size() != rep.rho.size())
    fail(errc::dimension_mismatch, "one matrix per generator required");
  if (defects.size() != pres.relators.size())
    fail(errc::dimension_mismatch, "one defect vector per relator required");
  for (const auto& v : defects)
    if (int(v.size()) != rep.vdim) fail(errc::dimension_mismatch, "defect dimension mismatch");
  for (const auto& r : pres.relators)
    if (!(rep.psi(r) == QMatrix::identity(rep.vdim)))
      fail(errc::bad_input, "rho does not kill a relator (not a representation of the group)");
  return TwistedSystem{std::move(pres), std::move(rep), std::move(defects)};
}

QVec affine_accumulate(const Representation& rep, const Word& w,
                       const std::vector<QVec>& letter_table) {
  QMatrix psi = QMatrix::identity(rep.vdim);
  QVec acc(rep.vdim, BigRat(0));
  for (int s : w) {
    if (s > 0) {
      acc = qadd(acc, psi * letter_table[s - 1]);
      psi = psi * rep.rho[s - 1];
    } else {
      psi = psi * rep.rho_inv[-s - 1];
      acc = qsub(acc, psi * letter_table[-s - 1]);
    }
  }
  return acc;
}

TwistedSystem TwistedSystem::from_letter_lifts(GroupPresentation pres, Representation rep,
                                               const std::vector<QVec>& letter_lifts) {
  std::vector<QVec> defects;
  for (const auto& r : pres.relators) defects.push_back(affine_accumulate(rep, r, letter_lifts));
  return make(std::move(pres), std::move(rep), std::move(defects));
}

QVec Cochain::eval(const std::vector<Word>& tuple) const {
  if (degree == 0) return constant.empty() ? QVec(vdim, BigRat(0)) : constant;
  std::vector<Word> key;
  key.reserve(tuple.size());
  for (const auto& w : tuple) key.push_back(reduce_word(w));
  auto it = table.find(key);
  if (it != table.end()) return it->second;
  return QVec(vdim, BigRat(0));
}

void Cochain::set(std::vector<Word> tuple, QVec value) {
  for (auto& w : tuple) w = reduce_word(w);
  table[std::move(tuple)] = std::move(value);
}

QVec coboundary_eval(const Representation& rep, int k, const Cochain& f,
                     const std::vector<Word>& tuple) {
  if (int(tuple.size()) != k + 1)
    fail(errc::dimension_mismatch, "coboundary of a k-cochain takes k+1 words");
  if (f.degree != k) fail(errc::dimension_mismatch, "cochain degree mismatch");
  // psi(g1) f(g2..g_{k+1})
  std::vector<Word> head(tuple.begin() + 1, tuple.end());
  QVec out = rep.psi(tuple[0]) * f.eval(head);
  int sign = -1;
  for (int j = 1; j <= k; ++j) {
    std::vector<Word> merged;
    merged.reserve(k);
    for (int t = 0; t < j - 1; ++t) merged.push_back(tuple[t]);
    merged.push_back(concat(tuple[j - 1], tuple[j]));
    for (int t = j + 1; t <= k; ++t) merged.push_back(tuple[t]);
    QVec term = f.eval(merged);
    out = sign > 0 ? qadd(out, term) : qsub(out, term);
    sign = -sign;
  }
  std::vector<Word> tail(tuple.begin(), tuple.end() - 1);
  QVec last = f.eval(tail);
  out = sign > 0 ? qadd(out, last) : qsub(out, last);
  return out;
}

QVec word_defect(const TwistedSystem& sys, const Word& w) {
  const int m = int(sys.presentation.generators.size());
  for (int s : w) {
    int g = s > 0 ? s : -s;
    if (g < 1 || g > m) fail(errc::unknown_generator, "word letter out of range");
  }
  // Relator occurrences, longest first, plus their inverses.
  std::vector<std::pair<Word, QVec>> patterns;
  for (size_t r = 0; r < sys.presentation.relators.size(); ++r) {
    patterns.emplace_back(sys.presentation.relators[r], sys.defects[r]);
    patterns.emplace_back(inverse_word(sys.presentation.relators[r]), qneg(sys.defects[r]));
  }
  std::stable_sort(patterns.begin(), patterns.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });

  QMatrix psi = QMatrix::identity(sys.rep.vdim);
  QVec acc(sys.rep.vdim, BigRat(0));
  size_t i = 0;
  while (i < w.size()) {
    bool matched = false;
    for (const auto& [pat, val] : patterns) {
      if (pat.empty() || i + pat.size() > w.size()) continue;
      if (std::equal(pat.begin(), pat.end(), w.begin() + i)) {
        acc = qadd(acc, psi * val);
        i += pat.size();  // psi unchanged: relators act trivially
        matched = true;
        break;
      }
    }
    if (matched) continue;
    int s = w[i++];
    psi = psi * (s > 0 ? sys.rep.rho[s - 1] : sys.rep.rho_inv[-s - 1]);
  }
  return acc;
}

RelatorEquation relator_equation(const TwistedSystem& sys, int relator_index) {
  if (relator_index < 0 || relator_index >= int(sys.presentation.relators.size()))
    fail(errc::bad_input, "relator index out of range");
  const Word& r = sys.presentation.relators[relator_index];
  const int d = sys.rep.vdim;
  const int m = int(sys.presentation.generators.size());
  RelatorEquation eq;
  eq.coefficients.assign(m, QMatrix(d, d));
  QMatrix psi = QMatrix::identity(d);
  for (int s : r) {
    if (s > 0) {
      eq.coefficients[s - 1] = eq.coefficients[s - 1] + psi;
      psi = psi * sys.rep.rho[s - 1];
    } else {
      psi = psi * sys.rep.rho_inv[-s - 1];
      eq.coefficients[-s - 1] = eq.coefficients[-s - 1] - psi;
    }
  }
  eq.rhs = qneg(sys.defects[relator_index]);
  return eq;
}

LiftingSolution solve_lifting(const TwistedSystem& sys) {
  const int d = sys.rep.vdim;
  const int m = int(sys.presentation.generators.size());
  const int k = int(sys.presentation.relators.size());
  QMatrix A(k * d, m * d);
  QVec b(size_t(k) * d, BigRat(0));
  for (int r = 0; r < k; ++r) {
    RelatorEquation eq = relator_equation(sys, r);
    for (int g = 0; g < m; ++g)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(r * d + i, g * d + j) = eq.coefficients[g](i, j);
    for (int i = 0; i < d; ++i) b[size_t(r) * d + i] = eq.rhs[i];
  }
  LiftingSolution sol;
  auto x = solve_linear(A, b);
  if (!x) {
    sol.solvable = false;
    return sol;
  }
  sol.solvable = true;
  sol.eta.assign(m, QVec(d, BigRat(0)));
  BigInt q = 1;
  for (int g = 0; g < m; ++g)
    for (int i = 0; i < d; ++i) {
      sol.eta[g][i] = (*x)[size_t(g) * d + i];
      q = big_lcm(q, rat_den(sol.eta[g][i]));
    }
  sol.denominator = q;
  return sol;
}

std::vector<QVec> corrected_defect(const TwistedSystem& sys, const std::vector<QVec>& eta) {
  if (eta.size() != sys.presentation.generators.size())
    fail(errc::dimension_mismatch, "one eta vector per generator required");
  std::vector<QVec> out;
  for (size_t r = 0; r < sys.presentation.relators.size(); ++r)
    out.push_back(qadd(sys.defects[r],
                       affine_accumulate(sys.rep, sys.presentation.relators[r], eta)));
  return out;
}

}  // namespace rigidity
