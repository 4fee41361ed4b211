#include "rigidity/rootdata.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace rigidity {

RootFamily parse_family(const std::string& name) {
  if (name == "A") return RootFamily::A;
  if (name == "B") return RootFamily::B;
  if (name == "C") return RootFamily::C;
  if (name == "D") return RootFamily::D;
  if (name == "BC") return RootFamily::BC;
  if (name == "E6") return RootFamily::E6;
  if (name == "E7") return RootFamily::E7;
  if (name == "E8") return RootFamily::E8;
  if (name == "E") return RootFamily::E8;  // rank selects 6/7/8 at build time
  if (name == "F4" || name == "F") return RootFamily::F4;
  if (name == "G2" || name == "G") return RootFamily::G2;
  fail(errc::bad_input, "unknown family " + name);
}

std::string family_name(RootFamily f) {
  switch (f) {
    case RootFamily::A: return "A";
    case RootFamily::B: return "B";
    case RootFamily::C: return "C";
    case RootFamily::D: return "D";
    case RootFamily::BC: return "BC";
    case RootFamily::E6: return "E6";
    case RootFamily::E7: return "E7";
    case RootFamily::E8: return "E8";
    case RootFamily::F4: return "F4";
    case RootFamily::G2: return "G2";
  }
  return "?";
}

BigRat RootSystem::pair2(const QVec& v, const QVec& root) const {
  return BigRat(2) * qdot(v, root) / qdot(root, root);
}

QVec RootSystem::pairing_vector(const QVec& v) const {
  QVec p(simple_roots.size());
  for (size_t j = 0; j < simple_roots.size(); ++j) p[j] = pair2(v, simple_roots[j]);
  return p;
}

bool RootSystem::is_trivial_functional(const QVec& v) const {
  return is_zero(pairing_vector(v));
}

int RootSystem::root_index(const QVec& v) const {
  if (root_lookup_.empty())
    for (size_t i = 0; i < roots.size(); ++i) root_lookup_[roots[i]] = int(i);
  auto it = root_lookup_.find(v);
  return it == root_lookup_.end() ? -1 : it->second;
}

bool RootSystem::is_root(const QVec& v) const { return root_index(v) >= 0; }

namespace {

QVec eps(int dim, int i, BigRat c = BigRat(1)) {
  QVec v(dim, BigRat(0));
  v[i] = c;
  return v;
}

void add_pm_pairs(std::vector<QVec>& roots, int dim) {
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          QVec v(dim, BigRat(0));
          v[i] = si;
          v[j] = sj;
          roots.push_back(v);
        }
}

std::vector<QVec> e8_roots() {
  std::vector<QVec> roots;
  add_pm_pairs(roots, 8);
  // Half-integer roots: all coordinates ±1/2, even number of minus signs.
  for (int mask = 0; mask < 256; ++mask) {
    if (__builtin_popcount(mask) % 2 != 0) continue;
    QVec v(8);
    for (int i = 0; i < 8; ++i) v[i] = (mask >> i) & 1 ? BigRat(-1, 2) : BigRat(1, 2);
    roots.push_back(v);
  }
  return roots;
}

std::vector<QVec> e8_simple_roots() {
  std::vector<QVec> s;
  QVec a1(8, BigRat(-1, 2));
  a1[0] = BigRat(1, 2);
  a1[7] = BigRat(1, 2);
  s.push_back(a1);
  QVec a2(8, BigRat(0));
  a2[0] = 1;
  a2[1] = 1;
  s.push_back(a2);
  for (int k = 0; k < 6; ++k) {
    QVec a(8, BigRat(0));
    a[k] = -1;
    a[k + 1] = 1;
    s.push_back(a);
  }
  return s;  // Bourbaki numbering: alpha_3..alpha_8 are eps_{k+1}-eps_k
}

// Roots of E8 lying in the integer span of the given simple roots.
std::vector<QVec> e_sub_roots(const std::vector<QVec>& simples) {
  std::vector<QVec> all = e8_roots();
  QMatrix A(8, int(simples.size()));
  for (size_t j = 0; j < simples.size(); ++j)
    for (int i = 0; i < 8; ++i) A(i, int(j)) = simples[j][i];
  std::vector<QVec> out;
  for (const auto& r : all) {
    auto sol = solve_linear(A, r);
    if (!sol) continue;
    bool integral = true;
    for (const auto& c : *sol)
      if (!is_integer(c)) integral = false;
    // The span solve has full column rank, so consistency + integrality is
    // exactly membership in the root sublattice.
    if (integral) out.push_back(r);
  }
  return out;
}

void require_rank(bool ok, const std::string& msg) {
  if (!ok) fail(errc::invalid_rank, msg);
}

}  // namespace

RootSystem build_root_system(RootFamily family, int rank) {
  RootSystem rs;
  rs.family = family;
  rs.rank = rank;

  switch (family) {
    case RootFamily::A: {
      require_rank(rank >= 1, "A requires rank >= 1");
      rs.dim = rank + 1;
      for (int i = 0; i < rs.dim; ++i)
        for (int j = 0; j < rs.dim; ++j) {
          if (i == j) continue;
          QVec v(rs.dim, BigRat(0));
          v[i] = 1;
          v[j] = -1;
          rs.roots.push_back(v);
        }
      for (int i = 0; i < rank; ++i) {
        QVec a(rs.dim, BigRat(0));
        a[i] = 1;
        a[i + 1] = -1;
        rs.simple_roots.push_back(a);
      }
      break;
    }
    case RootFamily::B: {
      require_rank(rank >= 2, "B requires rank >= 2");
      rs.dim = rank;
      add_pm_pairs(rs.roots, rank);
      for (int i = 0; i < rank; ++i) {
        rs.roots.push_back(eps(rank, i, BigRat(1)));
        rs.roots.push_back(eps(rank, i, BigRat(-1)));
      }
      for (int i = 0; i + 1 < rank; ++i) {
        QVec a(rank, BigRat(0));
        a[i] = 1;
        a[i + 1] = -1;
        rs.simple_roots.push_back(a);
      }
      rs.simple_roots.push_back(eps(rank, rank - 1));
      break;
    }
    case RootFamily::C: {
      require_rank(rank >= 2, "C requires rank >= 2");
      rs.dim = rank;
      add_pm_pairs(rs.roots, rank);
      for (int i = 0; i < rank; ++i) {
        rs.roots.push_back(eps(rank, i, BigRat(2)));
        rs.roots.push_back(eps(rank, i, BigRat(-2)));
      }
      for (int i = 0; i + 1 < rank; ++i) {
        QVec a(rank, BigRat(0));
        a[i] = 1;
        a[i + 1] = -1;
        rs.simple_roots.push_back(a);
      }
      rs.simple_roots.push_back(eps(rank, rank - 1, BigRat(2)));
      break;
    }
    case RootFamily::D: {
      require_rank(rank >= 3, "D requires rank >= 3");
      rs.dim = rank;
      add_pm_pairs(rs.roots, rank);
      for (int i = 0; i + 1 < rank; ++i) {
        QVec a(rank, BigRat(0));
        a[i] = 1;
        a[i + 1] = -1;
        rs.simple_roots.push_back(a);
      }
      QVec last(rank, BigRat(0));
      last[rank - 2] = 1;
      last[rank - 1] = 1;
      rs.simple_roots.push_back(last);
      break;
    }
    case RootFamily::BC: {
      require_rank(rank >= 1, "BC requires rank >= 1");
      rs.dim = rank;
      add_pm_pairs(rs.roots, rank);
      for (int i = 0; i < rank; ++i)
        for (int c : {1, -1, 2, -2}) rs.roots.push_back(eps(rank, i, BigRat(c)));
      // Simple roots of the reduced (B) part.
      for (int i = 0; i + 1 < rank; ++i) {
        QVec a(rank, BigRat(0));
        a[i] = 1;
        a[i + 1] = -1;
        rs.simple_roots.push_back(a);
      }
      rs.simple_roots.push_back(eps(rank, rank - 1));
      break;
    }
    case RootFamily::G2: {
      require_rank(rank == 2, "G2 has rank 2");
      rs.dim = 3;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          QVec v(3, BigRat(0));
          v[i] = 1;
          v[j] = -1;
          rs.roots.push_back(v);
        }
      for (int i = 0; i < 3; ++i)
        for (int s : {1, -1}) {
          QVec v(3, BigRat(-s));
          v[i] = BigRat(2 * s);
          rs.roots.push_back(v);
        }
      QVec a1(3, BigRat(0));
      a1[0] = 1;
      a1[1] = -1;
      QVec a2(3);
      a2[0] = -2;
      a2[1] = 1;
      a2[2] = 1;
      rs.simple_roots = {a1, a2};
      break;
    }
    case RootFamily::F4: {
      require_rank(rank == 4, "F4 has rank 4");
      rs.dim = 4;
      add_pm_pairs(rs.roots, 4);
      for (int i = 0; i < 4; ++i)
        for (int s : {1, -1}) rs.roots.push_back(eps(4, i, BigRat(s)));
      for (int mask = 0; mask < 16; ++mask) {
        QVec v(4);
        for (int i = 0; i < 4; ++i) v[i] = (mask >> i) & 1 ? BigRat(-1, 2) : BigRat(1, 2);
        rs.roots.push_back(v);
      }
      QVec a1(4, BigRat(0)), a2(4, BigRat(0)), a3(4, BigRat(0));
      a1[1] = 1;
      a1[2] = -1;
      a2[2] = 1;
      a2[3] = -1;
      a3[3] = 1;
      QVec a4 = {BigRat(1, 2), BigRat(-1, 2), BigRat(-1, 2), BigRat(-1, 2)};
      rs.simple_roots = {a1, a2, a3, a4};
      break;
    }
    case RootFamily::E8:
    case RootFamily::E7:
    case RootFamily::E6: {
      int want = family == RootFamily::E8 ? 8 : family == RootFamily::E7 ? 7 : 6;
      require_rank(rank == want, "E family rank mismatch");
      rs.dim = 8;
      auto simples8 = e8_simple_roots();
      rs.simple_roots.assign(simples8.begin(), simples8.begin() + want);
      rs.roots = family == RootFamily::E8 ? e8_roots() : e_sub_roots(rs.simple_roots);
      break;
    }
  }

  // Cartan matrix recomputed from the constructed roots.
  rs.cartan.assign(rank, std::vector<BigInt>(rank));
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) {
      BigRat c = rs.pair2(rs.simple_roots[i], rs.simple_roots[j]);
      if (!is_integer(c)) fail(errc::bad_input, "non-integer Cartan entry");
      rs.cartan[i][j] = rat_num(c);
    }

  // Fundamental weights: 2<w_i,b_j>/<b_j,b_j> = delta_ij, free coordinates
  // zeroed. For BC the weights are those of C_l.
  if (family == RootFamily::BC) {
    RootSystem c_sys = build_root_system(RootFamily::C, rank);
    rs.fundamental_weights = c_sys.fundamental_weights;
  } else {
    QMatrix A(rank, rs.dim);
    for (int j = 0; j < rank; ++j) {
      const QVec& b = rs.simple_roots[j];
      BigRat nn = qdot(b, b);
      for (int k = 0; k < rs.dim; ++k) A(j, k) = BigRat(2) * b[k] / nn;
    }
    for (int i = 0; i < rank; ++i) {
      QVec rhs(rank, BigRat(0));
      rhs[i] = 1;
      auto sol = solve_linear(A, rhs);
      if (!sol) fail(errc::bad_input, "fundamental weight solve failed");
      rs.fundamental_weights.push_back(*sol);
    }
  }

  // Positive roots: nonnegative coordinates over the simple-root basis.
  {
    QMatrix S(rs.dim, rank);
    for (int j = 0; j < rank; ++j)
      for (int i = 0; i < rs.dim; ++i) S(i, j) = rs.simple_roots[j][i];
    for (const auto& r : rs.roots) {
      auto sol = solve_linear(S, r);
      if (!sol) fail(errc::bad_input, "root outside simple-root span");
      bool nonneg = true;
      for (const auto& c : *sol)
        if (c < 0) nonneg = false;
      if (nonneg) rs.positive_roots.push_back(r);
    }
    if (rs.positive_roots.size() * 2 != rs.roots.size())
      fail(errc::bad_input, "positive roots do not halve the root set");
  }

  // Root addition table for the generation closure.
  {
    const int nr = int(rs.roots.size());
    rs.addition_table.assign(nr, std::vector<int>(nr, -1));
    for (int i = 0; i < nr; ++i)
      for (int j = i; j < nr; ++j) {
        int k = rs.root_index(qadd(rs.roots[i], rs.roots[j]));
        rs.addition_table[i][j] = k;
        rs.addition_table[j][i] = k;
      }
  }

  // Self-checks: negation closure and the weight pairing identity.
  for (const auto& r : rs.roots)
    if (!rs.is_root(qneg(r))) fail(errc::bad_input, "roots not closed under negation");
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) {
      BigRat p = rs.pair2(rs.fundamental_weights[i], rs.simple_roots[j]);
      BigRat expect = i == j ? 1 : 0;
      if (family == RootFamily::BC && j == rank - 1) expect = i == j ? 2 : 0;
      if (p != expect) fail(errc::bad_input, "fundamental weight pairing check failed");
    }

  return rs;
}

std::vector<QVec> weyl_orbit(const RootSystem& rs, const QVec& v) {
  if (int(v.size()) != rs.dim) fail(errc::dimension_mismatch, "vector dimension != ambient");
  QVecSet seen;
  std::deque<QVec> queue{v};
  seen.insert(v);
  while (!queue.empty()) {
    QVec cur = queue.front();
    queue.pop_front();
    for (const auto& b : rs.simple_roots) {
      BigRat m = rs.pair2(cur, b);
      if (m == 0) continue;
      QVec refl = qsub(cur, qscale(m, b));
      if (seen.insert(refl).second) queue.push_back(refl);
    }
  }
  return {seen.begin(), seen.end()};
}

QVec weight_from_coefficients(const RootSystem& rs, const std::vector<BigInt>& coeffs) {
  if (int(coeffs.size()) != rs.rank) fail(errc::dimension_mismatch, "want one coefficient per node");
  QVec v(rs.dim, BigRat(0));
  for (int i = 0; i < rs.rank; ++i)
    v = qadd(v, qscale(BigRat(coeffs[i]), rs.fundamental_weights[i]));
  return v;
}

namespace {

// Saturation in doubled-integer coordinates; valid whenever lambda and all
// roots have denominators dividing 2 and stay within int64 range.
bool saturate_fast(const RootSystem& rs, const QVec& lambda, std::vector<QVec>* out) {
  const int dim = rs.dim;
  auto doubled = [&](const QVec& v, std::vector<long long>* w) {
    for (int i = 0; i < dim; ++i) {
      BigRat t = v[size_t(i)] * 2;
      if (!is_integer(t)) return false;
      BigInt n = rat_num(t);
      if (n > 1000000 || n < -1000000) return false;
      (*w)[size_t(i)] = n.convert_to<long long>();
    }
    return true;
  };
  std::vector<long long> start(dim);
  if (!doubled(lambda, &start)) return false;
  std::vector<std::vector<long long>> pos;
  std::vector<long long> norms;
  for (const auto& a : rs.positive_roots) {
    std::vector<long long> w(dim);
    if (!doubled(a, &w)) return false;
    long long nn = 0;
    for (long long x : w) nn += x * x;
    pos.push_back(std::move(w));
    norms.push_back(nn);
  }

  std::set<std::vector<long long>> set;
  std::deque<std::vector<long long>> queue{start};
  set.insert(start);
  while (!queue.empty()) {
    std::vector<long long> mu = queue.front();
    queue.pop_front();
    for (size_t ai = 0; ai < pos.size(); ++ai) {
      long long dot = 0;
      for (int i = 0; i < dim; ++i) dot += mu[size_t(i)] * pos[ai][size_t(i)];
      long long num = 2 * dot;
      if (num <= 0) continue;
      if (num % norms[ai] != 0) return false;  // non-integral pairing: exact path decides
      long long steps = num / norms[ai];
      std::vector<long long> cur = mu;
      for (long long t = 1; t <= steps; ++t) {
        for (int i = 0; i < dim; ++i) cur[size_t(i)] -= pos[ai][size_t(i)];
        if (set.insert(cur).second) queue.push_back(cur);
      }
    }
  }
  for (const auto& w : set) {
    QVec v(dim);
    for (int i = 0; i < dim; ++i) v[size_t(i)] = BigRat(w[size_t(i)], 2);
    out->push_back(std::move(v));
  }
  return true;
}

}  // namespace

WeightSet weights_from_highest(const RootSystem& rs, const QVec& lambda) {
  if (int(lambda.size()) != rs.dim) fail(errc::dimension_mismatch, "weight dimension != ambient");
  for (const auto& b : rs.simple_roots)
    if (rs.pair2(lambda, b) < 0) fail(errc::not_dominant, "highest weight not dominant");
  for (const auto& r : rs.roots)
    if (!is_integer(rs.pair2(lambda, r)))
      fail(errc::not_integral, "2<x,root>/<root,root> must be an integer for every root");

  WeightSet ws;
  ws.source = "highest_weight";
  ws.highest = lambda;
  if (saturate_fast(rs, lambda, &ws.weights)) return ws;

  QVecSet set;
  std::deque<QVec> queue{lambda};
  set.insert(lambda);
  while (!queue.empty()) {
    QVec mu = queue.front();
    queue.pop_front();
    for (const auto& a : rs.positive_roots) {
      BigRat m = rs.pair2(mu, a);
      if (m <= 0) continue;
      BigInt steps = rat_num(m);  // integral by the entry check
      QVec cur = mu;
      for (BigInt t = 1; t <= steps; ++t) {
        cur = qsub(cur, a);
        if (set.insert(cur).second) queue.push_back(cur);
      }
    }
  }
  ws.weights.assign(set.begin(), set.end());
  return ws;
}

namespace {

// Canonical representative of the positive-scaling ray of a nonzero vector:
// divide by the absolute value of the first nonzero entry. Two vectors are
// positively proportional iff their representatives coincide.
std::optional<QVec> ray_of(const QVec& p) {
  for (const auto& x : p)
    if (x != 0) {
      BigRat s = x < 0 ? BigRat(-x) : x;
      QVec out(p.size());
      for (size_t i = 0; i < p.size(); ++i) out[i] = p[i] / s;
      return out;
    }
  return std::nullopt;  // the trivial functional has no ray
}

// int64 pairing machinery: for integral weights on the table-built systems,
// 2<v,b_j>/<b_j,b_j> is an integer computable from doubled coordinates.
struct FastPairer {
  bool ok = false;
  int dim = 0;
  std::vector<std::vector<long long>> dsimple;  // doubled simple roots
  std::vector<long long> norms;                 // their doubled norms

  explicit FastPairer(const RootSystem& rs) : dim(rs.dim) {
    ok = true;
    for (const auto& b : rs.simple_roots) {
      std::vector<long long> w(dim);
      if (!to_doubled(b, &w)) {
        ok = false;
        return;
      }
      long long nn = 0;
      for (long long x : w) nn += x * x;
      dsimple.push_back(std::move(w));
      norms.push_back(nn);
    }
  }

  static bool to_doubled(const QVec& v, std::vector<long long>* w) {
    for (size_t i = 0; i < v.size(); ++i) {
      BigRat t = v[i] * 2;
      if (!is_integer(t)) return false;
      BigInt n = rat_num(t);
      if (n > 2000000 || n < -2000000) return false;
      (*w)[i] = n.convert_to<long long>();
    }
    return true;
  }

  // Integer pairing vector; nullopt when v escapes the fast domain.
  std::optional<std::vector<long long>> pairings(const QVec& v) const {
    std::vector<long long> dv(dim);
    if (!to_doubled(v, &dv)) return std::nullopt;
    std::vector<long long> p(dsimple.size());
    for (size_t j = 0; j < dsimple.size(); ++j) {
      long long dot = 0;
      for (int i = 0; i < dim; ++i) dot += dv[size_t(i)] * dsimple[j][size_t(i)];
      long long num = 2 * dot;
      if (num % norms[j] != 0) return std::nullopt;  // non-integral: exact path
      p[j] = num / norms[j];
    }
    return p;
  }

  // Positive-ray canonical form: divide by the gcd of the absolute values.
  static bool ray(std::vector<long long> p, std::vector<long long>* out) {
    long long g = 0;
    for (long long x : p) g = std::__gcd(g, x < 0 ? -x : x);
    if (g == 0) return false;  // trivial functional
    for (auto& x : p) x /= g;
    *out = std::move(p);
    return true;
  }
};

}  // namespace

ResonanceReport resonance_analysis(const RootSystem& rs, const WeightSet& ws) {
  if (ws.weights.empty()) fail(errc::empty_weight_set, "resonance needs a nonempty weight set");
  ResonanceReport rep;
  rep.bc_caveat = rs.family == RootFamily::BC;

  bool done = false;
  FastPairer fast(rs);
  if (fast.ok) {
    std::set<std::vector<long long>> rays;
    bool all_fast = true;
    for (const auto& chi : ws.weights) {
      auto p = fast.pairings(chi);
      if (!p) {
        all_fast = false;
        break;
      }
      std::vector<long long> r;
      if (FastPairer::ray(*p, &r)) rays.insert(std::move(r));
    }
    std::vector<std::vector<long long>> root_pairings;
    if (all_fast) {
      for (const auto& z : rs.roots) {
        auto p = fast.pairings(z);
        if (!p) {
          all_fast = false;
          break;
        }
        root_pairings.push_back(std::move(*p));
      }
    }
    if (all_fast) {
      done = true;
      for (size_t zi = 0; zi < rs.roots.size(); ++zi) {
        std::vector<long long> r;
        bool resonant = FastPairer::ray(root_pairings[zi], &r) && rays.count(r) > 0;
        if (resonant)
          rep.resonant.push_back(rs.roots[zi]);
        else
          rep.nonresonant.push_back(rs.roots[zi]);
      }
    }
  }
  if (!done) {
    QVecSet weight_rays;
    for (const auto& chi : ws.weights)
      if (auto ray = ray_of(rs.pairing_vector(chi))) weight_rays.insert(*ray);
    for (const auto& z : rs.roots) {
      auto ray = ray_of(rs.pairing_vector(z));
      bool resonant = ray && weight_rays.count(*ray) > 0;
      if (resonant)
        rep.resonant.push_back(z);
      else
        rep.nonresonant.push_back(z);
    }
  }

  if (rep.resonant.empty()) {
    rep.classification = "strong";
    return rep;
  }

  // Closure of the non-resonant root spaces (with g^0) under root addition.
  QVecSet closed = root_addition_closure(rs, rep.nonresonant, &rep.generation_trace);
  rep.classification = closed.size() == rs.roots.size() ? "weak" : "none";
  return rep;
}

QVecSet root_addition_closure(const RootSystem& rs, const std::vector<QVec>& seed,
                              std::vector<QVec>* trace) {
  const int nr = int(rs.roots.size());
  std::vector<char> in(nr, 0);
  std::vector<int> worklist;
  for (const auto& r : seed) {
    int idx = rs.root_index(r);
    if (idx < 0) fail(errc::bad_input, "closure seed contains a non-root");
    if (!in[idx]) {
      in[idx] = 1;
      worklist.push_back(idx);
    }
  }
  for (size_t head = 0; head < worklist.size(); ++head) {
    int i = worklist[head];
    for (size_t other = 0; other < worklist.size(); ++other) {
      int j = worklist[other];
      int k = rs.addition_table[i][j];
      if (k >= 0 && !in[k]) {
        in[k] = 1;
        worklist.push_back(k);
        if (trace) trace->push_back(rs.roots[k]);
      }
    }
  }
  QVecSet closed;
  for (int i = 0; i < nr; ++i)
    if (in[i]) closed.insert(rs.roots[i]);
  return closed;
}

std::string nonresonance_class(const RootSystem& rs, const WeightSet& ws) {
  return resonance_analysis(rs, ws).classification;
}

std::vector<BigInt> cartan_row_gcds(const RootSystem& rs) {
  std::vector<BigInt> out;
  for (const auto& row : rs.cartan) {
    BigInt g = 0;
    for (const auto& e : row) g = big_gcd(g, e);
    out.push_back(g);
  }
  return out;
}

NontrivialityReport weights_all_nontrivial(const RootSystem& rs, const WeightSet& ws) {
  NontrivialityReport rep;
  rep.empty_warning = ws.weights.empty();
  rep.all_nontrivial = true;
  FastPairer fast(rs);
  for (const auto& chi : ws.weights) {
    bool trivial;
    std::optional<std::vector<long long>> p;
    if (fast.ok && (p = fast.pairings(chi))) {
      trivial = true;
      for (long long x : *p)
        if (x != 0) trivial = false;
    } else {
      trivial = rs.is_trivial_functional(chi);
    }
    if (trivial) {
      rep.all_nontrivial = false;
      break;
    }
  }
  return rep;
}

}  // namespace rigidity
