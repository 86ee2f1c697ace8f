#include "bordered/structures.hpp"

#include <algorithm>
#include <functional>

namespace bordered {

namespace {

template <typename T>
void xor_one(std::set<T>& acc, const T& t) {
  auto [it, inserted] = acc.insert(t);
  if (!inserted) acc.erase(it);
}

template <typename T>
void xor_into(std::set<T>& acc, const std::set<T>& v) {
  for (const T& t : v) xor_one(acc, t);
}

bool alg_equal(const DgAlgebraPresentation& a,
               const DgAlgebraPresentation& b) {
  if (a.basis.size() != b.basis.size()) return false;
  for (std::size_t i = 0; i < a.basis.size(); ++i)
    if (a.basis[i].name != b.basis[i].name ||
        a.basis[i].left != b.basis[i].left ||
        a.basis[i].right != b.basis[i].right)
      return false;
  return a.ground.idempotents == b.ground.idempotents &&
         a.mu1_table == b.mu1_table && a.mu2_table == b.mu2_table;
}

// All composable words of non-idempotent basis elements with left idempotent
// chain starting at `start`, of length exactly `len`.
void composable_words(const DgAlgebraPresentation& alg, std::size_t start,
                      std::size_t len, std::vector<std::size_t>& word,
                      const std::function<void()>& visit) {
  if (word.size() == len) {
    visit();
    return;
  }
  std::size_t at = word.empty() ? start : alg.basis[word.back()].right;
  for (std::size_t a = alg.num_idempotents(); a < alg.basis.size(); ++a) {
    if (alg.basis[a].left != at) continue;
    word.push_back(a);
    composable_words(alg, start, len, word, visit);
    word.pop_back();
  }
}

// mu1/mu2 input expansions shared by every A-infinity-style relation: calls
// `emit` once per replacement word obtained by differentiating one letter or
// contracting one adjacent pair.
void input_expansions(const DgAlgebraPresentation& alg,
                      const std::vector<std::size_t>& word,
                      const std::function<void(const std::vector<std::size_t>&)>&
                          emit) {
  for (std::size_t i = 0; i < word.size(); ++i)
    for (std::size_t b : alg.mu1(word[i])) {
      std::vector<std::size_t> w = word;
      w[i] = b;
      emit(w);
    }
  for (std::size_t i = 0; i + 1 < word.size(); ++i)
    for (std::size_t b : alg.mu2(word[i], word[i + 1])) {
      std::vector<std::size_t> w;
      w.insert(w.end(), word.begin(), word.begin() + i);
      w.push_back(b);
      w.insert(w.end(), word.begin() + i + 2, word.end());
      emit(w);
    }
}

std::vector<std::size_t> prefix(const std::vector<std::size_t>& w,
                                std::size_t n) {
  return {w.begin(), w.begin() + n};
}
std::vector<std::size_t> suffix(const std::vector<std::size_t>& w,
                                std::size_t n) {
  return {w.begin() + n, w.end()};
}

}  // namespace

// ---- Type D structures -----------------------------------------------------

std::size_t TypeDStructure::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].name == name) return i;
  throw ArgumentError("unknown generator " + name);
}

ValidationReport check_typeD(const TypeDStructure& x) {
  if (x.delta1.size() != x.generators.size())
    throw StructureError("delta1 table size does not match generator count");
  ValidationReport report;
  const auto& A = x.algebra;
  for (const auto& g : x.generators)
    if (g.idem >= A.num_idempotents())
      throw StructureError("generator " + g.name + " has no valid idempotent");
  for (std::size_t i = 0; i < x.generators.size(); ++i) {
    for (const auto& [a, y] : x.delta1[i]) {
      if (a >= A.basis.size() || y >= x.generators.size())
        throw StructureError("delta1 term out of range at " +
                             x.generators[i].name);
      if (A.basis[a].left != x.generators[i].idem ||
          A.basis[a].right != x.generators[y].idem)
        report.violations.push_back("idempotent discipline fails on " +
                                    A.basis[a].name + " (x) " +
                                    x.generators[y].name + " in delta1(" +
                                    x.generators[i].name + ")");
    }
    // (mu1 (x) id) delta1 + (mu2 (x) id)(id (x) delta1) delta1.
    DElt residual;
    for (const auto& [a, y] : x.delta1[i]) {
      for (std::size_t b : A.mu1(a)) xor_one(residual, {b, y});
      for (const auto& [b, z] : x.delta1[y])
        for (std::size_t c : A.mu2(a, b)) xor_one(residual, {c, z});
    }
    if (!residual.empty())
      report.violations.push_back("structure equation fails at " +
                                  x.generators[i].name);
  }
  return report;
}

bool typeD_is_bounded(const TypeDStructure& x) {
  // Acyclicity of the generator graph via three-color depth-first search.
  std::vector<int> color(x.generators.size(), 0);
  std::function<bool(std::size_t)> has_cycle = [&](std::size_t v) {
    color[v] = 1;
    for (const auto& [a, y] : x.delta1[v]) {
      (void)a;
      if (color[y] == 1) return true;
      if (color[y] == 0 && has_cycle(y)) return true;
    }
    color[v] = 2;
    return false;
  };
  for (std::size_t v = 0; v < x.generators.size(); ++v)
    if (color[v] == 0 && has_cycle(v)) return false;
  return true;
}

TypeDMorphism zero_morphism(const TypeDStructure& x, const TypeDStructure& y) {
  (void)y;
  return {std::vector<DElt>(x.generators.size())};
}

TypeDMorphism identity_morphism(const TypeDStructure& x) {
  TypeDMorphism h{std::vector<DElt>(x.generators.size())};
  for (std::size_t i = 0; i < x.generators.size(); ++i)
    h.terms[i] = {{x.generators[i].idem, i}};
  return h;
}

bool morphism_is_zero(const TypeDMorphism& h) {
  return std::all_of(h.terms.begin(), h.terms.end(),
                     [](const DElt& t) { return t.empty(); });
}

TypeDMorphism morphism_differential(const TypeDStructure& x,
                                    const TypeDStructure& y,
                                    const TypeDMorphism& h) {
  if (!alg_equal(x.algebra, y.algebra))
    throw ArgumentError("morphism_differential: algebra mismatch");
  if (h.terms.size() != x.generators.size())
    throw ArgumentError("morphism_differential: domain size mismatch");
  const auto& A = x.algebra;
  TypeDMorphism out{std::vector<DElt>(x.generators.size())};
  for (std::size_t i = 0; i < x.generators.size(); ++i) {
    DElt acc;
    for (const auto& [a, w] : h.terms[i])
      for (std::size_t b : A.mu1(a)) xor_one(acc, {b, w});
    // delta1_X first, then h: the delta output is the earlier one.
    for (const auto& [a, v] : x.delta1[i])
      for (const auto& [b, w] : h.terms[v])
        for (std::size_t c : A.mu2(a, b)) xor_one(acc, {c, w});
    // h first, then delta1_Y.
    for (const auto& [a, v] : h.terms[i])
      for (const auto& [b, w] : y.delta1[v])
        for (std::size_t c : A.mu2(a, b)) xor_one(acc, {c, w});
    out.terms[i] = std::move(acc);
  }
  return out;
}

TypeDMorphism compose_typeD(const TypeDStructure& x, const TypeDStructure& y,
                            const TypeDStructure& z, const TypeDMorphism& h,
                            const TypeDMorphism& g) {
  if (!alg_equal(x.algebra, y.algebra) || !alg_equal(y.algebra, z.algebra))
    throw ArgumentError("compose_typeD: algebra mismatch");
  if (g.terms.size() != x.generators.size() ||
      h.terms.size() != y.generators.size())
    throw ArgumentError("compose_typeD: morphism size mismatch");
  const auto& A = x.algebra;
  TypeDMorphism out{std::vector<DElt>(x.generators.size())};
  for (std::size_t i = 0; i < x.generators.size(); ++i) {
    DElt acc;
    for (const auto& [a, v] : g.terms[i])
      for (const auto& [b, w] : h.terms[v])
        for (std::size_t c : A.mu2(a, b)) xor_one(acc, {c, w});
    out.terms[i] = std::move(acc);
  }
  return out;
}

TypeDStructure mapping_cone(const TypeDStructure& x, const TypeDStructure& y,
                            const TypeDMorphism& f) {
  if (!morphism_is_zero(morphism_differential(x, y, f)))
    throw ArgumentError("mapping_cone: the morphism is not a cycle");
  TypeDStructure cone;
  cone.algebra = x.algebra;
  std::set<std::string> used;
  for (const auto& g : x.generators) {
    cone.generators.push_back(g);
    used.insert(g.name);
  }
  const std::size_t off = x.generators.size();
  for (auto g : y.generators) {
    while (used.count(g.name)) g.name += "~";
    used.insert(g.name);
    cone.generators.push_back(g);
  }
  cone.delta1.resize(cone.generators.size());
  for (std::size_t i = 0; i < x.generators.size(); ++i) {
    for (const auto& [a, v] : x.delta1[i]) cone.delta1[i].insert({a, v});
    for (const auto& [a, v] : f.terms[i]) cone.delta1[i].insert({a, v + off});
  }
  for (std::size_t i = 0; i < y.generators.size(); ++i)
    for (const auto& [a, v] : y.delta1[i])
      cone.delta1[i + off].insert({a, v + off});
  auto report = check_typeD(cone);
  if (!report.ok())
    throw StructureError("mapping_cone: result fails the structure equation: " +
                         report.violations.front());
  return cone;
}

// ---- A-infinity modules ----------------------------------------------------

std::size_t AInfModule::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].name == name) return i;
  throw ArgumentError("unknown generator " + name);
}

std::set<std::size_t> AInfModule::act(
    std::size_t x, const std::vector<std::size_t>& word) const {
  bool has_idem = std::any_of(word.begin(), word.end(), [&](std::size_t a) {
    return algebra.is_idempotent(a);
  });
  if (has_idem) {
    // Strict unitality: m_2(x, iota) = x on the matching side, all other
    // actions with idempotent inputs vanish.
    if (word.size() == 1 && word[0] == generators[x].idem) return {x};
    return {};
  }
  if (!word.empty()) {
    if (algebra.basis[word[0]].left != generators[x].idem) return {};
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
      if (algebra.basis[word[i]].right != algebra.basis[word[i + 1]].left)
        return {};
  }
  auto it = actions.find({x, word});
  return it == actions.end() ? std::set<std::size_t>{} : it->second;
}

std::set<std::size_t> AInfModule::act(
    const std::set<std::size_t>& xs,
    const std::vector<std::size_t>& word) const {
  std::set<std::size_t> out;
  for (std::size_t x : xs) xor_into(out, act(x, word));
  return out;
}

ValidationReport check_module(const AInfModule& m) {
  ValidationReport report;
  const auto& A = m.algebra;
  for (const auto& g : m.generators)
    if (g.idem >= A.num_idempotents())
      throw StructureError("generator " + g.name + " has no valid idempotent");
  std::size_t max_arity = 0;
  for (const auto& [key, out] : m.actions) {
    const auto& [x, word] = key;
    if (x >= m.generators.size())
      throw StructureError("action table generator index out of range");
    max_arity = std::max(max_arity, word.size());
    for (std::size_t a : word)
      if (A.is_idempotent(a))
        report.violations.push_back("action table tabulates an idempotent "
                                    "input at " + m.generators[x].name);
    if (m.bounded && word.size() > m.arity_bound && !out.empty())
      report.violations.push_back(
          "bounded flag contradicted by a nonzero action of arity " +
          std::to_string(1 + word.size()));
    std::size_t end_idem = word.empty() ? m.generators[x].idem
                                        : A.basis[word.back()].right;
    for (std::size_t y : out) {
      if (y >= m.generators.size())
        throw StructureError("action table output index out of range");
      if (m.generators[y].idem != end_idem)
        report.violations.push_back("idempotent discipline fails in action on "
                                    + m.generators[x].name);
    }
  }
  std::size_t check_arity = (m.bounded ? m.arity_bound : max_arity) + 1;
  for (std::size_t x = 0; x < m.generators.size(); ++x)
    for (std::size_t n = 0; n <= check_arity; ++n) {
      std::vector<std::size_t> word;
      composable_words(A, m.generators[x].idem, n, word, [&]() {
        std::set<std::size_t> r;
        for (std::size_t i = 0; i <= word.size(); ++i)
          xor_into(r, m.act(m.act(x, prefix(word, i)), suffix(word, i)));
        input_expansions(A, word, [&](const std::vector<std::size_t>& w) {
          xor_into(r, m.act(x, w));
        });
        if (!r.empty())
          report.violations.push_back("module relation fails at (" +
                                      m.generators[x].name + ", arity " +
                                      std::to_string(1 + word.size()) + ")");
      });
    }
  return report;
}

std::set<std::size_t> AInfMorphism::eval(
    std::size_t x, const std::vector<std::size_t>& word) const {
  auto it = terms.find({x, word});
  return it == terms.end() ? std::set<std::size_t>{} : it->second;
}

std::set<std::size_t> AInfMorphism::eval(
    const std::set<std::size_t>& xs,
    const std::vector<std::size_t>& word) const {
  std::set<std::size_t> out;
  for (std::size_t x : xs) xor_into(out, eval(x, word));
  return out;
}

std::set<std::size_t> module_morphism_differential_at(
    const AInfModule& m, const AInfModule& n, const AInfMorphism& f,
    std::size_t x, const std::vector<std::size_t>& word) {
  std::set<std::size_t> r;
  for (std::size_t i = 0; i <= word.size(); ++i) {
    xor_into(r, f.eval(m.act(x, prefix(word, i)), suffix(word, i)));
    xor_into(r, n.act(f.eval(x, prefix(word, i)), suffix(word, i)));
  }
  input_expansions(m.algebra, word, [&](const std::vector<std::size_t>& w) {
    xor_into(r, f.eval(x, w));
  });
  return r;
}

std::set<std::size_t> module_morphism_compose_at(
    const AInfMorphism& f, const AInfMorphism& g, std::size_t x,
    const std::vector<std::size_t>& word) {
  std::set<std::size_t> r;
  for (std::size_t i = 0; i <= word.size(); ++i)
    xor_into(r, f.eval(g.eval(x, prefix(word, i)), suffix(word, i)));
  return r;
}

// ---- DA structures ---------------------------------------------------------

std::size_t DAStructure::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].name == name) return i;
  throw ArgumentError("unknown generator " + name);
}

DElt DAStructure::act(std::size_t x,
                      const std::vector<std::size_t>& word) const {
  bool has_idem = std::any_of(word.begin(), word.end(), [&](std::size_t b) {
    return right_algebra.is_idempotent(b);
  });
  if (has_idem) {
    if (word.size() == 1 && word[0] == generators[x].right_idem)
      return {{generators[x].left_idem, x}};
    return {};
  }
  if (!word.empty()) {
    if (right_algebra.basis[word[0]].left != generators[x].right_idem)
      return {};
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
      if (right_algebra.basis[word[i]].right !=
          right_algebra.basis[word[i + 1]].left)
        return {};
  }
  auto it = delta1k.find({x, word});
  return it == delta1k.end() ? DElt{} : it->second;
}

ValidationReport check_DA(const DAStructure& d) {
  ValidationReport report;
  const auto& A = d.left_algebra;
  const auto& B = d.right_algebra;
  std::size_t max_arity = 0;
  for (const auto& [key, out] : d.delta1k) {
    const auto& [x, word] = key;
    if (x >= d.generators.size())
      throw StructureError("delta1k generator index out of range");
    max_arity = std::max(max_arity, word.size());
    for (std::size_t b : word)
      if (B.is_idempotent(b))
        report.violations.push_back("delta1k tabulates an idempotent input at "
                                    + d.generators[x].name);
    if (d.higher_vanish && word.size() > d.arity_bound && !out.empty())
      report.violations.push_back(
          "operational-boundedness certificate contradicted at arity " +
          std::to_string(1 + word.size()));
    std::size_t end_idem = word.empty() ? d.generators[x].right_idem
                                        : B.basis[word.back()].right;
    for (const auto& [a, y] : out) {
      if (a >= A.basis.size() || y >= d.generators.size())
        throw StructureError("delta1k output out of range");
      if (A.basis[a].left != d.generators[x].left_idem ||
          A.basis[a].right != d.generators[y].left_idem ||
          d.generators[y].right_idem != end_idem)
        report.violations.push_back("idempotent discipline fails in delta1k(" +
                                    d.generators[x].name + ")");
    }
  }
  std::size_t check_arity = (d.higher_vanish ? d.arity_bound : max_arity) + 1;
  for (std::size_t x = 0; x < d.generators.size(); ++x)
    for (std::size_t n = 0; n <= check_arity; ++n) {
      std::vector<std::size_t> word;
      composable_words(B, d.generators[x].right_idem, n, word, [&]() {
        DElt r;
        for (const auto& [a, y] : d.act(x, word))
          for (std::size_t b : A.mu1(a)) xor_one(r, {b, y});
        for (std::size_t i = 0; i <= word.size(); ++i)
          for (const auto& [a1, y] : d.act(x, prefix(word, i)))
            for (const auto& [a2, z] : d.act(y, suffix(word, i)))
              for (std::size_t c : A.mu2(a1, a2)) xor_one(r, {c, z});
        input_expansions(B, word, [&](const std::vector<std::size_t>& w) {
          xor_into(r, d.act(x, w));
        });
        if (!r.empty())
          report.violations.push_back("DA structure equation fails at (" +
                                      d.generators[x].name + ", arity " +
                                      std::to_string(1 + word.size()) + ")");
      });
    }
  return report;
}

// ---- DD structures ---------------------------------------------------------

std::size_t DDStructure::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].name == name) return i;
  throw ArgumentError("unknown generator " + name);
}

ValidationReport check_DD(const DDStructure& d) {
  if (d.differential.size() != d.generators.size())
    throw StructureError("DD differential size does not match generators");
  ValidationReport report;
  const auto& A = d.algebra;
  const auto& Ap = d.algebra_prime;
  for (std::size_t i = 0; i < d.generators.size(); ++i) {
    for (const auto& [a, y, ap] : d.differential[i]) {
      if (a >= A.basis.size() || ap >= Ap.basis.size() ||
          y >= d.generators.size())
        throw StructureError("DD term out of range at " +
                             d.generators[i].name);
      if (A.basis[a].left != d.generators[i].idem ||
          A.basis[a].right != d.generators[y].idem ||
          Ap.basis[ap].left != d.generators[y].idem_prime ||
          Ap.basis[ap].right != d.generators[i].idem_prime)
        report.violations.push_back("idempotent discipline fails on " +
                                    A.basis[a].name + " (x) " +
                                    d.generators[y].name + " (x) " +
                                    Ap.basis[ap].name);
    }
    std::set<DDStructure::Term> residual;
    for (const auto& [a, y, ap] : d.differential[i]) {
      for (std::size_t b : A.mu1(a)) xor_one(residual, {b, y, ap});
      for (std::size_t bp : Ap.mu1(ap)) xor_one(residual, {a, y, bp});
      for (const auto& [b, z, bp] : d.differential[y])
        // The primed coefficients compose target-to-source: the second
        // step's output multiplies on the left.
        for (std::size_t c : A.mu2(a, b))
          for (std::size_t cp : Ap.mu2(bp, ap))
            xor_one(residual, {c, z, cp});
    }
    if (!residual.empty()) {
      auto [a, y, ap] = *residual.begin();
      report.violations.push_back(
          "DD structure equation fails at " + d.generators[i].name +
          " with leading term " + A.basis[a].name + " (x) " +
          d.generators[y].name + " (x) " + Ap.basis[ap].name);
    }
  }
  return report;
}

DDStructure dd_identity(const DgAlgebraPresentation& a,
                        const std::vector<std::size_t>& complement) {
  const std::size_t k = a.num_idempotents();
  if (complement.size() != k)
    throw ArgumentError("dd_identity: complement pairing size mismatch");
  for (std::size_t i = 0; i < k; ++i) {
    if (complement[i] >= k || complement[complement[i]] != i)
      throw ArgumentError("dd_identity: pairing is not an involution");
  }
  for (std::size_t c : a.designated_chords)
    if (c >= a.basis.size() || a.is_idempotent(c))
      throw ArgumentError("dd_identity: invalid designated chord");
  DDStructure d;
  d.algebra = a;
  d.algebra_prime = a.primed();
  for (std::size_t i = 0; i < k; ++i)
    d.generators.push_back({a.ground.idempotents[i] + "|" +
                                d.algebra_prime.ground.idempotents[complement[i]],
                            i, complement[i]});
  d.differential.resize(k);
  for (std::size_t xi : a.designated_chords) {
    std::size_t l = a.basis[xi].left, r = a.basis[xi].right;
    if (complement[l] == r) d.differential[l].insert({xi, r, xi});
  }
  auto report = check_DD(d);
  if (!report.ok())
    throw StructureError("dd_identity: " + report.violations.front());
  return d;
}

// ---- Filtered variants -----------------------------------------------------

const TypeDMorphism* FilteredTypeD::connector(std::size_t i,
                                              std::size_t j) const {
  auto it = connectors.find({i, j});
  return it == connectors.end() ? nullptr : &it->second;
}

ValidationReport check_filtered_typeD(const FilteredTypeD& f) {
  ValidationReport report;
  if (f.parts.size() != f.poset.size())
    throw StructureError("filtered type D: parts do not match the poset");
  for (std::size_t i = 0; i < f.parts.size(); ++i) {
    auto r = check_typeD(f.parts[i]);
    for (const auto& v : r.violations)
      report.violations.push_back("part " + f.poset.elements()[i] + ": " + v);
    if (i && !alg_equal(f.parts[i].algebra, f.parts[0].algebra))
      report.violations.push_back("parts are over different algebras");
  }
  if (!report.ok()) return report;
  for (const auto& [key, h] : f.connectors) {
    if (!f.poset.less(key.first, key.second))
      throw StructureError("connector on a non-comparable pair");
    if (h.terms.size() != f.parts[key.first].generators.size())
      throw StructureError("connector size mismatch at (" +
                           f.poset.elements()[key.first] + "," +
                           f.poset.elements()[key.second] + ")");
  }
  for (const auto& [i, k] : f.poset.comparable_pairs()) {
    const TypeDMorphism* h = f.connector(i, k);
    TypeDMorphism lhs = morphism_differential(
        f.parts[i], f.parts[k],
        h ? *h : zero_morphism(f.parts[i], f.parts[k]));
    TypeDMorphism rhs = zero_morphism(f.parts[i], f.parts[k]);
    for (std::size_t j = 0; j < f.poset.size(); ++j) {
      if (!(f.poset.less(i, j) && f.poset.less(j, k))) continue;
      const TypeDMorphism* hj = f.connector(j, k);
      const TypeDMorphism* hi = f.connector(i, j);
      if (!hj || !hi) continue;
      TypeDMorphism c =
          compose_typeD(f.parts[i], f.parts[j], f.parts[k], *hj, *hi);
      for (std::size_t x = 0; x < c.terms.size(); ++x)
        xor_into(rhs.terms[x], c.terms[x]);
    }
    for (std::size_t x = 0; x < lhs.terms.size(); ++x)
      if (lhs.terms[x] != rhs.terms[x]) {
        report.violations.push_back("compatibility fails at (" +
                                    f.poset.elements()[i] + "," +
                                    f.poset.elements()[k] + ")");
        break;
      }
  }
  return report;
}

const AInfMorphism* FilteredAInfModule::connector(std::size_t i,
                                                  std::size_t j) const {
  auto it = connectors.find({i, j});
  return it == connectors.end() ? nullptr : &it->second;
}

ValidationReport check_filtered_module(const FilteredAInfModule& f) {
  ValidationReport report;
  if (f.parts.size() != f.poset.size())
    throw StructureError("filtered module: parts do not match the poset");
  for (std::size_t i = 0; i < f.parts.size(); ++i) {
    auto r = check_module(f.parts[i]);
    for (const auto& v : r.violations)
      report.violations.push_back("part " + f.poset.elements()[i] + ": " + v);
    if (i && !alg_equal(f.parts[i].algebra, f.parts[0].algebra))
      report.violations.push_back("parts are over different algebras");
  }
  if (!report.ok()) return report;
  const AInfMorphism kZero;
  std::size_t arity = 1;
  for (const auto& p : f.parts) arity = std::max(arity, p.arity_bound);
  for (const auto& [key, c] : f.connectors) {
    if (!f.poset.less(key.first, key.second))
      throw StructureError("connector on a non-comparable pair");
    arity = std::max(arity, c.arity_bound);
  }
  for (const auto& [i, k] : f.poset.comparable_pairs()) {
    const AInfMorphism* F = f.connector(i, k);
    const auto& A = f.parts[i].algebra;
    bool bad = false;
    for (std::size_t x = 0; x < f.parts[i].generators.size() && !bad; ++x)
      for (std::size_t n = 0; n <= arity + 1 && !bad; ++n) {
        std::vector<std::size_t> word;
        composable_words(A, f.parts[i].generators[x].idem, n, word, [&]() {
          if (bad) return;
          auto lhs = module_morphism_differential_at(
              f.parts[i], f.parts[k], F ? *F : kZero, x, word);
          std::set<std::size_t> rhs;
          for (std::size_t j = 0; j < f.poset.size(); ++j) {
            if (!(f.poset.less(i, j) && f.poset.less(j, k))) continue;
            const AInfMorphism* Fj = f.connector(j, k);
            const AInfMorphism* Fi = f.connector(i, j);
            if (!Fj || !Fi) continue;
            xor_into(rhs, module_morphism_compose_at(*Fj, *Fi, x, word));
          }
          if (lhs != rhs) bad = true;
        });
      }
    if (bad)
      report.violations.push_back("compatibility fails at (" +
                                  f.poset.elements()[i] + "," +
                                  f.poset.elements()[k] + ")");
  }
  return report;
}

DElt DAMorphism::eval(std::size_t x,
                      const std::vector<std::size_t>& word) const {
  auto it = terms.find({x, word});
  return it == terms.end() ? DElt{} : it->second;
}

const DAMorphism* FilteredDAStructure::connector(std::size_t i,
                                                 std::size_t j) const {
  auto it = connectors.find({i, j});
  return it == connectors.end() ? nullptr : &it->second;
}

ValidationReport check_filtered_DA(const FilteredDAStructure& f) {
  ValidationReport report;
  if (f.parts.size() != f.poset.size())
    throw StructureError("filtered DA: parts do not match the poset");
  for (std::size_t i = 0; i < f.parts.size(); ++i) {
    auto r = check_DA(f.parts[i]);
    for (const auto& v : r.violations)
      report.violations.push_back("part " + f.poset.elements()[i] + ": " + v);
  }
  if (!report.ok()) return report;
  const DAMorphism kZero;
  std::size_t arity = 1;
  for (const auto& p : f.parts) arity = std::max(arity, p.arity_bound);
  for (const auto& [key, c] : f.connectors) {
    if (!f.poset.less(key.first, key.second))
      throw StructureError("connector on a non-comparable pair");
    arity = std::max(arity, c.arity_bound);
  }
  if (f.parts.empty()) return report;
  const auto& A = f.parts[0].left_algebra;
  for (const auto& [i, k] : f.poset.comparable_pairs()) {
    const DAMorphism* F = f.connector(i, k);
    const auto& B = f.parts[i].right_algebra;
    bool bad = false;
    for (std::size_t x = 0; x < f.parts[i].generators.size() && !bad; ++x)
      for (std::size_t n = 0; n <= arity + 1 && !bad; ++n) {
        std::vector<std::size_t> word;
        composable_words(B, f.parts[i].generators[x].right_idem, n, word,
                         [&]() {
          if (bad) return;
          const DAMorphism& Fm = F ? *F : kZero;
          DElt lhs;
          for (const auto& [a, y] : Fm.eval(x, word))
            for (std::size_t b : A.mu1(a)) xor_one(lhs, {b, y});
          for (std::size_t s = 0; s <= word.size(); ++s) {
            for (const auto& [a1, y] : f.parts[i].act(x, prefix(word, s)))
              for (const auto& [a2, z] : Fm.eval(y, suffix(word, s)))
                for (std::size_t c : A.mu2(a1, a2)) xor_one(lhs, {c, z});
            for (const auto& [a1, y] : Fm.eval(x, prefix(word, s)))
              for (const auto& [a2, z] : f.parts[k].act(y, suffix(word, s)))
                for (std::size_t c : A.mu2(a1, a2)) xor_one(lhs, {c, z});
          }
          input_expansions(B, word, [&](const std::vector<std::size_t>& w) {
            xor_into(lhs, Fm.eval(x, w));
          });
          DElt rhs;
          for (std::size_t j = 0; j < f.poset.size(); ++j) {
            if (!(f.poset.less(i, j) && f.poset.less(j, k))) continue;
            const DAMorphism* Fj = f.connector(j, k);
            const DAMorphism* Fi = f.connector(i, j);
            if (!Fj || !Fi) continue;
            for (std::size_t s = 0; s <= word.size(); ++s)
              for (const auto& [a1, y] : Fi->eval(x, prefix(word, s)))
                for (const auto& [a2, z] : Fj->eval(y, suffix(word, s)))
                  for (std::size_t c : A.mu2(a1, a2)) xor_one(rhs, {c, z});
          }
          if (lhs != rhs) bad = true;
        });
      }
    if (bad)
      report.violations.push_back("compatibility fails at (" +
                                  f.poset.elements()[i] + "," +
                                  f.poset.elements()[k] + ")");
  }
  return report;
}

// ---- Box tensor products ---------------------------------------------------

F2Complex box_tensor(const AInfModule& m, const TypeDStructure& p) {
  if (!alg_equal(m.algebra, p.algebra))
    throw ArgumentError("box_tensor: algebra mismatch");
  std::size_t cap;
  if (m.bounded)
    // The unit acts through length-1 idempotent words even at arity bound 0.
    cap = std::max<std::size_t>(m.arity_bound, 1);
  else if (typeD_is_bounded(p))
    cap = p.generators.size();
  else
    throw BoundednessError("box_tensor: neither factor is bounded");

  std::vector<F2Complex::Gen> gens;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> row;
  for (std::size_t x = 0; x < m.generators.size(); ++x)
    for (std::size_t y = 0; y < p.generators.size(); ++y)
      if (m.generators[x].idem == p.generators[y].idem) {
        row[{x, y}] = gens.size();
        gens.push_back(
            {m.generators[x].name + "*" + p.generators[y].name, std::nullopt});
      }

  F2Matrix d(gens.size(), gens.size());
  for (const auto& [pair, c] : row) {
    auto [x, y] = pair;
    std::set<std::size_t> column;
    std::vector<std::size_t> word;
    std::function<void(std::size_t)> dfs = [&](std::size_t yc) {
      for (std::size_t xp : m.act(x, word)) {
        auto it = row.find({xp, yc});
        if (it == row.end())
          throw StructureError("box_tensor: idempotent bookkeeping violated");
        xor_one(column, it->second);
      }
      if (word.size() >= cap) return;
      for (const auto& [a, yn] : p.delta1[yc]) {
        word.push_back(a);
        dfs(yn);
        word.pop_back();
      }
    };
    dfs(y);
    d.set_col(c, {column.begin(), column.end()});
  }
  return F2Complex(std::move(gens), std::move(d));  // validates d^2 = 0
}

TypeDStructure box_tensor_DD(const AInfModule& m, const DDStructure& dd) {
  if (!alg_equal(m.algebra, dd.algebra))
    throw ArgumentError("box_tensor_DD: algebra mismatch");
  std::size_t cap;
  bool dd_acyclic = [&] {
    std::vector<int> color(dd.generators.size(), 0);
    std::function<bool(std::size_t)> has_cycle = [&](std::size_t v) {
      color[v] = 1;
      for (const auto& [a, y, ap] : dd.differential[v]) {
        (void)a;
        (void)ap;
        if (color[y] == 1) return true;
        if (color[y] == 0 && has_cycle(y)) return true;
      }
      color[v] = 2;
      return false;
    };
    for (std::size_t v = 0; v < dd.generators.size(); ++v)
      if (color[v] == 0 && has_cycle(v)) return false;
    return true;
  }();
  if (m.bounded)
    cap = std::max<std::size_t>(m.arity_bound, 1);
  else if (dd_acyclic)
    cap = dd.generators.size();
  else
    throw BoundednessError("box_tensor_DD: neither factor is bounded");

  TypeDStructure out;
  out.algebra = opposite_algebra(dd.algebra_prime);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> row;
  for (std::size_t x = 0; x < m.generators.size(); ++x)
    for (std::size_t g = 0; g < dd.generators.size(); ++g)
      if (m.generators[x].idem == dd.generators[g].idem) {
        row[{x, g}] = out.generators.size();
        out.generators.push_back({m.generators[x].name + "*" +
                                      dd.generators[g].name,
                                  dd.generators[g].idem_prime});
      }
  out.delta1.resize(out.generators.size());
  for (const auto& [pair, src] : row) {
    auto [x, g0] = pair;
    DElt acc;
    std::vector<std::size_t> word;
    // Primed coefficients compose target-to-source; start from the unit at
    // the source idempotent.
    std::function<void(std::size_t, const AlgElt&)> dfs =
        [&](std::size_t gc, const AlgElt& primed) {
      for (std::size_t xp : m.act(x, word))
        for (std::size_t c : primed) {
          auto it = row.find({xp, gc});
          if (it == row.end())
            throw StructureError(
                "box_tensor_DD: idempotent bookkeeping violated");
          xor_one(acc, {c, it->second});
        }
      if (word.size() >= cap) return;
      for (const auto& [a, gn, ap] : dd.differential[gc]) {
        word.push_back(a);
        dfs(gn, dd.algebra_prime.mu2(AlgElt{ap}, primed));
        word.pop_back();
      }
    };
    dfs(g0, AlgElt{dd.generators[g0].idem_prime});
    out.delta1[src] = std::move(acc);
  }
  auto report = check_typeD(out);
  if (!report.ok())
    throw StructureError("box_tensor_DD: result fails the structure "
                         "equation: " + report.violations.front());
  return out;
}

FilteredComplex filtered_box_tensor(const FilteredAInfModule& m,
                                    const FilteredTypeD& p) {
  if (m.parts.empty() || p.parts.empty())
    throw ArgumentError("filtered_box_tensor: empty factor");
  for (const auto& mp : m.parts)
    if (!alg_equal(mp.algebra, p.parts[0].algebra))
      throw ArgumentError("filtered_box_tensor: algebra mismatch");

  bool m_bounded = std::all_of(m.parts.begin(), m.parts.end(),
                               [](const AInfModule& q) { return q.bounded; });
  bool p_bounded = std::all_of(p.parts.begin(), p.parts.end(),
                               typeD_is_bounded);
  std::size_t cap = 0;
  if (m_bounded) {
    cap = 1;  // length-1 idempotent words carry the unit action
    for (const auto& q : m.parts) cap = std::max(cap, q.arity_bound);
    for (const auto& [key, c] : m.connectors)
      cap = std::max(cap, c.arity_bound);
  } else if (p_bounded) {
    for (const auto& q : p.parts) cap += q.generators.size();
    cap += p.poset.size();
  } else {
    throw BoundednessError("filtered_box_tensor: neither factor is bounded");
  }

  FilteredComplex out;
  out.poset = FinitePoset::product(m.poset, p.poset);
  const std::size_t nj = p.poset.size();
  // Generator row maps per product part.
  std::vector<std::map<std::pair<std::size_t, std::size_t>, std::size_t>> rows(
      out.poset.size());
  for (std::size_t i = 0; i < m.poset.size(); ++i)
    for (std::size_t j = 0; j < nj; ++j) {
      out.parts.push_back(box_tensor(m.parts[i], p.parts[j]));
      auto& r = rows[i * nj + j];
      for (std::size_t x = 0; x < m.parts[i].generators.size(); ++x)
        for (std::size_t y = 0; y < p.parts[j].generators.size(); ++y)
          if (m.parts[i].generators[x].idem == p.parts[j].generators[y].idem)
            r[{x, y}] = r.size();
    }

  const AInfMorphism kZeroF;
  for (const auto& [src, dst] : out.poset.comparable_pairs()) {
    std::size_t i = src / nj, j = src % nj;
    std::size_t ip = dst / nj, jp = dst % nj;
    F2Matrix conn(out.parts[dst].size(), out.parts[src].size());
    for (const auto& [pair, c] : rows[src]) {
      auto [x, y] = pair;
      std::set<std::size_t> column;
      std::vector<std::size_t> word;
      std::function<void(std::size_t, std::size_t)> dfs =
          [&](std::size_t jc, std::size_t yc) {
        if (jc == jp) {
          std::set<std::size_t> targets;
          if (i == ip) {
            targets = m.parts[i].act(x, word);
          } else {
            const AInfMorphism* F = m.connector(i, ip);
            targets = (F ? *F : kZeroF).eval(x, word);
          }
          for (std::size_t xp : targets) {
            auto it = rows[dst].find({xp, yc});
            if (it == rows[dst].end())
              throw StructureError(
                  "filtered_box_tensor: idempotent bookkeeping violated");
            xor_one(column, it->second);
          }
        }
        if (word.size() >= cap) return;
        for (const auto& [a, yn] : p.parts[jc].delta1[yc]) {
          word.push_back(a);
          dfs(jc, yn);
          word.pop_back();
        }
        for (std::size_t jn = 0; jn < nj; ++jn) {
          if (!p.poset.less(jc, jn)) continue;
          if (jn != jp && !p.poset.less(jn, jp)) continue;
          const TypeDMorphism* h = p.connector(jc, jn);
          if (!h) continue;
          for (const auto& [a, yn] : h->terms[yc]) {
            word.push_back(a);
            dfs(jn, yn);
            word.pop_back();
          }
        }
      };
      dfs(j, y);
      conn.set_col(c, {column.begin(), column.end()});
    }
    if (!conn.is_zero()) out.connectors[{src, dst}] = std::move(conn);
  }
  auto report = validate_filtered(out);
  if (!report.ok())
    throw StructureError("filtered_box_tensor: result fails validation: " +
                         report.violations.front());
  return out;
}

// ---- Twisted complexes -----------------------------------------------------

namespace {

// Looks up a multilinear product on a basis argument tuple; zero if absent.
std::set<std::size_t> poly_eval(const PolygonFamily& fam,
                                const std::vector<PolyGen>& args) {
  auto it = fam.products.find(args);
  return it == fam.products.end() ? std::set<std::size_t>{} : it->second;
}

}  // namespace

ValidationReport twisted_complex_validate(const PolygonFamily& family,
                                          const ChainAssignment& chains,
                                          const AlphaModuleData* alpha,
                                          FilteredComplex* out) {
  ValidationReport report;
  const auto& P = family.poset;
  auto group_size = [&](std::size_t i, std::size_t j) -> std::size_t {
    auto it = family.groups.find({i, j});
    return it == family.groups.end() ? 0 : it->second.size();
  };

  // Table discipline.
  std::size_t max_arity = 1;
  for (const auto& [args, outset] : family.products) {
    if (args.empty()) throw ArgumentError("empty product key");
    max_arity = std::max(max_arity, args.size());
    bool fine = true;
    for (std::size_t t = 0; t < args.size(); ++t) {
      auto [pr, idx] = args[t];
      if (!P.less(pr.first, pr.second) || idx >= group_size(pr.first,
                                                            pr.second))
        fine = false;
      if (t + 1 < args.size() && args[t].first.first != args[t + 1].first.second)
        fine = false;
    }
    std::size_t lo = args.back().first.first, hi = args.front().first.second;
    for (std::size_t o : outset)
      if (o >= group_size(lo, hi)) fine = false;
    if (!fine) {
      report.violations.push_back("malformed product table entry");
      return report;
    }
  }

  // A-infinity relation of the tables, up to the tabulated arity.
  std::vector<PolyGen> all;
  for (const auto& [pr, names] : family.groups)
    for (std::size_t idx = 0; idx < names.size(); ++idx)
      all.push_back({pr, idx});
  std::vector<PolyGen> seq;
  std::function<void()> relation_check = [&]() {
    std::map<std::pair<std::size_t, std::size_t>, std::set<std::size_t>> r;
    for (std::size_t k = 1; k <= seq.size(); ++k)
      for (std::size_t l = 0; l + k <= seq.size(); ++l) {
        std::vector<PolyGen> inner(seq.begin() + l, seq.begin() + l + k);
        std::size_t lo = inner.back().first.first,
                    hi = inner.front().first.second;
        for (std::size_t b : poly_eval(family, inner)) {
          std::vector<PolyGen> outer(seq.begin(), seq.begin() + l);
          outer.push_back({{lo, hi}, b});
          outer.insert(outer.end(), seq.begin() + l + k, seq.end());
          std::size_t olo = outer.back().first.first,
                      ohi = outer.front().first.second;
          xor_into(r[{olo, ohi}], poly_eval(family, outer));
        }
      }
    for (const auto& [pr, s] : r)
      if (!s.empty()) {
        report.violations.push_back(
            "input-data error: multilinear relation fails on a sequence of "
            "length " + std::to_string(seq.size()));
        return;
      }
  };
  std::function<void(std::size_t)> extend = [&](std::size_t len) {
    if (!seq.empty()) relation_check();
    if (seq.size() == len || !report.ok()) return;
    for (const auto& g : all) {
      // seq lists arguments in application order (descending); the next
      // argument sits to the right and must end where the last one starts.
      if (!seq.empty() && seq.back().first.first != g.first.second) continue;
      seq.push_back(g);
      extend(len);
      seq.pop_back();
      if (!report.ok()) return;
    }
  };
  extend(max_arity);
  if (!report.ok()) return report;

  // Maurer-Cartan compatibility of the chains (descending chain sums).
  auto chain_at = [&](std::size_t i, std::size_t j) -> std::set<std::size_t> {
    auto it = chains.find({i, j});
    return it == chains.end() ? std::set<std::size_t>{} : it->second;
  };
  for (const auto& [i, j] : P.comparable_pairs()) {
    std::set<std::size_t> r;
    // Enumerate chains i = i_0 < ... < i_n = j and expand multilinearly.
    std::vector<std::size_t> nodes{i};
    std::function<void()> walk = [&]() {
      std::size_t last = nodes.back();
      if (last == j) {
        // Expand the eta's over this chain into argument tuples.
        std::vector<PolyGen> args(nodes.size() - 1,
                                  PolyGen{{0, 0}, 0});
        std::function<void(std::size_t)> pick = [&](std::size_t t) {
          if (t + 1 == nodes.size()) {
            xor_into(r, poly_eval(family, args));
            return;
          }
          // Argument tuple is descending: slot t holds the step
          // (i_{n-1-t}, i_{n-t}).
          std::size_t a = nodes[nodes.size() - 2 - t],
                      b = nodes[nodes.size() - 1 - t];
          for (std::size_t idx : chain_at(a, b)) {
            args[t] = {{a, b}, idx};
            pick(t + 1);
          }
        };
        pick(0);
        return;
      }
      for (std::size_t next = 0; next < P.size(); ++next) {
        if (!P.less(last, next)) continue;
        if (next != j && !P.less(next, j)) continue;
        nodes.push_back(next);
        walk();
        nodes.pop_back();
      }
    };
    walk();
    if (!r.empty())
      report.violations.push_back("compatibility fails at (" +
                                  P.elements()[i] + "," + P.elements()[j] +
                                  ")");
  }

  if (alpha && report.ok()) {
    FilteredComplex fc;
    fc.poset = P;
    auto mod_eval = [&](const std::vector<PolyGen>& args, std::size_t part,
                        std::size_t x) -> std::set<std::size_t> {
      auto it = alpha->tables.find({args, {part, x}});
      return it == alpha->tables.end() ? std::set<std::size_t>{} : it->second;
    };
    bool built = true;
    for (std::size_t i = 0; i < P.size(); ++i) {
      std::vector<F2Complex::Gen> gens;
      auto git = alpha->groups.find(i);
      if (git != alpha->groups.end())
        for (const auto& n : git->second) gens.push_back({n, std::nullopt});
      F2Matrix d(gens.size(), gens.size());
      for (std::size_t x = 0; x < gens.size(); ++x)
        for (std::size_t o : mod_eval({}, i, x)) d.flip(o, x);
      try {
        fc.parts.emplace_back(std::move(gens), std::move(d));
      } catch (const StructureError& e) {
        report.violations.push_back("alpha module at " + P.elements()[i] +
                                    ": " + e.what());
        built = false;
      }
    }
    if (built) {
      for (const auto& [i, j] : P.comparable_pairs()) {
        F2Matrix conn(fc.parts[j].size(), fc.parts[i].size());
        for (std::size_t x = 0; x < fc.parts[i].size(); ++x) {
          std::set<std::size_t> column;
          std::vector<std::size_t> nodes{i};
          std::function<void()> walk = [&]() {
            std::size_t last = nodes.back();
            if (last == j) {
              std::vector<PolyGen> args(nodes.size() - 1, PolyGen{{0, 0}, 0});
              std::function<void(std::size_t)> pick = [&](std::size_t t) {
                if (t + 1 == nodes.size()) {
                  xor_into(column, mod_eval(args, i, x));
                  return;
                }
                std::size_t a = nodes[nodes.size() - 2 - t],
                            b = nodes[nodes.size() - 1 - t];
                auto it = chains.find({a, b});
                if (it == chains.end()) return;
                for (std::size_t idx : it->second) {
                  args[t] = {{a, b}, idx};
                  pick(t + 1);
                }
              };
              pick(0);
              return;
            }
            for (std::size_t next = 0; next < P.size(); ++next) {
              if (!P.less(last, next)) continue;
              if (next != j && !P.less(next, j)) continue;
              nodes.push_back(next);
              walk();
              nodes.pop_back();
            }
          };
          walk();
          conn.set_col(x, {column.begin(), column.end()});
        }
        if (!conn.is_zero()) fc.connectors[{i, j}] = std::move(conn);
      }
      auto vr = validate_filtered(fc);
      for (const auto& v : vr.violations)
        report.violations.push_back("alpha module: " + v);
      if (out && vr.ok()) *out = std::move(fc);
    }
  }
  return report;
}

// ---- Connected sums --------------------------------------------------------

ChainFamilyData connected_sum_chains(
    const ChainFamilyData& left, const ChainFamilyData& right,
    const std::map<std::string, std::string>& nearest_point) {
  // The correspondence must not glue distinct tensor generators together.
  std::set<std::string> images;
  for (const auto& [from, to] : nearest_point) {
    (void)from;
    if (!images.insert(to).second)
      throw ArgumentError("connected_sum_chains: correspondence is not "
                          "injective on " + to);
  }
  auto rename = [&](const std::string& l, const std::string& r) {
    std::string t = l + "*" + r;
    auto it = nearest_point.find(t);
    return it == nearest_point.end() ? t : it->second;
  };

  ChainFamilyData out;
  out.poset = FinitePoset::product(left.poset, right.poset);
  out.theta = rename(left.theta, right.theta);
  const std::size_t nj = right.poset.size();
  for (const auto& [src, dst] : out.poset.comparable_pairs()) {
    std::size_t i0 = src / nj, j0 = src % nj;
    std::size_t i1 = dst / nj, j1 = dst % nj;
    std::set<std::string> omega;
    if (i0 == i1) {
      auto it = right.chains.find({j0, j1});
      if (it != right.chains.end())
        for (const auto& z : it->second) omega.insert(rename(left.theta, z));
    } else if (j0 == j1) {
      auto it = left.chains.find({i0, i1});
      if (it != left.chains.end())
        for (const auto& h : it->second) omega.insert(rename(h, right.theta));
    }
    // Both coordinates strictly increasing: omega vanishes.
    if (!omega.empty()) out.chains[{src, dst}] = std::move(omega);
  }
  return out;
}

}  // namespace bordered
