#include "bordered/algebra.hpp"

#include <algorithm>

namespace bordered {

namespace {

void xor_into(AlgElt& acc, const AlgElt& v) {
  for (std::size_t i : v) {
    auto [it, inserted] = acc.insert(i);
    if (!inserted) acc.erase(it);
  }
}

}  // namespace

std::size_t DgAlgebraPresentation::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i].name == name) return i;
  throw ArgumentError("unknown basis element " + name);
}

AlgElt DgAlgebraPresentation::mu1(std::size_t a) const {
  auto it = mu1_table.find(a);
  return it == mu1_table.end() ? AlgElt{} : it->second;
}

AlgElt DgAlgebraPresentation::mu1(const AlgElt& a) const {
  AlgElt out;
  for (std::size_t i : a) xor_into(out, mu1(i));
  return out;
}

AlgElt DgAlgebraPresentation::mu2(std::size_t a, std::size_t b) const {
  if (is_idempotent(a)) return (a == basis[b].left) ? AlgElt{b} : AlgElt{};
  if (is_idempotent(b)) return (basis[a].right == b) ? AlgElt{a} : AlgElt{};
  if (basis[a].right != basis[b].left) return {};
  auto it = mu2_table.find({a, b});
  return it == mu2_table.end() ? AlgElt{} : it->second;
}

AlgElt DgAlgebraPresentation::mu2(const AlgElt& a, const AlgElt& b) const {
  AlgElt out;
  for (std::size_t i : a)
    for (std::size_t j : b) xor_into(out, mu2(i, j));
  return out;
}

DgAlgebraPresentation DgAlgebraPresentation::primed(
    const std::string& suffix) const {
  DgAlgebraPresentation q = *this;
  for (auto& name : q.ground.idempotents) name += suffix;
  for (auto& b : q.basis) b.name += suffix;
  return q;
}

DgAlgebraPresentation opposite_algebra(const DgAlgebraPresentation& p) {
  DgAlgebraPresentation q = p;
  for (auto& b : q.basis) std::swap(b.left, b.right);
  q.mu2_table.clear();
  for (const auto& [key, out] : p.mu2_table)
    q.mu2_table[{key.second, key.first}] = out;
  return q;
}

ValidationReport validate_algebra(const DgAlgebraPresentation& p) {
  ValidationReport report;
  auto fail = [&](const std::string& msg) { report.violations.push_back(msg); };
  const std::size_t n = p.basis.size();
  const std::size_t k = p.num_idempotents();

  if (k == 0) fail("no idempotents");
  if (n < k) fail("basis must contain the idempotents");
  if (p.augmentation.size() != n) fail("augmentation size mismatch");
  if (!report.ok()) return report;

  for (std::size_t i = 0; i < k; ++i) {
    if (p.basis[i].left != i || p.basis[i].right != i)
      fail("idempotent " + p.basis[i].name + " must have itself on both sides");
    if (p.augmentation[i] != 1)
      fail("augmentation must send idempotent " + p.basis[i].name + " to 1");
    if (!p.mu1(i).empty()) fail("mu1 of an idempotent must vanish");
  }

  // mu1 discipline: outputs keep the idempotent pattern; mu1^2 = 0.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t out : p.mu1(a)) {
      if (p.basis[out].left != p.basis[a].left ||
          p.basis[out].right != p.basis[a].right)
        fail("mu1(" + p.basis[a].name + ") breaks idempotent bookkeeping");
    }
    if (!p.mu1(p.mu1(a)).empty())
      fail("mu1^2 nonzero on " + p.basis[a].name);
  }

  // mu2 table discipline.
  for (const auto& [key, out] : p.mu2_table) {
    auto [a, b] = key;
    if (p.is_idempotent(a) || p.is_idempotent(b)) {
      fail("mu2 table must not tabulate unit actions");
      continue;
    }
    if (p.basis[a].right != p.basis[b].left && !out.empty())
      fail("mu2(" + p.basis[a].name + "," + p.basis[b].name +
           ") nonzero despite mismatched idempotents");
    for (std::size_t c : out)
      if (p.basis[c].left != p.basis[a].left ||
          p.basis[c].right != p.basis[b].right)
        fail("mu2(" + p.basis[a].name + "," + p.basis[b].name +
             ") output breaks idempotent bookkeeping");
  }

  // Associativity, exhaustively over basis triples.
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        AlgElt lhs = p.mu2(p.mu2(a, b), AlgElt{c});
        AlgElt rhs = p.mu2(AlgElt{a}, p.mu2(b, c));
        if (lhs != rhs)
          fail("associativity fails on (" + p.basis[a].name + "," +
               p.basis[b].name + "," + p.basis[c].name + ")");
      }

  // Leibniz: mu1 mu2(a,b) = mu2(mu1 a, b) + mu2(a, mu1 b).
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      AlgElt lhs = p.mu1(p.mu2(a, b));
      AlgElt rhs = p.mu2(p.mu1(a), AlgElt{b});
      xor_into(rhs, p.mu2(AlgElt{a}, p.mu1(b)));
      if (lhs != rhs)
        fail("derivation rule fails on (" + p.basis[a].name + "," +
             p.basis[b].name + ")");
    }

  // Augmentation is a map of algebras to the ground ring, vanishing on mu1
  // images; designated chords lie in the augmentation ideal.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t out : p.mu1(a))
      if (p.augmentation[out])
        fail("augmentation does not kill mu1 image of " + p.basis[a].name);
    for (std::size_t b = 0; b < n; ++b) {
      int lhs = 0;
      for (std::size_t c : p.mu2(a, b)) lhs ^= p.augmentation[c];
      int rhs = (p.augmentation[a] & p.augmentation[b]) &&
                        p.basis[a].right == p.basis[b].left
                    ? 1
                    : 0;
      if (lhs != rhs)
        fail("augmentation is not multiplicative on (" + p.basis[a].name +
             "," + p.basis[b].name + ")");
    }
  }
  for (std::size_t c : p.designated_chords) {
    if (c >= n)
      fail("designated chord index out of range");
    else if (p.augmentation[c])
      fail("designated chord " + p.basis[c].name +
           " is not in the augmentation ideal");
  }
  return report;
}

DgAlgebraPresentation torus_algebra() {
  DgAlgebraPresentation p;
  p.ground.idempotents = {"iota0", "iota1"};
  // Index layout: 0 iota0, 1 iota1, 2 rho1, 3 rho2, 4 rho3, 5 rho12,
  // 6 rho23, 7 rho123.
  p.basis = {
      {"iota0", 0, 0}, {"iota1", 1, 1},
      {"rho1", 0, 1},  {"rho2", 1, 0},  {"rho3", 0, 1},
      {"rho12", 0, 0}, {"rho23", 1, 1}, {"rho123", 0, 1},
  };
  p.mu2_table[{2, 3}] = {5};  // rho1 rho2 = rho12
  p.mu2_table[{3, 4}] = {6};  // rho2 rho3 = rho23
  p.mu2_table[{2, 6}] = {7};  // rho1 rho23 = rho123
  p.mu2_table[{5, 4}] = {7};  // rho12 rho3 = rho123
  p.designated_chords = {2, 3, 4, 5, 6, 7};
  p.augmentation = {1, 1, 0, 0, 0, 0, 0, 0};
  return p;
}

std::size_t circles_after_surgery(const PointedMatchedCircle& z) {
  // Cut the circle into arcs a_j (from point j to point j+1).  Surgery at
  // every matched pair rewires arc a_j to continue at the arc starting at
  // the match of point j+1.  Circles = cycles of that permutation.
  std::size_t n = z.points;
  std::vector<bool> seen(n, false);
  std::size_t circles = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++circles;
    std::size_t j = start;
    while (!seen[j]) {
      seen[j] = true;
      j = z.matching[(j + 1) % n];
    }
  }
  return circles;
}

PointedMatchedCircle linear_pmc(std::size_t genus) {
  if (genus < 1) throw ArgumentError("linear_pmc: genus must be >= 1");
  std::size_t k2 = 2 * genus;  // number of handles
  PointedMatchedCircle z;
  z.points = 4 * genus;
  z.matching.assign(z.points, 0);
  auto pair = [&](std::size_t a, std::size_t b) {
    z.matching[a] = b;
    z.matching[b] = a;
  };
  // Chained handle feet: handle 1 at {0, 2}, handle j at {2j-3, 2j} for
  // 1 < j < 2k, handle 2k at {4k-3, 4k-1}.
  pair(0, 2);
  for (std::size_t j = 2; j < k2; ++j) pair(2 * j - 3, 2 * j);
  if (k2 >= 2) pair(4 * genus - 3, 4 * genus - 1);
  if (circles_after_surgery(z) != 1)
    throw StructureError("linear_pmc: surgery condition failed");
  return z;
}

PointedMatchedCircle opposite_pmc(const PointedMatchedCircle& z) {
  PointedMatchedCircle o;
  o.points = z.points;
  o.matching.assign(z.points, 0);
  for (std::size_t p = 0; p < z.points; ++p) {
    std::size_t q = z.matching[p];
    o.matching[z.points - 1 - p] = z.points - 1 - q;
  }
  return o;
}

}  // namespace bordered
