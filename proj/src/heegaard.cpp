#include "bordered/heegaard.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "bordered/f2.hpp"

namespace bordered {

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw ArgumentError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return {num * o.den + o.num * den, den * o.den};
}
Rational Rational::operator-(const Rational& o) const {
  return {num * o.den - o.num * den, den * o.den};
}
Rational Rational::operator*(const Rational& o) const {
  return {num * o.num, den * o.den};
}
Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw ArgumentError("rational division by zero");
  return {num * o.den, den * o.num};
}
bool Rational::operator<(const Rational& o) const {
  return num * o.den < o.num * den;
}
std::string Rational::str() const {
  std::ostringstream os;
  os << num;
  if (den != 1) os << '/' << den;
  return os.str();
}

// ---------------------------------------------------------------------------
// Orderings

bool CurveId::operator<(const CurveId& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (family != o.family) return family < o.family;
  return curve < o.curve;
}

bool Chord::operator<(const Chord& o) const {
  if (boundary != o.boundary) return boundary < o.boundary;
  if (start != o.start) return start < o.start;
  return end < o.end;
}

// ---------------------------------------------------------------------------
// Diagram finalization

namespace {

std::size_t dart_id(Dart d) { return 2 * d.edge + (d.forward ? 0 : 1); }
Dart dart_from_id(std::size_t id) { return {id / 2, id % 2 == 0}; }

void fail(const std::string& what) { throw StructureError("diagram: " + what); }

}  // namespace

void HeegaardMultiDiagram::finalize() {
  const std::size_t E = edges.size();
  if (rotations.size() != num_vertices)
    fail("rotation list count differs from vertex count");
  if (beta_labels.size() != beta_counts.size())
    fail("beta family labels and counts differ in length");

  // Every dart appears exactly once, in the rotation of its base vertex.
  std::vector<std::pair<std::size_t, std::size_t>> dart_pos(
      2 * E, {SIZE_MAX, SIZE_MAX});  // dart id -> (vertex, slot)
  for (std::size_t v = 0; v < num_vertices; ++v) {
    for (std::size_t s = 0; s < rotations[v].size(); ++s) {
      Dart d = rotations[v][s];
      if (d.edge >= E) fail("rotation refers to a missing edge");
      if (dart_base(d) != v) fail("dart listed at a vertex it does not leave");
      if (dart_pos[dart_id(d)].first != SIZE_MAX)
        fail("dart listed twice in the rotation system");
      dart_pos[dart_id(d)] = {v, s};
    }
  }
  for (std::size_t id = 0; id < 2 * E; ++id)
    if (dart_pos[id].first == SIZE_MAX)
      fail("dart missing from the rotation system");

  // Face permutation: the face on the left of d continues along the dart
  // preceding reverse(d) in the counterclockwise rotation at the tip of d.
  auto next_in_face = [&](Dart d) {
    Dart r = reverse(d);
    auto [v, s] = dart_pos[dart_id(r)];
    const auto& rot = rotations[v];
    return rot[(s + rot.size() - 1) % rot.size()];
  };

  regions.clear();
  region_of_dart_.assign(2 * E, SIZE_MAX);
  for (std::size_t id = 0; id < 2 * E; ++id) {
    if (region_of_dart_[id] != SIZE_MAX) continue;
    Region face;
    Dart d = dart_from_id(id);
    do {
      if (region_of_dart_[dart_id(d)] != SIZE_MAX)
        fail("face traversal revisits a dart; rotation system is inconsistent");
      region_of_dart_[dart_id(d)] = regions.size();
      face.cycle.push_back(d);
      d = next_in_face(d);
    } while (dart_id(d) != id);
    regions.push_back(std::move(face));
  }

  // Corner counts, both per face and per vertex (for transversality).
  std::vector<std::size_t> vertex_corners(num_vertices, 0);
  for (auto& face : regions) {
    for (std::size_t i = 0; i < face.cycle.size(); ++i) {
      Dart d1 = face.cycle[i];
      Dart d2 = face.cycle[(i + 1) % face.cycle.size()];
      if (curve_of(d1) != curve_of(d2)) {
        ++face.corners;
        ++vertex_corners[dart_base(d2)];
      }
    }
  }

  // Outer faces: entirely backward boundary darts (boundary circles are
  // oriented with the surface on their left).
  std::vector<std::size_t> outer_of_component(boundaries.size(), SIZE_MAX);
  std::size_t outer_count = 0;
  for (std::size_t f = 0; f < regions.size(); ++f) {
    auto& face = regions[f];
    bool all_boundary = true;
    for (Dart d : face.cycle)
      if (curve_of(d).kind != CurveKind::Boundary || d.forward)
        all_boundary = false;
    if (!all_boundary) continue;
    face.outer = true;
    ++outer_count;
    std::size_t comp = curve_of(face.cycle.front()).curve;
    for (Dart d : face.cycle)
      if (curve_of(d).curve != comp)
        fail("outer face mixes two boundary components");
    if (comp >= boundaries.size()) fail("boundary component index out of range");
    if (outer_of_component[comp] != SIZE_MAX)
      fail("boundary component bounds two outer faces");
    outer_of_component[comp] = f;
  }
  if (outer_count != boundaries.size())
    fail("outer face count differs from declared boundary count");
  for (std::size_t e = 0; e < E; ++e)
    if (edges[e].curve.kind == CurveKind::Boundary &&
        !regions[region_of_dart_[dart_id({e, false})]].outer)
      fail("boundary edge has the surface on its right");

  // Euler characteristic against declared genus and boundary count.
  long long chi = static_cast<long long>(num_vertices) -
                  static_cast<long long>(E) +
                  static_cast<long long>(regions.size() - outer_count);
  long long expected =
      2 - 2 * static_cast<long long>(genus) -
      static_cast<long long>(boundaries.size());
  if (chi != expected)
    fail("Euler characteristic " + std::to_string(chi) +
         " does not match declared genus and boundary count");

  // Transversality at interior vertices: corners = 2 valence - 4.
  std::vector<bool> on_boundary(num_vertices, false);
  for (const auto& e : edges)
    if (e.curve.kind == CurveKind::Boundary)
      on_boundary[e.tail] = on_boundary[e.head] = true;
  for (std::size_t v = 0; v < num_vertices; ++v) {
    if (on_boundary[v]) continue;
    std::size_t k = rotations[v].size();
    if (vertex_corners[v] + 4 != 2 * k)
      fail("vertex " + std::to_string(v) +
           " is not a transverse configuration (corner count " +
           std::to_string(vertex_corners[v]) + " at valence " +
           std::to_string(k) + ")");
  }

  // Basepoint regions.
  if (basepoints.empty()) fail("no basepoint region marked");
  for (Dart d : basepoints) {
    if (d.edge >= E) fail("basepoint dart refers to a missing edge");
    auto& face = regions[region_of_dart_[dart_id(d)]];
    if (face.outer) fail("basepoint region is an outer face");
    face.contains_z = true;
  }

  // Attaching-curve combinatorics: collect edges per curve and check each
  // curve is an embedded circle (or, for alpha in the bordered case, an arc
  // ending on the boundary).
  std::map<CurveId, std::vector<std::size_t>> curve_edges;
  for (std::size_t e = 0; e < E; ++e) {
    const CurveId& c = edges[e].curve;
    if (c.kind == CurveKind::Alpha && c.curve >= alpha_count)
      fail("alpha curve index out of range");
    if (c.kind == CurveKind::Beta &&
        (c.family >= beta_counts.size() || c.curve >= beta_counts[c.family]))
      fail("beta curve index out of range");
    if (c.kind == CurveKind::Alpha || c.kind == CurveKind::Beta)
      curve_edges[c].push_back(e);
  }
  for (const auto& [c, es] : curve_edges) {
    std::map<std::size_t, std::size_t> incidence;
    for (std::size_t e : es) {
      ++incidence[edges[e].tail];
      ++incidence[edges[e].head];
    }
    std::size_t odd = 0;
    for (const auto& [v, k] : incidence) {
      if (k > 2) fail("attaching curve passes through a vertex twice");
      if (k == 1) {
        ++odd;
        if (c.kind != CurveKind::Alpha || !on_boundary[v])
          fail("attaching circle has a free endpoint");
      }
    }
    if (odd != 0 && odd != 2) fail("alpha arc with a bad endpoint count");
    // Connectivity: walk from the first edge.
    std::set<std::size_t> seen{es.front()};
    std::vector<std::size_t> frontier{es.front()};
    while (!frontier.empty()) {
      std::size_t e = frontier.back();
      frontier.pop_back();
      for (std::size_t e2 : es)
        if (!seen.count(e2) &&
            (edges[e2].tail == edges[e].tail ||
             edges[e2].tail == edges[e].head ||
             edges[e2].head == edges[e].tail ||
             edges[e2].head == edges[e].head)) {
          seen.insert(e2);
          frontier.push_back(e2);
        }
    }
    if (seen.size() != es.size()) fail("attaching curve is disconnected");
  }
  for (std::size_t a = 0; a < alpha_count; ++a)
    if (!curve_edges.count({CurveKind::Alpha, 0, a}))
      fail("declared alpha curve has no edges");
  for (std::size_t f = 0; f < beta_counts.size(); ++f)
    for (std::size_t c = 0; c < beta_counts[f]; ++c)
      if (!curve_edges.count({CurveKind::Beta, f, c}))
        fail("declared beta circle has no edges");

  // Homological independence of each beta family over F_2: the circles must
  // stay independent modulo boundaries of interior faces.
  std::size_t n_interior = regions.size() - outer_count;
  F2Matrix d2(E, n_interior);
  {
    std::size_t col = 0;
    for (const auto& face : regions) {
      if (face.outer) continue;
      std::vector<std::size_t> entries;
      for (Dart d : face.cycle) entries.push_back(d.edge);
      d2.set_col(col++, std::move(entries));
    }
  }
  std::size_t rank_d2 = d2.rank();
  for (std::size_t f = 0; f < beta_counts.size(); ++f) {
    F2Matrix joint(E, n_interior + beta_counts[f]);
    for (std::size_t c = 0; c < n_interior; ++c) {
      std::vector<std::size_t> entries = d2.col(c);
      joint.set_col(c, std::move(entries));
    }
    if (beta_counts[f] != genus)
      fail("beta family " + beta_labels[f] + " has " +
           std::to_string(beta_counts[f]) + " circles; the genus is " +
           std::to_string(genus));
    for (std::size_t c = 0; c < beta_counts[f]; ++c)
      joint.set_col(n_interior + c,
                    curve_edges.at({CurveKind::Beta, f, c}));
    if (joint.rank() != rank_d2 + beta_counts[f])
      fail("beta family " + beta_labels[f] +
           " is not homologically independent");
  }

  // Pointed matched circle bindings.
  for (std::size_t bnd = 0; bnd < boundaries.size(); ++bnd) {
    const auto& binding = boundaries[bnd];
    if (binding.positions.size() != binding.pmc.points)
      fail("boundary binding lists the wrong number of positions");
    for (std::size_t v : binding.positions) {
      if (v >= num_vertices) fail("boundary position at a missing vertex");
      bool on_component = false;
      std::size_t alpha_darts = 0;
      for (Dart d : rotations[v]) {
        const CurveId& c = curve_of(d);
        if (c.kind == CurveKind::Boundary && c.curve == bnd)
          on_component = true;
        if (c.kind == CurveKind::Alpha) ++alpha_darts;
      }
      if (!on_component)
        fail("boundary position is not on its boundary component");
      if (alpha_darts != 1)
        fail("boundary position must meet exactly one alpha arc");
    }
  }

  finalized = true;
}

std::size_t HeegaardMultiDiagram::region_of(Dart d) const {
  if (!finalized) throw StructureError("diagram: regions not derived yet");
  return region_of_dart_[dart_id(d)];
}

// ---------------------------------------------------------------------------
// Generators

std::vector<Generator> enumerate_generators(const HeegaardMultiDiagram& d,
                                            const FamilySelector& fam_a,
                                            const FamilySelector& fam_b) {
  if (!d.finalized) throw ArgumentError("diagram not finalized");
  if (fam_b.kind != CurveKind::Beta)
    throw ArgumentError("generator circles must come from a beta family");
  if (fam_a == fam_b)
    throw ArgumentError("generator families must be distinct");

  // Crossing vertices: exactly one fam_a curve and one fam_b circle meet.
  struct Crossing {
    std::size_t vertex, a_curve;
  };
  std::size_t n_circles = d.beta_counts[fam_b.family];
  std::vector<std::vector<Crossing>> candidates(n_circles);
  for (std::size_t v = 0; v < d.num_vertices; ++v) {
    std::set<std::size_t> a_here, b_here;
    for (Dart dart : d.rotations[v]) {
      const CurveId& c = d.curve_of(dart);
      if (d.on_family(c, fam_a)) a_here.insert(c.curve);
      if (d.on_family(c, fam_b)) b_here.insert(c.curve);
    }
    if (a_here.size() == 1 && b_here.size() == 1)
      candidates[*b_here.begin()].push_back({v, *a_here.begin()});
  }
  for (auto& list : candidates)
    std::sort(list.begin(), list.end(),
              [](const Crossing& x, const Crossing& y) {
                return x.vertex < y.vertex;
              });

  std::vector<Generator> out;
  Generator current;
  current.fam_a = fam_a;
  current.fam_b = fam_b;
  std::function<void(std::size_t)> recurse = [&](std::size_t circle) {
    if (circle == n_circles) {
      out.push_back(current);
      return;
    }
    for (const Crossing& cr : candidates[circle]) {
      if (current.occupied.count(cr.a_curve)) continue;
      current.points.push_back(cr.vertex);
      current.occupied.insert(cr.a_curve);
      recurse(circle + 1);
      current.points.pop_back();
      current.occupied.erase(cr.a_curve);
    }
  };
  recurse(0);
  return out;
}

std::vector<Generator> enumerate_generators(const HeegaardMultiDiagram& d,
                                            std::size_t beta_family_index) {
  return enumerate_generators(d, alpha_family(),
                              beta_family(beta_family_index));
}

// ---------------------------------------------------------------------------
// Domains

namespace {

// Multiplicity jump across edge e: left face minus right face.
long long edge_jump(const DiagramDomain& b, std::size_t e) {
  const auto& d = *b.diagram;
  return b.mult(d.region_of({e, true})) - b.mult(d.region_of({e, false}));
}

}  // namespace

std::vector<std::string> domain_violations(const DiagramDomain& b) {
  std::vector<std::string> out;
  if (b.diagram == nullptr || !b.diagram->finalized) {
    out.push_back("domain has no finalized diagram");
    return out;
  }
  const auto& d = *b.diagram;
  for (const auto& [r, n] : b.multiplicities) {
    if (r >= d.regions.size()) {
      out.push_back("multiplicity on a missing region");
      return out;
    }
    if (n != 0 && d.regions[r].outer)
      out.push_back("nonzero multiplicity on an outer face");
    if (n != 0 && d.regions[r].contains_z)
      out.push_back("nonzero multiplicity at the basepoint region");
  }
  for (std::size_t e = 0; e < d.edges.size(); ++e)
    if (d.edges[e].curve.kind == CurveKind::None && edge_jump(b, e) != 0)
      out.push_back("boundary runs along an auxiliary edge");

  // Boundary jumps along each attaching curve happen only at corner points.
  std::set<std::size_t> corner_points;
  for (const auto& x : b.corners)
    corner_points.insert(x.points.begin(), x.points.end());
  std::vector<bool> on_boundary(d.num_vertices, false);
  for (const auto& e : d.edges)
    if (e.curve.kind == CurveKind::Boundary)
      on_boundary[e.tail] = on_boundary[e.head] = true;
  for (std::size_t v = 0; v < d.num_vertices; ++v) {
    if (on_boundary[v] || corner_points.count(v)) continue;
    std::map<CurveId, long long> net;
    for (Dart dart : d.rotations[v]) {
      const CurveId& c = d.curve_of(dart);
      if (c.kind != CurveKind::Alpha && c.kind != CurveKind::Beta) continue;
      net[c] += edge_jump(b, dart.edge) * (dart.forward ? 1 : -1);
    }
    for (const auto& [c, flow] : net)
      if (flow != 0)
        out.push_back("boundary jump away from the declared corners at "
                      "vertex " +
                      std::to_string(v));
  }
  return out;
}

EdgeChain domain_boundary(const DiagramDomain& b, const FamilySelector& f) {
  if (b.diagram == nullptr || !b.diagram->finalized)
    throw ArgumentError("domain has no finalized diagram");
  const auto& d = *b.diagram;
  EdgeChain chain;
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    if (!d.on_family(d.edges[e].curve, f)) continue;
    long long c = edge_jump(b, e);
    if (c != 0) chain[e] = c;
  }
  return chain;
}

Rational euler_measure(const DiagramDomain& b) {
  if (b.diagram == nullptr || !b.diagram->finalized)
    throw ArgumentError("domain has no finalized diagram");
  Rational e;
  for (const auto& [r, n] : b.multiplicities) {
    const Region& face = b.diagram->regions.at(r);
    e += Rational(n) *
         (Rational(1) - Rational(static_cast<long long>(face.corners), 4));
  }
  return e;
}

Rational point_multiplicity(const DiagramDomain& b, const Generator& x) {
  if (b.diagram == nullptr || !b.diagram->finalized)
    throw ArgumentError("domain has no finalized diagram");
  const auto& d = *b.diagram;
  Rational total;
  for (std::size_t v : x.points) {
    if (v >= d.num_vertices)
      throw ArgumentError("generator point is not on the diagram");
    if (d.rotations[v].size() != 4)
      throw ArgumentError("generator point is not a transverse crossing");
    long long sum = 0;
    for (Dart dart : d.rotations[v]) sum += b.mult(d.region_of(dart));
    total += Rational(sum, 4);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Jittered intersections

Rational jittered_intersection(const HeegaardMultiDiagram& d,
                               const EdgeChain& c1, const EdgeChain& c2) {
  if (!d.finalized) throw ArgumentError("diagram not finalized");
  for (const auto& [e, n] : c1)
    if (n != 0 && c2.count(e) && c2.at(e) != 0)
      throw ArgumentError("chains are not transverse: shared edge " +
                          std::to_string(e));
  auto coef = [](const EdgeChain& c, std::size_t e) {
    auto it = c.find(e);
    return it == c.end() ? 0LL : it->second;
  };
  // Signed outflow of a chain along an out-dart.
  auto flow = [&](const EdgeChain& c, Dart dart) {
    return coef(c, dart.edge) * (dart.forward ? 1 : -1);
  };

  Rational total;
  for (std::size_t v = 0; v < d.num_vertices; ++v) {
    const auto& rot = d.rotations[v];
    bool has1 = false, has2 = false;
    for (Dart dart : rot) {
      if (coef(c1, dart.edge) != 0) has1 = true;
      if (coef(c2, dart.edge) != 0) has2 = true;
    }
    if (!has1 || !has2) continue;
    if (rot.size() != 4)
      throw ArgumentError("chains meet at a non-transverse vertex " +
                          std::to_string(v));
    // The four strand ends must alternate between the two curves.
    if (d.curve_of(rot[0]) != d.curve_of(rot[2]) ||
        d.curve_of(rot[1]) != d.curve_of(rot[3]) ||
        d.curve_of(rot[0]) == d.curve_of(rot[1]))
      throw ArgumentError("chains meet at a non-transverse vertex " +
                          std::to_string(v));
    bool c1_even = coef(c1, rot[0].edge) != 0 || coef(c1, rot[2].edge) != 0;
    bool c1_odd = coef(c1, rot[1].edge) != 0 || coef(c1, rot[3].edge) != 0;
    bool c2_even = coef(c2, rot[0].edge) != 0 || coef(c2, rot[2].edge) != 0;
    bool c2_odd = coef(c2, rot[1].edge) != 0 || coef(c2, rot[3].edge) != 0;
    if ((c1_even && c1_odd) || (c2_even && c2_odd) || c1_even == c2_even)
      throw ArgumentError("chains meet along the same strand at vertex " +
                          std::to_string(v));
    std::size_t base = c1_even ? 0 : 1;
    // Net flow of c1 toward rot[base], of c2 toward the next dart
    // counterclockwise; counterclockwise quarter turns are positive.
    long long a = flow(c1, rot[base]) - flow(c1, rot[base + 2]);
    long long bb =
        flow(c2, rot[base + 1]) - flow(c2, rot[(base + 3) % 4]);
    total += Rational(a * bb, 4);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Chord invariants

namespace {

// Multiplicity with which the chord covers position p.
Rational chord_covers(const Chord& rho, std::size_t p) {
  if (p == rho.start || p == rho.end) return {1, 2};
  if (rho.start < p && p < rho.end) return 1;
  return 0;
}

Rational chord_linking(const Chord& r1, const Chord& r2) {
  return chord_covers(r2, r1.end) - chord_covers(r2, r1.start);
}

}  // namespace

ChordInvariants chord_invariants(const PointedMatchedCircle& pmc,
                                 const std::vector<ChordSet>& rho_sets) {
  for (const auto& set : rho_sets)
    for (const Chord& rho : set) {
      if (rho.start >= pmc.points || rho.end >= pmc.points)
        throw ArgumentError("chord endpoint off the pointed matched circle");
      if (rho.start >= rho.end)
        throw ArgumentError("chord runs through the basepoint");
    }
  ChordInvariants out;
  for (std::size_t i = 0; i < rho_sets.size(); ++i) {
    Rational iota =
        Rational(-static_cast<long long>(rho_sets[i].size()), 2);
    for (auto it = rho_sets[i].begin(); it != rho_sets[i].end(); ++it)
      for (auto jt = std::next(it); jt != rho_sets[i].end(); ++jt)
        iota -= chord_linking(*it, *jt).abs();
    out.iota.push_back(iota);
  }
  for (std::size_t i = 0; i < rho_sets.size(); ++i)
    for (std::size_t j = 0; j < rho_sets.size(); ++j) {
      if (i == j) continue;
      Rational l;
      for (const Chord& r1 : rho_sets[i])
        for (const Chord& r2 : rho_sets[j]) l += chord_linking(r1, r2);
      out.linking[{i, j}] = l;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Index

IndexResult index(const DiagramDomain& b,
                  std::optional<long long> source_chi) {
  auto violations = domain_violations(b);
  if (!violations.empty())
    throw ArgumentError("inconsistent asymptotics: " + violations.front());
  if (b.families.size() < 2)
    throw ArgumentError("a polygon domain needs at least two sides");
  if (b.corners.size() != b.families.size())
    throw ArgumentError("corner count does not match the side count");
  const std::size_t n = b.families.size() - 1;
  const std::size_t g = b.corners.front().points.size();
  for (const auto& x : b.corners)
    if (x.points.size() != g)
      throw ArgumentError("corner generators occupy different point counts");

  const Rational e = euler_measure(b);
  const Rational m(static_cast<long long>(b.chord_sets.size()));
  const Rational gg(static_cast<long long>(g));
  const Rational nn(static_cast<long long>(n));

  Rational chord_sum;  // sum iota + sum_{i<j} L
  if (!b.chord_sets.empty()) {
    if (b.diagram->boundaries.empty())
      throw ArgumentError("Reeb chords on a diagram without boundary");
    auto inv =
        chord_invariants(b.diagram->boundaries.front().pmc, b.chord_sets);
    for (const auto& iota : inv.iota) chord_sum += iota;
    for (std::size_t i = 0; i < b.chord_sets.size(); ++i)
      for (std::size_t j = i + 1; j < b.chord_sets.size(); ++j)
        chord_sum += inv.linking.at({i, j});
  }

  Rational jitter;  // sum_{n >= j > l >= 1} d_j B . d_l B
  {
    std::vector<EdgeChain> sides(n + 1);
    for (std::size_t j = 1; j <= n; ++j)
      sides[j] = domain_boundary(b, b.families[j]);
    for (std::size_t j = 2; j <= n; ++j)
      for (std::size_t l = 1; l < j; ++l)
        jitter += jittered_intersection(*b.diagram, sides[j], sides[l]);
  }

  const Rational nx0 = point_multiplicity(b, b.corners.front());
  const Rational nxn = point_multiplicity(b, b.corners.back());

  IndexResult res;
  res.embedded_chi = gg + e - nx0 - nxn - jitter - chord_sum;
  if (source_chi) {
    res.ind = Rational(3 - static_cast<long long>(n), 2) * gg -
              Rational(*source_chi) + Rational(2) * e + m;
  } else {
    res.ind = e + nx0 + nxn -
              (nn - Rational(1)) / Rational(2) * gg + jitter + m + chord_sum;
  }
  res.expected_dim = res.ind + nn - Rational(2);
  return res;
}

// ---------------------------------------------------------------------------
// Admissibility

namespace {

using Row = std::vector<Rational>;

// Reduced row echelon form; returns pivot column per row.
std::vector<std::size_t> rref(std::vector<Row>& mat) {
  std::vector<std::size_t> pivots;
  if (mat.empty()) return pivots;
  const std::size_t cols = mat.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < mat.size(); ++c) {
    std::size_t sel = SIZE_MAX;
    for (std::size_t i = r; i < mat.size(); ++i)
      if (!mat[i][c].is_zero()) {
        sel = i;
        break;
      }
    if (sel == SIZE_MAX) continue;
    std::swap(mat[r], mat[sel]);
    Rational inv = Rational(1) / mat[r][c];
    for (auto& x : mat[r]) x = x * inv;
    for (std::size_t i = 0; i < mat.size(); ++i) {
      if (i == r || mat[i][c].is_zero()) continue;
      Rational factor = mat[i][c];
      for (std::size_t k = 0; k < cols; ++k)
        mat[i][k] -= factor * mat[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  mat.resize(r);
  return pivots;
}

// Kernel basis of the matrix (columns = variables).
std::vector<Row> kernel_basis(std::vector<Row> mat, std::size_t cols) {
  auto pivots = rref(mat);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<Row> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Row v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < mat.size(); ++r)
      v[pivots[r]] = -mat[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Scale a rational vector to a primitive integer vector.
std::vector<long long> to_integer(const Row& v) {
  long long lcm = 1;
  for (const auto& x : v) lcm = std::lcm(lcm, x.den);
  std::vector<long long> out;
  long long g = 0;
  for (const auto& x : v) {
    out.push_back(x.num * (lcm / x.den));
    g = std::gcd(g, out.back() < 0 ? -out.back() : out.back());
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

// Feasibility of { t : ineq . t >= rhs for each row } by Fourier-Motzkin;
// on success fills `point` with a solution.
bool fourier_motzkin(std::vector<std::pair<Row, Rational>> system,
                     std::size_t vars, Row& point) {
  std::vector<std::vector<std::pair<Row, Rational>>> stages;
  for (std::size_t v = vars; v-- > 0;) {
    stages.push_back(system);
    std::vector<std::pair<Row, Rational>> next;
    std::vector<std::pair<Row, Rational>> lower, upper;  // a t_v >= ...
    for (auto& [row, rhs] : system) {
      if (row[v].is_zero()) {
        next.push_back({row, rhs});
      } else if (Rational(0) < row[v]) {
        lower.push_back({row, rhs});
      } else {
        upper.push_back({row, rhs});
      }
    }
    for (const auto& [lo, lo_rhs] : lower)
      for (const auto& [up, up_rhs] : upper) {
        // Combine to eliminate t_v: lo/lo_v + (-up/up_v) >= ...
        Row combined(vars, Rational(0));
        Rational rhs = lo_rhs / lo[v] - up_rhs / up[v];
        for (std::size_t k = 0; k < vars; ++k)
          combined[k] = lo[k] / lo[v] - up[k] / up[v];
        next.push_back({std::move(combined), rhs});
      }
    system = std::move(next);
  }
  for (const auto& [row, rhs] : system)
    if (Rational(0) < rhs) return false;

  // Back-substitute, lowest variable first (stages were pushed from the
  // highest variable down).
  point.assign(vars, Rational(0));
  for (std::size_t v = 0; v < vars; ++v) {
    const auto& stage = stages[vars - 1 - v];
    bool has_lo = false, has_up = false;
    Rational lo, up;
    for (const auto& [row, rhs] : stage) {
      if (row[v].is_zero()) continue;
      Rational bound = rhs;
      for (std::size_t k = 0; k < vars; ++k)
        if (k != v) bound -= row[k] * point[k];
      bound = bound / row[v];
      if (Rational(0) < row[v]) {
        if (!has_lo || lo < bound) lo = bound;
        has_lo = true;
      } else {
        if (!has_up || bound < up) up = bound;
        has_up = true;
      }
    }
    if (has_lo && has_up)
      point[v] = (lo + up) / Rational(2);
    else if (has_lo)
      point[v] = lo;
    else if (has_up)
      point[v] = up;
  }
  return true;
}

}  // namespace

AdmissibilityCertificate admissibility(
    const HeegaardMultiDiagram& d, AdmissibilityMode mode,
    std::optional<std::set<std::size_t>> families) {
  if (!d.finalized) throw ArgumentError("diagram not finalized");
  if ((mode == AdmissibilityMode::Left || mode == AdmissibilityMode::Right) &&
      d.boundaries.size() != 2)
    throw ArgumentError(
        "left/right admissibility needs two boundary components");

  auto keep_family = [&](std::size_t f) {
    return !families || families->count(f) > 0;
  };

  // Regions near a boundary component: containing a forward boundary dart.
  auto touches_boundary = [&](std::size_t r, std::optional<std::size_t> comp) {
    for (Dart dart : d.regions[r].cycle) {
      const CurveId& c = d.curve_of(dart);
      if (c.kind == CurveKind::Boundary && (!comp || c.curve == *comp))
        return true;
    }
    return false;
  };

  // Variables: interior regions away from z, minus the ones pinned to zero
  // by the provinciality mode.
  std::vector<std::size_t> var_region;
  std::vector<std::size_t> var_of_region(d.regions.size(), SIZE_MAX);
  for (std::size_t r = 0; r < d.regions.size(); ++r) {
    const Region& face = d.regions[r];
    if (face.outer || face.contains_z) continue;
    bool pinned = false;
    switch (mode) {
      case AdmissibilityMode::Weak:
        break;
      case AdmissibilityMode::Provincial:
        pinned = touches_boundary(r, std::nullopt);
        break;
      case AdmissibilityMode::Left:  // right-provincial domains
        pinned = touches_boundary(r, 1);
        break;
      case AdmissibilityMode::Right:  // left-provincial domains
        pinned = touches_boundary(r, 0);
        break;
    }
    if (pinned) continue;
    var_of_region[r] = var_region.size();
    var_region.push_back(r);
  }
  const std::size_t V = var_region.size();

  // Jump across edge e as a row increment.
  auto add_jump = [&](Row& row, std::size_t e, const Rational& weight) {
    std::size_t left = d.region_of({e, true});
    std::size_t right = d.region_of({e, false});
    if (var_of_region[left] != SIZE_MAX)
      row[var_of_region[left]] += weight;
    if (var_of_region[right] != SIZE_MAX)
      row[var_of_region[right]] -= weight;
  };

  std::vector<Row> constraints;
  std::vector<bool> on_boundary(d.num_vertices, false);
  for (const auto& e : d.edges)
    if (e.curve.kind == CurveKind::Boundary)
      on_boundary[e.tail] = on_boundary[e.head] = true;

  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    const CurveId& c = d.edges[e].curve;
    bool dropped_beta = c.kind == CurveKind::Beta && !keep_family(c.family);
    if (c.kind == CurveKind::None || dropped_beta) {
      Row row(V, Rational(0));
      add_jump(row, e, Rational(1));
      constraints.push_back(std::move(row));
    }
  }
  // Conservation along each kept attaching curve at interior vertices.
  for (std::size_t v = 0; v < d.num_vertices; ++v) {
    if (on_boundary[v]) continue;
    std::map<CurveId, Row> net;
    for (Dart dart : d.rotations[v]) {
      const CurveId& c = d.curve_of(dart);
      bool kept = c.kind == CurveKind::Alpha ||
                  (c.kind == CurveKind::Beta && keep_family(c.family));
      if (!kept) continue;
      auto it = net.try_emplace(c, Row(V, Rational(0))).first;
      add_jump(it->second, dart.edge, Rational(dart.forward ? 1 : -1));
    }
    for (auto& [c, row] : net) constraints.push_back(std::move(row));
  }

  AdmissibilityCertificate cert;
  auto basis = kernel_basis(std::move(constraints), V);
  for (const auto& vec : basis) {
    auto ints = to_integer(vec);
    std::map<std::size_t, long long> dom;
    for (std::size_t i = 0; i < V; ++i)
      if (ints[i] != 0) dom[var_region[i]] = ints[i];
    cert.periodic_basis.push_back(std::move(dom));
  }
  if (basis.empty()) {
    cert.admissible = true;
    return cert;
  }

  // Feasibility of a nonzero, componentwise nonnegative combination: scale
  // so the multiplicities sum to 1, eliminate one coordinate with the
  // equality, and run Fourier-Motzkin on the rest.
  const std::size_t K = basis.size();
  Row total(K, Rational(0));  // coefficients of sum_r x_r in t
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < V; ++i) total[k] += basis[k][i];
  std::size_t elim = SIZE_MAX;
  for (std::size_t k = 0; k < K; ++k)
    if (!total[k].is_zero()) elim = k;
  bool feasible = false;
  Row t(K, Rational(0));
  if (elim == SIZE_MAX) {
    // Every kernel element has multiplicity sum 0, so a nonnegative one is
    // zero; but a violating domain may still exist with negative total if
    // we flip sign -- impossible, nonnegative nonzero forces positive sum.
    feasible = false;
  } else {
    // x_r(t) >= 0 for each variable region, with t_elim determined by
    // sum_r x_r = 1.
    std::vector<std::pair<Row, Rational>> system;
    for (std::size_t i = 0; i < V; ++i) {
      Row row(K, Rational(0));
      for (std::size_t k = 0; k < K; ++k) row[k] = basis[k][i];
      // Substitute t_elim = (1 - sum_{k != elim} total_k t_k) / total_elim.
      Row reduced(K, Rational(0));
      Rational rhs = Rational(0) - row[elim] / total[elim];
      for (std::size_t k = 0; k < K; ++k) {
        if (k == elim) continue;
        reduced[k] = row[k] - row[elim] * total[k] / total[elim];
      }
      reduced[elim] = Rational(0);
      system.push_back({std::move(reduced), rhs});
    }
    Row reduced_point;
    feasible = fourier_motzkin(std::move(system), K, reduced_point);
    if (feasible) {
      t = reduced_point;
      Rational rest(0);
      for (std::size_t k = 0; k < K; ++k)
        if (k != elim) rest += total[k] * t[k];
      t[elim] = (Rational(1) - rest) / total[elim];
    }
  }

  if (!feasible) {
    cert.admissible = true;
    return cert;
  }
  Row x(V, Rational(0));
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < V; ++i) x[i] += t[k] * basis[k][i];
  auto ints = to_integer(x);
  std::map<std::size_t, long long> dom;
  for (std::size_t i = 0; i < V; ++i)
    if (ints[i] != 0) dom[var_region[i]] = ints[i];
  cert.admissible = false;
  cert.violating = std::move(dom);
  return cert;
}

}  // namespace bordered
