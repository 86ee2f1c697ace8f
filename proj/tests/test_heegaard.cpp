#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "heegaard_fixtures.hpp"

using namespace bordered;
using namespace fixtures;

namespace {

Rational rat(long long n, long long d = 1) { return Rational(n, d); }

// ---------------------------------------------------------------------------
// Frozen oracles.

// Jittered intersection via the four endpoint pushoffs, simulated per
// vertex in local coordinates: the two strands of the first chain are east
// and west, those of the second north and south, and the second chain is
// translated into each of the four diagonal quadrants before counting
// signed crossings.
Rational oracle_jitter(const HeegaardMultiDiagram& d, const EdgeChain& c1,
                       const EdgeChain& c2) {
  auto coef = [](const EdgeChain& c, std::size_t e) {
    auto it = c.find(e);
    return it == c.end() ? 0LL : it->second;
  };
  auto flow = [&](const EdgeChain& c, Dart dart) {
    return coef(c, dart.edge) * (dart.forward ? 1 : -1);
  };
  long long four_times = 0;
  for (std::size_t v = 0; v < d.num_vertices; ++v) {
    const auto& rot = d.rotations[v];
    bool has1 = false, has2 = false;
    for (Dart dart : rot) {
      if (coef(c1, dart.edge) != 0) has1 = true;
      if (coef(c2, dart.edge) != 0) has2 = true;
    }
    if (!has1 || !has2 || rot.size() != 4) continue;
    std::size_t i0 =
        (coef(c1, rot[0].edge) != 0 || coef(c1, rot[2].edge) != 0) ? 0 : 1;
    long long east = flow(c1, rot[i0]);
    long long west = flow(c1, rot[i0 + 2]);
    long long north = flow(c2, rot[i0 + 1]);
    long long south = flow(c2, rot[(i0 + 3) % 4]);
    for (int dx : {1, -1})
      for (int dy : {1, -1}) {
        // Translating c2 into quadrant (dx, dy): for dy > 0 its south
        // strand crosses the horizontal axis, for dy < 0 its north strand
        // does; the crossing lands on c1's east strand when dx > 0.
        long long c1_mult = dx > 0 ? east : -west;       // eastward
        long long c2_mult = dy > 0 ? -south : north;      // northward
        four_times += c1_mult * c2_mult;
      }
  }
  return {four_times, 4};
}

// Chord endpoint coverage via the average of the two half-open pushoffs.
Rational oracle_cover(const Chord& rho, std::size_t p) {
  int halves = 0;
  if (rho.start < p && p <= rho.end) ++halves;
  if (rho.start <= p && p < rho.end) ++halves;
  return {halves, 2};
}

Rational oracle_linking(const ChordSet& s1, const ChordSet& s2) {
  Rational total;
  for (const Chord& r1 : s1)
    for (const Chord& r2 : s2)
      total += oracle_cover(r2, r1.end) - oracle_cover(r2, r1.start);
  return total;
}

// Integer periodic-domain predicate, written independently of the library's
// constraint assembly.
bool oracle_periodic(const HeegaardMultiDiagram& d,
                     const std::map<std::size_t, long long>& n,
                     const std::set<std::size_t>& kept_beta) {
  auto mult = [&](std::size_t r) {
    auto it = n.find(r);
    return it == n.end() ? 0LL : it->second;
  };
  for (const auto& [r, v] : n)
    if (v != 0 && (d.regions[r].outer || d.regions[r].contains_z))
      return false;
  auto jump = [&](std::size_t e) {
    return mult(d.region_of({e, true})) - mult(d.region_of({e, false}));
  };
  std::vector<bool> on_boundary(d.num_vertices, false);
  for (const auto& e : d.edges)
    if (e.curve.kind == CurveKind::Boundary)
      on_boundary[e.tail] = on_boundary[e.head] = true;
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    const CurveId& c = d.edges[e].curve;
    bool dropped =
        c.kind == CurveKind::None ||
        (c.kind == CurveKind::Beta && !kept_beta.count(c.family));
    if (dropped && jump(e) != 0) return false;
  }
  for (std::size_t v = 0; v < d.num_vertices; ++v) {
    if (on_boundary[v]) continue;
    std::map<CurveId, long long> net;
    for (Dart dart : d.rotations[v]) {
      const CurveId& c = d.curve_of(dart);
      if (c.kind == CurveKind::Alpha ||
          (c.kind == CurveKind::Beta && kept_beta.count(c.family)))
        net[c] += jump(dart.edge) * (dart.forward ? 1 : -1);
    }
    for (const auto& [c, flow] : net)
      if (flow != 0) return false;
  }
  return true;
}

std::set<std::size_t> all_beta(const HeegaardMultiDiagram& d) {
  std::set<std::size_t> out;
  for (std::size_t f = 0; f < d.beta_counts.size(); ++f) out.insert(f);
  return out;
}

// Exhaustive bounded search for a nonzero nonnegative periodic domain under
// the given mode; the fallback check for admissibility().
bool oracle_has_positive(const HeegaardMultiDiagram& d, AdmissibilityMode mode,
                         long long bound,
                         const std::set<std::size_t>& kept_beta) {
  auto touches = [&](std::size_t r, std::optional<std::size_t> comp) {
    for (Dart dart : d.regions[r].cycle) {
      const CurveId& c = d.curve_of(dart);
      if (c.kind == CurveKind::Boundary && (!comp || c.curve == *comp))
        return true;
    }
    return false;
  };
  std::vector<std::size_t> vars;
  for (std::size_t r = 0; r < d.regions.size(); ++r) {
    if (d.regions[r].outer || d.regions[r].contains_z) continue;
    bool pinned = false;
    if (mode == AdmissibilityMode::Provincial)
      pinned = touches(r, std::nullopt);
    else if (mode == AdmissibilityMode::Left)
      pinned = touches(r, 1);
    else if (mode == AdmissibilityMode::Right)
      pinned = touches(r, 0);
    if (!pinned) vars.push_back(r);
  }
  std::vector<long long> coefs(vars.size(), 0);
  while (true) {
    std::map<std::size_t, long long> dom;
    bool nonzero = false;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (coefs[i] != 0) nonzero = true;
      dom[vars[i]] = coefs[i];
    }
    if (nonzero && oracle_periodic(d, dom, kept_beta)) return true;
    std::size_t i = 0;
    for (; i < coefs.size(); ++i) {
      if (coefs[i] < bound) {
        ++coefs[i];
        break;
      }
      coefs[i] = 0;
    }
    if (i == coefs.size()) return false;
  }
}

}  // namespace

TEST_CASE("rational arithmetic") {
  CHECK(rat(1, 2) + rat(1, 3) == rat(5, 6));
  CHECK(rat(1, 2) - rat(1, 2) == rat(0));
  CHECK(rat(-2, 4) == rat(1, -2));
  CHECK(rat(3, 4) * rat(2, 3) == rat(1, 2));
  CHECK(rat(1, 2) / rat(-1, 4) == rat(-2));
  CHECK(rat(-7, 2).abs() == rat(7, 2));
  CHECK(rat(1, 3) < rat(1, 2));
  CHECK(rat(5, 3).str() == "5/3");
  CHECK_THROWS_AS(rat(1, 0), ArgumentError);
}

TEST_CASE("rotation systems derive the declared regions") {
  auto triple = torus_triple();
  REQUIRE(triple.regions.size() == 3);
  std::size_t t1 = triple.region_of(fwd(1));
  std::size_t t2 = triple.region_of(fwd(5));
  std::size_t hex = triple.region_of(fwd(0));
  CHECK(triple.regions[t1].cycle.size() == 3);
  CHECK(triple.regions[t1].corners == 3);
  CHECK(triple.regions[t2].cycle.size() == 3);
  CHECK(triple.regions[hex].cycle.size() == 6);
  CHECK(triple.regions[hex].corners == 6);
  CHECK(triple.regions[hex].contains_z);
  CHECK_FALSE(triple.regions[t1].contains_z);

  auto pushoff = pushoff_pair();
  REQUIRE(pushoff.regions.size() == 4);
  CHECK(pushoff.regions[pushoff.region_of(fwd(0))].cycle.size() == 3);
  CHECK(pushoff.regions[pushoff.region_of(fwd(3))].cycle.size() == 2);
  CHECK(pushoff.regions[pushoff.region_of(bwd(0))].cycle.size() == 3);
  CHECK(pushoff.regions[pushoff.region_of(fwd(1))].cycle.size() == 8);

  auto grid = grid_torus(3);
  REQUIRE(grid.regions.size() == 9);
  for (const auto& face : grid.regions) {
    CHECK(face.cycle.size() == 4);
    CHECK(face.corners == 4);
  }

  auto punctured = punctured_torus();
  std::size_t outer = 0;
  for (const auto& face : punctured.regions) outer += face.outer;
  CHECK(punctured.regions.size() == 3);
  CHECK(outer == 1);

  CHECK(twice_punctured_torus().regions.size() == 8);  // six interior + two

  // A scrambled rotation breaks the face structure or transversality.
  auto broken = torus_triple();
  broken.finalized = false;
  std::swap(broken.rotations[0][1], broken.rotations[0][2]);
  CHECK_THROWS_AS(broken.finalize(), StructureError);
  auto wrong_genus = torus_triple();
  wrong_genus.finalized = false;
  wrong_genus.genus = 2;
  CHECK_THROWS_AS(wrong_genus.finalize(), StructureError);
}

TEST_CASE("generator enumeration") {
  auto three = three_crossings();
  auto gens = enumerate_generators(three, 0);
  REQUIRE(gens.size() == 3);
  CHECK(gens[0].points == std::vector<std::size_t>{0});
  CHECK(gens[1].points == std::vector<std::size_t>{1});
  CHECK(gens[2].points == std::vector<std::size_t>{2});

  // Each pair of the three circles on the torus triple crosses once.
  auto triple = torus_triple();
  CHECK(enumerate_generators(triple, beta_family(0), beta_family(1)) ==
        std::vector<Generator>{{beta_family(0), beta_family(1), {1}, {0}}});
  CHECK(enumerate_generators(triple, beta_family(0), beta_family(2)).size() ==
        1);
  CHECK(enumerate_generators(triple, beta_family(0), beta_family(2))[0]
            .points == std::vector<std::size_t>{0});
  CHECK(enumerate_generators(triple, beta_family(1), beta_family(2))[0]
            .points == std::vector<std::size_t>{2});

  auto punctured = punctured_torus();
  auto pg = enumerate_generators(punctured, 0);
  REQUIRE(pg.size() == 1);
  CHECK(pg[0].points == std::vector<std::size_t>{4});
  CHECK(pg[0].occupied == std::set<std::size_t>{1});

  auto twice = twice_punctured_torus();
  auto tg = enumerate_generators(twice, 0);
  REQUIRE(tg.size() == 2);
  CHECK(tg[0].points == std::vector<std::size_t>{4});
  CHECK(tg[0].occupied == std::set<std::size_t>{1});
  CHECK(tg[1].points == std::vector<std::size_t>{10});
  CHECK(tg[1].occupied == std::set<std::size_t>{3});

  CHECK(enumerate_generators(grid_torus(3), 0).size() == 3);
  CHECK_THROWS_AS(enumerate_generators(triple, beta_family(1), alpha_family()),
                  ArgumentError);
}

TEST_CASE("domain boundaries") {
  auto grid = grid_torus(3);
  auto zero = make_domain(grid, {}, {}, {});
  CHECK(domain_boundary(zero, alpha_family()).empty());

  // One square: unit chains along its alpha and beta/aux sides.
  std::size_t s11 = grid.region_of({9 + 3 + 1, true});  // fwd(h(1,1)) = 4
  auto square = make_domain(grid, {{grid.region_of({4, true}), 1}}, {}, {});
  auto da = domain_boundary(square, alpha_family());
  CHECK(da == EdgeChain{{4, 1}, {7, -1}});  // h(1,1) forward, h(1,2) back
  (void)s11;

  std::mt19937 rng(20260823);
  std::uniform_int_distribution<long long> coef(-3, 3);
  for (int trial = 0; trial < 25; ++trial) {
    DiagramDomain b1 = make_domain(grid, {}, {}, {});
    DiagramDomain b2 = make_domain(grid, {}, {}, {});
    DiagramDomain sum = make_domain(grid, {}, {}, {});
    for (std::size_t r = 0; r < grid.regions.size(); ++r) {
      if (grid.regions[r].contains_z) continue;
      b1.multiplicities[r] = coef(rng);
      b2.multiplicities[r] = coef(rng);
      sum.multiplicities[r] = b1.multiplicities[r] + b2.multiplicities[r];
    }
    for (auto fam : {alpha_family(), beta_family(0)}) {
      EdgeChain lhs = domain_boundary(sum, fam);
      EdgeChain combined = domain_boundary(b1, fam);
      for (const auto& [e, c] : domain_boundary(b2, fam)) {
        combined[e] += c;
        if (combined[e] == 0) combined.erase(e);
      }
      CHECK(lhs == combined);
    }
    CHECK(euler_measure(sum) == euler_measure(b1) + euler_measure(b2));
    Generator x;
    x.points = {4};  // v(1,1), an interior crossing? v(1,1) is 4-valent
    CHECK(point_multiplicity(sum, x) ==
          point_multiplicity(b1, x) + point_multiplicity(b2, x));
  }
}

TEST_CASE("euler measure formula instances") {
  auto grid = grid_torus(3);
  CHECK(euler_measure(make_domain(grid, {}, {}, {})) == rat(0));
  CHECK(euler_measure(
            make_domain(grid, {{grid.region_of({4, true}), 1}}, {}, {})) ==
        rat(0));  // square

  auto three = three_crossings();
  std::size_t bigon = three.region_of(fwd(0));
  CHECK(euler_measure(make_domain(three, {{bigon, 1}}, {}, {})) == rat(1, 2));

  auto triple = torus_triple();
  std::size_t t1 = triple.region_of(fwd(1));
  CHECK(euler_measure(make_domain(triple, {{t1, 1}}, {}, {})) == rat(1, 4));

  // Euler measures of the region set add up to the Euler characteristic.
  for (const HeegaardMultiDiagram& d :
       {torus_triple(), pushoff_pair(), three_crossings()}) {
    Rational total;
    for (std::size_t r = 0; r < d.regions.size(); ++r)
      total += euler_measure(make_domain(d, {{r, 1}}, {}, {}));
    CHECK(total == rat(0));
  }
}

TEST_CASE("point multiplicity") {
  auto grid = grid_torus(3);
  Generator corner;
  corner.points = {4};  // v(1,1)
  CHECK(point_multiplicity(make_domain(grid, {}, {}, {}), corner) == rat(0));
  // v(1,1) is a corner of the square left of fwd(h(1,1)).
  auto square = make_domain(grid, {{grid.region_of({4, true}), 1}}, {}, {});
  CHECK(point_multiplicity(square, corner) == rat(1, 4));

  Generator off;
  off.points = {99};
  CHECK_THROWS_AS(point_multiplicity(square, off), ArgumentError);

  auto punctured = punctured_torus();
  Generator on_bnd;
  on_bnd.points = {0};  // a trivalent boundary marked point
  CHECK_THROWS_AS(
      point_multiplicity(make_domain(punctured, {}, {}, {}), on_bnd),
      ArgumentError);
}

TEST_CASE("jittered intersection numbers") {
  auto grid = grid_torus(3);
  auto h = [](std::size_t i, std::size_t j) { return j * 3 + i; };
  auto u = [](std::size_t i, std::size_t j) { return 9 + j * 3 + i; };

  EdgeChain row0{{h(0, 0), 1}, {h(1, 0), 1}, {h(2, 0), 1}};
  EdgeChain col0{{u(0, 0), 1}, {u(0, 1), 1}, {u(0, 2), 1}};
  EdgeChain row1{{h(0, 1), 1}, {h(1, 1), 1}, {h(2, 1), 1}};
  CHECK(jittered_intersection(grid, row0, col0) == rat(1));
  CHECK(jittered_intersection(grid, col0, row0) == rat(-1));
  CHECK(jittered_intersection(grid, row0, row1) == rat(0));  // disjoint

  CHECK_THROWS_AS(jittered_intersection(grid, row0, row0), ArgumentError);
  // Chains touching the same strand at a vertex are not transverse.
  CHECK_THROWS_AS(
      jittered_intersection(grid, EdgeChain{{h(0, 0), 1}},
                            EdgeChain{{h(1, 0), 1}}),
      ArgumentError);

  std::mt19937 rng(417);
  std::uniform_int_distribution<long long> coef(-2, 2);
  auto random_chain = [&](bool rows) {
    EdgeChain c;
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t i = 0; i < 3; ++i) {
        long long x = coef(rng);
        if (x != 0) c[rows ? h(i, j) : u(i, j)] = x;
      }
    return c;
  };
  for (int trial = 0; trial < 50; ++trial) {
    EdgeChain a = random_chain(true), a2 = random_chain(true);
    EdgeChain b = random_chain(false);
    Rational ab = jittered_intersection(grid, a, b);
    CHECK(ab == oracle_jitter(grid, a, b));
    CHECK(jittered_intersection(grid, b, a) == -ab);
    EdgeChain sum = a;
    for (const auto& [e, c] : a2) {
      sum[e] += c;
      if (sum[e] == 0) sum.erase(e);
    }
    CHECK(jittered_intersection(grid, sum, b) ==
          ab + jittered_intersection(grid, a2, b));
  }
}

TEST_CASE("chord invariants") {
  PointedMatchedCircle pmc{8, {2, 3, 0, 1, 6, 7, 4, 5}};
  auto inv = chord_invariants(pmc, {{Chord{0, 1, 4}}});
  CHECK(inv.iota == std::vector<Rational>{rat(-1, 2)});

  // Nested chords sharing their starting endpoint.
  auto nested = chord_invariants(pmc, {{Chord{0, 0, 2}}, {Chord{0, 0, 1}}});
  CHECK(nested.linking.at({0, 1}) == rat(-1, 2));
  CHECK(nested.linking.at({1, 0}) == rat(1, 2));

  // iota of a set subtracts pairwise |L|: here L = m(rho2, 2) = 1.
  auto pair = chord_invariants(pmc, {{Chord{0, 0, 2}, Chord{0, 1, 3}}});
  CHECK(pair.iota[0] == rat(-1) - rat(1));
  // With a shared endpoint the linking contribution is half-integral.
  auto shared = chord_invariants(pmc, {{Chord{0, 0, 2}, Chord{0, 2, 3}}});
  CHECK(shared.iota[0] == rat(-1) - rat(1, 2));

  CHECK_THROWS_AS(chord_invariants(pmc, {{Chord{0, 5, 2}}}), ArgumentError);
  CHECK_THROWS_AS(chord_invariants(pmc, {{Chord{0, 3, 9}}}), ArgumentError);

  std::mt19937 rng(99);
  std::uniform_int_distribution<std::size_t> pt(0, 7);
  auto random_set = [&] {
    ChordSet s;
    for (int k = 0; k < 3; ++k) {
      std::size_t a = pt(rng), b = pt(rng);
      if (a != b) s.insert(Chord{0, std::min(a, b), std::max(a, b)});
    }
    return s;
  };
  for (int trial = 0; trial < 50; ++trial) {
    ChordSet s1 = random_set(), s2 = random_set(), s3 = random_set();
    auto inv3 = chord_invariants(pmc, {s1, s2, s3});
    CHECK(inv3.linking.at({0, 2}) == oracle_linking(s1, s3));
    CHECK(inv3.linking.at({1, 2}) == oracle_linking(s2, s3));
    // Bilinearity: L(s1 u s2, s3) counts every chord pair once.
    ChordSet both = s1;
    both.insert(s2.begin(), s2.end());
    Rational expected;
    for (const Chord& r1 : both)
      expected += oracle_linking({r1}, s3);
    auto invU = chord_invariants(pmc, {both, s3});
    CHECK(invU.linking.at({0, 1}) == expected);
  }
}

TEST_CASE("polygon index: strips and bigons") {
  auto three = three_crossings();
  // The trivial strip: zero domain from A to itself, source a disjoint
  // union of g vertical strips.
  auto strip = make_domain(three, {}, {{0}, {0}},
                           {alpha_family(), beta_family(0)});
  auto res = index(strip, 1);
  CHECK(res.ind == rat(0));
  CHECK(res.expected_dim == rat(-1));

  // The bigon between A and B, a rigid disk.
  std::size_t bigon = three.region_of(fwd(0));
  auto b = make_domain(three, {{bigon, 1}}, {{1}, {0}},
                       {alpha_family(), beta_family(0)});
  auto rb = index(b);
  CHECK(rb.ind == rat(1));
  CHECK(rb.expected_dim == rat(0));
  CHECK(rb.embedded_chi == rat(1));
  // The fixed-source formula with the embedded source agrees.
  CHECK(index(b, 1).ind == rat(1));
}

TEST_CASE("polygon index: triangles on the torus triple") {
  auto triple = torus_triple();
  std::size_t t1 = triple.region_of(fwd(1));
  std::size_t t2 = triple.region_of(fwd(5));
  // Sides in counterclockwise order around either triangle:
  // family 0, then family 2, then family 1; corners P=0, R=2, Q=1.
  std::vector<FamilySelector> sides{beta_family(0), beta_family(2),
                                    beta_family(1)};
  std::vector<std::vector<std::size_t>> corners{{0}, {2}, {1}};

  auto d1 = make_domain(triple, {{t1, 1}}, corners, sides);
  auto r1 = index(d1);
  CHECK(r1.ind == rat(0));
  CHECK(r1.expected_dim == rat(0));
  CHECK(r1.embedded_chi == rat(1));
  CHECK(index(d1, 1).ind == rat(0));

  auto d2 = make_domain(triple, {{t2, 1}}, corners, sides);
  auto r2 = index(d2);
  CHECK(r2.ind == rat(0));
  CHECK(r2.embedded_chi == rat(1));

  // Juxtaposition: the embedded index of the sum differs from the sum of
  // embedded indices by ((n-1)/2) g plus the cross jitter terms.
  auto sum = make_domain(triple, {{t1, 1}, {t2, 1}}, corners, sides);
  auto rs = index(sum);
  CHECK(rs.ind == rat(1));
  Rational cross;
  for (std::size_t j = 2; j <= 2; ++j)
    for (std::size_t l = 1; l < j; ++l)
      cross += jittered_intersection(triple,
                                     domain_boundary(d1, sides[j]),
                                     domain_boundary(d2, sides[l])) +
               jittered_intersection(triple,
                                     domain_boundary(d2, sides[j]),
                                     domain_boundary(d1, sides[l]));
  CHECK(rs.ind == r1.ind + r2.ind + rat(1, 2) * rat(1) + cross);
}

TEST_CASE("polygon index: the close-approximation triangle is rigid") {
  auto d = pushoff_pair();
  std::size_t tri = d.region_of(fwd(0));
  // Sides counterclockwise: alpha, then the far circle, then the near one;
  // corners x'=1, th1=2, x=0.
  auto t = make_domain(d, {{tri, 1}}, {{1}, {2}, {0}},
                       {alpha_family(), beta_family(1), beta_family(0)});
  auto rt = index(t);
  CHECK(rt.ind == rat(0));
  CHECK(rt.expected_dim == rat(0));
  CHECK(rt.embedded_chi == rat(1));
  CHECK(index(t, 1).ind == rat(0));

  // The opposite small triangle is rigid too, with the opposite side order.
  std::size_t tri2 = d.region_of(bwd(0));
  auto t2 = make_domain(d, {{tri2, 1}}, {{0}, {3}, {1}},
                        {alpha_family(), beta_family(0), beta_family(1)});
  CHECK(index(t2).ind == rat(0));
  CHECK(index(t2).embedded_chi == rat(1));

  // Adding the lens moves a boundary jump away from the declared corners.
  std::size_t lens = d.region_of(fwd(3));
  auto bad = make_domain(d, {{tri, 1}, {lens, 1}}, {{1}, {3}, {0}},
                         {alpha_family(), beta_family(1), beta_family(0)});
  CHECK_THROWS_AS(index(bad), ArgumentError);
}

TEST_CASE("index depends linearly on the domain") {
  auto triple = torus_triple();
  std::size_t t1 = triple.region_of(fwd(1));
  std::size_t t2 = triple.region_of(fwd(5));
  std::vector<FamilySelector> sides{beta_family(0), beta_family(2),
                                    beta_family(1)};
  std::vector<std::vector<std::size_t>> corners{{0}, {2}, {1}};
  auto zero = make_domain(triple, {}, corners, sides);
  std::mt19937 rng(7);
  std::uniform_int_distribution<long long> coef(-4, 4);
  for (int trial = 0; trial < 100; ++trial) {
    auto b = make_domain(triple, {{t1, coef(rng)}, {t2, coef(rng)}}, corners,
                         sides);
    long long chi = coef(rng);
    CHECK(index(b, chi).ind - index(zero, chi).ind ==
          rat(2) * euler_measure(b));
  }
}

TEST_CASE("chord terms enter the index") {
  auto punctured = punctured_torus();
  auto b = make_domain(punctured, {}, {{4}, {4}},
                       {alpha_family(), beta_family(0)},
                       {{Chord{0, 0, 1}}});
  // ind = m + iota = 1 - 1/2 on the zero domain.
  CHECK(index(b).ind == rat(1, 2));

  auto triple = torus_triple();
  auto closed = make_domain(triple, {}, {{0}, {2}, {1}},
                            {beta_family(0), beta_family(2), beta_family(1)},
                            {{Chord{0, 0, 1}}});
  CHECK_THROWS_AS(index(closed), ArgumentError);
}

TEST_CASE("admissibility certificates") {
  auto triple = torus_triple();
  auto cert = admissibility(triple, AdmissibilityMode::Weak);
  CHECK(cert.admissible);
  REQUIRE(cert.periodic_basis.size() == 1);
  std::size_t t1 = triple.region_of(fwd(1));
  std::size_t t2 = triple.region_of(fwd(5));
  auto basis = cert.periodic_basis[0];
  bool plus = basis == std::map<std::size_t, long long>{{t1, 1}, {t2, -1}};
  bool minus = basis == std::map<std::size_t, long long>{{t1, -1}, {t2, 1}};
  CHECK((plus || minus));

  // No periodic domains at all.
  auto three = three_crossings();
  auto c3 = admissibility(three, AdmissibilityMode::Weak);
  CHECK(c3.admissible);
  CHECK(c3.periodic_basis.empty());

  // Parallel curves: the annulus region is a positive periodic domain.
  auto parallel = parallel_torus();
  auto cp = admissibility(parallel, AdmissibilityMode::Weak);
  CHECK_FALSE(cp.admissible);
  REQUIRE(cp.violating.has_value());
  std::size_t annulus = parallel.region_of(fwd(0));
  CHECK(*cp.violating == std::map<std::size_t, long long>{{annulus, 1}});

  // Bordered: inadmissible in the weak sense, provincially admissible.
  auto punctured = punctured_torus();
  auto cw = admissibility(punctured, AdmissibilityMode::Weak);
  CHECK_FALSE(cw.admissible);
  REQUIRE(cw.violating.has_value());
  CHECK(oracle_periodic(punctured, *cw.violating, all_beta(punctured)));
  CHECK(admissibility(punctured, AdmissibilityMode::Provincial).admissible);
  CHECK_THROWS_AS(admissibility(punctured, AdmissibilityMode::Left),
                  ArgumentError);
  CHECK_THROWS_AS(admissibility(punctured, AdmissibilityMode::Right),
                  ArgumentError);
}

TEST_CASE("left and right admissibility on two boundary components") {
  auto d = twice_punctured_torus();
  auto weak = admissibility(d, AdmissibilityMode::Weak);
  CHECK_FALSE(weak.admissible);
  CHECK(weak.periodic_basis.size() == 2);
  REQUIRE(weak.violating.has_value());
  CHECK(oracle_periodic(d, *weak.violating, all_beta(d)));
  for (const auto& [r, v] : *weak.violating) CHECK(v > 0);

  auto left = admissibility(d, AdmissibilityMode::Left);
  CHECK_FALSE(left.admissible);
  REQUIRE(left.violating.has_value());
  // The left certificate is right-provincial: it avoids the second
  // boundary component.
  for (const auto& [r, v] : *left.violating) {
    bool near_right = false;
    for (Dart dart : d.regions[r].cycle) {
      const CurveId& c = d.curve_of(dart);
      if (c.kind == CurveKind::Boundary && c.curve == 1) near_right = true;
    }
    CHECK_FALSE(near_right);
    CHECK(v > 0);
  }
  CHECK(oracle_periodic(d, *left.violating, all_beta(d)));

  CHECK(admissibility(d, AdmissibilityMode::Right).admissible);
  CHECK(admissibility(d, AdmissibilityMode::Provincial).admissible);
}

TEST_CASE("admissibility agrees with the bounded brute force") {
  struct Case {
    HeegaardMultiDiagram d;
    AdmissibilityMode mode;
    long long bound;
  };
  std::vector<Case> cases;
  cases.push_back({torus_triple(), AdmissibilityMode::Weak, 3});
  cases.push_back({parallel_torus(), AdmissibilityMode::Weak, 3});
  cases.push_back({punctured_torus(), AdmissibilityMode::Weak, 3});
  cases.push_back({punctured_torus(), AdmissibilityMode::Provincial, 3});
  cases.push_back({twice_punctured_torus(), AdmissibilityMode::Weak, 3});
  cases.push_back({twice_punctured_torus(), AdmissibilityMode::Left, 3});
  cases.push_back({twice_punctured_torus(), AdmissibilityMode::Right, 3});
  cases.push_back(
      {twice_punctured_torus(), AdmissibilityMode::Provincial, 3});
  cases.push_back({grid_torus(3), AdmissibilityMode::Weak, 2});
  for (const auto& c : cases) {
    bool found = oracle_has_positive(c.d, c.mode, c.bound, all_beta(c.d));
    auto cert = admissibility(c.d, c.mode);
    CHECK(cert.admissible == !found);
    if (cert.violating) {
      CHECK(oracle_periodic(c.d, *cert.violating, all_beta(c.d)));
      bool nonzero = false;
      for (const auto& [r, v] : *cert.violating) {
        CHECK(v >= 0);
        if (v != 0) nonzero = true;
      }
      CHECK(nonzero);
    }
  }
}

TEST_CASE("admissibility is monotone under dropping beta families") {
  auto triple = torus_triple();
  REQUIRE(admissibility(triple, AdmissibilityMode::Weak).admissible);
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::set<std::size_t> fams;
    for (std::size_t f = 0; f < 3; ++f)
      if (mask & (1u << f)) fams.insert(f);
    CHECK(admissibility(triple, AdmissibilityMode::Weak, fams).admissible);
  }
  auto pushoff = pushoff_pair();
  REQUIRE(admissibility(pushoff, AdmissibilityMode::Weak).admissible);
  for (unsigned mask = 0; mask < 4; ++mask) {
    std::set<std::size_t> fams;
    for (std::size_t f = 0; f < 2; ++f)
      if (mask & (1u << f)) fams.insert(f);
    CHECK(admissibility(pushoff, AdmissibilityMode::Weak, fams).admissible);
  }
}
