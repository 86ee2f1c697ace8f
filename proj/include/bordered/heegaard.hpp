// Combinatorial pointed Heegaard multi-diagrams: CW surfaces given by
// rotation systems, domains with rational Euler measure, point
// multiplicities, jittered intersection numbers, Reeb-chord invariants, the
// polygon index formulas, admissibility certificates, and generator
// enumeration.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bordered/algebra.hpp"
#include "bordered/filtration.hpp"  // ArgumentError

namespace bordered {

// ---------------------------------------------------------------------------
// Exact rational arithmetic (small numerators/denominators only).

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return {-num, den}; }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  bool operator==(const Rational& o) const {
    return num == o.num && den == o.den;
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool is_zero() const { return num == 0; }
  bool is_integer() const { return den == 1; }
  Rational abs() const { return {num < 0 ? -num : num, den}; }
  std::string str() const;
};

// ---------------------------------------------------------------------------
// Curves, darts, and the rotation-system surface encoding.

enum class CurveKind : std::uint8_t {
  Alpha,     // alpha circles/arcs (one family)
  Beta,      // closed beta circles, grouped into families
  Boundary,  // boundary-of-surface circles, oriented with the surface on
             // their left
  None,      // auxiliary scaffolding edges on no attaching curve
};

struct CurveId {
  CurveKind kind = CurveKind::None;
  std::size_t family = 0;  // beta family index; 0 for other kinds
  std::size_t curve = 0;   // curve index within the family / alpha curve
                           // index / boundary component index
  bool operator==(const CurveId& o) const {
    return kind == o.kind && family == o.family && curve == o.curve;
  }
  bool operator!=(const CurveId& o) const { return !(*this == o); }
  bool operator<(const CurveId& o) const;
};

// Selects the alpha family or one beta family.
struct FamilySelector {
  CurveKind kind = CurveKind::Alpha;
  std::size_t family = 0;
  bool operator==(const FamilySelector& o) const {
    return kind == o.kind && family == o.family;
  }
  bool operator<(const FamilySelector& o) const {
    return kind != o.kind ? kind < o.kind : family < o.family;
  }
};

inline FamilySelector alpha_family() { return {CurveKind::Alpha, 0}; }
inline FamilySelector beta_family(std::size_t i) {
  return {CurveKind::Beta, i};
}

// A dart is one of the two directed sides of an edge.  The forward dart of
// edge e runs tail -> head and is based at the tail.
struct Dart {
  std::size_t edge = 0;
  bool forward = true;
  bool operator==(const Dart& o) const {
    return edge == o.edge && forward == o.forward;
  }
  bool operator<(const Dart& o) const {
    return edge != o.edge ? edge < o.edge : forward && !o.forward;
  }
};

inline Dart reverse(Dart d) { return {d.edge, !d.forward}; }

struct EdgeSpec {
  std::size_t tail = 0;
  std::size_t head = 0;
  CurveId curve;
};

// A face of the surface, traversed with the face on the left of each dart.
struct Region {
  std::vector<Dart> cycle;
  std::size_t corners = 0;  // convex corner count along the cycle
  bool outer = false;       // face "outside" a boundary circle; never part
                            // of a domain
  bool contains_z = false;
};

// Binding of one boundary component to a pointed matched circle: position p
// of the circle sits at vertex `positions[p]`, positions increase in the
// positive (basepoint-avoiding) direction.
struct BoundaryBinding {
  PointedMatchedCircle pmc;
  std::vector<std::size_t> positions;
};

// An oriented chord on a pointed matched circle, from position `start` to
// position `end`, running in the positive direction without crossing the
// basepoint.
struct Chord {
  std::size_t boundary = 0;  // boundary component index
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const Chord& o) const {
    return boundary == o.boundary && start == o.start && end == o.end;
  }
  bool operator<(const Chord& o) const;
};
using ChordSet = std::set<Chord>;

// A pointed Heegaard multi-diagram.  Fill the input fields, then call
// finalize(), which derives the regions from the rotation system and throws
// StructureError if any invariant fails.
struct HeegaardMultiDiagram {
  // --- input ---
  std::size_t num_vertices = 0;
  std::vector<EdgeSpec> edges;
  // Per vertex, the counterclockwise cyclic order of outgoing darts;
  // counterclockwise agrees with the orientation of the surface.
  std::vector<std::vector<Dart>> rotations;
  std::size_t genus = 0;
  std::size_t alpha_count = 0;  // number of alpha circles/arcs
  std::vector<std::string> beta_labels;       // one label per beta family
  std::vector<std::size_t> beta_counts;       // circles per beta family
  std::vector<BoundaryBinding> boundaries;    // one per boundary component
  std::vector<Dart> basepoints;  // darts whose left face contains z

  // --- derived by finalize() ---
  std::vector<Region> regions;
  bool finalized = false;

  void finalize();

  std::size_t dart_base(Dart d) const {
    return d.forward ? edges[d.edge].tail : edges[d.edge].head;
  }
  std::size_t dart_tip(Dart d) const { return dart_base(reverse(d)); }
  const CurveId& curve_of(Dart d) const { return edges[d.edge].curve; }
  // Index of the face on the left of d.
  std::size_t region_of(Dart d) const;
  bool on_family(const CurveId& c, const FamilySelector& f) const {
    return c.kind == f.kind && (c.kind != CurveKind::Beta || c.family == f.family);
  }

 private:
  std::vector<std::size_t> region_of_dart_;  // indexed by 2*edge + !forward
};

// ---------------------------------------------------------------------------
// Generators and domains.

// An intersection assignment between two curve families: point i lies on
// circle i of fam_b and on a distinct curve of fam_a.
struct Generator {
  FamilySelector fam_a, fam_b;
  std::vector<std::size_t> points;    // vertex per fam_b circle
  std::set<std::size_t> occupied;     // fam_a curve indices in use
  bool operator==(const Generator& o) const { return points == o.points; }
};

// All injective circle -> crossing assignments, in lexicographic order of
// the vertex sequence.
std::vector<Generator> enumerate_generators(const HeegaardMultiDiagram& d,
                                            const FamilySelector& fam_a,
                                            const FamilySelector& fam_b);
// Convenience: (alpha, i-th beta family).
std::vector<Generator> enumerate_generators(const HeegaardMultiDiagram& d,
                                            std::size_t beta_family_index);

// A 2-chain of regions together with its polygon asymptotics.  For an
// (n+1)-gon the sides follow families[0], ..., families[n] (families[0] is
// normally alpha) and the corners are x^0, ..., x^n, with x^i joining the
// sides families[i] and families[i+1 mod n+1].
struct DiagramDomain {
  const HeegaardMultiDiagram* diagram = nullptr;
  std::map<std::size_t, long long> multiplicities;  // region -> n_r
  std::vector<Generator> corners;
  std::vector<FamilySelector> families;
  std::vector<ChordSet> chord_sets;  // the m Reeb-chord sets

  long long mult(std::size_t region) const {
    auto it = multiplicities.find(region);
    return it == multiplicities.end() ? 0 : it->second;
  }
};

// Violations of the domain invariants: n_z = 0, zero multiplicity on outer
// faces and auxiliary edges, and boundary jumps only at the declared
// corners.  Empty means valid.
std::vector<std::string> domain_violations(const DiagramDomain& b);

// Signed edge chain with integer multiplicities.
using EdgeChain = std::map<std::size_t, long long>;

// The part of the boundary of b along the selected family.
EdgeChain domain_boundary(const DiagramDomain& b, const FamilySelector& f);

// Sum over regions of n_r (chi(region) - corners(region)/4).
Rational euler_measure(const DiagramDomain& b);

// Sum over x's points of the average of the four adjacent region
// multiplicities.  Throws ArgumentError if a point is not a transverse
// crossing of the diagram.
Rational point_multiplicity(const DiagramDomain& b, const Generator& x);

// Jittered intersection number of two transverse edge chains: the average
// of the four endpoint-pushoff intersection counts, with crossings positive
// when the second chain's direction is a counterclockwise quarter turn from
// the first's.  Throws ArgumentError on non-transverse input (shared edges,
// or a shared vertex where the two supports do not alternate).
Rational jittered_intersection(const HeegaardMultiDiagram& d,
                               const EdgeChain& c1, const EdgeChain& c2);

// iota per chord set and L per ordered pair of sets, extended bilinearly:
//   L(rho1, rho2) = multiplicity with which rho2 covers the endpoints of
//   rho1 (half-integral when endpoints are shared),
//   iota(rho) = -|rho|/2 - sum over pairs in rho of |L|.
// Throws ArgumentError if a chord runs through the basepoint.
struct ChordInvariants {
  std::vector<Rational> iota;                       // per set
  std::map<std::pair<std::size_t, std::size_t>, Rational> linking;  // (i,j)
};
ChordInvariants chord_invariants(const PointedMatchedCircle& pmc,
                                 const std::vector<ChordSet>& rho_sets);

// Index of a polygon domain.  With source_chi given,
//   ind = ((3-n)/2) g - chi(S) + 2 e(B) + m;
// otherwise the embedded-source formulas are used:
//   chi_emb = g + e - n_{x^0} - n_{x^n} - sum_{j>l>=1} d_j.d_l
//             - sum iota - sum_{i<j} L,
//   ind = e + n_{x^0} + n_{x^n} - ((n-1)/2) g + sum_{j>l>=1} d_j.d_l
//         + m + sum iota + sum_{i<j} L,
// where d_j.d_l is the jittered intersection of the beta-side boundary
// chains.  expected_dim = ind + n - 2.  Throws ArgumentError on
// inconsistent asymptotics (invalid domain, corner size mismatch).
struct IndexResult {
  Rational ind;
  Rational expected_dim;
  Rational embedded_chi;
};
IndexResult index(const DiagramDomain& b,
                  std::optional<long long> source_chi = std::nullopt);

// ---------------------------------------------------------------------------
// Admissibility.

enum class AdmissibilityMode : std::uint8_t {
  Weak,        // every nonzero multi-periodic domain has both signs
  Provincial,  // ... every nonzero provincial periodic domain ...
  Left,        // ... every nonzero right-provincial periodic domain ...
  Right,       // ... every nonzero left-provincial periodic domain ...
};

struct AdmissibilityCertificate {
  bool admissible = false;
  // Integer basis of the periodic-domain lattice examined (region -> n_r).
  std::vector<std::map<std::size_t, long long>> periodic_basis;
  // When not admissible: a nonzero periodic domain with all n_r >= 0.
  std::optional<std::map<std::size_t, long long>> violating;
};

// Decides admissibility by exact rational feasibility over the
// periodic-domain lattice (n_z = 0 throughout).  `families` restricts to a
// sub-diagram keeping only the listed beta families (all by default).
AdmissibilityCertificate admissibility(
    const HeegaardMultiDiagram& d, AdmissibilityMode mode,
    std::optional<std::set<std::size_t>> families = std::nullopt);

}  // namespace bordered
