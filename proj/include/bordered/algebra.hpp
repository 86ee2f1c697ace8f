// Presentations of dg algebras over idempotent ground rings, the torus
// algebra fixture, and pointed matched circles.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bordered/filtration.hpp"  // ValidationReport, ArgumentError

namespace bordered {

// Ground ring: a direct sum of copies of F_2, one per named idempotent.
struct IdempotentRing {
  std::vector<std::string> idempotents;
};

// An F_2-linear combination of basis elements, by index (presence = 1).
using AlgElt = std::set<std::size_t>;

// A dg algebra given by structure constants.  The idempotents themselves
// occupy the first `ground.idempotents.size()` basis slots and act as units
// on matching sides; mu2 entries are stored only for non-unit products, and
// missing entries mean zero.  Higher A-infinity operations are identically
// zero (dg algebras only).
class DgAlgebraPresentation {
 public:
  struct BasisElt {
    std::string name;
    std::size_t left, right;  // idempotent indices
  };

  IdempotentRing ground;
  std::vector<BasisElt> basis;
  std::map<std::size_t, AlgElt> mu1_table;
  std::map<std::pair<std::size_t, std::size_t>, AlgElt> mu2_table;
  std::vector<std::size_t> designated_chords;
  std::vector<int> augmentation;  // 0/1 per basis element

  std::size_t num_idempotents() const { return ground.idempotents.size(); }
  bool is_idempotent(std::size_t i) const { return i < num_idempotents(); }
  std::size_t index_of(const std::string& name) const;

  AlgElt mu1(std::size_t a) const;
  AlgElt mu1(const AlgElt& a) const;
  // mu2 on basis elements, including the unit action of idempotents.
  AlgElt mu2(std::size_t a, std::size_t b) const;
  AlgElt mu2(const AlgElt& a, const AlgElt& b) const;

  // Renaming functor: a disjoint copy with `suffix` appended to every name.
  DgAlgebraPresentation primed(const std::string& suffix = "'") const;
};

// The opposite algebra: same basis, left/right idempotents swapped, and
// mu2 keys reversed.
DgAlgebraPresentation opposite_algebra(const DgAlgebraPresentation& p);

ValidationReport validate_algebra(const DgAlgebraPresentation& p);

// The torus algebra: idempotents iota0, iota1; Reeb chords rho1, rho2, rho3,
// rho12, rho23, rho123; products rho1.rho2 = rho12, rho2.rho3 = rho23,
// rho1.rho23 = rho123, rho12.rho3 = rho123; mu1 = 0.
DgAlgebraPresentation torus_algebra();

// A circle with 4k marked points, a fixed-point-free matching involution,
// and a basepoint in the gap between point 4k-1 and point 0.  Surgering all
// matched pairs must yield a single circle (genus-k surface condition).
struct PointedMatchedCircle {
  std::size_t points = 0;               // 4k
  std::vector<std::size_t> matching;    // involution, matching[p] != p

  std::size_t genus() const { return points / 4; }
  bool operator==(const PointedMatchedCircle& o) const {
    return points == o.points && matching == o.matching;
  }
};

// Number of circles obtained by surgering every matched pair.
std::size_t circles_after_surgery(const PointedMatchedCircle& z);

// The linear pointed matched circle of genus k >= 1: handles chained so that
// consecutive handles interleave, matching the branched double cover of a
// disk with collinear branch points.
PointedMatchedCircle linear_pmc(std::size_t genus);

// Orientation reverse: point p becomes point 4k-1-p; involutive.
PointedMatchedCircle opposite_pmc(const PointedMatchedCircle& z);

}  // namespace bordered
