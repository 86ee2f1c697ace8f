// The explicit surgery triangle over the torus algebra: the three solid-torus
// type D structures, the filtration-changing morphisms between them, the
// connecting morphism theta, and machine verification of the cone
// isomorphisms relating them.
#pragma once

#include <array>

#include "bordered/structures.hpp"

namespace bordered {

// Thrown by build_fixture when one of the defining identities fails; the
// message names the identity.
struct FixtureError : StructureError {
  using StructureError::StructureError;
};

// Type D structures for the three framings of the solid torus:
//   H_inf  = {r},    delta1 r = rho23 (x) r,          iota(r) = iota1
//   H_-1   = {a, b}, delta1 a = (rho1 + rho3) (x) b,  iota(a) = iota0,
//                    delta1 b = 0,                    iota(b) = iota1
//   H_0    = {n},    delta1 n = rho12 (x) n,          iota(n) = iota0
// and the morphisms
//   F^{inf<-1}(r) = rho2 (x) a + b,  F^{-1<0}(a) = n, F^{-1<0}(b) =
//   rho2 (x) n,  F^{inf<0} = 0,      theta(n) = (rho1 + rho3) (x) r.
struct SurgeryTriangleFixture {
  TypeDStructure h_inf, h_minus_one, h_zero;
  TypeDMorphism f_inf_minus_one;  // H_inf -> H_-1
  TypeDMorphism f_minus_one_zero;  // H_-1 -> H_0
  TypeDMorphism f_inf_zero;        // H_inf -> H_0 (zero)
  TypeDMorphism theta;             // H_0 -> H_inf

  // The filtered type D structure over the chain inf < -1 < 0.
  FilteredTypeD filtered() const;
};

// Builds the fixture and verifies at construction that each structure passes
// check_typeD, each morphism is a cycle, the composite F^{-1<0}.F^{inf<-1}
// vanishes, and the filtered structure passes compatibility.
SurgeryTriangleFixture build_fixture();

// Verification of the explicit isomorphism Phi : H_-1 -> Cone(theta),
//   Phi(a) = n,  Phi(b) = r + rho2 (x) n,
// together with its explicit inverse.  `residuals` lists every failed
// identity (empty on success).
struct ConeIsoResult {
  bool ok = false;
  TypeDStructure cone;            // Cone(theta), generators {n, r}
  TypeDMorphism phi;              // H_-1 -> Cone(theta)
  TypeDMorphism phi_inverse;      // Cone(theta) -> H_-1
  std::vector<std::string> residuals;
};

ConeIsoResult verify_cone_iso(const SurgeryTriangleFixture& fx);

// A shipped bounded two-generator test module over the torus algebra,
// justified only by passing check_module; it makes every box tensor with the
// (unbounded) fixture structures well defined.
AInfModule triangle_test_module();

// Certifies the three cone identifications at the level of box tensor
// homology with a bounded test module:
//   Cone(theta)      ~ H_-1,   Cone(F^{inf<-1}) ~ H_0,
//   Cone(F^{-1<0})   ~ H_inf.
// vertex_ranks holds the homology ranks of (H_inf, H_-1, H_0) box T;
// cone_ranks holds those of the three cones box T, in the order above.
struct ReorderedConesResult {
  bool ok = false;
  std::array<std::size_t, 3> vertex_ranks{};
  std::array<std::size_t, 3> cone_ranks{};
};

ReorderedConesResult verify_reordered_cones(const SurgeryTriangleFixture& fx,
                                            const AInfModule& test_module);

}  // namespace bordered
