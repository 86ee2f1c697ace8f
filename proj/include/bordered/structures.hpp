// Type D structures, A-infinity modules, DA and DD bimodules over dg algebra
// presentations; their structure equations, morphism complexes, mapping cones,
// filtered variants, and (filtered) box tensor products.
#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bordered/algebra.hpp"

namespace bordered {

// Thrown when a box tensor product cannot be formed because neither factor
// carries a boundedness certificate.
struct BoundednessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One term a (x) y of a type D output: (algebra basis index, generator index).
using DTerm = std::pair<std::size_t, std::size_t>;
// An F_2-combination of such terms (presence = coefficient 1).
using DElt = std::set<DTerm>;

// A (left) type D structure over a dg algebra: delta1[x] is the
// F_2-combination of terms a (x) y with left-idem(a) = idem(x) and
// right-idem(a) = idem(y).
struct TypeDStructure {
  struct Gen {
    std::string name;
    std::size_t idem;  // idempotent index in `algebra`
  };

  DgAlgebraPresentation algebra;
  std::vector<Gen> generators;
  std::vector<DElt> delta1;  // one entry per generator

  std::size_t index_of(const std::string& name) const;
};

// Structure equation (mu1 (x) id) delta1 + (mu2 (x) id)(id (x) delta1) delta1
// = 0, plus idempotent discipline.  Violations name the offending generator.
ValidationReport check_typeD(const TypeDStructure& x);

// Conservative boundedness certificate: the generator graph (an edge x -> y
// per term of delta1(x)) is acyclic, so iterates of delta1 vanish.
bool typeD_is_bounded(const TypeDStructure& x);

// A degree-preserving Ground-linear map X -> Y: terms[x] is an
// F_2-combination of terms a (x) y with y a generator of Y.
struct TypeDMorphism {
  std::vector<DElt> terms;  // one entry per generator of X
};

TypeDMorphism zero_morphism(const TypeDStructure& x, const TypeDStructure& y);
TypeDMorphism identity_morphism(const TypeDStructure& x);

// d(h) = (mu1 (x) id) h + (mu2 (x) id) applied to delta1_X-then-h and
// h-then-delta1_Y.  The earlier map along the module flow supplies the LEFT
// mu2 input.
TypeDMorphism morphism_differential(const TypeDStructure& x,
                                    const TypeDStructure& y,
                                    const TypeDMorphism& h);

// Composite of g : X -> Y then h : Y -> Z; g's algebra output multiplies on
// the left of h's.
TypeDMorphism compose_typeD(const TypeDStructure& x, const TypeDStructure& y,
                            const TypeDStructure& z, const TypeDMorphism& h,
                            const TypeDMorphism& g);

bool morphism_is_zero(const TypeDMorphism& h);

// Cone of a cycle f : X -> Y: generators of X then generators of Y, with
// delta1 = delta1_X + delta1_Y + f.  Throws ArgumentError if d(f) != 0.
// Clashing generator names on the Y side receive the suffix "~".
TypeDStructure mapping_cone(const TypeDStructure& x, const TypeDStructure& y,
                            const TypeDMorphism& f);

// A strictly unital right A-infinity module over a dg algebra.  The action
// table stores m_{1+k}(x, a_1, ..., a_k) for words of non-idempotent basis
// elements only; the unit acts structurally (m_2(x, iota) = x when iota is
// x's idempotent, higher actions with idempotent inputs vanish).  Missing
// entries are zero.  `bounded` certifies that all actions with more than
// `arity_bound` algebra inputs vanish.
struct AInfModule {
  struct Gen {
    std::string name;
    std::size_t idem;  // right idempotent
  };
  using Key = std::pair<std::size_t, std::vector<std::size_t>>;

  DgAlgebraPresentation algebra;
  std::vector<Gen> generators;
  std::map<Key, std::set<std::size_t>> actions;
  bool bounded = false;
  std::size_t arity_bound = 0;

  std::size_t index_of(const std::string& name) const;
  // m_{1+k}(x, word); handles idempotent inputs structurally.
  std::set<std::size_t> act(std::size_t x,
                            const std::vector<std::size_t>& word) const;
  std::set<std::size_t> act(const std::set<std::size_t>& xs,
                            const std::vector<std::size_t>& word) const;
};

// A-infinity module relations on all composable words up to arity_bound + 1
// (or the table's maximal arity + 1 when unbounded), plus table discipline.
ValidationReport check_module(const AInfModule& m);

// A strictly unital A-infinity module morphism M -> N: components
// F_{1+k}(x, a_1, ..., a_k); components with idempotent inputs vanish.
struct AInfMorphism {
  std::map<AInfModule::Key, std::set<std::size_t>> terms;
  std::size_t arity_bound = 0;  // components above this arity vanish

  std::set<std::size_t> eval(std::size_t x,
                             const std::vector<std::size_t>& word) const;
  std::set<std::size_t> eval(const std::set<std::size_t>& xs,
                             const std::vector<std::size_t>& word) const;
};

// d(F) evaluated at (x, word): F after/before the module actions plus the
// input differentials and contractions.
std::set<std::size_t> module_morphism_differential_at(
    const AInfModule& m, const AInfModule& n, const AInfMorphism& f,
    std::size_t x, const std::vector<std::size_t>& word);

// (F . G) evaluated at (x, word) = sum over splittings F(G(x, a_1..a_i),
// a_{i+1}..a_n).
std::set<std::size_t> module_morphism_compose_at(
    const AInfMorphism& f, const AInfMorphism& g, std::size_t x,
    const std::vector<std::size_t>& word);

// A type DA bimodule: left (output) algebra A, right (input) algebra B.
// delta1k stores delta^1_{1+k}(x, b_1, ..., b_k) for words of non-idempotent
// B-basis elements; strict unitality supplies delta^1_2(x, iota) =
// idem_A(x) (x) x.  `higher_vanish` certifies operational boundedness above
// arity_bound.
struct DAStructure {
  struct Gen {
    std::string name;
    std::size_t left_idem;   // in A
    std::size_t right_idem;  // in B
  };
  using Key = std::pair<std::size_t, std::vector<std::size_t>>;

  DgAlgebraPresentation left_algebra;
  DgAlgebraPresentation right_algebra;
  std::vector<Gen> generators;
  std::map<Key, DElt> delta1k;
  bool higher_vanish = false;
  std::size_t arity_bound = 0;

  std::size_t index_of(const std::string& name) const;
  DElt act(std::size_t x, const std::vector<std::size_t>& word) const;
};

ValidationReport check_DA(const DAStructure& d);

// A type DD bimodule over A and A': differential[x] is an F_2-combination of
// triples (a, y, a').  The unprimed coefficients compose source-to-target,
// the primed ones target-to-source, so in the structure equation the second
// step's primed output multiplies on the left.
struct DDStructure {
  struct Gen {
    std::string name;
    std::size_t idem;        // in A
    std::size_t idem_prime;  // in A'
  };
  using Term = std::tuple<std::size_t, std::size_t, std::size_t>;  // a, y, a'

  DgAlgebraPresentation algebra;
  DgAlgebraPresentation algebra_prime;
  std::vector<Gen> generators;
  std::vector<std::set<Term>> differential;

  std::size_t index_of(const std::string& name) const;
};

ValidationReport check_DD(const DDStructure& d);

// The identity DD bimodule of an algebra with designated chords: generators
// are the complementary idempotent pairs (I, comp(I)'); each chord xi with
// comp(left(xi)) = right(xi) contributes xi (x) y (x) xi'.  `complement`
// maps each idempotent index to its complementary idempotent index and must
// be a fixed-point-free-or-not involution of the idempotent set.
DDStructure dd_identity(const DgAlgebraPresentation& a,
                        const std::vector<std::size_t>& complement);

// Poset-filtered type D structure: one part per poset element (all over the
// same algebra) and degree-zero connecting morphisms h^{i<j}.  Compatibility:
// d(h^{i<k}) = sum_{i<j<k} h^{j<k} . h^{i<j}.
struct FilteredTypeD {
  FinitePoset poset;
  std::vector<TypeDStructure> parts;
  std::map<std::pair<std::size_t, std::size_t>, TypeDMorphism> connectors;

  const TypeDMorphism* connector(std::size_t i, std::size_t j) const;
};

ValidationReport check_filtered_typeD(const FilteredTypeD& f);

// Poset-filtered A-infinity module, with A-infinity morphism connectors.
struct FilteredAInfModule {
  FinitePoset poset;
  std::vector<AInfModule> parts;
  std::map<std::pair<std::size_t, std::size_t>, AInfMorphism> connectors;

  const AInfMorphism* connector(std::size_t i, std::size_t j) const;
};

ValidationReport check_filtered_module(const FilteredAInfModule& f);

// Poset-filtered DA structure, with DA morphism connectors (same table shape
// as delta1k, evaluated strictly unitally with vanishing idempotent inputs).
struct DAMorphism {
  std::map<DAStructure::Key, DElt> terms;
  std::size_t arity_bound = 0;

  DElt eval(std::size_t x, const std::vector<std::size_t>& word) const;
};

struct FilteredDAStructure {
  FinitePoset poset;
  std::vector<DAStructure> parts;
  std::map<std::pair<std::size_t, std::size_t>, DAMorphism> connectors;

  const DAMorphism* connector(std::size_t i, std::size_t j) const;
};

ValidationReport check_filtered_DA(const FilteredDAStructure& f);

// Box tensor product of a right A-infinity module and a type D structure over
// the same algebra.  Generators are the idempotent-compatible pairs x (x) y,
// named "x*y"; the differential sums m_{1+k}(x, a_1..a_k) (x) y_k over
// iterated delta1 paths.  Requires m.bounded or typeD_is_bounded(p).
F2Complex box_tensor(const AInfModule& m, const TypeDStructure& p);

// Box tensor product of a right A-infinity module over A with a DD bimodule
// over (A, A'): the module actions consume the unprimed outputs along
// iterated DD differentials, and the primed outputs (which compose
// target-to-source) survive as the type D coefficients.  The result is a
// type D structure over the opposite of A'.  Requires m.bounded or an
// acyclic DD generator graph.
TypeDStructure box_tensor_DD(const AInfModule& m, const DDStructure& dd);

// Filtered box tensor product: product poset, parts box_tensor(M_i, P_j),
// connectors given by interleaving connector steps h^1 on the type D side
// among iterated delta1 runs and feeding every algebra output, in flow
// order, to F^{i<=i'} (the internal action when i = i').
FilteredComplex filtered_box_tensor(const FilteredAInfModule& m,
                                    const FilteredTypeD& p);

// ---- Twisted-complex (polygon-family) data ---------------------------------

// A generator of a chain group CF(i, j): ((i, j), basis index).
using PolyGen = std::pair<std::pair<std::size_t, std::size_t>, std::size_t>;

// A finite family of chain groups CF(i, j) for poset pairs i < j, with
// multilinear operation tables m_n.  A table key lists the basis arguments in
// application order xi_{n-1,n}, ..., xi_{0,1} (descending); the output lies
// in CF(i_0, i_n).  m_1 keys have length one and give the differentials.
struct PolygonFamily {
  FinitePoset poset;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>>
      groups;
  std::map<std::vector<PolyGen>, std::set<std::size_t>> products;
};

// Optional module data over the family: groups CF(alpha, i) and tables
// m_{n+1}(xi_{n-1,n}, ..., xi_{0,1}, x) with the module argument last.
struct AlphaModuleData {
  std::map<std::size_t, std::vector<std::string>> groups;
  std::map<std::pair<std::vector<PolyGen>,
                     std::pair<std::size_t, std::size_t>>,
           std::set<std::size_t>>
      tables;
};

// Formal chains eta^{i<j} in CF(i, j), as F_2-combinations of basis indices.
using ChainAssignment =
    std::map<std::pair<std::size_t, std::size_t>, std::set<std::size_t>>;

// Validates (a) the multilinear A-infinity relation of the supplied tables up
// to the tabulated arity, and (b) the Maurer-Cartan compatibility of the
// chains: for each i < j the sum over chains i = i_0 < ... < i_n = j of
// m_n(eta^{i_{n-1}<i_n}, ..., eta^{i_0<i_1}) vanishes.  When `alpha` is
// supplied, also assembles the induced filtered complex on the CF(alpha, i)
// and validates it; the assembled complex is written to *out when non-null.
ValidationReport twisted_complex_validate(const PolygonFamily& family,
                                          const ChainAssignment& chains,
                                          const AlphaModuleData* alpha = nullptr,
                                          FilteredComplex* out = nullptr);

// ---- Connected sums of chain families --------------------------------------

// Chains of attaching-circle data on a poset: formal F_2 sums of generator
// names per strictly comparable pair, plus a designated top-class generator.
struct ChainFamilyData {
  FinitePoset poset;
  std::map<std::pair<std::size_t, std::size_t>, std::set<std::string>> chains;
  std::string theta;
};

// Pure data transform: on the product poset, omega^{(i0,j0)<(i1,j1)} is
// Theta (x) zeta when i0 = i1, eta (x) Theta when j0 = j1, and zero
// otherwise.  Tensor generators are named "left*right" and then renamed
// through `nearest_point` when a correspondence is supplied; the map must be
// injective on the names it mentions.
ChainFamilyData connected_sum_chains(
    const ChainFamilyData& left, const ChainFamilyData& right,
    const std::map<std::string, std::string>& nearest_point = {});

}  // namespace bordered
