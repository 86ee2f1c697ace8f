// Finite posets, poset-filtered chain complexes, total complexes, associated
// graded complexes, and spectral-sequence pages over F_2.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bordered/f2.hpp"

namespace bordered {

// A finite strict partial order on named elements.  The relation handed to
// the constructor is transitively closed; cycles are rejected.
class FinitePoset {
 public:
  FinitePoset() = default;  // empty poset
  FinitePoset(std::vector<std::string> elements,
              std::vector<std::pair<std::string, std::string>> relation);

  // Chain 0 < 1 < ... < n-1 with decimal labels.
  static FinitePoset chain(std::size_t n);
  // The three-element chain 0 < 1 < inf.
  static FinitePoset chain_zero_one_inf();
  // {0,1}^n with the product order; labels are bit strings like "010".
  static FinitePoset bool_cube(std::size_t n);
  // {0,1,inf}^c with the product order 0 < 1 < inf per coordinate; labels use
  // the character 'i' for inf, e.g. "01i".
  static FinitePoset resolution_cube(std::size_t c);
  // Product poset; labels are "left|right".
  static FinitePoset product(const FinitePoset& a, const FinitePoset& b);

  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  std::size_t index_of(const std::string& name) const;
  bool less(std::size_t i, std::size_t j) const { return less_[i][j]; }
  // All strictly related pairs (i, j) with i < j, in deterministic order.
  std::vector<std::pair<std::size_t, std::size_t>> comparable_pairs() const;

  bool operator==(const FinitePoset& other) const {
    return elements_ == other.elements_ && less_ == other.less_;
  }

 private:
  std::vector<std::string> elements_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<bool>> less_;
};

// An I-filtered chain complex: one part C^i per poset element and connecting
// maps D^{i<j} : C^i -> C^j subject to the compatibility condition
//   d . D^{i<k} + D^{i<k} . d = sum_{i<j<k} D^{j<k} . D^{i<j}   (over F_2).
// Missing connectors are zero.  Empty parts are permitted.
struct FilteredComplex {
  FinitePoset poset;
  std::vector<F2Complex> parts;
  std::map<std::pair<std::size_t, std::size_t>, F2Matrix> connectors;

  const F2Matrix* connector(std::size_t i, std::size_t j) const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks shapes and the compatibility identity for every comparable pair.
ValidationReport validate_filtered(const FilteredComplex& fc);

// Direct sum of the parts with D = sum of internal differentials and
// connectors; generator names are "element/name".  Throws StructureError if
// the input fails validation (D would not square to zero).
F2Complex total_complex(const FilteredComplex& fc);

// Direct sum with only the internal differentials.
F2Complex associated_graded(const FilteredComplex& fc);

// Spectral-sequence pages of a filtered complex with respect to a strictly
// monotone integer rank function on the poset.
struct SpectralSequencePages {
  // (page r, filtration degree) -> surviving rank.
  std::map<std::pair<std::size_t, int>, std::size_t> rank_grid;
  // Page differential d_r, as a matrix over that page's surviving
  // generators, together with their filtration degrees.
  struct Page {
    std::vector<int> degrees;
    F2Matrix d;
  };
  std::map<std::size_t, Page> page_differentials;
  std::size_t stabilization_page = 0;

  std::size_t page_rank(std::size_t r, int degree) const;
  std::size_t total_rank_at(std::size_t r) const;
};

// The standard rank function for {0,1}^n and {0,1,inf}^c cube posets:
// coordinate sum with 0 -> 0, 1 -> 1, inf -> 2.
std::vector<int> standard_cube_rank(const FinitePoset& poset);

// rank_fn holds one integer per poset element and must be strictly
// order-preserving on comparable pairs; otherwise ArgumentError is thrown.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

SpectralSequencePages spectral_sequence(const FilteredComplex& fc,
                                        const std::vector<int>& rank_fn);

}  // namespace bordered
