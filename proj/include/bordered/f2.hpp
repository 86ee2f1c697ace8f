// Sparse exact linear algebra over the two-element field, chain complexes,
// homology ranks, and cancellation reduction.  Everything downstream (filtered
// complexes, box tensor products, spectral sequences) sits on top of this.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bordered {

// Thrown when matrix shapes do not line up.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a structural invariant (d^2 = 0, grading discipline, ...) fails.
struct StructureError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Sparse matrix over F_2, stored column-major: col(j) is the sorted list of
// rows carrying a 1 in column j.  Column-major because the dominant operation
// is "apply the differential to a generator", i.e. read one column.
class F2Matrix {
 public:
  F2Matrix() : rows_(0), cols_(0) {}
  F2Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), col_(cols) {}

  static F2Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const;
  // Toggle (add 1 to) an entry; F_2 addition is the natural mutation.
  void flip(std::size_t r, std::size_t c);
  void set(std::size_t r, std::size_t c, bool value);

  const std::vector<std::size_t>& col(std::size_t c) const { return col_[c]; }
  // Replace a whole column; rows need not be sorted, duplicates cancel.
  void set_col(std::size_t c, std::vector<std::size_t> entries);

  bool is_zero() const;
  std::size_t entry_count() const;

  F2Matrix transpose() const;

  // Rank via Gaussian elimination (non-destructive).
  std::size_t rank() const;

  bool operator==(const F2Matrix& other) const;
  bool operator!=(const F2Matrix& other) const { return !(*this == other); }

 private:
  std::size_t rows_, cols_;
  std::vector<std::vector<std::size_t>> col_;
};

F2Matrix mat_mul(const F2Matrix& a, const F2Matrix& b);
F2Matrix mat_add(const F2Matrix& a, const F2Matrix& b);

// A chain complex over F_2: named generators, an optional integer homological
// grading per generator, and a differential with d^2 = 0.  The differential
// maps generator j to the support of column j.  Gradings, when present on all
// generators, must drop by exactly one along the differential.
class F2Complex {
 public:
  struct Gen {
    std::string name;
    std::optional<int> grading;
  };

  F2Complex() = default;
  // Validates d^2 = 0 and the grading discipline; throws StructureError.
  F2Complex(std::vector<Gen> generators, F2Matrix differential);

  const std::vector<Gen>& generators() const { return gens_; }
  std::size_t size() const { return gens_.size(); }
  const F2Matrix& differential() const { return d_; }
  bool graded() const;

 private:
  std::vector<Gen> gens_;
  F2Matrix d_;
};

// rank(ker d) - rank(im d), keyed by grading.  Ungraded complexes report a
// single total rank under key 0 of an ungraded flag-free map; we expose both.
struct HomologyRanks {
  bool graded = false;
  std::map<int, std::size_t> by_grading;  // empty when !graded
  std::size_t total = 0;
};

HomologyRanks homology_rank(const F2Complex& c);

// Result of cancellation reduction: the reduced complex together with the
// chain homotopy equivalence data relating it to the input.
//   project  : C -> C'   (rows = reduced gens, cols = input gens)
//   include  : C' -> C
//   homotopy : C -> C    with  include.project = id + d H + H d,
//                              project.include = id.
struct Reduction {
  F2Complex reduced;
  F2Matrix project;
  F2Matrix include;
  F2Matrix homotopy;
};

// Repeatedly cancel unit entries of the differential.  Over F_2 every nonzero
// entry is a unit, so the reduced differential is zero and the reduced
// generator count equals the homology rank.  Cancellation order follows the
// canonical lexicographic order on generator names, for reproducibility.
Reduction cancel_reduce(const F2Complex& c);

}  // namespace bordered
