// Random valid filtered complexes for property tests.
//
// Construction: start from a poset-triangular differential D0 that pairs some
// source generators with distinct target generators in comparable-or-equal
// parts (D0^2 = 0 because sources and targets are disjoint), then conjugate
// by a random filtered automorphism g = id + N where N only maps part i to
// part j with i <= j and is strictly upper-triangular inside each part.  The
// result stays poset-triangular, squares to zero, and its total homology rank
// is (generator count) - 2 (pair count) by construction.
#pragma once

#include <random>
#include <vector>

#include "bordered/filtration.hpp"

namespace testutil {

struct RandomFiltered {
  bordered::FilteredComplex fc;
  std::size_t homology_rank;  // of the total complex
};

inline RandomFiltered random_filtered_complex(const bordered::FinitePoset& poset,
                                              std::size_t max_total_gens,
                                              std::mt19937& rng) {
  using namespace bordered;
  std::size_t n_parts = poset.size();
  std::uniform_int_distribution<std::size_t> part_size_dist(
      0, std::max<std::size_t>(1, max_total_gens / std::max<std::size_t>(1, n_parts)));
  std::vector<std::size_t> part_size(n_parts);
  std::size_t total = 0;
  for (auto& sz : part_size) {
    sz = part_size_dist(rng);
    total += sz;
  }
  if (total == 0) {
    part_size[0] = 1;
    total = 1;
  }

  // Global indexing: generator (p, k) -> offset[p] + k.
  std::vector<std::size_t> offset(n_parts, 0);
  for (std::size_t p = 1; p < n_parts; ++p)
    offset[p] = offset[p - 1] + part_size[p - 1];
  std::vector<std::size_t> part_of(total);
  for (std::size_t p = 0; p < n_parts; ++p)
    for (std::size_t k = 0; k < part_size[p]; ++k) part_of[offset[p] + k] = p;

  auto leq = [&](std::size_t i, std::size_t j) {
    return i == j || poset.less(i, j);
  };
  // Allowed direction in the global index: part(i) <= part(j), and within a
  // part only increasing generator index (keeps automorphisms invertible).
  auto allowed = [&](std::size_t from, std::size_t to) {
    if (part_of[from] == part_of[to]) return from < to;
    return poset.less(part_of[from], part_of[to]);
  };

  // D0: pair up some generators; a source maps to one allowed target, and
  // sources/targets are disjoint sets.
  F2Matrix d(total, total);
  std::vector<int> role(total, 0);  // 0 free, 1 source, 2 target
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<std::size_t> pick(0, total - 1);
  std::size_t pairs = 0;
  for (std::size_t attempt = 0; attempt < 2 * total; ++attempt) {
    std::size_t a = pick(rng), b = pick(rng);
    if (role[a] || role[b] || a == b) continue;
    if (!allowed(a, b)) std::swap(a, b);
    if (!allowed(a, b) || role[a] || role[b]) continue;
    d.flip(b, a);
    role[a] = 1;
    role[b] = 2;
    ++pairs;
  }

  // Conjugate by g = id + N (N allowed-direction, nilpotent) via
  // D = g D0 g^{-1}; compute g^{-1} = id + N + N^2 + ... (N is nilpotent).
  F2Matrix g = F2Matrix::identity(total);
  for (std::size_t t = 0; t < 2 * total; ++t) {
    std::size_t a = pick(rng), b = pick(rng);
    if (a != b && allowed(a, b) && coin(rng)) g.flip(b, a);
  }
  F2Matrix n_part = mat_add(g, F2Matrix::identity(total));
  F2Matrix gi = F2Matrix::identity(total);
  F2Matrix pw = F2Matrix::identity(total);
  for (std::size_t t = 0; t < total; ++t) {
    pw = mat_mul(pw, n_part);
    if (pw.is_zero()) break;
    gi = mat_add(gi, pw);
  }
  F2Matrix D = mat_mul(g, mat_mul(d, gi));

  // Split D into parts and connectors.
  RandomFiltered out;
  out.fc.poset = poset;
  out.homology_rank = total - 2 * pairs;
  std::vector<F2Matrix> internal;
  for (std::size_t p = 0; p < n_parts; ++p) {
    F2Matrix dp(part_size[p], part_size[p]);
    for (std::size_t c = 0; c < part_size[p]; ++c)
      for (std::size_t r : D.col(offset[p] + c)) {
        if (part_of[r] == p) dp.flip(r - offset[p], c);
      }
    std::vector<F2Complex::Gen> gens;
    for (std::size_t k = 0; k < part_size[p]; ++k)
      gens.push_back({"p" + std::to_string(p) + "g" + std::to_string(100 + k),
                      std::nullopt});
    out.fc.parts.emplace_back(std::move(gens), std::move(dp));
  }
  for (auto [i, j] : poset.comparable_pairs()) {
    F2Matrix conn(part_size[j], part_size[i]);
    bool nonzero = false;
    for (std::size_t c = 0; c < part_size[i]; ++c)
      for (std::size_t r : D.col(offset[i] + c))
        if (part_of[r] == j) {
          conn.flip(r - offset[j], c);
          nonzero = true;
        }
    if (nonzero) out.fc.connectors.emplace(std::make_pair(i, j), std::move(conn));
  }
  (void)leq;
  return out;
}

}  // namespace testutil
