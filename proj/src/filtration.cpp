#include "bordered/filtration.hpp"

#include <algorithm>

namespace bordered {

FinitePoset::FinitePoset(
    std::vector<std::string> elements,
    std::vector<std::pair<std::string, std::string>> relation)
    : elements_(std::move(elements)) {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (!index_.emplace(elements_[i], i).second)
      throw ArgumentError("poset element names must be unique");
  }
  less_.assign(elements_.size(),
               std::vector<bool>(elements_.size(), false));
  for (const auto& [a, b] : relation) less_[index_of(a)][index_of(b)] = true;
  // Floyd-Warshall transitive closure.
  for (std::size_t k = 0; k < elements_.size(); ++k)
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (less_[i][k])
        for (std::size_t j = 0; j < elements_.size(); ++j)
          if (less_[k][j]) less_[i][j] = true;
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (less_[i][i])
      throw ArgumentError("relation has a cycle (order must be strict)");
}

std::size_t FinitePoset::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ArgumentError("unknown poset element " + name);
  return it->second;
}

std::vector<std::pair<std::size_t, std::size_t>>
FinitePoset::comparable_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (less_[i][j]) out.emplace_back(i, j);
  return out;
}

FinitePoset FinitePoset::chain(std::size_t n) {
  std::vector<std::string> el;
  std::vector<std::pair<std::string, std::string>> rel;
  for (std::size_t i = 0; i < n; ++i) el.push_back(std::to_string(i));
  for (std::size_t i = 0; i + 1 < n; ++i)
    rel.emplace_back(std::to_string(i), std::to_string(i + 1));
  return FinitePoset(std::move(el), std::move(rel));
}

FinitePoset FinitePoset::chain_zero_one_inf() {
  return FinitePoset({"0", "1", "inf"}, {{"0", "1"}, {"1", "inf"}});
}

namespace {

FinitePoset cube_poset(std::size_t n, const std::string& digits) {
  // Labels are words over `digits` (ordered); product order per coordinate.
  std::vector<std::string> el;
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= digits.size();
  for (std::size_t code = 0; code < count; ++code) {
    std::string label(n, digits[0]);
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      label[n - 1 - i] = digits[c % digits.size()];
      c /= digits.size();
    }
    el.push_back(label);
  }
  std::vector<std::pair<std::string, std::string>> rel;
  // Covering relations: bump one coordinate to the next digit.
  for (const auto& a : el) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t pos = digits.find(a[i]);
      if (pos + 1 < digits.size()) {
        std::string b = a;
        b[i] = digits[pos + 1];
        rel.emplace_back(a, b);
      }
    }
  }
  return FinitePoset(std::move(el), std::move(rel));
}

}  // namespace

FinitePoset FinitePoset::bool_cube(std::size_t n) { return cube_poset(n, "01"); }

FinitePoset FinitePoset::resolution_cube(std::size_t c) {
  return cube_poset(c, "01i");
}

FinitePoset FinitePoset::product(const FinitePoset& a, const FinitePoset& b) {
  std::vector<std::string> el;
  for (const auto& x : a.elements())
    for (const auto& y : b.elements()) el.push_back(x + "|" + y);
  std::vector<std::pair<std::string, std::string>> rel;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      for (std::size_t i2 = 0; i2 < a.size(); ++i2)
        for (std::size_t j2 = 0; j2 < b.size(); ++j2) {
          bool ale = (i == i2) || a.less(i, i2);
          bool ble = (j == j2) || b.less(j, j2);
          if (ale && ble && !(i == i2 && j == j2))
            rel.emplace_back(a.elements()[i] + "|" + b.elements()[j],
                             a.elements()[i2] + "|" + b.elements()[j2]);
        }
  return FinitePoset(std::move(el), std::move(rel));
}

const F2Matrix* FilteredComplex::connector(std::size_t i,
                                           std::size_t j) const {
  auto it = connectors.find({i, j});
  return it == connectors.end() ? nullptr : &it->second;
}

ValidationReport validate_filtered(const FilteredComplex& fc) {
  ValidationReport report;
  if (fc.parts.size() != fc.poset.size()) {
    report.violations.push_back("part count does not match poset size");
    return report;
  }
  for (const auto& [key, mat] : fc.connectors) {
    auto [i, j] = key;
    if (i >= fc.poset.size() || j >= fc.poset.size() || !fc.poset.less(i, j)) {
      report.violations.push_back("connector on non-comparable pair (" +
                                  std::to_string(i) + "," + std::to_string(j) +
                                  ")");
      continue;
    }
    if (mat.rows() != fc.parts[j].size() || mat.cols() != fc.parts[i].size())
      report.violations.push_back("connector (" + fc.poset.elements()[i] +
                                  "<" + fc.poset.elements()[j] +
                                  ") has wrong shape");
  }
  if (!report.ok()) return report;

  auto conn_or_zero = [&](std::size_t i, std::size_t j) {
    const F2Matrix* m = fc.connector(i, j);
    return m ? *m : F2Matrix(fc.parts[j].size(), fc.parts[i].size());
  };
  for (auto [i, k] : fc.poset.comparable_pairs()) {
    // d . D^{i<k} + D^{i<k} . d  ==  sum_{i<j<k} D^{j<k} . D^{i<j}
    F2Matrix Dik = conn_or_zero(i, k);
    F2Matrix lhs = mat_add(mat_mul(fc.parts[k].differential(), Dik),
                           mat_mul(Dik, fc.parts[i].differential()));
    F2Matrix rhs(fc.parts[k].size(), fc.parts[i].size());
    for (std::size_t j = 0; j < fc.poset.size(); ++j)
      if (fc.poset.less(i, j) && fc.poset.less(j, k))
        rhs = mat_add(rhs, mat_mul(conn_or_zero(j, k), conn_or_zero(i, j)));
    if (lhs != rhs)
      report.violations.push_back("compatibility fails at (" +
                                  fc.poset.elements()[i] + "," +
                                  fc.poset.elements()[k] + ")");
  }
  return report;
}

namespace {

// Offsets of each part inside the direct sum, plus assembled generators.
struct SumLayout {
  std::vector<std::size_t> offset;
  std::vector<F2Complex::Gen> gens;
  std::size_t total = 0;
};

SumLayout layout(const FilteredComplex& fc) {
  SumLayout s;
  s.offset.resize(fc.parts.size());
  for (std::size_t p = 0; p < fc.parts.size(); ++p) {
    s.offset[p] = s.total;
    for (const auto& g : fc.parts[p].generators())
      s.gens.push_back({fc.poset.elements()[p] + "/" + g.name, g.grading});
    s.total += fc.parts[p].size();
  }
  // Gradings survive only if every part is graded; otherwise drop them so the
  // direct sum stays a valid (ungraded) complex.
  bool all_graded = !s.gens.empty();
  for (const auto& g : s.gens)
    if (!g.grading) all_graded = false;
  if (!all_graded)
    for (auto& g : s.gens) g.grading.reset();
  return s;
}

}  // namespace

F2Complex total_complex(const FilteredComplex& fc) {
  auto report = validate_filtered(fc);
  if (!report.ok())
    throw StructureError("total_complex: invalid filtered complex: " +
                         report.violations.front());
  SumLayout s = layout(fc);
  F2Matrix d(s.total, s.total);
  for (std::size_t p = 0; p < fc.parts.size(); ++p) {
    const F2Matrix& dp = fc.parts[p].differential();
    for (std::size_t c = 0; c < dp.cols(); ++c)
      for (std::size_t r : dp.col(c)) d.flip(s.offset[p] + r, s.offset[p] + c);
  }
  for (const auto& [key, mat] : fc.connectors) {
    auto [i, j] = key;
    for (std::size_t c = 0; c < mat.cols(); ++c)
      for (std::size_t r : mat.col(c)) d.flip(s.offset[j] + r, s.offset[i] + c);
  }
  return F2Complex(std::move(s.gens), std::move(d));
}

F2Complex associated_graded(const FilteredComplex& fc) {
  SumLayout s = layout(fc);
  F2Matrix d(s.total, s.total);
  for (std::size_t p = 0; p < fc.parts.size(); ++p) {
    const F2Matrix& dp = fc.parts[p].differential();
    for (std::size_t c = 0; c < dp.cols(); ++c)
      for (std::size_t r : dp.col(c)) d.flip(s.offset[p] + r, s.offset[p] + c);
  }
  return F2Complex(std::move(s.gens), std::move(d));
}

std::vector<int> standard_cube_rank(const FinitePoset& poset) {
  std::vector<int> rank;
  rank.reserve(poset.size());
  for (const auto& label : poset.elements()) {
    int r = 0;
    for (char c : label) {
      if (c == '1') r += 1;
      else if (c == 'i') r += 2;
      else if (c != '0')
        throw ArgumentError("standard_cube_rank: non-cube label " + label);
    }
    rank.push_back(r);
  }
  return rank;
}

std::size_t SpectralSequencePages::page_rank(std::size_t r, int degree) const {
  // Past the last computed page the sequence has stabilized; clamp.
  if (!rank_grid.empty()) {
    std::size_t last = rank_grid.rbegin()->first.first;
    if (r > last) r = last;
  }
  auto it = rank_grid.find({r, degree});
  return it == rank_grid.end() ? 0 : it->second;
}

std::size_t SpectralSequencePages::total_rank_at(std::size_t r) const {
  if (!rank_grid.empty()) {
    std::size_t last = rank_grid.rbegin()->first.first;
    if (r > last) r = last;
  }
  std::size_t t = 0;
  for (const auto& [key, v] : rank_grid)
    if (key.first == r) t += v;
  return t;
}

SpectralSequencePages spectral_sequence(const FilteredComplex& fc,
                                        const std::vector<int>& rank_fn) {
  if (rank_fn.size() != fc.poset.size())
    throw ArgumentError("rank_fn size does not match poset");
  for (auto [i, j] : fc.poset.comparable_pairs())
    if (!(rank_fn[i] < rank_fn[j]))
      throw ArgumentError("rank_fn is not strictly order-preserving");
  auto report = validate_filtered(fc);
  if (!report.ok())
    throw StructureError("spectral_sequence: invalid filtered complex");

  // Work on the total complex, remembering each generator's filtration
  // degree.  Pages are computed by filtration-respecting cancellation:
  // cancel all differential entries of shift < r, then read off page r.
  // Cancelling a shift-r entry only creates entries of shift >= r (new
  // entries have shift s1 + s2 - r with s1, s2 >= r), so the sweep is
  // monotone in r.
  SumLayout s = layout(fc);
  std::vector<int> degree(s.total, 0);
  for (std::size_t p = 0; p < fc.parts.size(); ++p)
    for (std::size_t g = 0; g < fc.parts[p].size(); ++g)
      degree[s.offset[p] + g] = rank_fn[p];

  F2Complex tot = total_complex(fc);
  F2Matrix d = tot.differential();
  std::vector<bool> alive(s.total, true);

  // Deterministic cancellation order by generator name.
  std::vector<std::size_t> order(s.total);
  for (std::size_t i = 0; i < s.total; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s.gens[a].name < s.gens[b].name;
  });

  int min_deg = 0, max_deg = 0;
  if (!rank_fn.empty()) {
    min_deg = *std::min_element(rank_fn.begin(), rank_fn.end());
    max_deg = *std::max_element(rank_fn.begin(), rank_fn.end());
  }
  std::size_t max_shift = static_cast<std::size_t>(max_deg - min_deg);

  SpectralSequencePages pages;
  bool stabilized_recorded = false;
  for (std::size_t r = 0; r <= max_shift + 1; ++r) {
    // Record page r: surviving ranks per degree and the shift-r part of d.
    std::vector<std::size_t> survivors;
    for (std::size_t i : order)
      if (alive[i]) survivors.push_back(i);
    for (std::size_t i : survivors)
      pages.rank_grid[{r, degree[i]}] += 1;
    // Make every degree explicit, including empty ones at this page.
    for (int p = min_deg; p <= max_deg; ++p) pages.rank_grid[{r, p}] += 0;

    SpectralSequencePages::Page page;
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < survivors.size(); ++i) pos[survivors[i]] = i;
    page.d = F2Matrix(survivors.size(), survivors.size());
    bool any_entries = false;
    for (std::size_t j = 0; j < survivors.size(); ++j) {
      page.degrees.push_back(degree[survivors[j]]);
      for (std::size_t row : d.col(survivors[j])) {
        if (!alive[row]) continue;
        any_entries = true;
        if (static_cast<std::size_t>(degree[row] - degree[survivors[j]]) == r)
          page.d.flip(pos.at(row), j);
      }
    }
    pages.page_differentials[r] = std::move(page);

    if (!any_entries && !stabilized_recorded) {
      pages.stabilization_page = r;
      stabilized_recorded = true;
    }

    // Cancel all entries of shift exactly r (repeat: cancellations may
    // create further shift-r entries).
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t x : order) {
        if (!alive[x]) continue;
        std::size_t y = s.total;
        for (std::size_t row : d.col(x)) {
          if (!alive[row] || row == x) continue;
          if (static_cast<std::size_t>(degree[row] - degree[x]) != r) continue;
          if (y == s.total || s.gens[row].name < s.gens[y].name) y = row;
        }
        if (y == s.total) continue;
        // d(w) += <d w, y> (d x + y); then delete x and y.
        std::vector<std::size_t> dx;
        for (std::size_t row : d.col(x))
          if (alive[row] && row != y) dx.push_back(row);
        for (std::size_t w = 0; w < s.total; ++w) {
          if (!alive[w] || w == x || !d.get(y, w)) continue;
          for (std::size_t row : dx) d.flip(row, w);
          d.flip(y, w);
        }
        alive[x] = alive[y] = false;
        d.set_col(x, {});
        d.set_col(y, {});
        progress = true;
      }
    }
  }
  if (!stabilized_recorded)
    pages.stabilization_page = max_shift + 1;
  return pages;
}

}  // namespace bordered
