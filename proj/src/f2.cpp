#include "bordered/f2.hpp"

#include <algorithm>

namespace bordered {

namespace {

// Symmetric difference of two sorted index vectors (F_2 column addition).
std::vector<std::size_t> xor_sorted(const std::vector<std::size_t>& a,
                                    const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
  return out;
}

}  // namespace

F2Matrix F2Matrix::identity(std::size_t n) {
  F2Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.col_[i] = {i};
  return m;
}

bool F2Matrix::get(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw ShapeError("index out of bounds");
  return std::binary_search(col_[c].begin(), col_[c].end(), r);
}

void F2Matrix::flip(std::size_t r, std::size_t c) {
  if (r >= rows_ || c >= cols_) throw ShapeError("index out of bounds");
  auto& v = col_[c];
  auto it = std::lower_bound(v.begin(), v.end(), r);
  if (it != v.end() && *it == r)
    v.erase(it);
  else
    v.insert(it, r);
}

void F2Matrix::set(std::size_t r, std::size_t c, bool value) {
  if (get(r, c) != value) flip(r, c);
}

void F2Matrix::set_col(std::size_t c, std::vector<std::size_t> entries) {
  if (c >= cols_) throw ShapeError("column out of bounds");
  std::sort(entries.begin(), entries.end());
  std::vector<std::size_t> dedup;
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    while (j < entries.size() && entries[j] == entries[i]) ++j;
    if ((j - i) % 2 == 1) {
      if (entries[i] >= rows_) throw ShapeError("row out of bounds");
      dedup.push_back(entries[i]);
    }
    i = j;
  }
  col_[c] = std::move(dedup);
}

bool F2Matrix::is_zero() const {
  for (const auto& v : col_)
    if (!v.empty()) return false;
  return true;
}

std::size_t F2Matrix::entry_count() const {
  std::size_t n = 0;
  for (const auto& v : col_) n += v.size();
  return n;
}

F2Matrix F2Matrix::transpose() const {
  F2Matrix t(cols_, rows_);
  for (std::size_t c = 0; c < cols_; ++c)
    for (std::size_t r : col_[c]) t.col_[r].push_back(c);
  for (auto& v : t.col_) std::sort(v.begin(), v.end());
  return t;
}

std::size_t F2Matrix::rank() const {
  // Column elimination on a scratch copy.
  std::vector<std::vector<std::size_t>> work = col_;
  std::vector<bool> pivot_used(rows_, false);
  std::vector<std::vector<std::size_t>*> pivot_col(rows_, nullptr);
  std::size_t rank = 0;
  for (auto& c : work) {
    while (!c.empty()) {
      std::size_t p = c.front();
      if (!pivot_used[p]) {
        pivot_used[p] = true;
        pivot_col[p] = &c;
        ++rank;
        break;
      }
      c = xor_sorted(c, *pivot_col[p]);
    }
  }
  return rank;
}

bool F2Matrix::operator==(const F2Matrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && col_ == other.col_;
}

F2Matrix mat_mul(const F2Matrix& a, const F2Matrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("mat_mul: dimension mismatch");
  F2Matrix out(a.rows(), b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    std::vector<std::size_t> acc;
    for (std::size_t k : b.col(c)) acc = xor_sorted(acc, a.col(k));
    out.set_col(c, std::move(acc));
  }
  return out;
}

F2Matrix mat_add(const F2Matrix& a, const F2Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("mat_add: dimension mismatch");
  F2Matrix out(a.rows(), a.cols());
  for (std::size_t c = 0; c < a.cols(); ++c)
    out.set_col(c, xor_sorted(a.col(c), b.col(c)));
  return out;
}

F2Complex::F2Complex(std::vector<Gen> generators, F2Matrix differential)
    : gens_(std::move(generators)), d_(std::move(differential)) {
  if (d_.rows() != gens_.size() || d_.cols() != gens_.size())
    throw StructureError("differential shape does not match generator count");
  if (!mat_mul(d_, d_).is_zero())
    throw StructureError("differential does not square to zero");
  bool any = false, all = true;
  for (const auto& g : gens_) {
    if (g.grading) any = true;
    else all = false;
  }
  if (any && !all)
    throw StructureError("either all generators are graded or none are");
  if (any) {
    for (std::size_t c = 0; c < d_.cols(); ++c)
      for (std::size_t r : d_.col(c))
        if (*gens_[r].grading != *gens_[c].grading - 1)
          throw StructureError("differential must lower grading by one");
  }
}

bool F2Complex::graded() const {
  return !gens_.empty() && gens_.front().grading.has_value();
}

HomologyRanks homology_rank(const F2Complex& c) {
  HomologyRanks out;
  const auto& d = c.differential();
  if (!c.graded()) {
    std::size_t r = d.rank();
    out.total = c.size() - 2 * r;
    return out;
  }
  out.graded = true;
  // Split d into graded pieces d_g : C_g -> C_{g-1}.
  std::map<int, std::vector<std::size_t>> level;
  for (std::size_t i = 0; i < c.size(); ++i)
    level[*c.generators()[i].grading].push_back(i);
  std::map<int, std::size_t> piece_rank;  // rank of d_g per source grading g
  for (const auto& [g, src] : level) {
    auto tgt_it = level.find(g - 1);
    if (tgt_it == level.end()) {
      piece_rank[g] = 0;
      continue;
    }
    std::map<std::size_t, std::size_t> tgt_pos;
    for (std::size_t i = 0; i < tgt_it->second.size(); ++i)
      tgt_pos[tgt_it->second[i]] = i;
    F2Matrix sub(tgt_it->second.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
      std::vector<std::size_t> colv;
      for (std::size_t r : d.col(src[j])) colv.push_back(tgt_pos.at(r));
      sub.set_col(j, std::move(colv));
    }
    piece_rank[g] = sub.rank();
  }
  for (const auto& [g, src] : level) {
    std::size_t out_rank = piece_rank.count(g) ? piece_rank[g] : 0;
    std::size_t in_rank = piece_rank.count(g + 1) ? piece_rank[g + 1] : 0;
    std::size_t h = src.size() - out_rank - in_rank;
    out.by_grading[g] = h;
    out.total += h;
  }
  return out;
}

Reduction cancel_reduce(const F2Complex& c) {
  const std::size_t n = c.size();
  // Cancel one unit entry at a time; over F_2 every nonzero entry is a unit,
  // so the reduced differential always ends up zero.  We keep everything in
  // the ambient n-dimensional space and track the surviving generators.
  //
  // Cancelling a pair (x, y) with <d x, y> = 1 uses the step maps
  //   pi(w)   = w  (w not in {x,y}),  pi(x) = 0,  pi(y) = d x + y
  //   iota(w) = w + <d w, y> x,       iota on {x,y} = 0
  //   h(y)    = x,                    h elsewhere = 0
  // which satisfy pi.iota = id and iota.pi = id + d h + h d.  The composite
  // equivalence data accumulates by P <- pi.P, I <- I.iota, H <- H + I.h.P
  // (with the old I, P), giving P.I = id and I.P = id + dH + Hd overall.
  F2Matrix d = c.differential();
  F2Matrix project = F2Matrix::identity(n);  // P : C -> C_cur (ambient coords)
  F2Matrix include = F2Matrix::identity(n);  // I : C_cur -> C
  F2Matrix homotopy(n, n);
  std::vector<bool> alive(n, true);

  // Deterministic cancellation order: lexicographic on generator names.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return c.generators()[a].name < c.generators()[b].name;
  });

  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t x : order) {
      if (!alive[x] || d.col(x).empty()) continue;
      // Name-least live target y with <d x, y> = 1, excluding y = x.
      std::size_t y = n;
      for (std::size_t r : d.col(x)) {
        if (!alive[r] || r == x) continue;
        if (y == n || c.generators()[r].name < c.generators()[y].name) y = r;
      }
      if (y == n) continue;

      // Step maps in ambient coordinates.
      F2Matrix pi = F2Matrix::identity(n);
      F2Matrix iota = F2Matrix::identity(n);
      F2Matrix h(n, n);
      pi.set_col(x, {});
      {
        std::vector<std::size_t> py;  // d x + y, with x/y coords dropped
        for (std::size_t r : d.col(x))
          if (r != y && r != x) py.push_back(r);
        pi.set_col(y, std::move(py));
      }
      iota.set_col(x, {});
      iota.set_col(y, {});
      for (std::size_t w = 0; w < n; ++w) {
        if (!alive[w] || w == x || w == y) continue;
        if (d.get(y, w)) iota.flip(x, w);
      }
      h.flip(x, y);

      homotopy = mat_add(homotopy, mat_mul(include, mat_mul(h, project)));
      project = mat_mul(pi, project);
      include = mat_mul(include, iota);
      d = mat_mul(pi, mat_mul(d, iota));
      alive[x] = alive[y] = false;
      progress = true;
    }
  }

  // Assemble the reduced complex on the surviving generators.
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) survivors.push_back(i);
  std::vector<F2Complex::Gen> gens;
  gens.reserve(survivors.size());
  for (std::size_t i : survivors) gens.push_back(c.generators()[i]);
  F2Matrix dr(survivors.size(), survivors.size());
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < survivors.size(); ++i) pos[survivors[i]] = i;
  for (std::size_t j = 0; j < survivors.size(); ++j) {
    std::vector<std::size_t> colv;
    for (std::size_t r : d.col(survivors[j]))
      if (alive[r]) colv.push_back(pos.at(r));
    dr.set_col(j, std::move(colv));
  }

  // Compress project/include to the reduced basis.
  F2Matrix proj_small(survivors.size(), n);
  F2Matrix inc_small(n, survivors.size());
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    for (std::size_t u = 0; u < n; ++u)
      if (project.get(survivors[i], u)) proj_small.flip(i, u);
    for (std::size_t r : include.col(survivors[i])) inc_small.flip(r, i);
  }

  return Reduction{F2Complex(std::move(gens), std::move(dr)),
                   std::move(proj_small), std::move(inc_small),
                   std::move(homotopy)};
}

}  // namespace bordered
