#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qfst {

using Amplitude = std::complex<double>;

/// Square matrix stored as sorted sparse rows.
///
/// Row q holds the transition weights out of source state q, so entry (q, p)
/// is the amplitude (or probability) of moving from q to p. Machines in this
/// library are mostly permutations with a few dense rows, which is why rows
/// are kept sparse.
class SparseMatrix {
 public:
  using Entry = std::pair<std::size_t, Amplitude>;
  using Row = std::vector<Entry>;

  SparseMatrix() = default;
  explicit SparseMatrix(std::size_t n) : rows_(n) {}

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i].emplace_back(i, Amplitude{1.0, 0.0});
    return m;
  }

  static SparseMatrix from_dense(const std::vector<std::vector<Amplitude>>& dense) {
    SparseMatrix m(dense.size());
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i].size() != dense.size()) throw std::invalid_argument("matrix is not square");
      for (std::size_t j = 0; j < dense.size(); ++j) {
        if (dense[i][j] != Amplitude{}) m.rows_[i].emplace_back(j, dense[i][j]);
      }
    }
    return m;
  }

  static SparseMatrix from_dense(const std::vector<std::vector<double>>& dense) {
    std::vector<std::vector<Amplitude>> c(dense.size());
    for (std::size_t i = 0; i < dense.size(); ++i) c[i].assign(dense[i].begin(), dense[i].end());
    return from_dense(c);
  }

  std::size_t size() const { return rows_.size(); }
  const Row& row(std::size_t r) const { return rows_.at(r); }

  Amplitude at(std::size_t r, std::size_t c) const {
    const Row& row = rows_.at(r);
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, std::size_t col) { return e.first < col; });
    return (it != row.end() && it->first == c) ? it->second : Amplitude{};
  }

  void set(std::size_t r, std::size_t c, Amplitude v) {
    check_index(r);
    check_index(c);
    Row& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, std::size_t col) { return e.first < col; });
    if (it != row.end() && it->first == c) {
      if (v == Amplitude{}) {
        row.erase(it);
      } else {
        it->second = v;
      }
    } else if (v != Amplitude{}) {
      row.insert(it, Entry{c, v});
    }
  }

  /// Replaces row r; duplicate columns are summed and exact zeros dropped.
  void set_row(std::size_t r, Row entries) {
    check_index(r);
    std::map<std::size_t, Amplitude> acc;
    for (const auto& [c, v] : entries) {
      check_index(c);
      acc[c] += v;
    }
    Row row;
    row.reserve(acc.size());
    for (const auto& [c, v] : acc) {
      if (v != Amplitude{}) row.emplace_back(c, v);
    }
    rows_[r] = std::move(row);
  }

  SparseMatrix adjoint() const {
    SparseMatrix t(size());
    for (std::size_t i = 0; i < size(); ++i) {
      for (const auto& [j, v] : rows_[i]) t.rows_[j].emplace_back(i, std::conj(v));
    }
    return t;  // rows stay sorted because i is visited in increasing order
  }

  std::vector<std::vector<Amplitude>> to_dense() const {
    std::vector<std::vector<Amplitude>> d(size(), std::vector<Amplitude>(size()));
    for (std::size_t i = 0; i < size(); ++i) {
      for (const auto& [j, v] : rows_[i]) d[i][j] = v;
    }
    return d;
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  /// Entrywise map; entries mapped to zero are dropped.
  template <class F>
  SparseMatrix transformed(F&& f) const {
    SparseMatrix m(size());
    for (std::size_t i = 0; i < size(); ++i) {
      for (const auto& [j, v] : rows_[i]) {
        Amplitude w = f(v);
        if (w != Amplitude{}) m.rows_[i].emplace_back(j, w);
      }
    }
    return m;
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("matrix size mismatch");
    SparseMatrix c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::map<std::size_t, Amplitude> acc;
      for (const auto& [k, v] : a.rows_[i]) {
        for (const auto& [j, w] : b.rows_[k]) acc[j] += v * w;
      }
      for (const auto& [j, v] : acc) {
        if (v != Amplitude{}) c.rows_[i].emplace_back(j, v);
      }
    }
    return c;
  }

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  void check_index(std::size_t i) const {
    if (i >= size()) throw std::out_of_range("matrix index out of range");
  }

  std::vector<Row> rows_;
};

/// Largest |(M M^dagger)_{ij} - delta_ij| together with its location.
struct UnitarityDefect {
  double deviation = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
};

inline UnitarityDefect unitarity_defect(const SparseMatrix& m) {
  const std::size_t n = m.size();
  // column -> rows having a nonzero there
  std::vector<std::vector<std::size_t>> by_col(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, v] : m.row(i)) by_col[j].push_back(i);
  }
  UnitarityDefect worst;
  std::vector<Amplitude> acc(n);
  std::vector<char> mark(n, 0);
  std::vector<std::size_t> touched;
  for (std::size_t i = 0; i < n; ++i) {
    touched.clear();
    for (const auto& [k, v] : m.row(i)) {
      for (std::size_t r : by_col[k]) {
        if (!mark[r]) {
          mark[r] = 1;
          touched.push_back(r);
        }
        acc[r] += v * std::conj(m.at(r, k));
      }
    }
    bool diag_seen = false;
    for (std::size_t r : touched) {
      Amplitude expected = (r == i) ? Amplitude{1.0} : Amplitude{};
      diag_seen = diag_seen || r == i;
      double dev = std::abs(acc[r] - expected);
      if (dev > worst.deviation) worst = {dev, i, r};
      acc[r] = Amplitude{};
      mark[r] = 0;
    }
    if (!diag_seen && 1.0 > worst.deviation) worst = {1.0, i, i};
  }
  return worst;
}

/// Completes a set of orthonormal rows to a unitary matrix.
///
/// Missing rows are filled, in increasing row order, by Gram-Schmidt over the
/// standard basis vectors e_0, e_1, ... taken in order. When every given row
/// is a standard basis vector the result is the permutation that assigns the
/// unused targets in increasing order.
inline SparseMatrix complete_unitary(std::size_t n, const std::map<std::size_t, SparseMatrix::Row>& given) {
  SparseMatrix out(n);
  std::vector<SparseMatrix::Row> basis;
  std::vector<std::vector<std::size_t>> by_col(n);
  auto add_basis = [&](const SparseMatrix::Row& r) {
    std::size_t id = basis.size();
    basis.push_back(r);
    for (const auto& [c, v] : r) by_col[c].push_back(id);
  };
  for (const auto& [r, row] : given) {
    out.set_row(r, row);
    add_basis(out.row(r));
  }

  std::vector<std::size_t> free_rows;
  for (std::size_t r = 0; r < n; ++r) {
    if (!given.contains(r)) free_rows.push_back(r);
  }

  std::vector<Amplitude> work(n);
  std::vector<char> in_support(n, 0);
  std::vector<std::size_t> support;
  auto touch = [&](std::size_t c) {
    if (!in_support[c]) {
      in_support[c] = 1;
      support.push_back(c);
    }
  };
  auto project_out = [&]() {
    std::vector<std::size_t> ids;
    for (std::size_t c : support) {
      if (work[c] != Amplitude{}) ids.insert(ids.end(), by_col[c].begin(), by_col[c].end());
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<Amplitude> coeff(ids.size());
    for (std::size_t t = 0; t < ids.size(); ++t) {
      for (const auto& [c, v] : basis[ids[t]]) coeff[t] += std::conj(v) * work[c];
    }
    for (std::size_t t = 0; t < ids.size(); ++t) {
      for (const auto& [c, v] : basis[ids[t]]) {
        touch(c);
        work[c] -= coeff[t] * v;
      }
    }
  };

  std::size_t next_free = 0;
  for (std::size_t cand = 0; cand < n && next_free < free_rows.size(); ++cand) {
    touch(cand);
    work[cand] = 1.0;
    project_out();
    project_out();  // second pass restores orthogonality lost to rounding
    double norm2 = 0.0;
    for (std::size_t c : support) norm2 += std::norm(work[c]);
    if (norm2 > 1e-12) {
      double inv = 1.0 / std::sqrt(norm2);
      SparseMatrix::Row r;
      std::sort(support.begin(), support.end());
      for (std::size_t c : support) {
        Amplitude v = work[c] * inv;
        if (std::abs(v) > 1e-15) r.emplace_back(c, v);
      }
      out.set_row(free_rows[next_free++], r);
      add_basis(out.row(free_rows[next_free - 1]));
    }
    for (std::size_t c : support) {
      work[c] = Amplitude{};
      in_support[c] = 0;
    }
    support.clear();
  }
  if (next_free != free_rows.size()) throw std::logic_error("given rows are not orthonormal; completion failed");
  return out;
}

}  // namespace qfst
