#pragma once

// Exact sparse linear algebra over Q or a prime field, and homology of
// finite graded chain complexes. Everything is a template over a field
// policy so the same elimination code serves both arithmetic modes.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "soergel/errors.hpp"

namespace soergel {

using Rational = mpq_class;

// 2^62 - 57
inline constexpr std::uint64_t kDefaultPrime = 4611686018427387847ULL;

bool is_prime_u64(std::uint64_t n);

struct RationalField {
  using Elem = mpq_class;
  static constexpr bool exact_rational = true;

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  Elem from_int(long v) const { return Elem(v); }
  Elem from_rational(const mpq_class& q) const { return q; }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const { return 1 / a; }
  // a -= f*b
  void submul(Elem& a, const Elem& f, const Elem& b) const { a -= f * b; }
  std::string name() const { return "Q"; }
};

struct PrimeField {
  using Elem = std::uint64_t;
  static constexpr bool exact_rational = false;

  std::uint64_t p = kDefaultPrime;

  PrimeField() = default;
  explicit PrimeField(std::uint64_t prime);

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(long v) const {
    long long r = static_cast<long long>(v) % static_cast<long long>(p);
    if (r < 0) r += static_cast<long long>(p);
    return static_cast<Elem>(r);
  }
  Elem from_rational(const mpq_class& q) const;
  bool is_zero(Elem a) const { return a == 0; }
  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    return s >= p ? s - p : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>((static_cast<unsigned __int128>(a) * b) % p);
  }
  Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
  Elem inv(Elem a) const;
  void submul(Elem& a, Elem f, Elem b) const { a = sub(a, mul(f, b)); }
  std::string name() const { return "F_" + std::to_string(p); }
};

template <class F>
struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  typename F::Elem value;
};

// Row-major sparse matrix with sorted rows and no stored zeros.
template <class F>
class SparseMatrix {
 public:
  using E = typename F::Elem;
  using Row = std::vector<std::pair<std::uint32_t, E>>;

  SparseMatrix() = default;
  SparseMatrix(F field, std::size_t rows, std::size_t cols) : field_(field), rows_(rows), ncols_(cols) {}

  // duplicate positions are summed
  SparseMatrix(F field, std::size_t rows, std::size_t cols, std::vector<Triplet<F>> entries)
      : field_(field), rows_(rows), ncols_(cols) {
    std::sort(entries.begin(), entries.end(), [](const Triplet<F>& a, const Triplet<F>& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (std::size_t i = 0; i < entries.size();) {
      const auto r = entries[i].row;
      const auto c = entries[i].col;
      if (r >= rows || c >= cols) throw ShapeMismatch("sparse entry outside matrix shape");
      E acc = entries[i].value;
      std::size_t j = i + 1;
      while (j < entries.size() && entries[j].row == r && entries[j].col == c) {
        acc = field_.add(acc, entries[j].value);
        ++j;
      }
      if (!field_.is_zero(acc)) rows_[r].emplace_back(c, std::move(acc));
      i = j;
    }
  }

  static SparseMatrix identity(F field, std::size_t n) {
    SparseMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i].emplace_back(static_cast<std::uint32_t>(i), field.one());
    return m;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return ncols_; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  const std::vector<Row>& row_data() const { return rows_; }
  std::vector<Row>& mutable_rows() { return rows_; }

  std::size_t nnz() const {
    std::size_t s = 0;
    for (const auto& r : rows_) s += r.size();
    return s;
  }
  bool is_zero() const { return nnz() == 0; }

  E at(std::size_t r, std::size_t c) const {
    const auto& rw = rows_.at(r);
    auto it = std::lower_bound(rw.begin(), rw.end(), c,
                               [](const std::pair<std::uint32_t, E>& e, std::size_t col) { return e.first < col; });
    if (it != rw.end() && it->first == c) return it->second;
    return field_.zero();
  }

  std::vector<Triplet<F>> triplets() const {
    std::vector<Triplet<F>> out;
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (const auto& [c, v] : rows_[r]) out.push_back({static_cast<std::uint32_t>(r), c, v});
    return out;
  }

  SparseMatrix transpose() const {
    std::vector<Triplet<F>> t;
    t.reserve(nnz());
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (const auto& [c, v] : rows_[r]) t.push_back({c, static_cast<std::uint32_t>(r), v});
    return SparseMatrix(field_, ncols_, rows_.size(), std::move(t));
  }

 private:
  F field_{};
  std::vector<Row> rows_;
  std::size_t ncols_ = 0;
};

template <class F>
SparseMatrix<F> multiply(const SparseMatrix<F>& a, const SparseMatrix<F>& b) {
  if (a.cols() != b.rows()) throw ShapeMismatch("matrix product shape mismatch");
  const F& f = a.field();
  std::vector<Triplet<F>> out;
  std::map<std::uint32_t, typename F::Elem> acc;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    acc.clear();
    for (const auto& [k, av] : a.row(r))
      for (const auto& [c, bv] : b.row(k)) {
        auto [it, fresh] = acc.try_emplace(c, f.zero());
        it->second = f.add(it->second, f.mul(av, bv));
      }
    for (auto& [c, v] : acc)
      if (!f.is_zero(v)) out.push_back({static_cast<std::uint32_t>(r), c, v});
  }
  return SparseMatrix<F>(f, a.rows(), b.cols(), std::move(out));
}

namespace detail {

// a <- a - f*b on sorted sparse rows; reports columns that appeared or vanished
template <class F, class OnNew, class OnGone>
void row_axpy(const F& field, typename SparseMatrix<F>::Row& a, const typename F::Elem& f,
              const typename SparseMatrix<F>::Row& b, OnNew on_new, OnGone on_gone) {
  using Row = typename SparseMatrix<F>::Row;
  Row out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(std::move(a[i]));
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      auto v = field.neg(field.mul(f, b[j].second));
      if (!field.is_zero(v)) {
        on_new(b[j].first);
        out.emplace_back(b[j].first, std::move(v));
      }
      ++j;
    } else {
      auto v = std::move(a[i].second);
      field.submul(v, f, b[j].second);
      if (field.is_zero(v))
        on_gone(a[i].first);
      else
        out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  a = std::move(out);
}

template <class Row>
const typename Row::value_type* find_col(const Row& r, std::uint32_t c) {
  auto it = std::lower_bound(r.begin(), r.end(), c,
                             [](const typename Row::value_type& e, std::uint32_t col) { return e.first < col; });
  if (it != r.end() && it->first == c) return &*it;
  return nullptr;
}

// Markowitz-style sparse elimination. Returns the pivot rows in elimination
// order together with their pivot columns; later pivot columns never occur in
// earlier-eliminated rows' complement, which makes back substitution possible.
template <class F>
struct Elimination {
  std::vector<typename SparseMatrix<F>::Row> pivot_rows;
  std::vector<std::uint32_t> pivot_cols;
};

template <class F>
Elimination<F> eliminate(const SparseMatrix<F>& m, bool keep_pivots) {
  using Row = typename SparseMatrix<F>::Row;
  const F& field = m.field();
  const std::size_t nr = m.rows(), nc = m.cols();
  std::vector<Row> rows(m.row_data());
  std::vector<char> alive(nr, 1);
  std::vector<std::vector<std::uint32_t>> col_rows(nc);
  std::vector<int> col_count(nc, 0);
  std::vector<char> col_done(nc, 0);
  for (std::size_t r = 0; r < nr; ++r)
    for (const auto& e : rows[r]) {
      col_rows[e.first].push_back(static_cast<std::uint32_t>(r));
      ++col_count[e.first];
    }
  using Key = std::pair<int, std::uint32_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap;
  for (std::uint32_t c = 0; c < nc; ++c)
    if (col_count[c] > 0) heap.push({col_count[c], c});

  Elimination<F> res;
  std::vector<std::uint32_t> members;
  while (!heap.empty()) {
    auto [cnt, c] = heap.top();
    heap.pop();
    if (col_done[c] || cnt != col_count[c] || cnt == 0) continue;
    members.clear();
    for (auto r : col_rows[c])
      if (alive[r] && find_col(rows[r], c) != nullptr) members.push_back(r);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    col_rows[c] = members;
    if (members.empty()) {
      col_count[c] = 0;
      continue;
    }
    std::uint32_t piv = members[0];
    for (auto r : members)
      if (rows[r].size() < rows[piv].size()) piv = r;
    const auto pinv = field.inv(find_col(rows[piv], c)->second);
    for (auto r : members) {
      if (r == piv) continue;
      const auto f = field.mul(find_col(rows[r], c)->second, pinv);
      row_axpy<F>(
          field, rows[r], f, rows[piv],
          [&](std::uint32_t col) {
            ++col_count[col];
            col_rows[col].push_back(r);
            heap.push({col_count[col], col});
          },
          [&](std::uint32_t col) {
            --col_count[col];
            heap.push({col_count[col], col});
          });
    }
    alive[piv] = 0;
    for (const auto& e : rows[piv]) {
      --col_count[e.first];
      if (e.first != c) heap.push({col_count[e.first], e.first});
    }
    col_done[c] = 1;
    col_count[c] = 0;
    res.pivot_cols.push_back(c);
    if (keep_pivots)
      res.pivot_rows.push_back(std::move(rows[piv]));
    else
      res.pivot_rows.emplace_back();
    Row().swap(rows[piv]);
  }
  return res;
}

}  // namespace detail

template <class F>
std::size_t rank(const SparseMatrix<F>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return detail::eliminate(m, false).pivot_cols.size();
}

// Columns of the result span ker(m); there are cols(m) - rank(m) of them.
template <class F>
SparseMatrix<F> kernel_basis(const SparseMatrix<F>& m) {
  const F& field = m.field();
  const std::size_t nc = m.cols();
  auto el = detail::eliminate(m, true);
  std::vector<char> is_pivot(nc, 0);
  for (auto c : el.pivot_cols) is_pivot[c] = 1;
  std::vector<Triplet<F>> out;
  std::uint32_t k = 0;
  std::vector<typename F::Elem> x(nc, field.zero());
  std::vector<std::uint32_t> touched;
  for (std::uint32_t f = 0; f < nc; ++f) {
    if (is_pivot[f]) continue;
    for (auto t : touched) x[t] = field.zero();
    touched.clear();
    x[f] = field.one();
    touched.push_back(f);
    for (std::size_t i = el.pivot_cols.size(); i-- > 0;) {
      const auto& row = el.pivot_rows[i];
      const auto pc = el.pivot_cols[i];
      auto s = field.zero();
      typename F::Elem a = field.zero();
      for (const auto& [c, v] : row) {
        if (c == pc)
          a = v;
        else if (!field.is_zero(x[c]))
          s = field.add(s, field.mul(v, x[c]));
      }
      if (!field.is_zero(s)) {
        x[pc] = field.neg(field.mul(s, field.inv(a)));
        touched.push_back(pc);
      }
    }
    for (auto t : touched)
      if (!field.is_zero(x[t])) out.push_back({t, k, x[t]});
    ++k;
  }
  return SparseMatrix<F>(field, nc, k, std::move(out));
}

// C^k for k in [min_degree, min_degree + dims.size()), d_k : C^k -> C^{k+1}
template <class F>
struct FiniteComplex {
  int min_degree = 0;
  std::vector<std::size_t> dims;
  std::vector<SparseMatrix<F>> diffs;  // diffs[i] maps degree min+i to min+i+1
};

template <class F>
void check_chain_condition(const FiniteComplex<F>& c) {
  if (c.diffs.size() + 1 != c.dims.size() && !(c.dims.empty() && c.diffs.empty()))
    throw ShapeMismatch("finite complex needs one differential between consecutive degrees");
  for (std::size_t i = 0; i < c.diffs.size(); ++i)
    if (c.diffs[i].cols() != c.dims[i] || c.diffs[i].rows() != c.dims[i + 1])
      throw ShapeMismatch("differential shape does not chain");
  for (std::size_t i = 0; i + 1 < c.diffs.size(); ++i)
    if (!multiply(c.diffs[i + 1], c.diffs[i]).is_zero())
      throw ChainConditionViolated("d^2 != 0 at degree " + std::to_string(c.min_degree + static_cast<int>(i)));
}

template <class F>
std::map<int, std::size_t> homology_dims(const FiniteComplex<F>& c) {
  check_chain_condition(c);
  std::vector<std::size_t> rk(c.diffs.size());
  for (std::size_t i = 0; i < c.diffs.size(); ++i) rk[i] = rank(c.diffs[i]);
  std::map<int, std::size_t> h;
  for (std::size_t i = 0; i < c.dims.size(); ++i) {
    std::size_t v = c.dims[i];
    if (i < rk.size()) v -= rk[i];
    if (i > 0) v -= rk[i - 1];
    h[c.min_degree + static_cast<int>(i)] = v;
  }
  return h;
}

// Rank over Q cross-checked against the prime field; a mismatch is a bad-prime event.
struct RankCheck {
  std::size_t rank_q = 0;
  std::size_t rank_p = 0;
  bool bad_prime() const { return rank_q != rank_p; }
};
RankCheck rank_cross_check(const SparseMatrix<RationalField>& m, const PrimeField& fp);

SparseMatrix<PrimeField> reduce_mod_p(const SparseMatrix<RationalField>& m, const PrimeField& fp);

}  // namespace soergel
