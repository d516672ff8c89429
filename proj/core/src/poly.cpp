#include "soergel/poly.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "soergel/errors.hpp"

namespace soergel {

int mono_total(MonoKey k, int nvars) {
  int s = 0;
  for (int j = 0; j < nvars; ++j) s += mono_exp(k, j);
  return s;
}

MonoKey mono_from_exps(const std::vector<int>& e) {
  MonoKey k = 0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (e[j] < 0 || e[j] > 0xFFFF) throw Error("monomial exponent out of range");
    k |= static_cast<MonoKey>(e[j]) << (16 * j);
  }
  return k;
}

namespace {

void enumerate(int nvars, int j, int left, MonoKey acc, std::vector<MonoKey>& out) {
  if (j == nvars - 1) {
    out.push_back(acc | (static_cast<MonoKey>(left) << (16 * j)));
    return;
  }
  for (int e = left; e >= 0; --e) enumerate(nvars, j + 1, left - e, acc | (static_cast<MonoKey>(e) << (16 * j)), out);
}

}  // namespace

const std::vector<MonoKey>& monomials_of_total(int nvars, int m) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<MonoKey>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({nvars, m});
  if (it != cache.end()) return it->second;
  std::vector<MonoKey> out;
  if (m >= 0) {
    if (nvars == 0) {
      if (m == 0) out.push_back(0);
    } else {
      enumerate(nvars, 0, m, 0, out);
    }
  }
  return cache.emplace(std::make_pair(nvars, m), std::move(out)).first->second;
}

std::size_t count_monomials(int nvars, int m) { return monomials_of_total(nvars, m).size(); }

// ---------------------------------------------------------------- PolyR

PolyR PolyR::constant(int nvars, const mpq_class& c) {
  PolyR p(nvars);
  if (sgn(c) != 0) p.t_.emplace_back(0, c);
  return p;
}

PolyR PolyR::var(int nvars, int j) {
  if (j < 1 || j > nvars) throw IndexOutOfRange("variable index out of range");
  PolyR p(nvars);
  p.t_.emplace_back(mono_var(j - 1), mpq_class(1));
  return p;
}

PolyR PolyR::monomial(int nvars, MonoKey k, const mpq_class& c) {
  PolyR p(nvars);
  if (sgn(c) != 0) p.t_.emplace_back(k, c);
  return p;
}

mpq_class PolyR::constant_term() const { return coeff(0); }

mpq_class PolyR::coeff(MonoKey k) const {
  auto it = std::lower_bound(t_.begin(), t_.end(), k, [](const Term& t, MonoKey key) { return t.first < key; });
  if (it != t_.end() && it->first == k) return it->second;
  return 0;
}

bool PolyR::is_homogeneous() const {
  if (t_.empty()) return true;
  const int d = mono_total(t_[0].first, n_);
  for (const auto& t : t_)
    if (mono_total(t.first, n_) != d) return false;
  return true;
}

int PolyR::degree() const {
  if (t_.empty()) return -1;
  if (!is_homogeneous()) throw Error("polynomial is not homogeneous");
  return 2 * mono_total(t_[0].first, n_);
}

PolyR PolyR::homogeneous_part(int deg) const {
  PolyR r(n_);
  for (const auto& t : t_)
    if (2 * mono_total(t.first, n_) == deg) r.t_.push_back(t);
  return r;
}

PolyR PolyR::operator+(const PolyR& o) const {
  PolyR r(std::max(n_, o.n_));
  r.t_.reserve(t_.size() + o.t_.size());
  std::size_t i = 0, j = 0;
  while (i < t_.size() || j < o.t_.size()) {
    if (j == o.t_.size() || (i < t_.size() && t_[i].first < o.t_[j].first)) {
      r.t_.push_back(t_[i++]);
    } else if (i == t_.size() || o.t_[j].first < t_[i].first) {
      r.t_.push_back(o.t_[j++]);
    } else {
      mpq_class s = t_[i].second + o.t_[j].second;
      if (sgn(s) != 0) r.t_.emplace_back(t_[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  return r;
}

PolyR PolyR::operator-() const {
  PolyR r = *this;
  for (auto& t : r.t_) t.second = -t.second;
  return r;
}

PolyR PolyR::operator-(const PolyR& o) const { return *this + (-o); }

PolyR PolyR::operator*(const PolyR& o) const {
  if (t_.empty() || o.t_.empty()) return PolyR(std::max(n_, o.n_));
  if (o.t_.size() == 1 && o.t_[0].first == 0) return scaled(o.t_[0].second);
  if (t_.size() == 1 && t_[0].first == 0) return o.scaled(t_[0].second);
  PolyBuilder b(std::max(n_, o.n_));
  for (const auto& [ka, ca] : t_)
    for (const auto& [kb, cb] : o.t_) b.add(ka + kb, ca * cb);
  return b.build();
}

PolyR PolyR::scaled(const mpq_class& s) const {
  PolyR r(n_);
  if (sgn(s) == 0) return r;
  r.t_ = t_;
  for (auto& t : r.t_) t.second *= s;
  return r;
}

PolyR PolyR::times_monomial(MonoKey k) const {
  PolyR r = *this;
  for (auto& t : r.t_) t.first += k;
  return r;
}

PolyR PolyR::substitute(const std::vector<PolyR>& images) const {
  if (static_cast<int>(images.size()) < n_) throw Error("substitution needs one image per variable");
  const int m = images.empty() ? 0 : images[0].nvars();
  std::vector<std::vector<PolyR>> pw(static_cast<std::size_t>(n_));
  auto power = [&](int j, int e) -> const PolyR& {
    auto& v = pw[static_cast<std::size_t>(j)];
    if (v.empty()) v.push_back(PolyR::constant(m, 1));
    while (static_cast<int>(v.size()) <= e) v.push_back(v.back() * images[static_cast<std::size_t>(j)]);
    return v[static_cast<std::size_t>(e)];
  };
  PolyR r(m);
  for (const auto& [k, c] : t_) {
    PolyR term = PolyR::constant(m, c);
    for (int j = 0; j < n_; ++j) {
      const int e = mono_exp(k, j);
      if (e) term = term * power(j, e);
    }
    r += term;
  }
  return r;
}

PolyR PolyR::kill_center() const {
  if (n_ == 0) return *this;
  const int m = n_ - 1;
  std::vector<PolyR> img;
  PolyR neg_sum(m);
  for (int j = 1; j <= m; ++j) {
    img.push_back(PolyR::var(m, j));
    neg_sum -= PolyR::var(m, j);
  }
  img.push_back(neg_sum);
  return substitute(img);
}

std::string PolyR::to_string() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : t_) {
    const bool neg = sgn(c) < 0;
    mpq_class a = abs(c);
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    bool wrote = false;
    if (a != 1 || k == 0) {
      os << a.get_str();
      wrote = true;
    }
    for (int j = 0; j < n_; ++j) {
      const int e = mono_exp(k, j);
      if (!e) continue;
      os << (wrote ? "*" : "") << "x" << (j + 1);
      if (e > 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

void PolyBuilder::add(MonoKey k, const mpq_class& c) {
  if (sgn(c) == 0) return;
  auto [it, fresh] = acc_.try_emplace(k, c);
  if (!fresh) it->second += c;
}

void PolyBuilder::add(const PolyR& p, const mpq_class& s, MonoKey shift) {
  for (const auto& [k, c] : p.terms()) add(k + shift, c * s);
}

PolyR PolyBuilder::build() {
  PolyR r(n_);
  for (auto& [k, c] : acc_)
    if (sgn(c) != 0) r.t_.emplace_back(k, std::move(c));
  acc_.clear();
  return r;
}

// ---------------------------------------------------------------- PolyMatrix

PolyMatrix PolyMatrix::identity(int nvars, std::size_t size) {
  return scalar(size, PolyR::constant(nvars, 1));
}

PolyMatrix PolyMatrix::scalar(std::size_t size, const PolyR& p) {
  PolyMatrix m(p.nvars(), size, size);
  if (p.is_zero()) return m;
  for (std::size_t i = 0; i < size; ++i) m.rows_[i].emplace_back(static_cast<std::uint32_t>(i), p);
  return m;
}

PolyR PolyMatrix::at(std::size_t r, std::size_t c) const {
  const Row& rw = rows_.at(r);
  auto it = std::lower_bound(rw.begin(), rw.end(), c,
                             [](const std::pair<std::uint32_t, PolyR>& e, std::size_t col) { return e.first < col; });
  if (it != rw.end() && it->first == c) return it->second;
  return PolyR(n_);
}

void PolyMatrix::set(std::size_t r, std::size_t c, const PolyR& p) {
  if (r >= rows_.size() || c >= ncols_) throw ShapeMismatch("matrix index out of range");
  Row& rw = rows_[r];
  auto it = std::lower_bound(rw.begin(), rw.end(), c,
                             [](const std::pair<std::uint32_t, PolyR>& e, std::size_t col) { return e.first < col; });
  if (it != rw.end() && it->first == c) {
    if (p.is_zero())
      rw.erase(it);
    else
      it->second = p;
  } else if (!p.is_zero()) {
    rw.insert(it, {static_cast<std::uint32_t>(c), p});
  }
}

void PolyMatrix::add_to(std::size_t r, std::size_t c, const PolyR& p) {
  if (p.is_zero()) return;
  set(r, c, at(r, c) + p);
}

bool PolyMatrix::is_zero() const {
  for (const auto& r : rows_)
    if (!r.empty()) return false;
  return true;
}

std::size_t PolyMatrix::nnz() const {
  std::size_t s = 0;
  for (const auto& r : rows_) s += r.size();
  return s;
}

namespace {

PolyMatrix::Row merge_rows(const PolyMatrix::Row& a, const PolyMatrix::Row& b, bool subtract) {
  PolyMatrix::Row out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, subtract ? -b[j].second : b[j].second);
      ++j;
    } else {
      PolyR s = subtract ? a[i].second - b[j].second : a[i].second + b[j].second;
      if (!s.is_zero()) out.emplace_back(a[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

PolyMatrix PolyMatrix::operator+(const PolyMatrix& o) const {
  if (rows() != o.rows() || cols() != o.cols()) throw ShapeMismatch("matrix sum shape mismatch");
  PolyMatrix r(std::max(n_, o.n_), rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i) r.rows_[i] = merge_rows(rows_[i], o.rows_[i], false);
  return r;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix& o) const {
  if (rows() != o.rows() || cols() != o.cols()) throw ShapeMismatch("matrix difference shape mismatch");
  PolyMatrix r(std::max(n_, o.n_), rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i) r.rows_[i] = merge_rows(rows_[i], o.rows_[i], true);
  return r;
}

PolyMatrix PolyMatrix::operator-() const {
  PolyMatrix r = *this;
  for (auto& row : r.rows_)
    for (auto& e : row) e.second = -e.second;
  return r;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
  if (cols() != o.rows()) throw ShapeMismatch("matrix product shape mismatch");
  const int nv = std::max(n_, o.n_);
  PolyMatrix r(nv, rows(), o.cols());
  std::map<std::uint32_t, PolyR> acc;
  for (std::size_t i = 0; i < rows(); ++i) {
    acc.clear();
    for (const auto& [k, a] : rows_[i])
      for (const auto& [c, b] : o.rows_[k]) {
        auto [it, fresh] = acc.try_emplace(c, PolyR(nv));
        it->second += a * b;
      }
    for (auto& [c, p] : acc)
      if (!p.is_zero()) r.rows_[i].emplace_back(c, std::move(p));
  }
  return r;
}

PolyMatrix PolyMatrix::scaled(const PolyR& p) const {
  PolyMatrix r(std::max(n_, p.nvars()), rows(), cols());
  if (p.is_zero()) return r;
  for (std::size_t i = 0; i < rows(); ++i)
    for (const auto& [c, e] : rows_[i]) {
      PolyR v = e * p;
      if (!v.is_zero()) r.rows_[i].emplace_back(c, std::move(v));
    }
  return r;
}

PolyMatrix PolyMatrix::scaled(const mpq_class& s) const { return scaled(PolyR::constant(n_, s)); }

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix r(n_, cols(), rows());
  for (std::size_t i = 0; i < rows(); ++i)
    for (const auto& [c, e] : rows_[i]) r.rows_[c].emplace_back(static_cast<std::uint32_t>(i), e);
  return r;
}

bool PolyMatrix::operator==(const PolyMatrix& o) const {
  return rows() == o.rows() && cols() == o.cols() && rows_ == o.rows_;
}

PolyMatrix PolyMatrix::constant_part() const {
  PolyMatrix r(n_, rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i)
    for (const auto& [c, e] : rows_[i]) {
      const mpq_class v = e.constant_term();
      if (sgn(v) != 0) r.rows_[i].emplace_back(c, PolyR::constant(n_, v));
    }
  return r;
}

PolyMatrix PolyMatrix::submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
  PolyMatrix r(n_, rs.size(), cs.size());
  std::vector<long> colmap(ncols_, -1);
  for (std::size_t j = 0; j < cs.size(); ++j) colmap[cs[j]] = static_cast<long>(j);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (const auto& [c, e] : rows_[rs[i]])
      if (colmap[c] >= 0) r.rows_[i].emplace_back(static_cast<std::uint32_t>(colmap[c]), e);
    std::sort(r.rows_[i].begin(), r.rows_[i].end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return r;
}

void PolyMatrix::add_block(std::size_t r0, std::size_t c0, const PolyMatrix& m) {
  if (r0 + m.rows() > rows() || c0 + m.cols() > cols()) throw ShapeMismatch("block outside matrix");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m.rows_[i].empty()) continue;
    Row shifted;
    shifted.reserve(m.rows_[i].size());
    for (const auto& [c, e] : m.rows_[i]) shifted.emplace_back(static_cast<std::uint32_t>(c + c0), e);
    rows_[r0 + i] = merge_rows(rows_[r0 + i], shifted, false);
  }
  n_ = std::max(n_, m.n_);
}

PolyMatrix PolyMatrix::map_entries_kill_center() const {
  PolyMatrix r(n_ > 0 ? n_ - 1 : 0, rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i)
    for (const auto& [c, e] : rows_[i]) {
      PolyR v = e.kill_center();
      if (!v.is_zero()) r.rows_[i].emplace_back(c, std::move(v));
    }
  return r;
}

std::string PolyMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < cols(); ++j) os << (j ? ", " : "") << at(i, j).to_string();
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- evaluation

MatrixEvaluator::MatrixEvaluator(const std::vector<PolyMatrix>& xs) : xs_(xs) {
  if (xs_.empty()) throw Error("evaluation needs at least one matrix");
  size_ = xs_[0].rows();
}

const PolyMatrix& MatrixEvaluator::power(MonoKey k) {
  auto it = cache_.find(k);
  if (it != cache_.end()) return it->second;
  const int nv = xs_[0].nvars();
  if (k == 0) return cache_.emplace(k, PolyMatrix::identity(nv, size_)).first->second;
  int j = 0;
  while (mono_exp(k, j) == 0) ++j;
  PolyMatrix m = xs_[static_cast<std::size_t>(j)] * power(k - mono_var(j));
  return cache_.emplace(k, std::move(m)).first->second;
}

PolyMatrix MatrixEvaluator::eval(const PolyR& p) {
  PolyMatrix r(xs_[0].nvars(), size_, size_);
  for (const auto& [k, c] : p.terms()) r = r + power(k).scaled(c);
  return r;
}

// ---------------------------------------------------------------- inverses

bool invert_constant(const PolyMatrix& a, PolyMatrix& inv) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw ShapeMismatch("inverse of a non-square matrix");
  std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(2 * n, mpq_class(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [c, e] : a.row(i)) {
      if (!e.is_constant()) throw Error("matrix is not constant");
      m[i][c] = e.constant_term();
    }
    m[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(m[piv][col]) == 0) ++piv;
    if (piv == n) return false;
    std::swap(m[piv], m[col]);
    const mpq_class s = 1 / m[col][col];
    for (auto& x : m[col]) x *= s;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(m[r][col]) == 0) continue;
      const mpq_class f = m[r][col];
      for (std::size_t c = 0; c < 2 * n; ++c)
        if (sgn(m[col][c]) != 0) m[r][c] -= f * m[col][c];
    }
  }
  inv = PolyMatrix(a.nvars(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(m[i][n + j]) != 0) inv.set(i, j, PolyR::constant(a.nvars(), m[i][n + j]));
  return true;
}

PolyMatrix invert_unipotent_like(const PolyMatrix& a) {
  PolyMatrix a0 = a.constant_part();
  PolyMatrix a0inv;
  if (!invert_constant(a0, a0inv)) throw Error("constant part is singular");
  const PolyMatrix k = a0inv * (a - a0);
  // (I + K)^-1 A0^-1 with K nilpotent
  PolyMatrix term = a0inv;
  PolyMatrix sum = a0inv;
  for (std::size_t it = 0; it <= a.rows() + 1; ++it) {
    term = -(k * term);
    if (term.is_zero()) {
      if (!(sum * a == PolyMatrix::identity(a.nvars(), a.rows()))) throw Error("inverse check failed");
      return sum;
    }
    sum = sum + term;
  }
  throw Error("matrix is not invertible over R");
}

}  // namespace soergel
