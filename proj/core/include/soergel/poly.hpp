#pragma once

// Polynomials in x_1..x_n over Q (deg x_j = 2) and sparse matrices of them.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace soergel {

// exponent vector packed 16 bits per variable, x_1 in the low bits
using MonoKey = std::uint64_t;

inline int mono_exp(MonoKey k, int j) { return static_cast<int>((k >> (16 * j)) & 0xFFFFu); }
inline MonoKey mono_var(int j) { return MonoKey{1} << (16 * j); }
int mono_total(MonoKey k, int nvars);
MonoKey mono_from_exps(const std::vector<int>& e);

// all monomials of total exponent m in nvars variables, in a fixed order
const std::vector<MonoKey>& monomials_of_total(int nvars, int m);
// number of such monomials
std::size_t count_monomials(int nvars, int m);

class PolyR {
 public:
  using Term = std::pair<MonoKey, mpq_class>;

  PolyR() = default;
  explicit PolyR(int nvars) : n_(nvars) {}
  static PolyR constant(int nvars, const mpq_class& c);
  static PolyR var(int nvars, int j);  // x_j, 1-based
  static PolyR monomial(int nvars, MonoKey k, const mpq_class& c);

  int nvars() const { return n_; }
  bool is_zero() const { return t_.empty(); }
  const std::vector<Term>& terms() const { return t_; }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].first == 0); }
  mpq_class constant_term() const;
  mpq_class coeff(MonoKey k) const;
  // degree 2*|alpha| of every term, or -1 for zero; throws if not homogeneous
  int degree() const;
  bool is_homogeneous() const;
  // the part of internal degree deg
  PolyR homogeneous_part(int deg) const;

  PolyR operator+(const PolyR& o) const;
  PolyR operator-(const PolyR& o) const;
  PolyR operator-() const;
  PolyR operator*(const PolyR& o) const;
  PolyR& operator+=(const PolyR& o) { return *this = *this + o; }
  PolyR& operator-=(const PolyR& o) { return *this = *this - o; }
  PolyR scaled(const mpq_class& s) const;
  PolyR times_monomial(MonoKey k) const;
  bool operator==(const PolyR& o) const { return t_ == o.t_; }
  bool operator!=(const PolyR& o) const { return !(*this == o); }

  // ring map sending x_j to images[j-1]; result lives in images' ring
  PolyR substitute(const std::vector<PolyR>& images) const;
  // x_1..x_n with x_n -> -(x_1+...+x_{n-1}), landing in n-1 variables
  PolyR kill_center() const;

  std::string to_string() const;

 private:
  friend class PolyBuilder;
  int n_ = 0;
  std::vector<Term> t_;  // sorted by key, nonzero coefficients
};

// accumulates terms in a map, then emits a canonical PolyR
class PolyBuilder {
 public:
  explicit PolyBuilder(int nvars) : n_(nvars) {}
  void add(MonoKey k, const mpq_class& c);
  void add(const PolyR& p, const mpq_class& s = 1, MonoKey shift = 0);
  PolyR build();

 private:
  int n_;
  std::map<MonoKey, mpq_class> acc_;
};

// Sparse matrix over PolyR, rows of (col, entry) sorted by column.
class PolyMatrix {
 public:
  using Row = std::vector<std::pair<std::uint32_t, PolyR>>;

  PolyMatrix() = default;
  PolyMatrix(int nvars, std::size_t rows, std::size_t cols) : n_(nvars), rows_(rows), ncols_(cols) {}
  static PolyMatrix identity(int nvars, std::size_t size);
  static PolyMatrix scalar(std::size_t size, const PolyR& p);

  int nvars() const { return n_; }
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return ncols_; }
  const Row& row(std::size_t r) const { return rows_[r]; }
  PolyR at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const PolyR& p);
  void add_to(std::size_t r, std::size_t c, const PolyR& p);
  bool is_zero() const;
  std::size_t nnz() const;

  PolyMatrix operator+(const PolyMatrix& o) const;
  PolyMatrix operator-(const PolyMatrix& o) const;
  PolyMatrix operator-() const;
  PolyMatrix operator*(const PolyMatrix& o) const;
  PolyMatrix scaled(const PolyR& p) const;
  PolyMatrix scaled(const mpq_class& s) const;
  PolyMatrix transpose() const;
  bool operator==(const PolyMatrix& o) const;
  bool operator!=(const PolyMatrix& o) const { return !(*this == o); }

  // entries restricted to the constant part
  PolyMatrix constant_part() const;
  PolyMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
  // places m at (r0, c0) into this matrix (adding)
  void add_block(std::size_t r0, std::size_t c0, const PolyMatrix& m);
  PolyMatrix map_entries_kill_center() const;

  std::string to_string() const;

 private:
  int n_ = 0;
  std::vector<Row> rows_;
  std::size_t ncols_ = 0;
};

// p(X_1, ..., X_n) for pairwise commuting square matrices X_j
class MatrixEvaluator {
 public:
  explicit MatrixEvaluator(const std::vector<PolyMatrix>& xs);
  PolyMatrix eval(const PolyR& p);
  std::size_t size() const { return size_; }

 private:
  const PolyMatrix& power(MonoKey k);
  std::vector<PolyMatrix> xs_;
  std::size_t size_ = 0;
  std::map<MonoKey, PolyMatrix> cache_;
};

// inverse of a square matrix whose constant part is invertible over Q and whose
// remaining part is nilpotent with respect to basis degrees; throws if not
PolyMatrix invert_unipotent_like(const PolyMatrix& a);
// inverse over Q of a constant matrix; returns false when singular
bool invert_constant(const PolyMatrix& a, PolyMatrix& inv);

}  // namespace soergel
