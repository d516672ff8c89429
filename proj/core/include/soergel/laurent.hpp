#pragma once

// Exact rational functions in one variable v over Q.

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace soergel {

// Dense univariate polynomial over Q, coefficient i multiplies v^i. No trailing zeros.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<mpq_class> c);
  static UPoly constant(const mpq_class& c);
  static UPoly monomial(const mpq_class& c, int degree);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  const mpq_class& operator[](std::size_t i) const { return c_[i]; }
  mpq_class lead() const { return c_.back(); }

  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  UPoly scaled(const mpq_class& s) const;
  bool operator==(const UPoly& o) const { return c_ == o.c_; }

  // division with remainder, o nonzero
  void divmod(const UPoly& o, UPoly& q, UPoly& r) const;
  UPoly reversed() const;
  // drops the factor v^k with k maximal, returns k
  int strip_v_power();

  static UPoly gcd(UPoly a, UPoly b);  // monic, or zero

 private:
  void trim();
  std::vector<mpq_class> c_;
};

// v^e * num(v) / den(v) in canonical form: gcd(num, den) = 1, den(0) = 1,
// num(0) != 0 unless the value is zero (then e = 0 and den = 1).
class LaurentRat {
 public:
  LaurentRat();
  LaurentRat(long c);  // NOLINT: integers embed implicitly
  LaurentRat(const mpq_class& c);  // NOLINT
  LaurentRat(int e, UPoly num, UPoly den);

  static LaurentRat v(int power = 1);
  // the Hecke parameter q = v^-2
  static LaurentRat q();
  static LaurentRat from_laurent(const std::map<int, mpq_class>& terms);

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool is_laurent_polynomial() const { return den_.degree() == 0; }

  LaurentRat operator+(const LaurentRat& o) const;
  LaurentRat operator-(const LaurentRat& o) const;
  LaurentRat operator-() const;
  LaurentRat operator*(const LaurentRat& o) const;
  LaurentRat operator/(const LaurentRat& o) const;
  LaurentRat& operator+=(const LaurentRat& o) { return *this = *this + o; }
  LaurentRat& operator-=(const LaurentRat& o) { return *this = *this - o; }
  LaurentRat& operator*=(const LaurentRat& o) { return *this = *this * o; }
  LaurentRat pow(int k) const;
  // v -> v^-1
  LaurentRat bar() const;

  bool operator==(const LaurentRat& o) const { return e_ == o.e_ && num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const LaurentRat& o) const { return !(*this == o); }
  bool operator<(const LaurentRat& o) const;

  int v_exponent() const { return e_; }
  const UPoly& numerator() const { return num_; }
  const UPoly& denominator() const { return den_; }

  // Laurent expansion in t = v^-1 around t = 0, all exponents <= max_exp
  std::map<int, mpq_class> expand_in_inverse_v(int max_exp) const;

  std::string to_string() const;

 private:
  void normalize();
  int e_ = 0;
  UPoly num_;
  UPoly den_;
};

// polynomial in a with LaurentRat coefficients, no zero entries
using APoly = std::map<int, LaurentRat>;

APoly apoly_add(const APoly& x, const APoly& y);
APoly apoly_mul(const APoly& x, const APoly& y);
APoly apoly_scale(const APoly& x, const LaurentRat& s);
bool apoly_equal(const APoly& x, const APoly& y);
std::string apoly_to_string(const APoly& x, const std::string& var = "a");

}  // namespace soergel
