#include "soergel/laurent.hpp"

#include <algorithm>
#include <sstream>

#include "soergel/errors.hpp"

namespace soergel {

UPoly::UPoly(std::vector<mpq_class> c) : c_(std::move(c)) { trim(); }

UPoly UPoly::constant(const mpq_class& c) { return UPoly(std::vector<mpq_class>{c}); }

UPoly UPoly::monomial(const mpq_class& c, int degree) {
  std::vector<mpq_class> v(static_cast<std::size_t>(degree) + 1, mpq_class(0));
  v.back() = c;
  return UPoly(std::move(v));
}

void UPoly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

UPoly UPoly::operator+(const UPoly& o) const {
  std::vector<mpq_class> r(std::max(c_.size(), o.c_.size()), mpq_class(0));
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return UPoly(std::move(r));
}

UPoly UPoly::operator-(const UPoly& o) const { return *this + o.scaled(-1); }

UPoly UPoly::operator*(const UPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<mpq_class> r(c_.size() + o.c_.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  return UPoly(std::move(r));
}

UPoly UPoly::scaled(const mpq_class& s) const {
  if (sgn(s) == 0) return {};
  std::vector<mpq_class> r(c_);
  for (auto& x : r) x *= s;
  return UPoly(std::move(r));
}

void UPoly::divmod(const UPoly& o, UPoly& q, UPoly& r) const {
  if (o.is_zero()) throw Error("polynomial division by zero");
  std::vector<mpq_class> rem(c_);
  const int dd = o.degree();
  std::vector<mpq_class> quo(std::max<int>(0, degree() - dd + 1), mpq_class(0));
  const mpq_class lead_inv = 1 / o.lead();
  for (int k = degree(); k >= dd; --k) {
    const mpq_class f = rem[static_cast<std::size_t>(k)] * lead_inv;
    if (sgn(f) == 0) continue;
    quo[static_cast<std::size_t>(k - dd)] = f;
    for (int i = 0; i <= dd; ++i) rem[static_cast<std::size_t>(k - dd + i)] -= f * o.c_[static_cast<std::size_t>(i)];
  }
  q = UPoly(std::move(quo));
  r = UPoly(std::move(rem));
}

UPoly UPoly::reversed() const {
  std::vector<mpq_class> r(c_.rbegin(), c_.rend());
  return UPoly(std::move(r));
}

int UPoly::strip_v_power() {
  std::size_t k = 0;
  while (k < c_.size() && sgn(c_[k]) == 0) ++k;
  if (k == c_.size()) return 0;
  c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(k));
  return static_cast<int>(k);
}

UPoly UPoly::gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly q, r;
    a.divmod(b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.scaled(1 / a.lead());
}

LaurentRat::LaurentRat() : den_(UPoly::constant(1)) {}

LaurentRat::LaurentRat(long c) : num_(UPoly::constant(mpq_class(c))), den_(UPoly::constant(1)) {}

LaurentRat::LaurentRat(const mpq_class& c) : num_(UPoly::constant(c)), den_(UPoly::constant(1)) {}

LaurentRat::LaurentRat(int e, UPoly num, UPoly den) : e_(e), num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error("rational function with zero denominator");
  normalize();
}

LaurentRat LaurentRat::v(int power) { return LaurentRat(power, UPoly::constant(1), UPoly::constant(1)); }

LaurentRat LaurentRat::q() { return v(-2); }

LaurentRat LaurentRat::from_laurent(const std::map<int, mpq_class>& terms) {
  if (terms.empty()) return {};
  const int lo = terms.begin()->first;
  const int hi = terms.rbegin()->first;
  std::vector<mpq_class> c(static_cast<std::size_t>(hi - lo + 1), mpq_class(0));
  for (const auto& [e, x] : terms) c[static_cast<std::size_t>(e - lo)] = x;
  return LaurentRat(lo, UPoly(std::move(c)), UPoly::constant(1));
}

void LaurentRat::normalize() {
  if (num_.is_zero()) {
    e_ = 0;
    den_ = UPoly::constant(1);
    return;
  }
  e_ += num_.strip_v_power();
  e_ -= den_.strip_v_power();
  UPoly g = UPoly::gcd(num_, den_);
  if (g.degree() > 0) {
    UPoly q, r;
    num_.divmod(g, q, r);
    num_ = q;
    den_.divmod(g, q, r);
    den_ = q;
  }
  const mpq_class c = den_[0];
  if (c != 1) {
    num_ = num_.scaled(1 / c);
    den_ = den_.scaled(1 / c);
  }
}

bool LaurentRat::is_one() const { return e_ == 0 && den_.degree() == 0 && num_.degree() == 0 && num_[0] == 1; }

LaurentRat LaurentRat::operator+(const LaurentRat& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  const int m = std::min(e_, o.e_);
  UPoly a = num_ * o.den_;
  UPoly b = o.num_ * den_;
  a = a * UPoly::monomial(1, e_ - m);
  b = b * UPoly::monomial(1, o.e_ - m);
  return LaurentRat(m, a + b, den_ * o.den_);
}

LaurentRat LaurentRat::operator-() const {
  LaurentRat r = *this;
  r.num_ = r.num_.scaled(-1);
  return r;
}

LaurentRat LaurentRat::operator-(const LaurentRat& o) const { return *this + (-o); }

LaurentRat LaurentRat::operator*(const LaurentRat& o) const {
  if (is_zero() || o.is_zero()) return {};
  return LaurentRat(e_ + o.e_, num_ * o.num_, den_ * o.den_);
}

LaurentRat LaurentRat::operator/(const LaurentRat& o) const {
  if (o.is_zero()) throw Error("division by zero rational function");
  if (is_zero()) return {};
  return LaurentRat(e_ - o.e_, num_ * o.den_, den_ * o.num_);
}

LaurentRat LaurentRat::pow(int k) const {
  if (k < 0) return LaurentRat(1) / pow(-k);
  LaurentRat r(1), b = *this;
  while (k) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

LaurentRat LaurentRat::bar() const {
  if (is_zero()) return *this;
  // v^e N(1/v)/D(1/v) = v^(-e - deg N + deg D) Nrev(v)/Drev(v)
  return LaurentRat(-e_ - num_.degree() + den_.degree(), num_.reversed(), den_.reversed());
}

bool LaurentRat::operator<(const LaurentRat& o) const {
  if (e_ != o.e_) return e_ < o.e_;
  auto lex = [](const UPoly& a, const UPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = 0; i <= a.degree(); ++i)
      if (a[static_cast<std::size_t>(i)] != b[static_cast<std::size_t>(i)])
        return a[static_cast<std::size_t>(i)] < b[static_cast<std::size_t>(i)];
    return false;
  };
  if (!(num_ == o.num_)) return lex(num_, o.num_);
  return lex(den_, o.den_);
}

std::map<int, mpq_class> LaurentRat::expand_in_inverse_v(int max_exp) const {
  std::map<int, mpq_class> out;
  if (is_zero()) return out;
  const UPoly n = num_.reversed();
  const UPoly d = den_.reversed();
  const int shift = -e_ - num_.degree() + den_.degree();
  // numerator reversal may have introduced low zeros; keep them as part of the series
  const mpq_class d0inv = 1 / d[0];
  std::vector<mpq_class> series;
  for (int k = 0; shift + k <= max_exp; ++k) {
    mpq_class c = k <= n.degree() ? n[static_cast<std::size_t>(k)] : mpq_class(0);
    for (int i = 1; i <= std::min(k, d.degree()); ++i)
      c -= d[static_cast<std::size_t>(i)] * series[static_cast<std::size_t>(k - i)];
    c *= d0inv;
    series.push_back(c);
    if (sgn(c) != 0) out[shift + k] = c;
  }
  return out;
}

namespace {

std::string format_terms(const std::map<int, mpq_class>& terms) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms) {
    mpq_class a = abs(c);
    const bool neg = sgn(c) < 0;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    const bool unit = a == 1;
    if (e == 0) {
      os << a.get_str();
    } else {
      if (!unit) os << a.get_str() << "*";
      os << "v";
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

}  // namespace

std::string LaurentRat::to_string() const {
  std::map<int, mpq_class> nt, dt;
  for (int i = 0; i <= num_.degree(); ++i)
    if (sgn(num_[static_cast<std::size_t>(i)]) != 0) nt[e_ + i] = num_[static_cast<std::size_t>(i)];
  for (int i = 0; i <= den_.degree(); ++i)
    if (sgn(den_[static_cast<std::size_t>(i)]) != 0) dt[i] = den_[static_cast<std::size_t>(i)];
  std::string n = format_terms(nt);
  if (den_.degree() == 0) return n;
  return "(" + n + ")/(" + format_terms(dt) + ")";
}

APoly apoly_add(const APoly& x, const APoly& y) {
  APoly r = x;
  for (const auto& [k, c] : y) {
    auto s = r[k] + c;
    if (s.is_zero())
      r.erase(k);
    else
      r[k] = s;
  }
  return r;
}

APoly apoly_mul(const APoly& x, const APoly& y) {
  APoly r;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y) r = apoly_add(r, APoly{{i + j, a * b}});
  return r;
}

APoly apoly_scale(const APoly& x, const LaurentRat& s) {
  APoly r;
  if (s.is_zero()) return r;
  for (const auto& [k, c] : x) r[k] = c * s;
  return r;
}

bool apoly_equal(const APoly& x, const APoly& y) {
  auto nz = [](const APoly& p) {
    APoly r;
    for (const auto& [k, c] : p)
      if (!c.is_zero()) r.emplace(k, c);
    return r;
  };
  return nz(x) == nz(y);
}

std::string apoly_to_string(const APoly& x, const std::string& var) {
  if (x.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : x) {
    if (!first) os << " + ";
    first = false;
    os << "[" << c.to_string() << "]";
    if (k != 0) os << "*" << var << (k != 1 ? "^" + std::to_string(k) : "");
  }
  return os.str();
}

}  // namespace soergel
