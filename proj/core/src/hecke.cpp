#include "soergel/hecke.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

#include "soergel/errors.hpp"

namespace soergel {

// ---------------------------------------------------------------- Perm

Perm::Perm(std::vector<int> images) : img_(std::move(images)) {
  std::vector<char> seen(img_.size() + 1, 0);
  for (int x : img_) {
    if (x < 1 || x > n() || seen[static_cast<std::size_t>(x)]) throw Error("not a permutation");
    seen[static_cast<std::size_t>(x)] = 1;
  }
  cache();
}

void Perm::cache() {
  length_ = 0;
  for (int i = 0; i < n(); ++i)
    for (int j = i + 1; j < n(); ++j)
      if (img_[static_cast<std::size_t>(i)] > img_[static_cast<std::size_t>(j)]) ++length_;
  word_.clear();
  // greedy smallest left descent gives the lexicographically least reduced word
  std::vector<int> w = img_;
  std::vector<int> pos(w.size() + 1);
  for (;;) {
    for (std::size_t k = 0; k < w.size(); ++k) pos[static_cast<std::size_t>(w[k])] = static_cast<int>(k);
    int found = 0;
    for (int i = 1; i < n(); ++i)
      if (pos[static_cast<std::size_t>(i)] > pos[static_cast<std::size_t>(i + 1)]) {
        found = i;
        break;
      }
    if (!found) break;
    word_.push_back(found);
    std::swap(w[static_cast<std::size_t>(pos[static_cast<std::size_t>(found)])],
              w[static_cast<std::size_t>(pos[static_cast<std::size_t>(found + 1)])]);
  }
}

Perm Perm::identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  return Perm(std::move(v));
}

Perm Perm::simple(int i, int n) {
  if (i < 1 || i >= n) throw IndexOutOfRange("simple reflection index out of range");
  return identity(n).times_simple(i);
}

Perm Perm::from_word(const std::vector<int>& word, int n) {
  Perm p = identity(n);
  for (int i : word) p = p.times_simple(i);
  return p;
}

Perm Perm::longest(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = n - k;
  return Perm(std::move(v));
}

Perm Perm::operator*(const Perm& o) const {
  if (n() != o.n()) throw StrandMismatch("permutations of different size");
  std::vector<int> r(img_.size());
  for (int k = 1; k <= n(); ++k) r[static_cast<std::size_t>(k - 1)] = (*this)(o(k));
  return Perm(std::move(r));
}

Perm Perm::inverse() const {
  std::vector<int> r(img_.size());
  for (int k = 1; k <= n(); ++k) r[static_cast<std::size_t>((*this)(k) - 1)] = k;
  return Perm(std::move(r));
}

Perm Perm::times_simple(int i) const {
  if (i < 1 || i >= n()) throw IndexOutOfRange("simple reflection index out of range");
  std::vector<int> r = img_;
  std::swap(r[static_cast<std::size_t>(i - 1)], r[static_cast<std::size_t>(i)]);
  return Perm(std::move(r));
}

Perm Perm::restrict_to(int m) const {
  for (int k = m + 1; k <= n(); ++k)
    if ((*this)(k) != k) throw Error("permutation does not fix the dropped points");
  return Perm(std::vector<int>(img_.begin(), img_.begin() + m));
}

Perm Perm::extend_to(int m) const {
  std::vector<int> r = img_;
  for (int k = n() + 1; k <= m; ++k) r.push_back(k);
  return Perm(std::move(r));
}

std::string Perm::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t k = 0; k < img_.size(); ++k) os << (k ? " " : "") << img_[k];
  os << "]";
  return os.str();
}

std::vector<Perm> all_perms(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  std::vector<Perm> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

bool bruhat_leq(const Perm& u, const Perm& w) {
  if (u.n() != w.n()) throw StrandMismatch("permutations of different size");
  const int n = u.n();
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k) {
      int cu = 0, cw = 0;
      for (int j = 1; j <= i; ++j) {
        cu += u(j) >= k;
        cw += w(j) >= k;
      }
      if (cu > cw) return false;
    }
  return true;
}

// ---------------------------------------------------------------- HeckeElt

HeckeElt HeckeElt::one(int n) { return basis(Perm::identity(n)); }

HeckeElt HeckeElt::basis(const Perm& w) {
  HeckeElt x(w.n());
  x.c_.emplace(w, LaurentRat(1));
  return x;
}

HeckeElt HeckeElt::generator(int i, int n) { return basis(Perm::simple(i, n)); }

HeckeElt HeckeElt::generator_inverse(int i, int n) {
  // from the product rule H_i^2 = alpha H_i + beta, so H_i^-1 = (H_i - alpha)/beta
  const HeckeElt h = generator(i, n);
  const HeckeElt hh = h * h;
  const LaurentRat alpha = hh.coeff(Perm::simple(i, n));
  const LaurentRat beta = hh.coeff(Perm::identity(n));
  return (h - one(n).scaled(alpha)).scaled(LaurentRat(1) / beta);
}

LaurentRat HeckeElt::coeff(const Perm& w) const {
  auto it = c_.find(w);
  return it == c_.end() ? LaurentRat() : it->second;
}

void HeckeElt::add_term(const Perm& w, const LaurentRat& c) {
  if (w.n() != n_) throw StrandMismatch("basis element from a different symmetric group");
  if (c.is_zero()) return;
  auto it = c_.find(w);
  if (it == c_.end()) {
    c_.emplace(w, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) c_.erase(it);
}

HeckeElt HeckeElt::operator+(const HeckeElt& o) const {
  if (n_ != o.n_) throw StrandMismatch("Hecke elements with different strand counts");
  HeckeElt r = *this;
  for (const auto& [w, c] : o.c_) r.add_term(w, c);
  return r;
}

HeckeElt HeckeElt::operator-(const HeckeElt& o) const { return *this + o.scaled(LaurentRat(-1)); }

HeckeElt HeckeElt::scaled(const LaurentRat& s) const {
  HeckeElt r(n_);
  if (s.is_zero()) return r;
  for (const auto& [w, c] : c_) r.c_.emplace(w, c * s);
  return r;
}

HeckeElt HeckeElt::times_generator(int i) const {
  static const LaurentRat kQuad = LaurentRat::v(-1) - LaurentRat::v(1);
  HeckeElt r(n_);
  for (const auto& [w, c] : c_) {
    const Perm ws = w.times_simple(i);
    r.add_term(ws, c);
    if (ws.length() < w.length()) r.add_term(w, c * kQuad);
  }
  return r;
}

HeckeElt HeckeElt::operator*(const HeckeElt& o) const {
  if (n_ != o.n_) throw StrandMismatch("Hecke elements with different strand counts");
  HeckeElt r(n_);
  for (const auto& [u, c] : o.c_) {
    HeckeElt z = *this;
    for (int i : u.reduced_word()) z = z.times_generator(i);
    r = r + z.scaled(c);
  }
  return r;
}

HeckeElt HeckeElt::extend_to(int m) const {
  HeckeElt r(m);
  for (const auto& [w, c] : c_) r.c_.emplace(w.extend_to(m), c);
  return r;
}

HeckeElt HeckeElt::restrict_to(int m) const {
  HeckeElt r(m);
  for (const auto& [w, c] : c_) r.c_.emplace(w.restrict_to(m), c);
  return r;
}

std::string HeckeElt::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : c_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")*H" << w.to_string();
  }
  return os.str();
}

HeckeElt hecke_mul(const HeckeElt& x, const HeckeElt& y) { return x * y; }

// ---------------------------------------------------------------- bases, epsilon, duality

namespace {

HeckeElt negative_element(const Perm& w) {
  HeckeElt r = HeckeElt::one(w.n());
  for (int i : w.reduced_word()) r = r * HeckeElt::generator_inverse(i, w.n());
  return r;
}

}  // namespace

std::map<Perm, HeckeElt> negative_basis_matrix(int n) {
  std::map<Perm, HeckeElt> out;
  for (const Perm& w : all_perms(n)) out.emplace(w, negative_element(w));
  return out;
}

std::map<Perm, LaurentRat> to_negative_basis(const HeckeElt& x) {
  std::map<Perm, LaurentRat> psi;
  HeckeElt rem = x;
  std::map<Perm, HeckeElt> cache;
  while (!rem.is_zero()) {
    const Perm* top = nullptr;
    for (const auto& [w, c] : rem.terms())
      if (!top || w.length() > top->length()) top = &w;
    const Perm w = *top;
    const LaurentRat c = rem.coeff(w);
    auto it = cache.find(w);
    if (it == cache.end()) it = cache.emplace(w, negative_element(w)).first;
    psi[w] = c;
    rem = rem - it->second.scaled(c);
  }
  return psi;
}

HeckeElt from_negative_basis(const std::map<Perm, LaurentRat>& psi, int n) {
  HeckeElt r(n);
  for (const auto& [w, c] : psi) r = r + negative_element(w).scaled(c);
  return r;
}

LaurentRat epsilon(const HeckeElt& x) {
  const auto psi = to_negative_basis(x);
  auto it = psi.find(Perm::identity(x.n()));
  return it == psi.end() ? LaurentRat() : it->second;
}

HeckeElt dual_anti(const HeckeElt& x) {
  HeckeElt r(x.n());
  for (const auto& [w, c] : x.terms()) {
    HeckeElt img = HeckeElt::one(x.n());
    const auto& word = w.reduced_word();
    for (auto it = word.rbegin(); it != word.rend(); ++it) img = img * HeckeElt::generator_inverse(*it, x.n());
    r = r + img.scaled(c.bar());
  }
  return r;
}

LaurentRat pairing(const HeckeElt& x, const HeckeElt& y) {
  if (x.n() != y.n()) throw StrandMismatch("pairing of elements with different strand counts");
  return epsilon(y * dual_anti(x));
}

// ---------------------------------------------------------------- partial traces

HeckeAElt HeckeAElt::from(const HeckeElt& x) {
  HeckeAElt r;
  r.n = x.n();
  if (!x.is_zero()) r.deg.emplace(0, x);
  return r;
}

void HeckeAElt::add(int a_degree, const HeckeElt& x) {
  if (x.is_zero()) return;
  auto it = deg.find(a_degree);
  if (it == deg.end()) {
    deg.emplace(a_degree, x);
    return;
  }
  it->second = it->second + x;
  if (it->second.is_zero()) deg.erase(it);
}

bool HeckeAElt::operator==(const HeckeAElt& o) const { return n == o.n && deg == o.deg; }

namespace {

struct PtrConstants {
  LaurentRat base;       // ptr^pm(1) = 1/(1-q)
  LaurentRat minus_gen;  // ptr^-(H_{n-1})
  LaurentRat plus_inv;   // ptr^+(H_{n-1}^{-1})
};

const PtrConstants& ptr_constants() {
  static const PtrConstants k = [] {
    PtrConstants c;
    c.base = LaurentRat(1) / (LaurentRat(1) - LaurentRat::q());
    // H^-1 = H + c0, so ptr^-(H) = ptr^-(H^-1) - c0 ptr^-(1) = -c0 base and
    // ptr^+(H^-1) = ptr^+(H) + c0 ptr^+(1) = c0 base
    const HeckeElt hinv = HeckeElt::generator_inverse(1, 2);
    const LaurentRat c0 = hinv.coeff(Perm::identity(2));
    if (hinv.coeff(Perm::simple(1, 2)) != LaurentRat(1)) throw Error("unexpected inverse generator shape");
    c.minus_gen = -(c0 * c.base);
    c.plus_inv = c0 * c.base;
    return c;
  }();
  return k;
}

// w = u d with u in S_{n-1}, d = s_{n-1} s_{n-2} ... s_j; returns j (j = n means d = e)
int coset_split(const Perm& w, Perm& u, std::vector<int>& tail) {
  const int n = w.n();
  const int j = w.inverse()(n);
  std::vector<int> dword;
  for (int k = n - 1; k >= j; --k) dword.push_back(k);
  const Perm d = Perm::from_word(dword, n);
  const Perm full_u = w * d.inverse();
  if (full_u(n) != n || full_u.length() + d.length() != w.length())
    throw Error("coset decomposition failed");
  u = full_u.restrict_to(n - 1);
  tail.assign(dword.begin() + (dword.empty() ? 0 : 1), dword.end());
  return j;
}

HeckeElt ptr_sign(const HeckeElt& x, bool plus) {
  const int n = x.n();
  if (n < 1) throw StrandMismatch("partial trace needs at least one strand");
  const auto& k = ptr_constants();
  HeckeElt r(n - 1);
  for (const auto& [w, c] : x.terms()) {
    Perm u;
    std::vector<int> tail;
    const int j = coset_split(w, u, tail);
    if (j == n) {
      r.add_term(u, c * k.base);
      continue;
    }
    if (plus) continue;  // ptr^+(x H_{n-1} y) = 0
    HeckeElt prod = HeckeElt::basis(u);
    for (int i : tail) prod = prod.times_generator(i);
    r = r + prod.scaled(c * k.minus_gen);
  }
  return r;
}

}  // namespace

HeckeElt partial_trace_minus(const HeckeElt& x) { return ptr_sign(x, false); }
HeckeElt partial_trace_plus(const HeckeElt& x) { return ptr_sign(x, true); }

HeckeAElt partial_trace(const HeckeAElt& x) {
  if (x.n < 1) throw StrandMismatch("partial trace needs at least one strand");
  HeckeAElt r;
  r.n = x.n - 1;
  for (const auto& [a, h] : x.deg) {
    if (h.n() != x.n) throw StrandMismatch("a-degree component has the wrong strand count");
    r.add(a, partial_trace_minus(h));
    r.add(a + 1, partial_trace_plus(h));
  }
  return r;
}

APoly jones_ocneanu_trace(const HeckeElt& x) {
  HeckeAElt cur = HeckeAElt::from(x);
  cur.n = x.n();
  while (cur.n > 0) cur = partial_trace(cur);
  APoly out;
  for (const auto& [a, h] : cur.deg) {
    const LaurentRat c = h.coeff(Perm::identity(0));
    if (!c.is_zero()) out[a] = c;
  }
  return out;
}

APoly ptr_constant_positive() {
  const auto t = partial_trace(HeckeAElt::from(HeckeElt::generator(1, 2)));
  APoly out;
  for (const auto& [a, h] : t.deg) out[a] = h.coeff(Perm::identity(1));
  return out;
}

APoly ptr_constant_negative() {
  const auto t = partial_trace(HeckeAElt::from(HeckeElt::generator_inverse(1, 2)));
  APoly out;
  for (const auto& [a, h] : t.deg) out[a] = h.coeff(Perm::identity(1));
  return out;
}

// ---------------------------------------------------------------- braids

int BraidWord::writhe() const {
  int w = 0;
  for (int l : letters) w += l > 0 ? 1 : -1;
  return w;
}

BraidWord BraidWord::inverse() const {
  BraidWord r{n, {}};
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) r.letters.push_back(-*it);
  return r;
}

BraidWord BraidWord::operator*(const BraidWord& o) const {
  if (n != o.n) throw StrandMismatch("braids on different strand counts");
  BraidWord r = *this;
  r.letters.insert(r.letters.end(), o.letters.begin(), o.letters.end());
  return r;
}

std::string BraidWord::to_string() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < letters.size(); ++k) os << (k ? " " : "") << letters[k];
  return os.str();
}

BraidWord parse_braid(const std::string& text, int n) {
  if (n < 1) throw ParseError("strand count must be positive", 0);
  std::istringstream is(text);
  std::string tok;
  BraidWord b{n, {}};
  int pos = 0;
  while (is >> tok) {
    ++pos;
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      throw ParseError("malformed braid letter '" + tok + "'", pos);
    }
    if (used != tok.size()) throw ParseError("malformed braid letter '" + tok + "'", pos);
    if (v == 0 || std::labs(v) > n - 1)
      throw ParseError("braid letter '" + tok + "' out of range for " + std::to_string(n) + " strands", pos);
    b.letters.push_back(static_cast<int>(v));
  }
  return b;
}

BraidWord positive_lift(const Perm& w) { return BraidWord{w.n(), w.reduced_word()}; }

BraidWord negative_lift(const Perm& w) {
  BraidWord b{w.n(), {}};
  for (int i : w.reduced_word()) b.letters.push_back(-i);
  return b;
}

BraidWord jucys_murphy(int n) {
  if (n < 1) throw IndexOutOfRange("strand count must be positive");
  BraidWord b{n, {}};
  if (n == 1) return b;
  const BraidWord inner = jucys_murphy(n - 1);
  b.letters.push_back(n - 1);
  b.letters.insert(b.letters.end(), inner.letters.begin(), inner.letters.end());
  b.letters.push_back(n - 1);
  return b;
}

BraidWord full_twist(int n) {
  BraidWord b{n, {}};
  for (int k = 2; k <= n; ++k) {
    const BraidWord jm = jucys_murphy(k);
    b.letters.insert(b.letters.end(), jm.letters.begin(), jm.letters.end());
  }
  return b;
}

BraidWord half_twist(int n) { return positive_lift(Perm::longest(n)); }

HeckeElt braid_to_hecke(const BraidWord& b) {
  HeckeElt x = HeckeElt::one(b.n);
  for (int l : b.letters) {
    if (l > 0)
      x = x.times_generator(l);
    else
      x = x * HeckeElt::generator_inverse(-l, b.n);
  }
  return x;
}

APoly homfly(const BraidWord& b) { return jones_ocneanu_trace(braid_to_hecke(b)); }

LambdaPoly homfly_normalized(const BraidWord& b) {
  // the last partial trace multiplies by Tr_1(1), so stop one step early
  HeckeAElt cur = HeckeAElt::from(braid_to_hecke(b));
  while (cur.n > 1) cur = partial_trace(cur);
  const int n = b.n;
  const int lshift = b.writhe() + 1 - n;
  const LaurentRat pref = LaurentRat((n - 1) % 2 == 0 ? 1 : -1) * LaurentRat::v(1 - n);
  LambdaPoly out;
  for (const auto& [a, h] : cur.deg) {
    LaurentRat c = h.coeff(Perm::identity(1));
    if (c.is_zero()) continue;
    // a^k = (-1)^k lambda^(2k)
    if (a % 2) c = -c;
    auto& slot = out[2 * a + lshift];
    slot += c * pref;
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

std::string lambda_to_string(const LambdaPoly& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : p) {
    if (!first) os << " + ";
    first = false;
    os << "[" << c.to_string() << "]";
    if (k != 0) os << "*lambda" << (k != 1 ? "^" + std::to_string(k) : "");
  }
  return os.str();
}

// ---------------------------------------------------------------- Kazhdan-Lusztig basis

namespace {

std::map<int, mpq_class> laurent_terms(const LaurentRat& c) {
  std::map<int, mpq_class> out;
  if (c.is_zero()) return out;
  if (!c.is_laurent_polynomial()) throw Error("coefficient is not a Laurent polynomial: " + c.to_string());
  const mpq_class den = c.denominator()[0];
  const auto& num = c.numerator().coeffs();
  for (std::size_t i = 0; i < num.size(); ++i)
    if (num[i] != 0) out[c.v_exponent() + static_cast<int>(i)] = num[i] / den;
  return out;
}

std::vector<Perm> by_length_desc(int n) {
  auto ws = all_perms(n);
  std::stable_sort(ws.begin(), ws.end(), [](const Perm& a, const Perm& b) {
    return a.length() != b.length() ? a.length() > b.length() : a < b;
  });
  return ws;
}

}  // namespace

std::map<Perm, HeckeElt> kl_basis(int n) {
  static std::mutex mu;
  static std::map<int, std::map<Perm, HeckeElt>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto hit = cache.find(n);
  if (hit != cache.end()) return hit->second;
  auto ws = all_perms(n);
  std::stable_sort(ws.begin(), ws.end(), [](const Perm& a, const Perm& b) {
    return a.length() != b.length() ? a.length() < b.length() : a < b;
  });
  std::map<Perm, HeckeElt> b;
  const auto order = by_length_desc(n);
  for (const Perm& w : ws) {
    if (w.is_identity()) {
      b.emplace(w, HeckeElt::one(n));
      continue;
    }
    const auto& word = w.reduced_word();
    const int s = word.back();
    const Perm shorter = w.times_simple(s);
    HeckeElt c = b.at(shorter) * (HeckeElt::generator(s, n) + HeckeElt::one(n).scaled(LaurentRat::v(1)));
    // strip the non-positive powers below H_w, longest first
    for (const Perm& y : order) {
      if (y.length() >= w.length()) continue;
      const auto terms = laurent_terms(c.coeff(y));
      std::map<int, mpq_class> sym;
      for (const auto& [e, x] : terms)
        if (e <= 0) {
          sym[e] += x;
          if (e < 0) sym[-e] += x;
        }
      if (!sym.empty()) c = c - b.at(y).scaled(LaurentRat::from_laurent(sym));
    }
    b.emplace(w, c);
  }
  cache.emplace(n, b);
  return b;
}

std::map<Perm, std::map<int, mpq_class>> kl_decompose(const HeckeElt& x) {
  const auto b = kl_basis(x.n());
  std::map<Perm, std::map<int, mpq_class>> out;
  HeckeElt rest = x;
  for (const Perm& w : by_length_desc(x.n())) {
    const LaurentRat c = rest.coeff(w);
    if (c.is_zero()) continue;
    out[w] = laurent_terms(c);
    rest = rest - b.at(w).scaled(c);
  }
  if (!rest.is_zero()) throw Error("KL decomposition left a remainder");
  return out;
}

}  // namespace soergel
