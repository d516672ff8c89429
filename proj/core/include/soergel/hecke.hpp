#pragma once

// Symmetric groups, the Hecke algebra H_n with (H_i + v)(H_i - v^-1) = 0,
// partial traces and the Jones-Ocneanu trace.

#include <map>
#include <string>
#include <vector>

#include "soergel/laurent.hpp"

namespace soergel {

// Permutation of {1..n}; img[k] is the image of k+1, stored 1-based.
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::vector<int> images);
  static Perm identity(int n);
  static Perm simple(int i, int n);  // s_i swaps i and i+1
  static Perm from_word(const std::vector<int>& word, int n);
  static Perm longest(int n);

  int n() const { return static_cast<int>(img_.size()); }
  int operator()(int k) const { return img_[static_cast<std::size_t>(k - 1)]; }
  const std::vector<int>& images() const { return img_; }
  int length() const { return length_; }
  // lexicographically least reduced word, w = s_{w[0]} s_{w[1]} ...
  const std::vector<int>& reduced_word() const { return word_; }

  Perm operator*(const Perm& o) const;  // (uv)(k) = u(v(k))
  Perm inverse() const;
  Perm times_simple(int i) const;  // w s_i
  bool is_identity() const { return length_ == 0; }
  // restriction to {1..m}; requires w(k) = k for k > m
  Perm restrict_to(int m) const;
  Perm extend_to(int m) const;

  bool operator==(const Perm& o) const { return img_ == o.img_; }
  bool operator!=(const Perm& o) const { return img_ != o.img_; }
  bool operator<(const Perm& o) const { return img_ < o.img_; }
  std::string to_string() const;

 private:
  void cache();
  std::vector<int> img_;
  int length_ = 0;
  std::vector<int> word_;
};

std::vector<Perm> all_perms(int n);
bool bruhat_leq(const Perm& u, const Perm& w);

class HeckeElt {
 public:
  HeckeElt() = default;
  explicit HeckeElt(int n) : n_(n) {}
  static HeckeElt one(int n);
  static HeckeElt basis(const Perm& w);
  static HeckeElt generator(int i, int n);
  static HeckeElt generator_inverse(int i, int n);

  int n() const { return n_; }
  const std::map<Perm, LaurentRat>& terms() const { return c_; }
  LaurentRat coeff(const Perm& w) const;
  bool is_zero() const { return c_.empty(); }

  void add_term(const Perm& w, const LaurentRat& c);
  HeckeElt operator+(const HeckeElt& o) const;
  HeckeElt operator-(const HeckeElt& o) const;
  HeckeElt operator*(const HeckeElt& o) const;
  HeckeElt scaled(const LaurentRat& s) const;
  HeckeElt times_generator(int i) const;  // x H_i
  // embedding H_n -> H_m for m >= n
  HeckeElt extend_to(int m) const;
  HeckeElt restrict_to(int m) const;

  bool operator==(const HeckeElt& o) const { return n_ == o.n_ && c_ == o.c_; }
  bool operator!=(const HeckeElt& o) const { return !(*this == o); }
  std::string to_string() const;

 private:
  int n_ = 0;
  std::map<Perm, LaurentRat> c_;
};

HeckeElt hecke_mul(const HeckeElt& x, const HeckeElt& y);

// w -> H_{w^-1}^{-1} written in the positive basis
std::map<Perm, HeckeElt> negative_basis_matrix(int n);
std::map<Perm, LaurentRat> to_negative_basis(const HeckeElt& x);
HeckeElt from_negative_basis(const std::map<Perm, LaurentRat>& psi, int n);
LaurentRat epsilon(const HeckeElt& x);
HeckeElt dual_anti(const HeckeElt& x);
LaurentRat pairing(const HeckeElt& x, const HeckeElt& y);

// Kazhdan-Lusztig basis b_w = H_w + sum_{y<w} h_{y,w} H_y, h_{y,w} in vZ[v], b_s = H_s + v
std::map<Perm, HeckeElt> kl_basis(int n);
// x = sum_w p_w b_w; throws Error if some p_w is not a Laurent polynomial
std::map<Perm, std::map<int, mpq_class>> kl_decompose(const HeckeElt& x);

// element of H_n[a]
struct HeckeAElt {
  int n = 0;
  std::map<int, HeckeElt> deg;

  static HeckeAElt from(const HeckeElt& x);
  void add(int a_degree, const HeckeElt& x);
  bool operator==(const HeckeAElt& o) const;
};

// the linear ptr^-, ptr^+ : H_n -> H_{n-1} determined by the vanishing axioms
HeckeElt partial_trace_minus(const HeckeElt& x);
HeckeElt partial_trace_plus(const HeckeElt& x);
// ptr = ptr^- + a ptr^+
HeckeAElt partial_trace(const HeckeAElt& x);
// Tr = ptr applied n times
APoly jones_ocneanu_trace(const HeckeElt& x);

// ptr(H_{n-1}) and ptr(H_{n-1}^{-1}) as elements of Q(v)[a], derived from the axioms
APoly ptr_constant_positive();
APoly ptr_constant_negative();

struct BraidWord {
  int n = 1;
  std::vector<int> letters;  // +i for sigma_i, -i for sigma_i^-1

  int writhe() const;
  BraidWord inverse() const;
  BraidWord operator*(const BraidWord& o) const;
  std::string to_string() const;
  bool operator==(const BraidWord& o) const { return n == o.n && letters == o.letters; }
};

// whitespace-separated signed integers; throws ParseError with the token position
BraidWord parse_braid(const std::string& text, int n);
BraidWord positive_lift(const Perm& w);
BraidWord negative_lift(const Perm& w);
// jm(n), ft(n), ht(n)
BraidWord jucys_murphy(int n);
BraidWord full_twist(int n);
BraidWord half_twist(int n);

HeckeElt braid_to_hecke(const BraidWord& b);

// Laurent polynomial in lambda with a = -lambda^2, coefficients in Q(v)
using LambdaPoly = std::map<int, LaurentRat>;

APoly homfly(const BraidWord& b);
// Tr(b) / Tr_1(1) * (-lambda v)^(1-n) * lambda^writhe, a Markov invariant
LambdaPoly homfly_normalized(const BraidWord& b);
std::string lambda_to_string(const LambdaPoly& p);

}  // namespace soergel
