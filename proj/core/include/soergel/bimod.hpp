#pragma once

// Bott-Samelson bimodules as free left R-modules with right-action matrices,
// bimodule maps between them and the Frobenius structure of B_i.
//
// Grading: M(s)_d = M_{d+s}. The basis of B_i = R (x)_{R^{s_i}} R(1) is
// {1(x)1, 1(x)x_{i+1}} in degrees {-1, +1}. For a word, basis vectors are
// tensors of these, indexed in Kronecker order with the left factor slowest.
// An element sum_b f_b e_b is the column vector (f_b); the right action of
// x_j is the matrix X'_j, e_b . x_j = sum_a X'_j[a,b] e_a.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "soergel/poly.hpp"

namespace soergel {

struct WordData {
  int n = 0;
  std::vector<int> word;
  std::vector<int> base_deg;    // basis degrees without the extra shift
  std::vector<PolyMatrix> X;    // X[j-1] = X'_j
  std::vector<PolyMatrix> X0;   // the same with x_n -> -(x_1+..+x_{n-1})
};

// interned, thread-safe
std::shared_ptr<const WordData> word_data(int n, const std::vector<int>& word);

class BSBimodule {
 public:
  BSBimodule() = default;
  BSBimodule(int n, const std::vector<int>& word, int shift = 0);

  int n() const { return data_->n; }
  const std::vector<int>& word() const { return data_->word; }
  int shift() const { return shift_; }
  std::size_t rank() const { return data_->base_deg.size(); }
  int basis_degree(std::size_t b) const { return data_->base_deg[b] - shift_; }
  std::vector<int> basis_degrees() const;
  const PolyMatrix& right_action(int j) const { return data_->X.at(static_cast<std::size_t>(j - 1)); }
  const std::vector<PolyMatrix>& right_actions() const { return data_->X; }
  const std::shared_ptr<const WordData>& data() const { return data_; }

  // M(s)
  BSBimodule shifted(int s) const { return BSBimodule(data_, shift_ + s); }
  bool same_object(const BSBimodule& o) const { return data_ == o.data_ && shift_ == o.shift_; }
  bool operator==(const BSBimodule& o) const { return same_object(o); }
  bool operator<(const BSBimodule& o) const;
  std::string to_string() const;

 private:
  BSBimodule(std::shared_ptr<const WordData> d, int shift) : data_(std::move(d)), shift_(shift) {}
  std::shared_ptr<const WordData> data_;
  int shift_ = 0;
};

// R(s) on n strands
BSBimodule unit_bimodule(int n, int shift = 0);
BSBimodule elementary(int i, int n);
BSBimodule tensor(const BSBimodule& m, const BSBimodule& p);
BSBimodule dual(const BSBimodule& m);

// A bimodule map of internal degree d; entry (a,b) is homogeneous of degree
// d + deg(source e_b) - deg(target e_a) and M X'_j(src) = X'_j(tgt) M.
struct BimMap {
  BSBimodule src;
  BSBimodule tgt;
  int degree = 0;
  PolyMatrix mat;

  // throws ShapeMismatch or Error on a violated invariant
  void validate() const;
  bool is_valid() const;
};

BimMap identity_map(const BSBimodule& m);
BimMap zero_map(const BSBimodule& src, const BSBimodule& tgt, int degree = 0);
BimMap compose(const BimMap& f, const BimMap& g);  // f after g
BimMap add(const BimMap& f, const BimMap& g);
BimMap scale(const BimMap& f, const mpq_class& s);
BimMap tensor_maps(const BimMap& f, const BimMap& g);

// b_i : B_i -> R(1)
BimMap counit(int i, int n);
// b_i^* : R(-1) -> B_i
BimMap unit(int i, int n);

struct FrobeniusMaps {
  BimMap mult;    // B_i (x) B_i -> B_i(-1)
  BimMap counit;  // B_i(-1) -> R
  BimMap unit;    // R -> B_i(1)
  BimMap comult;  // B_i(1) -> B_i (x) B_i
};
FrobeniusMaps frobenius_maps(int i, int n);

// B_i (x) B_i = B_i(1) + B_i(-1)
struct SplitMaps {
  BimMap mu;      // B_i B_i -> B_i(1), plain multiplication f(x)g(x)h -> fg(x)h
  BimMap m;       // B_i B_i -> B_i(-1)
  BimMap delta;   // B_i(1) -> B_i B_i
  BimMap iota;    // B_i(-1) -> B_i B_i
};
SplitMaps split_maps(int i, int n);

// evaluation M^v (x) M -> R and coevaluation R -> M (x) M^v
BimMap evaluation(const BSBimodule& m);
BimMap coevaluation(const BSBimodule& m);
// f : M -> N gives f^v : N^v -> M^v
BimMap dual_map(const BimMap& f);

// graded dimensions of M (x)_R k (right action killed), degrees <= max_degree
std::map<int, std::size_t> bar(const BSBimodule& m, int max_degree);

// checks commutation, the quotient relations and homogeneity of X'_j
void validate_bimodule(const BSBimodule& m);

}  // namespace soergel
