#pragma once

// Bounded complexes of Bott-Samelson bimodules, Rouquier complexes of braids,
// chain maps and Gaussian elimination.

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "soergel/bimod.hpp"
#include "soergel/hecke.hpp"

namespace soergel {

// block (tgt, src) of the differential C^t -> C^{t+1}
using BlockMap = std::map<std::pair<std::size_t, std::size_t>, PolyMatrix>;

struct SBComplex {
  int n = 1;
  std::map<int, std::vector<BSBimodule>> terms;
  std::map<int, BlockMap> d;

  static SBComplex unit(int n);  // [R] in degree 0
  static SBComplex single(const BSBimodule& m, int degree = 0);

  const std::vector<BSBimodule>& at(int t) const;
  int min_degree() const;
  int max_degree() const;
  std::size_t summand_count() const;
  bool empty() const { return summand_count() == 0; }

  // d^2 = 0, block shapes, degree-0 homogeneity and intertwining
  void validate() const;
  void check_d_squared() const;
  // "t: word(shift)" labels, sorted within each degree
  std::map<int, std::vector<std::string>> summand_multiset() const;
  std::string summary() const;
  // drops empty degrees and zero blocks
  void prune();
};

SBComplex rouquier_generator(int i, int sign, int n);
SBComplex tensor_complex(const SBComplex& a, const SBComplex& b);
SBComplex shift_complex(const SBComplex& c, int internal_shift);
SBComplex braid_to_complex(const BraidWord& b);
// Gaussian elimination after every letter; homotopy equivalent to braid_to_complex
SBComplex braid_to_complex_reduced(const BraidWord& b);

struct SpecialBraids {
  BraidWord ht, ft, jm;
};
SpecialBraids special_braids(int n);

// f^t : src^t -> tgt^{t + hdeg}; blocks (tgt index, src index)
struct ChainMap {
  std::shared_ptr<const SBComplex> src;
  std::shared_ptr<const SBComplex> tgt;
  int hdeg = 0;
  std::map<int, BlockMap> f;

  // d f = (-1)^hdeg f d, every block homogeneous of degree 0
  void check() const;
  bool is_chain_map() const;
};

ChainMap identity_chain_map(const std::shared_ptr<const SBComplex>& c);
ChainMap compose(const ChainMap& f, const ChainMap& g);  // f after g
// degree-0 maps only
ChainMap tensor_chain_maps(const ChainMap& f, const ChainMap& g);
// Cone^t = src^{t+1} + tgt^t, d = [[-d_src, 0], [f, d_tgt]]
SBComplex cone(const ChainMap& f);

ChainMap psi_generator(int i, int n);
// F_w -> F_{w^-1}^{-1} along the cached reduced word
ChainMap psi_w(const Perm& w);
// L_n -> [R]
ChainMap splitting_map(int n);

// Splits B_i B_i = B_i(1) + B_i(-1) and cancels invertible blocks between
// equal summands. When track is given (a chain map into c) it is rewritten to
// land in the result.
SBComplex gaussian_eliminate(const SBComplex& c, ChainMap* track = nullptr);

// Basis of the degree-0 bimodule maps src -> tgt over Q, from the exact
// intertwining equations.
std::vector<PolyMatrix> hom_degree0(const BSBimodule& src, const BSBimodule& tgt);
// [R(s)] = v^s, [B_i] = H_i + v
HeckeElt character(const BSBimodule& m);

// Indecomposable summands B_w(k) per homological degree in the Karoubi
// envelope, read off from characters in the Kazhdan-Lusztig basis. A pair S in C^t, T in C^{t+1} is cancelled when one is a direct
// summand of the other through the differential component (an explicit
// degree-0 splitting makes the composite invertible); S then contributes the
// complement [S] - [T] (or T contributes [T] - [S]). Cancellations are only
// taken where earlier ones leave the relevant component untouched.
std::map<int, std::vector<std::string>> karoubi_summands(const SBComplex& c);

// versioned text format with checksum; load revalidates d^2 = 0
void save_complex(const SBComplex& c, std::ostream& os);
SBComplex load_complex(std::istream& is);

}  // namespace soergel
