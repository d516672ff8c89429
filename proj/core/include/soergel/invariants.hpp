#pragma once

// Hochschild (co)homology by Koszul slicing, triply graded homology, the
// functors HH^0 / HH_0 / pi^+- on complexes, Hom-complex homology and the
// duality checks built on them.
//
// Internal degree d is the bimodule degree (deg x_j = 2, M(s)_d = M_{d+s}).
// Koszul generators theta_j have degree -2, so the cohomological Koszul
// complex M (x) Lambda^k has its basis e_b theta_J in degree deg e_b - 2k.
// Raw tables report HH^k in that grading; normalized tables use
// HH^k(-2k), i.e. the raw entry at d moves to d + 2k.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "soergel/exactla.hpp"
#include "soergel/hecke.hpp"
#include "soergel/rouquier.hpp"
#include "soergel/slice.hpp"

namespace soergel {

struct FieldSpec {
  bool prime = false;
  std::uint64_t p = kDefaultPrime;

  // "q" or "fp:PRIME"; throws Error on anything else
  static FieldSpec parse(const std::string& s);
  std::string name() const;
};

struct SliceRequest {
  int cutoff = 14;  // tables are exact for internal degree <= cutoff
  FieldSpec field;
  int hochschild = -1;  // a single k, or -1 for all 0..n
  bool normalized = false;
  // work modulo the central element x_1 + .. + x_n; false runs the direct
  // n-variable Koszul complex
  bool center_reduction = true;
  int threads = 1;
  std::string cache_dir;  // reduced Rouquier complexes; empty disables
};

struct Cell {
  int a = 0, t = 0, d = 0;
  auto operator<=>(const Cell&) const = default;
};

// (a-degree, homological degree, internal degree) -> dimension, nonzero cells only
class PoincareTable {
 public:
  int n = 0;
  int cutoff = 0;
  bool normalized = false;

  std::size_t at(int a, int t, int d) const;
  void add(int a, int t, int d, std::size_t v);
  const std::map<Cell, std::size_t>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }

  // cell (a,t,d) moves to (a+da, t+dt, d+dd)
  PoincareTable moved(int da, int dt, int dd) const;
  PoincareTable restricted(int max_d) const;
  // cells with a-degree a, relabelled to a-degree 0
  PoincareTable column(int a) const;
  // internal degree -> sum over cells
  std::map<int, std::size_t> graded_dims() const;

  bool operator==(const PoincareTable& o) const { return cells_ == o.cells_; }
  std::string to_string() const;

 private:
  std::map<Cell, std::size_t> cells_;
};

// graded dimension of R = k[x_1..x_n] in internal degree d
std::size_t hilbert_R(int n, int d);
// R(shift) placed at a = 0, t = 0 for degrees <= max_d
PoincareTable hilbert_table(int n, int max_d, int shift = 0);

// The degree-d slice of the cohomological Koszul complex of m over all n
// variables; the complex degree is the Hochschild degree k.
template <class F>
FiniteComplex<F> koszul_slice_complex(const BSBimodule& m, int d, const F& field);
extern template FiniteComplex<RationalField> koszul_slice_complex(const BSBimodule&, int, const RationalField&);
extern template FiniteComplex<PrimeField> koszul_slice_complex(const BSBimodule&, int, const PrimeField&);

// HH^k(m) at a = k, t = 0 from koszul_slice_complex
PoincareTable koszul_slice(const BSBimodule& m, const SliceRequest& req);

// homology of HH^k applied termwise (a = k)
PoincareTable hhh(const SBComplex& c, const SliceRequest& req);
// homology of HH_k applied termwise, computed from the homological Koszul complex
PoincareTable hh_lower(const SBComplex& c, const SliceRequest& req);
// HH^0 column, at a = 0
PoincareTable hh0_complex(const SBComplex& c, const SliceRequest& req);
// HH^n(-2n) column, at a = 0
PoincareTable hh_top_complex(const SBComplex& c, const SliceRequest& req);
// kernel (sign < 0) or cokernel (sign > 0) of x_n - x'_n termwise, then homology; a = 0
PoincareTable ptr_complex(const SBComplex& c, int sign, const SliceRequest& req);
// homology of the complex of graded vector spaces underlying c; a = 0
PoincareTable slice_homology(const SBComplex& c, const SliceRequest& req);
// Hom(F(a), F(b)) = HH^0(F(b) (x) F(a^-1)); a = 0
PoincareTable hom_homology(const BraidWord& a, const BraidWord& b, const SliceRequest& req);

// raw table -> HH^k(-2k) grading, restricted to the cutoff
PoincareTable normalize(const PoincareTable& raw);

// Reduced Rouquier complex, through the on-disk cache when req.cache_dir is set.
SBComplex reduced_complex(const BraidWord& b, const SliceRequest& req);

// Multiplies the graded dimension function by (1 - q)^n, q of degree 2, and
// returns the graded rank; throws NotFreeBelowCutoff on a negative coefficient
// in degrees <= cutoff.
std::map<int, long> free_rank_extract(const std::map<int, std::size_t>& dims, int n, int cutoff);

// ---------------------------------------------------------------- checks

struct Comparison {
  std::string label;
  bool pass = false;
  std::string detail;
  std::vector<Cell> mismatches;
};

struct CheckReport {
  std::string check;
  int n = 0;
  int cutoff = 0;
  std::string field;
  std::vector<std::pair<std::string, PoincareTable>> tables;
  std::vector<Comparison> comparisons;

  bool pass() const;
  void add_table(const std::string& name, const PoincareTable& t) { tables.emplace_back(name, t); }
  void add_comparison(Comparison c) { comparisons.push_back(std::move(c)); }
};

// cellwise equality for internal degree <= max_d
Comparison compare_tables(const std::string& label, const PoincareTable& lhs, const PoincareTable& rhs, int max_d);

// HH^0(F(beta)) against HH^n(-2n)(F(ft(n) beta))
CheckReport check_serre(const BraidWord& beta, const SliceRequest& req);
// a = 0 column of hhh(F(beta)) against the a = n column of hhh(F(beta ft(n))) moved by (-2n)
CheckReport check_kalman_cat(const BraidWord& beta, const SliceRequest& req);
// pi^-(X) against pi^+(F(jm(n)) X) and pi^+(X F(jm(n)))
CheckReport check_relative_serre(const SBComplex& x, const std::string& label, const SliceRequest& req);
// normalized HH^k(M) against the graded dual of normalized HH^{n-k}(M^v), via free ranks
CheckReport check_hh_duality(const BSBimodule& m, const SliceRequest& req);
// termwise free ranks of normalized HH^k(F(beta)^t) against the duals for F(beta^-1)^{-t}
CheckReport check_hh_duality_complex(const BraidWord& beta, const SliceRequest& req);
// HH_k computed directly against HH^{n-k}(-2n), for every k
CheckReport check_hh_lower_upper(const BSBimodule& m, const SliceRequest& req);
// HH^0(B_1) and HH_0(B_1) at n = 2
CheckReport check_hh_calibration(const SliceRequest& req);
// both stabilizations of beta on n - 1 strands to n = beta.n + 1 strands
CheckReport check_markov(const BraidWord& beta, const SliceRequest& req);
// alternating sum over t of a normalized table against Tr(beta), degrees <= cutoff
Comparison euler_comparison(const PoincareTable& normalized, const BraidWord& beta, int cutoff);
// Euler characteristic of the normalized hhh table against the Jones-Ocneanu trace
CheckReport check_euler(const BraidWord& beta, const SliceRequest& req);
// HH^0(F_w^-1) and HH^n(F_w) vanish for w != e
CheckReport check_vanishing(int n, const SliceRequest& req);
// Hom(F_v, F^-1_{w^-1}) vanishes for v != w and is R for v = w
CheckReport check_lw(int n, const SliceRequest& req);
// Hom(F_w, F_v) vanishes exactly when w is not below v
CheckReport check_bruhat(int n, const SliceRequest& req);
// Cone(psi_i) against [R(-1) -> R(1)] and pi^+(Cone(Psi_n)) = 0
CheckReport check_cone_psi(int n, const SliceRequest& req);
// hhh(F(beta)) unchanged by Gaussian elimination
CheckReport check_homotopy_invariance(const BraidWord& beta, const SliceRequest& req);
// Tr^n(x FT) = Tr^0(x) for all H_w and random elements; exact, no cutoff
CheckReport check_kalman_decat(int n, int random_samples = 20, unsigned seed = 1);

}  // namespace soergel
