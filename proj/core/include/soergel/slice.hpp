#pragma once

// Finite slices of free graded R-modules. A layout lists generators with
// degrees; its degree-d slice has basis {x^alpha g : 2|alpha| + deg g = d}.
// Polynomial block matrices become sparse scalar matrices between slices.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "soergel/exactla.hpp"
#include "soergel/poly.hpp"

namespace soergel {

const std::unordered_map<MonoKey, std::uint32_t>& monomial_index(int nvars, int m);

class SliceLayout {
 public:
  SliceLayout(int nvars, std::vector<int> gen_deg, int d);

  int nvars() const { return nvars_; }
  int degree() const { return d_; }
  std::size_t dim() const { return dim_; }
  std::size_t generators() const { return gen_deg_.size(); }
  // monomial total exponent for generator g, -1 if the slot is empty
  int total(std::size_t g) const { return total_[g]; }
  std::size_t start(std::size_t g) const { return start_[g]; }
  const std::vector<MonoKey>& monos(std::size_t g) const;
  // index of x^key g, or -1 if absent
  long index(std::size_t g, MonoKey key) const;

 private:
  int nvars_;
  std::vector<int> gen_deg_;
  int d_;
  std::vector<int> total_;
  std::vector<std::size_t> start_;
  std::vector<const std::vector<MonoKey>*> monos_;
  std::vector<const std::unordered_map<MonoKey, std::uint32_t>*> idx_;
  std::size_t dim_ = 0;
};

// polynomial matrix converted to field coefficients, stored by column
template <class F>
struct FieldPolyMatrix {
  using Poly = std::vector<std::pair<MonoKey, typename F::Elem>>;
  std::size_t rows = 0, cols = 0;
  std::vector<std::vector<std::pair<std::uint32_t, Poly>>> by_col;
};

template <class F>
FieldPolyMatrix<F> to_field(const PolyMatrix& m, const F& field) {
  FieldPolyMatrix<F> out;
  out.rows = m.rows();
  out.cols = m.cols();
  out.by_col.resize(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto& [c, p] : m.row(r)) {
      typename FieldPolyMatrix<F>::Poly fp;
      for (const auto& [k, q] : p.terms()) {
        auto e = field.from_rational(q);
        if (!field.is_zero(e)) fp.emplace_back(k, e);
      }
      if (!fp.empty()) out.by_col[c].emplace_back(static_cast<std::uint32_t>(r), std::move(fp));
    }
  return out;
}

// Appends the slice of the block m (generators src0.. of src to tgt0.. of tgt),
// scaled by s, with row offset row0 and column offset col0 into a bigger matrix.
template <class F>
void emit_block(std::vector<Triplet<F>>& out, const F& field, const FieldPolyMatrix<F>& m, const SliceLayout& src,
                std::size_t src0, const SliceLayout& tgt, std::size_t tgt0, typename F::Elem s, std::size_t row0 = 0,
                std::size_t col0 = 0) {
  for (std::size_t b = 0; b < m.cols; ++b) {
    const std::size_t gs = src0 + b;
    if (src.total(gs) < 0 || m.by_col[b].empty()) continue;
    const auto& ms = src.monos(gs);
    for (std::size_t mi = 0; mi < ms.size(); ++mi) {
      const auto col = static_cast<std::uint32_t>(col0 + src.start(gs) + mi);
      for (const auto& [a, poly] : m.by_col[b]) {
        const std::size_t gt = tgt0 + a;
        if (tgt.total(gt) < 0) continue;
        for (const auto& [k, c] : poly) {
          const long idx = tgt.index(gt, ms[mi] + k);
          if (idx < 0) continue;
          out.push_back({static_cast<std::uint32_t>(row0 + static_cast<std::size_t>(idx)), col, field.mul(s, c)});
        }
      }
    }
  }
}

}  // namespace soergel
