#include "soergel/bimod.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "soergel/errors.hpp"
#include "soergel/exactla.hpp"
#include "soergel/slice.hpp"

namespace soergel {

namespace {

// writes block b of a 2x2 block pattern: entry [a', a] goes to (2a'+cr, 2a+cc)
void place_interleaved(PolyMatrix& out, const PolyMatrix& block, std::size_t cr, std::size_t cc) {
  for (std::size_t r = 0; r < block.rows(); ++r)
    for (const auto& [c, p] : block.row(r)) out.add_to(2 * r + cr, 2 * c + cc, p);
}

std::shared_ptr<const WordData> build_word(int n, const std::vector<int>& word) {
  auto wd = std::make_shared<WordData>();
  wd->n = n;
  wd->word = word;
  if (word.empty()) {
    wd->base_deg = {0};
    for (int j = 1; j <= n; ++j) wd->X.push_back(PolyMatrix::scalar(1, PolyR::var(n, j)));
  } else {
    std::vector<int> prefix(word.begin(), word.end() - 1);
    const int i = word.back();
    auto p = word_data(n, prefix);
    const std::size_t r = p->base_deg.size();
    for (std::size_t a = 0; a < r; ++a) {
      wd->base_deg.push_back(p->base_deg[a] - 1);
      wd->base_deg.push_back(p->base_deg[a] + 1);
    }
    const PolyMatrix& xi = p->X[static_cast<std::size_t>(i - 1)];
    const PolyMatrix& xi1 = p->X[static_cast<std::size_t>(i)];
    const PolyMatrix sum = xi + xi1;
    const PolyMatrix prod = xi * xi1;
    const PolyMatrix id = PolyMatrix::identity(n, r);
    for (int j = 1; j <= n; ++j) {
      PolyMatrix m(n, 2 * r, 2 * r);
      if (j == i + 1) {
        place_interleaved(m, -prod, 0, 1);
        place_interleaved(m, id, 1, 0);
        place_interleaved(m, sum, 1, 1);
      } else if (j == i) {
        place_interleaved(m, sum, 0, 0);
        place_interleaved(m, prod, 0, 1);
        place_interleaved(m, -id, 1, 0);
      } else {
        const PolyMatrix& xj = p->X[static_cast<std::size_t>(j - 1)];
        place_interleaved(m, xj, 0, 0);
        place_interleaved(m, xj, 1, 1);
      }
      wd->X.push_back(std::move(m));
    }
  }
  for (const auto& m : wd->X) wd->X0.push_back(m.map_entries_kill_center());
  return wd;
}

}  // namespace

std::shared_ptr<const WordData> word_data(int n, const std::vector<int>& word) {
  if (n < 1) throw IndexOutOfRange("strand count must be positive");
  for (int i : word)
    if (i < 1 || i >= n) throw IndexOutOfRange("letter " + std::to_string(i) + " out of range");
  static std::recursive_mutex mu;
  static std::map<std::pair<int, std::vector<int>>, std::shared_ptr<const WordData>> cache;
  std::lock_guard<std::recursive_mutex> lock(mu);
  auto key = std::make_pair(n, word);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto wd = build_word(n, word);
  cache.emplace(std::move(key), wd);
  return wd;
}

BSBimodule::BSBimodule(int n, const std::vector<int>& word, int shift) : data_(word_data(n, word)), shift_(shift) {}

std::vector<int> BSBimodule::basis_degrees() const {
  std::vector<int> d(rank());
  for (std::size_t b = 0; b < rank(); ++b) d[b] = basis_degree(b);
  return d;
}

bool BSBimodule::operator<(const BSBimodule& o) const {
  if (n() != o.n()) return n() < o.n();
  if (word() != o.word()) return word() < o.word();
  return shift_ < o.shift_;
}

std::string BSBimodule::to_string() const {
  std::ostringstream os;
  if (word().empty())
    os << "R";
  else
    for (std::size_t k = 0; k < word().size(); ++k) os << (k ? "." : "") << "B" << word()[k];
  if (shift_) os << "(" << shift_ << ")";
  return os.str();
}

BSBimodule unit_bimodule(int n, int shift) { return BSBimodule(n, {}, shift); }

BSBimodule elementary(int i, int n) {
  if (i < 1 || i >= n) throw IndexOutOfRange("elementary bimodule index out of range");
  return BSBimodule(n, {i});
}

BSBimodule tensor(const BSBimodule& m, const BSBimodule& p) {
  if (m.n() != p.n()) throw StrandMismatch("tensor of bimodules on different strand counts");
  std::vector<int> w = m.word();
  w.insert(w.end(), p.word().begin(), p.word().end());
  return BSBimodule(m.n(), w, m.shift() + p.shift());
}

BSBimodule dual(const BSBimodule& m) {
  std::vector<int> w(m.word().rbegin(), m.word().rend());
  return BSBimodule(m.n(), w, -m.shift());
}

void validate_bimodule(const BSBimodule& m) {
  const int n = m.n();
  const auto& X = m.right_actions();
  for (int j = 0; j < n; ++j)
    for (int l = j + 1; l < n; ++l)
      if (X[static_cast<std::size_t>(j)] * X[static_cast<std::size_t>(l)] !=
          X[static_cast<std::size_t>(l)] * X[static_cast<std::size_t>(j)])
        throw Error("right actions do not commute");
  for (int j = 1; j <= n; ++j) {
    bool adjacent = false;
    for (int i : m.word()) adjacent |= (j == i || j == i + 1);
    if (!adjacent && X[static_cast<std::size_t>(j - 1)] != PolyMatrix::scalar(m.rank(), PolyR::var(n, j)))
      throw Error("x_" + std::to_string(j) + " does not slide through");
  }
  // symmetric functions in x_i, x_{i+1} slide through the last letter
  const auto& w = m.word();
  for (std::size_t len = 1; len <= w.size(); ++len) {
    const BSBimodule full(n, std::vector<int>(w.begin(), w.begin() + static_cast<long>(len)));
    const BSBimodule pre(n, std::vector<int>(w.begin(), w.begin() + static_cast<long>(len) - 1));
    const auto i = static_cast<std::size_t>(w[len - 1]);
    const auto& fx = full.right_actions();
    const auto& px = pre.right_actions();
    PolyMatrix s(n, full.rank(), full.rank()), p(n, full.rank(), full.rank());
    place_interleaved(s, px[i - 1] + px[i], 0, 0);
    place_interleaved(s, px[i - 1] + px[i], 1, 1);
    place_interleaved(p, px[i - 1] * px[i], 0, 0);
    place_interleaved(p, px[i - 1] * px[i], 1, 1);
    if (fx[i - 1] + fx[i] != s) throw Error("x_i + x_{i+1} relation fails");
    if (fx[i - 1] * fx[i] != p) throw Error("x_i x_{i+1} relation fails");
  }
  for (int j = 1; j <= n; ++j) {
    const PolyMatrix& x = X[static_cast<std::size_t>(j - 1)];
    for (std::size_t a = 0; a < x.rows(); ++a)
      for (const auto& [b, p] : x.row(a)) {
        if (!p.is_homogeneous() || p.degree() != 2 + m.basis_degree(b) - m.basis_degree(a))
          throw Error("right action entry has the wrong degree");
      }
  }
}

// ---------------------------------------------------------------- maps

void BimMap::validate() const {
  if (src.n() != tgt.n()) throw StrandMismatch("map between different strand counts");
  if (mat.rows() != tgt.rank() || mat.cols() != src.rank()) throw ShapeMismatch("map matrix has the wrong shape");
  for (std::size_t a = 0; a < mat.rows(); ++a)
    for (const auto& [b, p] : mat.row(a))
      if (!p.is_homogeneous() || p.degree() != degree + src.basis_degree(b) - tgt.basis_degree(a))
        throw Error("map entry (" + std::to_string(a) + "," + std::to_string(b) + ") has the wrong degree");
  for (int j = 1; j <= src.n(); ++j)
    if (mat * src.right_action(j) != tgt.right_action(j) * mat)
      throw Error("map does not commute with the right action of x_" + std::to_string(j));
}

bool BimMap::is_valid() const {
  try {
    validate();
    return true;
  } catch (const Error&) {
    return false;
  }
}

BimMap identity_map(const BSBimodule& m) { return BimMap{m, m, 0, PolyMatrix::identity(m.n(), m.rank())}; }

BimMap zero_map(const BSBimodule& src, const BSBimodule& tgt, int degree) {
  return BimMap{src, tgt, degree, PolyMatrix(src.n(), tgt.rank(), src.rank())};
}

BimMap compose(const BimMap& f, const BimMap& g) {
  if (!g.tgt.same_object(f.src)) throw ShapeMismatch("composition of incompatible maps");
  return BimMap{g.src, f.tgt, f.degree + g.degree, f.mat * g.mat};
}

BimMap add(const BimMap& f, const BimMap& g) {
  if (!f.src.same_object(g.src) || !f.tgt.same_object(g.tgt) || f.degree != g.degree)
    throw ShapeMismatch("sum of incompatible maps");
  return BimMap{f.src, f.tgt, f.degree, f.mat + g.mat};
}

BimMap scale(const BimMap& f, const mpq_class& s) { return BimMap{f.src, f.tgt, f.degree, f.mat.scaled(s)}; }

BimMap tensor_maps(const BimMap& f, const BimMap& g) {
  if (f.src.n() != g.src.n()) throw StrandMismatch("tensor of maps on different strand counts");
  const int n = f.src.n();
  const std::size_t rm = f.src.rank(), rm2 = f.tgt.rank();
  const std::size_t rp = g.src.rank(), rp2 = g.tgt.rank();
  PolyMatrix out(n, rm2 * rp2, rm * rp);
  auto put = [&](const PolyMatrix& blk, std::size_t c2, std::size_t c) {
    for (std::size_t a2 = 0; a2 < blk.rows(); ++a2)
      for (const auto& [a, p] : blk.row(a2)) out.add_to(a2 * rp2 + c2, a * rp + c, p);
  };
  const bool g_is_id = g.src.same_object(g.tgt) && g.mat == PolyMatrix::identity(n, rp);
  if (g_is_id) {
    for (std::size_t c = 0; c < rp; ++c) put(f.mat, c, c);
  } else {
    MatrixEvaluator ev(f.tgt.right_actions());
    for (std::size_t c2 = 0; c2 < rp2; ++c2)
      for (const auto& [c, p] : g.mat.row(c2)) put(ev.eval(p) * f.mat, c2, c);
  }
  return BimMap{tensor(f.src, g.src), tensor(f.tgt, g.tgt), f.degree + g.degree, std::move(out)};
}

BimMap counit(int i, int n) {
  const BSBimodule b = elementary(i, n);
  PolyMatrix m(n, 1, 2);
  m.set(0, 0, PolyR::constant(n, 1));
  m.set(0, 1, PolyR::var(n, i + 1));
  return BimMap{b, unit_bimodule(n, 1), 0, m};
}

BimMap unit(int i, int n) {
  const BSBimodule b = elementary(i, n);
  PolyMatrix m(n, 2, 1);
  m.set(0, 0, PolyR::var(n, i));
  m.set(1, 0, PolyR::constant(n, -1));
  return BimMap{unit_bimodule(n, -1), b, 0, m};
}

SplitMaps split_maps(int i, int n) {
  const BSBimodule b = elementary(i, n);
  const BSBimodule bb = tensor(b, b);
  const PolyR one = PolyR::constant(n, 1);
  const PolyR x = PolyR::var(n, i + 1);
  SplitMaps s;
  s.mu = zero_map(bb, b.shifted(1));
  s.m = zero_map(bb, b.shifted(-1));
  s.delta = zero_map(b.shifted(1), bb);
  s.iota = zero_map(b.shifted(-1), bb);
  for (std::size_t e = 0; e < 2; ++e) {
    s.mu.mat.set(e, e, one);
    s.mu.mat.set(e, 2 + e, x);
    s.m.mat.set(e, 2 + e, -one);
    s.delta.mat.set(e, e, one);
    s.iota.mat.set(e, e, x);
    s.iota.mat.set(2 + e, e, -one);
  }
  return s;
}

FrobeniusMaps frobenius_maps(int i, int n) {
  const SplitMaps s = split_maps(i, n);
  FrobeniusMaps f;
  f.mult = s.m;
  f.comult = s.delta;
  BimMap c = counit(i, n);
  f.counit = BimMap{c.src.shifted(-1), unit_bimodule(n, 0), 0, c.mat};
  BimMap u = unit(i, n);
  f.unit = BimMap{unit_bimodule(n, 0), u.tgt.shifted(1), 0, u.mat};
  return f;
}

namespace {

BimMap relabel(const BimMap& f, const BSBimodule& src, const BSBimodule& tgt) {
  if (src.rank() != f.src.rank() || tgt.rank() != f.tgt.rank()) throw ShapeMismatch("relabel changes ranks");
  return BimMap{src, tgt, f.degree, f.mat};
}

BimMap evaluation_word(int n, const std::vector<int>& w) {
  if (w.empty()) return identity_map(unit_bimodule(n));
  const int i = w.back();
  const std::vector<int> pre(w.begin(), w.end() - 1);
  const FrobeniusMaps fr = frobenius_maps(i, n);
  // shift B(-1) -> R to B_i(-1) labelled as target of mult
  const BimMap pairing = compose(fr.counit, fr.mult);
  const BimMap idb = identity_map(elementary(i, n));
  const BimMap inner = tensor_maps(tensor_maps(idb, evaluation_word(n, pre)), idb);
  return compose(pairing, relabel(inner, inner.src, pairing.src));
}

BimMap coevaluation_word(int n, const std::vector<int>& w) {
  if (w.empty()) return identity_map(unit_bimodule(n));
  const int i = w.back();
  const std::vector<int> pre(w.begin(), w.end() - 1);
  const FrobeniusMaps fr = frobenius_maps(i, n);
  const BimMap copairing = compose(fr.comult, fr.unit);
  const BSBimodule mpre(n, pre);
  const BimMap mid = tensor_maps(tensor_maps(identity_map(mpre), copairing), identity_map(dual(mpre)));
  const BimMap prev = coevaluation_word(n, pre);
  return compose(relabel(mid, prev.tgt, mid.tgt), prev);
}

}  // namespace

BimMap evaluation(const BSBimodule& m) {
  BimMap e = evaluation_word(m.n(), m.word());
  return relabel(e, tensor(dual(m), m), unit_bimodule(m.n()));
}

BimMap coevaluation(const BSBimodule& m) {
  BimMap c = coevaluation_word(m.n(), m.word());
  return relabel(c, unit_bimodule(m.n()), tensor(m, dual(m)));
}

BimMap dual_map(const BimMap& f) {
  const BSBimodule& m = f.src;
  const BSBimodule& nn = f.tgt;
  const BSBimodule mv = dual(m), nv = dual(nn);
  const BimMap step1 = tensor_maps(identity_map(nv), coevaluation(m));
  const BimMap step2 = tensor_maps(tensor_maps(identity_map(nv), f), identity_map(mv));
  const BimMap step3 = tensor_maps(evaluation(nn), identity_map(mv));
  BimMap r = compose(step3, compose(step2, step1));
  return relabel(r, nv, mv);
}

std::map<int, std::size_t> bar(const BSBimodule& m, int max_degree) {
  const int n = m.n();
  const RationalField Q;
  std::vector<FieldPolyMatrix<RationalField>> xs;
  for (int j = 1; j <= n; ++j) xs.push_back(to_field(m.right_action(j), Q));
  const auto deg = m.basis_degrees();
  std::vector<int> src_deg;
  for (int j = 0; j < n; ++j) src_deg.insert(src_deg.end(), deg.begin(), deg.end());
  const int lo = *std::min_element(deg.begin(), deg.end());
  std::map<int, std::size_t> out;
  for (int d = lo; d <= max_degree; ++d) {
    const SliceLayout tgt(n, deg, d);
    if (tgt.dim() == 0) continue;
    const SliceLayout src(n, src_deg, d - 2);
    std::vector<Triplet<RationalField>> t;
    for (int j = 0; j < n; ++j)
      emit_block(t, Q, xs[static_cast<std::size_t>(j)], src, static_cast<std::size_t>(j) * m.rank(), tgt, 0, Q.one());
    const SparseMatrix<RationalField> a(Q, tgt.dim(), src.dim(), std::move(t));
    const std::size_t v = tgt.dim() - rank(a);
    if (v) out[d] = v;
  }
  return out;
}

}  // namespace soergel
