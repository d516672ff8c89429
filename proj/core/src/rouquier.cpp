#include "soergel/rouquier.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "soergel/errors.hpp"
#include "soergel/exactla.hpp"

namespace soergel {

namespace {

const std::vector<BSBimodule> kNoTerms;

void add_block(BlockMap& bm, std::size_t tgt, std::size_t src, const PolyMatrix& m) {
  if (m.is_zero()) return;
  auto it = bm.find({tgt, src});
  if (it == bm.end()) {
    bm.emplace(std::make_pair(tgt, src), m);
    return;
  }
  it->second = it->second + m;
  if (it->second.is_zero()) bm.erase(it);
}

// out[(c, a)] = sum_b A[(c, b)] B[(b, a)]
BlockMap block_compose(const BlockMap& a, const BlockMap& b) {
  std::map<std::size_t, std::vector<std::pair<std::size_t, const PolyMatrix*>>> a_by_src;
  for (const auto& [key, m] : a) a_by_src[key.second].emplace_back(key.first, &m);
  BlockMap out;
  for (const auto& [key, m] : b) {
    auto it = a_by_src.find(key.first);
    if (it == a_by_src.end()) continue;
    for (const auto& [c, am] : it->second) add_block(out, c, key.second, (*am) * m);
  }
  return out;
}

BlockMap block_scale(const BlockMap& a, const mpq_class& s) {
  BlockMap out;
  for (const auto& [k, m] : a) add_block(out, k.first, k.second, m.scaled(s));
  return out;
}

bool block_equal(const BlockMap& a, const BlockMap& b) {
  auto clean = [](const BlockMap& x) {
    BlockMap r;
    for (const auto& [k, m] : x)
      if (!m.is_zero()) r.emplace(k, m);
    return r;
  };
  const BlockMap ca = clean(a), cb = clean(b);
  if (ca.size() != cb.size()) return false;
  for (auto ia = ca.begin(), ib = cb.begin(); ia != ca.end(); ++ia, ++ib)
    if (ia->first != ib->first || ia->second != ib->second) return false;
  return true;
}

const BlockMap& blocks_at(const std::map<int, BlockMap>& m, int t) {
  static const BlockMap empty;
  auto it = m.find(t);
  return it == m.end() ? empty : it->second;
}

// id_M (x) g for a map g : P -> P' given by its matrix
PolyMatrix id_tensor(const BSBimodule& m, const PolyMatrix& g, MatrixEvaluator& ev) {
  const std::size_t rm = m.rank();
  const std::size_t rp = g.cols(), rp2 = g.rows();
  PolyMatrix out(m.n(), rm * rp2, rm * rp);
  for (std::size_t c2 = 0; c2 < rp2; ++c2)
    for (const auto& [c, p] : g.row(c2)) {
      const PolyMatrix e = ev.eval(p);
      for (std::size_t a2 = 0; a2 < e.rows(); ++a2)
        for (const auto& [a, q] : e.row(a2)) out.add_to(a2 * rp2 + c2, a * rp + c, q);
    }
  return out;
}

// f (x) id_P
PolyMatrix tensor_id(const PolyMatrix& f, std::size_t rp) {
  PolyMatrix out(f.nvars(), f.rows() * rp, f.cols() * rp);
  for (std::size_t a2 = 0; a2 < f.rows(); ++a2)
    for (const auto& [a, q] : f.row(a2))
      for (std::size_t c = 0; c < rp; ++c) out.add_to(a2 * rp + c, a * rp + c, q);
  return out;
}

using PosKey = std::tuple<int, std::size_t, int, std::size_t>;

std::map<PosKey, std::size_t> tensor_positions(const SBComplex& a, const SBComplex& b, SBComplex* out) {
  std::map<PosKey, std::size_t> pos;
  std::map<int, std::size_t> fill;
  for (const auto& [t1, va] : a.terms)
    for (std::size_t i = 0; i < va.size(); ++i)
      for (const auto& [t2, vb] : b.terms)
        for (std::size_t j = 0; j < vb.size(); ++j) {
          const std::size_t p = fill[t1 + t2]++;
          pos.emplace(PosKey{t1, i, t2, j}, p);
          if (out) out->terms[t1 + t2].push_back(tensor(va[i], vb[j]));
        }
  return pos;
}

bool same_terms(const SBComplex& a, const SBComplex& b) {
  if (a.n != b.n) return false;
  SBComplex x = a, y = b;
  x.prune();
  y.prune();
  if (x.terms.size() != y.terms.size()) return false;
  for (auto ix = x.terms.begin(), iy = y.terms.begin(); ix != x.terms.end(); ++ix, ++iy) {
    if (ix->first != iy->first || ix->second.size() != iy->second.size()) return false;
    for (std::size_t k = 0; k < ix->second.size(); ++k)
      if (!ix->second[k].same_object(iy->second[k])) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- SBComplex

SBComplex SBComplex::unit(int n) { return single(unit_bimodule(n), 0); }

SBComplex SBComplex::single(const BSBimodule& m, int degree) {
  SBComplex c;
  c.n = m.n();
  c.terms[degree].push_back(m);
  return c;
}

const std::vector<BSBimodule>& SBComplex::at(int t) const {
  auto it = terms.find(t);
  return it == terms.end() ? kNoTerms : it->second;
}

int SBComplex::min_degree() const {
  for (const auto& [t, v] : terms)
    if (!v.empty()) return t;
  return 0;
}

int SBComplex::max_degree() const {
  for (auto it = terms.rbegin(); it != terms.rend(); ++it)
    if (!it->second.empty()) return it->first;
  return 0;
}

std::size_t SBComplex::summand_count() const {
  std::size_t s = 0;
  for (const auto& [t, v] : terms) s += v.size();
  return s;
}

void SBComplex::check_d_squared() const {
  for (const auto& [t, bm] : d) {
    auto it = d.find(t + 1);
    if (it == d.end()) continue;
    const BlockMap sq = block_compose(it->second, bm);
    for (const auto& [k, m] : sq)
      if (!m.is_zero()) throw ChainConditionViolated("d^2 != 0 at homological degree " + std::to_string(t));
  }
}

void SBComplex::validate() const {
  for (const auto& [t, bm] : d)
    for (const auto& [k, m] : bm) {
      const auto& src = at(t);
      const auto& tgt = at(t + 1);
      if (k.second >= src.size() || k.first >= tgt.size()) throw ShapeMismatch("differential block index out of range");
      BimMap{src[k.second], tgt[k.first], 0, m}.validate();
    }
  check_d_squared();
}

std::map<int, std::vector<std::string>> SBComplex::summand_multiset() const {
  std::map<int, std::vector<std::string>> out;
  for (const auto& [t, v] : terms) {
    if (v.empty()) continue;
    auto& l = out[t];
    for (const auto& m : v) l.push_back(m.to_string());
    std::sort(l.begin(), l.end());
  }
  return out;
}

std::string SBComplex::summary() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, l] : summand_multiset()) {
    os << (first ? "" : " | ") << t << ":";
    first = false;
    for (const auto& s : l) os << " " << s;
  }
  return first ? "0" : os.str();
}

void SBComplex::prune() {
  for (auto it = terms.begin(); it != terms.end();) it = it->second.empty() ? terms.erase(it) : std::next(it);
  for (auto& [t, bm] : d)
    for (auto it = bm.begin(); it != bm.end();) it = it->second.is_zero() ? bm.erase(it) : std::next(it);
  for (auto it = d.begin(); it != d.end();) it = it->second.empty() ? d.erase(it) : std::next(it);
}

SBComplex rouquier_generator(int i, int sign, int n) {
  if (i < 1 || i >= n) throw IndexOutOfRange("generator index out of range");
  SBComplex c;
  c.n = n;
  if (sign > 0) {
    const BimMap b = counit(i, n);
    c.terms[0].push_back(b.src);
    c.terms[1].push_back(b.tgt);
    c.d[0].emplace(std::make_pair(0, 0), b.mat);
  } else {
    const BimMap b = unit(i, n);
    c.terms[-1].push_back(b.src);
    c.terms[0].push_back(b.tgt);
    c.d[-1].emplace(std::make_pair(0, 0), b.mat);
  }
  return c;
}

SBComplex tensor_complex(const SBComplex& a, const SBComplex& b) {
  if (a.n != b.n) throw StrandMismatch("tensor of complexes on different strand counts");
  SBComplex r;
  r.n = a.n;
  const auto pos = tensor_positions(a, b, &r);
  for (const auto& [t1, bm] : a.d)
    for (const auto& [key, f] : bm)
      for (const auto& [t2, vb] : b.terms)
        for (std::size_t j = 0; j < vb.size(); ++j)
          add_block(r.d[t1 + t2], pos.at({t1 + 1, key.first, t2, j}), pos.at({t1, key.second, t2, j}),
                    tensor_id(f, vb[j].rank()));
  for (const auto& [t1, va] : a.terms)
    for (std::size_t i = 0; i < va.size(); ++i) {
      MatrixEvaluator ev(va[i].right_actions());
      const mpq_class sign = (t1 % 2 == 0) ? 1 : -1;
      for (const auto& [t2, bm] : b.d)
        for (const auto& [key, g] : bm)
          add_block(r.d[t1 + t2], pos.at({t1, i, t2 + 1, key.first}), pos.at({t1, i, t2, key.second}),
                    id_tensor(va[i], g, ev).scaled(sign));
    }
  r.prune();
  return r;
}

SBComplex shift_complex(const SBComplex& c, int internal_shift) {
  SBComplex r = c;
  for (auto& [t, v] : r.terms)
    for (auto& m : v) m = m.shifted(internal_shift);
  return r;
}

SBComplex braid_to_complex(const BraidWord& b) {
  SBComplex c = SBComplex::unit(b.n);
  for (int l : b.letters) c = tensor_complex(c, rouquier_generator(l > 0 ? l : -l, l > 0 ? 1 : -1, b.n));
  return c;
}

SBComplex braid_to_complex_reduced(const BraidWord& b) {
  SBComplex c = SBComplex::unit(b.n);
  for (int l : b.letters)
    c = gaussian_eliminate(tensor_complex(c, rouquier_generator(l > 0 ? l : -l, l > 0 ? 1 : -1, b.n)));
  return c;
}

SpecialBraids special_braids(int n) { return SpecialBraids{half_twist(n), full_twist(n), jucys_murphy(n)}; }

// ---------------------------------------------------------------- chain maps

void ChainMap::check() const {
  if (!src || !tgt) throw Error("chain map without complexes");
  for (const auto& [t, bm] : f)
    for (const auto& [k, m] : bm) {
      const auto& s = src->at(t);
      const auto& g = tgt->at(t + hdeg);
      if (k.second >= s.size() || k.first >= g.size()) throw ShapeMismatch("chain map block index out of range");
      BimMap{s[k.second], g[k.first], 0, m}.validate();
    }
  std::set<int> degrees;
  for (const auto& [t, v] : src->terms) degrees.insert(t);
  for (int t : degrees) {
    const BlockMap lhs = block_compose(blocks_at(tgt->d, t + hdeg), blocks_at(f, t));
    BlockMap rhs = block_compose(blocks_at(f, t + 1), blocks_at(src->d, t));
    if (hdeg % 2) rhs = block_scale(rhs, -1);
    if (!block_equal(lhs, rhs))
      throw ChainConditionViolated("chain map does not commute with d at degree " + std::to_string(t));
  }
}

bool ChainMap::is_chain_map() const {
  try {
    check();
    return true;
  } catch (const Error&) {
    return false;
  }
}

ChainMap identity_chain_map(const std::shared_ptr<const SBComplex>& c) {
  ChainMap m{c, c, 0, {}};
  for (const auto& [t, v] : c->terms)
    for (std::size_t i = 0; i < v.size(); ++i) m.f[t].emplace(std::make_pair(i, i), PolyMatrix::identity(c->n, v[i].rank()));
  return m;
}

ChainMap compose(const ChainMap& f, const ChainMap& g) {
  if (!same_terms(*g.tgt, *f.src)) throw ShapeMismatch("composition of incompatible chain maps");
  ChainMap r{g.src, f.tgt, f.hdeg + g.hdeg, {}};
  for (const auto& [t, bm] : g.f) {
    BlockMap c = block_compose(blocks_at(f.f, t + g.hdeg), bm);
    if (!c.empty()) r.f[t] = std::move(c);
  }
  return r;
}

ChainMap tensor_chain_maps(const ChainMap& f, const ChainMap& g) {
  if (f.hdeg != 0 || g.hdeg != 0) throw Error("tensor of chain maps is implemented in degree 0");
  auto src = std::make_shared<SBComplex>(tensor_complex(*f.src, *g.src));
  auto tgt = std::make_shared<SBComplex>(tensor_complex(*f.tgt, *g.tgt));
  const auto ps = tensor_positions(*f.src, *g.src, nullptr);
  const auto pt = tensor_positions(*f.tgt, *g.tgt, nullptr);
  ChainMap r{src, tgt, 0, {}};
  for (const auto& [t1, fb] : f.f)
    for (const auto& [fk, fm] : fb) {
      const BimMap bf{f.src->at(t1)[fk.second], f.tgt->at(t1)[fk.first], 0, fm};
      for (const auto& [t2, gb] : g.f)
        for (const auto& [gk, gm] : gb) {
          const BimMap bg{g.src->at(t2)[gk.second], g.tgt->at(t2)[gk.first], 0, gm};
          add_block(r.f[t1 + t2], pt.at({t1, fk.first, t2, gk.first}), ps.at({t1, fk.second, t2, gk.second}),
                    tensor_maps(bf, bg).mat);
        }
    }
  return r;
}

SBComplex cone(const ChainMap& f) {
  if (f.hdeg != 0) throw Error("cone of a chain map of nonzero degree");
  const SBComplex& a = *f.src;
  const SBComplex& b = *f.tgt;
  SBComplex c;
  c.n = a.n;
  std::set<int> degs;
  for (const auto& [t, v] : a.terms) degs.insert(t - 1);
  for (const auto& [t, v] : b.terms) degs.insert(t);
  for (int t : degs) {
    auto& v = c.terms[t];
    for (const auto& m : a.at(t + 1)) v.push_back(m);
    for (const auto& m : b.at(t)) v.push_back(m);
  }
  for (int t : degs) {
    const std::size_t na = a.at(t + 1).size();
    const std::size_t na2 = a.at(t + 2).size();
    BlockMap& out = c.d[t];
    for (const auto& [k, m] : blocks_at(a.d, t + 1)) add_block(out, k.first, k.second, -m);
    for (const auto& [k, m] : blocks_at(f.f, t + 1)) add_block(out, na2 + k.first, k.second, m);
    for (const auto& [k, m] : blocks_at(b.d, t)) add_block(out, na2 + k.first, na + k.second, m);
  }
  c.prune();
  return c;
}

ChainMap psi_generator(int i, int n) {
  auto src = std::make_shared<SBComplex>(rouquier_generator(i, 1, n));
  auto tgt = std::make_shared<SBComplex>(rouquier_generator(i, -1, n));
  ChainMap m{src, tgt, 0, {}};
  m.f[0].emplace(std::make_pair(0, 0), PolyMatrix::identity(n, 2));
  return m;
}

ChainMap psi_w(const Perm& w) {
  const int n = w.n();
  const auto& word = w.reduced_word();
  if (word.empty()) return identity_chain_map(std::make_shared<SBComplex>(SBComplex::unit(n)));
  ChainMap m = psi_generator(word[0], n);
  for (std::size_t k = 1; k < word.size(); ++k) m = tensor_chain_maps(m, psi_generator(word[k], n));
  return m;
}

namespace {

ChainMap splitting_map_on(int k, int n) {
  if (k == 1) return identity_chain_map(std::make_shared<SBComplex>(SBComplex::unit(n)));
  const auto fk = std::make_shared<SBComplex>(rouquier_generator(k - 1, 1, n));
  const ChainMap idf = identity_chain_map(fk);
  const ChainMap prev = splitting_map_on(k - 1, n);
  const ChainMap step1 = tensor_chain_maps(tensor_chain_maps(idf, prev), idf);
  const ChainMap step2 = tensor_chain_maps(idf, psi_generator(k - 1, n));
  ChainMap tracked = compose(step2, step1);
  const SBComplex reduced = gaussian_eliminate(*step2.tgt, &tracked);
  if (!same_terms(reduced, SBComplex::unit(n))) throw Error("F F^-1 did not reduce to [R]: " + reduced.summary());
  return tracked;
}

}  // namespace

ChainMap splitting_map(int n) { return splitting_map_on(n, n); }

// ---------------------------------------------------------------- Gaussian elimination

namespace {

struct Work {
  int n = 1;
  std::map<int, std::vector<BSBimodule>> mods;
  std::map<int, std::vector<char>> alive;
  // D[t][tgt][src] : C^t -> C^{t+1}
  std::map<int, std::map<std::size_t, std::map<std::size_t, PolyMatrix>>> D;
  // P[t][tgt][z] : Z^t -> C^t (degree-0 tracked map)
  bool tracking = false;
  std::map<int, std::map<std::size_t, std::map<std::size_t, PolyMatrix>>> P;
  std::map<std::tuple<int, std::size_t, std::size_t>, bool> invertible_cache;

  void set_block(int t, std::size_t tgt, std::size_t src, PolyMatrix m) {
    invertible_cache.erase({t, tgt, src});
    auto& row = D[t][tgt];
    if (m.is_zero())
      row.erase(src);
    else
      row[src] = std::move(m);
  }
  void set_track(int t, std::size_t tgt, std::size_t z, PolyMatrix m) {
    auto& row = P[t][tgt];
    if (m.is_zero())
      row.erase(z);
    else
      row[z] = std::move(m);
  }
  std::size_t add_summand(int t, const BSBimodule& m) {
    mods[t].push_back(m);
    alive[t].push_back(1);
    return mods[t].size() - 1;
  }
};

int find_repeat(const std::vector<int>& w) {
  for (std::size_t p = 0; p + 1 < w.size(); ++p)
    if (w[p] == w[p + 1]) return static_cast<int>(p);
  return -1;
}

struct SplitData {
  PolyMatrix phi1, phi2, psi1, psi2;
};

const SplitData& split_data(int n, const std::vector<int>& w, int p) {
  static std::map<std::tuple<int, std::vector<int>, int>, SplitData> cache;
  auto key = std::make_tuple(n, w, p);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const int i = w[static_cast<std::size_t>(p)];
  const BSBimodule x(n, std::vector<int>(w.begin(), w.begin() + p));
  const BSBimodule y(n, std::vector<int>(w.begin() + p + 2, w.end()));
  const SplitMaps s = split_maps(i, n);
  auto wrap = [&](const BimMap& m) {
    return tensor_maps(tensor_maps(identity_map(x), m), identity_map(y)).mat;
  };
  SplitData d{wrap(s.mu), wrap(s.m), wrap(s.delta), wrap(s.iota)};
  return cache.emplace(std::move(key), std::move(d)).first->second;
}

void split_summand(Work& w, int t, std::size_t s, int p) {
  const BSBimodule m = w.mods[t][s];
  const auto& sd = split_data(w.n, m.word(), p);
  std::vector<int> short_word = m.word();
  short_word.erase(short_word.begin() + p);
  const std::size_t s1 = w.add_summand(t, BSBimodule(w.n, short_word, m.shift() + 1));
  const std::size_t s2 = w.add_summand(t, BSBimodule(w.n, short_word, m.shift() - 1));
  // incoming
  if (w.D.count(t - 1)) {
    auto& dm = w.D[t - 1];
    auto it = dm.find(s);
    if (it != dm.end()) {
      auto row = std::move(it->second);
      dm.erase(it);
      for (auto& [u, a] : row) {
        w.set_block(t - 1, s1, u, sd.phi1 * a);
        w.set_block(t - 1, s2, u, sd.phi2 * a);
        w.invertible_cache.erase({t - 1, s, u});
      }
    }
  }
  // outgoing
  if (w.D.count(t)) {
    for (auto& [v, row] : w.D[t]) {
      auto it = row.find(s);
      if (it == row.end()) continue;
      PolyMatrix e = std::move(it->second);
      row.erase(it);
      w.invertible_cache.erase({t, v, s});
      w.set_block(t, v, s1, e * sd.psi1);
      w.set_block(t, v, s2, e * sd.psi2);
    }
  }
  if (w.tracking && w.P.count(t)) {
    auto& pm = w.P[t];
    auto it = pm.find(s);
    if (it != pm.end()) {
      auto row = std::move(it->second);
      pm.erase(it);
      for (auto& [z, a] : row) {
        w.set_track(t, s1, z, sd.phi1 * a);
        w.set_track(t, s2, z, sd.phi2 * a);
      }
    }
  }
  w.alive[t][s] = 0;
}

bool block_invertible(Work& w, int t, std::size_t tgt, std::size_t src, const PolyMatrix& m) {
  auto key = std::make_tuple(t, tgt, src);
  auto it = w.invertible_cache.find(key);
  if (it != w.invertible_cache.end()) return it->second;
  PolyMatrix inv;
  const bool ok = invert_constant(m.constant_part(), inv);
  w.invertible_cache.emplace(key, ok);
  return ok;
}

void cancel(Work& w, int t, std::size_t s, std::size_t tt) {
  const PolyMatrix f = w.D[t][tt][s];
  const PolyMatrix finv = invert_unipotent_like(f);
  // g: A -> T for A != S
  std::vector<std::pair<std::size_t, PolyMatrix>> gs;
  for (const auto& [a, m] : w.D[t][tt])
    if (a != s) gs.emplace_back(a, finv * m);
  // h: S -> B for B != T
  std::vector<std::pair<std::size_t, PolyMatrix>> hs;
  for (const auto& [b, row] : w.D[t]) {
    if (b == tt) continue;
    auto it = row.find(s);
    if (it != row.end()) hs.emplace_back(b, it->second);
  }
  for (const auto& [b, h] : hs)
    for (const auto& [a, fg] : gs) {
      PolyMatrix upd = h * fg;
      auto& row = w.D[t][b];
      auto it = row.find(a);
      w.set_block(t, b, a, it == row.end() ? -upd : it->second - upd);
    }
  if (w.tracking && w.P.count(t + 1)) {
    auto& pm = w.P[t + 1];
    auto it = pm.find(tt);
    if (it != pm.end()) {
      const auto prow = it->second;
      for (const auto& [b, h] : hs) {
        const PolyMatrix hf = h * finv;
        for (const auto& [z, q] : prow) {
          auto& row = pm[b];
          auto jt = row.find(z);
          PolyMatrix upd = hf * q;
          w.set_track(t + 1, b, z, jt == row.end() ? -upd : jt->second - upd);
        }
      }
    }
    w.P[t + 1].erase(tt);
  }
  if (w.tracking && w.P.count(t)) w.P[t].erase(s);
  // drop all blocks touching S and T
  auto drop_row = [&](int deg, std::size_t tgt) {
    if (!w.D.count(deg)) return;
    auto& dm = w.D[deg];
    auto it = dm.find(tgt);
    if (it == dm.end()) return;
    for (const auto& [src, m] : it->second) w.invertible_cache.erase({deg, tgt, src});
    dm.erase(it);
  };
  auto drop_col = [&](int deg, std::size_t src) {
    if (!w.D.count(deg)) return;
    for (auto& [tgt, row] : w.D[deg])
      if (row.erase(src)) w.invertible_cache.erase({deg, tgt, src});
  };
  drop_row(t - 1, s);
  drop_col(t, s);
  drop_row(t, tt);
  drop_col(t + 1, tt);
  w.alive[t][s] = 0;
  w.alive[t + 1][tt] = 0;
}

}  // namespace

SBComplex gaussian_eliminate(const SBComplex& c, ChainMap* track) {
  c.check_d_squared();
  Work w;
  w.n = c.n;
  for (const auto& [t, v] : c.terms)
    for (const auto& m : v) w.add_summand(t, m);
  for (const auto& [t, bm] : c.d)
    for (const auto& [k, m] : bm) w.D[t][k.first][k.second] = m;
  if (track) {
    if (track->hdeg != 0) throw Error("tracked map must have degree 0");
    if (!same_terms(*track->tgt, c)) throw ShapeMismatch("tracked map does not land in the complex");
    w.tracking = true;
    for (const auto& [t, bm] : track->f)
      for (const auto& [k, m] : bm) w.P[t][k.first][k.second] = m;
  }

  // split B_i B_i until no word has an adjacent repeat
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& [t, v] : w.mods)
      for (std::size_t s = 0; s < v.size(); ++s) {
        if (!w.alive[t][s]) continue;
        const int p = find_repeat(v[s].word());
        if (p < 0) continue;
        split_summand(w, t, s, p);
        changed = true;
      }
  }

  // cancel invertible blocks: smallest rank first, then (t, src, tgt)
  for (;;) {
    bool found = false;
    std::tuple<std::size_t, int, std::size_t, std::size_t> best;
    for (auto& [t, dm] : w.D)
      for (auto& [tgt, row] : dm)
        for (auto& [src, m] : row) {
          const BSBimodule& ms = w.mods[t][src];
          const BSBimodule& mt = w.mods[t + 1][tgt];
          if (!ms.same_object(mt)) continue;
          auto key = std::make_tuple(ms.rank(), t, src, tgt);
          if (found && !(key < best)) continue;
          if (!block_invertible(w, t, tgt, src, m)) continue;
          best = key;
          found = true;
        }
    if (!found) break;
    cancel(w, std::get<1>(best), std::get<2>(best), std::get<3>(best));
  }

  // compact
  SBComplex r;
  r.n = c.n;
  std::map<int, std::vector<long>> remap;
  for (auto& [t, v] : w.mods) {
    auto& rm = remap[t];
    rm.assign(v.size(), -1);
    for (std::size_t s = 0; s < v.size(); ++s)
      if (w.alive[t][s]) {
        rm[s] = static_cast<long>(r.terms[t].size());
        r.terms[t].push_back(v[s]);
      }
  }
  for (auto& [t, dm] : w.D)
    for (auto& [tgt, row] : dm)
      for (auto& [src, m] : row) {
        if (!w.alive[t][src] || !w.alive[t + 1][tgt]) continue;
        add_block(r.d[t], static_cast<std::size_t>(remap[t + 1][tgt]), static_cast<std::size_t>(remap[t][src]), m);
      }
  r.prune();
  r.check_d_squared();
  if (track) {
    auto tgt = std::make_shared<SBComplex>(r);
    ChainMap nt{track->src, tgt, 0, {}};
    for (auto& [t, pm] : w.P)
      for (auto& [ct, row] : pm) {
        if (!w.alive[t][ct]) continue;
        for (auto& [z, m] : row) add_block(nt.f[t], static_cast<std::size_t>(remap[t][ct]), z, m);
      }
    for (auto it = nt.f.begin(); it != nt.f.end();) it = it->second.empty() ? nt.f.erase(it) : std::next(it);
    *track = std::move(nt);
  }
  return r;
}

// ---------------------------------------------------------------- serialization

namespace {

constexpr const char* kMagic = "soergel-complex";
constexpr int kFormatVersion = 1;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

void write_poly(std::ostream& os, const PolyR& p, int n) {
  os << p.terms().size();
  for (const auto& [k, c] : p.terms()) {
    os << " " << c.get_str();
    for (int j = 0; j < n; ++j) os << " " << mono_exp(k, j);
  }
}

PolyR read_poly(std::istream& is, int n) {
  std::size_t nt = 0;
  is >> nt;
  PolyBuilder b(n);
  for (std::size_t i = 0; i < nt; ++i) {
    std::string c;
    is >> c;
    std::vector<int> e(static_cast<std::size_t>(n));
    for (auto& x : e) is >> x;
    b.add(mono_from_exps(e), mpq_class(c));
  }
  if (!is) throw Error("truncated polynomial in complex file");
  return b.build();
}

}  // namespace

void save_complex(const SBComplex& c, std::ostream& os) {
  std::ostringstream body;
  body << "n " << c.n << "\n";
  for (const auto& [t, v] : c.terms) {
    body << "term " << t << " " << v.size() << "\n";
    for (const auto& m : v) {
      body << "m " << m.shift() << " " << m.word().size();
      for (int l : m.word()) body << " " << l;
      body << "\n";
    }
  }
  for (const auto& [t, bm] : c.d)
    for (const auto& [k, m] : bm) {
      body << "block " << t << " " << k.first << " " << k.second << " " << m.rows() << " " << m.cols() << " "
           << m.nnz() << "\n";
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (const auto& [col, p] : m.row(r)) {
          body << "e " << r << " " << col << " ";
          write_poly(body, p, c.n);
          body << "\n";
        }
    }
  body << "end\n";
  const std::string s = body.str();
  os << kMagic << " " << kFormatVersion << "\n" << "checksum " << std::hex << fnv1a(s) << std::dec << "\n" << s;
}

SBComplex load_complex(std::istream& is) {
  std::string magic, word;
  int version = 0;
  is >> magic >> version;
  if (magic != kMagic) throw Error("not a complex file");
  if (version != kFormatVersion) throw Error("unsupported complex file version " + std::to_string(version));
  std::uint64_t sum = 0;
  is >> word >> std::hex >> sum >> std::dec;
  if (word != "checksum") throw Error("missing checksum");
  is.get();
  std::string s((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (fnv1a(s) != sum) throw Error("complex file checksum mismatch");
  std::istringstream in(s);
  SBComplex c;
  in >> word >> c.n;
  if (word != "n") throw Error("malformed complex file");
  while (in >> word) {
    if (word == "end") break;
    if (word == "term") {
      int t = 0;
      std::size_t k = 0;
      in >> t >> k;
      auto& v = c.terms[t];
      for (std::size_t i = 0; i < k; ++i) {
        std::string tag;
        int shift = 0;
        std::size_t len = 0;
        in >> tag >> shift >> len;
        if (tag != "m") throw Error("malformed summand line");
        std::vector<int> w(len);
        for (auto& l : w) in >> l;
        v.emplace_back(c.n, w, shift);
      }
    } else if (word == "block") {
      int t = 0;
      std::size_t tgt = 0, src = 0, rows = 0, cols = 0, nnz = 0;
      in >> t >> tgt >> src >> rows >> cols >> nnz;
      PolyMatrix m(c.n, rows, cols);
      for (std::size_t i = 0; i < nnz; ++i) {
        std::string tag;
        std::size_t r = 0, col = 0;
        in >> tag >> r >> col;
        if (tag != "e") throw Error("malformed block entry");
        m.set(r, col, read_poly(in, c.n));
      }
      c.d[t].emplace(std::make_pair(tgt, src), std::move(m));
    } else {
      throw Error("unexpected token '" + word + "' in complex file");
    }
  }
  c.validate();
  return c;
}

}  // namespace soergel

// ---------------------------------------------------------------- Karoubi comparison

namespace soergel {

std::vector<PolyMatrix> hom_degree0(const BSBimodule& src, const BSBimodule& tgt) {
  if (src.n() != tgt.n()) throw StrandMismatch("hom between bimodules on different strand counts");
  const int n = src.n();
  struct Unknown {
    std::size_t a, b;
    MonoKey k;
  };
  std::vector<Unknown> unk;
  for (std::size_t a = 0; a < tgt.rank(); ++a)
    for (std::size_t b = 0; b < src.rank(); ++b) {
      const int deg = src.basis_degree(b) - tgt.basis_degree(a);
      if (deg < 0 || deg % 2 != 0) continue;
      for (MonoKey k : monomials_of_total(n, deg / 2)) unk.push_back({a, b, k});
    }
  if (unk.empty()) return {};
  // residual of each unknown under M X'_j(src) - X'_j(tgt) M, keyed by (j, row, col, monomial)
  std::map<std::tuple<int, std::size_t, std::size_t, MonoKey>, std::uint32_t> eq_index;
  std::vector<Triplet<RationalField>> trip;
  for (std::uint32_t u = 0; u < unk.size(); ++u) {
    PolyMatrix e(n, tgt.rank(), src.rank());
    e.set(unk[u].a, unk[u].b, PolyR::monomial(n, unk[u].k, 1));
    for (int j = 1; j <= n; ++j) {
      const PolyMatrix r = e * src.right_action(j) - tgt.right_action(j) * e;
      for (std::size_t row = 0; row < r.rows(); ++row)
        for (const auto& [col, p] : r.row(row))
          for (const auto& [k, c] : p.terms()) {
            auto key = std::make_tuple(j, row, static_cast<std::size_t>(col), k);
            auto it = eq_index.emplace(key, static_cast<std::uint32_t>(eq_index.size())).first;
            trip.push_back({it->second, u, c});
          }
    }
  }
  const SparseMatrix<RationalField> sys(RationalField{}, eq_index.size(), unk.size(), std::move(trip));
  const SparseMatrix<RationalField> ker = kernel_basis(sys);
  std::vector<PolyMatrix> out(ker.cols(), PolyMatrix(n, tgt.rank(), src.rank()));
  for (const auto& t : ker.triplets()) {
    const Unknown& u = unk[t.row];
    out[t.col].add_to(u.a, u.b, PolyR::monomial(n, u.k, t.value));
  }
  return out;
}

HeckeElt character(const BSBimodule& m) {
  HeckeElt x = HeckeElt::one(m.n()).scaled(LaurentRat::v(m.shift()));
  for (int i : m.word()) x = x * (HeckeElt::generator(i, m.n()) + HeckeElt::one(m.n()).scaled(LaurentRat::v(1)));
  return x;
}

namespace {

bool invertible(const PolyMatrix& m) {
  if (m.rows() != m.cols()) return false;
  try {
    invert_unipotent_like(m);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// some element of span(cands) that is invertible after applying f, or nothing
bool find_invertible(const std::vector<PolyMatrix>& cands, const std::function<PolyMatrix(const PolyMatrix&)>& f) {
  std::vector<PolyMatrix> imgs;
  for (const auto& c : cands) {
    imgs.push_back(f(c));
    if (invertible(imgs.back())) return true;
  }
  if (imgs.size() < 2) return false;
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 8; ++trial) {
    PolyMatrix acc = imgs[0].scaled(mpq_class(static_cast<long>(rng() % 17) - 8));
    for (std::size_t k = 1; k < imgs.size(); ++k) acc = acc + imgs[k].scaled(mpq_class(static_cast<long>(rng() % 17) - 8));
    if (invertible(acc)) return true;
  }
  return false;
}

}  // namespace

std::map<int, std::vector<std::string>> karoubi_summands(const SBComplex& c) {
  c.check_d_squared();
  std::map<int, std::vector<HeckeElt>> ch;
  std::map<int, std::vector<char>> used, tainted;
  for (const auto& [t, v] : c.terms) {
    for (const auto& m : v) ch[t].push_back(character(m));
    used[t].assign(v.size(), 0);
    tainted[t].assign(v.size(), 0);
  }
  for (const auto& [t, blocks] : c.d) {
    if (!c.terms.count(t + 1)) continue;
    for (const auto& [key, delta] : blocks) {
      const auto [ti, si] = key;
      if (used[t][si] || used[t + 1][ti] || (tainted[t][si] && tainted[t + 1][ti]) || delta.is_zero()) continue;
      const BSBimodule& S = c.terms.at(t)[si];
      const BSBimodule& T = c.terms.at(t + 1)[ti];
      const auto homs = hom_degree0(T, S);
      if (homs.empty()) continue;
      int direction = 0;
      if (T.rank() <= S.rank() && find_invertible(homs, [&](const PolyMatrix& phi) { return delta * phi; }))
        direction = 1;  // T splits off S
      else if (S.rank() <= T.rank() && find_invertible(homs, [&](const PolyMatrix& rho) { return rho * delta; }))
        direction = -1;  // S splits off T
      if (direction == 0) continue;
      if (direction > 0) {
        ch[t][si] = ch[t][si] - ch[t + 1][ti];
        used[t][si] = 2;
        used[t + 1][ti] = 1;
      } else {
        ch[t + 1][ti] = ch[t + 1][ti] - ch[t][si];
        used[t][si] = 1;
        used[t + 1][ti] = 2;
      }
      // components into T from C^t and out of S into C^{t+1} get zig-zag corrections
      for (const auto& [k2, m2] : blocks) {
        if (m2.is_zero()) continue;
        if (k2.first == ti) tainted[t][k2.second] = 1;
        if (k2.second == si) tainted[t + 1][k2.first] = 1;
      }
    }
  }
  std::map<int, std::vector<std::string>> out;
  for (const auto& [t, v] : ch)
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (used[t][k] == 1) continue;
      for (const auto& [w, poly] : kl_decompose(v[k]))
        for (const auto& [e, mult] : poly) {
          if (mult < 0 || mult.get_den() != 1) throw Error("negative or fractional multiplicity in a summand");
          const std::string label = "B" + w.to_string() + (e ? "(" + std::to_string(e) + ")" : "");
          for (long i = 0; i < mult.get_num().get_si(); ++i) out[t].push_back(label);
        }
    }
  for (auto& [t, v] : out) std::sort(v.begin(), v.end());
  for (auto it = out.begin(); it != out.end();) it = it->second.empty() ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace soergel
