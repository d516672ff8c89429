#include "doctest.h"

#include "soergel/bimod.hpp"
#include "soergel/errors.hpp"

using namespace soergel;

namespace {

PolyR x(int j, int n = 2) { return PolyR::var(n, j); }

std::vector<std::vector<int>> words_up_to(int n, int len) {
  std::vector<std::vector<int>> out = {{}};
  std::vector<std::vector<int>> layer = {{}};
  for (int l = 1; l <= len; ++l) {
    std::vector<std::vector<int>> next;
    for (const auto& w : layer)
      for (int i = 1; i < n; ++i) {
        auto v = w;
        v.push_back(i);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = next;
  }
  return out;
}

BimMap copairing(int i, int n) {
  const auto f = frobenius_maps(i, n);
  return compose(f.comult, f.unit);
}

BimMap pairing_map(int i, int n) {
  const auto f = frobenius_maps(i, n);
  return compose(f.counit, f.mult);
}

}  // namespace

TEST_CASE("elementary bimodule at n = 2") {
  const BSBimodule b = elementary(1, 2);
  CHECK(b.rank() == 2);
  CHECK(b.basis_degrees() == std::vector<int>{-1, 1});
  PolyMatrix x2(2, 2, 2);
  x2.set(0, 1, -(x(1) * x(2)));
  x2.set(1, 0, PolyR::constant(2, 1));
  x2.set(1, 1, x(1) + x(2));
  CHECK(b.right_action(2) == x2);
  CHECK(b.right_action(1) + b.right_action(2) == PolyMatrix::scalar(2, x(1) + x(2)));
  CHECK(b.right_action(1) * b.right_action(2) == PolyMatrix::scalar(2, x(1) * x(2)));
  CHECK_THROWS_AS(elementary(2, 2), IndexOutOfRange);
  CHECK_THROWS_AS(elementary(0, 3), IndexOutOfRange);
}

TEST_CASE("tensor products") {
  const BSBimodule b = elementary(1, 2);
  CHECK(tensor(unit_bimodule(2), b) == b);
  CHECK(tensor(b, unit_bimodule(2)) == b);
  const BSBimodule bb = tensor(b, b);
  CHECK(bb.rank() == 4);
  CHECK(bb.basis_degrees() == std::vector<int>{-2, 0, 0, 2});
  CHECK(tensor(unit_bimodule(2, 1), unit_bimodule(2, 2)).shift() == 3);
  CHECK_THROWS_AS(tensor(b, elementary(1, 3)), StrandMismatch);
}

TEST_CASE("property: every Bott-Samelson word up to length 3 satisfies the bimodule invariants") {
  for (int n : {2, 3})
    for (const auto& w : words_up_to(n, 3)) {
      const BSBimodule m(n, w);
      CHECK_NOTHROW(validate_bimodule(m));
      for (int j = 1; j <= n; ++j)
        for (int l = 1; l <= n; ++l) CHECK(m.right_action(j) * m.right_action(l) == m.right_action(l) * m.right_action(j));
    }
}

TEST_CASE("property: tensor is associative on words") {
  for (const auto& a : words_up_to(3, 1))
    for (const auto& b : words_up_to(3, 1))
      for (const auto& c : words_up_to(3, 1)) {
        const BSBimodule A(3, a), B(3, b), C(3, c);
        const BSBimodule l = tensor(tensor(A, B), C), r = tensor(A, tensor(B, C));
        CHECK(l == r);
        for (int j = 1; j <= 3; ++j) CHECK(l.right_action(j) == r.right_action(j));
      }
}

TEST_CASE("counit and unit") {
  const BimMap b = counit(1, 2);
  CHECK(b.is_valid());
  CHECK(b.mat.at(0, 0) == PolyR::constant(2, 1));
  CHECK(b.mat.at(0, 1) == x(2));
  const BimMap bs = unit(1, 2);
  CHECK(bs.is_valid());
  CHECK(bs.degree == 0);
  // the image z of 1 is x_1 (x) 1 - 1 (x) x_2; it is central
  PolyMatrix z(2, 2, 1);
  for (std::size_t a = 0; a < 2; ++a) z.set(a, 0, bs.mat.at(a, 0));
  for (int j = 1; j <= 2; ++j) CHECK(elementary(1, 2).right_action(j) * z == z.scaled(x(j)));
  // b* o b is the degree 2 endomorphism of B_1 given by a central element
  const BimMap bs2{bs.src.shifted(2), bs.tgt.shifted(2), bs.degree, bs.mat};
  const BimMap e = compose(bs2, b);
  CHECK(e.src == elementary(1, 2));
  CHECK(e.tgt == elementary(1, 2).shifted(2));
  CHECK(e.is_valid());
  // b* o b = z b, so (b* o b)^2 = (x_1 - x_2) (b* o b)
  CHECK((e.mat * e.mat) == e.mat.scaled(x(1) - x(2)));
  // b o b* : R(-1) -> R(1) is multiplication by x_1 - x_2
  const BimMap f = compose(b, bs);
  CHECK(f.mat.at(0, 0) == x(1) - x(2));
}

TEST_CASE("Frobenius structure") {
  for (int n : {2, 3})
    for (int i = 1; i < n; ++i) {
      const auto f = frobenius_maps(i, n);
      CHECK(f.mult.is_valid());
      CHECK(f.counit.is_valid());
      CHECK(f.unit.is_valid());
      CHECK(f.comult.is_valid());
      CHECK(split_maps(i, n).mu.mat.at(0, 0) == PolyR::constant(n, 1));
      const BSBimodule b = elementary(i, n);
      const BimMap id = identity_map(b);
      // zig-zag: B -> B B B -> B
      const BimMap left = compose(tensor_maps(pairing_map(i, n), id), tensor_maps(id, copairing(i, n)));
      const BimMap right = compose(tensor_maps(id, pairing_map(i, n)), tensor_maps(copairing(i, n), id));
      CHECK(left.mat == id.mat);
      CHECK(right.mat == id.mat);
    }
}

TEST_CASE("splitting B_i B_i") {
  for (int n : {2, 3}) {
    const auto s = split_maps(1, n);
    const BSBimodule b = elementary(1, n);
    CHECK(compose(s.mu, s.delta).mat == identity_map(b.shifted(1)).mat);
    CHECK(compose(s.m, s.iota).mat == identity_map(b.shifted(-1)).mat);
    CHECK(compose(s.mu, s.iota).mat.is_zero());
    CHECK(compose(s.m, s.delta).mat.is_zero());
    CHECK(add(compose(s.delta, s.mu), compose(s.iota, s.m)).mat == identity_map(tensor(b, b)).mat);
  }
}

TEST_CASE("duals") {
  CHECK(dual(unit_bimodule(3)) == unit_bimodule(3));
  const BSBimodule m = BSBimodule(3, {1, 2}, 2);
  CHECK(dual(m) == BSBimodule(3, {2, 1}, -2));
  CHECK(dual(dual(m)) == m);
  const BimMap dc = dual_map(counit(1, 3));
  CHECK(dc.is_valid());
  CHECK((dc.mat == unit(1, 3).mat || dc.mat == unit(1, 3).mat.scaled(mpq_class(-1))));
  for (const auto& w : words_up_to(3, 2)) {
    const BSBimodule a(3, w);
    CHECK(evaluation(a).is_valid());
    CHECK(coevaluation(a).is_valid());
    const BimMap f = identity_map(a);
    CHECK(dual_map(dual_map(f)).mat == f.mat);
  }
  const BimMap g = tensor_maps(counit(1, 3), identity_map(elementary(2, 3)));
  CHECK(dual_map(dual_map(g)).mat == g.mat);
}

TEST_CASE("map algebra") {
  const BimMap b = counit(1, 2);
  CHECK(compose(b, identity_map(b.src)).mat == b.mat);
  CHECK(compose(identity_map(b.tgt), b).mat == b.mat);
  CHECK(scale(b, 2).mat == b.mat.scaled(mpq_class(2)));
  CHECK_THROWS(compose(b, b));
  const BimMap t = tensor_maps(identity_map(elementary(1, 2)), b);
  CHECK(t.is_valid());
  CHECK(t.src.rank() == 4);
  CHECK(t.tgt.rank() == 2);
}

TEST_CASE("bar construction") {
  CHECK(bar(unit_bimodule(2), 10) == std::map<int, std::size_t>{{0, 1}});
  CHECK(bar(elementary(1, 2), 10) == std::map<int, std::size_t>{{-1, 1}, {1, 1}});
  CHECK(bar(BSBimodule(2, {1, 1}), 10) == std::map<int, std::size_t>{{-2, 1}, {0, 2}, {2, 1}});
  CHECK(bar(BSBimodule(3, {1, 2, 1}), 12) == std::map<int, std::size_t>{{-3, 1}, {-1, 3}, {1, 3}, {3, 1}});
  for (const auto& w : words_up_to(2, 3)) {
    const auto small = bar(BSBimodule(2, w), 12);
    const auto big = bar(BSBimodule(2, w), 20);
    CHECK(small == big);
    std::size_t total = 0;
    for (const auto& [d, v] : small) total += v;
    CHECK(total == (std::size_t{1} << w.size()));
  }
}
