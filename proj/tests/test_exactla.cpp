#include "doctest.h"

#include <random>

#include "soergel/errors.hpp"
#include "soergel/exactla.hpp"

using namespace soergel;

namespace {

SparseMatrix<RationalField> qmat(std::size_t r, std::size_t c, const std::vector<std::vector<long>>& rows) {
  std::vector<Triplet<RationalField>> t;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      if (rows[i][j] != 0) t.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), mpq_class(rows[i][j])});
  return SparseMatrix<RationalField>(RationalField{}, r, c, std::move(t));
}

// dense fraction-free rank, used as an independent oracle
std::size_t dense_rank(std::vector<std::vector<mpq_class>> a) {
  std::size_t r = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const mpq_class f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

TEST_CASE("rank of small matrices") {
  CHECK(rank(SparseMatrix<RationalField>(RationalField{}, 3, 3)) == 0);
  CHECK(rank(SparseMatrix<RationalField>::identity(RationalField{}, 4)) == 4);
  CHECK(rank(qmat(2, 2, {{1, 2}, {2, 4}})) == 1);
  CHECK(rank(SparseMatrix<RationalField>(RationalField{}, 0, 5)) == 0);
}

TEST_CASE("sparse construction sums duplicates and drops zeros") {
  std::vector<Triplet<RationalField>> t = {{0, 0, mpq_class(1)}, {0, 0, mpq_class(-1)}, {1, 1, mpq_class(2)}};
  SparseMatrix<RationalField> m(RationalField{}, 2, 2, t);
  CHECK(m.nnz() == 1);
  CHECK(m.at(1, 1) == 2);
  CHECK_THROWS_AS(SparseMatrix<RationalField>(RationalField{}, 1, 1, {{2, 0, mpq_class(1)}}), ShapeMismatch);
}

TEST_CASE("kernel basis") {
  auto k = kernel_basis(SparseMatrix<RationalField>::identity(RationalField{}, 3));
  CHECK(k.cols() == 0);
  k = kernel_basis(SparseMatrix<RationalField>(RationalField{}, 1, 2));
  CHECK(k.cols() == 2);
  k = kernel_basis(qmat(1, 2, {{1, 1}}));
  REQUIRE(k.cols() == 1);
  CHECK(k.at(0, 0) == -k.at(1, 0));
  CHECK(k.at(0, 0) != 0);
}

TEST_CASE("homology of finite complexes") {
  FiniteComplex<RationalField> c;
  c.min_degree = 0;
  c.dims = {1};
  CHECK(homology_dims(c) == std::map<int, std::size_t>{{0, 1}});

  FiniteComplex<RationalField> iso;
  iso.min_degree = 0;
  iso.dims = {1, 1};
  iso.diffs = {qmat(1, 1, {{1}})};
  CHECK(homology_dims(iso) == std::map<int, std::size_t>{{0, 0}, {1, 0}});

  // one-variable Koszul complex k[x]_2 -> k[x]_4 (theta of degree -2) sliced at degree 2
  FiniteComplex<RationalField> kz;
  kz.min_degree = 0;
  kz.dims = {1, 1};
  kz.diffs = {qmat(1, 1, {{0}})};
  CHECK(homology_dims(kz) == std::map<int, std::size_t>{{0, 1}, {1, 1}});

  FiniteComplex<RationalField> bad;
  bad.dims = {1, 1, 1};
  bad.diffs = {qmat(1, 1, {{1}}), qmat(1, 1, {{1}})};
  CHECK_THROWS_AS(homology_dims(bad), ChainConditionViolated);
}

TEST_CASE("prime field arithmetic") {
  const PrimeField f(kDefaultPrime);
  CHECK(kDefaultPrime == (1ULL << 62) - 57);
  CHECK(is_prime_u64(kDefaultPrime));
  CHECK_FALSE(is_prime_u64(91));
  for (long x : {1L, 2L, 12345L, -7L}) {
    const auto e = f.from_int(x);
    CHECK(f.mul(e, f.inv(e)) == 1);
  }
  CHECK(f.from_rational(mpq_class(1, 3)) == f.inv(3));
  CHECK(f.add(f.from_int(-1), 1) == 0);
}

TEST_CASE("property: sparse rank agrees with a dense oracle and with the prime field") {
  std::mt19937 rng(7);
  const PrimeField fp(kDefaultPrime);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t r = 1 + rng() % 9, c = 1 + rng() % 9;
    std::vector<std::vector<long>> rows(r, std::vector<long>(c, 0));
    std::vector<std::vector<mpq_class>> dense(r, std::vector<mpq_class>(c, 0));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (rng() % 3 == 0) {
          rows[i][j] = static_cast<long>(rng() % 7) - 3;
          dense[i][j] = rows[i][j];
        }
    // force some dependent rows
    if (r > 2) {
      for (std::size_t j = 0; j < c; ++j) {
        rows[r - 1][j] = rows[0][j] * 2 - rows[1][j];
        dense[r - 1][j] = rows[r - 1][j];
      }
    }
    const auto m = qmat(r, c, rows);
    const std::size_t rk = rank(m);
    CHECK(rk == dense_rank(dense));
    const auto chk = rank_cross_check(m, fp);
    CHECK_FALSE(chk.bad_prime());
    CHECK(chk.rank_q == rk);
    const auto k = kernel_basis(m);
    CHECK(k.cols() == c - rk);
    CHECK(multiply(m, k).is_zero());
    CHECK(rank(k) == k.cols());
  }
}
