#include "soergel/exactla.hpp"

namespace soergel {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // this witness set is deterministic for all 64-bit n
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t prime) : p(prime) {
  if (prime >= (1ULL << 63) || !is_prime_u64(prime)) throw Error("field modulus must be a prime below 2^63");
}

PrimeField::Elem PrimeField::inv(Elem a) const {
  if (a == 0) throw Error("division by zero in prime field");
  return powmod(a, p - 2, p);
}

PrimeField::Elem PrimeField::from_rational(const mpq_class& q) const {
  const unsigned long pm = static_cast<unsigned long>(p);
  mpz_class num = q.get_num();
  Elem n = static_cast<Elem>(mpz_fdiv_ui(num.get_mpz_t(), pm));
  Elem d = static_cast<Elem>(mpz_fdiv_ui(q.get_den_mpz_t(), pm));
  if (d == 0) throw Error("denominator vanishes modulo the chosen prime");
  return mul(n, inv(d));
}

SparseMatrix<PrimeField> reduce_mod_p(const SparseMatrix<RationalField>& m, const PrimeField& fp) {
  std::vector<Triplet<PrimeField>> t;
  t.reserve(m.nnz());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto& [c, v] : m.row(r)) t.push_back({static_cast<std::uint32_t>(r), c, fp.from_rational(v)});
  return SparseMatrix<PrimeField>(fp, m.rows(), m.cols(), std::move(t));
}

RankCheck rank_cross_check(const SparseMatrix<RationalField>& m, const PrimeField& fp) {
  RankCheck rc;
  rc.rank_q = rank(m);
  rc.rank_p = rank(reduce_mod_p(m, fp));
  return rc;
}

}  // namespace soergel
