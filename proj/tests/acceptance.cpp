// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "soergel/hecke.hpp"
#include "soergel/invariants.hpp"
#include "soergel/rouquier.hpp"

using namespace soergel;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
  void expect(const CheckReport& r, const std::string& what) {
    if (r.pass()) return;
    std::string detail;
    for (const auto& c : r.comparisons)
      if (!c.pass) detail += " [" + c.label + ": " + c.detail + "]";
    expect(false, what + detail);
  }
};

SliceRequest at(int cutoff) {
  SliceRequest r;
  r.cutoff = cutoff;
  return r;
}

std::vector<std::vector<int>> bs_words(int n, int len) {
  std::vector<std::vector<int>> out = {{}}, layer = {{}};
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

std::string word_label(const BraidWord& b) {
  std::string s = "n=" + std::to_string(b.n) + " [";
  for (std::size_t k = 0; k < b.letters.size(); ++k) s += (k ? " " : "") + std::to_string(b.letters[k]);
  return s + "]";
}

BraidWord braid(int n, std::vector<int> letters) { return BraidWord{n, std::move(letters)}; }

// every braid used anywhere in the suite
std::vector<BraidWord> acceptance_braids() {
  return {braid(1, {}),          braid(2, {}),       braid(2, {1}),     braid(2, {-1}),
          braid(2, {1, 1, 1}),   full_twist(2),      braid(3, {}),      braid(3, {1}),
          braid(3, {2}),         braid(3, {1, 2}),   braid(3, {1, 2, 1}), braid(3, {2, 1, 2}),
          braid(3, {1, 2, -1}),  braid(3, {-2, 1, 2}), full_twist(3)};
}

APoly tr1_power(int n) {
  const LaurentRat c = LaurentRat(1) / (LaurentRat(1) - LaurentRat::q());
  APoly base{{0, c}, {1, c}}, out{{0, LaurentRat(1)}};
  for (int i = 0; i < n; ++i) out = apoly_mul(out, base);
  return out;
}

Outcome hecke_exactness() {
  Outcome o;
  const int n = 3;
  const LaurentRat c = LaurentRat::v(-1) - LaurentRat::v(1);
  for (int i = 1; i < n; ++i) {
    const HeckeElt h = HeckeElt::generator(i, n);
    o.expect(h * h == HeckeElt::one(n) + h.scaled(c), "quadratic relation");
    o.expect(h * HeckeElt::generator_inverse(i, n) == HeckeElt::one(n), "inverse generator");
  }
  const HeckeElt h1 = HeckeElt::generator(1, n), h2 = HeckeElt::generator(2, n);
  o.expect(h1 * h2 * h1 == h2 * h1 * h2, "braid relation");
  const auto nb = negative_basis_matrix(n);
  for (const Perm& w : all_perms(n))
    for (const Perm& v : all_perms(n))
      o.expect(pairing(HeckeElt::basis(w), nb.at(v)) == LaurentRat(w == v ? 1 : 0), "dual basis pairing");
  return o;
}

Outcome kalman_decat() {
  Outcome o;
  o.expect(check_kalman_decat(3, 20, 1), "Tr^n(x FT) = Tr^0(x)");
  return o;
}

Outcome trace_of_one() {
  Outcome o;
  for (int n = 1; n <= 4; ++n) o.expect(apoly_equal(jones_ocneanu_trace(HeckeElt::one(n)), tr1_power(n)), "Tr(1), n=" + std::to_string(n));
  return o;
}

Outcome trefoil() {
  Outcome o;
  const std::string golden = "[(v + v^5)/(1 - v^2)] + [(v + v^3 + v^5)/(1 - v^2)]*a + [(v^3)/(1 - v^2)]*a^2";
  const std::string got = apoly_to_string(homfly(braid(2, {1, 1, 1})));
  o.expect(got == golden, "trefoil trace " + got);
  return o;
}

Outcome complexes() {
  Outcome o;
  auto d2 = [&](const SBComplex& c, const std::string& what) {
    try {
      c.check_d_squared();
    } catch (const std::exception& e) {
      o.expect(false, what + ": " + e.what());
    }
  };
  for (const BraidWord& b : acceptance_braids()) {
    d2(braid_to_complex(b), "F " + word_label(b));
    d2(braid_to_complex_reduced(b), "reduced F " + word_label(b));
  }
  for (int n = 2; n <= 3; ++n)
    for (int i = 1; i < n; ++i) {
      const SBComplex c = gaussian_eliminate(braid_to_complex(braid(n, {i, -i})));
      d2(c, "F_i F_i^-1");
      o.expect(c.summary() == SBComplex::unit(n).summary(), "F_i F_i^-1 ~ R, got " + c.summary());
    }
  const std::vector<std::pair<BraidWord, BraidWord>> relations = {
      {braid(3, {1, 2, 1}), braid(3, {2, 1, 2})},
      {braid(3, {-1, -2, -1}), braid(3, {-2, -1, -2})},
      {braid(3, {1, 2, -1}), braid(3, {-2, 1, 2})},
  };
  for (const auto& [x, y] : relations) {
    const SBComplex cx = braid_to_complex_reduced(x), cy = braid_to_complex_reduced(y);
    d2(cx, word_label(x));
    d2(cy, word_label(y));
    o.expect(karoubi_summands(cx) == karoubi_summands(cy), "braid relation " + word_label(x) + " vs " + word_label(y));
  }
  return o;
}

Outcome hh_calibration() {
  Outcome o;
  o.expect(check_hh_calibration(at(14)), "calibration");
  for (int n = 1; n <= 3; ++n)
    for (const auto& w : bs_words(n, 2)) o.expect(check_hh_lower_upper(BSBimodule(n, w), at(12)), "HH_k = HH^{n-k}(-2n)");
  return o;
}

Outcome markov() {
  Outcome o;
  for (const BraidWord& b : {braid(1, {}), braid(2, {}), braid(2, {1})}) o.expect(check_markov(b, at(16)), "Markov " + word_label(b));
  return o;
}

Outcome euler() {
  Outcome o;
  for (const BraidWord& b : {braid(1, {}), braid(2, {1}), braid(2, {1, 1, 1}), full_twist(2), braid(3, {1, 2}), full_twist(3)})
    o.expect(check_euler(b, at(16)), "Euler " + word_label(b));
  return o;
}

Outcome vanishing() {
  Outcome o;
  o.expect(check_vanishing(3, at(14)), "vanishing");
  return o;
}

Outcome serre() {
  Outcome o;
  for (const BraidWord& b : {braid(2, {}), braid(2, {1}), braid(2, {-1}), braid(3, {}), braid(3, {1, 2})})
    o.expect(check_serre(b, at(14)), "Serre " + word_label(b));
  return o;
}

Outcome kalman_cat() {
  Outcome o;
  for (const BraidWord& b : {braid(2, {}), braid(2, {1}), braid(2, {1, 1, 1}), braid(3, {})})
    o.expect(check_kalman_cat(b, at(14)), "Kalman " + word_label(b));
  return o;
}

Outcome relative_serre() {
  Outcome o;
  const std::vector<std::pair<std::string, SBComplex>> xs = {
      {"[R] n=2", SBComplex::unit(2)},
      {"F_1", braid_to_complex_reduced(braid(2, {1}))},
      {"F_1^-1", braid_to_complex_reduced(braid(2, {-1}))},
      {"[R] n=3", SBComplex::unit(3)},
      {"F(s_2)", braid_to_complex_reduced(braid(3, {2}))},
  };
  for (const auto& [label, x] : xs) o.expect(check_relative_serre(x, label, at(14)), "relative Serre " + label);
  return o;
}

Outcome appendix() {
  Outcome o;
  o.expect(check_lw(3, at(14)), "LW");
  o.expect(check_bruhat(3, at(14)), "Bruhat");
  o.expect(check_cone_psi(2, at(14)), "cone psi n=2");
  o.expect(check_cone_psi(3, at(14)), "cone psi n=3");
  return o;
}

Outcome hh_duality() {
  Outcome o;
  for (int n = 1; n <= 3; ++n)
    for (const auto& w : bs_words(n, 2)) o.expect(check_hh_duality(BSBimodule(n, w), at(12)), "HH duality");
  o.expect(check_hh_duality_complex(braid(2, {1}), at(12)), "F(s_1) vs F(s_1^-1)");
  return o;
}

Outcome homotopy_invariance() {
  Outcome o;
  for (const BraidWord& b : acceptance_braids()) o.expect(check_homotopy_invariance(b, at(14)), "elimination " + word_label(b));
  return o;
}

struct Criterion {
  const char* name;
  double limit_s;  // 0 for no limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"Hecke exactness", 5, hecke_exactness},
      {"decategorified Kalman identity", 30, kalman_decat},
      {"trace of the identity", 0, trace_of_one},
      {"trefoil HOMFLY golden value", 0, trefoil},
      {"d^2 = 0, F_i F_i^-1 ~ R, braid relations", 60, complexes},
      {"HH calibration and HH_k = HH^{n-k}(-2n)", 0, hh_calibration},
      {"Markov moves", 0, markov},
      {"Euler characteristic", 600, euler},
      {"vanishing", 0, vanishing},
      {"Serre duality", 900, serre},
      {"categorified Kalman", 0, kalman_cat},
      {"relative Serre", 0, relative_serre},
      {"LW vanishing, Bruhat triangularity, cone of psi", 0, appendix},
      {"duality of HH", 0, hh_duality},
      {"homotopy invariance of elimination", 0, homotopy_invariance},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto& c = criteria[k];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && s > c.limit_s) o.expect(false, "over time limit of " + std::to_string(int(c.limit_s)) + " s");
    std::printf("%s %zu. %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", k + 1, c.name, s);
    for (const auto& note : o.notes) std::printf("    %s\n", note.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
