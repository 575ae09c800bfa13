#include "maval/module_division.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "maval/linalg.hpp"
#include "maval/minor_spaces.hpp"
#include "test_util.hpp"

using maval::GaussianRational;
using maval::GroebnerModuleBasis;
using maval::Monomial;
using maval::Polynomial;
using maval::Rational;
using maval::VariableRegistry;

namespace {

// Random polynomial supported on the last column of a Mat(n, k+1) registry.
Polynomial random_last_column_poly(testutil::Rng& rng, const VariableRegistry::Ptr& reg, int k,
                                   uint32_t max_exp = 2, size_t max_terms = 3) {
  const std::vector<uint32_t> vars = reg->column(k + 1);
  Polynomial p(reg);
  const size_t terms = static_cast<size_t>(rng.integer(1, static_cast<int64_t>(max_terms)));
  for (size_t t = 0; t < terms; ++t) {
    std::vector<Monomial::Entry> entries;
    for (uint32_t idx : vars) {
      const uint32_t e = static_cast<uint32_t>(rng.integer(0, max_exp));
      if (e > 0) entries.emplace_back(idx, e);
    }
    p.add_term(Monomial::from_entries(std::move(entries)), rng.gaussian());
  }
  return p;
}

std::vector<Polynomial> embedded_generators(const maval::MinorBasis& mb,
                                            const VariableRegistry::Ptr& reg) {
  std::vector<Polynomial> out;
  for (const auto& g : mb.generators) out.push_back(maval::embed_by_name(g, reg));
  return out;
}

}  // namespace

TEST_CASE("build_groebner: principal module for the squared 2x2 determinant") {
  auto reg = VariableRegistry::matrix(2, 3);
  const Polynomial det = maval::k_minors(reg, 2, 2).at(0);
  const Polynomial det2 = det.pow(2);
  GroebnerModuleBasis gb = maval::build_groebner({det2}, 2, 2, reg);
  REQUIRE(gb.generators.size() == 1);
  CHECK(gb.generators[0] == det2);
  CHECK(gb.homogeneous);
  CHECK(gb.minimal);
  CHECK(!gb.order.empty());
}

TEST_CASE("build_groebner: quadratic monomial generators keep their initial terms") {
  auto reg = VariableRegistry::matrix(2, 2);
  const Polynomial a = Polynomial::parse(reg, "w_1_1^2");
  const Polynomial b = Polynomial::parse(reg, "w_1_1*w_2_1");
  const Polynomial c = Polynomial::parse(reg, "w_2_1^2");
  GroebnerModuleBasis gb = maval::build_groebner({a, b, c}, 2, 1, reg);
  REQUIRE(gb.generators.size() == 3);
  CHECK(gb.generators[0] == a);
  CHECK(gb.generators[1] == b);
  CHECK(gb.generators[2] == c);

  // Buchberger at module level: initial monomials are pairwise distinct and a
  // module multiple never changes the first-column part, so no pair admits a
  // common initial multiple; every S-pair is vacuous.
  for (size_t i = 0; i < gb.generators.size(); ++i)
    for (size_t j = i + 1; j < gb.generators.size(); ++j) {
      const Monomial li = gb.generators[i].leading_term().first;
      const Monomial lj = gb.generators[j].leading_term().first;
      CHECK(li != lj);
      // A common module multiple of li and lj would force li == lj because
      // both are supported on the first k columns.
      auto q = li.divided_by(lj);
      if (q.has_value()) CHECK(q->degree() > 0);
    }

  // Span equality with the inputs, both directions, exactly.
  maval::SpanBuilder orig(reg);
  orig.insert(a);
  orig.insert(b);
  orig.insert(c);
  for (const auto& g : gb.generators) CHECK(orig.contains(g));
  maval::SpanBuilder out(reg);
  for (const auto& g : gb.generators) out.insert(g);
  CHECK(out.contains(a));
  CHECK(out.contains(b));
  CHECK(out.contains(c));
}

TEST_CASE("build_groebner: scalar-redundant generator collapses") {
  auto reg = VariableRegistry::matrix(2, 2);
  const Polynomial a = Polynomial::parse(reg, "w_1_1^2");
  const Polynomial twice = a * GaussianRational(2);
  GroebnerModuleBasis gb = maval::build_groebner({a, twice}, 2, 1, reg);
  REQUIRE(gb.generators.size() == 1);
  CHECK(gb.generators[0] == a);
}

TEST_CASE("build_groebner: basis is canonical under generator reordering") {
  auto reg = VariableRegistry::matrix(3, 3);
  const auto mb = maval::squared_minor_basis(3, 2);
  std::vector<Polynomial> gens = embedded_generators(mb, reg);
  GroebnerModuleBasis forward = maval::build_groebner(gens, 3, 2, reg);
  std::vector<Polynomial> reversed(gens.rbegin(), gens.rend());
  GroebnerModuleBasis backward = maval::build_groebner(reversed, 3, 2, reg);
  REQUIRE(forward.generators.size() == backward.generators.size());
  for (size_t i = 0; i < forward.generators.size(); ++i)
    CHECK(forward.generators[i].to_string() == backward.generators[i].to_string());

  // Reducedness: no element contains another element's initial monomial.
  for (size_t i = 0; i < forward.generators.size(); ++i)
    for (size_t j = 0; j < forward.generators.size(); ++j) {
      if (i == j) continue;
      const Monomial lead = forward.generators[j].leading_term().first;
      CHECK(forward.generators[i].coefficient(lead).is_zero());
    }
}

TEST_CASE("build_groebner: rejects bad generators") {
  auto reg = VariableRegistry::matrix(2, 2);
  const Polynomial nonhom = Polynomial::parse(reg, "w_1_1^2 + w_1_1");
  CHECK_THROWS_WITH_AS(maval::build_groebner({nonhom}, 2, 1, reg),
                       doctest::Contains("non-homogeneous"), maval::error);
  const Polynomial lastcol = Polynomial::parse(reg, "w_1_2^2");
  CHECK_THROWS_AS(maval::build_groebner({lastcol}, 2, 1, reg), maval::error);
  try {
    maval::build_groebner({lastcol}, 2, 1, reg);
  } catch (const maval::error& e) {
    CHECK(e.kind() == maval::errc::domain);
  }
}

TEST_CASE("divide: quotients read off for monomial basis (n=2, k=1)") {
  auto reg = VariableRegistry::matrix(2, 2);
  GroebnerModuleBasis gb = maval::build_groebner(
      {Polynomial::parse(reg, "w_1_1^2"), Polynomial::parse(reg, "w_1_1*w_2_1"),
       Polynomial::parse(reg, "w_2_1^2")},
      2, 1, reg);
  const Polynomial F = Polynomial::parse(reg, "w_1_2*w_1_1^2 + w_1_1*w_2_1");
  maval::ModuleDivision div = maval::divide(F, gb);
  CHECK(div.remainder.is_zero());
  REQUIRE(div.quotients.size() == 3);
  CHECK(div.quotients[0] == Polynomial::parse(reg, "w_1_2"));
  CHECK(div.quotients[1] == Polynomial::parse(reg, "1"));
  CHECK(div.quotients[2].is_zero());
}

TEST_CASE("divide: low-degree input passes through as remainder") {
  auto reg = VariableRegistry::matrix(2, 2);
  GroebnerModuleBasis gb = maval::build_groebner(
      {Polynomial::parse(reg, "w_1_1^2"), Polynomial::parse(reg, "w_1_1*w_2_1"),
       Polynomial::parse(reg, "w_2_1^2")},
      2, 1, reg);
  const Polynomial F = Polynomial::parse(reg, "w_1_1");
  maval::ModuleDivision div = maval::divide(F, gb);
  CHECK(div.remainder == F);
  for (const auto& q : div.quotients) CHECK(q.is_zero());
}

TEST_CASE("divide: round-trip oracle with random last-column coefficients") {
  testutil::Rng rng(2026);
  struct Setup {
    int n, k;
    VariableRegistry::Ptr reg;
    std::vector<Polynomial> gens;
  };
  std::vector<Setup> setups;
  {
    auto reg = VariableRegistry::matrix(2, 2);
    setups.push_back({2, 1, reg, embedded_generators(maval::squared_minor_basis(2, 1), reg)});
  }
  {
    auto reg = VariableRegistry::matrix(3, 3);
    setups.push_back({3, 2, reg, embedded_generators(maval::squared_minor_basis(3, 2), reg)});
  }
  for (const auto& s : setups) {
    GroebnerModuleBasis gb = maval::build_groebner(s.gens, s.n, s.k, s.reg);
    for (int iter = 0; iter < 12; ++iter) {
      Polynomial F(s.reg);
      for (const auto& g : s.gens) {
        if (rng.integer(0, 2) == 0) continue;
        F += random_last_column_poly(rng, s.reg, s.k) * g;
      }
      maval::ModuleDivision div = maval::divide(F, gb);
      CHECK(div.remainder.is_zero());
      Polynomial back(s.reg);
      for (size_t j = 0; j < gb.generators.size(); ++j) back += div.quotients[j] * gb.generators[j];
      CHECK(back == F);
      // Degree bookkeeping: every quotient stays within deg F.
      if (!F.is_zero())
        for (const auto& q : div.quotients)
          if (!q.is_zero()) CHECK(q.total_degree() <= F.total_degree());
      // Quotients live in the last column only.
      for (const auto& q : div.quotients) CHECK(q.uses_only_columns(s.k + 1, s.k + 1));
    }
  }
}

TEST_CASE("divide: irreducible junk lands in the remainder unchanged") {
  testutil::Rng rng(7);
  auto reg = VariableRegistry::matrix(2, 2);
  std::vector<Polynomial> gens = embedded_generators(maval::squared_minor_basis(2, 1), reg);
  GroebnerModuleBasis gb = maval::build_groebner(gens, 2, 1, reg);
  const Polynomial junk = Polynomial::parse(reg, "w_1_1*w_2_2^2 + 1");
  for (int iter = 0; iter < 8; ++iter) {
    Polynomial member(reg);
    for (const auto& g : gens) member += random_last_column_poly(rng, reg, 1) * g;
    maval::ModuleDivision div = maval::divide(member + junk, gb);
    CHECK(div.remainder == junk);
  }
}

TEST_CASE("decompose_in_m2k: principal case returns the cofactor") {
  auto reg = VariableRegistry::matrix(2, 3);
  const maval::MinorBasis mb = maval::squared_minor_basis(2, 2);
  const Polynomial det2 = maval::embed_by_name(mb.generators.at(0), reg);
  const Polynomial cof = Polynomial::parse(reg, "1 + w_1_3");
  std::vector<Polynomial> g = maval::decompose_in_m2k(cof * det2, 2, 2, mb);
  REQUIRE(g.size() == 1);
  CHECK(g[0] == cof);
}

TEST_CASE("decompose_in_m2k: coefficients read off in the monomial basis") {
  auto reg = VariableRegistry::matrix(2, 2);
  const maval::MinorBasis mb = maval::squared_minor_basis(2, 1);
  REQUIRE(mb.generators.size() == 3);
  const Polynomial F = Polynomial::parse(reg, "w_2_2^2*w_1_1^2 - w_1_2*w_1_1*w_2_1");
  std::vector<Polynomial> g = maval::decompose_in_m2k(F, 2, 1, mb);
  REQUIRE(g.size() == 3);
  CHECK(g[0] == Polynomial::parse(reg, "w_2_2^2"));
  CHECK(g[1] == Polynomial::parse(reg, "-w_1_2"));
  CHECK(g[2].is_zero());
}

TEST_CASE("decompose_in_m2k: round-trip oracle over the (3,2) minor basis") {
  testutil::Rng rng(11);
  auto reg = VariableRegistry::matrix(3, 3);
  const maval::MinorBasis mb = maval::squared_minor_basis(3, 2);
  const std::vector<Polynomial> gens = embedded_generators(mb, reg);
  for (int iter = 0; iter < 50; ++iter) {
    Polynomial F(reg);
    std::vector<Polynomial> chosen(gens.size(), Polynomial::zero(reg));
    for (size_t j = 0; j < gens.size(); ++j) {
      if (rng.integer(0, 1) == 0) continue;
      chosen[j] = random_last_column_poly(rng, reg, 2, 3);
      F += chosen[j] * gens[j];
    }
    std::vector<Polynomial> g = maval::decompose_in_m2k(F, 3, 2, mb);
    REQUIRE(g.size() == gens.size());
    Polynomial back(reg);
    for (size_t j = 0; j < gens.size(); ++j) back += g[j] * gens[j];
    CHECK(back == F);
  }
}

TEST_CASE("decompose_in_m2k: non-members raise an error carrying the remainder") {
  auto reg = VariableRegistry::matrix(2, 3);
  const maval::MinorBasis mb = maval::squared_minor_basis(2, 2);
  const Polynomial F = Polynomial::parse(reg, "w_1_1^3*w_1_2");
  CHECK_THROWS_AS(maval::decompose_in_m2k(F, 2, 2, mb), maval::NotInModuleError);
  try {
    maval::decompose_in_m2k(F, 2, 2, mb);
  } catch (const maval::NotInModuleError& e) {
    CHECK(e.kind() == maval::errc::domain);
    CHECK(e.remainder == F);  // no initial term matches, so nothing reduces
  }
}

TEST_CASE("membership_by_restriction: hand examples") {
  auto reg = VariableRegistry::matrix(2, 3);
  const Polynomial det2 = maval::k_minors(reg, 2, 2).at(0).pow(2);
  const Polynomial z1 = Polynomial::parse(reg, "w_1_3");
  CHECK(maval::membership_by_restriction(det2 * z1, 2, 2, 3, 42));
  CHECK(maval::membership_by_restriction(Polynomial::zero(reg), 2, 2, 3, 42));

  // Independent oracle for the negative case: restrict w11^3*w12 to the
  // identity frame by hand.  The restriction is z11^3*z12, whose coefficient
  // at the leading monomial z11^2*z22^2 of det(z)^2 vanishes, so the only
  // admissible multiple is zero -- yet the restriction is nonzero.
  auto zreg = VariableRegistry::matrix(2, 2, "z");
  const Polynomial dz2 = maval::k_minors(zreg, 2, 2).at(0).pow(2);
  const Polynomial restricted = Polynomial::parse(zreg, "z_1_1^3*z_1_2");
  CHECK(restricted.coefficient(dz2.leading_term().first).is_zero());
  CHECK(!restricted.is_zero());

  const Polynomial bad = Polynomial::parse(reg, "w_1_1^3*w_1_2");
  CHECK(!maval::membership_by_restriction(bad, 2, 2, 3, 42));
}

TEST_CASE("membership_by_restriction: rejects column-inhomogeneous input") {
  auto reg = VariableRegistry::matrix(2, 2);
  const Polynomial F = Polynomial::parse(reg, "w_1_1^2 + w_1_1");
  CHECK_THROWS_WITH_AS(maval::membership_by_restriction(F, 2, 1, 2, 1),
                       doctest::Contains("column-homogeneous"), maval::error);
}

TEST_CASE("membership_by_restriction agrees with the division remainder") {
  testutil::Rng rng(31337);
  int checked = 0;

  {  // n=2, k=1: members are exactly the column-degree-2 polynomials.
    auto reg = VariableRegistry::matrix(2, 2);
    const std::vector<Polynomial> gens =
        embedded_generators(maval::squared_minor_basis(2, 1), reg);
    GroebnerModuleBasis gb = maval::build_groebner(gens, 2, 1, reg);
    const uint32_t w11 = reg->require("w_1_1");
    const uint32_t w21 = reg->require("w_2_1");
    for (int iter = 0; iter < 25; ++iter) {  // members
      Polynomial F(reg);
      for (const auto& g : gens)
        if (rng.integer(0, 1)) F += random_last_column_poly(rng, reg, 1) * g;
      const bool member = maval::divide(F, gb).remainder.is_zero();
      CHECK(member);
      CHECK(maval::membership_by_restriction(F, 2, 1, 2, 1000 + iter) == member);
      ++checked;
    }
    for (int iter = 0; iter < 25; ++iter) {  // odd column degree: never members
      Polynomial F(reg);
      for (uint32_t a = 0; a <= 3; ++a) {
        if (rng.integer(0, 1) == 0) continue;
        std::vector<Monomial::Entry> e;
        if (a > 0) e.emplace_back(w11, a);
        if (3 - a > 0) e.emplace_back(w21, 3 - a);
        F += Polynomial::term(reg, Monomial::from_entries(std::move(e)), rng.gaussian()) *
             random_last_column_poly(rng, reg, 1, 1, 1);
      }
      if (F.is_zero()) continue;
      const bool member = maval::divide(F, gb).remainder.is_zero();
      CHECK(!member);
      CHECK(maval::membership_by_restriction(F, 2, 1, 2, 2000 + iter) == member);
      ++checked;
    }
  }

  {  // n=2, k=2: principal module generated by det^2.
    auto reg = VariableRegistry::matrix(2, 3);
    const std::vector<Polynomial> gens =
        embedded_generators(maval::squared_minor_basis(2, 2), reg);
    GroebnerModuleBasis gb = maval::build_groebner(gens, 2, 2, reg);
    const Polynomial det2 = gens.at(0);
    const Polynomial cross = Polynomial::parse(reg, "w_1_1*w_2_1*w_1_2*w_2_2");
    for (int iter = 0; iter < 25; ++iter) {  // members
      const Polynomial F = random_last_column_poly(rng, reg, 2) * det2;
      const bool member = maval::divide(F, gb).remainder.is_zero();
      CHECK(member);
      CHECK(maval::membership_by_restriction(F, 2, 2, 2, 3000 + iter) == member);
      ++checked;
    }
    for (int iter = 0; iter < 25; ++iter) {  // same column degrees, off the module
      Polynomial F = random_last_column_poly(rng, reg, 2) * cross;
      if (rng.integer(0, 1)) F += random_last_column_poly(rng, reg, 2) * det2;
      if (F.is_zero()) continue;
      const bool member = maval::divide(F, gb).remainder.is_zero();
      CHECK(!member);
      CHECK(maval::membership_by_restriction(F, 2, 2, 2, 4000 + iter) == member);
      ++checked;
    }
  }
  CHECK(checked >= 95);
}

TEST_CASE("module division is deterministic") {
  auto reg = VariableRegistry::matrix(3, 3);
  const auto mb = maval::squared_minor_basis(3, 2);
  const std::vector<Polynomial> gens = embedded_generators(mb, reg);
  GroebnerModuleBasis a = maval::build_groebner(gens, 3, 2, reg);
  GroebnerModuleBasis b = maval::build_groebner(gens, 3, 2, reg);
  REQUIRE(a.generators.size() == b.generators.size());
  for (size_t i = 0; i < a.generators.size(); ++i)
    CHECK(a.generators[i].to_string() == b.generators[i].to_string());

  testutil::Rng rng(5);
  Polynomial F(reg);
  for (const auto& g : gens) F += random_last_column_poly(rng, reg, 2) * g;
  maval::ModuleDivision d1 = maval::divide(F, a);
  maval::ModuleDivision d2 = maval::divide(F, b);
  CHECK(d1.remainder.to_string() == d2.remainder.to_string());
  for (size_t i = 0; i < d1.quotients.size(); ++i)
    CHECK(d1.quotients[i].to_string() == d2.quotients[i].to_string());
  CHECK(maval::membership_by_restriction(F, 3, 2, 3, 99) ==
        maval::membership_by_restriction(F, 3, 2, 3, 99));
}

TEST_CASE("embed_by_name: unknown variables are schema errors") {
  auto src = VariableRegistry::scalars({"a"});
  auto dst = VariableRegistry::matrix(2, 2);
  const Polynomial p = Polynomial::parse(src, "a^2");
  CHECK_THROWS_AS(maval::embed_by_name(p, dst), maval::error);
  try {
    maval::embed_by_name(p, dst);
  } catch (const maval::error& e) {
    CHECK(e.kind() == maval::errc::schema);
  }
}
