#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "purederive/purity.hpp"

using namespace purederive;

namespace {

struct Rng {
  unsigned long long s;
  explicit Rng(unsigned long long seed) : s(seed) {}
  unsigned long long next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  long uniform(long lo, long hi) {
    return lo + static_cast<long>(next() % (hi - lo + 1));
  }
};

FgModule random_module(Rng& rng, BaseRing ring, int max_gens, long bound) {
  int g = static_cast<int>(rng.uniform(1, max_gens));
  int r = static_cast<int>(rng.uniform(0, max_gens));
  Matrix rel(ring, r, g);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < g; ++j) rel.set(i, j, Int(rng.uniform(-bound, bound)));
  return FgModule(ring, g, rel);
}

// exact sequence built from a random submodule of a random module
ShortExactSequence random_ses(Rng& rng, BaseRing ring) {
  if (rng.uniform(0, 3) == 0) {
    FgModule a = random_module(rng, ring, 2, 6);
    FgModule c = random_module(rng, ring, 2, 6);
    DirectSum s = direct_sum({a, c});
    return {s.injections[0], s.projections[1]};
  }
  FgModule b = random_module(rng, ring, 3, 6);
  int count = static_cast<int>(rng.uniform(1, 2));
  Matrix gens(ring, b.generators(), count);
  for (int i = 0; i < gens.rows(); ++i)
    for (int j = 0; j < count; ++j) gens.set(i, j, Int(rng.uniform(-4, 4)));
  FgModule a = present_span(ring, gens, b.relation_columns());
  ModuleMap incl(a, b, gens);
  CokernelData c = cokernel_of(incl);
  return {incl, c.projection};
}

BoundedComplex doubling(BaseRing z) {
  FgModule f = FgModule::free_module(z, 1);
  ModuleMap d(f, f, Matrix(z, 1, 1, {Int(2)}));
  return BoundedComplex(z, -1, {f, f}, {d});
}

BoundedComplex contractible_pair(const FgModule& m, int low) {
  ModuleMap id = ModuleMap::identity(m);
  return BoundedComplex(m.ring(), low, {m, m}, {id});
}

BoundedComplex random_complex(Rng& rng, BaseRing ring, int depth = 2) {
  switch (depth > 0 ? rng.uniform(0, 3) : rng.uniform(0, 1)) {
    case 0:
      return BoundedComplex::stalk(random_module(rng, ring, 2, 4),
                                   static_cast<int>(rng.uniform(-2, 2)));
    case 1: {
      FgModule m = random_module(rng, ring, 2, 4);
      HomModule h = hom_module(m, random_module(rng, ring, 2, 4));
      if (h.module().generators() == 0)
        return BoundedComplex::stalk(m, static_cast<int>(rng.uniform(-2, 2)));
      Vec c(h.module().generators());
      for (auto& v : c) v = Int(rng.uniform(-2, 2));
      ModuleMap f = h.decode(c);
      return BoundedComplex(ring, static_cast<int>(rng.uniform(-2, 1)),
                            {f.domain(), f.codomain()}, {f});
    }
    case 2: {
      BoundedComplex a = random_complex(rng, ring, depth - 1);
      BoundedComplex b = random_complex(rng, ring, depth - 1);
      auto gens = chain_map_generators(a, b);
      if (gens.empty()) return a;
      return cone(gens[rng.uniform(0, static_cast<long>(gens.size()) - 1)])
          .cone;
    }
    default: {
      BoundedComplex a = random_complex(rng, ring, depth - 1);
      BoundedComplex b = random_complex(rng, ring, depth - 1);
      return direct_sum_complexes({a, b}).complex;
    }
  }
}

}  // namespace

TEST_CASE("pure sequences: pinned cases") {
  BaseRing z = BaseRing::integers();

  SUBCASE("split sequences are pure") {
    FgModule a = FgModule::cyclic(z, 4);
    FgModule c = FgModule::cyclic(z, 6);
    DirectSum s = direct_sum({a, c});
    PurityVerdict v = is_pure_sequence({s.injections[0], s.projections[1]});
    CHECK(v.pure);
    CHECK(v.certificate->split);
  }

  SUBCASE("Z/2 -> Z/4 -> Z/2 over Z/4 is not pure, witness Z/2") {
    BaseRing r4 = BaseRing::integers_mod(4);
    FgModule z2 = FgModule::cyclic(r4, 2);
    FgModule z4 = FgModule::free_module(r4, 1);
    ModuleMap incl(z2, z4, Matrix(r4, 1, 1, {Int(2)}));
    ModuleMap proj(z4, z2, Matrix(r4, 1, 1, {Int(1)}));
    PurityVerdict v = is_pure_sequence({incl, proj});
    CHECK(!v.pure);
    REQUIRE(v.failure.has_value());
    CHECK(v.failure->witness_order == 2);
  }

  SUBCASE("2Z -> Z -> Z/2 over Z is not pure, witness Z/2") {
    FgModule zz = FgModule::free_module(z, 1);
    FgModule z2 = FgModule::cyclic(z, 2);
    ModuleMap twice(zz, zz, Matrix(z, 1, 1, {Int(2)}));
    ModuleMap proj(zz, z2, Matrix(z, 1, 1, {Int(1)}));
    PurityVerdict v = is_pure_sequence({twice, proj});
    CHECK(!v.pure);
    REQUIRE(v.failure.has_value());
    CHECK(v.failure->witness_order == 2);
  }

  SUBCASE("non-exact input throws") {
    FgModule z4 = FgModule::cyclic(z, 4);
    ModuleMap id = ModuleMap::identity(z4);
    CHECK_THROWS_AS(is_pure_sequence({id, id}), NotExact);
  }
}

TEST_CASE("triple agreement on random sequences") {
  Rng rng(321);
  int impure_seen = 0;
  for (BaseRing ring :
       {BaseRing::integers(), BaseRing::integers_mod(4),
        BaseRing::integers_mod(6), BaseRing::integers_mod(8)}) {
    for (int iter = 0; iter < 25; ++iter) {
      ShortExactSequence s = random_ses(rng, ring);
      PurityVerdict v = is_pure_sequence(s);  // throws on route disagreement
      if (!v.pure) ++impure_seen;
    }
  }
  CHECK(impure_seen > 3);  // generator produces both kinds
}

TEST_CASE("purity profiles: pinned complexes") {
  BaseRing z = BaseRing::integers();

  SUBCASE("nonzero stalk fails exactly at its degree") {
    PurityProfile p =
        purity_profile(BoundedComplex::stalk(FgModule::cyclic(z, 6), 0));
    CHECK(p.inf_p == ExtendedInt::finite(0));
    CHECK(p.sup_p == ExtendedInt::finite(0));
    CHECK(!p.pure_at(0));
    CHECK(p.pure_at(-1));
    CHECK(p.pure_at(1));
  }

  SUBCASE("contractible complexes pass everywhere") {
    PurityProfile p =
        purity_profile(contractible_pair(FgModule::cyclic(z, 4), 1));
    CHECK(p.pure_everywhere());
    CHECK(p.inf_p == ExtendedInt::pos_inf());
    CHECK(p.sup_p == ExtendedInt::neg_inf());
  }

  SUBCASE("doubling complex fails at -1 (impure mono) and 0 (homology)") {
    PurityProfile p = purity_profile(doubling(z));
    CHECK(p.inf_p == ExtendedInt::finite(-1));
    CHECK(p.sup_p == ExtendedInt::finite(0));
    CHECK(!p.pure_at(-1));
    CHECK(!p.pure_at(0));
    // the -1 failure comes from the image factorization, not homology
    CHECK(p.verdicts.at(-1).reason.find("image factorization") !=
          std::string::npos);
    CHECK(p.verdicts.at(0).reason.find("homology") != std::string::npos);
  }
}

TEST_CASE("profile range forms agree with tensor and hom criteria") {
  Rng rng(77);
  for (int iter = 0; iter < 14; ++iter) {
    BaseRing ring = iter % 2 ? BaseRing::integers() : BaseRing::integers_mod(8);
    BoundedComplex x = random_complex(rng, ring);
    PurityProfile p = purity_profile(x);
    auto disagrees = range_agreement_failure(x, p);
    CHECK(!disagrees.has_value());
  }
  // and the worked example
  PurityProfile p = purity_profile(doubling(BaseRing::integers()));
  CHECK(!range_agreement_failure(doubling(BaseRing::integers()), p)
             .has_value());
}

TEST_CASE("direct sum stability of failure sets") {
  Rng rng(99);
  for (int iter = 0; iter < 6; ++iter) {
    BaseRing ring = iter % 2 ? BaseRing::integers() : BaseRing::integers_mod(4);
    BoundedComplex x = random_complex(rng, ring, 1);
    BoundedComplex y = random_complex(rng, ring, 1);
    BoundedComplex s = direct_sum_complexes({x, y}).complex;
    PurityProfile px = purity_profile(x), py = purity_profile(y),
                  ps = purity_profile(s);
    int lo = s.low_degree() - 1, hi = s.high_degree() + 1;
    for (int n = lo; n <= hi; ++n)
      CHECK(ps.pure_at(n) == (px.pure_at(n) && py.pure_at(n)));
  }
}

TEST_CASE("fully pure profiles are tensor-exact against all test modules") {
  BaseRing z = BaseRing::integers();
  BoundedComplex c = contractible_pair(FgModule::cyclic(z, 12), 0);
  PurityProfile p = purity_profile(c);
  REQUIRE(p.pure_everywhere());
  CHECK(tensor_exact_below_eq(c, c.high_degree() + 2, p.family));
}

TEST_CASE("pure quasi-isomorphisms") {
  BaseRing z = BaseRing::integers();

  SUBCASE("identity maps") {
    BoundedComplex x = doubling(z);
    PureQuasiIsoCheck c = is_pure_quasi_iso(ChainMap::identity(x));
    CHECK(c.yes);
    CHECK(c.hom_route_agrees);
  }

  SUBCASE("inclusion into X + contractible") {
    BoundedComplex x = BoundedComplex::stalk(FgModule::cyclic(z, 4), 0);
    BoundedComplex c = contractible_pair(FgModule::cyclic(z, 2), 1);
    DirectSumComplex s = direct_sum_complexes({x, c});
    PureQuasiIsoCheck q = is_pure_quasi_iso(s.injections[0]);
    CHECK(q.yes);
  }

  SUBCASE("quotient Z -> Z/2 is not a pure quasi-isomorphism") {
    FgModule f1 = FgModule::free_module(z, 1);
    FgModule z2 = FgModule::cyclic(z, 2);
    BoundedComplex x = BoundedComplex::stalk(f1, 0);
    BoundedComplex y = BoundedComplex::stalk(z2, 0);
    ChainMap q(x, y, {{0, ModuleMap(f1, z2, Matrix(z, 1, 1, {Int(1)}))}});
    PureQuasiIsoCheck c = is_pure_quasi_iso(q);
    CHECK(!c.yes);
    REQUIRE(c.failing_degree.has_value());
    CHECK(*c.failing_degree == -1);
  }
}

TEST_CASE("inf_p and sup_p are invariant under pure quasi-isomorphism") {
  Rng rng(55);
  int pairs = 0;
  for (int iter = 0; iter < 10; ++iter) {
    BaseRing ring = iter % 2 ? BaseRing::integers() : BaseRing::integers_mod(8);
    BoundedComplex x = random_complex(rng, ring, 1);
    BoundedComplex c = contractible_pair(
        random_module(rng, ring, 2, 5),
        static_cast<int>(rng.uniform(-2, 2)));
    DirectSumComplex s = direct_sum_complexes({x, c});
    PureQuasiIsoCheck q = is_pure_quasi_iso(s.injections[0]);
    REQUIRE(q.yes);
    PurityProfile px = purity_profile(x);
    PurityProfile ps = purity_profile(s.complex);
    CHECK(px.inf_p == ps.inf_p);
    CHECK(px.sup_p == ps.sup_p);
    ++pairs;
  }
  CHECK(pairs == 10);
}

TEST_CASE("truncation") {
  BaseRing z = BaseRing::integers();
  FgModule m = FgModule::cyclic(z, 6);

  SUBCASE("kernel style strips a trailing contractible block") {
    BoundedComplex x = direct_sum_complexes(
                           {BoundedComplex::stalk(m, 0),
                            contractible_pair(FgModule::cyclic(z, 2), 1)})
                           .complex;
    TruncationResult t = truncate(x, 0, TruncateMode::KernelStyle);
    CHECK(t.certificate.yes);
    CHECK(t.truncated.low_degree() == 0);
    CHECK(t.truncated.high_degree() == 0);
    CHECK(t.truncated.term(0).is_isomorphic_to(m));
  }

  SUBCASE("both modes on a contractible complex") {
    BoundedComplex c = contractible_pair(FgModule::cyclic(z, 4), 0);
    TruncationResult k = truncate(c, 0, TruncateMode::KernelStyle);
    CHECK(k.certificate.yes);
    TruncationResult q = truncate(c, 1, TruncateMode::CokernelStyle);
    CHECK(q.certificate.yes);
  }

  SUBCASE("precondition failure is reported with its degree") {
    BoundedComplex x = doubling(z);
    CHECK_THROWS_AS(truncate(x, -1, TruncateMode::KernelStyle),
                    PrereqPurityFails);
    try {
      truncate(x, -1, TruncateMode::KernelStyle);
    } catch (const PrereqPurityFails& e) {
      CHECK(e.degree == 0);
    }
  }

  SUBCASE("cokernel style collapses the doubling complex head") {
    // doubling complex is pure exact at degrees <= -2, so m = -1 works
    BoundedComplex x = doubling(z);
    TruncationResult t = truncate(x, -1, TruncateMode::CokernelStyle);
    CHECK(t.certificate.yes);
    CHECK(t.truncated.low_degree() == -1);
    PurityProfile before = purity_profile(x), after =
                                                  purity_profile(t.truncated);
    CHECK(before.inf_p == after.inf_p);
    CHECK(before.sup_p == after.sup_p);
  }
}
