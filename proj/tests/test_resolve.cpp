#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "purederive/resolve.hpp"

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

BoundedComplex contractible_pair(const FgModule& m, int low) {
  ModuleMap id = ModuleMap::identity(m);
  return BoundedComplex(m.ring(), low, {m, m}, {id});
}

}  // namespace

TEST_CASE("pure projective resolutions") {
  BaseRing z = BaseRing::integers();

  SUBCASE("a stalk resolves by the identity") {
    BoundedComplex x = BoundedComplex::stalk(FgModule::cyclic(z, 6), 0);
    Resolution r = pure_projective_resolution(x);
    CHECK(r.certificate.yes);
    CHECK(r.resolvent.equals(x));
    CHECK(r.comparison.component(0).equals(
        ModuleMap::identity(x.term(0))));
  }

  SUBCASE("contractible input gets a certified resolution") {
    BoundedComplex x = contractible_pair(FgModule::cyclic(z, 4), 0);
    Resolution r = pure_projective_resolution(x);
    CHECK(r.certificate.yes);
    CHECK(r.resolvent_profile.inf_p == ExtendedInt::pos_inf());
  }

  SUBCASE("two-term quotient complex keeps its terms") {
    FgModule z4 = FgModule::cyclic(z, 4);
    FgModule z2 = FgModule::cyclic(z, 2);
    ModuleMap pi(z4, z2, Matrix(z, 1, 1, {Int(1)}));
    BoundedComplex x(z, 0, {z4, z2}, {pi});
    Resolution r = pure_projective_resolution(x);
    CHECK(r.certificate.yes);
    CHECK(r.resolvent.term(0).is_isomorphic_to(z4));
    CHECK(r.resolvent.term(1).is_isomorphic_to(z2));
    CHECK(r.resolvent.low_degree() == 0);
    CHECK(r.resolvent.high_degree() == 1);
  }

  SUBCASE("random complexes resolve with valid certificates") {
    Rng rng(3);
    for (int iter = 0; iter < 10; ++iter) {
      BaseRing ring =
          iter % 2 ? BaseRing::integers() : BaseRing::integers_mod(8);
      BoundedComplex x = random_complex(rng, ring);
      Resolution r = pure_projective_resolution(x);
      CHECK(r.certificate.yes);
      CHECK(r.resolvent_profile.inf_p != ExtendedInt::neg_inf());
    }
  }
}

TEST_CASE("pure injective resolutions") {
  BaseRing r4 = BaseRing::integers_mod(4);
  BaseRing z = BaseRing::integers();

  SUBCASE("a stalk over a finite ring resolves by the identity") {
    BoundedComplex x = BoundedComplex::stalk(FgModule::cyclic(r4, 2), 0);
    Resolution r = pure_injective_resolution(x);
    CHECK(r.certificate.yes);
    CHECK(r.resolvent.equals(x));
  }

  SUBCASE("finite complexes of finite abelian groups work over Z") {
    FgModule z4 = FgModule::cyclic(z, 4);
    FgModule z2 = FgModule::cyclic(z, 2);
    ModuleMap pi(z4, z2, Matrix(z, 1, 1, {Int(1)}));
    BoundedComplex x(z, 0, {z4, z2}, {pi});
    Resolution r = pure_injective_resolution(x);
    CHECK(r.certificate.yes);
    CHECK(r.side == Side::Injective);
  }

  SUBCASE("free parts over Z are rejected") {
    BoundedComplex x = BoundedComplex::stalk(FgModule::free_module(z, 1), 0);
    CHECK_THROWS_AS(pure_injective_resolution(x), UnsupportedInjectiveBase);
  }

  SUBCASE("random complexes over a finite ring") {
    Rng rng(5);
    for (int iter = 0; iter < 6; ++iter) {
      BoundedComplex x = random_complex(rng, r4);
      Resolution r = pure_injective_resolution(x);
      CHECK(r.certificate.yes);
      CHECK(r.resolvent_profile.sup_p != ExtendedInt::pos_inf());
    }
  }
}

TEST_CASE("lifting along resolutions") {
  BaseRing z = BaseRing::integers();
  FgModule z4 = FgModule::cyclic(z, 4);
  FgModule z2 = FgModule::cyclic(z, 2);

  SUBCASE("identity lifts to a homotopy identity") {
    BoundedComplex x = BoundedComplex::stalk(z4, 0);
    Resolution r = pure_projective_resolution(x);
    LiftOutcome l = lift_along_resolutions(ChainMap::identity(x), r, r);
    CHECK(l.square_homotopy.witnesses(
        r.comparison.compose(l.lifted),
        ChainMap::identity(x).compose(r.comparison)));
  }

  SUBCASE("quotient map lifts literally along identity resolutions") {
    BoundedComplex x = BoundedComplex::stalk(z4, 0);
    BoundedComplex y = BoundedComplex::stalk(z2, 0);
    ChainMap pi(x, y, {{0, ModuleMap(z4, z2, Matrix(z, 1, 1, {Int(1)}))}});
    Resolution rx = pure_projective_resolution(x);
    Resolution ry = pure_projective_resolution(y);
    LiftOutcome l = lift_along_resolutions(pi, rx, ry);
    CHECK(l.lifted.component(0).equals(pi.component(0)));
  }

  SUBCASE("square commutes up to the returned homotopy on random maps") {
    Rng rng(9);
    for (int iter = 0; iter < 8; ++iter) {
      BaseRing ring =
          iter % 2 ? BaseRing::integers() : BaseRing::integers_mod(8);
      BoundedComplex x = random_complex(rng, ring, 1);
      BoundedComplex y = random_complex(rng, ring, 1);
      auto gens = chain_map_generators(x, y);
      if (gens.empty()) continue;
      ChainMap f = gens[rng.uniform(0, static_cast<long>(gens.size()) - 1)];
      Resolution rx = pure_projective_resolution(x);
      Resolution ry = pure_projective_resolution(y);
      LiftOutcome l = lift_along_resolutions(f, rx, ry);
      CHECK(l.square_homotopy.witnesses(ry.comparison.compose(l.lifted),
                                        f.compose(rx.comparison)));
    }
  }

  SUBCASE("uniqueness up to homotopy via the difference of two lifts") {
    BoundedComplex x =
        BoundedComplex(z, 0, {z4, z2},
                       {ModuleMap(z4, z2, Matrix(z, 1, 1, {Int(1)}))});
    Resolution r = pure_projective_resolution(x);
    LiftOutcome a = lift_along_resolutions(ChainMap::identity(x), r, r);
    // homotopic alternatives differ by a null-homotopic chain map
    ChainMap diff = a.lifted - ChainMap::identity(r.resolvent);
    ChainMap check = r.comparison.compose(diff);
    auto h = null_homotopy(check);
    CHECK(h.has_value());
  }
}

TEST_CASE("two resolvents of one target are homotopy equivalent") {
  BaseRing z = BaseRing::integers();
  Rng rng(21);
  for (int iter = 0; iter < 4; ++iter) {
    BoundedComplex x = random_complex(rng, z, 1);
    Resolution r1 = pure_projective_resolution(x);
    // second resolution: pad the resolvent with a contractible block
    BoundedComplex pad = contractible_pair(
        random_module(rng, z, 2, 4), x.low_degree() - 1);
    DirectSumComplex sum = direct_sum_complexes({r1.resolvent, pad});
    ChainMap comparison2 = r1.comparison.compose(sum.projections[0]);
    Resolution r2{Side::Projective, x, sum.complex, comparison2,
                  is_pure_quasi_iso(comparison2), purity_profile(sum.complex),
                  {}};
    REQUIRE(r2.certificate.yes);
    LiftOutcome up = lift_along_resolutions(ChainMap::identity(x), r1, r2);
    LiftOutcome down = lift_along_resolutions(ChainMap::identity(x), r2, r1);
    CHECK(null_homotopy(down.lifted.compose(up.lifted) -
                        ChainMap::identity(r1.resolvent))
              .has_value());
    CHECK(null_homotopy(up.lifted.compose(down.lifted) -
                        ChainMap::identity(r2.resolvent))
              .has_value());
  }
}

TEST_CASE("resolving a resolvent is idempotent up to homotopy") {
  BaseRing r8 = BaseRing::integers_mod(8);
  Rng rng(33);
  BoundedComplex x = random_complex(rng, r8, 1);
  Resolution r = pure_projective_resolution(x);
  Resolution rr = pure_projective_resolution(r.resolvent);
  LiftOutcome up =
      lift_along_resolutions(ChainMap::identity(r.resolvent), rr, rr);
  CHECK(up.square_homotopy.witnesses(
      rr.comparison.compose(up.lifted),
      ChainMap::identity(r.resolvent).compose(rr.comparison)));
  // the comparison of rr is itself a homotopy equivalence here
  LiftOutcome inv = lift_left(rr.comparison, ChainMap::identity(r.resolvent));
  CHECK(null_homotopy(rr.comparison.compose(inv.lifted) -
                      ChainMap::identity(r.resolvent))
            .has_value());
}

TEST_CASE("hom complexes out of resolvents preserve pure exactness") {
  // sampled Lemma 4.1 / Remark 4.2 behaviour: Hom(P, E) and Hom(E, I)
  // are exact for pure exact E built from split pieces
  BaseRing r4 = BaseRing::integers_mod(4);
  Rng rng(41);
  for (int iter = 0; iter < 4; ++iter) {
    BoundedComplex x = random_complex(rng, r4, 1);
    Resolution rp = pure_projective_resolution(x);
    Resolution ri = pure_injective_resolution(x);
    BoundedComplex e = direct_sum_complexes(
                           {contractible_pair(random_module(rng, r4, 2, 4),
                                              rng.uniform(-1, 1)),
                            contractible_pair(random_module(rng, r4, 2, 4),
                                              rng.uniform(-1, 1))})
                           .complex;
    REQUIRE(purity_profile(e).pure_everywhere());
    BoundedComplex hpe = total_hom(rp.resolvent, e).complex();
    for (int n = hpe.low_degree() - 1; n <= hpe.high_degree() + 1; ++n)
      CHECK(homology_at(hpe, n).module.is_zero_module());
    BoundedComplex hei = total_hom(e, ri.resolvent).complex();
    for (int n = hei.low_degree() - 1; n <= hei.high_degree() + 1; ++n)
      CHECK(homology_at(hei, n).module.is_zero_module());
  }
}

TEST_CASE("split off tail") {
  BaseRing z = BaseRing::integers();
  FgModule m = FgModule::cyclic(z, 6);

  SUBCASE("identity resolution of a stalk splits trivially at n = 0") {
    Resolution r = pure_projective_resolution(BoundedComplex::stalk(m, 0));
    TailSplit t = split_off_tail(r, 0);
    CHECK(t.head.low_degree() == 0);
    CHECK(t.head.term(0).is_isomorphic_to(m));
    CHECK(t.tail.is_zero());
    CHECK(t.head_resolution.certificate.yes);
  }

  SUBCASE("contractible pad plus stalk splits into both pieces") {
    FgModule z2 = FgModule::cyclic(z, 2);
    BoundedComplex x = direct_sum_complexes(
                           {contractible_pair(FgModule::free_module(z, 1), -1),
                            BoundedComplex::stalk(z2, 0)})
                           .complex;
    Resolution r = pure_projective_resolution(x);
    TailSplit t = split_off_tail(r, 0);
    CHECK(t.head.low_degree() >= 0);
    CHECK(t.head.term(0).is_isomorphic_to(z2));
    CHECK(t.tail_contraction.witnesses(ChainMap::identity(t.tail),
                                       ChainMap::zero(t.tail, t.tail)));
    CHECK(t.head_resolution.certificate.yes);
  }

  SUBCASE("doubling complex rejects n = 0") {
    FgModule f1 = FgModule::free_module(z, 1);
    BoundedComplex x(z, -1, {f1, f1},
                     {ModuleMap(f1, f1, Matrix(z, 1, 1, {Int(2)}))});
    Resolution r = pure_projective_resolution(x);
    CHECK_THROWS_AS(split_off_tail(r, 0), PrereqFails);
    TailSplit ok = split_off_tail(r, 1);
    CHECK(ok.head_resolution.certificate.yes);
  }
}

TEST_CASE("split off head (injective side)") {
  BaseRing r4 = BaseRing::integers_mod(4);
  FgModule m = FgModule::cyclic(r4, 2);

  SUBCASE("stalk splits trivially at n = 0") {
    Resolution r = pure_injective_resolution(BoundedComplex::stalk(m, 0));
    TailSplit t = split_off_head(r, 0);
    CHECK(t.head.high_degree() == 0);
    CHECK(t.head.term(0).is_isomorphic_to(m));
    CHECK(t.tail.is_zero());
    CHECK(t.head_resolution.certificate.yes);
  }

  SUBCASE("two-term quotient complex truncates at its sup") {
    FgModule z4m = FgModule::free_module(r4, 1);
    ModuleMap pi(z4m, m, Matrix(r4, 1, 1, {Int(1)}));
    BoundedComplex x(r4, 0, {z4m, m}, {pi});
    Resolution r = pure_injective_resolution(x);
    PurityProfile p = purity_profile(x);
    REQUIRE(p.sup_p.is_finite());
    TailSplit t = split_off_head(r, static_cast<int>(p.sup_p.value));
    CHECK(t.head.high_degree() <= static_cast<int>(p.sup_p.value));
    CHECK(t.head_resolution.certificate.yes);
    CHECK(t.tail_contraction.witnesses(ChainMap::identity(t.tail),
                                       ChainMap::zero(t.tail, t.tail)));
  }
}

TEST_CASE("roof normalization") {
  BaseRing z = BaseRing::integers();

  SUBCASE("identity-legged roofs straighten to their other leg") {
    Rng rng(61);
    BoundedComplex x = random_complex(rng, z, 1);
    auto gens = chain_map_generators(x, x);
    REQUIRE(!gens.empty());
    ChainMap f = gens[0];
    Roof r{x, ChainMap::identity(x), f};
    RoofNormalization n = roof_normalize(r);
    CHECK(null_homotopy(n.straightened - f).has_value());
  }

  SUBCASE("projection from a padded apex recovers the restriction") {
    BaseRing r4 = BaseRing::integers_mod(4);
    BoundedComplex x = BoundedComplex::stalk(FgModule::cyclic(r4, 2), 0);
    BoundedComplex pad = contractible_pair(FgModule::cyclic(r4, 4), 1);
    DirectSumComplex sum = direct_sum_complexes({x, pad});
    // apex = x (+) pad, s = projection, a = any map out of the apex
    auto gens = chain_map_generators(sum.complex, x);
    REQUIRE(!gens.empty());
    ChainMap a = gens[0];
    Roof r{sum.complex, sum.projections[0], a};
    RoofNormalization n = roof_normalize(r);
    // g restricted along the section agrees with a up to homotopy
    CHECK(null_homotopy(n.straightened.compose(sum.projections[0]) - a)
              .has_value());
  }

  SUBCASE("stalk roofs go through the H^0 route") {
    BaseRing r4 = BaseRing::integers_mod(4);
    FgModule z2 = FgModule::cyclic(r4, 2);
    BoundedComplex x = BoundedComplex::stalk(z2, 0);
    Resolution res = pure_projective_resolution(x);
    // apex = the resolvent, s = comparison, a = s composed with a known map
    ModuleMap mult(z2, z2, Matrix(r4, 1, 1, {Int(1)}));
    ChainMap target_map(x, x, {{0, mult}});
    Roof r{res.resolvent, res.comparison, target_map.compose(res.comparison)};
    RoofNormalization n = roof_normalize(r);
    CHECK(n.route == "stalk-h0");
    CHECK(n.straightened.component(0).equals(mult));
  }

  SUBCASE("a non-quasi-iso left leg is rejected") {
    FgModule f1 = FgModule::free_module(z, 1);
    FgModule z2 = FgModule::cyclic(z, 2);
    BoundedComplex zx = BoundedComplex::stalk(f1, 0);
    BoundedComplex y = BoundedComplex::stalk(z2, 0);
    ChainMap q(zx, y, {{0, ModuleMap(f1, z2, Matrix(z, 1, 1, {Int(1)}))}});
    Roof r{zx, q, ChainMap::identity(zx)};
    CHECK_THROWS_AS(roof_normalize(r), NotPureQuasiIso);
  }
}
