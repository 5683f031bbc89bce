#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "purederive/tower.hpp"

using namespace purederive;

namespace {

// Z --(2)--> Z --(3)--> Z --(4)--> ... with colimit the rationals
Tower rationals_tower() {
  BaseRing z = BaseRing::integers();
  return Tower(z, {FgModule::free_module(z, 1)}, {},
               TailRule{TailRule::Kind::MultiplicationBy, 1, 2, 2});
}

// Z/2 --(2)--> Z/4 --(2)--> Z/8 --> ... with colimit the Pruefer 2-group
Tower pruefer_tower() {
  BaseRing z = BaseRing::integers();
  return Tower(z, {}, {}, TailRule{TailRule::Kind::PowerQuotient, 0, 1, 2});
}

Tower constant_tower(const FgModule& m) {
  return Tower(m.ring(), {m}, {},
               TailRule{TailRule::Kind::EventuallyIso, 0, 1, 2});
}

}  // namespace

TEST_CASE("tower stages and connecting maps") {
  Tower q = rationals_tower();
  CHECK(q.stage(5).canonical_form().free_rank == 1);
  CHECK(q.connecting(0).matrix().at(0, 0) == 2);
  CHECK(q.connecting(3).matrix().at(0, 0) == 5);
  CHECK(q.composite(0, 3).matrix().at(0, 0) == 2 * 3 * 4);

  Tower p = pruefer_tower();
  CHECK(p.stage(0).canonical_form().factors == std::vector<Int>{Int(2)});
  CHECK(p.stage(2).canonical_form().factors == std::vector<Int>{Int(8)});
  CHECK(p.connecting(1).is_well_defined());
}

TEST_CASE("colim presentations are exact, monic, and pure at all depths") {
  BaseRing z = BaseRing::integers();
  std::vector<Tower> towers{rationals_tower(), pruefer_tower(),
                            constant_tower(FgModule::cyclic(z, 6))};
  for (const Tower& t : towers) {
    for (int depth = 1; depth <= 8; ++depth) {
      ColimTruncation tr = colim_presentation(t, depth);
      CHECK(tr.purity.pure);
      CHECK(kernel_of(tr.one_minus_shift).module.is_zero_module());
    }
  }
}

TEST_CASE("colim of the constant tower is the constant module") {
  BaseRing z = BaseRing::integers();
  FgModule m = FgModule::cyclic(z, 6);
  ColimTruncation tr = colim_presentation(constant_tower(m), 4);
  CHECK(tr.colim.is_isomorphic_to(m));
  // every truncation of the constant tower splits
  SplitAnalysis s =
      split_analysis(ShortExactSequence{tr.one_minus_shift, tr.onto_colim});
  CHECK(s.split);
}

TEST_CASE("rationals tower truncation has the expected shift blocks") {
  ColimTruncation tr = colim_presentation(rationals_tower(), 4);
  const Matrix& m = tr.one_minus_shift.matrix();
  CHECK(m.rows() == 4);
  CHECK(m.cols() == 3);
  for (int i = 0; i < 3; ++i) CHECK(m.at(i, i) == 1);
  CHECK(m.at(1, 0) == -2);
  CHECK(m.at(2, 1) == -3);
  CHECK(m.at(3, 2) == -4);
}

TEST_CASE("hocolim resolutions") {
  BaseRing z = BaseRing::integers();

  SUBCASE("constant tower reduces to the stalk") {
    HocolimResolution r =
        hocolim_resolution(constant_tower(FgModule::cyclic(z, 4)), 4);
    CHECK(r.certified.certificate.yes);
    CHECK(r.ppd_upper_bound == 0);
  }

  SUBCASE("rationals tower keeps the two-term bound") {
    HocolimResolution r = hocolim_resolution(rationals_tower(), 5);
    CHECK(r.certified.certificate.yes);
    CHECK(r.certified.resolvent.low_degree() == -1);
    CHECK(r.certified.resolvent.high_degree() == 0);
    CHECK(r.ppd_upper_bound == 1);
  }

  SUBCASE("pruefer tower keeps the two-term bound") {
    HocolimResolution r = hocolim_resolution(pruefer_tower(), 5);
    CHECK(r.certified.certificate.yes);
    CHECK(r.ppd_upper_bound == 1);
  }
}

TEST_CASE("hom tower systems") {
  BaseRing z = BaseRing::integers();

  SUBCASE("rationals tower against Z gives multiplication transitions") {
    HomTowerSystem s =
        pext1_colim(rationals_tower(), FgModule::free_module(z, 1), 5);
    CHECK(!s.all_zero);
    for (int i = 0; i < 5; ++i) {
      CHECK(s.hom_forms[i].free_rank == 1);
      CHECK(s.hom_forms[i].factors.empty());
    }
    // transition i is multiplication by i+2 on Hom(Z, Z) = Z
    for (int i = 0; i + 1 < 5; ++i) {
      const Matrix& m = s.transitions[i].matrix();
      CHECK(abs(m.at(0, 0)) == i + 2);
    }
  }

  SUBCASE("zero target yields the zero system") {
    HomTowerSystem s = pext1_colim(rationals_tower(), FgModule::zero(z), 4);
    CHECK(s.all_zero);
  }

  SUBCASE("pruefer tower against Z vanishes") {
    HomTowerSystem s =
        pext1_colim(pruefer_tower(), FgModule::free_module(z, 1), 5);
    CHECK(s.all_zero);
  }

  SUBCASE("consistency: finite targets kill pext1 of every sampled tower") {
    for (long e : {2L, 4L, 8L}) {
      FgModule n = FgModule::cyclic(z, e);
      for (const Tower& t :
           {rationals_tower(), pruefer_tower(), constant_tower(n)}) {
        // every all-constant or eventually-zero cocycle is a coboundary
        Cocycle zero(t, n, {}, Cocycle::TailKind::Zero);
        DecideOutcome d = cocycle_decide(t, n, zero, 8);
        CHECK(d.kind == DecideOutcome::Kind::Coboundary);
      }
    }
  }
}

TEST_CASE("cocycle decisions") {
  BaseRing z = BaseRing::integers();
  FgModule zz = FgModule::free_module(z, 1);

  SUBCASE("eventually-zero cocycles are coboundaries with verified witness") {
    Tower q = rationals_tower();
    Matrix c0(z, 1, 1, {Int(7)});
    Matrix c1(z, 1, 1, {Int(-3)});
    Cocycle c(q, zz, {c0, c1}, Cocycle::TailKind::Zero);
    DecideOutcome d = cocycle_decide(q, zz, c, 8);
    CHECK(d.kind == DecideOutcome::Kind::Coboundary);
    REQUIRE(d.witness_prefix.size() >= 2);
    // direct substitution: c_0 = a_0 - a_1 o j_0
    Matrix recomposed = d.witness_prefix[0] -
                        d.witness_prefix[1] * q.connecting(0).matrix();
    CHECK(recomposed == c0);
  }

  SUBCASE("the all-ones cocycle on the rationals tower is not a coboundary") {
    Tower q = rationals_tower();
    Matrix one(z, 1, 1, {Int(1)});
    Cocycle c(q, zz, {}, Cocycle::TailKind::ConstantEntry, one);
    DecideOutcome d = cocycle_decide(q, zz, c, 8);
    CHECK(d.kind == DecideOutcome::Kind::NotCoboundary);
    REQUIRE(d.growth.has_value());
    // oracle: residues and moduli satisfy s_k = sum (j+1)!, m_k = (k+2)!
    Int expect_s = 0, fact = 1;
    for (int k = 0; k <= 8; ++k) {
      fact *= (k + 1);  // (k+1)!
      expect_s += fact;
      CHECK(d.growth->forced_residues[k] == expect_s);
      CHECK(d.growth->moduli[k] == fact * (k + 2));
    }
    // independent oracle: enumerate a window of candidate integers and
    // check each one violates some congruence a == s_k (mod m_k) with
    // s_k = sum_{j<=k} (j+1)! and m_k = (k+2)!
    for (long a0 = -200; a0 <= 200; ++a0) {
      bool excluded = false;
      Int s = 0, f = 1;
      for (int k = 0; k <= 8 && !excluded; ++k) {
        f *= (k + 1);
        s += f;
        Int mk = f * (k + 2);
        if ((Int(a0) - s) % mk != 0) excluded = true;
      }
      CHECK(excluded);
    }
  }

  SUBCASE("pruefer cocycles into finite targets are coboundaries") {
    Tower p = pruefer_tower();
    FgModule n = FgModule::cyclic(z, 8);
    Matrix one(z, 1, 1, {Int(4)});  // order-2 image: valid from stage 0 on
    Cocycle c(p, n, {}, Cocycle::TailKind::ConstantEntry, one);
    DecideOutcome d = cocycle_decide(p, n, c, 8);
    CHECK(d.kind == DecideOutcome::Kind::Coboundary);
  }

  SUBCASE("undecidable shapes are reported as such") {
    Tower cst = constant_tower(zz);
    Matrix one(z, 1, 1, {Int(1)});
    Cocycle c(cst, zz, {}, Cocycle::TailKind::ConstantEntry, one);
    DecideOutcome d = cocycle_decide(cst, zz, c, 8);
    CHECK(d.kind == DecideOutcome::Kind::Undecided);
  }
}

TEST_CASE("holim injective resolutions over finite rings") {
  BaseRing r8 = BaseRing::integers_mod(8);

  SUBCASE("constant inverse tower") {
    FgModule m = FgModule::cyclic(r8, 4);
    Tower t(r8, {m}, {}, TailRule{TailRule::Kind::EventuallyIso, 0, 1, 2},
            TowerOrientation::Inverse);
    HolimResolution r = holim_injective_resolution(t, 4);
    CHECK(r.certified.certificate.yes);
    CHECK(r.pid_upper_bound == 0);
  }

  SUBCASE("stabilized projection tower Z/8 ->> Z/4 ->> Z/2") {
    FgModule z2 = FgModule::cyclic(r8, 2);
    FgModule z4 = FgModule::cyclic(r8, 4);
    FgModule z8 = FgModule::free_module(r8, 1);
    ModuleMap p10(z4, z2, Matrix(r8, 1, 1, {Int(1)}));
    ModuleMap p21(z8, z4, Matrix(r8, 1, 1, {Int(1)}));
    Tower t(r8, {z2, z4, z8}, {p10, p21},
            TailRule{TailRule::Kind::EventuallyIso, 0, 1, 2},
            TowerOrientation::Inverse);
    HolimResolution r = holim_injective_resolution(t, 5);
    CHECK(r.certified.certificate.yes);
    CHECK(r.certified.side == Side::Injective);
    CHECK(r.pid_upper_bound == 0);
  }

  SUBCASE("towers over Z are rejected") {
    BaseRing z = BaseRing::integers();
    Tower t(z, {FgModule::free_module(z, 1)}, {},
            TailRule{TailRule::Kind::EventuallyIso, 0, 1, 2},
            TowerOrientation::Inverse);
    CHECK_THROWS_AS(holim_injective_resolution(t, 3),
                    UnsupportedInjectiveBase);
  }
}
