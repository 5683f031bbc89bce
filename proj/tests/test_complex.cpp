#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "purederive/complex.hpp"

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

BoundedComplex two_term(const FgModule& a, const FgModule& b, Matrix m,
                        int low) {
  ModuleMap d(a, b, std::move(m));
  return BoundedComplex(a.ring(), low, {a, b}, {d});
}

// doubling complex Z ->(2) Z in degrees -1, 0
BoundedComplex doubling(BaseRing z) {
  FgModule f = FgModule::free_module(z, 1);
  return two_term(f, f, Matrix(z, 1, 1, {Int(2)}), -1);
}

// random complexes built from stalks, cones of sampled chain maps, and sums
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
      return two_term(f.domain(), f.codomain(), f.matrix(),
                      static_cast<int>(rng.uniform(-2, 1)));
    }
    case 2: {
      BoundedComplex a = random_complex(rng, ring, depth - 1);
      BoundedComplex b = random_complex(rng, ring, depth - 1);
      auto gens = chain_map_generators(a, b);
      if (gens.empty()) return a;
      ChainMap f = gens[rng.uniform(0, static_cast<long>(gens.size()) - 1)];
      return cone(f).cone;
    }
    default: {
      BoundedComplex a = random_complex(rng, ring, depth - 1);
      BoundedComplex b = random_complex(rng, ring, depth - 1);
      return direct_sum_complexes({a, b}).complex;
    }
  }
}

// exactness of A -> B -> C at B
bool exact_at(const ModuleMap& f, const ModuleMap& g) {
  if (!g.compose(f).is_zero_map()) return false;
  KernelData k = kernel_of(g);
  Solver member(f.matrix().hcat(f.codomain().relation_columns()));
  for (int j = 0; j < k.inclusion.matrix().cols(); ++j)
    if (!member.solve(k.inclusion.matrix().col(j))) return false;
  return true;
}

}  // namespace

TEST_CASE("validation") {
  BaseRing z = BaseRing::integers();
  FgModule z2 = FgModule::cyclic(z, 2);

  CHECK(BoundedComplex::stalk(z2).validate().ok);
  CHECK(doubling(z).validate().ok);

  ModuleMap id = ModuleMap::identity(z2);
  BoundedComplex bad(z, 0, {z2, z2, z2}, {id, id});
  auto v = bad.validate();
  CHECK(!v.ok);
  CHECK(v.failing_degree == 1);
}

TEST_CASE("shift conventions") {
  BaseRing z = BaseRing::integers();
  FgModule m = FgModule::cyclic(z, 6);

  BoundedComplex s = BoundedComplex::stalk(m, 0);
  CHECK(shift(s, 1).low_degree() == -1);
  CHECK(shift(s, 0).equals(s));

  BoundedComplex d = doubling(z);
  CHECK(shift(shift(d, 3), -3).equals(d));
  CHECK(shift(d, 2).differential(-3).matrix() == d.differential(-1).matrix());
  CHECK(shift(d, 1).differential(-2).matrix() ==
        d.differential(-1).matrix().scaled(-1));
}

TEST_CASE("cone shapes and homology") {
  BaseRing z = BaseRing::integers();
  FgModule z2 = FgModule::cyclic(z, 2);
  FgModule f1 = FgModule::free_module(z, 1);

  SUBCASE("cone of the identity is contractible") {
    BoundedComplex s = BoundedComplex::stalk(z2, 0);
    Triangle t = cone(ChainMap::identity(s));
    CHECK(t.cone.low_degree() == -1);
    CHECK(t.cone.high_degree() == 0);
    CHECK(is_contractible(t.cone));
  }

  SUBCASE("cone of zero map is X[1] + Y") {
    BoundedComplex x = BoundedComplex::stalk(z2, 0);
    BoundedComplex y = BoundedComplex::stalk(FgModule::cyclic(z, 3), 0);
    Triangle t = cone(ChainMap::zero(x, y));
    CHECK(t.cone.term(-1).is_isomorphic_to(z2));
    CHECK(t.cone.term(0).is_isomorphic_to(FgModule::cyclic(z, 3)));
    CHECK(t.cone.differential(-1).is_zero_map());
  }

  SUBCASE("cone of the quotient Z -> Z/2 has H^-1 = Z") {
    BoundedComplex x = BoundedComplex::stalk(f1, 0);
    BoundedComplex y = BoundedComplex::stalk(z2, 0);
    ChainMap q(x, y, {{0, ModuleMap(f1, z2, Matrix(z, 1, 1, {Int(1)}))}});
    Triangle t = cone(q);
    Homology hm1 = homology_at(t.cone, -1);
    CHECK(hm1.module.canonical_form().free_rank == 1);
    CHECK(hm1.module.canonical_form().factors.empty());
    CHECK(homology_at(t.cone, 0).module.is_zero_module());
  }

  SUBCASE("triangle composites") {
    Rng rng(5);
    for (int iter = 0; iter < 10; ++iter) {
      BoundedComplex x = random_complex(rng, BaseRing::integers_mod(4), 1);
      BoundedComplex y = random_complex(rng, BaseRing::integers_mod(4), 1);
      auto gens = chain_map_generators(x, y);
      if (gens.empty()) continue;
      ChainMap f = gens[rng.uniform(0, static_cast<long>(gens.size()) - 1)];
      Triangle t = cone(f);
      CHECK(t.cone.validate().ok);
      CHECK(t.comp_first.witnesses(t.into_cone.compose(f),
                                   ChainMap::zero(x, t.cone)));
      CHECK(t.onto_shift.compose(t.into_cone).is_zero_map());
      CHECK(t.comp_third.witnesses(f.shifted(1).compose(t.onto_shift),
                                   ChainMap::zero(t.cone, shift(y, 1))));
    }
  }
}

TEST_CASE("total hom") {
  BaseRing z = BaseRing::integers();
  FgModule z2 = FgModule::cyclic(z, 2);
  FgModule z4 = FgModule::cyclic(z, 4);

  SUBCASE("stalk pair gives a single hom group") {
    TotalHom th =
        total_hom(BoundedComplex::stalk(z2), BoundedComplex::stalk(z4));
    CHECK(th.complex().low_degree() == 0);
    CHECK(th.complex().high_degree() == 0);
    CHECK(th.complex().term(0).canonical_form().factors ==
          std::vector<Int>{Int(2)});
  }

  SUBCASE("hom into zero complex vanishes") {
    TotalHom th = total_hom(doubling(z), BoundedComplex(z));
    CHECK(th.complex().is_zero());
  }

  SUBCASE("doubling complex against stalk Z/2") {
    TotalHom th = total_hom(doubling(z), BoundedComplex::stalk(z2));
    CHECK(th.complex().term(0).canonical_form().factors ==
          std::vector<Int>{Int(2)});
    CHECK(th.complex().term(1).canonical_form().factors ==
          std::vector<Int>{Int(2)});
    CHECK(th.complex().differential(0).is_zero_map());
  }

  SUBCASE("differential squares to zero on random pairs") {
    Rng rng(17);
    for (int iter = 0; iter < 20; ++iter) {
      BaseRing ring =
          iter % 2 ? BaseRing::integers() : BaseRing::integers_mod(8);
      BoundedComplex x = random_complex(rng, ring, 1);
      BoundedComplex y = random_complex(rng, ring, 1);
      TotalHom th = total_hom(x, y);
      CHECK(th.complex().validate().ok);
    }
  }
}

TEST_CASE("homology") {
  BaseRing z = BaseRing::integers();
  FgModule m = FgModule::cyclic(z, 6);

  CHECK(homology_at(BoundedComplex::stalk(m), 0).module.is_isomorphic_to(m));
  CHECK(homology_at(BoundedComplex::stalk(m), 3).module.is_zero_module());

  BoundedComplex d = doubling(z);
  CHECK(homology_at(d, 0).module.canonical_form().factors ==
        std::vector<Int>{Int(2)});
  CHECK(homology_at(d, -1).module.is_zero_module());
}

TEST_CASE("null homotopies") {
  BaseRing z = BaseRing::integers();
  FgModule f1 = FgModule::free_module(z, 1);
  FgModule z2 = FgModule::cyclic(z, 2);

  SUBCASE("zero map is null-homotopic by zero") {
    BoundedComplex x = doubling(z);
    auto h = null_homotopy(ChainMap::zero(x, x));
    REQUIRE(h.has_value());
    CHECK(h->witnesses(ChainMap::zero(x, x), ChainMap::zero(x, x)));
  }

  SUBCASE("identity on Z -> Z is null-homotopic") {
    BoundedComplex x = two_term(f1, f1, Matrix::identity(z, 1), 0);
    auto h = null_homotopy(ChainMap::identity(x));
    REQUIRE(h.has_value());
    CHECK(h->witnesses(ChainMap::identity(x), ChainMap::zero(x, x)));
    CHECK(is_contractible(x));
  }

  SUBCASE("identity on a stalk with homology is not") {
    BoundedComplex x = BoundedComplex::stalk(z2, 0);
    CHECK(!null_homotopy(ChainMap::identity(x)).has_value());
    CHECK(!is_contractible(x));
  }
}

TEST_CASE("long exact homology sequence of a cone") {
  Rng rng(23);
  int tested = 0;
  for (int iter = 0; iter < 25; ++iter) {
    BaseRing ring = iter % 2 ? BaseRing::integers() : BaseRing::integers_mod(8);
    BoundedComplex x = random_complex(rng, ring, 1);
    BoundedComplex y = random_complex(rng, ring, 1);
    auto gens = chain_map_generators(x, y);
    if (gens.empty()) continue;
    ChainMap f = gens[rng.uniform(0, static_cast<long>(gens.size()) - 1)];
    Triangle t = cone(f);
    BoundedComplex x1 = shift(x, 1);
    for (int n = t.cone.low_degree() - 1; n <= t.cone.high_degree() + 1; ++n) {
      Homology hx = homology_at(x, n), hy = homology_at(y, n);
      Homology hc = homology_at(t.cone, n);
      Homology hx1 = homology_at(x1, n);
      ModuleMap a = induced_on_homology(f, hx, hy, n);
      ModuleMap b = induced_on_homology(t.into_cone, hy, hc, n);
      ModuleMap c = induced_on_homology(t.onto_shift, hc, hx1, n);
      ChainMap f1 = f.shifted(1);
      Homology hsy1 = homology_at(f1.target(), n);
      ModuleMap d = induced_on_homology(f1, hx1, hsy1, n);
      CHECK(exact_at(a, b));
      CHECK(exact_at(b, c));
      CHECK(exact_at(c, d));
      ++tested;
    }
  }
  CHECK(tested > 30);
}

TEST_CASE("H^0 of the total hom counts chain maps modulo homotopy") {
  BaseRing f2 = BaseRing::integers_mod(2);
  Rng rng(31);
  for (int iter = 0; iter < 6; ++iter) {
    // small complexes of F2 vector spaces
    auto mk = [&](int len) {
      std::vector<FgModule> terms;
      std::vector<ModuleMap> diffs;
      std::vector<int> dims;
      for (int i = 0; i < len; ++i)
        dims.push_back(static_cast<int>(rng.uniform(1, 2)));
      for (int i = 0; i < len; ++i)
        terms.push_back(FgModule::free_module(f2, dims[i]));
      for (int i = 0; i + 1 < len; ++i) {
        while (true) {
          Matrix m(f2, dims[i + 1], dims[i]);
          for (int r = 0; r < m.rows(); ++r)
            for (int cidx = 0; cidx < m.cols(); ++cidx)
              m.set(r, cidx, Int(rng.uniform(0, 1)));
          if (i == 0) {
            diffs.emplace_back(terms[i], terms[i + 1], m);
            break;
          }
          Matrix prod = m * diffs.back().matrix();
          if (prod.is_zero()) {
            diffs.emplace_back(terms[i], terms[i + 1], m);
            break;
          }
        }
      }
      return BoundedComplex(f2, 0, terms, diffs);
    };
    BoundedComplex x = mk(static_cast<int>(rng.uniform(1, 3)));
    BoundedComplex y = mk(static_cast<int>(rng.uniform(1, 3)));

    auto enumerate = [&](const std::vector<std::pair<int, int>>& shapes,
                         auto&& visit) {
      int total_bits = 0;
      for (auto [r, c] : shapes) total_bits += r * c;
      for (long code = 0; code < (1L << total_bits); ++code) {
        std::vector<Matrix> ms;
        long t = code;
        for (auto [r, c] : shapes) {
          Matrix m(f2, r, c);
          for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
              m.set(i, j, Int(t & 1));
              t >>= 1;
            }
          ms.push_back(m);
        }
        visit(ms);
      }
    };

    int lo = std::min(x.low_degree(), y.low_degree());
    int hi = std::max(x.high_degree(), y.high_degree());
    std::vector<std::pair<int, int>> map_shapes, htp_shapes;
    std::vector<int> map_degrees, htp_degrees;
    for (int n = lo; n <= hi; ++n) {
      if (x.term(n).generators() && y.term(n).generators()) {
        map_shapes.push_back({y.term(n).generators(), x.term(n).generators()});
        map_degrees.push_back(n);
      }
      if (x.term(n).generators() && y.term(n - 1).generators()) {
        htp_shapes.push_back(
            {y.term(n - 1).generators(), x.term(n).generators()});
        htp_degrees.push_back(n);
      }
    }
    if (map_shapes.empty()) continue;

    long chain_count = 0;
    enumerate(map_shapes, [&](const std::vector<Matrix>& ms) {
      for (size_t k = 0; k < ms.size(); ++k) {
        int n = map_degrees[k];
        Matrix lhs = y.differential(n).matrix() * ms[k];
        Matrix rhs(f2, y.term(n + 1).generators(), x.term(n).generators());
        for (size_t k2 = 0; k2 < ms.size(); ++k2)
          if (map_degrees[k2] == n + 1)
            rhs = ms[k2] * x.differential(n).matrix();
        if (!(lhs == rhs)) return;
      }
      ++chain_count;
    });

    std::vector<std::string> boundaries;
    enumerate(htp_shapes, [&](const std::vector<Matrix>& ss) {
      std::string key;
      for (size_t k = 0; k < map_shapes.size(); ++k) {
        int n = map_degrees[k];
        Matrix b(f2, y.term(n).generators(), x.term(n).generators());
        for (size_t k2 = 0; k2 < ss.size(); ++k2) {
          if (htp_degrees[k2] == n)
            b = b + y.differential(n - 1).matrix() * ss[k2];
          if (htp_degrees[k2] == n + 1)
            b = b + ss[k2] * x.differential(n).matrix();
        }
        key += b.describe() + "|";
      }
      boundaries.push_back(key);
    });
    std::sort(boundaries.begin(), boundaries.end());
    boundaries.erase(std::unique(boundaries.begin(), boundaries.end()),
                     boundaries.end());
    long classes = chain_count / static_cast<long>(boundaries.size());

    TotalHom th = total_hom(x, y);
    Homology h0 = homology_at(th.complex(), 0);
    CHECK(h0.module.canonical_form().element_count() == classes);
  }
}
