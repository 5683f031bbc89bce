#include "purederive/rng.hpp"

namespace purederive {

FgModule random_module(Rng& rng, const BaseRing& ring,
                       const SampleConfig& cfg) {
  int g = static_cast<int>(rng.uniform(1, cfg.max_generators));
  int r = static_cast<int>(rng.uniform(0, cfg.max_generators));
  Matrix rel(ring, r, g);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < g; ++j)
      rel.set(i, j, Int(rng.uniform(-cfg.entry_bound, cfg.entry_bound)));
  return FgModule(ring, g, rel);
}

ModuleMap random_map(Rng& rng, const FgModule& m, const FgModule& n) {
  HomModule h(m, n);
  if (h.module().generators() == 0) return ModuleMap::zero_map(m, n);
  Vec c(h.module().generators());
  for (auto& v : c) v = Int(rng.uniform(-3, 3));
  return h.decode(c);
}

ShortExactSequence random_ses(Rng& rng, const BaseRing& ring,
                              const SampleConfig& cfg) {
  if (rng.uniform(0, 3) == 0) {
    FgModule a = random_module(rng, ring, cfg);
    FgModule c = random_module(rng, ring, cfg);
    DirectSum s = direct_sum({a, c});
    return {s.injections[0], s.projections[1]};
  }
  FgModule b = random_module(rng, ring, cfg);
  int count = static_cast<int>(rng.uniform(1, 2));
  Matrix gens(ring, b.generators(), count);
  for (int i = 0; i < gens.rows(); ++i)
    for (int j = 0; j < count; ++j)
      gens.set(i, j, Int(rng.uniform(-cfg.entry_bound, cfg.entry_bound)));
  FgModule a = present_span(ring, gens, b.relation_columns());
  ModuleMap incl(a, b, gens);
  CokernelData c = cokernel_of(incl);
  return {incl, c.projection};
}

BoundedComplex random_complex(Rng& rng, const BaseRing& ring,
                              const SampleConfig& cfg, int depth) {
  switch (depth > 0 ? rng.uniform(0, 3) : rng.uniform(0, 1)) {
    case 0:
      return BoundedComplex::stalk(random_module(rng, ring, cfg),
                                   static_cast<int>(rng.uniform(-2, 2)));
    case 1: {
      FgModule m = random_module(rng, ring, cfg);
      ModuleMap f = random_map(rng, m, random_module(rng, ring, cfg));
      return BoundedComplex(ring, static_cast<int>(rng.uniform(-2, 1)),
                            {f.domain(), f.codomain()}, {f});
    }
    case 2: {
      BoundedComplex a = random_complex(rng, ring, cfg, depth - 1);
      BoundedComplex b = random_complex(rng, ring, cfg, depth - 1);
      ChainMap f = random_chain_map(rng, a, b);
      BoundedComplex c = cone(f).cone;
      if (c.high_degree() - c.low_degree() + 1 > cfg.max_length) return a;
      return c;
    }
    default: {
      BoundedComplex a = random_complex(rng, ring, cfg, depth - 1);
      BoundedComplex b = random_complex(rng, ring, cfg, depth - 1);
      BoundedComplex s = direct_sum_complexes({a, b}).complex;
      if (s.high_degree() - s.low_degree() + 1 > cfg.max_length) return a;
      return s;
    }
  }
}

ChainMap random_chain_map(Rng& rng, const BoundedComplex& x,
                          const BoundedComplex& y) {
  auto gens = chain_map_generators(x, y);
  if (gens.empty()) return ChainMap::zero(x, y);
  ChainMap f = ChainMap::zero(x, y);
  for (const auto& g : gens) {
    long c = rng.uniform(-2, 2);
    if (c != 0) f = f + g.scaled(c);
  }
  return f;
}

BoundedComplex random_contractible(Rng& rng, const BaseRing& ring,
                                   const SampleConfig& cfg) {
  FgModule m = random_module(rng, ring, cfg);
  ModuleMap id = ModuleMap::identity(m);
  return BoundedComplex(ring, static_cast<int>(rng.uniform(-2, 2)), {m, m},
                        {id});
}

}  // namespace purederive
