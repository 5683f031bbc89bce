#pragma once

#include <json.hpp>

#include "purederive/pext.hpp"

namespace purederive {

struct SuiteResult {
  std::string name;
  int instances = 0;
  int failures = 0;
  std::vector<std::string> failure_details;
  nlohmann::json summary = nlohmann::json::object();

  bool passed() const { return failures == 0; }
};

/// Randomized SNF exactness: U A V = S, divisibility chain, unimodularity.
SuiteResult verify_snf(Rng& rng, int count);

/// Cohn-family, split-oracle, and tensor purity verdicts agree on random
/// short exact sequences; pinned known cases included.
SuiteResult verify_purity_triple(Rng& rng, int count, const SampleConfig& cfg);

/// Literal per-degree profiles match the tensor-range and hom-range
/// criteria at every cut, worked example included.
SuiteResult verify_profile_ranges(Rng& rng, int count,
                                  const SampleConfig& cfg);

/// inf_p and sup_p agree across constructed pure quasi-isomorphism pairs
/// (contractible paddings and truncations).
SuiteResult verify_invariance(Rng& rng, int count, const SampleConfig& cfg);

/// Resolution outputs pass their certificates; comparison squares commute
/// up to an explicit homotopy for random chain maps.
SuiteResult verify_resolutions(Rng& rng, int count, const SampleConfig& cfg);

/// Dimension criteria give one minimal n (projective side over the ring,
/// plus the observed ppd = -inf_p identity).
SuiteResult verify_dim_criteria(Rng& rng, int count, const SampleConfig& cfg,
                                const BaseRing& ring, Side side);

/// ViaProjective and ViaInjective agree over a finite ring; stalk Pext^0
/// matches the Hom oracle on small moduli.
SuiteResult verify_pext_routes(Rng& rng, int count, const SampleConfig& cfg);

/// Pure Pext^1(Z/2, Z/2) = 0 against the classical Ext^1 = Z/2 oracle.
SuiteResult verify_contrast();

/// Pure global dimension probes over the ring, with tower witnesses over Z.
SuiteResult verify_pgldim(Rng& rng, int count, const BaseRing& ring);

/// Bundled towers at all depths up to the limit: exact monic truncations,
/// vanishing pext1 into finite targets, verified coboundary witnesses.
SuiteResult verify_towers(int max_depth);

}  // namespace purederive
