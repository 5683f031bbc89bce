#pragma once

#include "purederive/rng.hpp"
#include "purederive/tower.hpp"

namespace purederive {

enum class PextRoute { ViaProjective, ViaInjective, Both };

/// H^i of the total Hom against a pure projective resolution of the first
/// argument, or a pure injective resolution of the second; Both computes
/// both and insists the canonical forms agree.
FgModule pext(const BoundedComplex& x, const BoundedComplex& y, int i,
              PextRoute route = PextRoute::ViaProjective);

FgModule pext_from_resolution(const Resolution& rx, const BoundedComplex& y,
                              int i);
FgModule pext_into_resolution(const BoundedComplex& x, const Resolution& ry,
                              int i);

struct CriterionVerdict {
  bool holds = false;
  std::string detail;
};

/// Joint verdict of the dimension criteria at one candidate n.
struct DimReport {
  Side side = Side::Projective;
  ExtendedInt value;
  long evaluated_at = 0;  // meaningful when value is finite
  std::map<std::string, CriterionVerdict> criteria;
  bool minimal = false;  // the vanishing criterion fails one step lower
  bool agreed = false;   // all evaluated criteria agree
};

/// Minimal n passing the profile-and-cokernel criterion, with the other
/// criteria cross-evaluated there; -inf for pure exact complexes.
/// Disagreement between criteria throws logic_error.
std::pair<ExtendedInt, DimReport> ppd(const BoundedComplex& x);

/// Dual engine; throws UnsupportedInjectiveBase outside the supported base.
std::pair<ExtendedInt, DimReport> pid(const BoundedComplex& y);

/// Evaluates every criterion independently at the given n.  The universal
/// quantifier of the fourth criterion is sampled over shifted test-module
/// stalks plus the caller's extra samples, never decided.
DimReport criteria_report(const BoundedComplex& x, int n, Side side,
                          const std::vector<BoundedComplex>& extra_samples = {});

struct PgldimProbe {
  BaseRing ring;
  int samples = 0;
  long observed_bound = 0;  // max of ppd + inf_p over the sample
  bool all_higher_pext_vanish = true;
  bool fg_blindspot = true;   // finitely generated sampling cannot see
                              // non-finitely-generated witnesses
  bool tower_witness = false; // the rationals-tower certificate was included
  long lower_bound = 0;
  std::vector<std::string> notes;
};

/// Samples modules and complexes, reports the largest shifted dimension
/// observed, and (over Z, when enabled) adds the tower-backed witness
/// pinning the pure projective dimension of the rationals at exactly 1.
PgldimProbe pgldim_probe(const BaseRing& ring, Rng& rng, int count,
                         bool tower_witnesses);

}  // namespace purederive
