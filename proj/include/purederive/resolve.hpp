#pragma once

#include "purederive/purity.hpp"

namespace purederive {

struct UnsupportedInjectiveBase : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LiftSearchFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotPureQuasiIso : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Side { Projective, Injective };

/// A certified resolution: the comparison map is a pure quasi-isomorphism
/// (resolvent -> target on the projective side, target -> resolvent on the
/// injective side), every resolvent term has the required purity class, and
/// the resolvent profile stays bounded on the relevant side.
struct Resolution {
  Side side;
  BoundedComplex target;
  BoundedComplex resolvent;
  ChainMap comparison;
  PureQuasiIsoCheck certificate;
  PurityProfile resolvent_profile;
  std::vector<std::string> term_classes;  // one purity-class tag per degree
};

/// Assembles a Resolution from the given data and runs every certificate
/// check; throws logic_error when any fails.
Resolution make_certified_resolution(Side side, const BoundedComplex& target,
                                     const BoundedComplex& resolvent,
                                     const ChainMap& comparison);

/// Cone induction over the support: split off the bottom stalk, resolve the
/// rest, lift the connecting map through the comparison, take the cone.
Resolution pure_projective_resolution(const BoundedComplex& x);

/// Dual induction from the top degree.  Requires a finite ring, or torsion
/// terms over Z; throws UnsupportedInjectiveBase otherwise.
Resolution pure_injective_resolution(const BoundedComplex& x);

struct LiftOutcome {
  ChainMap lifted;
  Homotopy square_homotopy;
};

/// f': P_X -> P_Y (resp. I_X -> I_Y) making the comparison square commute
/// up to the returned homotopy witness.
LiftOutcome lift_along_resolutions(const ChainMap& f, const Resolution& rx,
                                   const Resolution& ry);

/// Solves q o f ~ g for f : W -> P given q : P -> Y and g : W -> Y.
LiftOutcome lift_left(const ChainMap& q, const ChainMap& g);
/// Solves f o q ~ g for f : I -> W given q : X -> I and g : X -> W.
LiftOutcome lift_right(const ChainMap& q, const ChainMap& g);

struct PrereqFails : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TailSplit {
  BoundedComplex head;   // supported in degrees >= -n (resp. <= n)
  BoundedComplex tail;   // contractible complement
  ChainMap to_sum;       // resolvent -> head (+) tail, an isomorphism
  ChainMap from_sum;     // inverse
  Homotopy tail_contraction;  // null homotopy of id_tail
  Resolution head_resolution; // head as a resolution of the same target
};

/// Thm of the projective side: resolvent = P1 (+) P2 with P1 supported in
/// degrees >= -n and P2 contractible.  Preconditions: inf_p(target) >= -n
/// and the cokernel of the resolvent differential at -n-1 pure projective.
TailSplit split_off_tail(const Resolution& r, int n,
                         const PurityProfile* target_profile = nullptr);

/// Injective-side twin: resolvent = I1 (+) I2 with I1 supported in degrees
/// <= n and I2 contractible; needs sup_p(target) <= n and a pure injective
/// kernel at degree n.
TailSplit split_off_head(const Resolution& r, int n,
                         const PurityProfile* target_profile = nullptr);

struct Roof {
  BoundedComplex apex;
  ChainMap to_source;  // s : apex -> X, must be a pure quasi-isomorphism
  ChainMap to_target;  // a : apex -> Y
};

struct RoofNormalization {
  ChainMap straightened;  // g : X -> Y with (s, a) equivalent to (id, g)
  std::string route;      // "homotopy-inverse" or "stalk-h0"
  // equivalence witness: a map from the middle object into the apex plus
  // the homotopy making the left triangle commute
  BoundedComplex middle;
  ChainMap middle_to_apex;
  Homotopy left_triangle;
  ChainMap middle_to_source;
};

/// Prop-3.1-style straightening when the source is a complex of pure
/// projectives (always, here), or the H^0 route when both feet are stalks.
RoofNormalization roof_normalize(const Roof& r);

}  // namespace purederive
