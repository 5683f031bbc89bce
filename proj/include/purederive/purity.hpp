#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "purederive/complex.hpp"
#include "purederive/extint.hpp"

namespace purederive {

struct PrereqPurityFails : std::runtime_error {
  int degree;
  explicit PrereqPurityFails(int d)
      : std::runtime_error("purity precondition fails at degree " +
                           std::to_string(d)),
        degree(d) {}
};

/// Cyclic test modules R/(d).  Purity of sequences of finitely generated
/// modules over Z and Z/m is detected by the divisors of the torsion
/// exponents present, together with R itself (order 0).
struct TestFamily {
  BaseRing ring;
  std::vector<Int> orders;  // 0 denotes R itself; otherwise d >= 2
  bool capped = false;

  static TestFamily for_modules(const BaseRing& ring,
                                const std::vector<FgModule>& modules,
                                int cap = 64);
  static TestFamily for_complex(const BoundedComplex& x, int cap = 64);

  TestFamily merged(const TestFamily& o) const;
  FgModule module_for(const Int& order) const;
};

struct PurityFailure {
  Int witness_order;         // the F = R/(d) that detects the failure
  Vec failing_hom_element;   // class in Hom(F, C) missing from the image
  std::string route;         // which of the three routes reported first
};

struct PurityCertificate {
  std::vector<Int> tested_orders;
  bool split = false;  // the split oracle's verdict (always true when pure)
};

struct PurityVerdict {
  bool pure = false;
  std::optional<PurityCertificate> certificate;
  std::optional<PurityFailure> failure;
};

/// Cohn criterion over the test family, cross-checked against the split
/// oracle and tensor-exactness of the cyclic right modules.  The three
/// routes must agree; disagreement raises logic_error.
PurityVerdict is_pure_sequence(const ShortExactSequence& s,
                               const TestFamily* extra = nullptr);

struct DegreeVerdict {
  bool pure = false;
  std::string reason;  // set when not pure
};

struct PurityProfile {
  std::map<int, DegreeVerdict> verdicts;  // [low-1, high+1]
  ExtendedInt inf_p, sup_p;
  TestFamily family;

  bool pure_everywhere() const { return inf_p == ExtendedInt::pos_inf(); }
  bool pure_at(int n) const;       // degrees outside the map pass
  bool pure_below_eq(int n) const; // all degrees <= n
  bool pure_above_eq(int n) const; // all degrees >= n
};

/// Per-degree verdicts: homology vanishes, both neighbouring differentials
/// admit pure-epi/pure-mono image factorizations, and the kernel-cokernel
/// sequence 0 -> Ker d^n -> X^n -> Coker d^{n-1} -> 0 is pure exact.
PurityProfile purity_profile(const BoundedComplex& x,
                             const TestFamily* extra = nullptr);

struct PureQuasiIsoCheck {
  bool yes = false;
  std::optional<int> failing_degree;
  PurityProfile cone_profile;
  bool hom_route_agrees = false;  // Hom(F, f) all quasi-isomorphisms
};

/// Cone route and Hom-functor route, both computed and compared.
PureQuasiIsoCheck is_pure_quasi_iso(const ChainMap& f,
                                    const TestFamily* extra = nullptr);

/// Termwise F (x) X for a cyclic test module of the given order.
BoundedComplex tensor_cyclic_complex(const Int& order,
                                     const BoundedComplex& x);

/// True when H^i(F (x) X) = 0 for all i <= n and every family member.
bool tensor_exact_below_eq(const BoundedComplex& x, int n,
                           const TestFamily& family);
/// True when H^i(Hom(F, X)) = 0 for all i >= n and every family member.
bool hom_exact_above_eq(const BoundedComplex& x, int n,
                        const TestFamily& family);

/// Checks the range criteria against the literal profile at every cut
/// through the support; returns the first disagreeing cut if any.
std::optional<int> range_agreement_failure(const BoundedComplex& x,
                                           const PurityProfile& profile);

enum class TruncateMode { KernelStyle, CokernelStyle };

struct TruncationResult {
  BoundedComplex truncated;
  ChainMap comparison;  // truncated -> x (kernel style), x -> truncated (cokernel style)
  PureQuasiIsoCheck certificate;
};

/// Kernel style keeps degrees < m and replaces degree m by Ker d^m
/// (requires purity at degrees >= m+1); cokernel style keeps degrees > m
/// and replaces degree m by Coker d^{m-1} (requires purity at degrees
/// <= m-1).  Throws PrereqPurityFails when the precondition fails.
TruncationResult truncate(const BoundedComplex& x, int m, TruncateMode mode);

}  // namespace purederive
