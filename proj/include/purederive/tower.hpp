#pragma once

#include "purederive/resolve.hpp"

namespace purederive {

/// Finitely described rule generating all stages beyond the explicit prefix.
struct TailRule {
  enum class Kind { EventuallyIso, MultiplicationBy, PowerQuotient };
  Kind kind = Kind::EventuallyIso;
  Int coeff_a = 0, coeff_b = 1;  // MultiplicationBy: stage i maps by a*i + b
  Int prime = 2;                 // PowerQuotient: Z/p^(i+1) systems

  Int multiplier(int i) const { return coeff_a * i + coeff_b; }
};

enum class TowerOrientation { Direct, Inverse };

/// Countable system of finitely generated modules: an explicit prefix plus
/// a tail rule making stage(i) and connecting(i) computable for every i.
class Tower {
 public:
  Tower(BaseRing ring, std::vector<FgModule> prefix_stages,
        std::vector<ModuleMap> prefix_maps, TailRule tail,
        TowerOrientation orientation = TowerOrientation::Direct);

  const BaseRing& ring() const { return ring_; }
  TowerOrientation orientation() const { return orientation_; }
  const TailRule& tail() const { return tail_; }
  int prefix_length() const { return static_cast<int>(prefix_stages_.size()); }

  FgModule stage(int i) const;
  /// Direct towers: stage(i) -> stage(i+1); inverse: stage(i+1) -> stage(i).
  ModuleMap connecting(int i) const;
  /// Composite of connecting maps covering [from, to) (direct) or the
  /// corresponding descent (inverse).
  ModuleMap composite(int from, int to) const;

 private:
  BaseRing ring_;
  std::vector<FgModule> prefix_stages_;
  std::vector<ModuleMap> prefix_maps_;
  TailRule tail_;
  TowerOrientation orientation_;
};

/// Depth-truncated 1-shift presentation of the direct limit: the sequence
/// 0 -> (+)X_i -> (+)X_i -> X_{depth-1} -> 0 with monic first map, checked
/// exact and pure.
struct ColimTruncation {
  int depth;
  FgModule total;
  ModuleMap one_minus_shift;
  FgModule colim;          // telescoped: the top stage
  ModuleMap onto_colim;
  PurityVerdict purity;    // Cohn/split/tensor checks of the truncation
  std::string limit_argument;
};

ColimTruncation colim_presentation(const Tower& t, int depth);

/// Two-term pure projective resolution of the truncated colimit, with the
/// untruncated reading recorded in the notes.
struct HocolimResolution {
  int depth;
  Resolution certified;   // resolvent in degrees -1, 0
  int ppd_upper_bound;    // 1, or 0 when a tail split applies
  std::vector<std::string> notes;
};

HocolimResolution hocolim_resolution(const Tower& t, int depth);

/// The inverse system Hom(stage(i), N) with its precomposition transitions;
/// Pext^1(colim, N) is the cokernel of the associated 1-shift map, queried
/// through cocycle_decide.
struct HomTowerSystem {
  int depth;
  std::vector<FgModule> hom_stages;
  std::vector<CanonicalForm> hom_forms;
  std::vector<ModuleMap> transitions;  // index i: Hom(stage(i+1)) -> Hom(stage(i))
  bool all_zero;
};

HomTowerSystem pext1_colim(const Tower& t, const FgModule& n, int depth);

/// An element of prod Hom(stage(i), N): explicit prefix entries plus a tail
/// rule (zero, or a constant entry matrix where stage shapes allow it).
class Cocycle {
 public:
  enum class TailKind { Zero, ConstantEntry };

  Cocycle(const Tower& t, FgModule target, std::vector<Matrix> prefix_entries,
          TailKind tail = TailKind::Zero, Matrix constant = Matrix());

  const FgModule& target() const { return target_; }
  TailKind tail_kind() const { return tail_; }
  int prefix_length() const { return static_cast<int>(prefix_.size()); }
  Matrix entry_matrix(const Tower& t, int i) const;
  ModuleMap entry(const Tower& t, int i) const;  // validated on access

 private:
  FgModule target_;
  std::vector<Matrix> prefix_;
  TailKind tail_;
  Matrix constant_;
};

struct GrowthCertificate {
  std::vector<Int> forced_residues;  // canonical residues s_k
  std::vector<Int> moduli;           // m_k
  std::string argument;
};

struct DecideOutcome {
  enum class Kind { Coboundary, NotCoboundary, Undecided };
  Kind kind = Kind::Undecided;
  std::vector<Matrix> witness_prefix;  // a_0 .. a_w for Coboundary
  std::optional<GrowthCertificate> growth;
  int depth_used = 0;
  std::string note;
};

/// Decides whether c lies in the image of the 1-shift map on prod Hom:
/// back-substitution for eventually-zero tails, p-adically convergent
/// summation over power-quotient towers into finite targets, and the
/// residue-growth exclusion for multiplication towers over Z; Undecided
/// otherwise.
DecideOutcome cocycle_decide(const Tower& t, const FgModule& n,
                             const Cocycle& c, int depth_limit);

/// Dual 1-shift construction on finite products over a finite ring.
struct HolimResolution {
  int depth;
  Resolution certified;   // resolvent in degrees 0, 1
  int pid_upper_bound;
  std::vector<std::string> notes;
};

HolimResolution holim_injective_resolution(const Tower& t, int depth);

}  // namespace purederive
