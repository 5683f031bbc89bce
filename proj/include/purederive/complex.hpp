#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "purederive/fgmod.hpp"

namespace purederive {

/// Cochain complex supported on finitely many degrees, differentials
/// d^n : X^n -> X^{n+1} with d o d = 0.
class BoundedComplex {
 public:
  explicit BoundedComplex(BaseRing ring);  // the zero complex
  BoundedComplex(BaseRing ring, int low, std::vector<FgModule> terms,
                 std::vector<ModuleMap> differentials);

  static BoundedComplex stalk(const FgModule& m, int degree = 0);

  const BaseRing& ring() const { return ring_; }
  bool is_zero() const { return terms_.empty(); }
  /// Trimmed support [low_degree, high_degree]; low > high when zero.
  int low_degree() const { return low_; }
  int high_degree() const { return low_ + static_cast<int>(terms_.size()) - 1; }

  const FgModule& term(int n) const;
  ModuleMap differential(int n) const;  // zero maps outside the support

  struct Validation {
    bool ok = true;
    int failing_degree = 0;
    std::string reason;
  };
  Validation validate() const;

  bool equals(const BoundedComplex& o) const;

 private:
  BaseRing ring_;
  int low_ = 0;
  std::vector<FgModule> terms_;
  std::vector<ModuleMap> diffs_;  // diffs_[i] : terms_[i] -> terms_[i+1]
  FgModule zero_;
};

/// X[k]^n = X^{n+k}, differential scaled by (-1)^k.
BoundedComplex shift(const BoundedComplex& x, int k);

class ChainMap {
 public:
  ChainMap(BoundedComplex source, BoundedComplex target,
           std::map<int, ModuleMap> components);

  static ChainMap identity(const BoundedComplex& x);
  static ChainMap zero(const BoundedComplex& source,
                       const BoundedComplex& target);

  const BoundedComplex& source() const { return source_; }
  const BoundedComplex& target() const { return target_; }
  ModuleMap component(int n) const;

  /// Components are well-defined and commute with the differentials.
  std::optional<std::string> validate() const;

  ChainMap compose(const ChainMap& inner) const;
  ChainMap operator+(const ChainMap& o) const;
  ChainMap operator-(const ChainMap& o) const;
  ChainMap scaled(const Int& c) const;
  ChainMap shifted(int k) const;  // f[k]

  bool is_zero_map() const;
  bool equals(const ChainMap& o) const;

 private:
  BoundedComplex source_, target_;
  std::map<int, ModuleMap> components_;
};

/// Degree -1 witness: f - g = d_Y s + s d_X.
struct Homotopy {
  BoundedComplex source, target;
  std::map<int, ModuleMap> components;  // s^n : X^n -> Y^{n-1}

  ModuleMap component(int n) const;
  bool witnesses(const ChainMap& f, const ChainMap& g) const;
};

struct Triangle {
  ChainMap map;         // f : X -> Y
  BoundedComplex cone;  // X^{n+1} (+) Y^n
  ChainMap into_cone;   // Y -> cone
  ChainMap onto_shift;  // cone -> X[1]
  Homotopy comp_first;  // witnesses into_cone o f ~ 0
  Homotopy comp_third;  // witnesses f[1] o onto_shift ~ 0
};

/// Mapping cone with differential [[-d_X, 0], [f, d_Y]] and its
/// distinguished-triangle structure maps.
Triangle cone(const ChainMap& f);

struct DirectSumComplex {
  BoundedComplex complex;
  std::vector<ChainMap> injections;
  std::vector<ChainMap> projections;
};

DirectSumComplex direct_sum_complexes(const std::vector<BoundedComplex>& parts);

/// Total Hom complex: degree n gathers Hom(X^i, Y^{i+n}) with differential
/// d(phi)^i = d_Y^{i+n} phi^i - (-1)^n phi^{i+1} d_X^i.
class TotalHom {
 public:
  TotalHom(const BoundedComplex& x, const BoundedComplex& y);

  const BoundedComplex& complex() const { return complex_; }
  /// Chain-map-shaped view of an element in degree n.
  std::map<int, Matrix> decode(int n, const Vec& coords) const;
  Vec encode(int n, const std::map<int, Matrix>& components) const;

 private:
  struct Block {
    int source_degree;
    HomModule hom;
    int offset;  // generator offset within the total degree term
  };
  const Block* find_block(int n, int source_degree) const;

  BoundedComplex x_, y_;
  std::map<int, std::vector<Block>> blocks_;
  BoundedComplex complex_;

  friend TotalHom total_hom(const BoundedComplex&, const BoundedComplex&);
};

TotalHom total_hom(const BoundedComplex& x, const BoundedComplex& y);

struct Homology {
  FgModule module;
  Matrix cycle_reps;  // one column of X^n-coordinates per homology generator
};

/// Ker d^n / Im d^{n-1}.
Homology homology_at(const BoundedComplex& x, int n);

/// Matrix of H^n(f) with respect to the homology presentations.
ModuleMap induced_on_homology(const ChainMap& f, const Homology& hx,
                              const Homology& hy, int n);

/// Solves the stacked homotopy equations f = d s + s d for s.
std::optional<Homotopy> null_homotopy(const ChainMap& f);

bool is_contractible(const BoundedComplex& x);

/// Generators of the space of chain maps X -> Y (up to nothing: actual
/// matrices, including those homotopic to zero).
std::vector<ChainMap> chain_map_generators(const BoundedComplex& x,
                                           const BoundedComplex& y);

}  // namespace purederive
