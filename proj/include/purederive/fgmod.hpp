#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "purederive/ring.hpp"

namespace purederive {

struct IllFormedMap : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotExact : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class FgModule;
class ModuleMap;

/// Complete isomorphism invariant: M = R^free_rank (+) sum_i R/(factors[i])
/// with factors the prime-power elementary divisors, sorted ascending
/// (free_rank is 0 over Z/m, where every factor divides m).
struct CanonicalForm {
  int free_rank = 0;
  std::vector<Int> factors;

  bool operator==(const CanonicalForm& o) const = default;
  bool is_zero() const { return free_rank == 0 && factors.empty(); }
  bool is_finite() const { return free_rank == 0; }
  Int torsion_exponent() const;  // lcm of factors (1 if none)
  Int element_count() const;     // finite modules only
  std::string describe() const;
};

/// Finitely generated module presented by generators and relations
/// (each relation is one row of the relation matrix).
class FgModule {
 public:
  FgModule() = default;
  FgModule(BaseRing ring, int generators, Matrix relations);

  static FgModule free_module(BaseRing ring, int rank);
  static FgModule cyclic(BaseRing ring, const Int& order);  // R/(order)
  static FgModule zero(BaseRing ring);

  const BaseRing& ring() const { return ring_; }
  int generators() const { return generators_; }
  const Matrix& relations() const { return relations_; }
  Matrix relation_columns() const { return relations_.transpose(); }

  const CanonicalForm& canonical_form() const;
  /// Companion invariant-factor presentation plus witness maps; the witness
  /// compositions are the identity in both directions.
  const FgModule& canonical_module() const;
  ModuleMap to_canonical() const;
  ModuleMap from_canonical() const;

  bool is_zero_module() const { return canonical_form().is_zero(); }
  bool is_finite() const {
    return ring_.is_finite() || canonical_form().is_finite();
  }
  bool is_isomorphic_to(const FgModule& o) const;

  /// Canonical coordinates of an element (free part unchanged, torsion part
  /// reduced mod its factor); equal elements get equal canonical coords.
  Vec canonical_coords(const Vec& coords) const;
  bool element_is_zero(const Vec& coords) const;
  bool elements_equal(const Vec& a, const Vec& b) const;

 private:
  struct Canon;

  BaseRing ring_;
  int generators_ = 0;
  Matrix relations_;
  std::shared_ptr<const Canon> canon_;
};

/// Morphism of FgModules given by a matrix on generators
/// (codomain generators x domain generators, elements as column vectors).
class ModuleMap {
 public:
  ModuleMap() = default;
  ModuleMap(FgModule domain, FgModule codomain, Matrix matrix);

  static ModuleMap identity(const FgModule& m);
  static ModuleMap zero_map(const FgModule& domain, const FgModule& codomain);

  const FgModule& domain() const { return domain_; }
  const FgModule& codomain() const { return codomain_; }
  const Matrix& matrix() const { return matrix_; }

  /// The matrix must carry every domain relation into the codomain
  /// relation lattice.
  bool is_well_defined() const;
  void require_well_defined() const;

  bool is_zero_map() const;
  bool equals(const ModuleMap& o) const;  // as maps, not as matrices

  Vec apply(const Vec& x) const { return matrix_.apply(x); }
  ModuleMap compose(const ModuleMap& inner) const;  // this . inner
  ModuleMap operator+(const ModuleMap& o) const;
  ModuleMap operator-(const ModuleMap& o) const;
  ModuleMap scaled(const Int& c) const;

 private:
  FgModule domain_, codomain_;
  Matrix matrix_;
};

/// Presents the span of `gens` columns (inside an ambient free module)
/// modulo the ambient lattice spanned by `null_lattice` columns.
FgModule present_span(BaseRing ring, const Matrix& gens,
                      const Matrix& null_lattice);

struct KernelData {
  FgModule module;
  ModuleMap inclusion;  // module -> domain of the mapped-over morphism
};
struct ImageData {
  FgModule module;
  ModuleMap onto;       // domain ->> image (coordinate projection)
  ModuleMap embedding;  // image -> codomain
};
struct CokernelData {
  FgModule module;
  ModuleMap projection;  // codomain ->> cokernel
};

struct MapParts {
  KernelData kernel;
  ImageData image;
  CokernelData cokernel;
};

/// Kernel, image (with epi-mono factorization) and cokernel of a morphism.
MapParts map_subquotients(const ModuleMap& f);

KernelData kernel_of(const ModuleMap& f);
CokernelData cokernel_of(const ModuleMap& f);

/// Hom(M, N) as an FgModule over the same (commutative) ring, together with
/// the evaluation dictionary between its elements and actual morphisms.
class HomModule {
 public:
  HomModule(const FgModule& m, const FgModule& n);

  const FgModule& module() const { return module_; }
  const FgModule& hom_domain() const { return m_; }
  const FgModule& hom_codomain() const { return n_; }

  ModuleMap decode(const Vec& coords) const;
  Vec encode(const ModuleMap& f) const;
  /// Matrix of a generator of Hom(M, N).
  const Matrix& basis_map(int k) const { return basis_maps_[k]; }

 private:
  FgModule m_, n_;
  FgModule module_;
  std::vector<Matrix> basis_maps_;
  Matrix hom_lattice_;  // (n.gens * m.gens) x module.gens, vectorized maps
  std::shared_ptr<Solver> encoder_;
};

HomModule hom_module(const FgModule& m, const FgModule& n);

struct TensorModule {
  FgModule module;  // generators indexed by (i, j) -> i * n_gens + j
  int left_gens = 0, right_gens = 0;
  int pair_index(int i, int j) const { return i * right_gens + j; }
};

TensorModule tensor_module(const FgModule& m, const FgModule& n);

/// Induced map f (x) g on tensor presentations built by tensor_module.
ModuleMap tensor_map(const ModuleMap& f, const ModuleMap& g,
                     const TensorModule& source, const TensorModule& target);

struct DirectSum {
  FgModule module;
  std::vector<ModuleMap> injections;
  std::vector<ModuleMap> projections;
};

DirectSum direct_sum(const std::vector<FgModule>& parts);

struct ShortExactSequence {
  ModuleMap inclusion;   // A -> B
  ModuleMap projection;  // B -> C
};

/// Empty result means the sequence is exact; otherwise the reason.
std::optional<std::string> check_exactness(const ShortExactSequence& s);

struct SplitAnalysis {
  bool split = false;
  std::optional<ModuleMap> retraction;  // B -> A with r . incl = id
  std::optional<ModuleMap> section;     // C -> B with proj . s = id
  std::string obstruction;              // set when not split
};

/// Decides splitness of a verified short exact sequence by searching for a
/// retraction.  Throws NotExact if the input is not exact.
SplitAnalysis split_analysis(const ShortExactSequence& s);

struct PurityClass {
  bool pure_projective = true;
  enum class Injectivity { Yes, No, Unsupported } pure_injective;
  std::string justification;
};

/// Def-level classification of a single module: finitely generated modules
/// over the supported rings are pure projective; pure injectivity holds
/// exactly for finite modules (free Z-summands admit a non-split pure
/// extension certified in the tower layer).
PurityClass purity_class(const FgModule& m);

}  // namespace purederive
