#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace purederive {

using Int = mpz_class;
using Vec = std::vector<Int>;

struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Coefficient ring: the integers, or the integers modulo m (m >= 2).
/// All arithmetic is exact; there is no floating point anywhere downstream.
struct BaseRing {
  enum class Kind { Integers, IntegersMod };

  Kind kind = Kind::Integers;
  Int modulus = 0;  // >= 2 when kind == IntegersMod

  static BaseRing integers() { return BaseRing{Kind::Integers, 0}; }
  static BaseRing integers_mod(Int m);

  bool is_modular() const { return kind == Kind::IntegersMod; }
  bool is_finite() const { return kind == Kind::IntegersMod; }

  /// Canonical representative: least nonnegative residue mod m, or the
  /// integer itself over Z.
  Int reduce(const Int& x) const;

  /// Canonical associate generating the same ideal: |x| over Z,
  /// gcd(x, m) reduced mod m over Z/m.
  Int canonical_associate(const Int& x) const;

  /// A unit u with u * x == canonical_associate(x) in this ring.
  Int associate_unit(const Int& x) const;

  std::string describe() const;

  bool operator==(const BaseRing& o) const {
    return kind == o.kind && modulus == o.modulus;
  }
};

/// Dense matrix over a BaseRing, row-major, entries kept canonical.
class Matrix {
 public:
  Matrix() = default;
  Matrix(BaseRing ring, int rows, int cols);
  Matrix(BaseRing ring, int rows, int cols, std::vector<Int> entries);

  static Matrix identity(BaseRing ring, int n);
  static Matrix from_rows(BaseRing ring, const std::vector<Vec>& rows,
                          int cols);
  static Matrix column(BaseRing ring, const Vec& v);
  static Matrix scalar(BaseRing ring, int n, const Int& c);

  const BaseRing& ring() const { return ring_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const Int& at(int i, int j) const { return entries_[idx(i, j)]; }
  void set(int i, int j, const Int& v) { entries_[idx(i, j)] = ring_.reduce(v); }

  bool is_zero() const;
  bool operator==(const Matrix& o) const;

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  Matrix operator*(const Matrix& o) const;
  Matrix scaled(const Int& c) const;

  Vec apply(const Vec& x) const;  // this * x (column vector)
  Matrix transpose() const;

  Matrix hcat(const Matrix& o) const;
  Matrix vcat(const Matrix& o) const;
  Matrix column_slice(int from, int to) const;  // columns [from, to)
  Matrix row_slice(int from, int to) const;
  Vec col(int j) const;
  Vec row(int i) const;

  /// Drops columns that are identically zero.
  Matrix drop_zero_columns() const;

  std::string describe() const;

 private:
  int idx(int i, int j) const;

  BaseRing ring_;
  int rows_ = 0, cols_ = 0;
  std::vector<Int> entries_;
};

/// Kronecker product (block matrix a_ij * B).  Flat index conventions
/// throughout the project: vec() of an h x g matrix stacks columns, so for
/// unknown F the congruence G*F*H = C reads (H^T (x) G) vec(F) = vec(C).
Matrix kron(const Matrix& a, const Matrix& b);
Vec vectorize(const Matrix& m);             // column-major stacking
Matrix unvectorize(BaseRing ring, int rows, int cols, const Vec& v);

Matrix block_diag(BaseRing ring, const std::vector<Matrix>& blocks);

/// Row Hermite form over Z: same row lattice, zero rows dropped, entries
/// size-reduced.  Returns the input unchanged over Z/m (entries are already
/// canonical residues there).
Matrix row_hnf(const Matrix& m);

/// Column Hermite reduction of a generating set: same column lattice with
/// small canonical generators.
Matrix column_hnf(const Matrix& m);

/// U * A * V = S with S diagonal (up to rectangular padding), U, V invertible
/// over the ring.  Diagonal entries are canonical associates and form a
/// divisibility chain.  invariant_factors collects the nonzero ones
/// (units included).
struct SmithForm {
  Matrix U, S, V;
  Matrix U_inv, V_inv;
  std::vector<Int> invariant_factors;
};

SmithForm smith_normal_form(const Matrix& a);

struct Obstruction {
  int row = -1;
  Int residue;  // nonzero residual witnessing unsolvability at that row
};

struct SolveOutcome {
  std::optional<Vec> solution;          // one solution of A x = b
  Matrix kernel;                        // columns generate {x : A x = 0}
  std::optional<Obstruction> obstruction;  // set when no solution exists
};

/// Solves A x = b over the ring of A (Z: lattice solve via column echelon;
/// Z/m: lifted to Z with m-multiples adjoined).
SolveOutcome solve_linear(const Matrix& a, const Vec& b);

/// Factorization of one coefficient matrix, reusable across many
/// right-hand sides.
class Solver {
 public:
  explicit Solver(Matrix a);

  std::optional<Vec> solve(const Vec& b) const;
  std::optional<Matrix> solve_matrix(const Matrix& b) const;  // columnwise
  const Matrix& kernel() const { return kernel_; }
  const std::optional<Obstruction>& last_obstruction() const {
    return obstruction_;
  }

 private:
  BaseRing ring_;
  int orig_cols_ = 0;
  int work_rows_ = 0;
  Matrix echelon_, trans_;                 // work * trans = echelon
  std::vector<std::pair<int, int>> pivots_;  // (row, col), rows increasing
  Matrix kernel_;
  mutable std::optional<Obstruction> obstruction_;
};

/// Congruence system builder: block variables, equations of the form
///   sum_j C_j x_{block_j} == rhs  (mod column span of a lattice).
/// Compiles to one matrix solve with slack columns per equation group.
class LinearSystem {
 public:
  explicit LinearSystem(BaseRing ring) : ring_(ring) {}

  int add_variables(int count);

  struct Term {
    int var_offset;
    Matrix coeff;  // eq_rows x block_size
  };
  void add_congruence(std::vector<Term> terms, Vec rhs, Matrix lattice);
  void add_equation(std::vector<Term> terms, Vec rhs);

  /// Returns the variable part of a solution, if any.
  std::optional<Vec> solve() const;
  /// Generators of the homogeneous solution space, variable part only.
  Matrix homogeneous_generators() const;

  int variable_count() const { return nvars_; }

 private:
  struct Group {
    std::vector<Term> terms;
    Vec rhs;
    Matrix lattice;
  };
  Matrix compile(Vec& rhs_out) const;

  BaseRing ring_;
  int nvars_ = 0;
  std::vector<Group> groups_;
};

}  // namespace purederive
