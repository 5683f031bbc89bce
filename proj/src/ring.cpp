#include "purederive/ring.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace purederive {

BaseRing BaseRing::integers_mod(Int m) {
  if (m < 2) throw std::invalid_argument("modulus must be >= 2");
  return BaseRing{Kind::IntegersMod, std::move(m)};
}

Int BaseRing::reduce(const Int& x) const {
  if (kind == Kind::Integers) return x;
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

Int BaseRing::canonical_associate(const Int& x) const {
  if (kind == Kind::Integers) return abs(x);
  Int g = gcd(x, modulus);
  return reduce(g);  // gcd(0, m) = m reduces to 0
}

Int BaseRing::associate_unit(const Int& x) const {
  if (kind == Kind::Integers) return x < 0 ? Int(-1) : Int(1);
  Int a = reduce(x);
  if (a == 0) return Int(1);
  Int g = gcd(a, modulus);
  // a/g is invertible mod m/g; lift to a unit mod m by adding multiples
  // of m/g until coprime to m.
  Int base = a / g, step = modulus / g, u = base;
  while (gcd(u, modulus) != 1) u += step;
  Int ui;
  if (mpz_invert(ui.get_mpz_t(), u.get_mpz_t(), modulus.get_mpz_t()) == 0)
    throw std::logic_error("associate_unit: inversion failed");
  return reduce(ui);
}

std::string BaseRing::describe() const {
  if (kind == Kind::Integers) return "Z";
  return "Z/" + modulus.get_str();
}

Matrix::Matrix(BaseRing ring, int rows, int cols)
    : ring_(ring), rows_(rows), cols_(cols),
      entries_(static_cast<size_t>(rows) * cols, Int(0)) {
  if (rows < 0 || cols < 0) throw ShapeMismatch("negative dimension");
}

Matrix::Matrix(BaseRing ring, int rows, int cols, std::vector<Int> entries)
    : ring_(ring), rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 0 || cols < 0 ||
      entries_.size() != static_cast<size_t>(rows) * cols)
    throw ShapeMismatch("entry count does not match shape");
  for (auto& e : entries_) e = ring_.reduce(e);
}

int Matrix::idx(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw ShapeMismatch("matrix index out of range");
  return i * cols_ + j;
}

Matrix Matrix::identity(BaseRing ring, int n) {
  Matrix m(ring, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

Matrix Matrix::scalar(BaseRing ring, int n, const Int& c) {
  Matrix m(ring, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, c);
  return m;
}

Matrix Matrix::from_rows(BaseRing ring, const std::vector<Vec>& rows,
                         int cols) {
  Matrix m(ring, static_cast<int>(rows.size()), cols);
  for (int i = 0; i < m.rows_; ++i) {
    if (static_cast<int>(rows[i].size()) != cols)
      throw ShapeMismatch("row length mismatch");
    for (int j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

Matrix Matrix::column(BaseRing ring, const Vec& v) {
  Matrix m(ring, static_cast<int>(v.size()), 1);
  for (int i = 0; i < m.rows_; ++i) m.set(i, 0, v[i]);
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Int& e) { return e == 0; });
}

bool Matrix::operator==(const Matrix& o) const {
  return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ &&
         entries_ == o.entries_;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw ShapeMismatch("matrix addition shape mismatch");
  Matrix r(ring_, rows_, cols_);
  for (size_t k = 0; k < entries_.size(); ++k)
    r.entries_[k] = ring_.reduce(entries_[k] + o.entries_[k]);
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + (-o); }

Matrix Matrix::operator-() const {
  Matrix r(ring_, rows_, cols_);
  for (size_t k = 0; k < entries_.size(); ++k)
    r.entries_[k] = ring_.reduce(-entries_[k]);
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw ShapeMismatch("matrix product shape mismatch");
  Matrix r(ring_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Int& a = entries_[i * cols_ + k];
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        Int& t = r.entries_[i * o.cols_ + j];
        t += a * o.entries_[k * o.cols_ + j];
      }
    }
  for (auto& e : r.entries_) e = ring_.reduce(e);
  return r;
}

Matrix Matrix::scaled(const Int& c) const {
  Matrix r(ring_, rows_, cols_);
  for (size_t k = 0; k < entries_.size(); ++k)
    r.entries_[k] = ring_.reduce(entries_[k] * c);
  return r;
}

Vec Matrix::apply(const Vec& x) const {
  if (static_cast<int>(x.size()) != cols_)
    throw ShapeMismatch("matrix apply shape mismatch");
  Vec y(rows_, Int(0));
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) y[i] += entries_[i * cols_ + j] * x[j];
    y[i] = ring_.reduce(y[i]);
  }
  return y;
}

Matrix Matrix::transpose() const {
  Matrix r(ring_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.entries_[j * rows_ + i] = entries_[i * cols_ + j];
  return r;
}

Matrix Matrix::hcat(const Matrix& o) const {
  if (rows_ != o.rows_) throw ShapeMismatch("hcat row mismatch");
  Matrix r(ring_, rows_, cols_ + o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) r.entries_[i * r.cols_ + j] = at(i, j);
    for (int j = 0; j < o.cols_; ++j)
      r.entries_[i * r.cols_ + cols_ + j] = o.at(i, j);
  }
  return r;
}

Matrix Matrix::vcat(const Matrix& o) const {
  if (cols_ != o.cols_) throw ShapeMismatch("vcat column mismatch");
  Matrix r(ring_, rows_ + o.rows_, cols_);
  std::copy(entries_.begin(), entries_.end(), r.entries_.begin());
  std::copy(o.entries_.begin(), o.entries_.end(),
            r.entries_.begin() + entries_.size());
  return r;
}

Matrix Matrix::column_slice(int from, int to) const {
  if (from < 0 || to > cols_ || from > to)
    throw ShapeMismatch("column_slice range");
  Matrix r(ring_, rows_, to - from);
  for (int i = 0; i < rows_; ++i)
    for (int j = from; j < to; ++j)
      r.entries_[i * r.cols_ + (j - from)] = at(i, j);
  return r;
}

Matrix Matrix::row_slice(int from, int to) const {
  if (from < 0 || to > rows_ || from > to) throw ShapeMismatch("row_slice range");
  Matrix r(ring_, to - from, cols_);
  for (int i = from; i < to; ++i)
    for (int j = 0; j < cols_; ++j) r.entries_[(i - from) * cols_ + j] = at(i, j);
  return r;
}

Vec Matrix::col(int j) const {
  Vec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

Vec Matrix::row(int i) const {
  Vec v(cols_);
  for (int j = 0; j < cols_; ++j) v[j] = at(i, j);
  return v;
}

Matrix Matrix::drop_zero_columns() const {
  std::vector<int> keep;
  for (int j = 0; j < cols_; ++j) {
    bool zero = true;
    for (int i = 0; i < rows_ && zero; ++i) zero = (at(i, j) == 0);
    if (!zero) keep.push_back(j);
  }
  Matrix r(ring_, rows_, static_cast<int>(keep.size()));
  for (int i = 0; i < rows_; ++i)
    for (size_t j = 0; j < keep.size(); ++j)
      r.entries_[i * r.cols_ + j] = at(i, keep[j]);
  return r;
}

std::string Matrix::describe() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j).get_str();
  }
  os << "]";
  return os.str();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix r(a.ring(), a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (a.at(i, j) == 0) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          r.set(i * b.rows() + k, j * b.cols() + l, a.at(i, j) * b.at(k, l));
    }
  return r;
}

Vec vectorize(const Matrix& m) {
  Vec v(static_cast<size_t>(m.rows()) * m.cols());
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) v[j * m.rows() + i] = m.at(i, j);
  return v;
}

Matrix unvectorize(BaseRing ring, int rows, int cols, const Vec& v) {
  if (static_cast<int>(v.size()) != rows * cols)
    throw ShapeMismatch("unvectorize size mismatch");
  Matrix m(ring, rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m.set(i, j, v[j * rows + i]);
  return m;
}

Matrix block_diag(BaseRing ring, const std::vector<Matrix>& blocks) {
  int rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix r(ring, rows, cols);
  int ro = 0, co = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) r.set(ro + i, co + j, b.at(i, j));
    ro += b.rows();
    co += b.cols();
  }
  return r;
}

namespace {

// Nearest-integer quotient, used to limit entry growth during elimination.
Int round_div(const Int& a, const Int& b) {
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int babs = abs(b);
  if (2 * r > babs) q += 1;
  return q;
}

// Plain integer matrix used for the elimination kernels (always over Z).
struct ZMat {
  int rows = 0, cols = 0;
  std::vector<Int> e;

  ZMat(int r, int c) : rows(r), cols(c), e(static_cast<size_t>(r) * c, Int(0)) {}
  Int& at(int i, int j) { return e[static_cast<size_t>(i) * cols + j]; }
  const Int& at(int i, int j) const {
    return e[static_cast<size_t>(i) * cols + j];
  }
  static ZMat identity(int n) {
    ZMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  void swap_rows(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < cols; ++j) std::swap(at(a, j), at(b, j));
  }
  void swap_cols(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < rows; ++i) std::swap(at(i, a), at(i, b));
  }
  void row_axpy(int dst, int src, const Int& c) {  // row dst += c * row src
    if (c == 0) return;
    for (int j = 0; j < cols; ++j) at(dst, j) += c * at(src, j);
  }
  void col_axpy(int dst, int src, const Int& c) {
    if (c == 0) return;
    for (int i = 0; i < rows; ++i) at(i, dst) += c * at(i, src);
  }
  void negate_row(int r) {
    for (int j = 0; j < cols; ++j) at(r, j) = -at(r, j);
  }
  void negate_col(int c) {
    for (int i = 0; i < rows; ++i) at(i, c) = -at(i, c);
  }
};

ZMat lift(const Matrix& m) {
  ZMat z(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) z.at(i, j) = m.at(i, j);
  return z;
}

Matrix lower(BaseRing ring, const ZMat& z) {
  Matrix m(ring, z.rows, z.cols);
  for (int i = 0; i < z.rows; ++i)
    for (int j = 0; j < z.cols; ++j) m.set(i, j, z.at(i, j));
  return m;
}

// Column echelon over Z: work * V = H with V unimodular, pivot columns
// leading, trailing columns of H identically zero.
struct Echelon {
  ZMat h, v;
  std::vector<std::pair<int, int>> pivots;  // (row, col) with rows increasing

  explicit Echelon(ZMat a) : h(std::move(a)), v(ZMat::identity(h.cols)) {
    int pc = 0;
    for (int r = 0; r < h.rows && pc < h.cols; ++r) {
      while (true) {
        int best = -1;
        for (int j = pc; j < h.cols; ++j)
          if (h.at(r, j) != 0 &&
              (best < 0 || abs(h.at(r, j)) < abs(h.at(r, best))))
            best = j;
        if (best < 0) break;  // row has no pivot among remaining columns
        h.swap_cols(pc, best);
        v.swap_cols(pc, best);
        bool clean = true;
        for (int j = pc + 1; j < h.cols; ++j) {
          if (h.at(r, j) == 0) continue;
          Int q = round_div(h.at(r, j), h.at(r, pc));
          h.col_axpy(j, pc, -q);
          v.col_axpy(j, pc, -q);
          if (h.at(r, j) != 0) clean = false;
        }
        if (clean) {
          if (h.at(r, pc) < 0) {
            h.negate_col(pc);
            v.negate_col(pc);
          }
          pivots.emplace_back(r, pc);
          ++pc;
          break;
        }
      }
    }
  }
};

// Integer row Hermite form: lower rows eliminated column by column with
// nearest-quotient reduction, entries above each pivot reduced mod the
// pivot, pivots positive, zero rows dropped.
ZMat zmat_row_hnf(ZMat m) {
  int pr = 0;
  for (int col = 0; col < m.cols && pr < m.rows; ++col) {
    while (true) {
      int best = -1;
      for (int i = pr; i < m.rows; ++i)
        if (m.at(i, col) != 0 &&
            (best < 0 || abs(m.at(i, col)) < abs(m.at(best, col))))
          best = i;
      if (best < 0) break;
      m.swap_rows(pr, best);
      bool clean = true;
      for (int i = pr + 1; i < m.rows; ++i) {
        if (m.at(i, col) == 0) continue;
        Int q = round_div(m.at(i, col), m.at(pr, col));
        m.row_axpy(i, pr, -q);
        if (m.at(i, col) != 0) clean = false;
      }
      if (!clean) continue;
      if (m.at(pr, col) < 0) m.negate_row(pr);
      for (int i = 0; i < pr; ++i) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), m.at(i, col).get_mpz_t(),
                   m.at(pr, col).get_mpz_t());
        m.row_axpy(i, pr, -q);
      }
      ++pr;
      break;
    }
  }
  ZMat out(pr, m.cols);
  for (int i = 0; i < pr; ++i)
    for (int j = 0; j < m.cols; ++j) out.at(i, j) = m.at(i, j);
  return out;
}

}  // namespace

Matrix row_hnf(const Matrix& m) {
  if (m.ring().is_modular()) return m;
  ZMat h = zmat_row_hnf(lift(m));
  return lower(m.ring(), h);
}

Matrix column_hnf(const Matrix& m) {
  if (m.ring().is_modular()) return m.drop_zero_columns();
  return row_hnf(m.transpose()).transpose();
}

SmithForm smith_normal_form(const Matrix& a) {
  const BaseRing& ring = a.ring();
  ZMat s = lift(a);
  ZMat u = ZMat::identity(a.rows()), ui = ZMat::identity(a.rows());
  ZMat v = ZMat::identity(a.cols()), vi = ZMat::identity(a.cols());

  auto row_op = [&](int dst, int src, const Int& c) {
    s.row_axpy(dst, src, c);
    u.row_axpy(dst, src, c);
    ui.col_axpy(src, dst, -c);  // inverse of the elementary op
  };
  auto col_op = [&](int dst, int src, const Int& c) {
    s.col_axpy(dst, src, c);
    v.col_axpy(dst, src, c);
    vi.row_axpy(src, dst, -c);
  };
  auto swap_rows = [&](int x, int y) {
    s.swap_rows(x, y);
    u.swap_rows(x, y);
    ui.swap_cols(x, y);
  };
  auto swap_cols = [&](int x, int y) {
    s.swap_cols(x, y);
    v.swap_cols(x, y);
    vi.swap_rows(x, y);
  };

  int n = std::min(a.rows(), a.cols());
  for (int t = 0; t < n; ++t) {
    // locate a minimal nonzero entry in the trailing block
    int bi = -1, bj = -1;
    for (int i = t; i < s.rows; ++i)
      for (int j = t; j < s.cols; ++j)
        if (s.at(i, j) != 0 &&
            (bi < 0 || abs(s.at(i, j)) < abs(s.at(bi, bj)))) {
          bi = i;
          bj = j;
        }
    if (bi < 0) break;
    swap_rows(t, bi);
    swap_cols(t, bj);

    while (true) {
      bool dirty = false;
      for (int i = t + 1; i < s.rows; ++i) {
        if (s.at(i, t) == 0) continue;
        Int q = round_div(s.at(i, t), s.at(t, t));
        row_op(i, t, -q);
        if (s.at(i, t) != 0) {
          swap_rows(t, i);
          dirty = true;
        }
      }
      if (dirty) continue;
      for (int j = t + 1; j < s.cols; ++j) {
        if (s.at(t, j) == 0) continue;
        Int q = round_div(s.at(t, j), s.at(t, t));
        col_op(j, t, -q);
        if (s.at(t, j) != 0) {
          swap_cols(t, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // divisibility fixup: fold in any entry the pivot does not divide
      bool fixed = false;
      for (int i = t + 1; i < s.rows && !fixed; ++i)
        for (int j = t + 1; j < s.cols && !fixed; ++j)
          if (s.at(i, j) % s.at(t, t) != 0) {
            row_op(t, i, 1);
            fixed = true;
          }
      if (!fixed) break;
    }
    if (s.at(t, t) < 0) {
      s.negate_row(t);
      u.negate_row(t);
      ui.negate_col(t);
    }
  }

  SmithForm out;
  out.U = lower(ring, u);
  out.U_inv = lower(ring, ui);
  out.V = lower(ring, v);
  out.V_inv = lower(ring, vi);
  out.S = lower(ring, s);

  if (ring.is_modular()) {
    // Scale pivot rows by units so the diagonal carries canonical associates.
    for (int t = 0; t < n; ++t) {
      Int d = out.S.at(t, t);
      Int w = ring.associate_unit(d);
      if (w != 1) {
        for (int j = 0; j < out.S.cols(); ++j)
          out.S.set(t, j, out.S.at(t, j) * w);
        for (int j = 0; j < out.U.cols(); ++j)
          out.U.set(t, j, out.U.at(t, j) * w);
        Int wi;
        mpz_invert(wi.get_mpz_t(), w.get_mpz_t(), ring.modulus.get_mpz_t());
        for (int i = 0; i < out.U_inv.rows(); ++i)
          out.U_inv.set(i, t, out.U_inv.at(i, t) * wi);
      }
    }
  }
  for (int t = 0; t < n; ++t) {
    Int d = out.S.at(t, t);
    if (d != 0) out.invariant_factors.push_back(d);
  }
  return out;
}

Solver::Solver(Matrix a) : ring_(a.ring()), orig_cols_(a.cols()) {
  Matrix work = a;
  if (ring_.is_modular()) {
    // adjoin m * I so that solving over Z realizes congruences mod m
    work = a.hcat(Matrix::scalar(ring_, a.rows(), 0));
    ZMat z = lift(a);
    ZMat aug(a.rows(), a.cols() + a.rows());
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
      aug.at(i, a.cols() + i) = ring_.modulus;
    }
    Echelon e(std::move(aug));
    work_rows_ = a.rows();
    echelon_ = lower(BaseRing::integers(), e.h);
    trans_ = lower(BaseRing::integers(), e.v);
    pivots_ = e.pivots;
  } else {
    Echelon e(lift(a));
    work_rows_ = a.rows();
    echelon_ = lower(BaseRing::integers(), e.h);
    trans_ = lower(BaseRing::integers(), e.v);
    pivots_ = e.pivots;
  }

  // kernel generators: transformation columns past the last pivot,
  // Hermite-reduced so downstream lattices stay small
  int k = static_cast<int>(pivots_.size());
  Matrix free_cols = trans_.column_slice(k, trans_.cols());
  if (ring_.is_modular()) {
    Matrix proj = free_cols.row_slice(0, orig_cols_);
    Matrix red(ring_, proj.rows(), proj.cols());
    for (int i = 0; i < proj.rows(); ++i)
      for (int j = 0; j < proj.cols(); ++j) red.set(i, j, proj.at(i, j));
    kernel_ = red.drop_zero_columns();
  } else {
    Matrix raw(ring_, orig_cols_, free_cols.cols());
    for (int i = 0; i < orig_cols_; ++i)
      for (int j = 0; j < free_cols.cols(); ++j)
        raw.set(i, j, free_cols.at(i, j));
    kernel_ = column_hnf(raw);
  }
}

std::optional<Vec> Solver::solve(const Vec& b) const {
  if (static_cast<int>(b.size()) != work_rows_)
    throw ShapeMismatch("solve rhs length mismatch");
  obstruction_.reset();
  Vec residual(b);
  for (auto& r : residual) {
    // lift to Z representatives
    r = ring_.is_modular() ? ring_.reduce(r) : r;
  }
  int k = static_cast<int>(pivots_.size());
  Vec y(trans_.cols(), Int(0));
  size_t next_pivot = 0;
  for (int r = 0; r < work_rows_; ++r) {
    if (next_pivot < pivots_.size() && pivots_[next_pivot].first == r) {
      int c = pivots_[next_pivot].second;
      const Int& d = echelon_.at(r, c);
      Int q, rem;
      mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), residual[r].get_mpz_t(),
                  d.get_mpz_t());
      if (rem != 0) {
        obstruction_ = Obstruction{r, rem};
        return std::nullopt;
      }
      y[c] = q;
      if (q != 0)
        for (int i = r; i < work_rows_; ++i)
          residual[i] -= q * echelon_.at(i, c);
      ++next_pivot;
    } else if (residual[r] != 0) {
      obstruction_ = Obstruction{r, residual[r]};
      return std::nullopt;
    }
  }
  (void)k;
  Vec x(orig_cols_);
  for (int i = 0; i < orig_cols_; ++i) {
    Int acc = 0;
    for (int j = 0; j < trans_.cols(); ++j)
      if (y[j] != 0) acc += trans_.at(i, j) * y[j];
    x[i] = ring_.reduce(acc);
  }
  if (!ring_.is_modular()) {
    // size-reduce the particular solution against the kernel lattice
    for (int j = 0; j < kernel_.cols(); ++j) {
      int lead = -1;
      for (int i = 0; i < kernel_.rows(); ++i)
        if (kernel_.at(i, j) != 0) {
          lead = i;
          break;
        }
      if (lead < 0) continue;
      Int q, r2;
      mpz_fdiv_qr(q.get_mpz_t(), r2.get_mpz_t(), x[lead].get_mpz_t(),
                  kernel_.at(lead, j).get_mpz_t());
      if (2 * r2 > kernel_.at(lead, j)) q += 1;
      if (q != 0)
        for (int i = 0; i < kernel_.rows(); ++i)
          x[i] -= q * kernel_.at(i, j);
    }
  }
  return x;
}

std::optional<Matrix> Solver::solve_matrix(const Matrix& b) const {
  Matrix out(ring_, orig_cols_, b.cols());
  for (int j = 0; j < b.cols(); ++j) {
    auto x = solve(b.col(j));
    if (!x) return std::nullopt;
    for (int i = 0; i < orig_cols_; ++i) out.set(i, j, (*x)[i]);
  }
  return out;
}

SolveOutcome solve_linear(const Matrix& a, const Vec& b) {
  if (static_cast<int>(b.size()) != a.rows())
    throw ShapeMismatch("solve_linear shape mismatch");
  Solver s(a);
  SolveOutcome out;
  out.kernel = s.kernel();
  out.solution = s.solve(b);
  if (!out.solution) out.obstruction = s.last_obstruction();
  return out;
}

int LinearSystem::add_variables(int count) {
  int offset = nvars_;
  nvars_ += count;
  return offset;
}

void LinearSystem::add_congruence(std::vector<Term> terms, Vec rhs,
                                  Matrix lattice) {
  int rows = static_cast<int>(rhs.size());
  for (const auto& t : terms)
    if (t.coeff.rows() != rows)
      throw ShapeMismatch("congruence term row mismatch");
  if (lattice.cols() > 0 && lattice.rows() != rows)
    throw ShapeMismatch("congruence lattice row mismatch");
  groups_.push_back(Group{std::move(terms), std::move(rhs), std::move(lattice)});
}

void LinearSystem::add_equation(std::vector<Term> terms, Vec rhs) {
  Matrix empty(ring_, static_cast<int>(rhs.size()), 0);
  add_congruence(std::move(terms), std::move(rhs), std::move(empty));
}

Matrix LinearSystem::compile(Vec& rhs_out) const {
  int total_rows = 0, slack_cols = 0;
  for (const auto& g : groups_) {
    total_rows += static_cast<int>(g.rhs.size());
    slack_cols += g.lattice.cols();
  }
  Matrix m(ring_, total_rows, nvars_ + slack_cols);
  rhs_out.assign(total_rows, Int(0));
  int r0 = 0, s0 = nvars_;
  for (const auto& g : groups_) {
    int rows = static_cast<int>(g.rhs.size());
    for (const auto& t : g.terms)
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < t.coeff.cols(); ++j) {
          if (t.coeff.at(i, j) == 0) continue;
          m.set(r0 + i, t.var_offset + j,
                m.at(r0 + i, t.var_offset + j) + t.coeff.at(i, j));
        }
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < g.lattice.cols(); ++j)
        m.set(r0 + i, s0 + j, g.lattice.at(i, j));
    for (int i = 0; i < rows; ++i) rhs_out[r0 + i] = g.rhs[i];
    r0 += rows;
    s0 += g.lattice.cols();
  }
  return m;
}

std::optional<Vec> LinearSystem::solve() const {
  Vec rhs;
  Matrix m = compile(rhs);
  Solver s(m);
  auto x = s.solve(rhs);
  if (!x) return std::nullopt;
  Vec vars(x->begin(), x->begin() + nvars_);
  return vars;
}

Matrix LinearSystem::homogeneous_generators() const {
  Vec rhs;
  Matrix m = compile(rhs);
  Solver s(m);
  Matrix full = s.kernel();
  Matrix vars(ring_, nvars_, full.cols());
  for (int i = 0; i < nvars_; ++i)
    for (int j = 0; j < full.cols(); ++j) vars.set(i, j, full.at(i, j));
  return vars.drop_zero_columns();
}

}  // namespace purederive
