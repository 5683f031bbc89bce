#include "purederive/complex.hpp"

#include <algorithm>

namespace purederive {

BoundedComplex::BoundedComplex(BaseRing ring)
    : ring_(ring), zero_(FgModule::zero(ring)) {}

BoundedComplex::BoundedComplex(BaseRing ring, int low,
                               std::vector<FgModule> terms,
                               std::vector<ModuleMap> differentials)
    : ring_(ring), low_(low), terms_(std::move(terms)),
      diffs_(std::move(differentials)), zero_(FgModule::zero(ring)) {
  if (!terms_.empty() && diffs_.size() + 1 != terms_.size())
    throw ShapeMismatch("need one differential between consecutive terms");
  for (size_t i = 0; i + 1 < terms_.size(); ++i) {
    if (diffs_[i].domain().generators() != terms_[i].generators() ||
        diffs_[i].codomain().generators() != terms_[i + 1].generators())
      throw ShapeMismatch("differential endpoints do not match the terms");
  }
  // trim zero terms at both ends so the support is canonical
  size_t lo = 0, hi = terms_.size();
  while (lo < hi && terms_[lo].is_zero_module()) ++lo;
  while (hi > lo && terms_[hi - 1].is_zero_module()) --hi;
  if (lo > 0 || hi < terms_.size()) {
    low_ += static_cast<int>(lo);
    terms_ = std::vector<FgModule>(terms_.begin() + lo, terms_.begin() + hi);
    diffs_ = hi > lo + 1
                 ? std::vector<ModuleMap>(diffs_.begin() + lo,
                                          diffs_.begin() + (hi - 1))
                 : std::vector<ModuleMap>{};
  }
  if (terms_.empty()) low_ = 0;
}

BoundedComplex BoundedComplex::stalk(const FgModule& m, int degree) {
  return BoundedComplex(m.ring(), degree, {m}, {});
}

const FgModule& BoundedComplex::term(int n) const {
  if (n < low_ || n > high_degree()) return zero_;
  return terms_[n - low_];
}

ModuleMap BoundedComplex::differential(int n) const {
  if (n >= low_ && n < high_degree()) return diffs_[n - low_];
  return ModuleMap::zero_map(term(n), term(n + 1));
}

BoundedComplex::Validation BoundedComplex::validate() const {
  for (int n = low_; n < high_degree(); ++n) {
    ModuleMap d = differential(n);
    if (!d.is_well_defined())
      return {false, n, "differential is not a well-defined module map"};
  }
  for (int n = low_ + 1; n < high_degree(); ++n) {
    if (!differential(n).compose(differential(n - 1)).is_zero_map())
      return {false, n, "d o d != 0"};
  }
  return {};
}

bool BoundedComplex::equals(const BoundedComplex& o) const {
  if (!(ring_ == o.ring_) || low_ != o.low_ || terms_.size() != o.terms_.size())
    return false;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].generators() != o.terms_[i].generators() ||
        !(terms_[i].relations() == o.terms_[i].relations()))
      return false;
  }
  for (size_t i = 0; i < diffs_.size(); ++i)
    if (!(diffs_[i].matrix() == o.diffs_[i].matrix())) return false;
  return true;
}

BoundedComplex shift(const BoundedComplex& x, int k) {
  if (x.is_zero()) return x;
  std::vector<FgModule> terms;
  std::vector<ModuleMap> diffs;
  for (int n = x.low_degree(); n <= x.high_degree(); ++n)
    terms.push_back(x.term(n));
  for (int n = x.low_degree(); n < x.high_degree(); ++n) {
    ModuleMap d = x.differential(n);
    diffs.push_back(k % 2 == 0 ? d : d.scaled(-1));
  }
  return BoundedComplex(x.ring(), x.low_degree() - k, std::move(terms),
                        std::move(diffs));
}

ChainMap::ChainMap(BoundedComplex source, BoundedComplex target,
                   std::map<int, ModuleMap> components)
    : source_(std::move(source)), target_(std::move(target)),
      components_(std::move(components)) {
  for (auto& [n, f] : components_) {
    if (f.domain().generators() != source_.term(n).generators() ||
        f.codomain().generators() != target_.term(n).generators())
      throw ShapeMismatch("chain map component shape mismatch at degree " +
                          std::to_string(n));
  }
}

ChainMap ChainMap::identity(const BoundedComplex& x) {
  std::map<int, ModuleMap> comps;
  for (int n = x.low_degree(); n <= x.high_degree(); ++n)
    comps.emplace(n, ModuleMap::identity(x.term(n)));
  return ChainMap(x, x, std::move(comps));
}

ChainMap ChainMap::zero(const BoundedComplex& source,
                        const BoundedComplex& target) {
  return ChainMap(source, target, {});
}

ModuleMap ChainMap::component(int n) const {
  auto it = components_.find(n);
  if (it != components_.end()) return it->second;
  return ModuleMap::zero_map(source_.term(n), target_.term(n));
}

std::optional<std::string> ChainMap::validate() const {
  int lo = std::min(source_.low_degree(), target_.low_degree()) - 1;
  int hi = std::max(source_.high_degree(), target_.high_degree()) + 1;
  for (int n = lo; n <= hi; ++n) {
    ModuleMap f = component(n);
    if (!f.is_well_defined())
      return "component at degree " + std::to_string(n) + " ill-formed";
    ModuleMap square = target_.differential(n).compose(f) -
                       component(n + 1).compose(source_.differential(n));
    if (!square.is_zero_map())
      return "square at degree " + std::to_string(n) + " does not commute";
  }
  return std::nullopt;
}

ChainMap ChainMap::compose(const ChainMap& inner) const {
  std::map<int, ModuleMap> comps;
  int lo = std::min(inner.source_.low_degree(), source_.low_degree());
  int hi = std::max(inner.source_.high_degree(), source_.high_degree());
  for (int n = lo; n <= hi; ++n) {
    if (inner.source_.term(n).generators() == 0 ||
        target_.term(n).generators() == 0)
      continue;
    comps.emplace(n, component(n).compose(inner.component(n)));
  }
  return ChainMap(inner.source_, target_, std::move(comps));
}

ChainMap ChainMap::operator+(const ChainMap& o) const {
  std::map<int, ModuleMap> comps;
  int lo = std::min(source_.low_degree(), o.source_.low_degree());
  int hi = std::max(source_.high_degree(), o.source_.high_degree());
  for (int n = lo; n <= hi; ++n) {
    if (source_.term(n).generators() == 0 || target_.term(n).generators() == 0)
      continue;
    comps.emplace(n, component(n) + o.component(n));
  }
  return ChainMap(source_, target_, std::move(comps));
}

ChainMap ChainMap::operator-(const ChainMap& o) const {
  return *this + o.scaled(-1);
}

ChainMap ChainMap::scaled(const Int& c) const {
  std::map<int, ModuleMap> comps;
  for (const auto& [n, f] : components_) comps.emplace(n, f.scaled(c));
  return ChainMap(source_, target_, std::move(comps));
}

ChainMap ChainMap::shifted(int k) const {
  std::map<int, ModuleMap> comps;
  for (const auto& [n, f] : components_) comps.emplace(n - k, f);
  return ChainMap(shift(source_, k), shift(target_, k), std::move(comps));
}

bool ChainMap::is_zero_map() const {
  for (const auto& [n, f] : components_)
    if (!f.is_zero_map()) return false;
  return true;
}

bool ChainMap::equals(const ChainMap& o) const {
  int lo = std::min(source_.low_degree(), o.source_.low_degree());
  int hi = std::max(source_.high_degree(), o.source_.high_degree());
  for (int n = lo; n <= hi; ++n) {
    if (source_.term(n).generators() == 0 || target_.term(n).generators() == 0)
      continue;
    if (!component(n).equals(o.component(n))) return false;
  }
  return true;
}

ModuleMap Homotopy::component(int n) const {
  auto it = components.find(n);
  if (it != components.end()) return it->second;
  return ModuleMap::zero_map(source.term(n), target.term(n - 1));
}

bool Homotopy::witnesses(const ChainMap& f, const ChainMap& g) const {
  int lo = std::min(source.low_degree(), target.low_degree()) - 1;
  int hi = std::max(source.high_degree(), target.high_degree()) + 1;
  for (int n = lo; n <= hi; ++n) {
    if (source.term(n).generators() == 0 || target.term(n).generators() == 0)
      continue;
    ModuleMap want = f.component(n) - g.component(n);
    ModuleMap have = target.differential(n - 1).compose(component(n)) +
                     component(n + 1).compose(source.differential(n));
    if (!want.equals(have)) return false;
  }
  return true;
}

Triangle cone(const ChainMap& f) {
  if (auto err = f.validate())
    throw IllFormedMap("cone of an invalid chain map: " + *err);
  const BoundedComplex& x = f.source();
  const BoundedComplex& y = f.target();
  const BaseRing& ring = x.ring();

  int lo = std::min(x.low_degree() - 1, y.low_degree());
  int hi = std::max(x.high_degree() - 1, y.high_degree());
  if (x.is_zero() && y.is_zero()) {
    BoundedComplex c(ring);
    return Triangle{f, c, ChainMap::zero(y, c),
                    ChainMap::zero(c, shift(x, 1)),
                    Homotopy{x, c, {}}, Homotopy{c, shift(y, 1), {}}};
  }
  std::vector<FgModule> terms;
  std::vector<ModuleMap> diffs;
  for (int n = lo; n <= hi; ++n)
    terms.push_back(direct_sum({x.term(n + 1), y.term(n)}).module);
  for (int n = lo; n < hi; ++n) {
    const FgModule& dom = terms[n - lo];
    const FgModule& cod = terms[n - lo + 1];
    int gx = x.term(n + 1).generators(), gy = y.term(n).generators();
    int hx = x.term(n + 2).generators(), hy = y.term(n + 1).generators();
    Matrix m(ring, hx + hy, gx + gy);
    Matrix dx = x.differential(n + 1).matrix();
    Matrix dy = y.differential(n).matrix();
    Matrix fm = f.component(n + 1).matrix();
    for (int i = 0; i < hx; ++i)
      for (int j = 0; j < gx; ++j) m.set(i, j, -dx.at(i, j));
    for (int i = 0; i < hy; ++i) {
      for (int j = 0; j < gx; ++j) m.set(hx + i, j, fm.at(i, j));
      for (int j = 0; j < gy; ++j) m.set(hx + i, gx + j, dy.at(i, j));
    }
    diffs.emplace_back(dom, cod, m);
  }
  BoundedComplex c(ring, lo, terms, diffs);

  std::map<int, ModuleMap> into, onto;
  for (int n = lo; n <= hi; ++n) {
    const FgModule& cn = c.term(n);
    int gx = x.term(n + 1).generators(), gy = y.term(n).generators();
    if (cn.generators() == 0) continue;
    if (gy > 0) {
      Matrix inj(ring, gx + gy, gy);
      for (int i = 0; i < gy; ++i) inj.set(gx + i, i, 1);
      into.emplace(n, ModuleMap(y.term(n), cn, inj));
    }
    if (gx > 0) {
      Matrix proj(ring, gx, gx + gy);
      for (int i = 0; i < gx; ++i) proj.set(i, i, 1);
      onto.emplace(n, ModuleMap(cn, x.term(n + 1), proj));
    }
  }
  Triangle t{f, c, ChainMap(y, c, std::move(into)),
             ChainMap(c, shift(x, 1), std::move(onto)),
             Homotopy{x, c, {}}, Homotopy{c, shift(y, 1), {}}};

  // explicit contraction witnesses for the two homotopic-to-zero composites
  std::map<int, ModuleMap> s1, s3;
  for (int n = x.low_degree(); n <= x.high_degree(); ++n) {
    // X^n -> cone^{n-1} = X^n (+) Y^{n-1}, x |-> (x, 0)
    const FgModule& cn = c.term(n - 1);
    int gx = x.term(n).generators(), gy = y.term(n - 1).generators();
    if (gx == 0 || cn.generators() == 0) continue;
    Matrix m(ring, gx + gy, gx);
    for (int i = 0; i < gx; ++i) m.set(i, i, 1);
    s1.emplace(n, ModuleMap(x.term(n), cn, m));
  }
  t.comp_first = Homotopy{x, c, std::move(s1)};
  for (int n = lo; n <= hi; ++n) {
    // cone^n -> Y[1]^{n-1} = Y^n, (x, y) |-> y
    const FgModule& cn = c.term(n);
    int gx = x.term(n + 1).generators(), gy = y.term(n).generators();
    if (gy == 0 || cn.generators() == 0) continue;
    Matrix m(ring, gy, gx + gy);
    for (int i = 0; i < gy; ++i) m.set(i, gx + i, 1);
    s3.emplace(n, ModuleMap(cn, y.term(n), m));
  }
  t.comp_third = Homotopy{c, shift(y, 1), std::move(s3)};
  return t;
}

DirectSumComplex direct_sum_complexes(
    const std::vector<BoundedComplex>& parts) {
  if (parts.empty()) throw ShapeMismatch("direct sum of no complexes");
  const BaseRing& ring = parts.front().ring();
  int lo = parts.front().low_degree(), hi = parts.front().high_degree();
  for (const auto& p : parts) {
    lo = std::min(lo, p.low_degree());
    hi = std::max(hi, p.high_degree());
  }
  if (lo > hi) {
    BoundedComplex zero(ring);
    DirectSumComplex out{zero, {}, {}};
    for (const auto& p : parts) {
      out.injections.push_back(ChainMap::zero(p, zero));
      out.projections.push_back(ChainMap::zero(zero, p));
    }
    return out;
  }
  std::vector<FgModule> terms;
  std::vector<ModuleMap> diffs;
  std::vector<std::map<int, ModuleMap>> injs(parts.size()),
      projs(parts.size());
  for (int n = lo; n <= hi; ++n) {
    std::vector<FgModule> slices;
    for (const auto& p : parts) slices.push_back(p.term(n));
    DirectSum s = direct_sum(slices);
    terms.push_back(s.module);
    for (size_t k = 0; k < parts.size(); ++k) {
      if (parts[k].term(n).generators() == 0 || s.module.generators() == 0)
        continue;
      injs[k].emplace(n, s.injections[k]);
      projs[k].emplace(n, s.projections[k]);
    }
  }
  for (int n = lo; n < hi; ++n) {
    std::vector<Matrix> blocks;
    for (const auto& p : parts) blocks.push_back(p.differential(n).matrix());
    diffs.emplace_back(terms[n - lo], terms[n - lo + 1],
                       block_diag(ring, blocks));
  }
  BoundedComplex total(ring, lo, terms, diffs);
  DirectSumComplex out{total, {}, {}};
  for (size_t k = 0; k < parts.size(); ++k) {
    out.injections.emplace_back(parts[k], total, std::move(injs[k]));
    out.projections.emplace_back(total, parts[k], std::move(projs[k]));
  }
  return out;
}

TotalHom::TotalHom(const BoundedComplex& x, const BoundedComplex& y)
    : x_(x), y_(y), complex_(x.ring()) {
  const BaseRing& ring = x.ring();
  if (!(ring == y.ring()))
    throw ShapeMismatch("total hom over different rings");
  if (x.is_zero() || y.is_zero()) return;

  int nlo = y.low_degree() - x.high_degree();
  int nhi = y.high_degree() - x.low_degree();
  std::vector<FgModule> terms;
  for (int n = nlo; n <= nhi; ++n) {
    std::vector<Block>& bs = blocks_[n];
    std::vector<FgModule> slices;
    int offset = 0;
    for (int i = x.low_degree(); i <= x.high_degree(); ++i) {
      if (x.term(i).generators() == 0 || y.term(i + n).generators() == 0)
        continue;
      HomModule h(x.term(i), y.term(i + n));
      int g = h.module().generators();
      bs.push_back(Block{i, std::move(h), offset});
      offset += g;
      slices.push_back(bs.back().hom.module());
    }
    terms.push_back(slices.empty() ? FgModule::zero(ring)
                                   : direct_sum(slices).module);
  }

  std::vector<ModuleMap> diffs;
  for (int n = nlo; n < nhi; ++n) {
    const FgModule& dom = terms[n - nlo];
    const FgModule& cod = terms[n - nlo + 1];
    Matrix m(ring, cod.generators(), dom.generators());
    Int sign = (n % 2 == 0) ? Int(-1) : Int(1);  // -(-1)^n
    for (const Block& src : blocks_.at(n)) {
      int i = src.source_degree;
      for (int k = 0; k < src.hom.module().generators(); ++k) {
        const Matrix& f = src.hom.basis_map(k);
        // postcomposition with d_Y^{i+n} lands in block i of degree n+1
        if (const Block* tb = find_block(n + 1, i)) {
          Matrix post = y_.differential(i + n).matrix() * f;
          Vec coords =
              tb->hom.encode(ModuleMap(x_.term(i), y_.term(i + n + 1), post));
          for (size_t r = 0; r < coords.size(); ++r)
            m.set(tb->offset + static_cast<int>(r), src.offset + k,
                  m.at(tb->offset + static_cast<int>(r), src.offset + k) +
                      coords[r]);
        }
        // precomposition with d_X^{i-1} lands in block i-1
        if (const Block* tb = find_block(n + 1, i - 1)) {
          Matrix pre = f * x_.differential(i - 1).matrix();
          Vec coords =
              tb->hom.encode(ModuleMap(x_.term(i - 1), y_.term(i + n), pre));
          for (size_t r = 0; r < coords.size(); ++r)
            m.set(tb->offset + static_cast<int>(r), src.offset + k,
                  m.at(tb->offset + static_cast<int>(r), src.offset + k) +
                      sign * coords[r]);
        }
      }
    }
    diffs.emplace_back(dom, cod, m);
  }
  complex_ = BoundedComplex(ring, nlo, std::move(terms), std::move(diffs));
}

const TotalHom::Block* TotalHom::find_block(int n, int source_degree) const {
  auto it = blocks_.find(n);
  if (it == blocks_.end()) return nullptr;
  for (const Block& b : it->second)
    if (b.source_degree == source_degree) return &b;
  return nullptr;
}

std::map<int, Matrix> TotalHom::decode(int n, const Vec& coords) const {
  std::map<int, Matrix> out;
  auto it = blocks_.find(n);
  if (it == blocks_.end()) return out;
  for (const Block& b : it->second) {
    Vec local(b.hom.module().generators());
    for (size_t k = 0; k < local.size(); ++k) local[k] = coords[b.offset + k];
    out.emplace(b.source_degree, b.hom.decode(local).matrix());
  }
  return out;
}

Vec TotalHom::encode(int n, const std::map<int, Matrix>& components) const {
  auto it = blocks_.find(n);
  int total = complex_.term(n).generators();
  Vec out(total, Int(0));
  if (it == blocks_.end()) return out;
  for (const Block& b : it->second) {
    auto c = components.find(b.source_degree);
    if (c == components.end()) continue;
    Vec local = b.hom.encode(ModuleMap(
        x_.term(b.source_degree), y_.term(b.source_degree + n), c->second));
    for (size_t k = 0; k < local.size(); ++k) out[b.offset + k] = local[k];
  }
  return out;
}

TotalHom total_hom(const BoundedComplex& x, const BoundedComplex& y) {
  return TotalHom(x, y);
}

Homology homology_at(const BoundedComplex& x, int n) {
  KernelData k = kernel_of(x.differential(n));
  Matrix reps = k.inclusion.matrix();
  Matrix boundary = x.differential(n - 1).matrix();
  Matrix null = boundary.hcat(x.term(n).relation_columns());
  FgModule h = present_span(x.ring(), reps, null);
  return Homology{h, reps};
}

ModuleMap induced_on_homology(const ChainMap& f, const Homology& hx,
                              const Homology& hy, int n) {
  const BaseRing& ring = f.source().ring();
  Matrix fn = f.component(n).matrix();
  Matrix sys = hy.cycle_reps.hcat(f.target().differential(n - 1).matrix())
                   .hcat(f.target().term(n).relation_columns());
  Solver solver(sys);
  Matrix m(ring, hy.module.generators(), hx.module.generators());
  for (int j = 0; j < hx.module.generators(); ++j) {
    Vec v = fn.apply(hx.cycle_reps.col(j));
    auto z = solver.solve(v);
    if (!z) throw std::logic_error("induced_on_homology: image is not a cycle");
    for (int i = 0; i < hy.module.generators(); ++i) m.set(i, j, (*z)[i]);
  }
  return ModuleMap(hx.module, hy.module, m);
}

std::optional<Homotopy> null_homotopy(const ChainMap& f) {
  const BoundedComplex& x = f.source();
  const BoundedComplex& y = f.target();
  const BaseRing& ring = x.ring();
  LinearSystem sys(ring);

  std::map<int, int> var;  // degree -> variable offset for vec(s^n)
  std::map<int, std::pair<int, int>> shape;
  int lo = std::min(x.low_degree(), y.low_degree());
  int hi = std::max(x.high_degree(), y.high_degree());
  for (int n = lo; n <= hi + 1; ++n) {
    int gx = x.term(n).generators(), gy = y.term(n - 1).generators();
    if (gx == 0 || gy == 0) continue;
    var[n] = sys.add_variables(gx * gy);
    shape[n] = {gy, gx};
    const Matrix& rel = x.term(n).relations();
    for (int i = 0; i < rel.rows(); ++i) {
      Matrix rho(ring, 1, gx);
      for (int j = 0; j < gx; ++j) rho.set(0, j, rel.at(i, j));
      sys.add_congruence({{var[n], kron(rho, Matrix::identity(ring, gy))}},
                         Vec(gy, Int(0)), y.term(n - 1).relation_columns());
    }
  }
  for (int n = lo; n <= hi; ++n) {
    int gx = x.term(n).generators(), gy = y.term(n).generators();
    if (gx == 0 || gy == 0) continue;
    std::vector<LinearSystem::Term> terms;
    if (var.count(n))
      terms.push_back({var[n], kron(Matrix::identity(ring, gx),
                                    y.differential(n - 1).matrix())});
    if (var.count(n + 1))
      terms.push_back({var[n + 1],
                       kron(x.differential(n).matrix().transpose(),
                            Matrix::identity(ring, gy))});
    sys.add_congruence(
        std::move(terms), vectorize(f.component(n).matrix()),
        kron(Matrix::identity(ring, gx), y.term(n).relation_columns()));
  }

  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  Homotopy h{x, y, {}};
  for (const auto& [n, offset] : var) {
    auto [gy, gx] = shape[n];
    Vec local(sol->begin() + offset, sol->begin() + offset + gx * gy);
    h.components.emplace(n, ModuleMap(x.term(n), y.term(n - 1),
                                      unvectorize(ring, gy, gx, local)));
  }
  return h;
}

bool is_contractible(const BoundedComplex& x) {
  return null_homotopy(ChainMap::identity(x)).has_value();
}

std::vector<ChainMap> chain_map_generators(const BoundedComplex& x,
                                           const BoundedComplex& y) {
  const BaseRing& ring = x.ring();
  LinearSystem sys(ring);
  std::map<int, int> var;
  std::map<int, std::pair<int, int>> shape;
  int lo = std::min(x.low_degree(), y.low_degree());
  int hi = std::max(x.high_degree(), y.high_degree());
  for (int n = lo; n <= hi; ++n) {
    int gx = x.term(n).generators(), gy = y.term(n).generators();
    if (gx == 0 || gy == 0) continue;
    var[n] = sys.add_variables(gx * gy);
    shape[n] = {gy, gx};
    const Matrix& rel = x.term(n).relations();
    for (int i = 0; i < rel.rows(); ++i) {
      Matrix rho(ring, 1, gx);
      for (int j = 0; j < gx; ++j) rho.set(0, j, rel.at(i, j));
      sys.add_congruence({{var[n], kron(rho, Matrix::identity(ring, gy))}},
                         Vec(gy, Int(0)), y.term(n).relation_columns());
    }
  }
  for (int n = lo; n <= hi; ++n) {
    // d_Y^n f^n - f^{n+1} d_X^n == 0 in Hom(X^n, Y^{n+1})
    int gx = x.term(n).generators(), hy = y.term(n + 1).generators();
    if (gx == 0 || hy == 0) continue;
    std::vector<LinearSystem::Term> terms;
    if (var.count(n))
      terms.push_back({var[n], kron(Matrix::identity(ring, gx),
                                    y.differential(n).matrix())});
    if (var.count(n + 1))
      terms.push_back({var[n + 1],
                       kron(x.differential(n).matrix().transpose(),
                            Matrix::identity(ring, hy))
                           .scaled(-1)});
    if (terms.empty()) continue;
    sys.add_congruence(
        std::move(terms), Vec(gx * hy, Int(0)),
        kron(Matrix::identity(ring, gx), y.term(n + 1).relation_columns()));
  }

  Matrix gens = sys.homogeneous_generators();
  std::vector<ChainMap> out;
  for (int j = 0; j < gens.cols(); ++j) {
    std::map<int, ModuleMap> comps;
    for (const auto& [n, offset] : var) {
      auto [gy, gx] = shape[n];
      Vec local(gx * gy);
      for (int k = 0; k < gx * gy; ++k) local[k] = gens.at(offset + k, j);
      comps.emplace(n, ModuleMap(x.term(n), y.term(n),
                                 unvectorize(ring, gy, gx, local)));
    }
    out.emplace_back(x, y, std::move(comps));
  }
  return out;
}

}  // namespace purederive
