#include "purederive/resolve.hpp"

#include <algorithm>

namespace purederive {

namespace {

// Joint chain-map-plus-homotopy solver.  Variables: components of the
// unknown chain map f (dom -> cod) and of a degree -1 homotopy h
// (hdom -> hcod).  Callers wire the homotopy equation themselves.
struct LiftSystem {
  LinearSystem sys;
  std::map<int, int> fvar, hvar;
  std::map<int, std::pair<int, int>> fshape, hshape;

  LiftSystem(const BoundedComplex& dom, const BoundedComplex& cod,
             const BoundedComplex& hdom, const BoundedComplex& hcod)
      : sys(dom.ring()) {
    const BaseRing& ring = dom.ring();
    int lo = std::min({dom.low_degree(), cod.low_degree(), hdom.low_degree(),
                       hcod.low_degree()}) -
             1;
    int hi = std::max({dom.high_degree(), cod.high_degree(),
                       hdom.high_degree(), hcod.high_degree()}) +
             1;
    for (int n = lo; n <= hi; ++n) {
      int a = dom.term(n).generators(), b = cod.term(n).generators();
      if (a > 0 && b > 0) {
        fvar[n] = sys.add_variables(a * b);
        fshape[n] = {b, a};
        const Matrix& rel = dom.term(n).relations();
        for (int i = 0; i < rel.rows(); ++i) {
          Matrix rho(ring, 1, a);
          for (int j = 0; j < a; ++j) rho.set(0, j, rel.at(i, j));
          sys.add_congruence(
              {{fvar[n], kron(rho, Matrix::identity(ring, b))}},
              Vec(b, Int(0)), cod.term(n).relation_columns());
        }
      }
      int ha = hdom.term(n).generators(), hb = hcod.term(n - 1).generators();
      if (ha > 0 && hb > 0) {
        hvar[n] = sys.add_variables(ha * hb);
        hshape[n] = {hb, ha};
        const Matrix& rel = hdom.term(n).relations();
        for (int i = 0; i < rel.rows(); ++i) {
          Matrix rho(ring, 1, ha);
          for (int j = 0; j < ha; ++j) rho.set(0, j, rel.at(i, j));
          sys.add_congruence(
              {{hvar[n], kron(rho, Matrix::identity(ring, hb))}},
              Vec(hb, Int(0)), hcod.term(n - 1).relation_columns());
        }
      }
    }
    // chain-map squares for f
    for (int n = lo; n <= hi; ++n) {
      int a = dom.term(n).generators(), b1 = cod.term(n + 1).generators();
      if (a == 0 || b1 == 0) continue;
      std::vector<LinearSystem::Term> terms;
      if (fvar.count(n))
        terms.push_back({fvar[n], kron(Matrix::identity(ring, a),
                                       cod.differential(n).matrix())});
      if (fvar.count(n + 1))
        terms.push_back({fvar[n + 1],
                         kron(dom.differential(n).matrix().transpose(),
                              Matrix::identity(ring, b1))
                             .scaled(-1)});
      if (terms.empty()) continue;
      sys.add_congruence(std::move(terms), Vec(a * b1, Int(0)),
                         kron(Matrix::identity(ring, a),
                              cod.term(n + 1).relation_columns()));
    }
  }

  std::pair<std::map<int, ModuleMap>, std::map<int, ModuleMap>> extract(
      const Vec& sol, const BoundedComplex& dom, const BoundedComplex& cod,
      const BoundedComplex& hdom, const BoundedComplex& hcod) const {
    std::map<int, ModuleMap> f, h;
    for (const auto& [n, off] : fvar) {
      auto [r, c] = fshape.at(n);
      Vec local(sol.begin() + off, sol.begin() + off + r * c);
      f.emplace(n, ModuleMap(dom.term(n), cod.term(n),
                             unvectorize(dom.ring(), r, c, local)));
    }
    for (const auto& [n, off] : hvar) {
      auto [r, c] = hshape.at(n);
      Vec local(sol.begin() + off, sol.begin() + off + r * c);
      h.emplace(n, ModuleMap(hdom.term(n), hcod.term(n - 1),
                             unvectorize(hdom.ring(), r, c, local)));
    }
    return {std::move(f), std::move(h)};
  }
};

std::string purity_tag(const FgModule& m, Side side) {
  PurityClass c = purity_class(m);
  if (side == Side::Projective)
    return c.pure_projective ? "pure projective: " + c.justification
                             : "NOT pure projective";
  return c.pure_injective == PurityClass::Injectivity::Yes
             ? "pure injective: " + c.justification
             : "NOT pure injective";
}

}  // namespace

Resolution make_certified_resolution(Side side, const BoundedComplex& target,
                                     const BoundedComplex& resolvent,
                                     const ChainMap& comparison) {
  Resolution out{side,
                 std::move(target),
                 std::move(resolvent),
                 std::move(comparison),
                 {},
                 {},
                 {}};
  out.certificate = is_pure_quasi_iso(out.comparison);
  if (!out.certificate.yes)
    throw std::logic_error("resolution comparison failed its certificate");
  out.resolvent_profile = purity_profile(out.resolvent);
  for (int n = out.resolvent.low_degree(); n <= out.resolvent.high_degree();
       ++n) {
    std::string tag = purity_tag(out.resolvent.term(n), side);
    if (tag.rfind("NOT", 0) == 0)
      throw std::logic_error("resolvent term at degree " + std::to_string(n) +
                             " has the wrong purity class");
    out.term_classes.push_back(std::to_string(n) + ": " + tag);
  }
  // pure-bounded side condition: failures must not run off the open side
  if (side == Side::Projective) {
    if (out.resolvent_profile.inf_p == ExtendedInt::neg_inf())
      throw std::logic_error("resolvent fails pure-boundedness below");
  } else {
    if (out.resolvent_profile.sup_p == ExtendedInt::pos_inf())
      throw std::logic_error("resolvent fails pure-boundedness above");
  }
  return out;
}

namespace {

Resolution certify(Side side, BoundedComplex target, BoundedComplex resolvent,
                   ChainMap comparison) {
  return make_certified_resolution(side, target, resolvent, comparison);
}

struct RawResolution {
  BoundedComplex resolvent;
  ChainMap comparison;
};

RawResolution projective_raw(const BoundedComplex& x) {
  const BaseRing& ring = x.ring();
  if (x.is_zero())
    return {BoundedComplex(ring), ChainMap::zero(BoundedComplex(ring), x)};
  int j = x.low_degree();
  if (x.low_degree() == x.high_degree()) return {x, ChainMap::identity(x)};

  // bottom stalk placed one degree up, and the strictly higher part
  BoundedComplex x1 = BoundedComplex::stalk(x.term(j), j + 1);
  std::vector<FgModule> terms;
  std::vector<ModuleMap> diffs;
  for (int n = j + 1; n <= x.high_degree(); ++n) terms.push_back(x.term(n));
  for (int n = j + 1; n < x.high_degree(); ++n)
    diffs.push_back(x.differential(n));
  BoundedComplex x2(ring, j + 1, terms, diffs);
  ChainMap u(x1, x2, {{j + 1, x.differential(j)}});

  RawResolution r1{x1, ChainMap::identity(x1)};
  RawResolution r2 = projective_raw(x2);

  // lift u o f1 through the comparison f2 : P2 -> X2 (Lemma 2.9 shape)
  LiftOutcome lifted = lift_left(r2.comparison, u.compose(r1.comparison));
  Triangle t = cone(lifted.lifted);

  // comparison cone(f) -> x = cone(u): (p1, p2) |-> (f1 p1, f2 p2 + s p1)
  std::map<int, ModuleMap> comps;
  for (int n = t.cone.low_degree(); n <= t.cone.high_degree(); ++n) {
    int g1 = r1.resolvent.term(n + 1).generators();
    int g2 = r2.resolvent.term(n).generators();
    const FgModule& cn = t.cone.term(n);
    const FgModule& xn = x.term(n);
    if (cn.generators() == 0 || xn.generators() == 0) continue;
    Matrix m(ring, xn.generators(), cn.generators());
    if (n == j) {
      Matrix f1m = r1.comparison.component(n + 1).matrix();
      for (int i = 0; i < xn.generators(); ++i)
        for (int c = 0; c < g1; ++c) m.set(i, c, f1m.at(i, c));
    } else {
      Matrix sm = lifted.square_homotopy.component(n + 1).matrix();
      Matrix f2m = r2.comparison.component(n).matrix();
      for (int i = 0; i < xn.generators(); ++i) {
        for (int c = 0; c < g1; ++c) m.set(i, c, sm.at(i, c));
        for (int c = 0; c < g2; ++c) m.set(i, g1 + c, f2m.at(i, c));
      }
    }
    comps.emplace(n, ModuleMap(cn, xn, m));
  }
  return {t.cone, ChainMap(t.cone, x, std::move(comps))};
}

RawResolution injective_raw(const BoundedComplex& x) {
  const BaseRing& ring = x.ring();
  if (x.is_zero())
    return {BoundedComplex(ring), ChainMap::zero(x, BoundedComplex(ring))};
  int h = x.high_degree();
  if (x.low_degree() == x.high_degree()) return {x, ChainMap::identity(x)};

  // x is the cone of w : x^{<h}[-1] -> stalk(x^h)
  BoundedComplex s = BoundedComplex::stalk(x.term(h), h);
  std::vector<FgModule> terms;
  std::vector<ModuleMap> diffs;
  for (int n = x.low_degree(); n < h; ++n) terms.push_back(x.term(n));
  for (int n = x.low_degree(); n + 1 < h; ++n)
    diffs.push_back(x.differential(n));
  BoundedComplex x2(ring, x.low_degree(), terms, diffs);
  BoundedComplex x2m1 = shift(x2, -1);
  ChainMap w(x2m1, s, {{h, x.differential(h - 1)}});

  RawResolution r2 = injective_raw(x2);
  ChainMap g2m1 = r2.comparison.shifted(-1);  // x2[-1] -> i2[-1]

  // w'' : i2[-1] -> s with w'' o g2[-1] ~ w (preenvelope is the identity)
  LiftOutcome lifted = lift_right(g2m1, w);
  Triangle t = cone(lifted.lifted);

  // comparison x = cone(w) -> cone(w''): (v, s) |-> (g2[-1] v, s - h v)
  std::map<int, ModuleMap> comps;
  BoundedComplex i2m1 = shift(r2.resolvent, -1);
  for (int n = x.low_degree(); n <= x.high_degree(); ++n) {
    const FgModule& xn = x.term(n);
    const FgModule& cn = t.cone.term(n);
    if (xn.generators() == 0 || cn.generators() == 0) continue;
    int g1 = i2m1.term(n + 1).generators();
    int gs = s.term(n).generators();
    Matrix m(ring, cn.generators(), xn.generators());
    if (n == h) {
      for (int i = 0; i < gs; ++i) m.set(g1 + i, i, 1);
    } else {
      Matrix g2m = g2m1.component(n + 1).matrix();
      Matrix tm = lifted.square_homotopy.component(n + 1).matrix();
      for (int i = 0; i < g1; ++i)
        for (int c = 0; c < xn.generators(); ++c) m.set(i, c, g2m.at(i, c));
      for (int i = 0; i < gs; ++i)
        for (int c = 0; c < xn.generators(); ++c)
          m.set(g1 + i, c, -tm.at(i, c));
    }
    comps.emplace(n, ModuleMap(xn, cn, m));
  }
  return {t.cone, ChainMap(x, t.cone, std::move(comps))};
}

}  // namespace

LiftOutcome lift_left(const ChainMap& q, const ChainMap& g) {
  const BoundedComplex& p = q.source();
  const BoundedComplex& y = q.target();
  const BoundedComplex& w = g.source();
  const BaseRing& ring = p.ring();

  LiftSystem ls(w, p, w, y);
  // homotopy equation: q^n f^n - (d_Y h^n + h^{n+1} d_W) == g^n
  int lo = std::min(w.low_degree(), y.low_degree());
  int hi = std::max(w.high_degree(), y.high_degree());
  for (int n = lo; n <= hi; ++n) {
    int a = w.term(n).generators(), b = y.term(n).generators();
    if (a == 0 || b == 0) continue;
    std::vector<LinearSystem::Term> terms;
    if (ls.fvar.count(n))
      terms.push_back({ls.fvar.at(n), kron(Matrix::identity(ring, a),
                                           q.component(n).matrix())});
    if (ls.hvar.count(n))
      terms.push_back({ls.hvar.at(n),
                       kron(Matrix::identity(ring, a),
                            y.differential(n - 1).matrix())
                           .scaled(-1)});
    if (ls.hvar.count(n + 1))
      terms.push_back({ls.hvar.at(n + 1),
                       kron(w.differential(n).matrix().transpose(),
                            Matrix::identity(ring, b))
                           .scaled(-1)});
    ls.sys.add_congruence(
        std::move(terms), vectorize(g.component(n).matrix()),
        kron(Matrix::identity(ring, a), y.term(n).relation_columns()));
  }
  auto sol = ls.sys.solve();
  if (!sol) throw LiftSearchFailed("lift_left: no chain-map lift exists");
  auto [f, h] = ls.extract(*sol, w, p, w, y);
  return {ChainMap(w, p, std::move(f)), Homotopy{w, y, std::move(h)}};
}

LiftOutcome lift_right(const ChainMap& q, const ChainMap& g) {
  const BoundedComplex& x = q.source();
  const BoundedComplex& i = q.target();
  const BoundedComplex& w = g.target();
  const BaseRing& ring = x.ring();

  LiftSystem ls(i, w, x, w);
  // homotopy equation: f^n q^n - (d_W h^n + h^{n+1} d_X) == g^n
  int lo = std::min(x.low_degree(), w.low_degree());
  int hi = std::max(x.high_degree(), w.high_degree());
  for (int n = lo; n <= hi; ++n) {
    int a = x.term(n).generators(), b = w.term(n).generators();
    if (a == 0 || b == 0) continue;
    std::vector<LinearSystem::Term> terms;
    if (ls.fvar.count(n))
      terms.push_back({ls.fvar.at(n),
                       kron(q.component(n).matrix().transpose(),
                            Matrix::identity(ring, b))});
    if (ls.hvar.count(n))
      terms.push_back({ls.hvar.at(n),
                       kron(Matrix::identity(ring, a),
                            w.differential(n - 1).matrix())
                           .scaled(-1)});
    if (ls.hvar.count(n + 1))
      terms.push_back({ls.hvar.at(n + 1),
                       kron(x.differential(n).matrix().transpose(),
                            Matrix::identity(ring, b))
                           .scaled(-1)});
    ls.sys.add_congruence(
        std::move(terms), vectorize(g.component(n).matrix()),
        kron(Matrix::identity(ring, a), w.term(n).relation_columns()));
  }
  auto sol = ls.sys.solve();
  if (!sol) throw LiftSearchFailed("lift_right: no chain-map lift exists");
  auto [f, h] = ls.extract(*sol, i, w, x, w);
  return {ChainMap(i, w, std::move(f)), Homotopy{x, w, std::move(h)}};
}

Resolution pure_projective_resolution(const BoundedComplex& x) {
  RawResolution raw = projective_raw(x);
  return certify(Side::Projective, x, raw.resolvent, raw.comparison);
}

Resolution pure_injective_resolution(const BoundedComplex& x) {
  if (!x.ring().is_modular()) {
    for (int n = x.low_degree(); n <= x.high_degree(); ++n)
      if (x.term(n).canonical_form().free_rank > 0)
        throw UnsupportedInjectiveBase(
            "term at degree " + std::to_string(n) +
            " has a free summand over Z; no pure injective envelope here");
  }
  RawResolution raw = injective_raw(x);
  return certify(Side::Injective, x, raw.resolvent, raw.comparison);
}

LiftOutcome lift_along_resolutions(const ChainMap& f, const Resolution& rx,
                                   const Resolution& ry) {
  if (rx.side != ry.side)
    throw ShapeMismatch("lift_along_resolutions: mixed sides");
  if (rx.side == Side::Projective)
    return lift_left(ry.comparison, f.compose(rx.comparison));
  return lift_right(rx.comparison, ry.comparison.compose(f));
}

TailSplit split_off_tail(const Resolution& r, int n,
                         const PurityProfile* target_profile) {
  if (r.side != Side::Projective)
    throw ShapeMismatch("split_off_tail expects a projective-side resolution");
  const BoundedComplex& p = r.resolvent;
  const BaseRing& ring = p.ring();

  PurityProfile local_profile;
  if (!target_profile) {
    local_profile = purity_profile(r.target);
    target_profile = &local_profile;
  }
  if (target_profile->inf_p < ExtendedInt::finite(-n))
    throw PrereqFails("inf_p of the target is below -n");
  MapParts parts = map_subquotients(p.differential(-n - 1));
  if (!purity_class(parts.cokernel.module).pure_projective)
    throw PrereqFails("cokernel at degree -n is not pure projective");

  // the split 0 -> Im d^{-n-1} -> P^{-n} -> Coker -> 0
  SplitAnalysis split = split_analysis(
      ShortExactSequence{parts.image.embedding, parts.cokernel.projection});
  if (!split.split)
    throw std::logic_error(
        "split_off_tail: pure epi onto a pure projective did not split");
  const ModuleMap& rho = *split.retraction;  // P^{-n} -> Im
  const ModuleMap& sigma = *split.section;   // Coker -> P^{-n}

  // head: Coker in degree -n, then the original terms upward
  std::vector<FgModule> hterms{parts.cokernel.module};
  std::vector<ModuleMap> hdiffs;
  for (int k = -n + 1; k <= p.high_degree(); ++k) hterms.push_back(p.term(k));
  if (-n < p.high_degree()) {
    hdiffs.emplace_back(parts.cokernel.module, p.term(-n + 1),
                        p.differential(-n).matrix());
    for (int k = -n + 1; k < p.high_degree(); ++k)
      hdiffs.push_back(p.differential(k));
  }
  BoundedComplex head(ring, -n, hterms, hdiffs);

  // tail: the strictly lower terms, capped by the image in degree -n
  int tlo = std::min(p.low_degree(), -n);
  std::vector<FgModule> tterms;
  std::vector<ModuleMap> tdiffs;
  for (int k = tlo; k <= -n - 1; ++k) tterms.push_back(p.term(k));
  tterms.push_back(parts.image.module);
  for (int k = tlo; k < -n - 1; ++k) tdiffs.push_back(p.differential(k));
  if (tlo <= -n - 1) tdiffs.push_back(parts.image.onto);
  BoundedComplex tail(ring, tlo, tterms, tdiffs);

  DirectSumComplex sum = direct_sum_complexes({head, tail});
  std::map<int, ModuleMap> to, from;
  for (int k = p.low_degree(); k <= p.high_degree(); ++k) {
    const FgModule& pk = p.term(k);
    const FgModule& sk = sum.complex.term(k);
    if (pk.generators() == 0 || sk.generators() == 0) continue;
    int gh = head.term(k).generators(), gt = tail.term(k).generators();
    Matrix tm(ring, gh + gt, pk.generators());
    Matrix fm(ring, pk.generators(), gh + gt);
    if (k == -n) {
      for (int i = 0; i < gh; ++i)
        for (int j = 0; j < pk.generators(); ++j) {
          tm.set(i, j, parts.cokernel.projection.matrix().at(i, j));
          fm.set(j, i, sigma.matrix().at(j, i));
        }
      for (int i = 0; i < gt; ++i)
        for (int j = 0; j < pk.generators(); ++j) {
          tm.set(gh + i, j, rho.matrix().at(i, j));
          fm.set(j, gh + i, parts.image.embedding.matrix().at(j, i));
        }
    } else {
      for (int i = 0; i < pk.generators(); ++i) {
        tm.set(k > -n ? i : gh + i, i, 1);
        fm.set(i, k > -n ? i : gh + i, 1);
      }
    }
    to.emplace(k, ModuleMap(pk, sk, tm));
    from.emplace(k, ModuleMap(sk, pk, fm));
  }
  ChainMap to_sum(p, sum.complex, std::move(to));
  ChainMap from_sum(sum.complex, p, std::move(from));
  if (auto err = to_sum.validate())
    throw std::logic_error("split_off_tail: splitting map invalid: " + *err);
  if (auto err = from_sum.validate())
    throw std::logic_error("split_off_tail: inverse invalid: " + *err);
  if (!to_sum.compose(from_sum).equals(ChainMap::identity(sum.complex)) ||
      !from_sum.compose(to_sum).equals(ChainMap::identity(p)))
    throw std::logic_error("split_off_tail: not mutually inverse");

  auto contraction = null_homotopy(ChainMap::identity(tail));
  if (!contraction)
    throw std::logic_error("split_off_tail: tail is not contractible");

  ChainMap head_comparison =
      r.comparison.compose(from_sum).compose(sum.injections[0]);
  Resolution head_res =
      certify(Side::Projective, r.target, head, head_comparison);

  return TailSplit{head,         tail,
                   to_sum,       from_sum,
                   *contraction, std::move(head_res)};
}

TailSplit split_off_head(const Resolution& r, int n,
                         const PurityProfile* target_profile) {
  if (r.side != Side::Injective)
    throw ShapeMismatch("split_off_head expects an injective-side resolution");
  const BoundedComplex& q = r.resolvent;
  const BaseRing& ring = q.ring();

  PurityProfile local_profile;
  if (!target_profile) {
    local_profile = purity_profile(r.target);
    target_profile = &local_profile;
  }
  if (target_profile->sup_p > ExtendedInt::finite(n))
    throw PrereqFails("sup_p of the target is above n");
  MapParts parts = map_subquotients(q.differential(n));
  if (purity_class(parts.kernel.module).pure_injective !=
      PurityClass::Injectivity::Yes)
    throw PrereqFails("kernel at degree n is not pure injective");

  // the split 0 -> Ker d^n -> Q^n -> Im d^n -> 0
  SplitAnalysis split = split_analysis(
      ShortExactSequence{parts.kernel.inclusion, parts.image.onto});
  if (!split.split)
    throw std::logic_error(
        "split_off_head: pure mono from a pure injective did not split");
  const ModuleMap& rho = *split.retraction;  // Q^n -> Ker
  const ModuleMap& kappa = parts.kernel.inclusion;

  // head: terms below n, capped by Ker d^n in degree n
  std::vector<FgModule> hterms;
  std::vector<ModuleMap> hdiffs;
  int hlo = std::min(q.low_degree(), n);
  for (int k = hlo; k < n; ++k) hterms.push_back(q.term(k));
  hterms.push_back(parts.kernel.module);
  for (int k = hlo; k + 1 < n; ++k) hdiffs.push_back(q.differential(k));
  if (hlo < n) {
    Solver s(kappa.matrix().hcat(q.term(n).relation_columns()));
    Matrix dm = q.differential(n - 1).matrix();
    Matrix g(ring, parts.kernel.module.generators(),
             q.term(n - 1).generators());
    for (int j = 0; j < dm.cols(); ++j) {
      auto z = s.solve(dm.col(j));
      if (!z)
        throw std::logic_error("split_off_head: differential escapes kernel");
      for (int i = 0; i < g.rows(); ++i) g.set(i, j, (*z)[i]);
    }
    hdiffs.emplace_back(q.term(n - 1), parts.kernel.module, g);
  }
  BoundedComplex head(ring, hlo, hterms, hdiffs);

  // tail: Im d^n in degree n, then the terms above
  std::vector<FgModule> tterms{parts.image.module};
  std::vector<ModuleMap> tdiffs;
  for (int k = n + 1; k <= q.high_degree(); ++k) tterms.push_back(q.term(k));
  if (n < q.high_degree()) {
    tdiffs.emplace_back(parts.image.module, q.term(n + 1),
                        parts.image.embedding.matrix());
    for (int k = n + 1; k < q.high_degree(); ++k)
      tdiffs.push_back(q.differential(k));
  }
  BoundedComplex tail(ring, n, tterms, tdiffs);

  DirectSumComplex sum = direct_sum_complexes({head, tail});
  std::map<int, ModuleMap> to, from;
  for (int k = q.low_degree(); k <= q.high_degree(); ++k) {
    const FgModule& qk = q.term(k);
    const FgModule& sk = sum.complex.term(k);
    if (qk.generators() == 0 || sk.generators() == 0) continue;
    int gh = head.term(k).generators(), gt = tail.term(k).generators();
    Matrix tm(ring, gh + gt, qk.generators());
    Matrix fm(ring, qk.generators(), gh + gt);
    if (k == n) {
      Matrix sigma = Matrix::identity(ring, qk.generators()) -
                     kappa.matrix() * rho.matrix();
      for (int i = 0; i < gh; ++i)
        for (int j = 0; j < qk.generators(); ++j) {
          tm.set(i, j, rho.matrix().at(i, j));
          fm.set(j, i, kappa.matrix().at(j, i));
        }
      for (int i = 0; i < gt; ++i)
        for (int j = 0; j < qk.generators(); ++j) {
          tm.set(gh + i, j, (i == j) ? Int(1) : Int(0));
          fm.set(j, gh + i, sigma.at(j, i));
        }
    } else {
      for (int i = 0; i < qk.generators(); ++i) {
        tm.set(k < n ? i : gh + i, i, 1);
        fm.set(i, k < n ? i : gh + i, 1);
      }
    }
    to.emplace(k, ModuleMap(qk, sk, tm));
    from.emplace(k, ModuleMap(sk, qk, fm));
  }
  ChainMap to_sum(q, sum.complex, std::move(to));
  ChainMap from_sum(sum.complex, q, std::move(from));
  if (auto err = to_sum.validate())
    throw std::logic_error("split_off_head: splitting map invalid: " + *err);
  if (auto err = from_sum.validate())
    throw std::logic_error("split_off_head: inverse invalid: " + *err);
  if (!to_sum.compose(from_sum).equals(ChainMap::identity(sum.complex)) ||
      !from_sum.compose(to_sum).equals(ChainMap::identity(q)))
    throw std::logic_error("split_off_head: not mutually inverse");

  auto contraction = null_homotopy(ChainMap::identity(tail));
  if (!contraction)
    throw std::logic_error("split_off_head: tail is not contractible");

  ChainMap head_comparison =
      sum.projections[0].compose(to_sum).compose(r.comparison);
  Resolution head_res =
      certify(Side::Injective, r.target, head, head_comparison);

  return TailSplit{head,         tail,
                   to_sum,       from_sum,
                   *contraction, std::move(head_res)};
}

RoofNormalization roof_normalize(const Roof& r) {
  PureQuasiIsoCheck s_cert = is_pure_quasi_iso(r.to_source);
  if (!s_cert.yes)
    throw NotPureQuasiIso(
        "roof leg toward the source is not a pure quasi-isomorphism");
  const BoundedComplex& x = r.to_source.target();
  const BoundedComplex& y = r.to_target.target();
  const BoundedComplex& z = r.apex;

  bool stalks = !x.is_zero() && !y.is_zero() &&
                x.low_degree() == x.high_degree() &&
                y.low_degree() == y.high_degree() && x.low_degree() == 0 &&
                y.low_degree() == 0;

  if (stalks) {
    Homology hz = homology_at(z, 0);
    Homology hx = homology_at(x, 0);
    Homology hy = homology_at(y, 0);
    ModuleMap hs = induced_on_homology(r.to_source, hz, hx, 0);
    ModuleMap ha = induced_on_homology(r.to_target, hz, hy, 0);

    // solve hs o inv == id for inv : H^0(X) -> H^0(Z)
    const BaseRing& ring = x.ring();
    int a = hx.module.generators(), b = hz.module.generators();
    LinearSystem sys(ring);
    int v = sys.add_variables(a * b);
    const Matrix& rel = hx.module.relations();
    for (int i = 0; i < rel.rows(); ++i) {
      Matrix rho(ring, 1, a);
      for (int j = 0; j < a; ++j) rho.set(0, j, rel.at(i, j));
      sys.add_congruence({{v, kron(rho, Matrix::identity(ring, b))}},
                         Vec(b, Int(0)), hz.module.relation_columns());
    }
    sys.add_congruence({{v, kron(Matrix::identity(ring, a), hs.matrix())}},
                       vectorize(Matrix::identity(ring, a)),
                       kron(Matrix::identity(ring, a),
                            hx.module.relation_columns()));
    auto sol = sys.solve();
    if (!sol)
      throw std::logic_error("roof_normalize: H^0(s) is not invertible");
    ModuleMap inv(hx.module, hz.module, unvectorize(ring, b, a, *sol));
    ModuleMap g0 = ha.compose(inv);

    // transport between the stalk and its homology presentation
    Solver toh(hx.cycle_reps.hcat(x.term(0).relation_columns()));
    Matrix tox(ring, hx.module.generators(), x.term(0).generators());
    for (int j = 0; j < x.term(0).generators(); ++j) {
      Vec e(x.term(0).generators(), Int(0));
      e[j] = 1;
      auto zc = toh.solve(e);
      if (!zc) throw std::logic_error("roof_normalize: stalk class missing");
      for (int i = 0; i < tox.rows(); ++i) tox.set(i, j, (*zc)[i]);
    }
    Matrix gmat = hy.cycle_reps * g0.matrix() * tox;
    ChainMap g(x, y, {{0, ModuleMap(x.term(0), y.term(0), gmat)}});

    // realized equivalence: kernel-style truncation of the apex, then
    // g o (s o i) ~ a o i
    TruncationResult tr = truncate(z, 0, TruncateMode::KernelStyle);
    ChainMap si = r.to_source.compose(tr.comparison);
    ChainMap ai = r.to_target.compose(tr.comparison);
    auto homo = null_homotopy(g.compose(si) - ai);
    if (!homo)
      throw std::logic_error("roof_normalize: stalk route certificate failed");
    return RoofNormalization{g,   "stalk-h0", tr.truncated, tr.comparison,
                             *homo, si};
  }

  // general route: homotopy-inverse t of s with s t ~ id, then g = a t
  LiftOutcome t = lift_left(r.to_source, ChainMap::identity(x));
  ChainMap g = r.to_target.compose(t.lifted);
  return RoofNormalization{g,        "homotopy-inverse",
                           x,        t.lifted,
                           t.square_homotopy, ChainMap::identity(x)};
}

}  // namespace purederive
