#include "purederive/workspace.hpp"

#include <fstream>
#include <sstream>

namespace purederive {

namespace {

using nlohmann::json;

json json_int(const Int& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());  // decimal string beyond machine range
}

Int int_from(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return Int(j.get<std::string>());
  throw ParseError(where + ": expected an integer");
}

json json_matrix(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(json_int(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const BaseRing& ring, const json& j, int expect_cols,
                   const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a matrix");
  std::vector<Vec> rows;
  int cols = expect_cols;
  for (const auto& row : j) {
    if (!row.is_array()) throw ParseError(where + ": expected matrix rows");
    Vec r;
    for (const auto& e : row) r.push_back(int_from(e, where));
    if (cols < 0) cols = static_cast<int>(r.size());
    if (static_cast<int>(r.size()) != cols)
      throw ParseError(where + ": ragged matrix");
    rows.push_back(std::move(r));
  }
  if (cols < 0) cols = 0;
  return Matrix::from_rows(ring, rows, cols);
}

json json_form(const CanonicalForm& f) {
  json factors = json::array();
  for (const auto& d : f.factors) factors.push_back(json_int(d));
  return json{{"free_rank", f.free_rank},
              {"factors", std::move(factors)},
              {"describe", f.describe()}};
}

json json_extint(const ExtendedInt& e) {
  if (e.is_finite()) return json(e.value);
  return json(e.describe());
}

json json_profile(const PurityProfile& p) {
  json verdicts = json::object();
  for (const auto& [n, v] : p.verdicts) {
    json entry{{"pure", v.pure}};
    if (!v.pure) entry["reason"] = v.reason;
    verdicts[std::to_string(n)] = std::move(entry);
  }
  json orders = json::array();
  for (const auto& d : p.family.orders) orders.push_back(json_int(d));
  return json{{"inf_p", json_extint(p.inf_p)},
              {"sup_p", json_extint(p.sup_p)},
              {"verdicts", std::move(verdicts)},
              {"test_family_orders", std::move(orders)},
              {"family_capped", p.family.capped}};
}

json json_resolution(const Resolution& r) {
  json terms = json::object();
  for (int n = r.resolvent.low_degree(); n <= r.resolvent.high_degree(); ++n)
    terms[std::to_string(n)] = json_form(r.resolvent.term(n).canonical_form());
  return json{{"side", r.side == Side::Projective ? "projective" : "injective"},
              {"resolvent_terms", std::move(terms)},
              {"low_degree", r.resolvent.low_degree()},
              {"high_degree", r.resolvent.high_degree()},
              {"pure_quasi_iso", r.certificate.yes},
              {"hom_route_agrees", r.certificate.hom_route_agrees},
              {"resolvent_inf_p", json_extint(r.resolvent_profile.inf_p)},
              {"resolvent_sup_p", json_extint(r.resolvent_profile.sup_p)},
              {"term_classes", r.term_classes}};
}

json json_dimreport(const DimReport& d) {
  json criteria = json::object();
  for (const auto& [k, v] : d.criteria)
    criteria[k] = json{{"holds", v.holds}, {"detail", v.detail}};
  return json{{"side", d.side == Side::Projective ? "projective" : "injective"},
              {"value", json_extint(d.value)},
              {"evaluated_at", d.evaluated_at},
              {"criteria", std::move(criteria)},
              {"minimal", d.minimal},
              {"agreed", d.agreed}};
}

json json_suite(const SuiteResult& s) {
  return json{{"name", s.name},
              {"instances", s.instances},
              {"failures", s.failures},
              {"failure_details", s.failure_details},
              {"summary", s.summary},
              {"passed", s.passed()}};
}

json json_decide(const DecideOutcome& d) {
  json out{{"depth_used", d.depth_used}, {"note", d.note}};
  switch (d.kind) {
    case DecideOutcome::Kind::Coboundary: out["kind"] = "coboundary"; break;
    case DecideOutcome::Kind::NotCoboundary:
      out["kind"] = "not-coboundary";
      break;
    default: out["kind"] = "undecided";
  }
  json witness = json::array();
  for (const auto& m : d.witness_prefix) witness.push_back(json_matrix(m));
  out["witness_prefix"] = std::move(witness);
  if (d.growth) {
    json rs = json::array(), ms = json::array();
    for (const auto& v : d.growth->forced_residues) rs.push_back(json_int(v));
    for (const auto& v : d.growth->moduli) ms.push_back(json_int(v));
    out["growth"] = json{{"forced_residues", std::move(rs)},
                         {"moduli", std::move(ms)},
                         {"argument", d.growth->argument}};
  }
  return out;
}

}  // namespace

Workspace Workspace::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open workspace file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Workspace Workspace::parse(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  Workspace w;

  if (!doc.contains("ring")) throw ParseError("missing ring declaration");
  {
    const json& r = doc["ring"];
    std::string kind = r.value("kind", "");
    if (kind == "Z") {
      w.ring_ = BaseRing::integers();
    } else if (kind == "Z/m") {
      if (!r.contains("modulus")) throw ParseError("ring Z/m needs a modulus");
      w.ring_ = BaseRing::integers_mod(int_from(r["modulus"], "ring.modulus"));
    } else {
      throw ParseError("ring.kind must be 'Z' or 'Z/m'");
    }
  }

  if (doc.contains("harness")) {
    const json& h = doc["harness"];
    w.harness_.seed = h.value("seed", 1ULL);
    w.harness_.count = h.value("count", 50);
    w.harness_.depth = h.value("depth", 6);
    w.harness_.family_cap = h.value("family_cap", 64);
    w.harness_.sample.max_generators = h.value("max_generators", 3);
    w.harness_.sample.entry_bound = h.value("entry_bound", 5L);
    w.harness_.sample.max_length = h.value("max_length", 5);
  }

  json modules_section = doc.value("modules", json::object());
  for (const auto& [name, spec] : modules_section.items()) {
    int gens = spec.value("generators", -1);
    if (gens < 0) throw ValidationError(name, "needs a generator count");
    Matrix rel = matrix_from(w.ring_, spec.value("relations", json::array()),
                             gens, name + ".relations");
    try {
      w.modules_.emplace(name, FgModule(w.ring_, gens, rel));
    } catch (const std::exception& e) {
      throw ValidationError(name, e.what());
    }
  }

  json maps_section = doc.value("maps", json::object());
  for (const auto& [name, spec] : maps_section.items()) {
    std::string dom = spec.value("domain", ""), cod = spec.value("codomain", "");
    if (!w.modules_.count(dom))
      throw ValidationError(name, "unknown domain module '" + dom + "'");
    if (!w.modules_.count(cod))
      throw ValidationError(name, "unknown codomain module '" + cod + "'");
    Matrix m = matrix_from(w.ring_, spec.value("matrix", json::array()),
                           w.modules_.at(dom).generators(), name + ".matrix");
    if (m.rows() != w.modules_.at(cod).generators())
      throw ValidationError(name, "matrix row count does not match codomain");
    ModuleMap f(w.modules_.at(dom), w.modules_.at(cod), m);
    if (!f.is_well_defined())
      throw ValidationError(name, "matrix does not respect the relations");
    w.maps_.emplace(name, std::move(f));
  }

  json complexes_section = doc.value("complexes", json::object());
  for (const auto& [name, spec] : complexes_section.items()) {
    int low = spec.value("low_degree", 0);
    std::vector<FgModule> terms;
    std::vector<ModuleMap> diffs;
    for (const auto& t : spec.value("terms", json::array())) {
      std::string tn = t.get<std::string>();
      if (!w.modules_.count(tn))
        throw ValidationError(name, "unknown term module '" + tn + "'");
      terms.push_back(w.modules_.at(tn));
    }
    for (const auto& d : spec.value("differentials", json::array())) {
      std::string dn = d.get<std::string>();
      if (!w.maps_.count(dn))
        throw ValidationError(name, "unknown differential map '" + dn + "'");
      diffs.push_back(w.maps_.at(dn));
    }
    if (!terms.empty() && diffs.size() + 1 != terms.size())
      throw ValidationError(name, "need one differential between terms");
    BoundedComplex x(w.ring_, low, terms, diffs);
    auto v = x.validate();
    if (!v.ok)
      throw ValidationError(name, v.reason + " at degree " +
                                      std::to_string(v.failing_degree));
    w.complexes_.emplace(name, std::move(x));
  }

  json chain_maps_section = doc.value("chain_maps", json::object());
  for (const auto& [name, spec] : chain_maps_section.items()) {
    std::string src = spec.value("source", ""), tgt = spec.value("target", "");
    if (!w.complexes_.count(src))
      throw ValidationError(name, "unknown source complex '" + src + "'");
    if (!w.complexes_.count(tgt))
      throw ValidationError(name, "unknown target complex '" + tgt + "'");
    const BoundedComplex& s = w.complexes_.at(src);
    const BoundedComplex& t = w.complexes_.at(tgt);
    std::map<int, ModuleMap> comps;
    json components_section = spec.value("components", json::object());
    for (const auto& [deg, mn] : components_section.items()) {
      int n = std::stoi(deg);
      std::string mname = mn.get<std::string>();
      if (!w.maps_.count(mname))
        throw ValidationError(name, "unknown component map '" + mname + "'");
      comps.emplace(n, w.maps_.at(mname));
    }
    ChainMap f(s, t, std::move(comps));
    if (auto err = f.validate()) throw ValidationError(name, *err);
    w.chain_maps_.emplace(name, std::move(f));
  }

  json towers_section = doc.value("towers", json::object());
  for (const auto& [name, spec] : towers_section.items()) {
    std::vector<FgModule> stages;
    std::vector<ModuleMap> maps;
    for (const auto& s : spec.value("stages", json::array())) {
      std::string sn = s.get<std::string>();
      if (!w.modules_.count(sn))
        throw ValidationError(name, "unknown stage module '" + sn + "'");
      stages.push_back(w.modules_.at(sn));
    }
    for (const auto& m : spec.value("maps", json::array())) {
      std::string mn = m.get<std::string>();
      if (!w.maps_.count(mn))
        throw ValidationError(name, "unknown connecting map '" + mn + "'");
      maps.push_back(w.maps_.at(mn));
    }
    TailRule tail;
    const json& tr = spec.value("tail", json::object());
    std::string rule = tr.value("rule", "eventually_iso");
    if (rule == "eventually_iso") {
      tail.kind = TailRule::Kind::EventuallyIso;
    } else if (rule == "multiplication") {
      tail.kind = TailRule::Kind::MultiplicationBy;
      tail.coeff_a = int_from(tr.value("coeff_step", json(1)), name);
      tail.coeff_b = int_from(tr.value("coeff_base", json(2)), name);
    } else if (rule == "power_quotient") {
      tail.kind = TailRule::Kind::PowerQuotient;
      tail.prime = int_from(tr.value("prime", json(2)), name);
    } else {
      throw ValidationError(name, "unknown tail rule '" + rule + "'");
    }
    TowerOrientation orient = spec.value("orientation", "direct") == "inverse"
                                  ? TowerOrientation::Inverse
                                  : TowerOrientation::Direct;
    try {
      w.towers_.emplace(name, Tower(w.ring_, stages, maps, tail, orient));
    } catch (const std::exception& e) {
      throw ValidationError(name, e.what());
    }
  }

  json cocycles_section = doc.value("cocycles", json::object());
  for (const auto& [name, spec] : cocycles_section.items()) {
    std::string tn = spec.value("tower", ""), nn = spec.value("target", "");
    if (!w.towers_.count(tn))
      throw ValidationError(name, "unknown tower '" + tn + "'");
    if (!w.modules_.count(nn))
      throw ValidationError(name, "unknown target module '" + nn + "'");
    const Tower& t = w.towers_.at(tn);
    const FgModule& n = w.modules_.at(nn);
    std::vector<Matrix> prefix;
    int idx = 0;
    for (const auto& e : spec.value("prefix", json::array())) {
      prefix.push_back(matrix_from(w.ring_, e, t.stage(idx).generators(),
                                   name + ".prefix"));
      ++idx;
    }
    Cocycle::TailKind kind = Cocycle::TailKind::Zero;
    Matrix constant;
    const json& tl = spec.value("tail", json::object());
    if (tl.value("kind", "zero") == "constant") {
      kind = Cocycle::TailKind::ConstantEntry;
      constant = matrix_from(w.ring_, tl.value("matrix", json::array()),
                             t.stage(idx).generators(), name + ".tail");
    }
    try {
      w.cocycles_.emplace(name, Cocycle(t, n, prefix, kind, constant));
    } catch (const std::exception& e) {
      throw ValidationError(name, e.what());
    }
  }
  return w;
}

std::string Workspace::emit() const {
  json doc;
  if (ring_.is_modular())
    doc["ring"] = json{{"kind", "Z/m"}, {"modulus", json_int(ring_.modulus)}};
  else
    doc["ring"] = json{{"kind", "Z"}};
  doc["harness"] = json{{"seed", harness_.seed},
                        {"count", harness_.count},
                        {"depth", harness_.depth},
                        {"family_cap", harness_.family_cap},
                        {"max_generators", harness_.sample.max_generators},
                        {"entry_bound", harness_.sample.entry_bound},
                        {"max_length", harness_.sample.max_length}};
  json modules = json::object();
  for (const auto& [name, m] : modules_)
    modules[name] = json{{"generators", m.generators()},
                         {"relations", json_matrix(m.relations())}};
  doc["modules"] = std::move(modules);
  json maps = json::object();
  for (const auto& [name, f] : maps_) {
    std::string dom, cod;
    for (const auto& [mn, m] : modules_) {
      if (m.generators() == f.domain().generators() &&
          m.relations() == f.domain().relations() && dom.empty())
        dom = mn;
      if (m.generators() == f.codomain().generators() &&
          m.relations() == f.codomain().relations() && cod.empty())
        cod = mn;
    }
    maps[name] = json{{"domain", dom},
                      {"codomain", cod},
                      {"matrix", json_matrix(f.matrix())}};
  }
  doc["maps"] = std::move(maps);
  // complexes, chain maps, towers, and cocycles reference the named parts
  // they were built from; rebuilt by name on load, emitted structurally
  json complexes = json::object();
  for (const auto& [name, x] : complexes_) {
    json terms = json::array(), diffs = json::array();
    for (int n = x.low_degree(); n <= x.high_degree(); ++n) {
      for (const auto& [mn, m] : modules_)
        if (m.generators() == x.term(n).generators() &&
            m.relations() == x.term(n).relations()) {
          terms.push_back(mn);
          break;
        }
    }
    for (int n = x.low_degree(); n < x.high_degree(); ++n) {
      for (const auto& [fn, f] : maps_)
        if (f.matrix() == x.differential(n).matrix() &&
            f.domain().generators() == x.term(n).generators() &&
            f.codomain().generators() == x.term(n + 1).generators()) {
          diffs.push_back(fn);
          break;
        }
    }
    complexes[name] = json{{"low_degree", x.low_degree()},
                           {"terms", std::move(terms)},
                           {"differentials", std::move(diffs)}};
  }
  doc["complexes"] = std::move(complexes);
  return doc.dump(2) + "\n";
}

const FgModule& Workspace::module(const std::string& name) const {
  auto it = modules_.find(name);
  if (it == modules_.end())
    throw ValidationError(name, "no module with this name");
  return it->second;
}

const ModuleMap& Workspace::module_map(const std::string& name) const {
  auto it = maps_.find(name);
  if (it == maps_.end()) throw ValidationError(name, "no map with this name");
  return it->second;
}

const BoundedComplex& Workspace::complex(const std::string& name) const {
  auto it = complexes_.find(name);
  if (it == complexes_.end())
    throw ValidationError(name, "no complex with this name");
  return it->second;
}

const ChainMap& Workspace::chain_map(const std::string& name) const {
  auto it = chain_maps_.find(name);
  if (it == chain_maps_.end())
    throw ValidationError(name, "no chain map with this name");
  return it->second;
}

const Tower& Workspace::tower(const std::string& name) const {
  auto it = towers_.find(name);
  if (it == towers_.end())
    throw ValidationError(name, "no tower with this name");
  return it->second;
}

const Cocycle& Workspace::cocycle(const std::string& name) const {
  auto it = cocycles_.find(name);
  if (it == cocycles_.end())
    throw ValidationError(name, "no cocycle with this name");
  return it->second;
}

std::string Report::render_json() const {
  json out{{"command", command}, {"ok", ok}, {"body", body}};
  return out.dump(2) + "\n";
}

std::string Report::render_text() const {
  std::ostringstream os;
  os << "command: " << command << "\n";
  for (const auto& line : lines) os << line << "\n";
  os << (ok ? "status: ok" : "status: FAILED") << "\n";
  return os.str();
}

namespace {

std::string describe_value(const ExtendedInt& e) { return e.describe(); }

Report run_verify(const Workspace& w, const std::string& which,
                  const CommandOptions& opts) {
  Report rep;
  rep.command = "verify " + which;
  std::uint64_t seed = opts.seed ? opts.seed : w.harness().seed;
  int count = opts.count ? opts.count : w.harness().count;
  int depth = opts.depth ? opts.depth : w.harness().depth;
  SampleConfig cfg = w.harness().sample;
  Rng rng(seed);

  std::vector<SuiteResult> suites;
  if (which == "thm45") {
    suites.push_back(verify_dim_criteria(rng, count / 2 + count % 2, cfg,
                                         BaseRing::integers(),
                                         Side::Projective));
    suites.push_back(verify_dim_criteria(rng, count / 2, cfg,
                                         BaseRing::integers_mod(8),
                                         Side::Projective));
  } else if (which == "thm46") {
    suites.push_back(verify_dim_criteria(rng, count, cfg,
                                         BaseRing::integers_mod(8),
                                         Side::Injective));
  } else if (which == "prop34") {
    suites.push_back(verify_profile_ranges(rng, count, cfg));
    suites.push_back(verify_invariance(rng, count, cfg));
  } else if (which == "thm47") {
    suites.push_back(verify_pgldim(rng, count, BaseRing::integers_mod(4)));
    suites.push_back(verify_pgldim(rng, count, BaseRing::integers()));
  } else if (which == "wellknown") {
    suites.push_back(verify_snf(rng, count));
    suites.push_back(verify_purity_triple(rng, count, cfg));
    suites.push_back(verify_contrast());
    suites.push_back(verify_pext_routes(rng, std::min(count, 40), cfg));
    suites.push_back(verify_resolutions(rng, std::min(count, 40), cfg));
    suites.push_back(verify_towers(depth));
  } else {
    throw UnknownCommand("verify target '" + which + "'");
  }

  json body = json::object();
  body["seed"] = seed;
  body["count"] = count;
  json list = json::array();
  for (const auto& s : suites) {
    list.push_back(json_suite(s));
    rep.ok = rep.ok && s.passed();
    rep.lines.push_back(s.name + ": " + std::to_string(s.instances) +
                        " instances, " + std::to_string(s.failures) +
                        " failures");
  }
  body["suites"] = std::move(list);
  rep.body = std::move(body);
  return rep;
}

}  // namespace

Report run(const Workspace& w, const std::vector<std::string>& args,
           const CommandOptions& opts) {
  if (args.empty()) throw UnknownCommand("no command given");
  const std::string& cmd = args[0];
  auto need = [&](size_t k, const std::string& what) -> const std::string& {
    if (args.size() <= k)
      throw UnknownCommand(cmd + " needs " + what);
    return args[k];
  };

  Report rep;
  rep.command = cmd;

  if (cmd == "profile") {
    const BoundedComplex& x = w.complex(need(1, "a complex name"));
    PurityProfile p = purity_profile(x);
    rep.body = json_profile(p);
    rep.lines.push_back("inf_p = " + p.inf_p.describe());
    rep.lines.push_back("sup_p = " + p.sup_p.describe());
    for (const auto& [n, v] : p.verdicts)
      if (!v.pure)
        rep.lines.push_back("degree " + std::to_string(n) + ": " + v.reason);
    return rep;
  }

  if (cmd == "resolve") {
    const BoundedComplex& x = w.complex(need(1, "a complex name"));
    json body = json::object();
    bool want_proj = opts.side == "both" || opts.side == "projective";
    bool want_inj = opts.side == "both" || opts.side == "injective";
    if (want_proj) {
      Resolution r = pure_projective_resolution(x);
      body["projective"] = json_resolution(r);
      rep.lines.push_back("projective resolvent over [" +
                          std::to_string(r.resolvent.low_degree()) + ", " +
                          std::to_string(r.resolvent.high_degree()) +
                          "], certified");
    }
    if (want_inj) {
      try {
        Resolution r = pure_injective_resolution(x);
        body["injective"] = json_resolution(r);
        rep.lines.push_back("injective resolvent over [" +
                            std::to_string(r.resolvent.low_degree()) + ", " +
                            std::to_string(r.resolvent.high_degree()) +
                            "], certified");
      } catch (const UnsupportedInjectiveBase& e) {
        if (opts.side == "injective") throw;
        body["injective"] = json{{"unsupported", e.what()}};
        rep.lines.push_back(std::string("injective side unsupported: ") +
                            e.what());
      }
    }
    rep.body = std::move(body);
    return rep;
  }

  if (cmd == "pext") {
    const BoundedComplex& x = w.complex(need(1, "two complex names"));
    const BoundedComplex& y = w.complex(need(2, "two complex names"));
    PextRoute route = PextRoute::ViaProjective;
    if (opts.route == "injective") route = PextRoute::ViaInjective;
    if (opts.route == "both") route = PextRoute::Both;
    FgModule p = pext(x, y, opts.degree, route);
    rep.body = json{{"degree", opts.degree},
                    {"route", opts.route},
                    {"value", json_form(p.canonical_form())}};
    rep.lines.push_back("Pext^" + std::to_string(opts.degree) + " = " +
                        p.canonical_form().describe());
    return rep;
  }

  if (cmd == "ppd" || cmd == "pid") {
    const BoundedComplex& x = w.complex(need(1, "a complex name"));
    auto [value, report] = cmd == "ppd" ? ppd(x) : pid(x);
    rep.body = json_dimreport(report);
    rep.lines.push_back(cmd + " = " + describe_value(value));
    rep.ok = report.agreed;
    return rep;
  }

  if (cmd == "roof") {
    const ChainMap& s = w.chain_map(need(1, "two chain map names"));
    const ChainMap& a = w.chain_map(need(2, "two chain map names"));
    Roof roof{s.source(), s, a};
    RoofNormalization n = roof_normalize(roof);
    json comps = json::object();
    for (int k = n.straightened.source().low_degree();
         k <= n.straightened.source().high_degree(); ++k)
      comps[std::to_string(k)] = json_matrix(n.straightened.component(k).matrix());
    rep.body = json{{"route", n.route}, {"components", std::move(comps)}};
    rep.lines.push_back("straightened through the " + n.route + " route");
    return rep;
  }

  if (cmd == "tower") {
    const std::string& sub = need(1, "a tower subcommand");
    int depth = opts.depth ? opts.depth : w.harness().depth;
    if (sub == "colim") {
      const Tower& t = w.tower(need(2, "a tower name"));
      ColimTruncation tr = colim_presentation(t, depth);
      rep.body = json{{"depth", tr.depth},
                      {"total_form", json_form(tr.total.canonical_form())},
                      {"colim_form", json_form(tr.colim.canonical_form())},
                      {"shift_matrix", json_matrix(tr.one_minus_shift.matrix())},
                      {"pure", tr.purity.pure},
                      {"limit_argument", tr.limit_argument}};
      rep.lines.push_back("truncated colimit: " +
                          tr.colim.canonical_form().describe());
      return rep;
    }
    if (sub == "hocolim") {
      const Tower& t = w.tower(need(2, "a tower name"));
      HocolimResolution hr = hocolim_resolution(t, depth);
      rep.body = json{{"depth", hr.depth},
                      {"resolution", json_resolution(hr.certified)},
                      {"ppd_upper_bound", hr.ppd_upper_bound},
                      {"notes", hr.notes}};
      rep.lines.push_back("ppd upper bound " +
                          std::to_string(hr.ppd_upper_bound));
      return rep;
    }
    if (sub == "pext1") {
      const Tower& t = w.tower(need(2, "a tower and a module name"));
      const FgModule& n = w.module(need(3, "a tower and a module name"));
      HomTowerSystem sys = pext1_colim(t, n, depth);
      json forms = json::array();
      for (const auto& f : sys.hom_forms) forms.push_back(json_form(f));
      json trans = json::array();
      for (const auto& f : sys.transitions)
        trans.push_back(json_matrix(f.matrix()));
      rep.body = json{{"depth", sys.depth},
                      {"hom_forms", std::move(forms)},
                      {"transitions", std::move(trans)},
                      {"all_zero", sys.all_zero}};
      rep.lines.push_back(sys.all_zero ? "hom system vanishes"
                                       : "hom system is nonzero");
      return rep;
    }
    if (sub == "decide") {
      const Tower& t = w.tower(need(2, "tower, module, cocycle names"));
      const FgModule& n = w.module(need(3, "tower, module, cocycle names"));
      const Cocycle& c = w.cocycle(need(4, "tower, module, cocycle names"));
      DecideOutcome d = cocycle_decide(t, n, c, depth);
      rep.body = json_decide(d);
      rep.lines.push_back("verdict: " + rep.body["kind"].get<std::string>());
      return rep;
    }
    if (sub == "holim") {
      const Tower& t = w.tower(need(2, "a tower name"));
      try {
        HolimResolution hr = holim_injective_resolution(t, depth);
        rep.body = json{{"depth", hr.depth},
                        {"resolution", json_resolution(hr.certified)},
                        {"pid_upper_bound", hr.pid_upper_bound},
                        {"notes", hr.notes}};
        rep.lines.push_back("pid upper bound " +
                            std::to_string(hr.pid_upper_bound));
      } catch (const UnsupportedInjectiveBase&) {
        throw;
      }
      return rep;
    }
    throw UnknownCommand("tower subcommand '" + sub + "'");
  }

  if (cmd == "verify") return run_verify(w, need(1, "a verify target"), opts);

  throw UnknownCommand("'" + cmd + "'");
}

}  // namespace purederive
