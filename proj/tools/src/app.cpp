#include "themelab/cli/app.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "themelab/errors.hpp"

namespace themelab::cli {

using nlohmann::json;

namespace {

const std::vector<std::pair<Command, std::string>> kCommands = {
    {Command::Invariants, "invariants"}, {Command::Bernstein, "bernstein"},
    {Command::Canonical, "canonical"},   {Command::Isom, "isom"},
    {Command::Invariance, "invariance"}, {Command::Scan, "scan"},
    {Command::Verify, "verify"}};

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [c, n] : kCommands)
    if (n == name) return c;
  return std::nullopt;
}

std::string command_name(Command c) {
  for (const auto& [k, n] : kCommands)
    if (k == c) return n;
  return "?";
}

void validate(const JobSpec& spec) {
  const std::size_t want = spec.command == Command::Isom ? 2 : 1;
  if (spec.inputs.size() != want)
    throw ParseError(command_name(spec.command) + " expects " + std::to_string(want) + " input document" +
                     (want == 1 ? "" : "s"));
  if (spec.prec && *spec.prec < kMinPrecision)
    throw ParseError("--prec must be at least " + std::to_string(kMinPrecision));
  if (spec.threads < 1) throw ParseError("--threads must be positive");
  if (!spec.grid.empty() && spec.command != Command::Scan) throw ParseError("--grid only applies to scan");
}

// ---------------------------------------------------------------------------
// documents

namespace {

std::string string_of(const TomlValue& v, const std::string& key) {
  if (v.kind == TomlValue::Kind::String) return v.str;
  if (v.kind == TomlValue::Kind::Integer) return std::to_string(v.integer);
  throw ParseError("'" + key + "' must be a string or an integer");
}

int int_of(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Kind::Integer) throw ParseError("'" + key + "' must be an integer");
  return static_cast<int>(v.integer);
}

Rational rational_of(const TomlValue& v, const std::string& key) {
  return parse_rational(string_of(v, key));
}

std::vector<Rational> axis_of(const TomlValue& v, const std::string& key) {
  if (v.kind == TomlValue::Kind::Array) {
    std::vector<Rational> out;
    for (const auto& item : v.items) out.push_back(rational_of(item, key));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  return parse_range(string_of(v, key));
}

void check_keys(const TomlValue& v, const std::vector<std::string>& allowed) {
  for (const auto& [k, _] : v.table)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ParseError("unknown key '" + k + "'");
}

}  // namespace

Document load_document(const TomlValue& v) {
  if (v.kind != TomlValue::Kind::Table) throw ParseError("input document must be a table");
  Document d;
  d.source = v;
  std::string kind;
  if (v.has("kind"))
    kind = string_of(v.at("kind"), "kind");
  else
    kind = v.has("expr") ? "xi" : "theme";
  if (kind == "theme") {
    d.kind = Document::Kind::Theme;
    check_keys(v, {"kind", "lambda1", "p", "S", "prec", "rank_bound", "params", "grid"});
    d.invariants.lambda1 = rational_of(v.at("lambda1"), "lambda1");
    const auto& p = v.at("p");
    if (p.kind != TomlValue::Kind::Array) throw ParseError("'p' must be an array of integers");
    for (const auto& item : p.items) {
      const int pj = int_of(item, "p");
      if (pj < 0) throw ParseError("entries of 'p' must be non-negative");
      d.invariants.p.push_back(pj);
    }
    if (v.has("S")) {
      const auto& s = v.at("S");
      if (s.kind != TomlValue::Kind::Array) throw ParseError("'S' must be an array of series strings");
      for (const auto& item : s.items) d.relations.push_back(string_of(item, "S"));
      if (d.relations.size() != d.invariants.p.size())
        throw ParseError("'S' needs one series per entry of 'p'");
    }
  } else if (kind == "xi") {
    d.kind = Document::Kind::Xi;
    check_keys(v, {"kind", "expr", "log_bound", "prec", "rank_bound", "params", "grid"});
    d.expr = string_of(v.at("expr"), "expr");
    if (v.has("log_bound")) d.log_bound = int_of(v.at("log_bound"), "log_bound");
    if (d.log_bound < 0) throw ParseError("'log_bound' must be non-negative");
  } else {
    throw ParseError("unknown document kind '" + kind + "'");
  }
  if (v.has("prec")) {
    d.prec = int_of(v.at("prec"), "prec");
    if (*d.prec < kMinPrecision) throw ParseError("'prec' must be at least " + std::to_string(kMinPrecision));
  }
  if (v.has("rank_bound")) d.rank_bound = int_of(v.at("rank_bound"), "rank_bound");
  if (d.rank_bound < 1) throw ParseError("'rank_bound' must be positive");
  if (v.has("params")) {
    const auto& t = v.at("params");
    if (t.kind != TomlValue::Kind::Table) throw ParseError("[params] must be a table");
    for (const auto& [k, val] : t.table) d.params[k] = rational_of(val, k);
  }
  if (v.has("grid")) {
    const auto& t = v.at("grid");
    if (t.kind != TomlValue::Kind::Table) throw ParseError("[grid] must be a table");
    for (const auto& [k, val] : t.table) d.grid[k] = axis_of(val, k);
  }
  return d;
}

Document load_document_file(const std::string& path) { return load_document(parse_toml_file(path)); }

json to_json(const TomlValue& v) {
  switch (v.kind) {
    case TomlValue::Kind::String: return v.str;
    case TomlValue::Kind::Integer: return v.integer;
    case TomlValue::Kind::Boolean: return v.boolean;
    case TomlValue::Kind::Array: {
      json a = json::array();
      for (const auto& item : v.items) a.push_back(to_json(item));
      return a;
    }
    case TomlValue::Kind::Table: {
      json o = json::object();
      for (const auto& [k, item] : v.table) o[k] = to_json(item);
      return o;
    }
  }
  return nullptr;
}

TomlValue from_json(const json& j) {
  TomlValue v;
  if (j.is_string()) return TomlValue::make_string(j.get<std::string>());
  if (j.is_number_integer()) return TomlValue::make_integer(j.get<long>());
  if (j.is_boolean()) {
    v.kind = TomlValue::Kind::Boolean;
    v.boolean = j.get<bool>();
    return v;
  }
  if (j.is_array()) {
    v.kind = TomlValue::Kind::Array;
    for (const auto& item : j) v.items.push_back(from_json(item));
    return v;
  }
  if (j.is_object()) {
    v.kind = TomlValue::Kind::Table;
    for (const auto& [k, item] : j.items()) v.table[k] = from_json(item);
    return v;
  }
  throw ParseError("unsupported JSON value in embedded input");
}

void apply_grid_option(Document& doc, std::string_view option) {
  const auto eq = option.find('=');
  if (eq == std::string_view::npos) throw ParseError("--grid expects name=range, got '" + std::string(option) + "'");
  std::string name(option.substr(0, eq));
  name.erase(std::remove(name.begin(), name.end(), ' '), name.end());
  if (name.empty()) throw ParseError("--grid needs a parameter name");
  const auto values = parse_range(option.substr(eq + 1));
  doc.grid[name] = values;
  // keep the embedded source in step so reports re-run identically
  TomlValue& g = doc.source.table["grid"];
  g.kind = TomlValue::Kind::Table;
  TomlValue arr;
  arr.kind = TomlValue::Kind::Array;
  for (const auto& q : values) arr.items.push_back(TomlValue::make_string(to_string(q)));
  g.table[name] = arr;
}

ThemePresentation presentation_of(const Document& doc, int prec) {
  if (doc.kind != Document::Kind::Theme) throw ParseError("expected a theme document (lambda1, p, S)");
  if (doc.relations.size() != doc.invariants.p.size())
    throw ParseError("theme document needs 'S' with one series per entry of 'p'");
  std::vector<TruncSeries> rel;
  for (const auto& text : doc.relations) rel.push_back(parse_series(text, prec, doc.params));
  return ThemePresentation(doc.invariants, rel, prec);
}

// ---------------------------------------------------------------------------
// witness checks

namespace {

ThemeElement b_times(const ThemeElement& x, const Rational& c) {
  return TruncSeries::monomial(c, 1, x.prec()) * x;
}

bool zero_element(const ThemeElement& x) {
  return std::all_of(x.comps.begin(), x.comps.end(), [](const TruncSeries& s) { return s.is_zero(); });
}

}  // namespace

bool check_isomorphism_witness(const ThemePresentation& e, const ThemePresentation& target,
                               const std::vector<ThemeElement>& eps, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const int k = e.rank();
  if (target.rank() != k) return fail("ranks differ");
  if (static_cast<int>(eps.size()) != k) return fail("witness needs one element per generator");
  for (int j = 1; j <= k; ++j) {
    const auto& x = eps[static_cast<std::size_t>(j - 1)];
    if (x.rank() != k) return fail("witness element of the wrong rank");
    if (x.level() != j) return fail("eps" + std::to_string(j) + " is not triangular");
    if (x.component(j)[0] == 0) return fail("eps" + std::to_string(j) + " has a non-unit diagonal entry");
  }
  for (int j = 1; j <= k; ++j) {
    const auto& x = eps[static_cast<std::size_t>(j - 1)];
    ThemeElement r = theme_a_apply(e, x) - b_times(x, target.lambda(j));
    if (j > 1) r -= target.relation(j - 1) * eps[static_cast<std::size_t>(j - 2)];
    if (!zero_element(r))
      return fail("relation " + std::to_string(j) + " fails: residual " + to_string(r));
  }
  return true;
}

bool check_invariance_witness(const ThemePresentation& e, const ThemeElement& x, std::string* why) {
  const int k = e.rank();
  if (x.rank() != k) {
    if (why) *why = "witness of the wrong rank";
    return false;
  }
  if (x.level() != k - 1) {
    if (why) *why = "witness does not lie in F_" + std::to_string(k - 1) + " minus F_" + std::to_string(k - 2);
    return false;
  }
  const ThemeElement r = apply_operator(e, defining_operator(e), x);
  if (!zero_element(r)) {
    if (why) *why = "P.x = " + to_string(r);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// commands

namespace {

json jrat(const Rational& q) { return to_string(q); }

json jrats(const std::vector<Rational>& qs) {
  json a = json::array();
  for (const auto& q : qs) a.push_back(jrat(q));
  return a;
}

json jinv(const FundamentalInvariants& inv) {
  return json{{"lambda1", jrat(inv.lambda1)}, {"p", inv.p}};
}

json jrank(const RankCertificate& c) {
  return json{{"lower", c.lower}, {"upper", c.upper}, {"certified", c.upper_certified}};
}

json jelement(const ThemeElement& x) {
  json comps = json::array();
  for (const auto& s : x.comps) comps.push_back(to_string(s));
  return json{{"prec", x.prec()}, {"components", comps}, {"text", to_string(x)}};
}

ThemeElement element_from_json(const json& j, int rank) {
  const int prec = j.at("prec").get<int>();
  ThemeElement x;
  for (const auto& c : j.at("components")) x.comps.push_back(parse_series(c.get<std::string>(), prec));
  if (x.rank() != rank) throw ParseError("embedded witness has the wrong rank");
  return x;
}

std::string polynomial_text(const std::vector<Rational>& coeffs) {
  std::ostringstream os;
  bool first = true;
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
    const Rational& c = coeffs[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const bool neg = c < 0;
    const Rational mag = neg ? Rational(-c) : c;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    if (i == 0) {
      os << to_string(mag);
      continue;
    }
    if (mag != 1) os << to_string(mag) << "*";
    os << "x";
    if (i > 1) os << "^" << i;
  }
  return first ? "0" : os.str();
}

json jspace(const FundamentalInvariants& inv) {
  if (inv.lambda1 <= inv.rank() - 1) return nullptr;
  const CanonicalSpace cs = canonical_space(inv);
  json factors = json::array();
  for (const auto& f : cs.factors) {
    json jf{{"j", f.j}, {"support", f.support}};
    jf["q"] = f.q ? json(*f.q) : json(nullptr);
    jf["unit_power"] = f.unit_power ? json(*f.unit_power) : json(nullptr);
    factors.push_back(jf);
  }
  return json{{"shape", cs.shape()},
              {"affine_dim", cs.affine_dim},
              {"punctured_dim", cs.punctured_dim},
              {"factors", factors}};
}

// Bernstein data of a generator known to be k-thematic.
json jbernstein(const XiElement& phi, int k, std::optional<FundamentalInvariants>& inv_out) {
  const BernsteinData bd = bernstein_from_generator(phi, k);
  const auto mus = factor_homogeneous(bd.element, phi.lambda());
  inv_out = invariants_from_exponents(mus);
  json rel = json::array();
  for (const auto& s : bd.S) rel.push_back(to_string(s));
  return json{{"element", to_string(bd.element)},
              {"exponents", jrats(mus)},
              {"polynomial", polynomial_text(bernstein_polynomial(mus))},
              {"relations", rel}};
}

Outcome classify_single(const Document& d, int prec) {
  Outcome out;
  json r;
  std::optional<XiElement> phi;
  int k = 0;
  RankCertificate cert;
  if (d.kind == Document::Kind::Theme) {
    const ThemePresentation e = presentation_of(d, prec);
    phi = embed_into_xi(e);
    k = e.rank();
    cert = thematic_rank(*phi, std::max(d.rank_bound, k));
    r["declared"] = jinv(d.invariants);
    r["generator"] = to_string(*phi);
  } else {
    phi = XiExpression(d.expr).evaluate(d.params, prec, d.log_bound);
    cert = thematic_rank(*phi, d.rank_bound);
    k = cert.lower;
  }
  r["rank"] = jrank(cert);
  if (k == 0) {
    r["thematic"] = "zero";
    out.report = r;
    return out;
  }
  const ThematicResult th = is_k_thematic(*phi, k);
  if (th.verdict != ThematicResult::Verdict::Yes) {
    r["thematic"] = th.verdict == ThematicResult::Verdict::No ? "no" : "inconclusive";
    r["reason"] = th.reason;
    if (th.verdict == ThematicResult::Verdict::Inconclusive) out.exit_code = 2;
    out.report = r;
    return out;
  }
  r["thematic"] = "yes";
  std::optional<FundamentalInvariants> inv;
  r["bernstein"] = jbernstein(*phi, k, inv);
  r["invariants"] = jinv(*inv);
  r["canonical_space"] = jspace(*inv);
  if (d.kind == Document::Kind::Theme) {
    r["matches_declared"] = *inv == d.invariants;
    if (!(*inv == d.invariants)) out.exit_code = 1;
  }
  out.report = r;
  return out;
}

Outcome canonical_single(const Document& d, int prec) {
  Outcome out;
  json r;
  if (d.kind == Document::Kind::Theme) {
    const auto& inv = d.invariants;
    r["invariants"] = jinv(inv);
    if (inv.lambda1 <= inv.rank() - 1)
      throw InvalidArgument("canonical space needs lambda1 > k - 1");
    r["space"] = jspace(inv);
    if (!d.relations.empty()) {
      const ThemePresentation e = presentation_of(d, prec);
      try {
        validate(CanonicalPoint{inv, e.relations()});
        r["in_canonical_space"] = true;
      } catch (const InvalidCanonicalPoint& ex) {
        r["in_canonical_space"] = false;
        r["reason"] = ex.what();
      }
      if (e.rank() == 2 && inv.p[0] >= 1) {
        try {
          r["parameter"] = jrat(parameter_of_rank2(e));
        } catch (const NotNormalized& ex) {
          r["parameter"] = nullptr;
          r["reason"] = ex.what();
        }
      }
    }
    out.report = r;
    return out;
  }
  Outcome cls = classify_single(d, prec);
  if (cls.report.value("thematic", "") != "yes") {
    cls.report["canonical"] = nullptr;
    return cls;
  }
  r = cls.report;
  const json& ji = r["invariants"];
  FundamentalInvariants inv{parse_rational(ji["lambda1"].get<std::string>()), ji["p"].get<std::vector<int>>()};
  if (inv.rank() == 2) {
    const XiElement phi = XiExpression(d.expr).evaluate(d.params, prec, d.log_bound);
    const Rank2Reduction red = rank2_reduce(phi, inv.lambda1, inv.p[0]);
    json c;
    c["parameter"] = red.alpha ? jrat(*red.alpha) : json(nullptr);
    c["generator"] = to_string(red.generator);
    c["S"] = to_string(red.S);
    r["canonical"] = c;
  } else {
    r["canonical"] = nullptr;
  }
  out.report = r;
  out.exit_code = cls.exit_code;
  return out;
}

std::string verdict_name(IsomorphismResult::Verdict v) {
  switch (v) {
    case IsomorphismResult::Verdict::Isomorphic: return "isomorphic";
    case IsomorphismResult::Verdict::NotIsomorphic: return "not isomorphic";
    case IsomorphismResult::Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string verdict_name(InvarianceResult::Verdict v) {
  switch (v) {
    case InvarianceResult::Verdict::Invariant: return "invariant";
    case InvarianceResult::Verdict::NotInvariant: return "not invariant";
    case InvarianceResult::Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Outcome isom(const Document& a, const Document& b, int prec) {
  const ThemePresentation e = presentation_of(a, prec);
  const ThemePresentation f = presentation_of(b, prec);
  const IsomorphismResult res = isomorphism_test(e, f);
  Outcome out;
  json r;
  r["verdict"] = verdict_name(res.verdict);
  if (!res.witness.empty()) {
    json w = json::array();
    for (const auto& x : res.witness) w.push_back(jelement(x));
    r["witness"] = w;
    const int k = e.rank();
    if (k >= 2) r["U"] = to_string(res.witness.back().component(k - 1));
  }
  if (res.distinguisher) {
    const auto names = res.cascade.names();
    r["distinguisher"] = json{{"relation", res.distinguisher->relation},
                              {"reduced", to_string(res.distinguisher->reduced, names)}};
  }
  if (!res.reason.empty()) r["reason"] = res.reason;
  if (res.verdict == IsomorphismResult::Verdict::Inconclusive) out.exit_code = 2;
  out.report = r;
  return out;
}

Outcome invariance(const Document& d, int prec) {
  const ThemePresentation e = presentation_of(d, prec);
  if (e.rank() < 2) throw InvalidArgument("invariance needs rank at least 2");
  const InvarianceResult res = invariance_test(e);
  Outcome out;
  json r;
  r["verdict"] = verdict_name(res.verdict);
  if (res.witness) r["witness"] = jelement(*res.witness);
  r["chain"] = res.chain;
  if (!res.reason.empty()) r["reason"] = res.reason;
  if (res.verdict == InvarianceResult::Verdict::Inconclusive) out.exit_code = 2;
  out.report = r;
  return out;
}

json jpoint(const ParameterMap& p) {
  json o = json::object();
  for (const auto& [k, v] : p) o[k] = jrat(v);
  return o;
}

Outcome scan(const Document& d, int prec, int threads) {
  if (d.grid.empty()) throw ParseError("scan needs a [grid] table or --grid");
  auto grid = make_grid(d.grid);
  for (auto& point : grid)
    for (const auto& [k, v] : d.params) point.emplace(k, v);
  ScanOptions opts;
  opts.prec = prec;
  opts.rank_bound = d.rank_bound;
  opts.threads = threads;
  ScanReport rep;
  if (d.kind == Document::Kind::Xi) {
    rep = scan_family(XiExpression(d.expr), grid, opts);
  } else {
    if (d.relations.size() != d.invariants.p.size())
      throw ParseError("theme family needs 'S' with one series per entry of 'p'");
    rep = scan_family(ThemeFamily{d.invariants, d.relations}, grid, opts);
  }
  Outcome out;
  json records = json::array();
  bool unclassified = false;
  for (const auto& rec : rep.records) {
    json jr;
    jr["point"] = jpoint(rec.point);
    jr["rank"] = rec.rank ? json{{"lower", rec.rank->lower}, {"upper", rec.rank->upper}} : json(nullptr);
    jr["bernstein"] = jrats(rec.bernstein);
    jr["invariants"] = rec.invariants ? jinv(*rec.invariants) : json(nullptr);
    jr["flags"] = rec.flags;
    if (rec.error) jr["error"] = *rec.error;
    if (rec.invariant) jr["invariant"] = *rec.invariant;
    if (rec.error || rec.inconclusive) unclassified = true;
    records.push_back(jr);
  }
  json strata = json::array();
  for (const auto& [key, idx] : rep.strata) {
    const bool jumped = std::any_of(idx.begin(), idx.end(), [&](std::size_t i) {
      const auto& f = rep.records[i].flags;
      return std::find(f.begin(), f.end(), "bernstein-jump") != f.end();
    });
    strata.push_back(json{{"key", key}, {"points", idx}, {"generic", !jumped && key != "error"}});
  }
  out.report = json{{"records", records}, {"strata", strata}, {"jump", rep.jump},
                    {"inconclusive", rep.any_inconclusive}};
  if (unclassified) out.exit_code = 2;
  return out;
}

}  // namespace

Outcome execute(Command command, const std::vector<Document>& docs, int prec, int threads) {
  Outcome inner;
  switch (command) {
    case Command::Invariants:
    case Command::Bernstein: inner = classify_single(docs.at(0), prec); break;
    case Command::Canonical: inner = canonical_single(docs.at(0), prec); break;
    case Command::Isom: inner = isom(docs.at(0), docs.at(1), prec); break;
    case Command::Invariance: inner = invariance(docs.at(0), prec); break;
    case Command::Scan: inner = scan(docs.at(0), prec, threads); break;
    case Command::Verify: throw InvalidArgument("verify is not a report-producing command");
  }
  json input;
  if (command == Command::Isom)
    input = json::array({to_json(docs.at(0).source), to_json(docs.at(1).source)});
  else
    input = to_json(docs.at(0).source);
  Outcome out;
  out.exit_code = inner.exit_code;
  out.report = json{{"command", command_name(command)},
                    {"prec", prec},
                    {"input", input},
                    {"result", inner.report},
                    {"exit_code", inner.exit_code}};
  return out;
}

// ---------------------------------------------------------------------------
// text rendering

namespace {

std::string inv_text(const json& j) {
  FundamentalInvariants inv{parse_rational(j.at("lambda1").get<std::string>()), j.at("p").get<std::vector<int>>()};
  return to_string(inv);
}

std::string list_text(const json& arr) {
  std::string s = "[";
  for (std::size_t i = 0; i < arr.size(); ++i) s += (i ? ", " : "") + arr[i].get<std::string>();
  return s + "]";
}

std::string point_text(const json& p) {
  std::string s;
  for (const auto& [k, v] : p.items()) s += (s.empty() ? "" : ", ") + k + " = " + v.get<std::string>();
  return s;
}

void render_classify(std::ostream& os, const std::string& cmd, const json& r) {
  const json& rank = r.at("rank");
  os << "rank " << rank.at("lower").get<int>();
  if (rank.at("upper") != rank.at("lower")) os << ".." << rank.at("upper").get<int>();
  os << (rank.at("certified").get<bool>() ? " (certified)" : " (to working precision)") << "\n";
  const std::string th = r.at("thematic");
  if (th != "yes") {
    os << (th == "zero" ? "zero generator" : th == "no" ? "not thematic" : "inconclusive");
    if (r.contains("reason")) os << ": " << r.at("reason").get<std::string>();
    os << "\n";
    return;
  }
  const json& b = r.at("bernstein");
  if (cmd == "bernstein") {
    os << "bernstein element: " << b.at("element").get<std::string>() << "\n";
    os << "factor exponents: " << list_text(b.at("exponents")) << "\n";
    os << "bernstein polynomial: " << b.at("polynomial").get<std::string>() << "\n";
  }
  os << "invariants: " << inv_text(r.at("invariants")) << "\n";
  if (cmd == "invariants") {
    os << "factor exponents: " << list_text(b.at("exponents")) << "\n";
    if (!r.at("canonical_space").is_null())
      os << "canonical space: " << r.at("canonical_space").at("shape").get<std::string>() << "\n";
  }
  if (r.contains("matches_declared") && !r.at("matches_declared").get<bool>())
    os << "declared invariants differ: " << inv_text(r.at("declared")) << "\n";
}

void render_canonical(std::ostream& os, const json& r) {
  if (r.contains("space")) {
    os << "invariants: " << inv_text(r.at("invariants")) << "\n";
    const json& s = r.at("space");
    os << "canonical space: " << s.at("shape").get<std::string>() << "\n";
    for (const auto& f : s.at("factors")) {
      os << "  S" << f.at("j").get<int>() << ": monomials b^{";
      const auto sup = f.at("support").get<std::vector<int>>();
      for (std::size_t i = 0; i < sup.size(); ++i) os << (i ? ", " : "") << sup[i];
      os << "}";
      if (!f.at("unit_power").is_null()) os << ", b^" << f.at("unit_power").get<int>() << " coefficient non-zero";
      if (!f.at("q").is_null()) os << ", q = " << f.at("q").get<int>();
      os << "\n";
    }
    if (r.contains("in_canonical_space"))
      os << "point " << (r.at("in_canonical_space").get<bool>() ? "lies" : "does not lie")
         << " in the canonical space\n";
    if (r.contains("parameter") && !r.at("parameter").is_null())
      os << "parameter alpha = " << r.at("parameter").get<std::string>() << "\n";
    if (r.contains("reason")) os << r.at("reason").get<std::string>() << "\n";
    return;
  }
  render_classify(os, "invariants", r);
  if (r.contains("canonical") && !r.at("canonical").is_null()) {
    const json& c = r.at("canonical");
    if (!c.at("parameter").is_null()) os << "parameter alpha = " << c.at("parameter").get<std::string>() << "\n";
    os << "canonical generator: " << c.at("generator").get<std::string>() << "\n";
  }
}

void render_isom(std::ostream& os, const json& r) {
  os << r.at("verdict").get<std::string>() << "\n";
  if (r.contains("witness")) {
    int j = 1;
    for (const auto& w : r.at("witness")) os << "  eps" << j++ << " = " << w.at("text").get<std::string>() << "\n";
  }
  if (r.contains("U")) os << "U = " << r.at("U").get<std::string>() << "\n";
  if (r.contains("distinguisher")) {
    const json& d = r.at("distinguisher");
    os << "distinguisher: " << d.at("relation").get<std::string>() << "\n";
    os << "  reduces to " << d.at("reduced").get<std::string>() << " = 0\n";
  }
  if (r.contains("reason")) os << r.at("reason").get<std::string>() << "\n";
}

void render_invariance(std::ostream& os, const json& r) {
  os << r.at("verdict").get<std::string>();
  if (r.contains("witness")) os << ", witness x = " << r.at("witness").at("text").get<std::string>();
  os << "\n";
  if (!r.contains("witness") && !r.at("chain").empty()) {
    os << "obstruction chain:\n";
    for (const auto& c : r.at("chain")) os << "  " << c.get<std::string>() << "\n";
  }
  if (r.contains("reason")) os << r.at("reason").get<std::string>() << "\n";
}

void render_scan(std::ostream& os, const json& r) {
  std::vector<std::array<std::string, 5>> rows{{"point", "rank", "bernstein", "invariants", "flags"}};
  for (const auto& rec : r.at("records")) {
    std::array<std::string, 5> row;
    row[0] = point_text(rec.at("point"));
    if (!rec.at("rank").is_null()) {
      const int lo = rec.at("rank").at("lower"), hi = rec.at("rank").at("upper");
      row[1] = std::to_string(lo) + (lo == hi ? "" : ".." + std::to_string(hi));
    }
    row[2] = list_text(rec.at("bernstein"));
    row[3] = rec.at("invariants").is_null() ? "-" : inv_text(rec.at("invariants"));
    std::string flags;
    for (const auto& f : rec.at("flags")) flags += (flags.empty() ? "" : ",") + f.get<std::string>();
    row[4] = flags;
    rows.push_back(row);
  }
  std::array<std::size_t, 5> width{};
  for (const auto& row : rows)
    for (std::size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], row[c].size());
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < 5; ++c) {
      line += row[c];
      if (c + 1 < 5) line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << "\n";
  }
  for (const auto& rec : r.at("records"))
    if (rec.contains("error")) os << point_text(rec.at("point")) << ": " << rec.at("error").get<std::string>() << "\n";
  os << "strata:\n";
  for (const auto& s : r.at("strata"))
    os << "  " << s.at("key").get<std::string>() << ": " << s.at("points").size() << " point"
       << (s.at("points").size() == 1 ? "" : "s") << (s.at("generic").get<bool>() ? " (generic)" : "") << "\n";
  if (r.at("jump").get<bool>()) os << "bernstein jump: the family is not thematic with constant invariants\n";
}

}  // namespace

std::string render_text(const json& report) {
  std::ostringstream os;
  const std::string cmd = report.at("command");
  const json& r = report.at("result");
  if (cmd == "invariants" || cmd == "bernstein")
    render_classify(os, cmd, r);
  else if (cmd == "canonical")
    render_canonical(os, r);
  else if (cmd == "isom")
    render_isom(os, r);
  else if (cmd == "invariance")
    render_invariance(os, r);
  else if (cmd == "scan")
    render_scan(os, r);
  else if (cmd == "verify") {
    os << (r.at("reproduced").get<bool>() ? "report reproduced" : "report NOT reproduced") << "\n";
    if (!r.at("witness").is_null())
      os << (r.at("witness").get<bool>() ? "witness verified" : "witness FAILED") << "\n";
    if (r.contains("detail")) os << r.at("detail").get<std::string>() << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// front end

namespace {

Outcome verify(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json given;
  try {
    given = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!given.is_object() || !given.contains("command") || !given.contains("input") || !given.contains("prec"))
    throw ParseError("not a theme-lab report");
  const auto cmd = parse_command(given.at("command").get<std::string>());
  if (!cmd || *cmd == Command::Verify) throw ParseError("report has an unknown command");
  const int prec = given.at("prec").get<int>();
  std::vector<Document> docs;
  if (*cmd == Command::Isom) {
    for (const auto& j : given.at("input")) docs.push_back(load_document(from_json(j)));
    if (docs.size() != 2) throw ParseError("isom report needs two inputs");
  } else {
    docs.push_back(load_document(from_json(given.at("input"))));
  }
  const Outcome again = execute(*cmd, docs, prec);
  json r;
  r["reproduced"] = again.report.dump() == given.dump();
  r["witness"] = nullptr;
  std::string why;
  const json& res = given.at("result");
  if (*cmd == Command::Isom && res.contains("witness")) {
    const ThemePresentation e = presentation_of(docs[0], prec);
    const ThemePresentation f = presentation_of(docs[1], prec);
    std::vector<ThemeElement> eps;
    for (const auto& w : res.at("witness")) eps.push_back(element_from_json(w, e.rank()));
    r["witness"] = check_isomorphism_witness(e, f, eps, &why);
  } else if (*cmd == Command::Invariance && res.contains("witness")) {
    const ThemePresentation e = presentation_of(docs[0], prec);
    r["witness"] = check_invariance_witness(e, element_from_json(res.at("witness"), e.rank()), &why);
  }
  if (!why.empty()) r["detail"] = why;
  Outcome out;
  const bool ok = r["reproduced"].get<bool>() && (r["witness"].is_null() || r["witness"].get<bool>());
  out.exit_code = ok ? 0 : 1;
  out.report = json{{"command", "verify"}, {"input", path}, {"result", r}, {"exit_code", out.exit_code}};
  return out;
}

}  // namespace

int run(const JobSpec& spec, std::ostream& out, std::ostream& err) {
  int code = 0;
  std::string message;
  try {
    validate(spec);
    Outcome o;
    if (spec.command == Command::Verify) {
      o = verify(spec.inputs.at(0));
    } else {
      std::vector<Document> docs;
      for (const auto& path : spec.inputs) docs.push_back(load_document_file(path));
      for (const auto& g : spec.grid) apply_grid_option(docs[0], g);
      int prec = kDefaultPrecision;
      if (spec.prec) {
        prec = *spec.prec;
      } else {
        bool set = false;
        for (const auto& d : docs)
          if (d.prec) {
            prec = set ? std::min(prec, *d.prec) : *d.prec;
            set = true;
          }
      }
      o = execute(spec.command, docs, prec, spec.threads);
    }
    if (spec.format == Format::Json)
      out << o.report.dump(2) << "\n";
    else
      out << render_text(o.report);
    return o.exit_code;
  } catch (const PrecisionExhausted& e) {
    code = 3;
    message = e.what();
  } catch (const PrecisionExceeded& e) {
    code = 3;
    message = e.what();
  } catch (const Error& e) {
    code = 1;
    message = e.what();
  } catch (const json::exception& e) {
    code = 1;
    message = std::string("malformed report: ") + e.what();
  }
  err << "theme-lab: " << message << "\n";
  if (spec.format == Format::Json) out << json{{"error", message}, {"exit_code", code}}.dump(2) << "\n";
  return code;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classification of rank-k themes over the (a,b)-algebra"};
  app.require_subcommand(1);
  JobSpec spec;
  std::optional<int> prec;
  bool as_json = false;
  std::vector<std::string> grid;
  int threads = 1;
  auto common = [&](CLI::App* sub, bool with_grid) {
    sub->add_option("--prec", prec, "working precision in b (at least 8)");
    sub->add_flag("--json", as_json, "emit the JSON report");
    if (with_grid) {
      sub->add_option("--grid", grid, "grid axis, e.g. \"z=-2..2 step 1/2\"");
      sub->add_option("--threads", threads, "worker threads for grid points");
    }
  };
  std::vector<std::string> inputs;
  struct Entry {
    Command cmd;
    const char* help;
    int n;
  };
  const Entry entries[] = {
      {Command::Invariants, "fundamental invariants of a theme or generator", 1},
      {Command::Bernstein, "Bernstein element and polynomial", 1},
      {Command::Canonical, "canonical parameter space and rank-2 canonical form", 1},
      {Command::Isom, "isomorphism test between two themes", 2},
      {Command::Invariance, "invariance test (rank k-1 endomorphism)", 1},
      {Command::Scan, "stratify a family over a parameter grid", 1},
      {Command::Verify, "re-run a JSON report and re-check its witnesses", 1},
  };
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(command_name(e.cmd), e.help);
    sub->add_option("inputs", inputs, e.n == 2 ? "two theme documents" : "input document")
        ->required()
        ->expected(e.n);
    common(sub, e.cmd == Command::Scan);
    sub->callback([&spec, cmd = e.cmd] { spec.command = cmd; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "theme-lab: " << e.what() << "\n";
    return 1;
  }
  spec.inputs = inputs;
  spec.prec = prec;
  spec.format = as_json ? Format::Json : Format::Text;
  spec.grid = grid;
  spec.threads = threads;
  return run(spec, out, err);
}

}  // namespace themelab::cli
