#include "app.hpp"

#include "legendre/contact.hpp"
#include "legendre/decompose.hpp"
#include "legendre/errors.hpp"
#include "legendre/phase.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace legendre::app {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); }

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, "missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(where + "." + key, e.what());
  }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get<T>(j, key, where);
}

const json& object_or_empty(const json& j, const std::string& key) {
  static const json empty = json::object();
  if (j.is_object() && j.contains(key)) return j.at(key);
  return empty;
}

cplx parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(where, "expected a number or [re, im]");
}

std::vector<std::string> n_vars_names(int n) {
  std::vector<std::string> out{"x"};
  for (int i = 1; i < n; ++i) out.push_back("y" + std::to_string(i));
  return out;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

template <class Poly>
json polynomial_json(const Poly& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms()) {
    json t;
    t["exp"] = e;
    if constexpr (std::is_same_v<Poly, CPolynomial>)
      t["c"] = complex_json(c);
    else
      t["c"] = c;
    out.push_back(t);
  }
  return out;
}

QuadratureSettings quadrature(const Tolerances& t) {
  QuadratureSettings s;
  s.rel_tol = t.quad_rel;
  s.abs_tol = t.quad_abs;
  return s;
}

json envelope(const std::string& command, const json& cfg, const RunOptions& opt, const Tolerances& tol) {
  json e;
  e["schema_version"] = kSchemaVersion;
  e["tool"] = kToolName;
  e["version"] = kVersion;
  e["command"] = command;
  json overrides = json::object();
  for (const auto& [k, v] : opt.tol_overrides) overrides[k] = v;
  json hashed;
  hashed["config"] = cfg;
  hashed["overrides"] = overrides;
  hashed["seed"] = opt.seed;
  e["config_hash"] = hex64(fnv1a64(hashed.dump()));
  e["seed"] = opt.seed;
  e["scenario"] = cfg;
  e["tolerances"] = tol.to_json();
  return e;
}

const Intersecting& require_intersecting(const ModelDistribution& d, const std::string& command) {
  const auto* p = std::get_if<Intersecting>(&d);
  if (!p) throw ConfigError(command + ": class must be 'intersecting'");
  return *p;
}

}  // namespace

json Tolerances::to_json() const {
  return {{"quad_rel", quad_rel}, {"quad_abs", quad_abs}, {"membership", membership}, {"interp", interp},
          {"lemma", lemma}};
}

json parse_config_text(const std::string& text) {
  try {
    json j = json::parse(text, nullptr, true, true);
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    const int version = get_or<int>(j, "schema_version", kSchemaVersion, "config");
    if (version != kSchemaVersion)
      throw ConfigError("config: schema_version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kSchemaVersion) + ")");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CPolynomial parse_cpolynomial(const json& j, std::size_t nvars, const std::string& where) {
  if (j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number()))
    return CPolynomial::constant(nvars, parse_complex(j, where));
  if (!j.is_array()) fail(where, "polynomial must be a number, [re, im] or a list of {exp, c} terms");
  CPolynomial p(nvars);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const auto e = get<std::vector<int>>(j[i], "exp", w);
    if (e.size() != nvars)
      fail(w, "exponent list has " + std::to_string(e.size()) + " entries, expected " + std::to_string(nvars));
    for (const int x : e)
      if (x < 0) fail(w, "negative exponent");
    if (!j[i].contains("c")) fail(w, "missing key 'c'");
    p.add_term(CPolynomial::Exponents(e.begin(), e.end()), parse_complex(j[i]["c"], w + ".c"));
  }
  return p;
}

Polynomial parse_polynomial(const json& j, std::size_t nvars, const std::string& where) {
  const CPolynomial c = parse_cpolynomial(j, nvars, where);
  Polynomial p(nvars);
  for (const auto& [e, v] : c.terms()) {
    if (v.imag() != 0.0) fail(where, "real polynomial expected");
    p.add_term(e, v.real());
  }
  return p;
}

SchwartzAmplitude parse_amplitude(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "amplitude must be a list of Hermite-Gaussian terms");
  std::vector<HermiteTerm> terms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_object()) fail(w, "term must be an object");
    HermiteTerm t;
    t.k = get_or<int>(j[i], "k", 0, w);
    t.coeff = j[i].contains("coeff") ? parse_complex(j[i]["coeff"], w + ".coeff") : cplx(1.0);
    t.center = get_or<double>(j[i], "center", 0.0, w);
    t.width = get_or<double>(j[i], "width", 1.0, w);
    t.frequency = get_or<double>(j[i], "frequency", 0.0, w);
    if (t.k < 0) fail(w, "Hermite degree must be nonnegative");
    if (!(t.width > 0.0)) fail(w, "width must be positive");
    terms.push_back(t);
  }
  try {
    return SchwartzAmplitude(terms);
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

std::vector<double> parse_axis(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) fail(where, "axis list must hold numbers");
      out.push_back(v.get<double>());
    }
    if (out.empty()) fail(where, "empty axis");
    return out;
  }
  if (!j.is_object() || j.size() != 1) fail(where, "axis must be a list or one of {linspace, geomspace, geometric}");
  const auto& [kind, spec] = *j.items().begin();
  const auto a = spec.get<std::vector<double>>();
  if (a.size() != 3) fail(where + "." + kind, "expected three numbers");
  const int count = static_cast<int>(a[2]);
  if (count < 1 || a[2] != count) fail(where + "." + kind, "count must be a positive integer");
  std::vector<double> out;
  if (kind == "linspace") {
    for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a[0] : a[0] + (a[1] - a[0]) * i / (count - 1));
  } else if (kind == "geomspace") {
    if (!(a[0] > 0.0 && a[1] > 0.0)) fail(where, "geomspace needs positive ends");
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? a[0] : a[0] * std::pow(a[1] / a[0], static_cast<double>(i) / (count - 1)));
  } else if (kind == "geometric") {
    for (int i = 0; i < count; ++i) out.push_back(a[0] * std::pow(a[1], i));
  } else {
    fail(where, "unknown axis kind '" + kind + "'");
  }
  return out;
}

ModelDistribution build_model(const json& cfg) {
  const auto cls = get<std::string>(cfg, "class", "config");
  const int n = get_or<int>(cfg, "n", 2, "config");
  const int k = get_or<int>(cfg, "k", 1, "config");
  const double m = get_or<double>(cfg, "m", 0.0, "config");
  if (n < 2) fail("config.n", "must be at least 2");
  if (k < 1 || k > n - 1) fail("config.k", "need 1 <= k <= n-1");
  const auto un = static_cast<std::size_t>(n);
  const auto uk = static_cast<std::size_t>(k);
  try {
    if (cls == "type1") {
      Type1 d;
      d.m = m;
      d.n = n;
      d.phase = PhaseFunction(n - 1, 0, parse_polynomial(cfg.at("phase"), un - 1, "config.phase"));
      d.amplitude = parse_cpolynomial(cfg.at("amplitude"), un, "config.amplitude");
      return d;
    }
    if (cls == "type2") {
      Type2 d;
      d.m = m;
      d.n = n;
      d.k = k;
      const auto& comps = cfg.at("components");
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string w = "config.components[" + std::to_string(i) + "]";
        Type2Component c;
        c.passive = parse_cpolynomial(comps[i].at("passive"), 1 + un - 1 - uk, w + ".passive");
        const auto& f = comps[i].at("factors");
        if (f.size() != uk) fail(w + ".factors", "need k factors");
        for (std::size_t q = 0; q < f.size(); ++q)
          c.factors.push_back(parse_amplitude(f[q], w + ".factors[" + std::to_string(q) + "]"));
        d.components.push_back(std::move(c));
      }
      return d;
    }
    if (cls == "intersecting") {
      Intersecting d;
      d.m = m;
      d.n = n;
      d.k = k;
      const auto& comps = cfg.at("components");
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string w = "config.components[" + std::to_string(i) + "]";
        IntersectingComponent c;
        c.passive = parse_cpolynomial(comps[i].at("passive"), un + uk, w + ".passive");
        const auto& prof = comps[i].at("profile");
        if (prof.is_string()) {
          if (prof.get<std::string>() != "cutoff_derivative") fail(w + ".profile", "unknown named profile");
          c.profile = CutoffDerivativeProfile{};
        } else {
          c.profile = parse_amplitude(prof, w + ".profile");
        }
        if (k == 2) c.v_profile = parse_amplitude(comps[i].at("v_profile"), w + ".v_profile");
        d.components.push_back(std::move(c));
      }
      if (cfg.contains("ybar_cutoff")) {
        const auto& c = cfg.at("ybar_cutoff");
        d.cutoff = YbarCutoff{get<double>(c, "flat_until", "config.ybar_cutoff"),
                              get<double>(c, "zero_after", "config.ybar_cutoff")};
      }
      if (cfg.contains("model_phase")) {
        const auto& mp = cfg.at("model_phase");
        const SplittingData split(n, k);
        const Polynomial t = parse_polynomial(mp.at("T"), un - 1, "config.model_phase.T");
        std::vector<Polynomial> ys;
        const json ylist = mp.contains("Y") ? mp.at("Y") : json::array();
        if (ylist.size() != uk - 1) fail("config.model_phase.Y", "need k-1 polynomials");
        for (std::size_t i = 0; i < ylist.size(); ++i)
          ys.push_back(parse_polynomial(ylist[i], un - 1, "config.model_phase.Y[" + std::to_string(i) + "]"));
        d.phase = ModelPhaseData::from_factors(split, t, ys);
      }
      d.validate();
      return d;
    }
    if (cls == "fibred") {
      Fibred d;
      d.m = m;
      d.r = get<double>(cfg, "r", "config");
      d.n = n;
      d.k = k;
      d.phase_tilde = parse_polynomial(cfg.at("phase_tilde"), un + uk - 2, "config.phase_tilde");
      d.amplitude = parse_cpolynomial(cfg.at("amplitude"), un + uk - 1, "config.amplitude");
      const json vp = cfg.contains("v_profiles") ? cfg.at("v_profiles") : json::array();
      for (std::size_t i = 0; i < vp.size(); ++i)
        d.v_profiles.push_back(parse_amplitude(vp[i], "config.v_profiles[" + std::to_string(i) + "]"));
      d.validate();
      return d;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  fail("config.class", "expected one of type1, type2, intersecting, fibred");
}

std::vector<XPoint> build_grid(const json& cfg, int n) {
  const json& g = object_or_empty(cfg, "grid");
  if (!g.contains("x")) fail("config.grid", "missing key 'x'");
  const auto xs = parse_axis(g.at("x"), "config.grid.x");
  const json ys_spec = g.contains("y") ? g.at("y") : json::array();
  if (!ys_spec.is_array() || ys_spec.size() != static_cast<std::size_t>(n - 1))
    fail("config.grid.y", "need one axis per boundary coordinate (n-1)");
  std::vector<std::vector<double>> axes;
  for (std::size_t i = 0; i < ys_spec.size(); ++i)
    axes.push_back(parse_axis(ys_spec[i], "config.grid.y[" + std::to_string(i) + "]"));
  const bool scaled = get_or<bool>(g, "y_scaled", false, "config.grid");
  std::vector<XPoint> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (const double x : xs) {
    if (!(x > 0.0)) fail("config.grid.x", "x must be positive");
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      XPoint p{x, linalg::Vector(n - 1)};
      for (std::size_t i = 0; i < axes.size(); ++i) p.y[static_cast<long>(i)] = (scaled ? x : 1.0) * axes[i][idx[i]];
      out.push_back(p);
      std::size_t d = axes.size();
      while (d > 0) {
        --d;
        if (++idx[d] < axes[d].size()) break;
        idx[d] = 0;
        if (d == 0) {
          d = axes.size() + 1;
          break;
        }
      }
      if (d == axes.size() + 1 || axes.empty()) break;
    }
  }
  return out;
}

Tolerances effective_tolerances(const json& cfg, const RunOptions& opt) {
  Tolerances t;
  auto apply = [&](const std::string& key, double v, const std::string& where) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(where, "tolerance '" + key + "' must be finite and nonnegative");
    if (key == "quad_rel")
      t.quad_rel = v;
    else if (key == "quad_abs")
      t.quad_abs = v;
    else if (key == "membership")
      t.membership = v;
    else if (key == "interp")
      t.interp = v;
    else if (key == "lemma")
      t.lemma = v;
    else
      fail(where, "unknown tolerance '" + key + "'");
  };
  const json& tj = object_or_empty(cfg, "tolerances");
  for (const auto& [key, v] : tj.items()) {
    if (!v.is_number()) fail("config.tolerances." + key, "must be a number");
    apply(key, v.get<double>(), "config.tolerances");
  }
  for (const auto& [key, v] : opt.tol_overrides) apply(key, v, "--tol");
  if (!(t.quad_rel > 0.0)) fail("tolerances", "quad_rel must be positive");
  return t;
}

std::pair<std::string, double> parse_tol_override(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--tol: expected KEY=VALUE, got '" + kv + "'");
  const std::string key = kv.substr(0, eq);
  const std::string val = kv.substr(eq + 1);
  char* end = nullptr;
  const double v = std::strtod(val.c_str(), &end);
  if (val.empty() || end != val.c_str() + val.size()) throw ConfigError("--tol: '" + val + "' is not a number");
  return {key, v};
}

// ---- eval ----

Outcome cmd_eval(const json& cfg, const RunOptions& opt) {
  const Tolerances tol = effective_tolerances(cfg, opt);
  const ModelDistribution model = build_model(cfg);
  const int n = model_n(model);
  const auto points = build_grid(cfg, n);
  const auto reports = evaluate_grid(model, points, opt.threads, quadrature(tol));

  Outcome o;
  std::string csv = "x";
  for (int i = 1; i < n; ++i) csv += ",y" + std::to_string(i);
  csv += ",re_u,im_u,abs_u,est_error,method\n";
  std::size_t unconverged = 0;
  double max_err = 0.0;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const auto& r = reports[i];
    std::string row = num(p.x);
    for (long j = 0; j < p.y.size(); ++j) row += "," + num(p.y[j]);
    row += "," + num(r.value.real()) + "," + num(r.value.imag()) + "," + num(std::abs(r.value)) + "," +
           num(r.est_error) + "," + to_string(r.method) + "\n";
    csv += row;
    if (!r.converged) ++unconverged;
    max_err = std::max(max_err, r.est_error);
  }
  o.csv = std::move(csv);
  o.report = envelope("eval", cfg, opt, tol);
  o.report["result"] = {{"rows", points.size()},
                        {"columns", n + 5},
                        {"csv", "eval.csv"},
                        {"unconverged", unconverged},
                        {"max_est_error", max_err}};
  if (unconverged > 0) {
    o.exit_code = kNumericalFailure;
    o.message = std::to_string(unconverged) + " grid point(s) did not reach the quadrature tolerance";
  }
  return o;
}

// ---- decompose ----

Outcome cmd_decompose(const json& cfg, const RunOptions& opt) {
  const Tolerances tol = effective_tolerances(cfg, opt);
  const ModelDistribution model = build_model(cfg);
  const Intersecting& d = require_intersecting(model, "decompose");
  const json& dj = object_or_empty(cfg, "decompose");
  const int order = get_or<int>(dj, "ybar_order", 4, "config.decompose");
  const bool strict = get_or<bool>(dj, "strict", true, "config.decompose");
  const auto zs = parse_axis(dj.contains("g_samples") ? dj.at("g_samples") : json{{"linspace", {-10.0, 10.0, 41}}},
                             "config.decompose.g_samples");

  const YbarReduction red = reduce_ybar_dependence(d, order);
  DecomposeOptions dopt;
  dopt.strict = false;
  dopt.decay_order = get_or<int>(dj, "decay_order", 6, "config.decompose");
  dopt.interp_tol = tol.interp;
  const Decomposition dec = decompose_forward(red.reduced, dopt, &red);
  const auto& diag = dec.diagnostics();

  json res;
  res["exponent"] = dec.exponent;
  res["f_coefficients"] = polynomial_json(dec.f());
  res["f_variables"] = n_vars_names(d.n);
  json samples;
  samples["Z"] = zs;
  json comps = json::array();
  for (std::size_t c = 0; c < dec.components(); ++c) {
    json vals = json::array();
    for (const double z : zs) vals.push_back(complex_json(dec.g_profile(c, z)));
    comps.push_back(vals);
  }
  samples["components"] = comps;
  res["g_samples"] = samples;
  res["residual"] = diag.residual;
  res["b_cancellation"] = diag.b_cancellation;
  res["interpolation_error"] = diag.interpolation_error;
  res["decay_ok"] = diag.decay_ok;
  json decay = json::array();
  for (const auto& comp : diag.decay) {
    json rows = json::array();
    for (const auto& e : comp)
      rows.push_back({{"order", e.order},
                      {"sup", e.sup},
                      {"exponent", std::isfinite(e.exponent) ? json(e.exponent) : json(nullptr)},
                      {"decayed", e.decayed},
                      {"pass", e.pass}});
    decay.push_back(rows);
  }
  res["decay_report"] = decay;
  res["remainder_coefficients"] = diag.remainder_coefficients;
  res["cutoff_dropped"] = diag.cutoff_dropped;
  res["notes"] = diag.notes;

  Outcome o;
  o.report = envelope("decompose", cfg, opt, tol);
  o.report["result"] = res;
  if (strict && !diag.decay_ok) {
    o.exit_code = kNumericalFailure;
    o.message = "the g part failed the Schwartz decay check; see decay_report";
  }
  return o;
}

// ---- classify / witness ----

namespace {

struct ClassifySetup {
  Chart chart;
  CornerGrid grid;
  CornerPrefactor prefactor;
  int N = 4;
  double m = 0.0;
  ChartFunction u;
};

ClassifySetup classify_setup(const json& cfg, const ModelDistribution& model, const Tolerances& tol,
                             const RunOptions& opt) {
  ClassifySetup s;
  const int n = model_n(model);
  const int k = model_k(model);
  s.chart = Chart::ff_projective(n, k, k);
  const json& cj = object_or_empty(cfg, "classify");
  const std::string w = "config.classify";
  s.N = get_or<int>(cj, "N", 4, w);
  s.grid.sigma0 = get_or<double>(cj, "sigma0", s.grid.sigma0, w);
  s.grid.rho0 = get_or<double>(cj, "rho0", s.grid.rho0, w);
  s.grid.ratio = get_or<double>(cj, "ratio", s.grid.ratio, w);
  s.grid.sigma_levels = s.grid.rho_levels = get_or<int>(cj, "levels", s.grid.sigma_levels, w);
  const auto fixed = get_or<std::vector<double>>(cj, "fixed", std::vector<double>(static_cast<std::size_t>(n - 2), 0.0), w);
  s.grid.fixed = Eigen::Map<const linalg::Vector>(fixed.data(), static_cast<long>(fixed.size()));
  s.grid.threads = opt.threads;
  s.m = get_or<double>(cfg, "m", 0.0, "config");
  s.prefactor = intersecting_prefactor(s.m, n, k);
  if (cj.contains("prefactor")) {
    s.prefactor.rho_exponent = get<double>(cj.at("prefactor"), "rho", w + ".prefactor");
    s.prefactor.sigma_exponent = get<double>(cj.at("prefactor"), "sigma", w + ".prefactor");
  }
  const QuadratureSettings qs = quadrature(tol);
  if (const auto* f = std::get_if<Fibred>(&model)) {
    if (std::abs(f->r - (f->m + 0.5)) > 1e-12)
      fail("config.r", "classification compares against the intersecting class and needs r = m + 1/2");
    const Fibred fd = *f;
    s.u = [fd, qs](const ChartPoint& p) { return eval_fibred(fd, p, qs).value; };
  } else {
    const ModelDistribution md = model;
    s.u = [md, qs](const ChartPoint& p) {
      const XPoint xp = from_chart(p);
      return evaluate(md, xp.x, xp.y, qs).value;
    };
  }
  return s;
}

json table_json(const AsymptoticTable& t) {
  json c = json::array();
  json u = json::array();
  for (int j = 0; j <= t.N; ++j) {
    json cr = json::array();
    json ur = json::array();
    for (int l = 0; l <= t.N; ++l) {
      cr.push_back(complex_json(t.c(j, l)));
      ur.push_back(t.sigma_unc(j, l));
    }
    c.push_back(cr);
    u.push_back(ur);
  }
  return {{"N", t.N},
          {"m", t.m},
          {"prefactor", {{"rho", t.prefactor.rho_exponent}, {"sigma", t.prefactor.sigma_exponent}}},
          {"condition", t.condition},
          {"c", c},
          {"uncertainty", u}};
}

json membership_json(const Membership& m) {
  json v = json::array();
  for (const auto& x : m.violations)
    v.push_back({{"j", x.j}, {"l", x.l}, {"value", complex_json(x.value)}, {"uncertainty", x.uncertainty}});
  json ind = json::array();
  for (const auto& [j, l] : m.indeterminate) ind.push_back({j, l});
  return {{"verdict", to_string(m.verdict)}, {"intersecting", m.intersecting}, {"violations", v}, {"indeterminate", ind}};
}

}  // namespace

Outcome cmd_classify(const json& cfg, const RunOptions& opt) {
  const Tolerances tol = effective_tolerances(cfg, opt);
  const ModelDistribution model = build_model(cfg);
  ClassifySetup s = classify_setup(cfg, model, tol, opt);
  const json& cj = object_or_empty(cfg, "classify");
  json res;
  if (cj.contains("multiplier")) {
    const Polynomial h = parse_polynomial(cj.at("multiplier"), static_cast<std::size_t>(s.chart.dim()),
                                          "config.classify.multiplier");
    const ChartFunction base = s.u;
    s.u = [base, h](const ChartPoint& p) {
      return h(std::span<const double>(p.coords.data(), static_cast<std::size_t>(p.coords.size()))) * base(p);
    };
    res["multiplier"] = polynomial_json(h);
  }
  res["chart"] = s.chart.name();
  res["chart_coordinates"] = s.chart.coordinate_names();
  const AsymptoticTable t = extract_coefficients(s.u, s.chart, s.N, s.prefactor, s.grid, s.m);
  const Membership mem = check_membership(t, tol.membership);
  res["table"] = table_json(t);
  const json mj = membership_json(mem);
  for (const auto& [k, v] : mj.items()) res[k] = v;

  Outcome o;
  o.report = envelope("classify", cfg, opt, tol);
  o.report["result"] = res;
  if (mem.verdict == Verdict::Inconclusive) {
    o.exit_code = kInconclusive;
    o.message = "verdict inconclusive: coefficient uncertainties exceed the floor below the diagonal";
  }
  return o;
}

Outcome cmd_witness(const json& cfg, const RunOptions& opt) {
  const Tolerances tol = effective_tolerances(cfg, opt);
  const ModelDistribution model = build_model(cfg);
  const ClassifySetup s = classify_setup(cfg, model, tol, opt);
  const auto dim = static_cast<std::size_t>(s.chart.dim());
  std::vector<LabelledMultiplier> hs;
  const json& wj = object_or_empty(cfg, "witness");
  if (wj.contains("multipliers")) {
    const auto& ms = wj.at("multipliers");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string w = "config.witness.multipliers[" + std::to_string(i) + "]";
      hs.push_back({get<std::string>(ms[i], "label", w), parse_polynomial(ms[i].at("h"), dim, w + ".h")});
    }
  } else {
    const Polynomial rho = Polynomial::variable(dim, 0);
    const Polynomial sigma = Polynomial::variable(dim, 1);
    hs = {{"y_k", rho}, {"x", rho * sigma}, {"x/y_k", sigma}};
  }
  const WitnessReport w = properness_witness(s.u, s.chart, hs, s.N, s.prefactor, s.grid, s.m, tol.membership);
  auto entry_json = [](const WitnessEntry& e) {
    json j = membership_json(e.membership);
    j["label"] = e.label;
    j["multiplier"] = polynomial_json(e.multiplier);
    j["smooth_on_X"] = e.smooth_on_X;
    j["table"] = table_json(e.table);
    return j;
  };
  json res;
  res["chart"] = s.chart.name();
  res["chart_coordinates"] = s.chart.coordinate_names();
  res["base"] = entry_json(w.base);
  json es = json::array();
  bool inconclusive = w.base.membership.verdict == Verdict::Inconclusive;
  for (const auto& e : w.entries) {
    es.push_back(entry_json(e));
    inconclusive = inconclusive || e.membership.verdict == Verdict::Inconclusive;
  }
  res["entries"] = es;
  res["proper"] = w.proper;

  Outcome o;
  o.report = envelope("witness", cfg, opt, tol);
  o.report["result"] = res;
  if (inconclusive) {
    o.exit_code = kInconclusive;
    o.message = "at least one classification is inconclusive";
  } else if (!w.proper) {
    o.message = "properness not witnessed by these multipliers";
  }
  return o;
}

// ---- lemma-check ----

namespace {

json pair_result(const TangentSubspace& V1, const TangentSubspace& V2, const SplittingData& split, double tol) {
  json r;
  r["n"] = split.n;
  r["k"] = split.k;
  r["dims"] = {{"V1", V1.dim()}, {"V2", V2.dim()}, {"intersection", intersect(V1, V2).dim()}};
  r["legendre"] = {{"V1", is_legendre_subspace(V1, 1e-6)}, {"V2", is_legendre_subspace(V2, 1e-6)}};
  json norms = json::array();
  for (int j = 1; j <= split.k; ++j) norms.push_back(coordinate_differential_norm(V1, j));
  r["dy_prime_norms_on_V1"] = norms;
  const int idx = transversal_coordinate_index(V1, V2, split, tol);
  r["index"] = idx;
  r["norm"] = coordinate_differential_norm(V1, idx);
  return r;
}

linalg::Vector vec(const json& j, const std::string& where) {
  const auto v = j.get<std::vector<double>>();
  if (v.empty()) fail(where, "empty vector");
  return Eigen::Map<const linalg::Vector>(v.data(), static_cast<long>(v.size()));
}

}  // namespace

Outcome cmd_lemma_check(const json& cfg, const RunOptions& opt) {
  const Tolerances tol = effective_tolerances(cfg, opt);
  const json& lj = object_or_empty(cfg, "lemma");
  const std::string mode = get_or<std::string>(lj, "pair", "zero_conormal", "config.lemma");
  json results = json::array();
  try {
    if (mode == "zero_conormal") {
      const ContactPoint q = ContactPoint::origin(1);
      const TangentSubspace V1(q, {TangentVector::unit_dy(1, 1)});
      const TangentSubspace V2(q, {TangentVector::unit_dmu(1, 1)});
      results.push_back(pair_result(V1, V2, SplittingData(2, 1), tol.lemma));
    } else if (mode == "random") {
      std::mt19937_64 rng(opt.seed);
      const int count = get_or<int>(lj, "count", 10, "config.lemma");
      const auto ns = get_or<std::vector<int>>(lj, "n", std::vector<int>{2, 3, 4}, "config.lemma");
      if (ns.empty() || count < 1) fail("config.lemma", "need count >= 1 and a nonempty n list");
      for (int i = 0; i < count; ++i) {
        const int n = ns[static_cast<std::size_t>(i) % ns.size()];
        if (n < 2) fail("config.lemma.n", "entries must be at least 2");
        std::uniform_int_distribution<int> kd(1, n - 1);
        const int k = lj.contains("k") ? get<int>(lj, "k", "config.lemma") : kd(rng);
        if (k < 1 || k > n - 1) fail("config.lemma.k", "need 1 <= k <= n-1");
        const LegendrePair p = random_legendre_pair(SplittingData(n, k), rng);
        results.push_back(pair_result(p.V1, p.V2, p.split, tol.lemma));
      }
    } else if (mode == "explicit") {
      const json& b = lj.at("base");
      const ContactPoint q(vec(b.at("y"), "config.lemma.base.y"), get<double>(b, "tau", "config.lemma.base"),
                           vec(b.at("mu"), "config.lemma.base.mu"));
      const int n = q.dim() + 1;
      const int k = get<int>(lj, "k", "config.lemma");
      auto span_of = [&](const std::string& key) {
        std::vector<TangentVector> vs;
        for (const auto& v : lj.at(key)) {
          const linalg::Vector d = vec(v, "config.lemma." + key);
          if (d.size() != 2 * q.dim() + 1) fail("config.lemma." + key, "vectors need length 2(n-1)+1");
          vs.push_back(TangentVector::from_dense(d));
        }
        return TangentSubspace(q, vs);
      };
      results.push_back(pair_result(span_of("V1"), span_of("V2"), SplittingData(n, k), tol.lemma));
    } else {
      fail("config.lemma.pair", "expected zero_conormal, random or explicit");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config.lemma: ") + e.what());
  }
  Outcome o;
  o.report = envelope("lemma-check", cfg, opt, tol);
  bool legendre_ok = true;
  double min_norm = std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    legendre_ok = legendre_ok && r["legendre"]["V1"].get<bool>() && r["legendre"]["V2"].get<bool>();
    min_norm = std::min(min_norm, r["norm"].get<double>());
  }
  o.report["result"] = {{"pairs", results}, {"all_found", true}, {"all_legendre", legendre_ok}, {"min_norm", min_norm}};
  return o;
}

// ---- dispatch ----

Outcome run_command(const std::string& command, const json& cfg, const RunOptions& opt) {
  auto error_outcome = [&](int code, const std::string& kind, const std::string& what) {
    Outcome o;
    o.exit_code = code;
    o.message = what;
    o.report["schema_version"] = kSchemaVersion;
    o.report["tool"] = kToolName;
    o.report["version"] = kVersion;
    o.report["command"] = command;
    o.report["error"] = {{"kind", kind}, {"message", what}};
    return o;
  };
  try {
    if (command == "eval") return cmd_eval(cfg, opt);
    if (command == "decompose") return cmd_decompose(cfg, opt);
    if (command == "classify") return cmd_classify(cfg, opt);
    if (command == "witness") return cmd_witness(cfg, opt);
    if (command == "lemma-check") return cmd_lemma_check(cfg, opt);
    return error_outcome(kConfigError, "config", "unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    return error_outcome(kConfigError, "config", e.what());
  } catch (const DimensionError& e) {
    return error_outcome(kConfigError, "dimension", e.what());
  } catch (const PreconditionError& e) {
    return error_outcome(kConfigError, "precondition", e.what());
  } catch (const ConvergenceError& e) {
    return error_outcome(kNumericalFailure, "convergence", e.what());
  } catch (const json::exception& e) {
    return error_outcome(kConfigError, "config", e.what());
  }
}

void write_outcome(const std::string& command, const Outcome& o, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream f(fs::path(out_dir) / (command + ".json"));
    f << o.report.dump(2) << "\n";
  }
  if (command == "eval" && !o.csv.empty()) {
    std::ofstream f(fs::path(out_dir) / "eval.csv");
    f << o.csv;
  }
}

}  // namespace legendre::app
