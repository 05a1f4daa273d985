#include <hypolab/experiment.hpp>

#include <hypolab/elliptic.hpp>
#include <hypolab/interp.hpp>
#include <hypolab/mp_criterion.hpp>
#include <hypolab/parabolic.hpp>
#include <hypolab/parallel.hpp>
#include <hypolab/spectral.hpp>
#include <hypolab/superlog.hpp>
#include <hypolab/synthesis.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <limits>
#include <numbers>
#include <random>
#include <set>

namespace hypolab::experiment {

using report::Json;
using report::format_double;

ConfigError::ConfigError(std::vector<std::string> issues)
    : Error([&] {
        std::string m = "invalid config:";
        for (const auto& i : issues) m += "\n  " + i;
        return m;
      }()),
      issues_(std::move(issues)) {}

Json checks_to_json(const std::vector<Check>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) {
    out.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"bound", c.bound},
                       {"detail", c.detail}});
  }
  return out;
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

// ---------------------------------------------------------------------------------------------
// Config validation

class Fields {
 public:
  Fields(const Json& obj, std::string prefix, std::vector<std::string>& issues)
      : obj_(obj), prefix_(std::move(prefix)), issues_(issues) {
    if (!obj_.is_object()) issue("", "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.is_object() && obj_.contains(key) && !obj_.at(key).is_null();
  }

  double number(const std::string& key, std::optional<double> def, double lo, double hi, bool lo_open = false) {
    if (!has(key)) {
      if (!def) issue(key, "required");
      return def.value_or(lo_open ? hi : lo);
    }
    const Json& v = obj_.at(key);
    if (!v.is_number()) {
      issue(key, "expected a number");
      return def.value_or(hi);
    }
    const double x = v.get<double>();
    check_range(key, x, lo, hi, lo_open);
    return x;
  }

  long long integer(const std::string& key, long long def, long long lo, long long hi, bool odd = false) {
    if (!has(key)) return def;
    const Json& v = obj_.at(key);
    if (!v.is_number_integer()) {
      issue(key, "expected an integer");
      return def;
    }
    const long long x = v.get<long long>();
    if (x < lo || x > hi) issue(key, std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    if (odd && x % 2 == 0) issue(key, "must be odd (node counts include both ends and a center node)");
    return x;
  }

  std::string string(const std::string& key, std::optional<std::string> def) {
    if (!has(key)) {
      if (!def) issue(key, "required");
      return def.value_or("");
    }
    const Json& v = obj_.at(key);
    if (!v.is_string()) {
      issue(key, "expected a string");
      return def.value_or("");
    }
    return v.get<std::string>();
  }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const Json& v = obj_.at(key);
    if (!v.is_boolean()) {
      issue(key, "expected true or false");
      return def;
    }
    return v.get<bool>();
  }

  /// A number or a nonempty array of numbers.
  std::vector<double> numbers(const std::string& key, std::vector<double> def, double lo, double hi,
                              bool lo_open = false) {
    if (!has(key)) return def;
    const Json& v = obj_.at(key);
    std::vector<double> out;
    if (v.is_number()) {
      out.push_back(v.get<double>());
    } else if (v.is_array() && !v.empty()) {
      for (const auto& e : v) {
        if (!e.is_number()) {
          issue(key, "expected numbers");
          return def;
        }
        out.push_back(e.get<double>());
      }
    } else {
      issue(key, "expected a number or a nonempty array of numbers");
      return def;
    }
    for (const double x : out) check_range(key, x, lo, hi, lo_open);
    return out;
  }

  const Json* object(const std::string& key) {
    if (!has(key)) return nullptr;
    if (!obj_.at(key).is_object()) {
      issue(key, "expected an object");
      return nullptr;
    }
    return &obj_.at(key);
  }

  const Json* array(const std::string& key) {
    if (!has(key)) return nullptr;
    if (!obj_.at(key).is_array()) {
      issue(key, "expected an array");
      return nullptr;
    }
    return &obj_.at(key);
  }

  void issue(const std::string& key, const std::string& msg) { issues_.push_back(prefix_ + key + ": " + msg); }

  /// Rejects keys that no accessor asked for.
  void finish() {
    if (!obj_.is_object()) return;
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) issue(it.key(), "unknown key");
    }
  }

  const std::string& prefix() const { return prefix_; }

 private:
  void check_range(const std::string& key, double x, double lo, double hi, bool lo_open) {
    const bool ok = std::isfinite(x) && (lo_open ? x > lo : x >= lo) && x <= hi;
    if (!ok) {
      issue(key, format_double(x) + " outside " + (lo_open ? "(" : "[") + format_double(lo) + ", " +
                     format_double(hi) + "]");
    }
  }

  const Json& obj_;
  std::string prefix_;
  std::vector<std::string>& issues_;
  std::set<std::string> seen_;
};

void throw_if(const std::vector<std::string>& issues) {
  if (!issues.empty()) throw ConfigError(issues);
}

coeff::Field parse_field(Fields& f, const std::string& key, const std::string& def) {
  const std::string src = f.string(key, def);
  try {
    return coeff::Field::parse(src);
  } catch (const Error& e) {
    f.issue(key, e.what());
    return coeff::Field(0.0);
  }
}

std::optional<coeff::CoeffFn> parse_weight(Fields& f, const std::string& key, std::optional<std::string> def,
                                           coeff::Domain domain) {
  const std::string src = f.string(key, std::move(def));
  if (src.empty()) return std::nullopt;
  try {
    return coeff::parse_coeff(src, domain);
  } catch (const Error& e) {
    f.issue(key, e.what());
    return std::nullopt;
  }
}

elliptic::Coefficients parse_operator(Fields& f, std::vector<std::string>& issues) {
  elliptic::Coefficients L;
  if (const Json* op = f.object("operator")) {
    Fields o(*op, f.prefix() + "operator.", issues);
    L.a11 = parse_field(o, "a11", "1");
    L.a22 = parse_field(o, "a22", "1");
    L.a1 = parse_field(o, "a1", "0");
    L.a2 = parse_field(o, "a2", "0");
    L.a0 = parse_field(o, "a0", "0");
    o.finish();
  }
  return L;
}

Json coefficients_json(const elliptic::Coefficients& L) {
  return Json{{"a11", L.a11.source()}, {"a22", L.a22.source()}, {"a1", L.a1.source()},
              {"a2", L.a2.source()},   {"a0", L.a0.source()}};
}

Json interval_json(const std::optional<coeff::Interval>& I) {
  if (!I) return nullptr;
  return Json::array({I->lo(), I->hi()});
}

double verdict_code(superlog::Verdict v) {
  switch (v) {
    case superlog::Verdict::holds: return 1.0;
    case superlog::Verdict::fails: return 0.0;
    default: return -1.0;
  }
}

int verdict_exit(superlog::Verdict v) {
  switch (v) {
    case superlog::Verdict::holds: return exit_ok;
    case superlog::Verdict::fails: return exit_fails;
    default: return exit_under_resolved;
  }
}

std::string status_of(int code) {
  switch (code) {
    case exit_ok: return "ok";
    case exit_fails: return "fails";
    case exit_under_resolved: return "under-resolved";
    default: return "error";
  }
}

struct Context {
  std::string kind;
  std::string name;
  std::uint64_t seed = 0;
  const Json* config = nullptr;
};

Outcome assemble(const Context& ctx, Json results, std::vector<Check> checks, int exit_code,
                 std::vector<NamedTable> tables, std::vector<NamedPlot> plots) {
  Outcome o;
  o.kind = ctx.kind;
  o.exit_code = exit_code;
  Json& r = o.report;
  r["schema_version"] = report::schema_version;
  r["kind"] = ctx.kind;
  r["name"] = ctx.name;
  r["seed"] = ctx.seed;
  r["status"] = status_of(exit_code);
  r["exit_code"] = exit_code;
  r["config"] = *ctx.config;
  r["checks"] = checks_to_json(checks);
  r["results"] = std::move(results);
  Json tj = Json::array(), pj = Json::array();
  for (const auto& t : tables) {
    Json e = report::table_to_json(t.table);
    e["file"] = t.file;
    tj.push_back(std::move(e));
  }
  for (const auto& p : plots) {
    Json e = report::plot_to_json(p.plot);
    e["file"] = p.file;
    pj.push_back(std::move(e));
  }
  r["tables"] = std::move(tj);
  r["plots"] = std::move(pj);
  o.tables = std::move(tables);
  o.plots = std::move(plots);
  return o;
}

Check make_check(std::string name, bool passed, double value, double bound, std::string detail = {}) {
  return Check{std::move(name), passed, value, bound, std::move(detail)};
}

std::vector<double> normal_vector(std::mt19937_64& rng, std::size_t n, bool unit = false) {
  std::normal_distribution<double> d;
  std::vector<double> u(n);
  for (auto& v : u) v = d(rng);
  if (unit) {
    const double s = std::sqrt(spectral::norm2(u));
    for (auto& v : u) v /= s;
  }
  return u;
}

// ---------------------------------------------------------------------------------------------
// Kinds

Outcome run_mp_check(Fields& f, std::vector<std::string>& issues, const Context& ctx) {
  const auto dom = f.numbers("domain", {-1.0, 1.0}, -1e6, 1e6);
  const double p = f.number("p", std::nullopt, 0.0, 10.0, true);
  const double delta0 = f.number("delta0", 0.25, 0.0, 1e6, true);
  mp::MpOptions opt;
  opt.K = static_cast<int>(f.integer("K", opt.K, 4, 200));
  opt.grid = static_cast<int>(f.integer("grid", opt.grid, 16, 4096));
  opt.theta_hold = f.number("theta_hold", opt.theta_hold, 0.0, 1e6, true);
  opt.theta_fail = f.number("theta_fail", opt.theta_fail, 0.0, 1e6, true);
  opt.hold_window = static_cast<int>(f.integer("hold_window", opt.hold_window, 2, 50));
  opt.fail_window = static_cast<int>(f.integer("fail_window", opt.fail_window, 1, 50));
  if (opt.theta_hold >= opt.theta_fail) f.issue("theta_hold", "must be below theta_fail");
  coeff::Domain domain;
  if (dom.size() != 2 || !(dom[0] < dom[1])) {
    f.issue("domain", "expected [lo, hi] with lo < hi");
  } else {
    domain = {dom[0], dom[1]};
    if (-3.0 * delta0 < domain.lo || 3.0 * delta0 > domain.hi) {
      f.issue("delta0", "[-3 delta0, 3 delta0] must lie inside the domain");
    }
  }
  const auto a = parse_weight(f, "coefficient", std::nullopt, domain);
  f.finish();
  throw_if(issues);

  const auto pos = mp::check_averaged_positivity(*a, delta0, opt.grid);
  Json results;
  results["coefficient"] = a->source();
  results["positivity"] = Json{{"positive", pos.positive},
                               {"intervals_checked", pos.intervals_checked},
                               {"witness", interval_json(pos.witness)}};
  std::vector<Check> checks{make_check("averaged positivity", pos.positive, pos.positive ? 1.0 : 0.0, 1.0,
                                       "a_I > 0 on every dyadic interval")};
  report::Table table{{"delta", "S", "decisive"}, {}};
  superlog::Verdict verdict = superlog::Verdict::fails;
  std::vector<NamedPlot> plots;
  if (pos.positive) {
    const auto v = mp::mp_check(*a, p, delta0, opt);
    verdict = v.verdict;
    Json curve = Json::array();
    for (std::size_t k = 0; k < v.s_curve.size(); ++k) {
      table.rows.push_back({v.s_curve[k].delta, v.s_curve[k].S, k < v.decisive.size() ? v.decisive[k] : NAN});
    }
    results["mp"] = Json{{"verdict", superlog::to_string(v.verdict)},
                         {"theta_hold", opt.theta_hold},
                         {"theta_fail", opt.theta_fail},
                         {"last_S", v.s_curve.empty() ? NAN : v.s_curve.back().S},
                         {"witness", interval_json(v.witness)},
                         {"intervals", v.intervals}};
    report::Plot plot{"M_p stopping-time quantity", "delta", "S(delta)", true, true,
                      "verdict: " + superlog::to_string(v.verdict), {}};
    report::Series s{"S", {}, {}};
    for (const auto& pt : v.s_curve) {
      s.x.push_back(pt.delta);
      s.y.push_back(pt.S);
    }
    plot.series.push_back(std::move(s));
    plots.push_back({"s_curve.svg", std::move(plot)});
  } else {
    results["mp"] = Json{{"verdict", "fails"}, {"reason", "averaged positivity fails"}};
  }
  const auto rate = mp::fedii_rate(*a, p);
  results["rate"] = Json{{"verdict", superlog::to_string(rate.verdict)},
                         {"limit", rate.limit},
                         {"slope", rate.slope},
                         {"last_abs_rate", rate.last_abs_rate}};
  const bool decisive = verdict != superlog::Verdict::inconclusive;
  results["agreement"] = decisive ? Json(verdict == rate.verdict) : Json(nullptr);
  results["verdict"] = superlog::to_string(verdict);
  return assemble(ctx, std::move(results), std::move(checks), verdict_exit(verdict), {{"data.csv", table}},
                  std::move(plots));
}

superlog::ProbeOptions probe_options(Fields& f) {
  superlog::ProbeOptions o;
  o.growth_factor = f.number("growth_factor", o.growth_factor, 1.0, 1e6, true);
  o.band_factor = f.number("band_factor", o.band_factor, 1.0, 1e6, true);
  o.decade = f.number("decade", o.decade, 1.0, 1e12, true);
  o.check_stability = f.boolean("check_stability", o.check_stability);
  o.stability_tol = f.number("stability_tol", o.stability_tol, 0.0, 1.0, true);
  return o;
}

report::Plot lambda_plot(const superlog::ProbeReport& r) {
  report::Plot plot{"Ground state growth", "log <zeta>", "Lambda(zeta)", true, true, {}, {}};
  report::Series base{"n = " + std::to_string(r.nodes), {}, r.lambda_min};
  for (const double z : r.zeta) base.x.push_back(std::log(superlog::japanese_bracket(z)));
  plot.series.push_back(base);
  if (!r.lambda_refined.empty()) {
    report::Series fine{"n = " + std::to_string(2 * r.nodes - 1),
                        {base.x.begin(), base.x.begin() + static_cast<std::ptrdiff_t>(r.lambda_refined.size())},
                        r.lambda_refined};
    plot.series.push_back(std::move(fine));
  }
  auto two = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  std::string note = "fitted slope " + two(r.fitted_exponent);
  if (std::isfinite(r.balance_exponent)) note += ", balance exponent " + two(r.balance_exponent);
  plot.annotation = note;
  return plot;
}

Outcome run_probe(Fields& f, std::vector<std::string>& issues, const Context& ctx) {
  const double p = f.number("p", std::nullopt, 0.0, 10.0, true);
  const double R = f.number("R", 1.0, 0.0, 100.0, true);
  const auto nodes = static_cast<std::size_t>(f.integer("nodes", 8193, 129, 65537, true));
  const int k_lo = static_cast<int>(f.integer("k_lo", 4, 2, 24));
  const int k_hi = static_cast<int>(f.integer("k_hi", 20, 2, 24));
  if (k_lo >= k_hi) f.issue("k_lo", "must be below k_hi");
  const auto opt = probe_options(f);
  const auto eps_list = f.numbers("eps_list", {}, 0.0, 1e6, true);
  const int k_ext = static_cast<int>(f.integer("k_ext", std::min(k_hi + 4, 24), 2, 24));
  if (!eps_list.empty() && k_ext <= k_hi) f.issue("k_ext", "must exceed k_hi");
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) f.issue("eps_list", "must be strictly decreasing");
  }
  const auto a = parse_weight(f, "coefficient", std::nullopt, {-R, R});
  f.finish();
  throw_if(issues);

  const auto r = superlog::lambda_growth(*a, p, R, nodes, k_lo, k_hi, opt);
  Json results{{"coefficient", r.coefficient},
               {"p", r.p},
               {"verdict", superlog::to_string(r.verdict)},
               {"rule", r.rule},
               {"direction", r.direction},
               {"fitted_exponent", r.fitted_exponent},
               {"balance_exponent", r.balance_exponent},
               {"ratio_growth", r.ratio_growth},
               {"ratio_spread", r.ratio_spread},
               {"max_refinement_change", r.max_refinement_change},
               {"under_resolved", r.under_resolved},
               {"monotone", r.monotone},
               {"zeta", r.zeta},
               {"lambda_min", r.lambda_min},
               {"lambda_refined", r.lambda_refined}};
  report::Table table{{"zeta", "lambda_min", "ratio"}, {}};
  for (std::size_t i = 0; i < r.zeta.size(); ++i) table.rows.push_back({r.zeta[i], r.lambda_min[i], r.ratios[i]});
  std::vector<NamedTable> tables{{"data.csv", table}};
  std::vector<NamedPlot> plots{{"lambda.svg", lambda_plot(r)}};
  std::vector<Check> checks{
      make_check("ground state nondecreasing in zeta", r.monotone, r.monotone ? 1.0 : 0.0, 1.0),
      make_check("refinement change", !r.under_resolved, r.max_refinement_change, opt.stability_tol,
                 "relative change of Lambda on 2n - 1 nodes")};

  if (!eps_list.empty()) {
    const auto curve = superlog::best_constant_curve(*a, p, eps_list, R, nodes, k_lo, k_hi, k_ext);
    report::Table ct{{"eps_prime", "base", "extended", "diverging"}, {}};
    report::Plot cp{"Best constant on two zeta ranges", "eps'", "C(eps')", true, true, {}, {}};
    report::Series sb{"k <= " + std::to_string(k_hi), {}, {}}, se{"k <= " + std::to_string(k_ext), {}, {}};
    bool any = false;
    for (const auto& pt : curve) {
      ct.rows.push_back({pt.eps_prime, pt.base, pt.extended, pt.diverging ? 1.0 : 0.0});
      sb.x.push_back(pt.eps_prime);
      sb.y.push_back(pt.base);
      se.x.push_back(pt.eps_prime);
      se.y.push_back(pt.extended);
      any = any || pt.diverging;
    }
    cp.series = {sb, se};
    cp.annotation = any ? "grids diverge" : "grids agree";
    results["best_constant_diverging"] = any;
    tables.push_back({"constant.csv", std::move(ct)});
    plots.push_back({"constant.svg", std::move(cp)});
  }
  const int code = r.under_resolved ? exit_under_resolved : verdict_exit(r.verdict);
  return assemble(ctx, std::move(results), std::move(checks), code, std::move(tables), std::move(plots));
}

Outcome run_profile_elliptic(Fields& f, std::vector<std::string>& issues, const Context& ctx) {
  const auto L = parse_operator(f, issues);
  const auto g = parse_field(f, "g", "1");
  const auto lambdas = f.numbers("lambda", {1.0}, 1.0, 1e12);
  const int dim = static_cast<int>(f.integer("dim", 1, 1, 2));
  const auto n = static_cast<std::size_t>(f.integer("n", dim == 1 ? 401 : 41, 3, dim == 1 ? 200001 : 401, true));
  const bool has_r = f.has("r"), has_c = f.has("c");
  const double r_req = has_r ? f.number("r", std::nullopt, 0.0, 1.0, true) : 0.0;
  const double c_req = has_c ? f.number("c", std::nullopt, 0.0, 1e12) : 0.0;
  f.finish();
  throw_if(issues);

  const double lambda_min = *std::min_element(lambdas.begin(), lambdas.end());
  elliptic::BarrierParams bp;
  try {
    bp = elliptic::barrier_params(elliptic::measure_norms(L, g, dim), lambda_min);
  } catch (const PreconditionError& e) {
    throw ConfigError({std::string("g: ") + e.what()});
  }
  const double r = has_r ? r_req : bp.r0;
  const double c = has_c ? c_req : bp.c0;
  if (r > bp.r0) issues.push_back("r: " + format_double(r) + " exceeds r0 = " + format_double(bp.r0) + " for these coefficients");
  if (c < bp.c0) issues.push_back("c: " + format_double(c) + " is below c0 = " + format_double(bp.c0) + " at lambda = " + format_double(lambda_min));
  throw_if(issues);

  std::vector<elliptic::ProfileSolution> sols(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) { sols[i] = elliptic::solve_profile(L, g, lambdas[i], r, c, n, dim); });

  std::vector<Check> checks;
  Json per = Json::array();
  report::Table table{dim == 1 ? std::vector<std::string>{"lambda", "x", "u", "v"}
                               : std::vector<std::string>{"lambda", "x1", "x2", "u", "v"},
                      {}};
  report::Plot plot{"Elliptic profiles", "x1", "v(x1, lambda)", false, true, {}, {}};
  bool bounds_ok = true;
  for (const auto& ps : sols) {
    const double res = elliptic::relative_residual(L, g, ps);
    const std::size_t mid = (ps.n - 1) / 2;
    const double vc = dim == 1 ? ps.v[mid] : ps.v[mid * ps.n + mid];
    const std::string tag = "lambda = " + format_double(ps.lambda);
    checks.push_back(make_check("lower bound, " + tag, ps.lower_ok, ps.min_lower_margin, -ps.tol, "min (u - u_L)"));
    checks.push_back(make_check("upper bound, " + tag, ps.upper_ok, ps.max_upper_excess, ps.tol, "max (u - 2)"));
    checks.push_back(make_check("normalisation, " + tag, vc == 1.0, vc, 1.0, "v(0, lambda)"));
    checks.push_back(make_check("residual, " + tag, res <= synthesis::solver_tolerance, res,
                                synthesis::solver_tolerance));
    bounds_ok = bounds_ok && ps.lower_ok && ps.upper_ok && vc == 1.0 && res <= synthesis::solver_tolerance;
    per.push_back(Json{{"lambda", ps.lambda}, {"r", ps.r}, {"c", ps.c}, {"c0", ps.c0}, {"u_center", ps.u_center},
                       {"tol", ps.tol}, {"lower_ok", ps.lower_ok}, {"upper_ok", ps.upper_ok},
                       {"min_lower_margin", ps.min_lower_margin}, {"max_upper_excess", ps.max_upper_excess},
                       {"residual", res}, {"upwinded", ps.upwinded}});
    report::Series s{tag, {}, {}};
    for (std::size_t i2 = 0; i2 < (dim == 1 ? 1 : ps.n); ++i2) {
      for (std::size_t i1 = 0; i1 < ps.n; ++i1) {
        const std::size_t k = i2 * ps.n + i1;
        if (dim == 1) {
          table.rows.push_back({ps.lambda, ps.x[i1], ps.u[k], ps.v[k]});
        } else {
          table.rows.push_back({ps.lambda, ps.x[i1], ps.x[i2], ps.u[k], ps.v[k]});
        }
      }
    }
    const std::size_t row = dim == 1 ? 0 : mid;
    for (std::size_t i1 = 0; i1 < ps.n; ++i1) {
      s.x.push_back(ps.x[i1]);
      s.y.push_back(ps.v[row * ps.n + i1]);
    }
    plot.series.push_back(std::move(s));
  }
  Json results{{"coefficients", coefficients_json(L)}, {"g", g.source()}, {"dim", dim}, {"n", n},
               {"r", r}, {"c", c}, {"r0", bp.r0}, {"c0", bp.c0}, {"beta", bp.beta}, {"profiles", per}};
  return assemble(ctx, std::move(results), std::move(checks), bounds_ok ? exit_ok : exit_under_resolved,
                  {{"data.csv", table}}, {{"profile.svg", plot}});
}

Outcome run_profile_parabolic(Fields& f, std::vector<std::string>& issues, const Context& ctx) {
  const auto L = parse_operator(f, issues);
  const auto g = parse_field(f, "g", "1");
  const double lambda = f.number("lambda", 1.0, 1.0, 1e12);
  const int dim = static_cast<int>(f.integer("dim", 1, 1, 2));
  const auto n_x = static_cast<std::size_t>(f.integer("n_x", dim == 1 ? 401 : 41, 3, dim == 1 ? 20001 : 201, true));
  const auto n_t = static_cast<std::size_t>(f.integer("n_t", dim == 1 ? 2001 : 81, 3, 200001, true));
  const double r = f.number("r", 1.0, 0.0, 1.0, true);
  const double c = f.number("c", 0.0, 0.0, 1e12);
  const double T = f.number("T", 1.0, 0.0, 10.0, true);
  const auto levels = static_cast<std::size_t>(f.integer("csv_levels", 11, 2, 100001));
  f.finish();
  if (n_t < n_x) issues.push_back("n_t: must be >= n_x (step-ratio guard)");
  throw_if(issues);

  parabolic::ParabolicProfile pp;
  try {
    pp = parabolic::solve_profile_parabolic(L, g, lambda, r, c, T, n_x, n_t, dim);
  } catch (const PreconditionError& e) {
    throw ConfigError({e.what()});
  }
  std::vector<Check> checks{
      make_check("lower bound", pp.lower_ok, pp.min_lower_margin, -pp.tol, "min (u - u_L)"),
      make_check("upper bound", pp.upper_ok, pp.max_upper_excess, pp.tol, "max (u - exp(alpha (t + T)))")};
  report::Table table{dim == 1 ? std::vector<std::string>{"t", "x", "u"}
                               : std::vector<std::string>{"t", "x1", "x2", "u"},
                      {}};
  // Evenly spaced time levels (always including both ends) keep the dump small.
  std::vector<std::size_t> chosen;
  const std::size_t want = std::min(levels, pp.n_t);
  for (std::size_t i = 0; i < want; ++i) chosen.push_back(i * (pp.n_t - 1) / (want - 1));
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  report::Plot plot{"Parabolic profile slices", "x1", "u(x1, t)", false, false, {}, {}};
  const std::size_t mid = (pp.n_x - 1) / 2;
  for (const std::size_t lv : chosen) {
    for (std::size_t i2 = 0; i2 < (dim == 1 ? 1 : pp.n_x); ++i2) {
      for (std::size_t i1 = 0; i1 < pp.n_x; ++i1) {
        if (dim == 1) {
          table.rows.push_back({pp.t[lv], pp.x[i1], pp.at(lv, i1)});
        } else {
          table.rows.push_back({pp.t[lv], pp.x[i1], pp.x[i2], pp.at(lv, i1, i2)});
        }
      }
    }
  }
  for (const std::size_t lv : {std::size_t{0}, (pp.n_t - 1) / 2, pp.n_t - 1}) {
    report::Series s{"t = " + format_double(pp.t[lv]), pp.x, {}};
    for (std::size_t i1 = 0; i1 < pp.n_x; ++i1) s.y.push_back(pp.at(lv, i1, dim == 1 ? 0 : mid));
    plot.series.push_back(std::move(s));
  }
  Json results{{"coefficients", coefficients_json(L)}, {"g", g.source()}, {"lambda", pp.lambda}, {"T", pp.T},
               {"r", pp.r}, {"c", pp.c}, {"c0", pp.c0}, {"alpha", pp.alpha}, {"dim", pp.dim}, {"n_x", pp.n_x},
               {"n_t", pp.n_t}, {"u_center", pp.u_center}, {"tol", pp.tol}, {"lower_ok", pp.lower_ok},
               {"upper_ok", pp.upper_ok}, {"min_lower_margin", pp.min_lower_margin},
               {"max_upper_excess", pp.max_upper_excess}, {"under_resolved", pp.under_resolved}};
  return assemble(ctx, std::move(results), std::move(checks), pp.under_resolved ? exit_under_resolved : exit_ok,
                  {{"data.csv", table}}, {{"slices.svg", plot}});
}

Outcome run_lp_suite(Fields& f, std::vector<std::string>& issues, const Context& ctx) {
  LpSuiteParams p;
  p.size = static_cast<std::size_t>(f.integer("size", 256, 8, static_cast<long long>(spectral::full_decomposition_budget)));
  p.R = f.number("R", 1.0, 0.0, 100.0, true);
  p.samples = static_cast<int>(f.integer("samples", p.samples, 1, 10000000));
  p.vectors = static_cast<int>(f.integer("vectors", p.vectors, 1, 100000));
  p.seed = ctx.seed;
  f.finish();
  throw_if(issues);
  report::Table bands;
  const auto checks = lp_suite(p, &bands);
  Json results{{"size", p.size}, {"R", p.R}, {"samples", p.samples}, {"vectors", p.vectors}};
  return assemble(ctx, std::move(results), checks, all_passed(checks) ? exit_ok : exit_internal,
                  {{"data.csv", bands}}, {});
}

Outcome run_synthesis(Fields& f, std::vector<std::string>& issues, const Context& ctx) {
  const auto L = parse_operator(f, issues);
  const auto g = parse_field(f, "g", "1");
  const double eps = f.number("eps", 0.5, 0.0, 100.0, true);
  const double p = f.number("p", 1.0, 0.0, 1.0, true);
  const auto nodes = static_cast<std::size_t>(f.integer("surrogate_nodes", 65, 5, 1025, true));
  const double R = f.number("surrogate_R", 1.0, 0.0, 100.0, true);
  const double zeta = f.number("surrogate_zeta", 1.0, 0.0, 1e12);
  const auto n_x = static_cast<std::size_t>(f.integer("n_x", 41, 3, 20001, true));
  const int j_max = static_cast<int>(f.integer("j_max", 6, 0, 40));
  const int sweeps = static_cast<int>(f.integer("projection_sweeps", 10, 1, 10000));
  const auto a = parse_weight(f, "surrogate_coefficient", "0", {-R, R});
  f.finish();
  throw_if(issues);

  synthesis::Radius rad;
  try {
    rad = synthesis::choose_radius(L, g, eps);
  } catch (const PreconditionError& e) {
    throw ConfigError({std::string("g: ") + e.what()});
  }
  const auto A = spectral::build_schrodinger(*a, zeta, R, nodes);
  const auto S = spectral::full_decomposition(A);
  synthesis::ProfileCache cache(L, g, rad.r, rad.c0, n_x);
  std::mt19937_64 rng(ctx.seed);

  std::vector<Check> checks;
  report::Table table{{"j", "lhs", "rhs", "rhs_exp_norm", "trace_error", "max_residual"}, {}};
  report::Plot plot{"Norm estimate on band-limited data", "j", "squared norm", false, true, {}, {}};
  report::Series sl{"||w||^2", {}, {}}, sr{"recorded bound", {}, {}};
  double worst_trace = 0.0, worst_res = 0.0;
  bool est_ok = true;
  for (int j = 0; j <= j_max; ++j) {
    const auto u = spectral::lp_project(S, j, normal_vector(rng, S.size()));
    const auto sol = synthesis::synthesize(S, cache, u, eps, p, A.y);
    const auto e = synthesis::w_estimate(sol);
    worst_trace = std::max(worst_trace, sol.trace_error);
    worst_res = std::max(worst_res, sol.max_residual);
    est_ok = est_ok && e.holds;
    table.rows.push_back({static_cast<double>(j), e.lhs, e.rhs, e.rhs_exp_norm, sol.trace_error, sol.max_residual});
    sl.x.push_back(j);
    sl.y.push_back(e.lhs);
    sr.x.push_back(j);
    sr.y.push_back(e.rhs);
  }
  plot.series = {sl, sr};
  checks.push_back(make_check("trace w(0, .) = u", worst_trace <= 1e-10, worst_trace, 1e-10));
  checks.push_back(make_check("profile residual", worst_res <= synthesis::solver_tolerance, worst_res,
                              synthesis::solver_tolerance));
  checks.push_back(make_check("norm estimate, j = 0.." + std::to_string(j_max), est_ok, est_ok ? 1.0 : 0.0, 1.0));
  double min_slack = INFINITY;
  for (int s = 0; s < sweeps; ++s) {
    const auto u = normal_vector(rng, S.size());
    for (int j = 0; j <= spectral::last_band(S); ++j) {
      min_slack = std::min(min_slack, synthesis::projection_exp_bound(S, j, eps, p, u).slack);
    }
  }
  checks.push_back(make_check("projection exponential bound slack", min_slack >= 0.0, min_slack, 0.0));
  Json results{{"coefficients", coefficients_json(L)}, {"g", g.source()}, {"eps", eps}, {"p", p}, {"r", rad.r},
               {"r0", rad.r0}, {"c0", rad.c0}, {"surrogate_size", S.size()}, {"shift", S.shift()},
               {"profiles_computed", cache.misses()}};
  return assemble(ctx, std::move(results), checks, all_passed(checks) ? exit_ok : exit_internal,
                  {{"data.csv", table}}, {{"estimate.svg", plot}});
}

Outcome run_interp(Fields& f, std::vector<std::string>& issues, const Context& ctx) {
  const double eps = f.number("eps", 0.1, 0.0, 10.0, true);
  const double p = f.number("p", 1.0, 0.0, 10.0, true);
  const double s2 = f.number("s2", 1.0, 0.0, 100.0, true);
  InterpSuiteParams sp;
  sp.draws = static_cast<int>(f.integer("draws", sp.draws, 1, 10000000));
  sp.sequences = static_cast<int>(f.integer("sequences", sp.sequences, 1, 1000000));
  sp.sequence_length = static_cast<int>(f.integer("sequence_length", sp.sequence_length, 1, 200));
  sp.grid_points = static_cast<int>(f.integer("grid_points", sp.grid_points, 2, 100000));
  sp.xi_max = f.number("xi_max", sp.xi_max, 1.0, 1e300, true);
  sp.seed = ctx.seed;
  f.finish();
  throw_if(issues);

  const auto checks = interp_suite(sp);
  report::Table table{{"xi", "R", "tail", "bound"}, {}};
  report::Plot plot{"High-band tail against its bound", "xi", "tail", true, true,
                    "C(s2, p) = " + format_double(interp::high_constant(p, s2)), {}};
  report::Series st{"tail", {}, {}}, sb{"3 (2 eps / s2)^{2p}", {}, {}};
  for (int i = 0; i < sp.grid_points; ++i) {
    const double xi = std::pow(sp.xi_max, static_cast<double>(i) / (sp.grid_points - 1));
    const auto split = interp::split_point(xi, eps, p, s2);
    const auto tail = interp::geometric_tail(split);
    table.rows.push_back({xi, split.R, tail.closed, tail.bound});
    st.x.push_back(xi);
    st.y.push_back(tail.closed);
    sb.x.push_back(xi);
    sb.y.push_back(tail.bound);
  }
  plot.series = {st, sb};
  Json results{{"eps", eps}, {"p", p}, {"s2", s2}, {"high_constant", interp::high_constant(p, s2)},
               {"draws", sp.draws}, {"sequences", sp.sequences}};
  return assemble(ctx, std::move(results), checks, all_passed(checks) ? exit_ok : exit_internal,
                  {{"data.csv", table}}, {{"tail.svg", plot}});
}

Outcome run_table1(Fields& f, std::vector<std::string>& issues, const Context& ctx) {
  const double alpha = f.number("alpha", std::nullopt, 0.0, 20.0, true);
  parabolic::Table1Grid grid;
  grid.R = f.number("R", grid.R, 0.0, 100.0, true);
  grid.nodes = static_cast<std::size_t>(f.integer("nodes", static_cast<long long>(grid.nodes), 129, 65537, true));
  grid.k_lo = static_cast<int>(f.integer("k_lo", grid.k_lo, 2, 24));
  grid.k_hi = static_cast<int>(f.integer("k_hi", grid.k_hi, 2, 24));
  if (grid.k_lo >= grid.k_hi) f.issue("k_lo", "must be below k_hi");
  auto rows = parabolic::default_table1_rows();
  if (const Json* arr = f.array("rows")) {
    rows.clear();
    for (std::size_t i = 0; i < arr->size(); ++i) {
      Fields rf((*arr)[i], "rows[" + std::to_string(i) + "].", issues);
      parabolic::Table1Row row;
      row.operator_label = rf.string("operator", std::nullopt);
      row.p = rf.number("p", std::nullopt, 0.0, 10.0, true);
      rf.finish();
      rows.push_back(row);
    }
    if (rows.empty()) f.issue("rows", "must not be empty");
  }
  const auto a = parse_weight(f, "coefficient", "exp(-abs(y)^(-" + format_double(alpha) + "))", {-grid.R, grid.R});
  f.finish();
  throw_if(issues);

  const auto rep = parabolic::table1_experiment(*a, alpha, rows, grid);
  report::Table table{{"p", "expected", "verdict", "balance_exponent", "ratio_growth"}, {}};
  Json jr = Json::array();
  std::vector<Check> checks;
  bool inconclusive = false;
  for (const auto& o : rep.rows) {
    table.rows.push_back({o.row.p, verdict_code(o.expected), verdict_code(o.verdict), o.balance_exponent,
                          o.ratio_growth});
    jr.push_back(Json{{"operator", o.row.operator_label}, {"p", o.row.p},
                      {"verdict", superlog::to_string(o.verdict)}, {"expected", superlog::to_string(o.expected)},
                      {"agrees", o.agrees}, {"balance_exponent", o.balance_exponent},
                      {"ratio_growth", o.ratio_growth}, {"rule", o.rule}});
    checks.push_back(make_check(o.row.operator_label + ", p = " + format_double(o.row.p), o.agrees,
                                verdict_code(o.verdict), verdict_code(o.expected),
                                "verdict " + superlog::to_string(o.verdict) + ", expected " +
                                    superlog::to_string(o.expected)));
    inconclusive = inconclusive || o.verdict == superlog::Verdict::inconclusive;
  }
  Json results{{"alpha", rep.alpha}, {"coefficient", rep.coefficient}, {"all_agree", rep.all_agree}, {"rows", jr}};
  const int code = inconclusive ? exit_under_resolved : (rep.all_agree ? exit_ok : exit_fails);
  return assemble(ctx, std::move(results), std::move(checks), code, {{"data.csv", table}}, {});
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Suites

std::vector<Check> lp_suite(const LpSuiteParams& p, report::Table* bands) {
  std::vector<Check> checks;
  // Partition of unity on log-uniform samples in [1, e^30].
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unif(0.0, 30.0);
  double worst = 0.0;
  for (int i = 0; i < p.samples; ++i) {
    const double lambda = i == 0 ? 1.0 : std::exp(unif(rng));
    double s = 0.0;
    for (int j = 0; j <= 32; ++j) s += spectral::band(j, lambda);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  checks.push_back(make_check("partition of unity", worst <= 1e-12, worst, 1e-12,
                              std::to_string(p.samples) + " samples"));

  // Dirichlet Laplacian with exactly `size` rows on [-R, R].
  const double h = 2.0 * p.R / static_cast<double>(p.size + 1);
  const auto A = spectral::from_tridiagonal(std::vector<double>(p.size, 2.0 / (h * h)),
                                            std::vector<double>(p.size - 1, -1.0 / (h * h)));
  const auto S = spectral::full_decomposition(A);
  const int J = spectral::last_band(S);
  double recon = 0.0, ortho = 0.0, sand = INFINITY, lo_slack = INFINITY, hi_slack = INFINITY;
  std::vector<double> first_band_norms;
  for (int t = 0; t < p.vectors; ++t) {
    const auto u = normal_vector(rng, S.size(), true);
    const auto v = normal_vector(rng, S.size(), true);
    std::vector<std::vector<double>> Pu, Pv;
    std::vector<double> sum(S.size(), 0.0);
    double band_sum = 0.0;
    for (int j = 0; j <= J; ++j) {
      Pu.push_back(spectral::lp_project(S, j, u));
      Pv.push_back(spectral::lp_project(S, j, v));
      for (std::size_t i = 0; i < S.size(); ++i) sum[i] += Pu.back()[i];
      const double nj = spectral::norm2(Pu.back());
      band_sum += nj;
      if (t == 0) first_band_norms.push_back(nj);
    }
    for (std::size_t i = 0; i < S.size(); ++i) sum[i] -= u[i];
    recon = std::max(recon, std::sqrt(spectral::norm2(sum)));
    for (int j = 0; j <= J; ++j) {
      for (int k = j + 2; k <= J; ++k) ortho = std::max(ortho, std::abs(spectral::dot(Pu[j], Pv[k])));
    }
    lo_slack = std::min(lo_slack, band_sum - 0.5);
    hi_slack = std::min(hi_slack, 1.0 - band_sum);
    for (const spectral::ScalarFn& f : {spectral::ScalarFn([](double l) { return std::sqrt(l); }),
                                        spectral::ScalarFn([](double l) { return std::exp(0.1 * std::sqrt(l)); })}) {
      const auto r = spectral::lp_sandwich_check(S, f, u);
      sand = std::min(sand, std::min(r.slack_lower(), r.slack_upper()) / r.middle);
    }
  }
  const std::string nv = std::to_string(p.vectors) + " unit vectors, n = " + std::to_string(S.size());
  checks.push_back(make_check("reconstruction", recon <= 1e-10, recon, 1e-10, nv));
  checks.push_back(make_check("orthogonality |j - j'| > 1", ortho <= 1e-12, ortho, 1e-12, nv));
  checks.push_back(make_check("sandwich, f = sqrt and exp(0.1 sqrt)", sand >= -1e-12, sand, -1e-12,
                              "smallest relative slack, " + nv));
  checks.push_back(make_check("band sums >= |u|^2 / 2", lo_slack >= -1e-12, lo_slack, -1e-12, nv));
  checks.push_back(make_check("band sums <= |u|^2", hi_slack >= -1e-12, hi_slack, -1e-12, nv));
  if (bands) {
    *bands = report::Table{{"j", "lambda_lo", "lambda_hi", "modes", "proj_norm_sq"}, {}};
    for (int j = 0; j <= J; ++j) {
      const double lo = std::exp(j - 1.0), hi = std::exp(j + 1.0);
      const auto& ev = S.eigenvalues();
      const auto modes = std::count_if(ev.begin(), ev.end(), [&](double l) { return spectral::band(j, l) > 0.0; });
      bands->rows.push_back({static_cast<double>(j), lo, hi, static_cast<double>(modes),
                             first_band_norms.empty() ? NAN : first_band_norms[static_cast<std::size_t>(j)]});
    }
  }
  return checks;
}

std::vector<Check> interp_suite(const InterpSuiteParams& p) {
  std::mt19937_64 rng(p.seed);
  auto unif = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto logu = [&](double lo, double hi) { return std::exp(unif(std::log(lo), std::log(hi))); };
  std::vector<Check> checks;

  double worst_identity = 0.0, worst_tail_diff = 0.0, worst_tail_ratio = 0.0;
  bool identities = true, tails = true, low_terms = true;
  for (int i = 0; i < p.draws; ++i) {
    const double xi = logu(1e-2, p.xi_max), eps = logu(1e-3, 2.0), pp = unif(0.25, 3.0), s2 = unif(0.1, 4.0);
    const auto sp = interp::split_point(xi, eps, pp, s2);
    identities = identities && sp.identities_hold;
    worst_identity = std::max({worst_identity, sp.exp_form_error, sp.xi_form_error});
    const auto tail = interp::geometric_tail(sp);
    tails = tails && tail.holds;
    worst_tail_diff = std::max(worst_tail_diff, tail.relative_difference);
    worst_tail_ratio = std::max(worst_tail_ratio, tail.closed / tail.bound);
    if (sp.positive) {
      const auto c = interp::low_band_term_bound(sp, static_cast<int>(std::floor(sp.R)));
      low_terms = low_terms && c.term_ok && c.sum_ok;
    }
  }
  const std::string nd = std::to_string(p.draws) + " draws";
  checks.push_back(make_check("split identities", identities, worst_identity, 1e-12, nd));
  checks.push_back(make_check("geometric tail closed form", worst_tail_diff <= 1e-12, worst_tail_diff, 1e-12, nd));
  checks.push_back(make_check("geometric tail bound", tails, worst_tail_ratio, 1.0, "largest tail / bound, " + nd));
  checks.push_back(make_check("low-band term bounds", low_terms, low_terms ? 1.0 : 0.0, 1.0, nd));

  interp::XiGrid grid;
  for (int i = 0; i < p.grid_points; ++i) {
    const double t = static_cast<double>(i) / (p.grid_points - 1);
    grid.xi.push_back(i == 0 ? 0.0 : std::pow(p.xi_max, t));
    grid.weight.push_back(1.0 / p.grid_points);
  }
  bool high = true, low = true;
  double worst_high = 0.0;
  std::normal_distribution<double> normal;
  for (int s = 0; s < p.sequences; ++s) {
    const double eps = logu(1e-3, 1.0), pp = unif(0.25, 2.0), s2 = unif(0.2, 3.0);
    std::vector<std::vector<double>> a(static_cast<std::size_t>(p.sequence_length),
                                       std::vector<double>(grid.xi.size()));
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double scale = std::exp(-0.5 * static_cast<double>(j) * unif(0.5, 1.5));
      for (auto& v : a[j]) v = scale * normal(rng);
    }
    const auto rep = interp::lemma_bounds_on_sequence(a, grid, eps, pp, s2);
    high = high && rep.high_holds;
    low = low && rep.low_chain_holds;
    if (rep.high_rhs > 0.0) worst_high = std::max(worst_high, rep.high_lhs / rep.high_rhs);
  }
  const std::string ns = std::to_string(p.sequences) + " sequences on " + std::to_string(p.grid_points) + " xi points";
  checks.push_back(make_check("high-band inequality, C = 3 (2 / s2)^{2p}", high, worst_high, 1.0,
                              "largest lhs / rhs, " + ns));
  checks.push_back(make_check("low-band proof chain", low, low ? 1.0 : 0.0, 1.0, ns));

  double worst_eps = 0.0;
  for (int i = 0; i < p.draws; ++i) {
    const double pp = unif(0.25, 3.0), s2 = unif(0.1, 4.0), eps = logu(1e-3, 1.0);
    const double target = std::pow(eps, 2.0 * pp) * superlog::interpolation_constant(pp, s2) * std::numbers::e;
    worst_eps = std::max(worst_eps, std::abs(superlog::eps_from_target(target, pp, s2) / eps - 1.0));
  }
  checks.push_back(make_check("eps from target inversion", worst_eps <= 1e-14, worst_eps, 1e-14, nd));
  return checks;
}

std::vector<Check> barrier_suite(const BarrierSuiteParams& p) {
  std::mt19937_64 rng(p.seed);
  auto unif = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto num = [](double v) { return format_double(v); };
  double min_slack = INFINITY, min_w = INFINITY, max_w = -INFINITY;
  bool formulas = true;
  for (int i = 0; i < p.fields; ++i) {
    const int dim = 1 + i % 2;
    elliptic::Coefficients L;
    const double m = unif(0.5, 2.0), s = unif(0.0, 0.4), b = unif(-3.0, 3.0), q = unif(-2.0, 2.0);
    const double gg = unif(0.0, 4.0), lambda = std::exp(unif(0.0, std::log(1e4)));
    L.a11 = coeff::Field::parse(num(m) + " + " + num(s) + " * x1^2");
    L.a1 = coeff::Field::parse(num(b) + " * x1");
    L.a0 = coeff::Field::parse(num(q) + " * r^3");
    double inf_a = m, na1 = std::abs(b);
    if (dim == 2) {
      const double m2 = unif(0.5, 2.0), b2 = unif(-3.0, 3.0);
      L.a22 = coeff::Field::parse(num(m2) + " + x2^2");
      L.a2 = coeff::Field::parse(num(b2) + " * x2");
      inf_a = std::min(m, m2);
      na1 = std::max(na1, std::abs(b2));
    }
    // Declared bounds: the fields are sampled on the unit cube, where |r|^3 <= 2^{3/2} in 2D.
    const double na0 = std::abs(q) * (dim == 2 ? std::pow(2.0, 1.5) : 1.0);
    const coeff::Field g = coeff::Field::parse(num(gg) + " * x1^2");
    const auto bp = elliptic::barrier_params(inf_a, na1, na0, gg, 1.0);
    formulas = formulas && bp.beta == std::max(bp.beta0, bp.beta1) &&
               bp.r0 <= std::min(std::numbers::ln2 / (2.0 * bp.beta), 1.0) &&
               std::exp(2.0 * bp.beta * bp.r0) <= 2.0;
    const auto chk = elliptic::verify_barrier(L, g, bp, lambda, dim == 1 ? 201 : p.grid, dim);
    min_slack = std::min(min_slack, chk.min_slack);
    min_w = std::min(min_w, chk.min_w);
    max_w = std::max(max_w, chk.max_w);
  }
  const std::string nf = std::to_string(p.fields) + " fields, dims 1 and 2";
  return {make_check("barrier supersolution", min_slack >= -1e-9, min_slack, -1e-9, nf),
          make_check("barrier range w >= 1", min_w >= 1.0, min_w, 1.0, nf),
          make_check("barrier range w <= 2", max_w <= 2.0, max_w, 2.0, nf),
          make_check("beta and r0 formulas", formulas, formulas ? 1.0 : 0.0, 1.0, nf)};
}

// ---------------------------------------------------------------------------------------------
// Entry points

Outcome run(const Json& config, std::optional<std::uint64_t> seed_override) {
  std::vector<std::string> issues;
  Fields f(config, "", issues);
  throw_if(issues);
  const std::string kind = f.string("kind", std::nullopt);
  Context ctx;
  ctx.kind = kind;
  ctx.name = f.string("name", kind);
  ctx.seed = static_cast<std::uint64_t>(f.integer("seed", 0, 0, std::numeric_limits<long long>::max()));
  if (seed_override) ctx.seed = *seed_override;
  ctx.config = &config;
  f.string("out_dir", "");
  using Runner = Outcome (*)(Fields&, std::vector<std::string>&, const Context&);
  static const std::map<std::string, Runner> runners{
      {"mp-check", run_mp_check},   {"superlog-probe", run_probe}, {"profile-elliptic", run_profile_elliptic},
      {"profile-parabolic", run_profile_parabolic}, {"lp-suite", run_lp_suite},
      {"synthesis", run_synthesis}, {"interp-verify", run_interp}, {"table1", run_table1}};
  const auto it = runners.find(kind);
  if (it == runners.end()) {
    std::string all;
    for (const char* k : kinds) all += std::string(all.empty() ? "" : ", ") + k;
    if (!kind.empty()) issues.push_back("kind: unknown kind \"" + kind + "\" (expected one of " + all + ")");
    throw_if(issues);
  }
  return it->second(f, issues, ctx);
}

std::filesystem::path output_dir(const Json& config) {
  if (config.is_object() && config.contains("out_dir") && config["out_dir"].is_string() &&
      !config["out_dir"].get<std::string>().empty()) {
    return config["out_dir"].get<std::string>();
  }
  std::string name = "experiment";
  if (config.is_object()) {
    if (config.contains("name") && config["name"].is_string()) {
      name = config["name"].get<std::string>();
    } else if (config.contains("kind") && config["kind"].is_string()) {
      name = config["kind"].get<std::string>();
    }
  }
  return std::filesystem::path("hypolab-out") / name;
}

std::vector<std::filesystem::path> write_outputs(const Outcome& o, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written{dir / "report.json"};
  report::write_file(written.back(), report::dump(o.report));
  for (const auto& t : o.tables) {
    written.push_back(dir / t.file);
    report::write_file(written.back(), report::to_csv(t.table));
  }
  for (const auto& p : o.plots) {
    written.push_back(dir / p.file);
    report::write_file(written.back(), report::to_svg(p.plot));
  }
  return written;
}

std::vector<std::filesystem::path> render(const Json& rep, const std::filesystem::path& dir) {
  if (!rep.is_object() || !rep.contains("schema_version")) throw Error("not a report: missing schema_version");
  if (rep["schema_version"] != report::schema_version) {
    throw Error("unsupported schema_version " + rep["schema_version"].dump());
  }
  std::vector<std::filesystem::path> written;
  for (const auto& t : rep.value("tables", Json::array())) {
    written.push_back(dir / t.at("file").get<std::string>());
    report::write_file(written.back(), report::to_csv(report::table_from_json(t)));
  }
  for (const auto& p : rep.value("plots", Json::array())) {
    written.push_back(dir / p.at("file").get<std::string>());
    report::write_file(written.back(), report::to_svg(report::plot_from_json(p)));
  }
  return written;
}

}  // namespace hypolab::experiment
