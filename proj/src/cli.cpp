#include "prony/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "prony/amplify.hpp"
#include "prony/curve.hpp"
#include "prony/error.hpp"
#include "prony/solver.hpp"
#include "prony/two_nodes.hpp"
#include "prony/variety.hpp"

namespace prony::cli {

namespace {

using json = nlohmann::json;

// Malformed files, flags or values.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

spdlog::logger& log() {
  static const std::shared_ptr<spdlog::logger> lg = [] {
    auto l = std::make_shared<spdlog::logger>("prony", std::make_shared<spdlog::sinks::stderr_sink_st>());
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("PRONY_LOG")) {
      const std::string v(env);
      if (v == "error") l->set_level(spdlog::level::err);
      else if (v == "warn") l->set_level(spdlog::level::warn);
      else if (v == "info") l->set_level(spdlog::level::info);
      else if (v == "debug") l->set_level(spdlog::level::debug);
    }
    return l;
  }();
  return *lg;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::EmptyVariety:
    case Errc::NotHyperbolic:
    case Errc::SingularHankel:
      return kExitEmpty;
    case Errc::PreconditionT:
    case Errc::DegeneratePencil:
    case Errc::NodeOutOfBox:
    case Errc::CollidingNodes:
    case Errc::DegenerateSequence:
      return kExitPrecondition;
    default:
      return kExitInput;
  }
}

struct Options {
  std::string out_path;
  std::string format;
  double tol_rank = kRankTol;
  double tol_collision = kCollisionTol;
  std::string moments_path;
  std::string lines_path;
  int d = 0;
  std::string window;
  int samples = 0;
  int scan = 2001;
  double D = 0.0;
  int s = 2;
  int q = -1;
  double t = 0.0;
  std::string mu;
  double zero_tol = 0.0;
  double eps = 1e-8;
  std::string h_grid = "0.4,0.2,0.1,0.05";
  std::string q_list;
  int trials = 1000;
  std::uint64_t seed = 7;
};

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

double parse_number(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw InputError("not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw InputError("empty list");
  return out;
}

Window parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("window must be LO:HI, got '" + text + "'");
  const Window w{parse_number(text.substr(0, colon)), parse_number(text.substr(colon + 1))};
  if (!(w.lo < w.hi)) throw InputError("window needs LO < HI");
  return w;
}

json load_json(const std::string& path) {
  if (path.empty()) throw InputError("an input file is required");
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

std::vector<double> number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw InputError(std::string("missing array '") + key + "'");
  std::vector<double> out;
  for (const json& v : j[key]) {
    if (!v.is_number()) throw InputError(std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

// {"d": int, "moments": [..]}; a --d flag must agree with the file.
MomentVector moments_from(const json& j, int d_flag) {
  if (!j.is_object() || !j.contains("d") || !j["d"].is_number_integer())
    throw InputError("input needs an integer field 'd'");
  const int d = j["d"].get<int>();
  if (d < 1) throw InputError("d must be positive");
  if (d_flag > 0 && d_flag != d) throw InputError("--d disagrees with the input file");
  return MomentVector{number_array(j, "moments"), d};
}

MomentVector curve_moments(const json& j, int d_flag) {
  MomentVector mu = moments_from(j, d_flag);
  const std::size_t need = 2 * static_cast<std::size_t>(mu.d) - 1;
  if (mu.size() < need) throw InputError("the curve needs at least 2d-1 moments");
  return mu.head(need);
}

json to_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

json to_json(const EscapeConstants& c) {
  return {{"t0", c.t0}, {"lambda0", c.lambda0}, {"t1", c.t1}, {"t1_unscaled", c.t1_unscaled},
          {"A1", c.A1}, {"A2", c.A2}, {"c1", c.c1}, {"c2", c.c2}};
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) line += ',';
    line += cells[k];
  }
  line += '\n';
  return line;
}

std::vector<std::string> numbered(const char* stem, int d) {
  std::vector<std::string> out;
  for (int k = 1; k <= d; ++k) out.push_back(std::string(stem) + std::to_string(k));
  return out;
}

void append(std::vector<std::string>& cells, const std::vector<double>& v) {
  for (double x : v) cells.push_back(format_double(x));
}

bool want_json(const Options& o, bool json_default) {
  if (o.format.empty()) return json_default;
  return o.format == "json";
}

void json_only(const Options& o, const char* cmd) {
  if (!o.format.empty() && o.format != "json") throw InputError(std::string(cmd) + " writes JSON only");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_solve(const Options& o, std::string& data) {
  json_only(o, "solve");
  const MomentVector mu = moments_from(load_json(o.moments_path), o.d);
  if (mu.size() != 2 * static_cast<std::size_t>(mu.d)) throw InputError("solve needs exactly 2d moments");
  const SolveOutcome r = solve(mu, {o.tol_rank, o.tol_collision});
  log().info("solve: d={} kind={}", mu.d, to_string(r.kind));
  json j;
  j["kind"] = std::string(to_string(r.kind));
  j["nodes"] = to_json(r.signal ? r.signal->nodes : std::vector<double>{});
  j["amplitudes"] = to_json(r.signal ? r.signal->amplitudes : std::vector<double>{});
  j["delta"] = r.diagnostics.delta;
  j["eta"] = r.diagnostics.eta;
  j["residual_norm"] = r.diagnostics.residual_norm;
  data = dump(j);
  return r.kind == SolveKind::Unique ? kExitOk : kExitEmpty;
}

int cmd_curve(const Options& o, std::string& data) {
  const MomentVector mu = curve_moments(load_json(o.moments_path), o.d);
  const Window w = parse_window(o.window);
  const CurveParam param = parametrize(mu, o.tol_rank);
  const HyperbolicityDomain dom = hyperbolicity_domain(param, w.lo, w.hi, o.scan, o.tol_collision);
  const std::vector<TraceRow> rows = trace(param, dom, o.samples, o.tol_collision);
  log().info("curve: {} intervals, {} rows", dom.intervals.size(), rows.size());
  const int d = param.d();

  if (want_json(o, false)) {
    json arr = json::array();
    for (const TraceRow& r : rows)
      arr.push_back({{"t", r.t}, {"interval", r.interval}, {"nodes", to_json(r.nodes)},
                     {"amplitudes", to_json(r.amplitudes)}, {"min_gap", r.min_gap},
                     {"dist_strata", to_json(r.dist_strata)}, {"residual", r.residual}});
    data = dump(arr);
    return kExitOk;
  }
  std::vector<std::string> head{"t", "interval"};
  for (auto& s : numbered("x_", d)) head.push_back(s);
  for (auto& s : numbered("a_", d)) head.push_back(s);
  head.push_back("min_gap");
  head.push_back("residual");
  data = join(head);
  for (const TraceRow& r : rows) {
    std::vector<std::string> cells{format_double(r.t), std::to_string(r.interval)};
    append(cells, r.nodes);
    append(cells, r.amplitudes);
    cells.push_back(format_double(r.min_gap));
    cells.push_back(format_double(r.residual));
    data += join(cells);
  }
  return kExitOk;
}

int cmd_sample(const Options& o, std::string& data) {
  const MomentVector mu = moments_from(load_json(o.moments_path), o.d);
  if (o.q < 0 || o.q > 2 * mu.d - 1) throw InputError("--q must lie in 0..2d-1");
  if (mu.size() < static_cast<std::size_t>(o.q) + 1) throw InputError("not enough moments for q");
  const Window w = parse_window(o.window);
  SamplingGrid grid;
  grid.node_lo = grid.coeff_lo = w.lo;
  grid.node_hi = grid.coeff_hi = w.hi;
  grid.node_count = grid.coeff_count = o.samples;
  const std::vector<Signal> pts = sample_variety(mu.head(o.q + 1), o.q, grid);
  log().info("sample: q={} points={}", o.q, pts.size());

  if (want_json(o, false)) {
    json arr = json::array();
    for (const Signal& s : pts) arr.push_back({{"amplitudes", to_json(s.amplitudes)}, {"nodes", to_json(s.nodes)}});
    data = dump(arr);
    return kExitOk;
  }
  std::vector<std::string> head = numbered("a_", mu.d);
  for (auto& s : numbered("x_", mu.d)) head.push_back(s);
  data = join(head);
  for (const Signal& s : pts) {
    std::vector<std::string> cells;
    append(cells, s.amplitudes);
    append(cells, s.nodes);
    data += join(cells);
  }
  return kExitOk;
}

int cmd_classify(const Options& o, std::string& data) {
  json_only(o, "classify");
  const std::vector<double> v = parse_list(o.mu);
  if (v.size() != 3) throw InputError("--mu takes exactly three values");
  if (!(o.zero_tol >= 0.0)) throw InputError("--zero-tol must be >= 0");
  const Triple mu{v[0], v[1], v[2]};
  const TwoNodeCase c = classify2(mu, o.zero_tol);
  const std::optional<int> crossings = parabola_crossings(mu);
  json j{{"mu", to_json(v)},
         {"kind", std::string(to_string(c.kind))},
         {"center", opt(c.center)},
         {"level", opt(c.level)},
         {"line_sum", opt(c.line_sum)},
         {"parabola_crossings", crossings ? json(*crossings) : json(nullptr)}};
  data = dump(j);
  return c.kind == TwoNodeKind::Empty ? kExitEmpty : kExitOk;
}

int cmd_figure(const Options& o, std::string& data) {
  const json in = load_json(o.lines_path);
  const json& arr = in.is_object() && in.contains("lines") ? in["lines"] : in;
  if (!arr.is_array()) throw InputError("expected a list of (mu0, mu1, mu2) triples");
  std::vector<Triple> lines;
  for (const json& l : arr) {
    if (!l.is_array() || l.size() != 3) throw InputError("each line needs three moments");
    Triple t{};
    for (int k = 0; k < 3; ++k) {
      if (!l[k].is_number()) throw InputError("non-numeric moment in line list");
      t[k] = l[k].get<double>();
    }
    lines.push_back(t);
  }
  const Window w = parse_window(o.window);
  const std::vector<FigureGroup> groups = figure_curves(lines, w.lo, w.hi, o.samples);

  if (want_json(o, false)) {
    json out = json::array();
    for (const FigureGroup& g : groups) {
      json branches = json::array();
      for (const Branch& b : g.branches) {
        json pts = json::array();
        for (const Point2& p : b.points) pts.push_back({p.x1, p.x2});
        branches.push_back({{"points", pts}, {"marked", b.marked}});
      }
      out.push_back({{"mu", {g.mu[0], g.mu[1], g.mu[2]}},
                     {"kind", std::string(to_string(g.classification.kind))},
                     {"branches", branches}});
    }
    data = dump(out);
    return kExitOk;
  }
  data = join({"line", "mu_0", "mu_1", "mu_2", "kind", "branch", "index", "x_1", "x_2", "marked"});
  for (std::size_t li = 0; li < groups.size(); ++li) {
    const FigureGroup& g = groups[li];
    for (std::size_t bi = 0; bi < g.branches.size(); ++bi) {
      const Branch& b = g.branches[bi];
      for (std::size_t k = 0; k < b.points.size(); ++k) {
        const bool marked = std::find(b.marked.begin(), b.marked.end(), k) != b.marked.end();
        data += join({std::to_string(li), format_double(g.mu[0]), format_double(g.mu[1]),
                      format_double(g.mu[2]), std::string(to_string(g.classification.kind)),
                      std::to_string(bi), std::to_string(k), format_double(b.points[k].x1),
                      format_double(b.points[k].x2), marked ? "1" : "0"});
      }
    }
  }
  return kExitOk;
}

int cmd_bounds(const Options& o, std::string& data) {
  const MomentVector mu = curve_moments(load_json(o.moments_path), o.d);
  const Window w = parse_window(o.window);
  const CurveParam param = parametrize(mu, o.tol_rank);
  const HyperbolicityDomain dom = hyperbolicity_domain(param, w.lo, w.hi, o.scan, o.tol_collision);
  const std::vector<TraceRow> rows = trace(param, dom, o.samples, o.tol_collision);
  const int d = param.d();
  if (o.s < 2 || o.s > d) throw Error(Errc::InvalidStratum, "s must lie in 2..d");

  struct Row {
    double t;
    std::size_t i;
    std::optional<AmplitudeBoundChain> chain;
  };
  std::vector<Row> out;
  int counted = 0, holding = 0, literal = 0;
  for (const TraceRow& r : rows) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
      try {
        AmplitudeBoundChain c = amplitude_bound_chain(param, r.t, o.D, i, o.s);
        ++counted;
        holding += c.holds;
        literal += c.literal_holds;
        out.push_back({r.t, i, std::move(c)});
      } catch (const Error& e) {
        if (e.code() != Errc::NodeOutOfBox) throw;
        out.push_back({r.t, i, std::nullopt});
      }
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double frac = counted ? static_cast<double>(holding) / counted : nan;
  const double lit_frac = counted ? static_cast<double>(literal) / counted : nan;
  const int flagged = static_cast<int>(out.size()) - counted;
  log().info("bounds: {} rows, {} out of box, holds fraction {}", out.size(), flagged, frac);

  if (want_json(o, false)) {
    json arr = json::array();
    for (const Row& r : out) {
      json j{{"t", r.t}, {"i", r.i}, {"status", r.chain ? "ok" : "out_of_box"}};
      if (r.chain) {
        const AmplitudeBoundChain& c = *r.chain;
        j.update({{"dist", c.dist}, {"lagrange", c.lagrange}, {"p_value", c.p_value},
                  {"lower_strat", c.lower_strat}, {"lower_lagrange", c.lower_lagrange},
                  {"actual", c.actual}, {"upper", c.upper}, {"holds", c.holds},
                  {"literal_lower", c.literal_lower}, {"literal_holds", c.literal_holds}});
      }
      arr.push_back(j);
    }
    data = dump({{"rows", arr},
                 {"summary", {{"counted", counted}, {"flagged", flagged}, {"holds_fraction", frac},
                              {"literal_holds_fraction", lit_frac}}}});
    return kExitOk;
  }
  data = join({"kind", "t", "i", "dist", "lagrange", "p_value", "lower_strat", "lower_lagrange", "actual",
               "upper", "holds", "literal_lower", "literal_holds", "status"});
  for (const Row& r : out) {
    std::vector<std::string> cells{"row", format_double(r.t), std::to_string(r.i)};
    if (r.chain) {
      const AmplitudeBoundChain& c = *r.chain;
      append(cells, {c.dist, c.lagrange, c.p_value, c.lower_strat, c.lower_lagrange, c.actual, c.upper});
      cells.push_back(c.holds ? "1" : "0");
      cells.push_back(format_double(c.literal_lower));
      cells.push_back(c.literal_holds ? "1" : "0");
      cells.push_back("ok");
    } else {
      cells.insert(cells.end(), 10, "");
      cells.push_back("out_of_box");
    }
    data += join(cells);
  }
  // summary: fractions over the in-box rows, flagged count in status
  std::vector<std::string> summary{"summary", "", ""};
  summary.insert(summary.end(), 7, "");
  summary.push_back(format_double(frac));
  summary.push_back("");
  summary.push_back(format_double(lit_frac));
  summary.push_back("counted=" + std::to_string(counted) + " flagged=" + std::to_string(flagged));
  data += join(summary);
  return kExitOk;
}

int cmd_escape(const Options& o, std::string& data, std::ostream& err) {
  json_only(o, "escape");
  const json in = load_json(o.moments_path);
  CurveParam param;
  if (in.is_object() && in.contains("alpha")) {
    const std::vector<double> a = number_array(in, "alpha"), b = number_array(in, "beta");
    if (a.empty() || a.size() != b.size()) throw InputError("alpha and beta need the same positive length");
    param = make_pencil(a, b);
  } else {
    param = parametrize(curve_moments(in, o.d), o.tol_rank);
  }
  const EscapeConstants c = escape_constants(param);
  const double threshold = std::max(c.t0, c.t1);
  if (o.t < threshold) {
    data = dump({{"error", "PreconditionT"}, {"t", o.t}, {"threshold", threshold}, {"constants", to_json(c)}});
    err << "error: PreconditionT: t = " << format_double(o.t) << " is below max(t0, t1) = " << format_double(threshold)
        << " (t0 = " << format_double(c.t0) << ", t1 = " << format_double(c.t1) << ")\n";
    return kExitPrecondition;
  }
  const EscapeReport r = escape_check(param, o.t);
  json claims = json::array();
  for (const EscapeClaim& cl : r.claims)
    claims.push_back({{"name", cl.name}, {"lo", cl.lo}, {"hi", std::isinf(cl.hi) ? json(nullptr) : json(cl.hi)},
                      {"expected", cl.expected}, {"count", cl.count}, {"pass", cl.pass}});
  json kappa = json::array();
  for (const KappaSample& k : r.kappa)
    kappa.push_back({{"lambda", k.lambda}, {"r", k.r}, {"normalized", k.normalized}, {"kappa", k.kappa}});
  data = dump({{"alpha", to_json(param.alpha)},
               {"beta", to_json(param.beta)},
               {"alpha_positive", r.alpha_positive},
               {"t", r.t},
               {"constants", to_json(r.constants)},
               {"claims", claims},
               {"kappa", kappa},
               {"max_kappa", r.max_kappa},
               {"kappa_ok", r.kappa_ok},
               {"pass", r.pass}});
  return kExitOk;
}

int cmd_amplify(const Options& o, std::string& data) {
  AmplifyConfig cfg;
  cfg.d = o.d > 0 ? o.d : 2;
  cfg.h_grid = parse_list(o.h_grid);
  cfg.eps = o.eps;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.q_list.clear();
  if (o.q_list.empty()) {
    for (int q = 0; q <= 2 * cfg.d - 1; ++q) cfg.q_list.push_back(q);
  } else {
    for (double q : parse_list(o.q_list)) {
      if (q != std::floor(q)) throw InputError("q values must be integers");
      cfg.q_list.push_back(static_cast<int>(q));
    }
  }
  const AmplifyResult r = amplify(cfg);
  for (const AmplifyFit& f : r.fits) log().info("amplify: q={} slope={}", f.q, f.slope);

  if (want_json(o, false)) {
    json pts = json::array(), fits = json::array();
    for (const AmplifyPoint& p : r.points)
      pts.push_back({{"q", p.q}, {"h", p.h}, {"worst", p.worst}, {"median", p.median},
                     {"count", p.count}, {"failures", p.failures}});
    for (const AmplifyFit& f : r.fits) fits.push_back({{"q", f.q}, {"slope", f.slope}, {"intercept", f.intercept}});
    data = dump({{"d", cfg.d}, {"eps", cfg.eps}, {"trials", cfg.trials}, {"seed", cfg.seed},
                 {"points", pts}, {"fits", fits}});
    return kExitOk;
  }
  data = join({"kind", "q", "h", "worst", "median", "count", "failures", "slope", "intercept"});
  for (const AmplifyPoint& p : r.points)
    data += join({"point", std::to_string(p.q), format_double(p.h), format_double(p.worst),
                  format_double(p.median), std::to_string(p.count), std::to_string(p.failures), "", ""});
  for (const AmplifyFit& f : r.fits)
    data += join({"fit", std::to_string(f.q), "", "", "", "", "", format_double(f.slope), format_double(f.intercept)});
  return kExitOk;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prony systems, Prony varieties and their numerical checks", "prony_cli"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&o](CLI::App* sub) {
    sub->add_option("--out", o.out_path, "Write data to FILE instead of standard output");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tol-rank", o.tol_rank, "Relative rank tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-collision", o.tol_collision, "Relative collision tolerance")->check(CLI::PositiveNumber);
  };
  const auto moments_opts = [&o](CLI::App* sub) {
    sub->add_option("--moments", o.moments_path, "JSON file {\"d\": N, \"moments\": [...]}")->required();
    sub->add_option("--d", o.d, "Model order; must match the file");
  };
  const auto curve_opts = [&o](CLI::App* sub) {
    sub->add_option("--window", o.window, "t window LO:HI");
    sub->add_option("--samples", o.samples, "Chebyshev points per interval")->check(CLI::PositiveNumber);
    sub->add_option("--scan", o.scan, "Scan points for the hyperbolicity domain")->check(CLI::Range(2, 10000000));
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve the full Prony system");
  common(solve_cmd);
  moments_opts(solve_cmd);

  CLI::App* curve_cmd = app.add_subcommand("curve", "Trace the Prony curve over a t window");
  common(curve_cmd);
  moments_opts(curve_cmd);
  curve_opts(curve_cmd);

  CLI::App* sample_cmd = app.add_subcommand("sample", "Grid points of a Prony variety");
  common(sample_cmd);
  moments_opts(sample_cmd);
  sample_cmd->add_option("--q", o.q, "Number of equations minus one")->required();
  sample_cmd->add_option("--window", o.window, "Node (or coordinate) range LO:HI");
  sample_cmd->add_option("--samples", o.samples, "Grid points per axis")->check(CLI::PositiveNumber);

  CLI::App* classify_cmd = app.add_subcommand("classify", "Classify the two-node curve of (mu0, mu1, mu2)");
  common(classify_cmd);
  classify_cmd->add_option("--mu", o.mu, "mu0,mu1,mu2")->required();
  classify_cmd->add_option("--zero-tol", o.zero_tol, "Values at most this are treated as zero");

  CLI::App* figure_cmd = app.add_subcommand("figure", "Polylines of two-node curves");
  common(figure_cmd);
  figure_cmd->add_option("--lines", o.lines_path, "JSON file {\"lines\": [[mu0, mu1, mu2], ...]}")->required();
  figure_cmd->add_option("--window", o.window, "Node window LO:HI");
  figure_cmd->add_option("--samples", o.samples, "Points per branch")->check(CLI::Range(2, 10000000));

  CLI::App* bounds_cmd = app.add_subcommand("bounds", "Amplitude bounds along the Prony curve");
  common(bounds_cmd);
  moments_opts(bounds_cmd);
  curve_opts(bounds_cmd);
  bounds_cmd->add_option("--D", o.D, "Node box half-width, > 1")->required();
  bounds_cmd->add_option("--s", o.s, "Cluster size, 2..d");

  CLI::App* escape_cmd = app.add_subcommand("escape", "Root escape check for large t");
  common(escape_cmd);
  escape_cmd->add_option("--moments", o.moments_path, "JSON moments file, or {\"alpha\": [...], \"beta\": [...]}")
      ->required();
  escape_cmd->add_option("--d", o.d, "Model order; must match the file");
  escape_cmd->add_option("--t", o.t, "Curve parameter")->required();

  CLI::App* amplify_cmd = app.add_subcommand("amplify", "Noise amplification experiment on a node cluster");
  common(amplify_cmd);
  amplify_cmd->add_option("--d", o.d, "Number of nodes, 1..4");
  amplify_cmd->add_option("--h-grid", o.h_grid, "Cluster sizes a,b,c");
  amplify_cmd->add_option("--eps", o.eps, "Noise level");
  amplify_cmd->add_option("--trials", o.trials, "Trials per cluster size");
  amplify_cmd->add_option("--q-list", o.q_list, "Varieties to measure, e.g. 0,1,2,3 (default 0..2d-1)");
  amplify_cmd->add_option("--seed", o.seed, "Noise seed");

  // CLI11 wants argv[0]
  std::vector<std::string> owned{"prony_cli"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : owned) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  const auto defaults = [&o](const char* window, int samples) {
    if (o.window.empty()) o.window = window;
    if (o.samples == 0) o.samples = samples;
  };
  if (*curve_cmd) defaults("-10:10", 5);
  if (*bounds_cmd) defaults("-10:10", 20);
  if (*sample_cmd) defaults("-1:1", 5);
  if (*figure_cmd) defaults("-3:3", 50);

  std::string data;
  int code = kExitOk;
  try {
    if (*solve_cmd) code = cmd_solve(o, data);
    else if (*curve_cmd) code = cmd_curve(o, data);
    else if (*sample_cmd) code = cmd_sample(o, data);
    else if (*classify_cmd) code = cmd_classify(o, data);
    else if (*figure_cmd) code = cmd_figure(o, data);
    else if (*bounds_cmd) code = cmd_bounds(o, data);
    else if (*escape_cmd) code = cmd_escape(o, data, err);
    else if (*amplify_cmd) code = cmd_amplify(o, data);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }

  if (o.out_path.empty()) {
    out << data;
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << o.out_path << "'\n";
      return kExitInput;
    }
    f << data;
  }
  return code;
}

}  // namespace prony::cli
