#include "stoprule/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "stoprule/dp.hpp"
#include "stoprule/errors.hpp"
#include "stoprule/fullinfo.hpp"
#include "stoprule/io.hpp"
#include "stoprule/mc.hpp"
#include "stoprule/poisson.hpp"

namespace stoprule::cli {

namespace {

using io::json;

// Bad flag values found after CLI11 has parsed the line.
class FlagError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Json, Csv };

// A small table that renders either as CSV or as a JSON array of row objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void write_csv(std::ostream& out) const {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << io::format_number(row[c]);
      out << '\n';
    }
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& row : rows) {
      json obj = json::object();
      for (std::size_t c = 0; c < columns.size(); ++c) {
        const bool counter = columns[c] == "n" || columns[c] == "k" || columns[c] == "j";
        obj[columns[c]] = counter ? json(static_cast<long long>(row[c])) : io::number(row[c]);
      }
      arr.push_back(obj);
    }
    return arr;
  }
};

// Flat JSON object of scalars as a one-row CSV with the keys as header.
void write_object_csv(std::ostream& out, const json& obj) {
  std::string head, row;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (it.value().is_structured()) continue;
    if (!head.empty()) {
      head += ',';
      row += ',';
    }
    head += it.key();
    if (it.value().is_string()) {
      row += it.value().get<std::string>();
    } else if (it.value().is_number_float()) {
      row += io::format_number(it.value().get<double>());
    } else if (!it.value().is_null()) {
      row += it.value().dump();
    }
  }
  out << head << '\n' << row << '\n';
}

Index n_cap() {
  const char* env = std::getenv("STOPRULE_MAX_N");
  if (!env || !*env) return dp::DpOptions{}.max_n;
  char* end = nullptr;
  const long long v = std::strtoll(env, &end, 10);
  if (*end != '\0' || v < 1) throw FlagError(std::string("STOPRULE_MAX_N must be a positive integer, got '") + env + "'");
  return v;
}

void require_cap(Index n) {
  const Index cap = n_cap();
  if (n > cap) {
    throw ResourceLimit("n = " + std::to_string(n) + " exceeds the cap " + std::to_string(cap) +
                        " (raise it with STOPRULE_MAX_N)");
  }
}

struct ModelFlags {
  std::string kind;
  long long n = 0;
  long long k = 0;
  double p = 0.0;
  double rho = 0.0;
  double theta = 0.0;
  CLI::Option* k_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* rho_opt = nullptr;
  CLI::Option* theta_opt = nullptr;

  void attach(CLI::App* app, bool model_required = true) {
    auto* m = app->add_option("--model", kind,
                              "triangular | rectangular | pyramid | iid_uniform01 | trend_shifted | trend_scaled | "
                              "trend_power");
    if (model_required) m->required();
    app->add_option("--n", n, "number of observations")->required();
    k_opt = app->add_option("--k", k, "support size K (rectangular; default n)");
    p_opt = app->add_option("--p", p, "P(X_j = 1/j) (pyramid)");
    rho_opt = app->add_option("--rho", rho, "scale factor (trend_scaled)");
    theta_opt = app->add_option("--theta", theta, "power (trend_power)");
  }

  ObservationModel build() const {
    ModelKind mk{};
    try {
      mk = parse_model_kind(kind);
    } catch (const Error& e) {
      throw FlagError(e.what());
    }
    auto only = [&](CLI::Option* opt, bool allowed, const char* name) {
      if (opt->count() > 0 && !allowed) {
        throw FlagError(std::string(name) + " does not apply to model '" + kind + "'");
      }
    };
    only(k_opt, mk == ModelKind::RectangularDiscrete, "--k");
    only(p_opt, mk == ModelKind::BernoulliPyramid, "--p");
    only(rho_opt, mk == ModelKind::TrendUniformScaled, "--rho");
    only(theta_opt, mk == ModelKind::TrendPowerUniform, "--theta");
    auto needs = [&](CLI::Option* opt, bool needed, const char* name) {
      if (needed && opt->count() == 0) throw FlagError("model '" + kind + "' needs " + name);
    };
    needs(p_opt, mk == ModelKind::BernoulliPyramid, "--p");
    needs(rho_opt, mk == ModelKind::TrendUniformScaled, "--rho");
    needs(theta_opt, mk == ModelKind::TrendPowerUniform, "--theta");
    try {
      switch (mk) {
        case ModelKind::IidUniform01: return ObservationModel::iid_uniform01(n);
        case ModelKind::TriangularDiscrete: return ObservationModel::triangular(n);
        case ModelKind::RectangularDiscrete: return ObservationModel::rectangular(n, k);
        case ModelKind::BernoulliPyramid: return ObservationModel::bernoulli_pyramid(n, p);
        case ModelKind::TrendUniformShifted: return ObservationModel::trend_shifted(n);
        case ModelKind::TrendUniformScaled: return ObservationModel::trend_scaled(n, rho);
        case ModelKind::TrendPowerUniform: return ObservationModel::trend_power(n, theta);
      }
    } catch (const Error& e) {
      throw FlagError(e.what());
    }
    throw FlagError("unknown model kind");
  }
};

std::optional<ThresholdPolicy> load_policy(const std::string& source, Index n) {
  if (source.empty() || source == "optimal") return std::nullopt;
  std::ifstream in(source);
  if (!in) throw FlagError("cannot read policy file '" + source + "'");
  ThresholdPolicy policy;
  try {
    policy = io::policy_from_json(json::parse(in));
  } catch (const std::exception& e) {
    throw FlagError("bad policy file '" + source + "': " + e.what());
  }
  if (static_cast<Index>(policy.size()) != n) {
    throw FlagError("policy has " + std::to_string(policy.size()) + " thresholds, model has n = " + std::to_string(n));
  }
  return policy;
}

dp::DpSolution solve_capped(const ObservationModel& model, bool keep_tables = false) {
  require_cap(model.n());
  return dp::solve(model, {.max_n = n_cap(), .keep_tables = keep_tables});
}

// Thresholds of the exact optimal rule for every model the solvers cover.
ThresholdPolicy optimal_thresholds(const ObservationModel& model) {
  require_cap(model.n());
  return mc::optimal_policy(model);
}

std::string semantics_name(dp::RecordSemantics s) { return s == dp::RecordSemantics::Weak ? "weak" : "strict"; }

void check_grid_step(double lo, double hi, double step, const std::string& text) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step) || !(step > 0.0) || hi < lo) {
    throw FlagError("bad grid '" + text + "' (want lo:hi:step with lo <= hi, step > 0)");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double to_double(const std::string& s, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw FlagError("bad grid '" + text + "'");
  }
  if (used != s.size()) throw FlagError("bad grid '" + text + "'");
  return v;
}

}  // namespace

std::vector<double> parse_real_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {to_double(parts[0], text)};
  if (parts.size() != 3) throw FlagError("bad grid '" + text + "' (want lo:hi:step)");
  const double lo = to_double(parts[0], text), hi = to_double(parts[1], text), step = to_double(parts[2], text);
  check_grid_step(lo, hi, step, text);
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 10000000) throw FlagError("grid '" + text + "' has too many points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

std::vector<long long> parse_int_grid(const std::string& text) {
  std::vector<long long> out;
  for (double v : parse_real_grid(text)) {
    const double r = std::round(v);
    if (std::fabs(v - r) > 1e-9) throw FlagError("grid '" + text + "' must be integer valued");
    out.push_back(static_cast<long long>(r));
  }
  return out;
}

namespace {

struct Output {
  std::string format;  // empty: the subcommand default
  std::string path;

  Format resolve(Format fallback) const {
    if (format.empty()) return fallback;
    return format == "csv" ? Format::Csv : Format::Json;
  }
};

void attach_output(CLI::App* app, Output& o) {
  app->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("-o,--output", o.path, "write to this file instead of standard output");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string render(const json& obj, Format f) {
  if (f == Format::Json) return dump(obj);
  std::ostringstream out;
  write_object_csv(out, obj);
  return out.str();
}

std::string render(const Table& t, Format f) {
  if (f == Format::Json) return dump(t.to_json());
  std::ostringstream out;
  t.write_csv(out);
  return out.str();
}

json nullable(double x) { return std::isnan(x) ? json(nullptr) : io::number(x); }

// ---- subcommands ------------------------------------------------------------

struct ThresholdsCmd {
  ModelFlags model;
  Output output;
  std::string tables;

  void attach(CLI::App* app) {
    model.attach(app);
    attach_output(app, output);
    app->add_option("--tables", tables, "also write the s/v value tables as CSV (j,x,s,v) to this file");
  }

  std::string execute() const {
    const auto m = model.build();
    ThresholdPolicy policy;
    if (m.is_lattice() || m.kind() == ModelKind::BernoulliPyramid) {
      const auto sol = solve_capped(m, !tables.empty());
      policy = sol.policy;
      if (!tables.empty()) {
        std::ofstream f(tables);
        if (!f) throw Error("cannot write '" + tables + "'");
        io::write_tables_csv(f, sol);
        if (!f) throw Error("cannot write '" + tables + "'");
      }
    } else {
      if (!tables.empty()) throw UnsupportedModel("value tables exist only for triangular and rectangular models");
      policy = optimal_thresholds(m);
    }
    if (output.resolve(Format::Json) == Format::Csv) {
      Table t{{"j", "threshold"}, {}};
      for (std::size_t j = 1; j <= policy.size(); ++j) t.rows.push_back({static_cast<double>(j), policy.at_step(j)});
      return render(t, Format::Csv);
    }
    json out = {{"model", io::to_json(m)}};
    out["thresholds"] = io::to_json(policy).at("thresholds");
    return dump(out);
  }
};

struct ValueCmd {
  ModelFlags model;
  Output output;
  std::string policy;
  bool strict = false;

  void attach(CLI::App* app) {
    model.attach(app);
    attach_output(app, output);
    app->add_option("--policy", policy, "JSON policy file, or 'optimal' (default)");
    app->add_flag("--strict-records", strict, "ties with the running minimum are not records");
  }

  std::string execute() const {
    const auto m = model.build();
    const auto semantics = strict ? dp::RecordSemantics::Strict : dp::RecordSemantics::Weak;
    const auto given = load_policy(policy, m.n());
    json out = {{"model", io::to_json(m)}};
    Decomposition d;
    ThresholdPolicy used;
    if (m.kind() == ModelKind::IidUniform01) {
      used = given ? *given : optimal_thresholds(m);
      d = fullinfo::gm_success(used.thresholds());
    } else if (!given && !strict) {
      const auto sol = solve_capped(m);
      used = sol.policy;
      d = sol.decomposition;
    } else {
      require_cap(m.n());
      used = given ? *given : optimal_thresholds(m);
      d = dp::policy_value(m, used, semantics);
    }
    out["thresholds"] = io::to_json(used).at("thresholds");
    out["semantics"] = semantics_name(semantics);
    out["jump"] = io::number(d.jump);
    out["drift"] = io::number(d.drift);
    out["total"] = io::number(d.total);
    return render(out, output.resolve(Format::Json));
  }
};

struct FullinfoCmd {
  long long n = 0;
  Output output;

  void attach(CLI::App* app) {
    app->add_option("--n", n, "number of observations")->required();
    attach_output(app, output);
  }

  std::string execute() const {
    if (n < 1) throw FlagError("--n must be >= 1");
    require_cap(n);
    const auto t = fullinfo::gm_optimal_thresholds(n);
    const auto d = fullinfo::gm_success(t.b);
    if (output.resolve(Format::Json) == Format::Csv) {
      Table table{{"j", "threshold"}, {}};
      for (std::size_t j = 0; j < t.b.size(); ++j) table.rows.push_back({static_cast<double>(j + 1), t.b[j]});
      return render(table, Format::Csv);
    }
    json out = {{"n", n}};
    json b = json::array();
    for (double x : t.b) b.push_back(io::number(x));
    out["thresholds"] = b;
    out["v_bar"] = io::number(fullinfo::sakaguchi_value(n));
    out["jump"] = io::number(d.jump);
    out["drift"] = io::number(d.drift);
    return dump(out);
  }
};

struct LimitCmd {
  std::string geometry;
  double lambda = 0.0;
  double theta = 0.0;
  long long kmax = 0;
  CLI::Option* g_opt = nullptr;
  CLI::Option* l_opt = nullptr;
  CLI::Option* t_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  Output output;

  void attach(CLI::App* app) {
    g_opt = app->add_option("--geometry", geometry, "rect | tri: self-similar boundary limit")
                ->check(CLI::IsMember({"rect", "tri", "rectangular", "triangular"}));
    l_opt = app->add_option("--lambda", lambda, "intensity of the rectangular lattice limit");
    t_opt = app->add_option("--theta", theta, "exponent of the theta family");
    k_opt = app->add_option("--kmax", kmax, "series length for --lambda (default: automatic)");
    attach_output(app, output);
  }

  std::string execute() const {
    const int chosen = (g_opt->count() > 0) + (l_opt->count() > 0) + (t_opt->count() > 0);
    if (chosen != 1) throw FlagError("limit needs exactly one of --geometry, --lambda, --theta");
    if (k_opt->count() > 0 && l_opt->count() == 0) throw FlagError("--kmax only applies with --lambda");
    json out = json::object();
    if (g_opt->count() > 0) {
      const auto g = poisson::parse_geometry(geometry);
      const auto root = poisson::beta_star(g);
      const auto d = poisson::boundary_decomposition(g, root.root);
      out["geometry"] = std::string(poisson::to_string(g));
      out["beta_star"] = io::number(root.root);
      out["value"] = io::number(d.total);
      out["jump"] = io::number(d.jump);
      out["drift"] = io::number(d.drift);
      out["truncation_error"] = io::number(0.0);
    } else if (l_opt->count() > 0) {
      if (!(lambda > 0.0) || !std::isfinite(lambda)) throw FlagError("--lambda must be > 0");
      if (kmax < 0) throw FlagError("--kmax must be >= 0");
      const auto r = poisson::rect_limit(lambda, kmax);
      out["lambda"] = io::number(lambda);
      out["beta_star"] = nullptr;
      out["value"] = io::number(r.value.total);
      out["jump"] = io::number(r.value.jump);
      out["drift"] = io::number(r.value.drift);
      out["truncation_error"] = io::number(r.truncation_error);
      out["terms"] = r.terms;
    } else {
      if (!(theta > 0.0) || !std::isfinite(theta)) throw FlagError("--theta must be > 0");
      const auto root = poisson::theta_beta_star(theta);
      out["theta"] = io::number(theta);
      out["beta_star"] = io::number(root.root);
      out["value"] = io::number(poisson::theta_limit_at(theta, root.root));
      out["jump"] = nullptr;
      out["drift"] = nullptr;
      out["truncation_error"] = io::number(0.0);
    }
    return render(out, output.resolve(Format::Json));
  }
};

struct RootsCmd {
  double lambda = 1.0;
  long long kmax = 20;
  Output output;

  void attach(CLI::App* app) {
    app->add_option("--lambda", lambda, "intensity")->capture_default_str();
    app->add_option("--kmax", kmax, "largest rank k")->capture_default_str();
    attach_output(app, output);
  }

  std::string execute() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw FlagError("--lambda must be > 0");
    if (kmax < 1) throw FlagError("--kmax must be >= 1");
    const auto ladder = poisson::rect_roots(kmax, lambda);
    Table t{{"k", "z", "t", "clamped"}, {}};
    for (std::size_t i = 0; i < ladder.z.size(); ++i) {
      t.rows.push_back({static_cast<double>(i + 1), ladder.z[i], ladder.t[i], ladder.clamped[i] ? 1.0 : 0.0});
    }
    return render(t, output.resolve(Format::Csv));
  }
};

struct SimulateCmd {
  ModelFlags model;
  Output output;
  std::string policy = "optimal";
  long long reps = 100000;
  unsigned long long seed = 1;
  unsigned threads = 0;
  bool strict = false;

  void attach(CLI::App* app) {
    model.attach(app);
    attach_output(app, output);
    app->add_option("--policy", policy, "JSON policy file, or 'optimal'")->capture_default_str();
    app->add_option("--reps", reps, "replications")->capture_default_str();
    app->add_option("--seed", seed, "random seed")->capture_default_str();
    app->add_option("--threads", threads, "worker threads (0: all cores)");
    app->add_flag("--strict-records", strict, "ties with the running minimum are not records");
  }

  std::string execute() const {
    const auto m = model.build();
    if (reps < 1) throw FlagError("--reps must be >= 1");
    const auto given = load_policy(policy, m.n());
    mc::SimConfig cfg{m, given ? given : std::optional<ThresholdPolicy>(optimal_thresholds(m)), reps, seed,
                      strict ? dp::RecordSemantics::Strict : dp::RecordSemantics::Weak, threads};
    const auto r = mc::simulate(cfg);
    json out = {{"model", io::to_json(m)}};
    out["policy"] = given ? policy : "optimal";
    out["semantics"] = semantics_name(cfg.semantics);
    out["replications"] = r.replications;
    out["seed"] = seed;
    out["successes"] = r.successes;
    out["success_rate"] = io::number(r.success_rate);
    out["std_error"] = io::number(r.std_error);
    out["ties"] = r.ties;
    out["tie_rate"] = io::number(r.tie_rate);
    out["mean_stop_fraction"] = io::number(r.mean_stop_fraction);
    out["stop_fraction_std_error"] = io::number(r.stop_fraction_std_error);
    return render(out, output.resolve(Format::Json));
  }
};

struct SweepCmd {
  std::string kind;
  std::string grid;
  std::string lambda_grid;
  CLI::Option* kind_opt = nullptr;
  CLI::Option* lambda_opt = nullptr;
  Output output;

  void attach(CLI::App* app) {
    kind_opt = app->add_option("--model", kind, "triangular | rectangular | iid_uniform01")
                   ->check(CLI::IsMember({"triangular", "tri", "rectangular", "rect", "iid_uniform01", "iid"}));
    app->add_option("--grid", grid, "n grid lo:hi:step (default: 100:9000:100 triangular, 100:2000:100 otherwise)");
    lambda_opt = app->add_option("--lambda", lambda_grid,
                                 "lambda grid lo:hi:step, or 'default' for 0.003:0.01:0.0001 then 0.01:1:0.01");
    attach_output(app, output);
  }

  std::string execute() const {
    if ((kind_opt->count() > 0) == (lambda_opt->count() > 0)) throw FlagError("sweep needs exactly one of --model, --lambda");
    if (lambda_opt->count() > 0) {
      if (!grid.empty()) throw FlagError("--grid goes with --model; give the lambda grid to --lambda");
      return lambda_sweep();
    }
    const auto mk = parse_model_kind(kind);
    const auto ns = parse_int_grid(grid.empty() ? (mk == ModelKind::TriangularDiscrete ? "100:9000:100" : "100:2000:100")
                                                : grid);
    for (auto n : ns) {
      if (n < 1) throw FlagError("grid values must be >= 1");
      require_cap(n);
    }
    if (mk == ModelKind::IidUniform01) {
      Table t{{"n", "v_bar"}, {}};
      for (auto n : ns) t.rows.push_back({static_cast<double>(n), fullinfo::sakaguchi_value(n)});
      return render(t, output.resolve(Format::Csv));
    }
    Table t{{"n", "value", "jump", "drift"}, {}};
    for (auto n : ns) {
      const auto m = mk == ModelKind::TriangularDiscrete ? ObservationModel::triangular(n) : ObservationModel::rectangular(n);
      const auto d = solve_capped(m).decomposition;
      t.rows.push_back({static_cast<double>(n), d.total, d.jump, d.drift});
    }
    return render(t, output.resolve(Format::Csv));
  }

  std::string lambda_sweep() const {
    std::vector<double> lambdas;
    if (lambda_grid == "default") {
      lambdas = parse_real_grid("0.003:0.0099:0.0001");
      const auto upper = parse_real_grid("0.01:1:0.01");
      lambdas.insert(lambdas.end(), upper.begin(), upper.end());
    } else {
      lambdas = parse_real_grid(lambda_grid);
    }
    for (double l : lambdas) {
      if (!(l > 0.0)) throw FlagError("lambda values must be > 0");
    }
    // unclamped roots do not depend on lambda; the smallest lambda needs the most
    const double smallest = *std::min_element(lambdas.begin(), lambdas.end());
    const auto unclamped = poisson::compute_unclamped_roots(poisson::rect_limit_terms(smallest));
    Table t{{"lambda", "value"}, {}};
    for (double l : lambdas) t.rows.push_back({l, poisson::rect_limit(l, 0, unclamped).value.total});
    return render(t, output.resolve(Format::Csv));
  }
};

struct CheckCmd {
  std::string which;
  ModelFlags model;
  Output output;
  long long reps = 100000;
  unsigned long long seed = 1;
  unsigned threads = 0;

  void attach(CLI::App* app) {
    app->add_option("which", which, "scaling | bounds | tiebreak")
        ->required()
        ->check(CLI::IsMember({"scaling", "bounds", "tiebreak"}));
    model.attach(app, false);
    attach_output(app, output);
    app->add_option("--reps", reps, "replications")->capture_default_str();
    app->add_option("--seed", seed, "random seed")->capture_default_str();
    app->add_option("--threads", threads, "worker threads (0: all cores)");
  }

  std::string execute() {
    if (reps < 0) throw FlagError("--reps must be >= 0");
    json out = json::object();
    if (which == "scaling") {
      if (model.kind.empty()) model.kind = "triangular";
      const auto m = model.build();
      const auto r = mc::scaling_check(m, reps, seed, threads);
      out = {{"check", "scaling"}, {"model", io::to_json(m)}};
      out["skipped"] = r.skipped;
      out["note"] = r.note;
      out["scale"] = io::number(r.scale);
      out["statistic"] = nullable(r.statistic);
      out["threshold"] = io::number(r.threshold);
      out["passed"] = r.passed;
      out["exact_vs_limit"] = nullable(r.exact_vs_limit);
      out["empirical_vs_exact"] = nullable(r.empirical_vs_exact);
    } else if (which == "bounds") {
      if (model.kind.empty()) model.kind = "rectangular";
      const auto m = model.build();
      if (m.kind() != ModelKind::RectangularDiscrete) throw FlagError("bounds check needs --model rectangular");
      require_cap(m.n());
      const auto r = mc::bounds_check(m.n(), m.support_size(), reps, seed, threads);
      out = {{"check", "bounds"}, {"n", r.n}, {"K", r.K}};
      out["v_bar"] = io::number(r.v_bar);
      out["delta"] = io::number(r.delta);
      out["exact"] = io::number(r.exact);
      out["exact_holds"] = r.exact_holds;
      out["simulated"] = nullable(r.simulated);
      out["std_error"] = nullable(r.std_error);
      out["simulated_holds"] = r.simulated_holds;
      out["passed"] = r.exact_holds && r.simulated_holds;
    } else {
      if (model.kind.empty()) model.kind = "rectangular";
      const auto m = model.build();
      if (m.kind() != ModelKind::RectangularDiscrete) throw FlagError("tiebreak check needs --model rectangular");
      if (reps < 1) throw FlagError("--reps must be >= 1");
      const auto r = mc::tie_break_check(m, reps, seed);
      out = {{"check", "tiebreak"}, {"model", io::to_json(m)}};
      out["samples"] = r.samples;
      out["violations"] = r.violations;
      out["ks_statistic"] = io::number(r.ks_statistic);
      out["critical_value"] = io::number(r.critical_value);
      out["passed"] = r.passed;
    }
    return render(out, output.resolve(Format::Json));
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Best-choice stopping rules: exact solvers, Poisson limits and simulation", "stoprule"};
  app.require_subcommand(1, 1);

  ThresholdsCmd thresholds;
  ValueCmd value;
  FullinfoCmd full;
  LimitCmd limit;
  RootsCmd roots;
  SimulateCmd simulate;
  SweepCmd sweep;
  CheckCmd check;
  std::map<CLI::App*, std::function<std::string()>> actions;
  auto add = [&](const char* name, const char* help, auto& cmd) {
    auto* sub = app.add_subcommand(name, help);
    cmd.attach(sub);
    actions[sub] = [&cmd] { return cmd.execute(); };
  };
  add("thresholds", "optimal thresholds of a model", thresholds);
  add("value", "exact success probability with jump/drift split", value);
  add("fullinfo", "full-information thresholds and value", full);
  add("limit", "Poisson-limit constants", limit);
  add("roots", "rectangular root ladder z_k and cutoffs t_k", roots);
  add("simulate", "Monte Carlo success rate", simulate);
  add("sweep", "figure data: value against n or lambda", sweep);
  add("check", "statistical checks: scaling, bounds, tiebreak", check);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kFlagError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const Output* output = nullptr;
  if (chosen == app.get_subcommand("thresholds")) output = &thresholds.output;
  if (chosen == app.get_subcommand("value")) output = &value.output;
  if (chosen == app.get_subcommand("fullinfo")) output = &full.output;
  if (chosen == app.get_subcommand("limit")) output = &limit.output;
  if (chosen == app.get_subcommand("roots")) output = &roots.output;
  if (chosen == app.get_subcommand("simulate")) output = &simulate.output;
  if (chosen == app.get_subcommand("sweep")) output = &sweep.output;
  if (chosen == app.get_subcommand("check")) output = &check.output;

  std::string text;
  try {
    text = actions.at(chosen)();
  } catch (const FlagError& e) {
    err << "error: " << e.what() << "\n";
    return kFlagError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputationError;
  }

  if (output->path.empty()) {
    out << text;
    return kOk;
  }
  std::ofstream file(output->path, std::ios::binary);
  file << text;
  file.close();
  if (!file) {
    err << "error: cannot write '" << output->path << "'\n";
    return kComputationError;
  }
  return kOk;
}

}  // namespace stoprule::cli
