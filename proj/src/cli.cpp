#include "pickfreeze/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "pickfreeze/asymptotics.hpp"
#include "pickfreeze/berry_esseen.hpp"
#include "pickfreeze/concentration.hpp"
#include "pickfreeze/errors.hpp"
#include "pickfreeze/estimators.hpp"
#include "pickfreeze/hypothesis.hpp"
#include "pickfreeze/models.hpp"
#include "pickfreeze/output.hpp"
#include "pickfreeze/parallel.hpp"
#include "pickfreeze/rng.hpp"
#include "pickfreeze/sampling.hpp"
#include "pickfreeze/special.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#ifndef PICKFREEZE_VERSION
#define PICKFREEZE_VERSION "0.0.0-dev"
#endif

namespace pickfreeze {

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

long long parse_int_token(const char* first, const char* last, const std::string& what) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last) {
    throw ParameterError("cannot parse " + what + ": " + std::string(first, last));
  }
  return v;
}

double parse_double_token(const char* first, const char* last, const std::string& what) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last || !std::isfinite(v)) {
    throw ParameterError("cannot parse " + what + ": " + std::string(first, last));
  }
  return v;
}

template <typename Elem, typename ParseOne>
std::vector<Elem> split_list(const std::string& text, ParseOne&& one) {
  if (text.empty()) throw ParameterError("empty list");
  std::vector<Elem> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string::npos ? text.size() : comma;
    out.push_back(one(text.data() + pos, text.data() + end));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::vector<int> parse_subset(const std::string& text) {
  auto out = split_list<int>(text, [](const char* a, const char* b) {
    const long long v = parse_int_token(a, b, "subset coordinate");
    if (v < 1) throw ParameterError("subset coordinates are 1-based");
    return int(v);
  });
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      const auto colon = text.find(':', pos);
      parts.push_back(text.substr(pos, colon == std::string::npos ? std::string::npos
                                                                  : colon - pos));
      if (colon == std::string::npos) break;
      pos = colon + 1;
    }
    if (parts.size() != 3) throw ParameterError("grid must be start:stop:step");
    const double start = parse_double_token(parts[0].data(), parts[0].data() + parts[0].size(), "grid start");
    const double stop = parse_double_token(parts[1].data(), parts[1].data() + parts[1].size(), "grid stop");
    const double step = parse_double_token(parts[2].data(), parts[2].data() + parts[2].size(), "grid step");
    if (!(step > 0.0)) throw ParameterError("grid step must be positive");
    if (stop < start) throw ParameterError("grid stop must not precede start");
    std::vector<double> out;
    for (double v = start; v <= stop + step * 1e-9; v += step) out.push_back(v);
    return out;
  }
  return split_list<double>(text, [](const char* a, const char* b) {
    return parse_double_token(a, b, "grid value");
  });
}

namespace {

// ---------------------------------------------------------------------------
// configuration shared by the subcommands

struct RunConfig {
  std::string model_name;
  std::string model_config;
  std::vector<std::string> u_raw;
  std::vector<std::string> v_raw;
  std::vector<std::string> w_raw;
  std::vector<int> n_list;
  long long n = 1000;
  long long reps = 0;
  std::optional<std::uint64_t> seed_flag;
  double alpha = 0.05;
  double level = 0.95;
  std::string estimator = "S";
  std::string stat = "t1";
  std::vector<double> a_coeffs;
  double shift = 0.0;
  std::optional<double> sigma0;
  std::optional<double> bound_b;
  std::string mean_mode = "estimated";
  std::string grid_raw;
  int threads = 1;
  std::string out_path;
  std::string format = "csv";

  std::uint64_t seed = kDefaultSeed;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PICKFREEZE_SEED")) {
    std::uint64_t v = 0;
    const char* last = env + std::string(env).size();
    const auto [p, ec] = std::from_chars(env, last, v);
    if (ec != std::errc() || p != last) {
      throw ParameterError("PICKFREEZE_SEED is not an unsigned integer");
    }
    return v;
  }
  return kDefaultSeed;
}

MeanMode resolve_mean_mode(const std::string& text) {
  if (text == "estimated") return MeanMode::estimated();
  const double mu =
      parse_double_token(text.data(), text.data() + text.size(), "--mean-mode");
  return MeanMode::known_mean(mu);
}

StatKind resolve_stat(const std::string& text) {
  if (text == "t1") return StatKind::T1;
  if (text == "t2") return StatKind::T2;
  if (text == "t3") return StatKind::T3;
  if (text == "t4") return StatKind::T4;
  if (text == "t5") return StatKind::T5;
  if (text == "linear") return StatKind::Linear;
  throw ParameterError("unknown statistic: " + text);
}

// ---------------------------------------------------------------------------
// model resolution

AnalyticModel model_from_json(const nlohmann::json& j, const std::string& cli_name) {
  if (!j.is_object()) throw ParameterError("model config must be a JSON object");
  std::string name = j.value("name", cli_name);
  if (name.empty()) throw ParameterError("model config carries no model name");
  if (!cli_name.empty() && name != cli_name) {
    throw ParameterError("--model and model config disagree on the model name");
  }

  auto lambda1 = [&j]() {
    if (!j.contains("lambda1")) {
      throw ParameterError("this model family needs \"lambda1\" in the model config");
    }
    return j.at("lambda1").get<double>();
  };

  if (name == "ishigami") return ishigami_model(false);
  if (name == "ishigami_centered") return ishigami_model(true);
  if (name == "bilinear2") return bilinear2_model(lambda1());
  if (name == "bilinear3") return bilinear3_model(lambda1());
  if (name == "fuel_burn") return fuel_burn_model();
  if (name == "discrete") {
    DiscreteModel dm;
    dm.support = j.at("support").get<std::vector<std::vector<double>>>();
    dm.pmf = j.at("pmf").get<std::vector<std::vector<double>>>();
    dm.values = j.at("values").get<std::vector<double>>();
    AnalyticModel m;
    m.name = "discrete";
    m.spec = dm.to_model_spec();
    return m;
  }
  throw ParameterError("unknown model: " + name);
}

AnalyticModel resolve_model(const RunConfig& cfg) {
  if (!cfg.model_config.empty()) {
    std::ifstream in(cfg.model_config);
    if (!in) throw ParameterError("cannot open model config: " + cfg.model_config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParameterError("model config is not valid JSON: " + std::string(e.what()));
    }
    return model_from_json(j, cfg.model_name);
  }
  if (cfg.model_name.empty()) {
    throw ParameterError("pass --model or --model-config");
  }
  if (cfg.model_name == "bilinear2" || cfg.model_name == "bilinear3") {
    throw ParameterError("this model family needs --model-config with \"lambda1\"");
  }
  return model_from_json(nlohmann::json::object(), cfg.model_name);
}

// ---------------------------------------------------------------------------
// canonical config echo: effective values in a fixed order, excluding
// --threads and --out so re-runs with different parallelism or destinations
// produce byte-identical tables

class Echo {
 public:
  explicit Echo(const std::string& command) : text_(command) {}
  Echo& flag(const std::string& name, const std::string& value) {
    text_ += " --" + name + " " + value;
    return *this;
  }
  Echo& flag(const std::string& name, double value) {
    return flag(name, format_double(value));
  }
  Echo& flag(const std::string& name, long long value) {
    return flag(name, std::to_string(value));
  }
  Echo& list(const std::string& name, const std::vector<std::string>& values) {
    for (const auto& v : values) flag(name, v);
    return *this;
  }
  std::string str() const { return text_; }

 private:
  std::string text_;
};

void echo_model(Echo& echo, const RunConfig& cfg) {
  if (!cfg.model_name.empty()) echo.flag("model", cfg.model_name);
  if (!cfg.model_config.empty()) echo.flag("model-config", cfg.model_config);
}

// ---------------------------------------------------------------------------
// subcommand implementations; each returns the table to serialize

Design design_from_subsets(const std::vector<std::string>& raw, int p) {
  if (raw.empty()) throw DesignError("at least one --u subset is required");
  std::vector<std::vector<int>> subsets;
  subsets.reserve(raw.size());
  for (const auto& text : raw) subsets.push_back(parse_subset(text));
  return Design(std::move(subsets), p);
}

std::string subset_label(const std::vector<int>& subset) {
  std::string out;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) out += "+";
    out += std::to_string(subset[i]);
  }
  return out;
}

OutputTable cmd_estimate(const RunConfig& cfg) {
  const AnalyticModel model = resolve_model(cfg);
  const Design design = design_from_subsets(cfg.u_raw, model.spec.p());
  if (cfg.n < 2) throw ParameterError("--n must be at least 2");
  const MeanMode mean_mode = resolve_mean_mode(cfg.mean_mode);

  const auto sample =
      generate_pick_freeze(model.spec, design, int(cfg.n), cfg.seed, cfg.threads);

  IndexEstimate est;
  std::vector<ConfidenceInterval> ci;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (cfg.estimator == "S") {
    est = estimate_S(sample);
    ci = asymptotic_ci(est, gamma_S(sample, est), cfg.level);
  } else if (cfg.estimator == "T") {
    est = estimate_T(sample);
    ci = asymptotic_ci(est, gamma_T(sample, est), cfg.level);
  } else if (cfg.estimator == "full") {
    est = estimate_full_info(sample);
    ci.assign(est.values.size(), {nan, nan});
  } else if (cfg.estimator == "tilde") {
    est = estimate_tilde_S(sample, mean_mode);
    const auto m = be_moments(sample, 0.0, mean_mode);
    const double half = normal_quantile(0.5 * (1.0 + cfg.level)) *
                        std::sqrt(m.sigma2 / double(cfg.n));
    ci = {{est.values[0] - half, est.values[0] + half}};
  } else {
    throw ParameterError("unknown estimator: " + cfg.estimator);
  }

  Echo echo("estimate");
  echo_model(echo, cfg);
  echo.list("u", cfg.u_raw)
      .flag("n", cfg.n)
      .flag("estimator", cfg.estimator)
      .flag("level", cfg.level);
  if (cfg.estimator == "tilde") echo.flag("mean-mode", cfg.mean_mode);
  echo.flag("seed", std::to_string(cfg.seed)).flag("format", cfg.format);

  OutputTable t;
  t.version = PICKFREEZE_VERSION;
  t.seed = cfg.seed;
  t.config = echo.str();
  t.columns = {"subset", "estimator", "value", "ci_low", "ci_high", "n", "seed"};
  for (std::size_t j = 0; j < est.values.size(); ++j) {
    t.rows.push_back({Cell::str(subset_label(design.subsets()[j])),
                      Cell::str(estimator_name(est.estimator)),
                      Cell::num(est.values[j]), Cell::num(ci[j].low),
                      Cell::num(ci[j].high), Cell::count(cfg.n),
                      Cell::count((long long)cfg.seed)});
  }
  return t;
}

TestProblem problem_from_config(const RunConfig& cfg) {
  TestProblem problem;
  for (const auto& s : cfg.u_raw) problem.u.push_back(parse_subset(s));
  for (const auto& s : cfg.v_raw) problem.v.push_back(parse_subset(s));
  for (const auto& s : cfg.w_raw) problem.w.push_back(parse_subset(s));
  problem.validate();
  return problem;
}

OutputTable cmd_test(const RunConfig& cfg) {
  const AnalyticModel model = resolve_model(cfg);
  const TestProblem problem = problem_from_config(cfg);
  if (cfg.n < 2) throw ParameterError("--n must be at least 2");
  const StatKind kind = resolve_stat(cfg.stat);
  const std::size_t dim = problem.dim();

  std::vector<double> a = cfg.a_coeffs;
  if (kind == StatKind::Linear && a.empty()) a.assign(dim, 1.0);
  if (kind != StatKind::Linear && !a.empty()) {
    throw ParameterError("--A only applies to --stat linear");
  }

  const Design design = problem.combined_design(model.spec.p());
  auto run_one = [&](std::uint64_t run_seed, int threads) {
    const auto sample =
        generate_pick_freeze(model.spec, design, int(cfg.n), run_seed, threads);
    const auto g = build_GN(sample, problem);
    if (kind == StatKind::Linear) {
      return test_linear(a, g, cfg.alpha, cfg.shift);
    }
    TestResult r;
    r.kind = kind;
    r.alpha = cfg.alpha;
    r.statistic = test_statistic(kind, g.gn);
    r.threshold = cfg.sigma0
                      ? test_threshold(kind, dim, cfg.alpha, *cfg.sigma0)
                      : simulated_threshold(kind, g.gamma, cfg.alpha, 100000,
                                            derive_seed(run_seed, 1000003));
    r.reject = r.statistic > r.threshold;
    return r;
  };

  Echo echo("test");
  echo_model(echo, cfg);
  echo.list("u", cfg.u_raw).list("v", cfg.v_raw).list("w", cfg.w_raw);
  echo.flag("n", cfg.n);
  if (cfg.reps > 1) echo.flag("reps", cfg.reps);
  echo.flag("stat", cfg.stat).flag("alpha", cfg.alpha);
  if (kind == StatKind::Linear) {
    std::string a_text;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i) a_text += ",";
      a_text += format_double(a[i]);
    }
    echo.flag("A", a_text);
    if (cfg.shift != 0.0) echo.flag("shift", cfg.shift);
  }
  if (cfg.sigma0) echo.flag("sigma0", *cfg.sigma0);
  echo.flag("seed", std::to_string(cfg.seed)).flag("format", cfg.format);

  OutputTable t;
  t.version = PICKFREEZE_VERSION;
  t.seed = cfg.seed;
  t.config = echo.str();

  if (cfg.reps > 1) {
    std::vector<std::uint8_t> reject(std::size_t(cfg.reps), 0);
    parallel_chunks(cfg.reps, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t r = lo; r < hi; ++r) {
        reject[std::size_t(r)] =
            run_one(derive_seed(cfg.seed, std::uint64_t(r)), 1).reject ? 1 : 0;
      }
    });
    std::size_t hits = 0;
    for (std::uint8_t b : reject) hits += b;
    const double rate = double(hits) / double(cfg.reps);
    t.columns = {"stat", "alpha", "n", "reps", "rejection_rate", "mc_stderr", "seed"};
    t.rows.push_back(
        {Cell::str(cfg.stat), Cell::num(cfg.alpha), Cell::count(cfg.n),
         Cell::count(cfg.reps), Cell::num(rate),
         Cell::num(std::sqrt(rate * (1.0 - rate) / double(cfg.reps))),
         Cell::count((long long)cfg.seed)});
    return t;
  }

  const TestResult r = run_one(cfg.seed, cfg.threads);
  t.columns = {"stat", "statistic", "threshold", "alpha", "reject", "n", "seed"};
  t.rows.push_back({Cell::str(cfg.stat), Cell::num(r.statistic),
                    Cell::num(r.threshold), Cell::num(r.alpha),
                    Cell::count(r.reject ? 1 : 0), Cell::count(cfg.n),
                    Cell::count((long long)cfg.seed)});
  return t;
}

OutputTable cmd_power(const RunConfig& cfg) {
  PowerFamily family;
  if (cfg.model_name == "bilinear2") {
    family = PowerFamily::Bilinear2;
  } else if (cfg.model_name == "bilinear3") {
    family = PowerFamily::Bilinear3;
  } else {
    throw ParameterError("power sweeps cover --model bilinear2 or bilinear3");
  }

  TestProblem problem;
  if (cfg.u_raw.empty() && cfg.v_raw.empty() && cfg.w_raw.empty()) {
    if (family == PowerFamily::Bilinear2) {
      problem.u = {{1}, {2}};
    } else {
      problem.u = {{1}};
      problem.v = {{1, 2}, {1, 3}};
      problem.w = {{2}, {3}};
    }
  } else {
    problem = problem_from_config(cfg);
  }

  const StatKind kind = resolve_stat(cfg.stat);
  if (cfg.grid_raw.empty()) throw ParameterError("power needs a --grid of lambda1 values");
  const auto grid = parse_grid(cfg.grid_raw);
  const long long reps = cfg.reps > 0 ? cfg.reps : 500;
  std::vector<int> n_list = cfg.n_list.empty() ? std::vector<int>{int(cfg.n)} : cfg.n_list;

  Echo echo("power");
  echo_model(echo, cfg);
  echo.list("u", cfg.u_raw).list("v", cfg.v_raw).list("w", cfg.w_raw);
  for (int n : n_list) echo.flag("n", (long long)n);
  echo.flag("reps", reps)
      .flag("stat", cfg.stat)
      .flag("alpha", cfg.alpha)
      .flag("grid", cfg.grid_raw)
      .flag("seed", std::to_string(cfg.seed))
      .flag("format", cfg.format);

  OutputTable t;
  t.version = PICKFREEZE_VERSION;
  t.seed = cfg.seed;
  t.config = echo.str();
  t.columns = {"n", "parameter", "power", "closed_form_power", "mc_stderr"};
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const auto curve =
        power_curve(family, problem, kind, cfg.alpha, grid, std::size_t(n_list[ni]),
                    std::size_t(reps), derive_seed(cfg.seed, ni), unsigned(cfg.threads));
    for (const auto& pt : curve) {
      t.rows.push_back({Cell::count(n_list[ni]), Cell::num(pt.parameter),
                        Cell::num(pt.power), Cell::num(pt.closed_form),
                        Cell::num(pt.mc_stderr)});
    }
  }
  return t;
}

OutputTable cmd_concentration(const RunConfig& cfg) {
  const AnalyticModel model = resolve_model(cfg);
  if (cfg.u_raw.size() != 1) {
    throw DesignError("deviation bounds take exactly one --u subset");
  }
  const auto u = parse_subset(cfg.u_raw[0]);
  BoundVariant variant;
  if (cfg.estimator == "S") {
    variant = BoundVariant::S;
  } else if (cfg.estimator == "T") {
    variant = BoundVariant::T;
  } else {
    throw ParameterError("deviation bounds exist for --estimator S or T");
  }
  const std::vector<int> n_list =
      cfg.n_list.empty() ? std::vector<int>{1000, 4000, 8000, 12000} : cfg.n_list;
  const std::string grid_raw = cfg.grid_raw.empty() ? "0.05:0.5:0.05" : cfg.grid_raw;
  const auto y_grid = parse_grid(grid_raw);

  const auto rows = deviation_curve(model.spec, u, variant, n_list, y_grid, cfg.seed,
                                    cfg.bound_b, unsigned(cfg.threads));

  Echo echo("concentration");
  echo_model(echo, cfg);
  echo.list("u", cfg.u_raw);
  for (int n : n_list) echo.flag("n", (long long)n);
  echo.flag("estimator", cfg.estimator).flag("grid", grid_raw);
  if (cfg.bound_b) echo.flag("b", *cfg.bound_b);
  echo.flag("seed", std::to_string(cfg.seed)).flag("format", cfg.format);

  OutputTable t;
  t.version = PICKFREEZE_VERSION;
  t.seed = cfg.seed;
  t.config = echo.str();
  t.columns = {"variant", "side",  "n",     "y",     "bound",
               "term1",   "term2", "term3", "term4", "term5"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : rows) {
    std::vector<Cell> row = {Cell::str(bound_variant_name(r.variant)),
                             Cell::str(bound_side_name(r.side)),
                             Cell::count((long long)r.n), Cell::num(r.y),
                             Cell::num(r.bound)};
    for (std::size_t i = 0; i < 5; ++i) {
      row.push_back(Cell::num(i < r.terms.size() ? r.terms[i].second : nan));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

OutputTable cmd_berry(const RunConfig& cfg) {
  const AnalyticModel model = resolve_model(cfg);
  if (cfg.u_raw.size() != 1) {
    throw DesignError("the coverage sweep takes exactly one --u subset");
  }
  const auto u = parse_subset(cfg.u_raw[0]);
  const std::vector<int> n_list =
      cfg.n_list.empty() ? std::vector<int>{1000, 3000, 10000, 30000, 100000}
                         : cfg.n_list;
  const long long reps = cfg.reps > 0 ? cfg.reps : 500;
  const MeanMode mean_mode = resolve_mean_mode(cfg.mean_mode);

  // singleton subsets of a model with known first-order indices need no
  // reference run
  std::optional<double> true_index;
  if (u.size() == 1 && !model.known_first_order.empty()) {
    true_index = model.known_first_order[std::size_t(u[0] - 1)];
  }

  const auto curve =
      coverage_curve(model.spec, u, n_list, std::size_t(reps), cfg.level, true_index,
                     cfg.seed, mean_mode, unsigned(cfg.threads));

  Echo echo("berry");
  echo_model(echo, cfg);
  echo.list("u", cfg.u_raw);
  for (int n : n_list) echo.flag("n", (long long)n);
  echo.flag("reps", reps)
      .flag("level", cfg.level)
      .flag("mean-mode", cfg.mean_mode)
      .flag("seed", std::to_string(cfg.seed))
      .flag("format", cfg.format);

  OutputTable t;
  t.version = PICKFREEZE_VERSION;
  t.seed = cfg.seed;
  t.config = echo.str();
  t.columns = {"n", "L", "U", "empirical_coverage", "mu3", "sigma2"};
  for (const auto& pt : curve) {
    t.rows.push_back({Cell::count((long long)pt.n), Cell::num(pt.lower),
                      Cell::num(pt.upper), Cell::num(pt.coverage),
                      Cell::num(pt.mu3), Cell::num(pt.sigma2)});
  }
  return t;
}

void emit(const OutputTable& table, const RunConfig& cfg, std::ostream& out) {
  if (cfg.out_path.empty()) {
    write_output(table, cfg.format, out);
    return;
  }
  std::ofstream file(cfg.out_path, std::ios::binary);
  if (!file) throw ParameterError("cannot open output file: " + cfg.out_path);
  write_output(table, cfg.format, file);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"pick-freeze sensitivity analysis", "pickfreeze"};
  app.set_version_flag("--version", PICKFREEZE_VERSION);
  app.require_subcommand(1);

  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--model", cfg.model_name,
                    "model name: ishigami, ishigami_centered, bilinear2, "
                    "bilinear3, fuel_burn, discrete");
    sub->add_option("--model-config", cfg.model_config,
                    "JSON file with the model name and its parameters");
    sub->add_option("--seed", cfg.seed_flag,
                    "RNG seed (falls back to PICKFREEZE_SEED, then 42)");
    sub->add_option("--threads", cfg.threads, "worker threads")
        ->check(CLI::Range(1, 4096));
    sub->add_option("--out", cfg.out_path, "write the table to this file");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* estimate = app.add_subcommand("estimate", "estimate indices with CIs");
  add_common(estimate);
  estimate->add_option("--u", cfg.u_raw, "design subset, e.g. 1 or 1,3 (repeatable)");
  estimate->add_option("--n", cfg.n, "sample size");
  estimate->add_option("--estimator", cfg.estimator, "S, T, full, or tilde")
      ->check(CLI::IsMember({"S", "T", "full", "tilde"}));
  estimate->add_option("--level", cfg.level, "confidence level");
  estimate->add_option("--mean-mode", cfg.mean_mode,
                       "tilde centering: 'estimated' or a known mean value");

  CLI::App* test = app.add_subcommand("test", "run a joint hypothesis test");
  add_common(test);
  test->add_option("--u", cfg.u_raw, "nullity subset (repeatable)");
  test->add_option("--v", cfg.v_raw, "equality subset, left side (repeatable)");
  test->add_option("--w", cfg.w_raw, "equality subset, right side (repeatable)");
  test->add_option("--n", cfg.n, "sample size");
  test->add_option("--reps", cfg.reps, "replicates; >1 reports the rejection rate");
  test->add_option("--stat", cfg.stat, "t1..t5 or linear")
      ->check(CLI::IsMember({"t1", "t2", "t3", "t4", "t5", "linear"}));
  test->add_option("--alpha", cfg.alpha, "test level");
  test->add_option("--A", cfg.a_coeffs, "linear-form coefficients (repeatable)");
  test->add_option("--shift", cfg.shift, "subtracted from A.G before studentizing");
  test->add_option("--sigma0", cfg.sigma0,
                   "known null per-coordinate standard deviation; omit to "
                   "simulate the threshold from the plug-in covariance");

  CLI::App* power = app.add_subcommand("power", "power sweep over lambda1");
  add_common(power);
  power->add_option("--u", cfg.u_raw, "nullity subset (repeatable)");
  power->add_option("--v", cfg.v_raw, "equality subset, left side (repeatable)");
  power->add_option("--w", cfg.w_raw, "equality subset, right side (repeatable)");
  power->add_option("--n", cfg.n_list, "sample size (repeatable)");
  power->add_option("--reps", cfg.reps, "replicates per grid point");
  power->add_option("--stat", cfg.stat, "t1..t5")
      ->check(CLI::IsMember({"t1", "t2", "t3", "t4", "t5"}));
  power->add_option("--alpha", cfg.alpha, "test level");
  power->add_option("--grid", cfg.grid_raw, "lambda1 grid, start:stop:step or list");

  CLI::App* concentration =
      app.add_subcommand("concentration", "finite-sample deviation bounds");
  add_common(concentration);
  concentration->add_option("--u", cfg.u_raw, "design subset");
  concentration->add_option("--n", cfg.n_list, "sample size (repeatable)");
  concentration->add_option("--estimator", cfg.estimator, "S or T bound variant")
      ->check(CLI::IsMember({"S", "T"}));
  concentration->add_option("--grid", cfg.grid_raw, "deviation y grid");
  concentration->add_option("--b", cfg.bound_b, "analytic output bound");

  CLI::App* berry = app.add_subcommand("berry", "confidence-level bracket sweep");
  add_common(berry);
  berry->add_option("--u", cfg.u_raw, "design subset");
  berry->add_option("--n", cfg.n_list, "sample size (repeatable)");
  berry->add_option("--reps", cfg.reps, "replicate intervals per n");
  berry->add_option("--level", cfg.level, "nominal confidence level");
  auto* berry_mean_mode =
      berry->add_option("--mean-mode", cfg.mean_mode,
                        "centering: a known mean value or 'estimated' "
                        "(default 0)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (berry->parsed() && berry_mean_mode->count() == 0) cfg.mean_mode = "0";
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << app.version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    cfg.seed = resolve_seed(cfg.seed_flag);
    OutputTable table;
    if (estimate->parsed()) {
      table = cmd_estimate(cfg);
    } else if (test->parsed()) {
      table = cmd_test(cfg);
    } else if (power->parsed()) {
      table = cmd_power(cfg);
    } else if (concentration->parsed()) {
      table = cmd_concentration(cfg);
    } else {
      table = cmd_berry(cfg);
    }
    emit(table, cfg, out);
    return 0;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DesignError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace pickfreeze
