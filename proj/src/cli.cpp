#include "lifshitz/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "lifshitz/bounds.hpp"
#include "lifshitz/discretize.hpp"
#include "lifshitz/eigensolve.hpp"
#include "lifshitz/errors.hpp"
#include "lifshitz/ids.hpp"
#include "lifshitz/json_io.hpp"
#include "lifshitz/parallel.hpp"

#ifndef LIFSHITZ_VERSION
#define LIFSHITZ_VERSION "dev"
#endif

namespace lifshitz::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "schema_version",     "seed",
      "model.kind",         "model.profile",       "model.profile_lo",     "model.profile_hi",
      "model.profile_height", "model.profile_csv", "model.lambda_min",     "model.lambda_max",
      "model.table_csv",    "distribution.kind",   "distribution.p",       "distribution.a",
      "distribution.b",     "distribution.values", "distribution.weights", "distribution.value",
      "run.L",              "run.m",               "run.samples",          "grid.energies",
      "grid.emax",          "grid.ratio",          "grid.points",          "bounds.alpha",
      "bounds.beta",        "bounds.sharp_threshold", "bounds.numeric_e1", "fit.input",
      "fit.E0",             "ld.L_values",         "ld.threshold",         "hyp.lambda_grid",
      "hyp.x_grid",         "solver.tol",          "solver.max_iterations",
  };
  return keys;
}

int positive_int(const Config& cfg, const std::string& key, std::int64_t min = 1) {
  const auto v = cfg.integer(key);
  if (v < min || v > 1'000'000'000) {
    throw ValidationError("config field '" + key + "': must be an integer >= " + std::to_string(min));
  }
  return static_cast<int>(v);
}

// Points per unit cell; the one physical default besides solver tolerances.
int mesh_points(const Config& cfg) {
  if (!cfg.has("run.m")) return kDefaultPointsPerCell;
  return positive_int(cfg, "run.m", 2);
}

double checked_alpha(const Config& cfg) {
  const double alpha = cfg.number("bounds.alpha");
  if (!(alpha > 0.0)) throw ValidationError("config field 'bounds.alpha': must be positive");
  if (alpha > std::numbers::pi * std::numbers::pi) {
    throw ValidationError(
        "config field 'bounds.alpha': alpha must not exceed pi^2 (the constant-state gap estimate E2 >= alpha/L^2 "
        "needs alpha <= pi^2)");
  }
  return alpha;
}

SingleSiteModel tabulated_from_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "config field 'model.table_csv': cannot open " + path);
  std::map<std::pair<double, double>, double> table;
  std::set<double> lambdas;
  std::set<double> xs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double lambda = 0.0;
    double x = 0.0;
    double u = 0.0;
    if (!(row >> lambda >> x >> u)) {
      if (table.empty()) continue;
      throw ValidationError("config field 'model.table_csv': malformed row '" + line + "'");
    }
    table[{lambda, x}] = u;
    lambdas.insert(lambda);
    xs.insert(x);
  }
  require(table.size() == lambdas.size() * xs.size(),
          "config field 'model.table_csv': samples must form a full (lambda, x) grid");
  std::vector<double> values;
  for (double lambda : lambdas) {
    for (double x : xs) values.push_back(table.at({lambda, x}));
  }
  return SingleSiteModel::tabulated({lambdas.begin(), lambdas.end()}, {xs.begin(), xs.end()}, std::move(values));
}

Profile profile_from_config(const Config& cfg) {
  const auto& kind = cfg.string("model.profile");
  if (kind == "indicator") {
    return Profile::indicator(cfg.number("model.profile_lo"), cfg.number("model.profile_hi"),
                              cfg.number_or("model.profile_height", 1.0));
  }
  if (kind == "quartic_bump") return Profile::quartic_bump();
  if (kind == "csv") return Profile::from_csv(cfg.string("model.profile_csv"));
  throw ValidationError("config field 'model.profile': unknown profile '" + kind +
                        "' (expected indicator, quartic_bump or csv)");
}

struct Artifact {
  std::string extension;  // "csv", "json", ...
  std::string content;
};

struct Outcome {
  std::vector<Artifact> artifacts;
  json summary = json::object();
};

std::uint64_t seed_of(const Config& cfg) { return cfg.unsigned_integer("seed"); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

BisectionOptions solver_options(const Config& cfg) {
  BisectionOptions o;
  o.tol = cfg.number_or("solver.tol", 0.0);
  o.max_iterations = static_cast<int>(cfg.integer_or("solver.max_iterations", 200));
  if (o.max_iterations < 1) throw ValidationError("config field 'solver.max_iterations': must be >= 1");
  return o;
}

// ---------------------------------------------------------------- subcommands

Outcome run_ids(const Config& cfg, unsigned threads) {
  const auto dist = distribution_from_config(cfg);
  const auto model = model_from_config(cfg, &dist);
  const int L = positive_int(cfg, "run.L");
  const int m = mesh_points(cfg);
  const auto R = static_cast<std::uint64_t>(positive_int(cfg, "run.samples"));
  const auto est = estimate_ids(model, dist, L, m, grid_from_config(cfg), R, seed_of(cfg), {.threads = threads});
  std::ostringstream csv;
  write_csv(est, csv);
  Outcome o;
  o.artifacts.push_back({"csv", csv.str()});
  o.summary = {{"runtime_seconds", est.runtime_seconds}, {"points", est.grid.size()}};
  return o;
}

Outcome run_fit(const Config& cfg, unsigned) {
  const auto& path = cfg.string("fit.input");
  std::ifstream in(path);
  if (!in) throw ValidationError("config field 'fit.input': cannot open " + path);
  const auto est = read_ids_csv(in);
  const auto fit = fit_lifshitz_exponent(est, cfg.number_or("fit.E0", 0.0));
  std::ostringstream csv;
  csv << "slope,slope_ci,intercept,e_lo,e_hi,points_used,E0\n"
      << fmt(fit.slope) << ',' << fmt(fit.slope_ci) << ',' << fmt(fit.intercept) << ',' << fmt(fit.e_lo) << ','
      << fmt(fit.e_hi) << ',' << fit.points_used << ',' << fmt(fit.E0) << '\n';
  Outcome o;
  o.artifacts.push_back({"csv", csv.str()});
  o.artifacts.push_back({"fit.json", json(fit).dump(2) + "\n"});
  o.summary = fit;
  return o;
}

Outcome run_bounds(const Config& cfg, unsigned) {
  const auto dist = distribution_from_config(cfg);
  dist.require_unit_support();
  const double alpha = checked_alpha(cfg);
  const int L = positive_int(cfg, "run.L");
  const int m = mesh_points(cfg);
  const auto R = static_cast<std::uint64_t>(positive_int(cfg, "run.samples"));
  const bool numeric = cfg.boolean_or("bounds.numeric_e1", true);
  const auto solver = solver_options(cfg);
  const double slack = mesh_slack(m);

  std::ostringstream csv;
  csv << "r,seed,L,s_l,s_l_tilde,a,harmonic_term,lower,simplified,applicable,m1,m2,temple,temple_free_gap,"
         "numeric_e1,slack,sound\n";
  json reports = json::array();
  std::size_t violations = 0;
  std::size_t temple_useful = 0;
  for (std::uint64_t r = 0; r < R; ++r) {
    const auto seed = derive_seed(seed_of(cfg), r);
    const auto realization = sample_realization(dist, L, seed);
    auto rep = thirring_lower_bound(alpha, realization);
    if (numeric) {
      const auto T = assemble(RandomPotential{SingleSiteModel::characteristic_breather(), realization}, m);
      rep.numeric_e1 = ground_state_energy(T, solver);
      rep.mesh_points = m;
    }
    const auto cmp = compare_temple_thirring(alpha, realization);
    const bool sound = !rep.numeric_e1 || *rep.numeric_e1 >= rep.simplified - slack;
    violations += !sound;
    temple_useful += !cmp.temple_useless();
    csv << r << ',' << seed << ',' << L << ',' << fmt(rep.s_l) << ',' << fmt(rep.s_l_tilde) << ',' << fmt(rep.a)
        << ',' << fmt(rep.harmonic_term) << ',' << fmt(rep.lower) << ',' << fmt(rep.simplified) << ','
        << rep.applicable << ',' << fmt(cmp.m1) << ',' << fmt(cmp.m2) << ',' << fmt_opt(cmp.temple) << ','
        << fmt_opt(cmp.temple_free_gap) << ',' << fmt_opt(rep.numeric_e1) << ',' << fmt(slack) << ',' << sound
        << '\n';
    reports.push_back({{"r", r}, {"seed", seed}, {"thirring", rep}, {"temple", cmp}});
  }
  Outcome o;
  o.artifacts.push_back({"csv", csv.str()});
  o.artifacts.push_back({"reports.json", reports.dump(2) + "\n"});
  o.summary = {{"realizations", R},
               {"thirring_violations", violations},
               {"temple_positive_bounds", temple_useful},
               {"mesh_slack", slack},
               {"mesh_slack_constant", mesh_slack_constant()}};
  return o;
}

Outcome run_certify(const Config& cfg, unsigned) {
  const auto dist = distribution_from_config(cfg);
  dist.require_unit_support();
  const double alpha = checked_alpha(cfg);
  const double beta = cfg.number("bounds.beta");
  if (!(beta > 0.0)) throw ValidationError("config field 'bounds.beta': must be positive");
  const double bmax = beta_max(alpha, dist);
  if (beta > bmax) {
    throw ValidationError("config field 'bounds.beta': beta = " + fmt(beta) + " exceeds beta_max = sqrt(alpha*" +
                          "E{min(lambda,1/2)}/10) = " + fmt(bmax));
  }
  const CertifyOptions options{.sharp_threshold = cfg.boolean_or("bounds.sharp_threshold", false)};
  std::ostringstream csv;
  csv << "E,L,free_count,ld_threshold,ld_factor,bound,valid,reasons\n";
  json reports = json::array();
  std::size_t valid = 0;
  for (double E : grid_from_config(cfg)) {
    const auto cb = certified_ids_bound(E, alpha, beta, dist, options);
    std::string reasons;
    for (const auto& why : cb.invalid_reasons) reasons += (reasons.empty() ? "" : "; ") + why;
    csv << fmt(E) << ',' << cb.L_chosen << ',' << cb.free_count << ',' << fmt_opt(cb.ld_threshold) << ','
        << fmt_opt(cb.ld_factor) << ',' << fmt_opt(cb.bound) << ',' << cb.valid << ",\"" << reasons << "\"\n";
    reports.push_back(cb);
    valid += cb.valid;
  }
  Outcome o;
  o.artifacts.push_back({"csv", csv.str()});
  o.artifacts.push_back({"reports.json", reports.dump(2) + "\n"});
  o.summary = {{"valid_points", valid}, {"beta_max", bmax}, {"mu_tilde", dist.mean_cutoff()}};
  return o;
}

Outcome run_check_hyp(const Config& cfg, unsigned) {
  const auto model = model_from_config(cfg);
  const auto report =
      check_hypothesis_a(model, positive_int(cfg, "hyp.lambda_grid", 16), positive_int(cfg, "hyp.x_grid", 16));
  std::ostringstream csv;
  csv << "clause,lambda,x,detail\n";
  for (const auto& v : report.violations) {
    csv << v.clause << ',' << fmt(v.lambda) << ',' << fmt(v.x) << ",\"" << v.detail << "\"\n";
  }
  json j = report;
  j["model"] = model.name();
  Outcome o;
  o.artifacts.push_back({"csv", csv.str()});
  o.artifacts.push_back({"report.json", j.dump(2) + "\n"});
  o.summary = j;
  return o;
}

Outcome run_ld(const Config& cfg, unsigned threads) {
  const auto dist = distribution_from_config(cfg);
  const auto R = static_cast<std::uint64_t>(positive_int(cfg, "run.samples"));
  const double mu = dist.mean_cutoff();
  double threshold = 0.5 * mu;
  if (cfg.has("ld.threshold")) {
    const auto& v = cfg.values().at("ld.threshold");
    if (const auto* s = std::get_if<std::string>(&v)) {
      if (*s != "half_mu_tilde") {
        throw ValidationError("config field 'ld.threshold': expected a number or \"half_mu_tilde\"");
      }
    } else {
      threshold = cfg.number("ld.threshold");
    }
  }
  std::ostringstream csv;
  csv << "L,threshold,mu_tilde,empirical,ci_lower,ci_upper,ci_half,hoeffding,within\n";
  json rows = json::array();
  const auto Ls = cfg.numbers("ld.L_values");
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    const double Lv = Ls[i];
    if (!(Lv >= 1.0) || std::trunc(Lv) != Lv) {
      throw ValidationError("config field 'ld.L_values': entries must be positive integers");
    }
    const int L = static_cast<int>(Lv);
    const auto p = large_deviation_empirical(dist, L, threshold, R, derive_seed(seed_of(cfg), i), threads);
    std::optional<double> hoeffding;
    if (threshold < mu) hoeffding = large_deviation_hoeffding(mu, L, threshold);
    const bool within = !hoeffding || p.estimate <= *hoeffding + p.ci_half;
    csv << L << ',' << fmt(threshold) << ',' << fmt(mu) << ',' << fmt(p.estimate) << ',' << fmt(p.lower) << ','
        << fmt(p.upper) << ',' << fmt(p.ci_half) << ',' << fmt_opt(hoeffding) << ',' << within << '\n';
    rows.push_back({{"L", L}, {"empirical", p}, {"hoeffding", hoeffding ? json(*hoeffding) : json(nullptr)},
                    {"within", within}});
  }
  Outcome o;
  o.artifacts.push_back({"csv", csv.str()});
  o.summary = {{"threshold", threshold}, {"mu_tilde", mu}, {"rows", rows}};
  return o;
}

// Smallest k such that none of stem[.k].<ext> exist.
std::string free_stem(const fs::path& dir, const std::string& base, const std::vector<std::string>& extensions) {
  for (int k = 0;; ++k) {
    const std::string stem = k == 0 ? base : base + "." + std::to_string(k);
    bool taken = false;
    for (const auto& ext : extensions) taken = taken || fs::exists(dir / (stem + "." + ext));
    if (!taken) return stem;
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  f << content;
}

}  // namespace

// ---------------------------------------------------------------- config → domain

void validate_keys(const Config& cfg) {
  for (const auto& [key, value] : cfg.values()) {
    if (!known_keys().count(key)) throw ValidationError("config field '" + key + "': unknown key");
  }
  const auto version = cfg.integer("schema_version");
  if (version != kConfigSchemaVersion) {
    throw ValidationError("config field 'schema_version': unsupported version " + std::to_string(version) +
                          " (expected " + std::to_string(kConfigSchemaVersion) + ")");
  }
}

CouplingDistribution distribution_from_config(const Config& cfg) {
  const auto& kind = cfg.string("distribution.kind");
  auto wrap = [&](auto&& make) {
    try {
      return make();
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("config section 'distribution': ") + e.what());
    }
  };
  if (kind == "bernoulli") return wrap([&] { return CouplingDistribution::bernoulli(cfg.number("distribution.p")); });
  if (kind == "uniform") {
    return wrap([&] { return CouplingDistribution::uniform(cfg.number("distribution.a"), cfg.number("distribution.b")); });
  }
  if (kind == "discrete") {
    return wrap([&] {
      return CouplingDistribution::discrete(cfg.numbers("distribution.values"), cfg.numbers("distribution.weights"));
    });
  }
  if (kind == "point") return wrap([&] { return CouplingDistribution::point_mass(cfg.number("distribution.value")); });
  throw ValidationError("config field 'distribution.kind': unknown kind '" + kind +
                        "' (expected bernoulli, uniform, discrete or point)");
}

SingleSiteModel model_from_config(const Config& cfg, const CouplingDistribution* dist) {
  const auto& kind = cfg.string("model.kind");
  auto check_support = [&](const SingleSiteModel& model) {
    if (dist) {
      const auto& range = model.coupling_range();
      if (dist->lower() < range.lower || dist->upper() > range.upper) {
        throw ValidationError("config section 'distribution': support [" + fmt(dist->lower()) + ", " +
                              fmt(dist->upper()) + "] outside the coupling range of model '" + model.name() + "'");
      }
    }
    return model;
  };
  if (kind == "characteristic_breather") return check_support(SingleSiteModel::characteristic_breather());
  if (kind == "alloy") {
    CouplingRange range{cfg.number_or("model.lambda_min", 0.0), cfg.number_or("model.lambda_max", 1.0)};
    return check_support(SingleSiteModel::alloy(profile_from_config(cfg), range));
  }
  if (kind == "smooth_breather") {
    return check_support(SingleSiteModel::smooth_breather(profile_from_config(cfg), cfg.number("model.lambda_min"),
                                                          cfg.number_or("model.lambda_max", 1.0)));
  }
  if (kind == "tabulated") return check_support(tabulated_from_csv(cfg.string("model.table_csv")));
  throw ValidationError("config field 'model.kind': unknown model '" + kind +
                        "' (expected characteristic_breather, alloy, smooth_breather or tabulated)");
}

std::vector<double> grid_from_config(const Config& cfg) {
  std::vector<double> grid;
  if (cfg.has("grid.energies")) {
    grid = cfg.numbers("grid.energies");
  } else {
    const double emax = cfg.number("grid.emax");
    const double ratio = cfg.number("grid.ratio");
    const int points = positive_int(cfg, "grid.points");
    if (!(emax > 0.0)) throw ValidationError("config field 'grid.emax': must be positive");
    if (!(ratio > 0.0 && ratio < 1.0)) throw ValidationError("config field 'grid.ratio': must lie in (0, 1)");
    grid = geometric_grid(emax, ratio, points);
  }
  if (grid.empty()) throw ValidationError("config field 'grid.energies': empty grid");
  std::sort(grid.begin(), grid.end());
  return grid;
}

// ---------------------------------------------------------------- entry point

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random Schroedinger operators with monotone potentials: IDS estimation and Lifshitz-tail bounds",
               "lifshitz"};
  app.require_subcommand(1);

  struct Common {
    std::string config;
    std::optional<std::int64_t> seed;
    std::string out_dir = ".";
    std::optional<std::int64_t> samples;
    unsigned threads = 0;
    std::vector<std::string> overrides;
  } common;

  using Handler = Outcome (*)(const Config&, unsigned);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"ids", "Monte Carlo IDS estimate on an energy grid", &run_ids},
      {"fit", "Lifshitz exponent fit of a prior ids CSV", &run_fit},
      {"bounds", "Thirring and Temple lower bounds over random realizations", &run_bounds},
      {"certify", "Analytic upper bound on N(E) over an energy grid", &run_certify},
      {"check-hyp", "Grid check of the monotonicity hypothesis for a single-site model", &run_check_hyp},
      {"ld", "Large deviations: empirical probability vs Hoeffding bound", &run_ld},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help, handler] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", common.config, "Config file (TOML-style) or metadata JSON of a prior run")->required();
    sub->add_option("--seed", common.seed, "Master seed (overrides config 'seed')");
    sub->add_option("--out-dir", common.out_dir, "Output directory");
    sub->add_option("--samples", common.samples, "Sample count (overrides 'run.samples')");
    sub->add_option("--threads", common.threads, "Worker threads, 0 = all cores");
    sub->add_option("--override", common.overrides, "key=value, repeatable");
    subs[name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  std::string chosen;
  Handler handler = nullptr;
  for (const auto& [name, help, h] : commands) {
    if (subs[name]->parsed()) {
      chosen = name;
      handler = h;
    }
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    Config cfg = Config::load(common.config);
    if (common.seed) cfg.set("seed", *common.seed);
    if (common.samples) cfg.set("run.samples", *common.samples);
    for (const auto& o : common.overrides) cfg.apply_override(o);
    validate_keys(cfg);
    if (!cfg.has("seed")) throw ValidationError("config field 'seed': required but missing (or pass --seed)");
    if (cfg.integer("seed") < 0) throw ValidationError("config field 'seed': must be nonnegative");

    Outcome outcome = handler(cfg, common.threads);
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const fs::path dir(common.out_dir);
    fs::create_directories(dir);
    std::vector<std::string> extensions{"meta.json"};
    for (const auto& a : outcome.artifacts) extensions.push_back(a.extension);
    const std::string stem = free_stem(dir, chosen + "-" + cfg.hash(), extensions);

    json outputs = json::array();
    for (const auto& a : outcome.artifacts) {
      const auto path = dir / (stem + "." + a.extension);
      write_file(path, a.content);
      outputs.push_back(path.filename().string());
      out << path.string() << '\n';
    }
    json meta = {{"schema_version", kConfigSchemaVersion},
                 {"tool", "lifshitz"},
                 {"version", LIFSHITZ_VERSION},
                 {"compiler", __VERSION__},
                 {"subcommand", chosen},
                 {"seed", cfg.integer("seed")},
                 {"config_hash", cfg.hash()},
                 {"config", cfg.to_json()},
                 {"outputs", outputs},
                 {"summary", outcome.summary},
                 {"threads", resolve_threads(common.threads)},
                 {"runtime_seconds", runtime}};
    const auto meta_path = dir / (stem + ".meta.json");
    write_file(meta_path, meta.dump(2) + "\n");
    out << meta_path.string() << '\n';
    return kExitOk;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace lifshitz::cli
