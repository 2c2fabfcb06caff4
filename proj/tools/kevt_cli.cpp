// Command-line front end for the kevt library.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kevt/blocks.hpp"
#include "kevt/config.hpp"
#include "kevt/dynamics.hpp"
#include "kevt/ei.hpp"
#include "kevt/error.hpp"
#include "kevt/experiment.hpp"
#include "kevt/serialize.hpp"
#include "kevt/station.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kFitFailure = 3 };

struct FitFailure : kevt::Error {
  using kevt::Error::Error;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
};

kevt::KeyValues load_config(const Globals& g) {
  kevt::KeyValues kv;
  if (!g.config_path.empty()) kv = kevt::KeyValues::load(g.config_path);
  if (g.seed) kv.set("seed", std::to_string(*g.seed));
  return kv;
}

void warn_unused(const kevt::KeyValues& kv) {
  for (const auto& k : kv.unused()) std::cerr << "warning: unused config key '" << k << "'\n";
}

fs::path out_file(const Globals& g, const std::string& stem, bool json_ext) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / (stem + (json_ext ? ".json" : ".csv"));
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw kevt::DataError("cannot write " + p.string());
  std::cerr << "wrote " << p.string() << '\n';
  return os;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kevt::DataError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw kevt::DataError(path + ": " + e.what());
  }
}

// Accepts a fit object {mu, sigma, xi}, a prediction row {mu2, sigma2, xi2},
// or an array of prediction rows (selected by k).
kevt::GevParams params_from_json(const json& j, std::optional<int> k) {
  const json* row = &j;
  if (j.is_array()) {
    row = nullptr;
    for (const auto& r : j)
      if (!k || r.value("k", -1) == *k) row = &r;
    if (!row) throw kevt::DataError("no prediction row for the requested k");
  }
  try {
    if (row->contains("mu2"))
      return {row->at("mu2").get<double>(), row->at("sigma2").get<double>(), row->at("xi2").get<double>()};
    return {row->at("mu").get<double>(), row->at("sigma").get<double>(), row->at("xi").get<double>()};
  } catch (const json::exception& e) {
    throw kevt::DataError(std::string("bad parameter JSON: ") + e.what());
  }
}

kevt::Functional functional_of(const std::string& kind, int k) {
  if (kind == "exceedance") return kevt::Functional::exceedance(k);
  if (kind == "average") return kevt::Functional::average(k);
  throw kevt::InvalidInput("unknown functional '" + kind + "'");
}

std::vector<double> parse_levels(const std::string& text) {
  if (text.empty()) return kevt::default_levels();
  kevt::KeyValues kv;
  kv.set("levels", text);
  return kv.get_doubles("levels", {});
}

void write_fit(const Globals& g, const kevt::FitResult& f, const std::string& stem) {
  const bool as_json = g.format == "json";
  auto os = open_out(out_file(g, stem, as_json));
  if (as_json) {
    os << to_json(f).dump(2) << '\n';
  } else {
    os.precision(12);
    os << "mu,sigma,xi,nll,converged,n\n"
       << f.params.mu << ',' << f.params.sigma << ',' << f.params.xi << ',' << f.neg_log_likelihood
       << ',' << (f.converged ? "true" : "false") << ',' << f.n_samples << '\n';
  }
}

void write_table(const Globals& g, const kevt::ReturnLevelTable& t, const std::string& stem) {
  const bool as_json = g.format == "json";
  auto os = open_out(out_file(g, stem, as_json));
  if (!as_json) {
    kevt::write_return_levels_csv(os, t);
    return;
  }
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"level", r.level}, {"return_period", r.return_period}, {"z_mle", r.z_mle},
                    {"mle_lo", r.mle_lo}, {"mle_hi", r.mle_hi}, {"z_pred", r.z_pred},
                    {"z_emp", r.z_emp}, {"emp_lo", r.emp_lo}, {"emp_hi", r.emp_hi}});
  os << rows.dump(2) << '\n';
}

// --- subcommands -----------------------------------------------------------

struct SimulateOpts {
  bool observe = false;
};

void run_simulate(const Globals& g, const SimulateOpts& o) {
  const auto kv = load_config(g);
  const auto cfg = kevt::experiment_config_from(kv);
  warn_unused(kv);
  const auto trajs = kevt::simulate(cfg.map, cfg.sim);
  {
    auto os = open_out(out_file(g, "trajectories", false));
    kevt::write_trajectories_csv(os, trajs);
  }
  if (o.observe) {
    std::vector<double> all;
    for (const auto& t : trajs) {
      const auto v = kevt::observe(cfg.observable, t);
      all.insert(all.end(), v.begin(), v.end());
    }
    auto os = open_out(out_file(g, "observable", false));
    kevt::write_values_csv(os, all);
  }
}

struct BlockmaxOpts {
  std::string input;
  std::size_t block = 1000;
  int k = 1;
  std::string functional = "exceedance";
  std::size_t segment = 0;
};

void run_blockmax(const Globals& g, const BlockmaxOpts& o) {
  const auto values = kevt::read_values_csv(o.input);
  const auto f = functional_of(o.functional, o.k);
  // Observable CSVs from `simulate --observe` concatenate trajectories; a
  // segment length keeps windows and blocks inside each one.
  const std::size_t seg = o.segment == 0 ? values.size() : o.segment;
  if (seg == 0 || values.size() % seg != 0)
    throw kevt::InvalidInput("segment length must divide the series length");
  std::vector<std::vector<double>> windows;
  for (std::size_t s = 0; s < values.size(); s += seg) {
    const std::span<const double> part(values.data() + s, seg);
    windows.push_back(kevt::functional_series(part, f));
  }
  const auto bm = kevt::block_maxima(windows, o.block, o.input);
  auto os = open_out(out_file(g, "blockmax", false));
  kevt::write_values_csv(os, bm.maxima);
}

void run_fit(const Globals& g, const std::string& input) {
  const auto maxima = kevt::read_values_csv(input);
  const auto f = kevt::fit_gev_mle(maxima);
  write_fit(g, f, "fit");
  if (f.irregular_shape()) std::cerr << "warning: xi <= -0.5, likelihood regularity does not hold\n";
  if (!f.converged) throw FitFailure("GEV fit did not converge");
}

struct EiOpts {
  std::string input;
  std::optional<double> threshold;
  double quantile = 0.99;
  std::string method = "fs";
  int q = 1;
};

void run_ei(const Globals& g, const EiOpts& o) {
  const auto values = kevt::read_values_csv(o.input);
  const double u = o.threshold ? *o.threshold : kevt::empirical_quantile(values, o.quantile);
  kevt::EIEstimate e;
  if (o.method == "fs") e = kevt::ferro_segers(values, u);
  else if (o.method == "ratio") e = kevt::cluster_ratio(values, u, o.q);
  else throw kevt::InvalidInput("unknown method '" + o.method + "' (fs|ratio)");
  const bool as_json = g.format == "json";
  auto os = open_out(out_file(g, "ei", as_json));
  if (as_json) {
    os << to_json(e).dump(2) << '\n';
  } else {
    os.precision(12);
    os << "theta,method,n_exceedances,threshold,q\n"
       << e.theta << ',' << kevt::to_string(e.method) << ',' << e.n_exceedances << ',' << e.threshold
       << ',' << e.q << '\n';
  }
}

struct PredictOpts {
  std::string fit;
  int k_min = 1;
  int k_max = 10;
  std::optional<double> g;
  double theta1 = 1.0;
  double theta2 = 1.0;
};

void run_predict(const Globals& g, const PredictOpts& o) {
  const auto base = params_from_json(read_json(o.fit), std::nullopt);
  json rows = json::array();
  std::vector<std::pair<int, kevt::ScalingPrediction>> preds;
  if (o.g) {
    // Direct use of the parameter map with user-supplied factors.
    const kevt::ScalingInput in{base, o.theta1, o.theta2, *o.g,
                                base.xi > 0.0 ? kevt::Tail::Frechet : kevt::Tail::Weibull};
    preds.emplace_back(0, base.xi > 0.0 ? kevt::predict_frechet(in) : kevt::predict_weibull(in));
  } else {
    const auto kv = load_config(g);
    const auto cfg = kevt::experiment_config_from(kv);
    warn_unused(kv);
    if (o.k_min < 1 || o.k_max < o.k_min) throw kevt::InvalidInput("k range must satisfy 1 <= k_min <= k_max");
    for (int k = o.k_min; k <= o.k_max; ++k) {
      const auto f = cfg.functional == kevt::Functional::Kind::Exceedance ? kevt::Functional::exceedance(k)
                                                                          : kevt::Functional::average(k);
      preds.emplace_back(k, kevt::predict_for_functional(cfg.map, cfg.observable, f, base));
    }
  }
  const bool as_json = g.format == "json";
  auto os = open_out(out_file(g, "predictions", as_json));
  if (as_json) {
    for (const auto& [k, p] : preds) rows.push_back(to_json(k, p));
    os << rows.dump(2) << '\n';
  } else {
    os.precision(12);
    os << "k,rule,mu2,sigma2,xi2,theta2,g\n";
    for (const auto& [k, p] : preds)
      os << k << ',' << kevt::to_string(p.rule) << ',' << p.derived.mu << ',' << p.derived.sigma << ','
         << p.derived.xi << ',' << p.theta2 << ',' << p.g_used << '\n';
  }
}

void run_experiment_cmd(const Globals& g) {
  const auto kv = load_config(g);
  const auto cfg = kevt::experiment_config_from(kv);
  warn_unused(kv);
  const auto result = kevt::run_experiment(cfg);
  {
    auto os = open_out(out_file(g, "params_by_k", false));
    kevt::write_params_by_k(os, result);
  }
  if (g.format == "json") {
    json rows = json::array();
    for (const auto& r : result.rows) {
      json row{{"k", r.k}};
      if (r.fit) row["fit"] = to_json(*r.fit);
      if (r.ei) row["ei"] = to_json(*r.ei);
      if (r.prediction) row["prediction"] = to_json(r.k, *r.prediction);
      if (!r.error.empty()) row["error"] = r.error;
      rows.push_back(row);
    }
    auto os = open_out(out_file(g, "experiment", true));
    os << rows.dump(2) << '\n';
  }
  for (const auto& r : result.rows)
    if (!r.error.empty()) std::cerr << "k=" << r.k << ": " << r.error << '\n';
  if (result.all_fits_failed()) throw FitFailure("GEV fits failed for every k");
}

struct IngestOpts {
  std::string input;
  kevt::CsvSchema schema;
};

void run_ingest(const Globals& g, const IngestOpts& o) {
  const auto r = kevt::ingest_csv(o.input, o.schema);
  for (const auto& rej : r.rejects) std::cerr << "rejected line " << rej.line << ": " << rej.reason << '\n';
  const auto pooled = kevt::pooled_yearly_maxima(r.stations);
  {
    auto os = open_out(out_file(g, "yearly_maxima", false));
    kevt::write_values_csv(os, pooled.maxima);
  }
  const bool as_json = g.format == "json";
  auto os = open_out(out_file(g, "stations", as_json));
  if (as_json) {
    json rows = json::array();
    for (const auto& s : r.stations)
      rows.push_back({{"station", s.station_id}, {"rows", s.values.size()},
                      {"missing_filled", s.missing_filled}, {"flagged", s.flagged}});
    os << json{{"stations", rows}, {"rejects", r.rejects.size()}, {"maxima", pooled.maxima.size()}}.dump(2)
       << '\n';
  } else {
    os << "station,rows,missing_filled,flagged\n";
    for (const auto& s : r.stations)
      os << s.station_id << ',' << s.values.size() << ',' << s.missing_filled << ','
         << (s.flagged ? "true" : "false") << '\n';
  }
}

struct ReturnLevelOpts {
  std::string fit;
  std::optional<int> k;
  std::string levels;
};

void run_return_levels(const Globals& g, const ReturnLevelOpts& o) {
  const auto p = params_from_json(read_json(o.fit), o.k);
  const bool as_json = g.format == "json";
  auto os = open_out(out_file(g, "return_levels", as_json));
  json rows = json::array();
  if (!as_json) os << "level,return_period,z\n";
  os.precision(12);
  for (double q : parse_levels(o.levels)) {
    if (!(q > 0.0 && q < 1.0)) throw kevt::InvalidInput("levels must lie in (0, 1)");
    const double z = kevt::model_quantile(p, q);
    if (as_json) rows.push_back({{"level", q}, {"return_period", 1.0 / (1.0 - q)}, {"z", z}});
    else os << q << ',' << 1.0 / (1.0 - q) << ',' << z << '\n';
  }
  if (as_json) os << rows.dump(2) << '\n';
}

struct CompareOpts {
  std::string mle;
  std::string predicted;
  std::string empirical;
  std::optional<int> k;
  std::string levels;
  int resamples = 500;
  double confidence = 0.95;
};

void run_compare(const Globals& g, const CompareOpts& o) {
  const json mj = read_json(o.mle);
  kevt::FitResult mle = kevt::fit_from_json(mj);
  const auto pred = params_from_json(read_json(o.predicted), o.k);
  const auto maxima = kevt::read_values_csv(o.empirical);
  kevt::BlockMaxSeries emp;
  emp.maxima = maxima;
  emp.n_blocks = maxima.size();
  emp.source_label = o.empirical;
  kevt::BootstrapOptions bo;
  bo.empirical_resamples = o.resamples;
  bo.parametric_resamples = o.resamples;
  bo.confidence = o.confidence;
  bo.seed = g.seed.value_or(0);
  const auto levels = parse_levels(o.levels);
  write_table(g, kevt::compare_return_levels(mle, pred, emp, levels, bo), "compare");
}

int exit_code_for(const kevt::Error& e) {
  if (dynamic_cast<const FitFailure*>(&e)) return kFitFailure;
  if (dynamic_cast<const kevt::InvalidInput*>(&e) || dynamic_cast<const kevt::Unsupported*>(&e))
    return kUsage;
  return kData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extreme value statistics of windowed functionals over chaotic maps"};
  app.require_subcommand(1);

  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config file)");
  app.add_option("--config", g.config_path, "Key-value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate trajectories");
  c_sim->add_flag("--observe", sim.observe, "Also write the observable series");

  BlockmaxOpts bm;
  auto* c_bm = app.add_subcommand("blockmax", "Windowed functional and block maxima of a value CSV");
  c_bm->add_option("--input", bm.input, "Value CSV")->required()->check(CLI::ExistingFile);
  c_bm->add_option("--block", bm.block, "Block length")->capture_default_str()->check(CLI::PositiveNumber);
  c_bm->add_option("--k", bm.k, "Window length")->capture_default_str()->check(CLI::PositiveNumber);
  c_bm->add_option("--functional", bm.functional, "exceedance or average")
      ->check(CLI::IsMember({"exceedance", "average"}))
      ->capture_default_str();
  c_bm->add_option("--segment", bm.segment, "Length of each concatenated trajectory (0: one series)");

  std::string fit_input;
  auto* c_fit = app.add_subcommand("fit", "Maximum likelihood GEV fit of block maxima");
  c_fit->add_option("--input", fit_input, "Block maxima CSV")->required()->check(CLI::ExistingFile);

  EiOpts ei;
  auto* c_ei = app.add_subcommand("ei", "Estimate the extremal index");
  c_ei->add_option("--input", ei.input, "Value CSV")->required()->check(CLI::ExistingFile);
  auto* thr = c_ei->add_option("--threshold", ei.threshold, "Threshold u");
  c_ei->add_option("--quantile", ei.quantile, "Threshold as an empirical quantile")
      ->capture_default_str()
      ->excludes(thr);
  c_ei->add_option("--method", ei.method, "fs (intervals) or ratio (cluster starts)")
      ->check(CLI::IsMember({"fs", "ratio"}))
      ->capture_default_str();
  c_ei->add_option("--q", ei.q, "Run length for the ratio estimator")->capture_default_str();

  PredictOpts pr;
  auto* c_pr = app.add_subcommand("predict", "Predict GEV parameters for window length k");
  c_pr->add_option("--fit", pr.fit, "Base fit JSON")->required()->check(CLI::ExistingFile);
  c_pr->add_option("--k-min", pr.k_min)->capture_default_str();
  c_pr->add_option("--k-max", pr.k_max)->capture_default_str();
  auto* g_opt = c_pr->add_option("--g", pr.g, "Explicit scaling factor (skips the map model)");
  c_pr->add_option("--theta1", pr.theta1)->needs(g_opt);
  c_pr->add_option("--theta2", pr.theta2)->needs(g_opt);

  auto* c_ex = app.add_subcommand("experiment", "Simulate, fit and predict over a k range");

  IngestOpts in;
  auto* c_in = app.add_subcommand("ingest", "Read station CSV and extract yearly maxima");
  c_in->add_option("--input", in.input, "Station CSV")->required()->check(CLI::ExistingFile);
  c_in->add_option("--station-col", in.schema.station_col)->capture_default_str();
  c_in->add_option("--date-col", in.schema.date_col)->capture_default_str();
  c_in->add_option("--value-col", in.schema.value_col)->capture_default_str();

  ReturnLevelOpts rl;
  auto* c_rl = app.add_subcommand("return-levels", "Model return levels over a quantile grid");
  c_rl->add_option("--fit", rl.fit, "Fit or prediction JSON")->required()->check(CLI::ExistingFile);
  c_rl->add_option("--k", rl.k, "Row of a prediction array to use");
  c_rl->add_option("--levels", rl.levels, "Comma-separated non-exceedance levels");

  CompareOpts cmp;
  auto* c_cmp = app.add_subcommand("compare", "Compare fitted and predicted return levels with empirical ones");
  c_cmp->add_option("--mle", cmp.mle, "Fit JSON")->required()->check(CLI::ExistingFile);
  c_cmp->add_option("--predicted", cmp.predicted, "Prediction JSON")->required()->check(CLI::ExistingFile);
  c_cmp->add_option("--empirical", cmp.empirical, "Empirical block maxima CSV")
      ->required()
      ->check(CLI::ExistingFile);
  c_cmp->add_option("--k", cmp.k, "Row of a prediction array to use");
  c_cmp->add_option("--levels", cmp.levels, "Comma-separated non-exceedance levels");
  c_cmp->add_option("--resamples", cmp.resamples)->capture_default_str();
  c_cmp->add_option("--confidence", cmp.confidence)->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    if (*c_sim) run_simulate(g, sim);
    else if (*c_bm) run_blockmax(g, bm);
    else if (*c_fit) run_fit(g, fit_input);
    else if (*c_ei) run_ei(g, ei);
    else if (*c_pr) run_predict(g, pr);
    else if (*c_ex) run_experiment_cmd(g);
    else if (*c_in) run_ingest(g, in);
    else if (*c_rl) run_return_levels(g, rl);
    else if (*c_cmp) run_compare(g, cmp);
    return kOk;
  } catch (const kevt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
}
