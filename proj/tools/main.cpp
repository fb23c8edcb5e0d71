// Command-line frontend: every computation and sweep in the library, with
// CSV/JSON output. Values are emitted with full round-trip precision so the
// output equals the direct library-call results bitwise.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "psched/channel.hpp"
#include "psched/detection.hpp"
#include "psched/info_metrics.hpp"
#include "psched/monte_carlo.hpp"
#include "psched/scheduler.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CommonOpts {
  double lambda0 = 10.0;
  double lambda1 = 20.0;
  double prior = 0.25;
  double T = 1.0;
  double eps = psched::kDefaultTailEps;
  double cell_budget = 1e9;
  int threads = 0;
  std::string format;  // "", "csv" or "json"
  std::string output;  // "" means stdout
  std::string config_path;
};

struct Applier {
  CLI::App* cmd = nullptr;
  std::string key;
  CLI::Option* opt = nullptr;
  std::function<void(const json&)> set;
};

std::vector<Applier>& appliers() {
  static std::vector<Applier> list;
  return list;
}

double json_to_double(const json& j) {
  if (j.is_string()) return std::stod(j.get<std::string>());
  return j.get<double>();
}

std::int64_t json_to_int(const json& j) {
  if (j.is_string()) return std::stoll(j.get<std::string>());
  return j.get<std::int64_t>();
}

bool json_to_bool(const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::invalid_argument("expected a boolean, got '" + s + "'");
  }
  return j.get<bool>();
}

void reg(CLI::App* cmd, CLI::Option* opt, const std::string& key,
         std::function<void(const json&)> set) {
  appliers().push_back({cmd, key, opt, std::move(set)});
}

void reg_double(CLI::App* cmd, CLI::Option* opt, const std::string& key,
                double* target) {
  reg(cmd, opt, key, [target](const json& j) { *target = json_to_double(j); });
}

void reg_int(CLI::App* cmd, CLI::Option* opt, const std::string& key,
             int* target) {
  reg(cmd, opt, key,
      [target](const json& j) { *target = static_cast<int>(json_to_int(j)); });
}

void reg_string(CLI::App* cmd, CLI::Option* opt, const std::string& key,
                std::string* target) {
  reg(cmd, opt, key, [target](const json& j) {
    if (j.is_string()) {
      *target = j.get<std::string>();
    } else if (j.is_array()) {
      std::string joined;
      for (const json& item : j) {
        if (!joined.empty()) joined += ",";
        joined += fmt17(json_to_double(item));
      }
      *target = joined;
    } else {
      *target = j.dump();
    }
  });
}

void add_common(CLI::App* cmd, CommonOpts* c) {
  reg_double(cmd, cmd->add_option("--lambda0", c->lambda0,
                                  "inactive-source rate (counts/unit time)"),
             "lambda0", &c->lambda0);
  reg_double(cmd, cmd->add_option("--lambda1", c->lambda1,
                                  "active-source rate (counts/unit time)"),
             "lambda1", &c->lambda1);
  reg_double(cmd, cmd->add_option("--prior", c->prior,
                                  "probability a source is active"),
             "prior", &c->prior);
  reg_double(cmd, cmd->add_option("--T", c->T, "total sensing time"), "T",
             &c->T);
  reg_double(cmd, cmd->add_option("--eps", c->eps,
                                  "per-table upper-tail mass target"),
             "eps", &c->eps);
  reg_double(cmd, cmd->add_option("--cell-budget", c->cell_budget,
                                  "max 3-D grid cells per exact evaluation"),
             "cell-budget", &c->cell_budget);
  reg_int(cmd,
          cmd->add_option("--threads", c->threads,
                          "worker count (0 = machine parallelism)")
              ->envname("POISSON_SCHED_THREADS"),
          "threads", &c->threads);
  reg_string(cmd,
             cmd->add_option("--format", c->format, "output format")
                 ->check(CLI::IsMember({"csv", "json"})),
             "format", &c->format);
  reg_string(cmd, cmd->add_option("--output", c->output,
                                  "output path (default: stdout)"),
             "output", &c->output);
  cmd->add_option("--config", c->config_path,
                  "JSON file mirroring the flags; flags take precedence");
}

psched::ChannelParams to_params(const CommonOpts& c) {
  psched::ChannelParams params{c.lambda0, c.lambda1, c.prior, c.T};
  psched::validate(params);
  return params;
}

psched::EvalOptions to_eval(const CommonOpts& c) {
  return {c.eps, c.cell_budget, c.threads};
}

psched::TimeAllocation parse_alloc(const std::string& text, double T) {
  if (text.empty())
    throw std::invalid_argument("--alloc is required (flag or config file)");
  std::array<double, 3> parts{};
  std::string item;
  std::stringstream ss(text);
  std::size_t i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 3) throw std::invalid_argument("--alloc needs exactly 3 values");
    std::size_t used = 0;
    parts[i] = std::stod(item, &used);
    if (used != item.size())
      throw std::invalid_argument("bad --alloc component '" + item + "'");
    ++i;
  }
  if (i != 3) throw std::invalid_argument("--alloc needs exactly 3 values");
  psched::TimeAllocation alloc{parts[0], parts[1], parts[2]};
  psched::validate(alloc, T);
  return alloc;
}

void write_out(const CommonOpts& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file)
    throw std::invalid_argument("cannot open output file '" + c.output + "'");
  file << text;
}

std::string format_or(const CommonOpts& c, const char* fallback) {
  return c.format.empty() ? fallback : c.format;
}

void apply_config(const CLI::App& app) {
  // Flags already parsed win; file values fill the remaining options of the
  // active (sub)command. Unknown keys fail before any computation.
  std::string path;
  for (const Applier& a : appliers())
    if (a.cmd->parsed() && a.cmd->count("--config") > 0)
      path = a.cmd->get_option("--config")->as<std::string>();
  (void)app;
  if (path.empty()) return;
  std::ifstream file(path);
  if (!file)
    throw std::invalid_argument("cannot read config file '" + path + "'");
  json cfg = json::parse(file);
  if (!cfg.is_object())
    throw std::invalid_argument("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    bool known = false;
    for (const Applier& a : appliers()) {
      if (!a.cmd->parsed() || a.key != key) continue;
      known = true;
      if (a.opt->count() == 0) a.set(value);
    }
    if (!known)
      throw std::invalid_argument("config key '" + key +
                                  "' does not match any flag of this command");
  }
}

json mi_record(const CommonOpts& c, const psched::TimeAllocation& alloc,
               const psched::MiResult& res) {
  json rec{{"lambda0", c.lambda0},
           {"lambda1", c.lambda1},
           {"prior", c.prior},
           {"T", c.T},
           {"alloc", {alloc.t1, alloc.t2, alloc.t3}},
           {"mi_bits", res.value},
           {"h_y_bits", res.h_y},
           {"h_y_given_x_bits", res.h_y_given_x},
           {"truncation_upper",
            {res.truncation_upper[0], res.truncation_upper[1],
             res.truncation_upper[2]}},
           {"tail_bound", res.tail_bound}};
  if (c.lambda0 == c.lambda1) rec["degenerate_rates"] = true;
  return rec;
}

std::string degenerate_comment(const CommonOpts& c) {
  return c.lambda0 == c.lambda1
             ? "# warning: degenerate rates (lambda0 == lambda1)\n"
             : "";
}

int run_mi(const CommonOpts& c, const std::string& alloc_str) {
  psched::ChannelParams params = to_params(c);
  psched::TimeAllocation alloc = parse_alloc(alloc_str, c.T);
  psched::MiResult res = psched::vector_mutual_info(params, alloc, to_eval(c));
  if (format_or(c, "json") == "json") {
    write_out(c, mi_record(c, alloc, res).dump(2) + "\n");
  } else {
    std::string text = degenerate_comment(c);
    text +=
        "lambda0,lambda1,prior,T,t1,t2,t3,mi_bits,h_y_bits,h_y_given_x_bits,"
        "upper1,upper2,upper3,tail_bound\n";
    text += fmt17(c.lambda0) + "," + fmt17(c.lambda1) + "," + fmt17(c.prior) +
            "," + fmt17(c.T) + "," + fmt17(alloc.t1) + "," + fmt17(alloc.t2) +
            "," + fmt17(alloc.t3) + "," + fmt17(res.value) + "," +
            fmt17(res.h_y) + "," + fmt17(res.h_y_given_x) + "," +
            std::to_string(res.truncation_upper[0]) + "," +
            std::to_string(res.truncation_upper[1]) + "," +
            std::to_string(res.truncation_upper[2]) + "," +
            fmt17(res.tail_bound) + "\n";
    write_out(c, text);
  }
  return kExitOk;
}

int run_pd(const CommonOpts& c, const std::string& alloc_str) {
  psched::ChannelParams params = to_params(c);
  psched::TimeAllocation alloc = parse_alloc(alloc_str, c.T);
  psched::PdResult res =
      psched::prob_correct_detection(params, alloc, to_eval(c));
  if (format_or(c, "csv") == "json") {
    json rec{{"lambda0", c.lambda0},
             {"lambda1", c.lambda1},
             {"prior", c.prior},
             {"T", c.T},
             {"alloc", {alloc.t1, alloc.t2, alloc.t3}},
             {"pd", res.pd},
             {"risk", res.risk},
             {"per_hypothesis",
              {res.per_hypothesis[0], res.per_hypothesis[1],
               res.per_hypothesis[2], res.per_hypothesis[3]}},
             {"tail_bound", res.tail_bound}};
    if (c.lambda0 == c.lambda1) rec["degenerate_rates"] = true;
    write_out(c, rec.dump(2) + "\n");
  } else {
    std::string text = degenerate_comment(c);
    text +=
        "pd,risk,correct_given_00,correct_given_01,correct_given_10,"
        "correct_given_11,tail_bound\n";
    text += fmt17(res.pd) + "," + fmt17(res.risk) + "," +
            fmt17(res.per_hypothesis[0]) + "," + fmt17(res.per_hypothesis[1]) +
            "," + fmt17(res.per_hypothesis[2]) + "," +
            fmt17(res.per_hypothesis[3]) + "," + fmt17(res.tail_bound) + "\n";
    write_out(c, text);
  }
  return kExitOk;
}

int run_derivative(const CommonOpts& c, const std::string& mode_str,
                   double step) {
  psched::ChannelParams params = to_params(c);
  std::vector<psched::DerivativeMode> modes;
  if (mode_str == "individual" || mode_str == "both")
    modes.push_back(psched::DerivativeMode::individual);
  if (mode_str == "joint" || mode_str == "both")
    modes.push_back(psched::DerivativeMode::joint);

  struct Row {
    const char* name;
    double analytic;
    double numerical;
  };
  std::vector<Row> rows;
  for (psched::DerivativeMode mode : modes) {
    rows.push_back(
        {mode == psched::DerivativeMode::individual ? "individual" : "joint",
         psched::mi_derivative_at_zero(params, mode),
         psched::numerical_derivative_at_zero(params, mode, step,
                                              to_eval(c))});
  }

  if (format_or(c, "csv") == "json") {
    json out = json::array();
    for (const Row& r : rows) {
      json rec{{"mode", r.name},
               {"analytic", r.analytic},
               {"numerical", r.numerical},
               {"step", step},
               {"abs_diff", std::fabs(r.numerical - r.analytic)}};
      if (c.lambda0 == c.lambda1) rec["degenerate_rates"] = true;
      out.push_back(rec);
    }
    write_out(c, out.dump(2) + "\n");
  } else {
    std::string text = degenerate_comment(c);
    text += "mode,analytic,numerical,step,abs_diff\n";
    for (const Row& r : rows)
      text += std::string(r.name) + "," + fmt17(r.analytic) + "," +
              fmt17(r.numerical) + "," + fmt17(step) + "," +
              fmt17(std::fabs(r.numerical - r.analytic)) + "\n";
    write_out(c, text);
  }
  return kExitOk;
}

int run_montecarlo(const CommonOpts& c, const std::string& alloc_str,
                   std::int64_t samples, std::uint64_t seed, bool stratified) {
  psched::ChannelParams params = to_params(c);
  psched::TimeAllocation alloc = parse_alloc(alloc_str, c.T);
  if (samples < 1) throw std::invalid_argument("--samples must be at least 1");
  psched::McConfig cfg{samples, seed, stratified};
  psched::McResult res = psched::empirical_correct_rate(params, alloc, cfg);
  if (format_or(c, "csv") == "json") {
    json rec{{"cd", res.cd},
             {"n", res.n},
             {"std_error", res.std_error},
             {"per_hypothesis_counts",
              {res.per_hypothesis_counts[0], res.per_hypothesis_counts[1],
               res.per_hypothesis_counts[2], res.per_hypothesis_counts[3]}},
             {"seed", seed},
             {"stratified", stratified}};
    write_out(c, rec.dump(2) + "\n");
  } else {
    std::string text = "# seed " + std::to_string(seed) + "\n";
    text += "cd,n,std_error,count_00,count_01,count_10,count_11\n";
    text += fmt17(res.cd) + "," + std::to_string(res.n) + "," +
            fmt17(res.std_error);
    for (std::int64_t count : res.per_hypothesis_counts)
      text += "," + std::to_string(count);
    text += "\n";
    write_out(c, text);
  }
  return kExitOk;
}

psched::SweepMetric parse_metric(const std::string& name) {
  if (name == "mi") return psched::SweepMetric::mi;
  if (name == "pd") return psched::SweepMetric::pd;
  return psched::SweepMetric::both;
}

json line_argmax_json(const psched::LineSweep& sweep) {
  json out = json::object();
  if (sweep.argmax_mi)
    out["argmax_mi"] = {{"alpha", *sweep.argmax_mi},
                        {"value", sweep.mi[*sweep.argmax_mi_index]}};
  if (sweep.argmax_pd)
    out["argmax_pd"] = {{"alpha", *sweep.argmax_pd},
                        {"value", sweep.pd[*sweep.argmax_pd_index]}};
  return out;
}

int run_sweep_line(const CommonOpts& c, int points,
                   const std::string& metric_str, bool refine) {
  psched::ChannelParams params = to_params(c);
  psched::SweepMetric metric = parse_metric(metric_str);
  psched::LineSweep sweep =
      psched::sweep_symmetry_line(params, points, metric, to_eval(c));
  std::optional<psched::RefinedPoint> refined;
  if (refine && sweep.argmax_mi)
    refined = psched::refine_line_max_mi(params, sweep, to_eval(c));

  json argmax = line_argmax_json(sweep);
  if (refined)
    argmax["refined_argmax_mi"] = {{"alpha", refined->alpha},
                                   {"value", refined->value}};

  if (format_or(c, "csv") == "json") {
    json rec{{"alphas", sweep.alphas}};
    if (!sweep.mi.empty()) rec["mi"] = sweep.mi;
    if (!sweep.pd.empty()) rec["pd"] = sweep.pd;
    for (const auto& [key, value] : argmax.items()) rec[key] = value;
    write_out(c, rec.dump(2) + "\n");
  } else {
    std::string text = degenerate_comment(c);
    text += "alpha,t1,t2,t3";
    if (!sweep.mi.empty()) text += ",mi_bits";
    if (!sweep.pd.empty()) text += ",pd";
    text += "\n";
    for (std::size_t i = 0; i < sweep.alphas.size(); ++i) {
      double alpha = sweep.alphas[i];
      double half = (c.T - alpha) / 2.0;
      text += fmt17(alpha) + "," + fmt17(half) + "," + fmt17(half) + "," +
              fmt17(alpha);
      if (!sweep.mi.empty()) text += "," + fmt17(sweep.mi[i]);
      if (!sweep.pd.empty()) text += "," + fmt17(sweep.pd[i]);
      text += "\n";
    }
    text += "# argmax " + argmax.dump() + "\n";
    write_out(c, text);
  }
  return kExitOk;
}

int run_sweep_ternary(const CommonOpts& c, int resolution) {
  psched::ChannelParams params = to_params(c);
  psched::TernarySweep sweep =
      psched::sweep_ternary(params, resolution, to_eval(c));
  if (format_or(c, "csv") == "json") {
    json recs = json::array();
    for (const psched::TernaryRecord& r : sweep.records)
      recs.push_back(
          {{"t1", r.t1}, {"t2", r.t2}, {"t3", r.t3}, {"mi_bits", r.mi}});
    write_out(
        c, json{{"resolution", sweep.resolution}, {"records", recs}}.dump(2) +
               "\n");
  } else {
    std::string text = degenerate_comment(c);
    text += "t1,t2,t3,mi_bits\n";
    for (const psched::TernaryRecord& r : sweep.records)
      text += fmt17(r.t1) + "," + fmt17(r.t2) + "," + fmt17(r.t3) + "," +
              fmt17(r.mi) + "\n";
    write_out(c, text);
  }
  return kExitOk;
}

int run_sweep_prior(const CommonOpts& c, const std::string& metric_str) {
  psched::ChannelParams params = to_params(c);
  psched::SweepMetric metric = parse_metric(metric_str);
  psched::PriorSweep sweep = psched::sweep_prior(params, metric, to_eval(c));
  std::string best_col =
      metric == psched::SweepMetric::mi ? "best_mi" : "best_pd";
  if (format_or(c, "csv") == "json") {
    json pts = json::array();
    for (const psched::PriorPoint& pt : sweep.points)
      pts.push_back(
          {{"prior", pt.prior}, {"t3_opt", pt.t3_opt}, {"best", pt.best}});
    write_out(c, json{{"metric", metric_str}, {"points", pts}}.dump(2) + "\n");
  } else {
    std::string text = "prior,t3_opt," + best_col + "\n";
    for (const psched::PriorPoint& pt : sweep.points)
      text += fmt17(pt.prior) + "," + fmt17(pt.t3_opt) + "," +
              fmt17(pt.best) + "\n";
    write_out(c, text);
  }
  return kExitOk;
}

int run_sweep_intensity(const CommonOpts& c, int grid_n, double lambda_max,
                        const std::string& metric_str) {
  psched::SweepMetric metric = parse_metric(metric_str);
  psched::IntensitySweep sweep = psched::sweep_intensity(
      c.prior, grid_n, lambda_max, metric, to_eval(c));
  std::string best_col =
      metric == psched::SweepMetric::mi ? "best_mi" : "best_pd";
  if (format_or(c, "csv") == "json") {
    json recs = json::array();
    for (const psched::IntensityRecord& r : sweep.records)
      recs.push_back({{"lambda0T", r.lambda0T},
                      {"lambda1T", r.lambda1T},
                      {"alpha_opt", r.alpha_opt},
                      {"best", r.best}});
    write_out(c, json{{"metric", metric_str}, {"records", recs}}.dump(2) +
                     "\n");
  } else {
    std::string text = "lambda0T,lambda1T,alpha_opt," + best_col + "\n";
    for (const psched::IntensityRecord& r : sweep.records)
      text += fmt17(r.lambda0T) + "," + fmt17(r.lambda1T) + "," +
              fmt17(r.alpha_opt) + "," + fmt17(r.best) + "\n";
    write_out(c, text);
  }
  return kExitOk;
}

int run_check_concavity(const CommonOpts& c, int points, bool term3) {
  psched::ChannelParams params = to_params(c);
  psched::ConcavityReport report =
      psched::check_concavity_line(params, points, to_eval(c), term3);
  if (format_or(c, "csv") == "json") {
    write_out(c, json{{"n_points", report.n_points},
                      {"max_second_difference", report.max_second_difference},
                      {"pass", report.pass},
                      {"chain_term3_only", term3}}
                         .dump(2) +
                     "\n");
  } else {
    std::string text = "n_points,max_second_difference,pass\n";
    text += std::to_string(report.n_points) + "," +
            fmt17(report.max_second_difference) + "," +
            (report.pass ? "true" : "false") + "\n";
    write_out(c, text);
  }
  return kExitOk;
}

int run_check_symmetry(const CommonOpts& c, int trials, std::uint64_t seed) {
  psched::ChannelParams params = to_params(c);
  psched::SymmetryReport report =
      psched::check_symmetry(params, trials, seed, to_eval(c));
  if (format_or(c, "csv") == "json") {
    write_out(c, json{{"trials", report.trials},
                      {"max_abs_deviation", report.max_abs_deviation},
                      {"pass", report.pass}}
                         .dump(2) +
                     "\n");
  } else {
    std::string text = "trials,max_abs_deviation,pass\n";
    text += std::to_string(report.trials) + "," +
            fmt17(report.max_abs_deviation) + "," +
            (report.pass ? "true" : "false") + "\n";
    write_out(c, text);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensing-time scheduling for a two-source Poisson channel"};
  app.require_subcommand(1);

  CommonOpts mi_c, pd_c, deriv_c, mc_c, line_c, tern_c, prior_c, inten_c,
      conc_c, symm_c;

  CLI::App* mi = app.add_subcommand("mi", "exact mutual information");
  add_common(mi, &mi_c);
  std::string mi_alloc;
  reg_string(mi, mi->add_option("--alloc", mi_alloc, "t1,t2,t3"),
             "alloc", &mi_alloc);

  CLI::App* pd = app.add_subcommand("pd", "exact correct-detection rate");
  add_common(pd, &pd_c);
  std::string pd_alloc;
  reg_string(pd, pd->add_option("--alloc", pd_alloc, "t1,t2,t3"),
             "alloc", &pd_alloc);

  CLI::App* deriv = app.add_subcommand(
      "derivative", "mutual-information growth rate at zero time");
  add_common(deriv, &deriv_c);
  std::string deriv_mode = "both";
  double deriv_step = 1e-6;
  reg_string(deriv,
             deriv->add_option("--mode", deriv_mode, "derivative mode")
                 ->check(CLI::IsMember({"individual", "joint", "both"})),
             "mode", &deriv_mode);
  reg_double(deriv,
             deriv->add_option("--step", deriv_step,
                               "forward-difference step"),
             "step", &deriv_step);

  CLI::App* mc =
      app.add_subcommand("montecarlo", "empirical correct-detection rate");
  add_common(mc, &mc_c);
  std::string mc_alloc;
  std::int64_t mc_samples = 100000;
  std::uint64_t mc_seed = 12345;
  bool mc_stratified = true;
  reg_string(mc, mc->add_option("--alloc", mc_alloc, "t1,t2,t3"),
             "alloc", &mc_alloc);
  reg(mc, mc->add_option("--samples", mc_samples, "sample count"), "samples",
      [&mc_samples](const json& j) { mc_samples = json_to_int(j); });
  reg(mc, mc->add_option("--seed", mc_seed, "base RNG seed"), "seed",
      [&mc_seed](const json& j) {
        mc_seed = static_cast<std::uint64_t>(json_to_int(j));
      });
  reg(mc,
      mc->add_flag("--stratified,!--no-stratified", mc_stratified,
                   "fix per-state counts proportional to priors"),
      "stratified",
      [&mc_stratified](const json& j) { mc_stratified = json_to_bool(j); });

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweeps");
  sweep->require_subcommand(1);

  CLI::App* line =
      sweep->add_subcommand("line", "sweep along the symmetry line");
  add_common(line, &line_c);
  int line_points = 100;
  std::string line_metric = "both";
  bool line_refine = false;
  reg_int(line, line->add_option("--points", line_points, "grid size"),
          "points", &line_points);
  reg_string(line,
             line->add_option("--metric", line_metric, "metric(s) to sweep")
                 ->check(CLI::IsMember({"mi", "pd", "both"})),
             "metric", &line_metric);
  reg(line,
      line->add_flag("--refine", line_refine,
                     "golden-section polish of the grid maximum"),
      "refine", [&line_refine](const json& j) { line_refine = json_to_bool(j); });

  CLI::App* ternary =
      sweep->add_subcommand("ternary", "full simplex lattice sweep");
  add_common(ternary, &tern_c);
  int tern_resolution = 30;
  reg_int(ternary,
          ternary->add_option("--resolution", tern_resolution,
                              "barycentric lattice resolution"),
          "resolution", &tern_resolution);

  CLI::App* prior =
      sweep->add_subcommand("prior", "optimal joint time per prior");
  add_common(prior, &prior_c);
  std::string prior_metric = "mi";
  reg_string(prior,
             prior->add_option("--metric", prior_metric, "metric to optimize")
                 ->check(CLI::IsMember({"mi", "pd"})),
             "metric", &prior_metric);

  CLI::App* intensity = sweep->add_subcommand(
      "intensity", "optimal line point per intensity pair");
  add_common(intensity, &inten_c);
  int inten_grid_n = 10;
  double inten_lambda_max = 5.0;
  std::string inten_metric = "mi";
  reg_int(intensity,
          intensity->add_option("--grid-n", inten_grid_n, "lattice levels"),
          "grid-n", &inten_grid_n);
  reg_double(intensity,
             intensity->add_option("--lambda-max", inten_lambda_max,
                                   "largest expected count"),
             "lambda-max", &inten_lambda_max);
  reg_string(intensity,
             intensity->add_option("--metric", inten_metric,
                                   "metric to optimize")
                 ->check(CLI::IsMember({"mi", "pd"})),
             "metric", &inten_metric);

  CLI::App* check = app.add_subcommand("check", "diagnostics");
  check->require_subcommand(1);

  CLI::App* concavity =
      check->add_subcommand("concavity", "second differences along the line");
  add_common(concavity, &conc_c);
  int conc_points = 100;
  bool conc_term3 = false;
  reg_int(concavity,
          concavity->add_option("--points", conc_points, "grid size"),
          "points", &conc_points);
  reg(concavity,
      concavity->add_flag("--term3", conc_term3,
                          "diagnose the conditional chain term instead"),
      "term3", [&conc_term3](const json& j) { conc_term3 = json_to_bool(j); });

  CLI::App* symmetry = check->add_subcommand(
      "symmetry", "swap-invariance at random allocations");
  add_common(symmetry, &symm_c);
  int symm_trials = 50;
  std::uint64_t symm_seed = 99;
  reg_int(symmetry,
          symmetry->add_option("--trials", symm_trials, "random points"),
          "trials", &symm_trials);
  reg(symmetry, symmetry->add_option("--seed", symm_seed, "RNG seed"), "seed",
      [&symm_seed](const json& j) {
        symm_seed = static_cast<std::uint64_t>(json_to_int(j));
      });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    apply_config(app);
    if (app.got_subcommand(mi)) return run_mi(mi_c, mi_alloc);
    if (app.got_subcommand(pd)) return run_pd(pd_c, pd_alloc);
    if (app.got_subcommand(deriv))
      return run_derivative(deriv_c, deriv_mode, deriv_step);
    if (app.got_subcommand(mc))
      return run_montecarlo(mc_c, mc_alloc, mc_samples, mc_seed,
                            mc_stratified);
    if (sweep->got_subcommand(line))
      return run_sweep_line(line_c, line_points, line_metric, line_refine);
    if (sweep->got_subcommand(ternary))
      return run_sweep_ternary(tern_c, tern_resolution);
    if (sweep->got_subcommand(prior))
      return run_sweep_prior(prior_c, prior_metric);
    if (sweep->got_subcommand(intensity))
      return run_sweep_intensity(inten_c, inten_grid_n, inten_lambda_max,
                                 inten_metric);
    if (check->got_subcommand(concavity))
      return run_check_concavity(conc_c, conc_points, conc_term3);
    if (check->got_subcommand(symmetry))
      return run_check_symmetry(symm_c, symm_trials, symm_seed);
    std::cerr << "no subcommand selected\n";
    return kExitUsage;
  } catch (const psched::BudgetExceeded& e) {
    std::cerr << "resource budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  }
}
