// Copyright 2026 The netseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// netseg command-line front end. Every subcommand parses options, calls the
// library and writes a table or JSON document; no model code lives here.

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "netseg/errors.hpp"
#include "netseg/estimation.hpp"
#include "netseg/experiments.hpp"
#include "netseg/fixed_node.hpp"
#include "netseg/jr_model.hpp"
#include "netseg/table.hpp"
#include "netseg/verify.hpp"

namespace {

using nlohmann::json;
using namespace netseg;

constexpr const char* kOutputDirEnv = "NETSEG_OUTPUT_DIR";

// JSON config reader: top-level keys set global options, nested objects
// address subcommands ({"jr": {"simulate": {"ns": 6}}}).
class ConfigJSON : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("unsupported config value " + v.dump());
  }

  static void collect(const json& obj, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (it->is_object()) {
        auto sub = parents;
        sub.push_back(it.key());
        collect(*it, sub, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_array()) {
        for (const auto& v : *it) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(*it));
      }
      items.push_back(std::move(item));
    }
  }
};

struct Globals {
  std::uint64_t seed = 1;
  std::string output;
  std::string format;
  unsigned threads = 0;
};

std::string output_path(const Globals& g, const std::string& default_name) {
  if (!g.output.empty()) return g.output;
  const char* env = std::getenv(kOutputDirEnv);
  const std::filesystem::path dir = env != nullptr && *env != '\0' ? env : ".";
  std::filesystem::create_directories(dir);
  return (dir / default_name).string();
}

// "-" writes to stdout.
void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << text;
  std::cerr << "wrote " << path << '\n';
}

std::string format_of(const Globals& g, const std::string& fallback) {
  const std::string f = g.format.empty() ? fallback : g.format;
  if (f != "csv" && f != "json") throw Error(ErrorCode::kInvalidArgument, "format must be csv or json");
  return f;
}

void write_table(const Globals& g, const Table& table, const std::string& stem) {
  const std::string fmt = format_of(g, "csv");
  std::ostringstream text;
  if (fmt == "csv") {
    write_csv(table, text);
  } else {
    text << table_to_json(table).dump(2) << '\n';
  }
  emit(output_path(g, stem + "." + fmt), text.str());
}

void write_json(const Globals& g, const json& doc, const std::string& stem) {
  emit(output_path(g, stem + ".json"), doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

struct JrOptions {
  std::uint32_t k = 2;
  std::vector<double> type_dist;
  double ns = 6.0;
  double nd = 2.0;
  double nf = 4.0;
  double alpha = 0.75;

  void attach(CLI::App* app) {
    app->add_option("--K", k, "number of types")->capture_default_str();
    app->add_option("--type-dist", type_dist, "type probabilities (default uniform)")->delimiter(',');
    app->add_option("--ns", ns, "phase-1 similar links N_S")->capture_default_str();
    app->add_option("--nd", nd, "phase-1 dissimilar links N_D")->capture_default_str();
    app->add_option("--nf", nf, "phase-2 links N_F")->capture_default_str();
    app->add_option("--alpha", alpha, "similar share of phase-2 links")->capture_default_str();
  }

  JrParams params() const {
    JrParams p;
    p.num_types = k;
    p.type_dist = type_dist;
    p.n_s = ns;
    p.n_d = nd;
    p.n_f = nf;
    p.alpha = alpha;
    p.validate(false);
    return p;
  }
};

json plan_to_json(const InterventionPlan& plan) {
  return {{"T", plan.T}, {"I", plan.I}, {"delta_ns", plan.delta_ns}, {"rate_limit", plan.rate_limit}};
}

InterventionPlan plan_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open plan " + path);
  try {
    const json j = json::parse(in);
    InterventionPlan plan;
    plan.T = j.at("T").get<std::uint64_t>();
    plan.I = j.at("I").get<std::uint64_t>();
    plan.delta_ns = j.at("delta_ns").get<std::vector<double>>();
    plan.rate_limit = j.value("rate_limit", 0.0);
    return plan;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad plan file: ") + e.what());
  }
}

std::pair<int, int> parse_years(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("missing ':'");
    std::size_t used = 0;
    const int a = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("trailing characters");
    const std::string rest = text.substr(colon + 1);
    const int b = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("trailing characters");
    return {a, b};
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "--years expects FROM:TO, got '" + text + "'");
  }
}

json theta_json(const Theta& t) {
  return {{"n_s", t.n_s}, {"n_d", t.n_d}, {"n_fs", t.n_fs}, {"n_fd", t.n_fd}};
}

json estimate_json(const Dataset& data, const EstimateReport& report) {
  json clusters = json::array();
  for (const auto& c : report.clusters) {
    json jc = {{"cluster", c.cluster},
               {"fields", c.fields},
               {"nodes", c.nodes},
               {"usable_nodes", c.usable_nodes},
               {"citations", c.citations},
               {"sampled_nodes", c.sampled_nodes},
               {"observed_integration", c.observed_integration}};
    if (c.fit) {
      jc["theta"] = theta_json(c.fit->theta);
      jc["log_likelihood"] = c.fit->log_likelihood;
      jc["converged"] = c.fit->converged;
      jc["at_bound"] = c.fit->at_bound;
      jc["start_spread"] = c.fit->start_spread;
    }
    if (c.prediction) {
      jc["alpha"] = c.prediction->alpha;
      jc["alpha_valid"] = c.prediction->alpha_valid;
      jc["f_inf"] = c.prediction->f_inf;
      jc["f_inf_no_tc"] = c.prediction->f_inf_no_tc;
      jc["tc_contribution"] = c.prediction->tc_contribution;
      jc["warnings"] = c.prediction->warnings;
    }
    if (!c.skipped.empty()) jc["skipped"] = c.skipped;
    clusters.push_back(std::move(jc));
  }
  return {{"schema_version", kSchemaVersion},
          {"papers", data.size()},
          {"malformed_lines", data.malformed_lines},
          {"duplicate_ids", data.duplicate_ids},
          {"out_of_window", data.out_of_window},
          {"without_major_field", data.without_major_field},
          {"dropped_references", data.dropped_references},
          {"fields", data.fields},
          {"clustering",
           {{"k", report.clustering.k},
            {"components", report.clustering.components},
            {"eigenvalues", report.clustering.eigenvalues},
            {"cluster_of_field", report.clustering.cluster}}},
          {"clusters", clusters}};
}

Table estimate_table(const EstimateReport& report) {
  Table t;
  t.columns = {"cluster", "fields", "nodes", "usable_nodes", "n_s", "n_d", "n_fs", "n_fd", "alpha",
               "f_inf", "f_inf_no_tc", "tc_contribution", "observed_integration"};
  for (const auto& c : report.clusters) {
    std::string names;
    for (const auto& f : c.fields) names += (names.empty() ? "" : ";") + f;
    if (!c.fit || !c.prediction) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      t.add_row({static_cast<std::int64_t>(c.cluster), names, static_cast<std::int64_t>(c.nodes),
                 static_cast<std::int64_t>(c.usable_nodes), nan, nan, nan, nan, nan, nan, nan, nan,
                 c.observed_integration});
      continue;
    }
    const auto& th = c.fit->theta;
    const auto& p = *c.prediction;
    t.add_row({static_cast<std::int64_t>(c.cluster), names, static_cast<std::int64_t>(c.nodes),
               static_cast<std::int64_t>(c.usable_nodes), th.n_s, th.n_d, th.n_fs, th.n_fd, p.alpha, p.f_inf,
               p.f_inf_no_tc, p.tc_contribution, c.observed_integration});
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netseg: integration and segregation in network formation models"};
  app.fallthrough();
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<ConfigJSON>());
  app.set_config("--config", "", "JSON file with option values; command-line flags take precedence");

  Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("-o,--output", g.output,
                 std::string("output file ('-' for stdout); default directory from ") + kOutputDirEnv);
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)")->capture_default_str();

  // sbm ----------------------------------------------------------------------
  auto* sbm = app.add_subcommand("sbm", "wedge closure vs gamma-homophilous edges on sampled SBM graphs");
  SbmSweepConfig sbm_cfg;
  sbm_cfg.ratios = {0.25, 0.5, 1.0, 2.0, 4.0};
  std::optional<double> sbm_p;
  sbm->add_option("--groups", sbm_cfg.groups, "group sizes")->delimiter(',')->capture_default_str();
  sbm->add_option("--q", sbm_cfg.q, "between-group link probability")->capture_default_str();
  sbm->add_option("--p", sbm_p, "within-group link probability (single point instead of --ratios)");
  sbm->add_option("--ratios", sbm_cfg.ratios, "p/q grid")->delimiter(',')->capture_default_str();
  sbm->add_option("--gammas", sbm_cfg.gammas, "baseline homophily levels")->delimiter(',')->capture_default_str();
  sbm->add_option("--replicates", sbm_cfg.replicates, "sampled graphs per grid point")->capture_default_str();

  // jr -----------------------------------------------------------------------
  auto* jr = app.add_subcommand("jr", "growing network model with triadic closure");
  jr->require_subcommand(1);
  JrOptions jr_opts;

  auto* jr_sim = jr->add_subcommand("simulate", "simulated integration trajectory with theory");
  jr_opts.attach(jr_sim);
  std::uint64_t jr_tmax = 10000;
  std::size_t jr_reps = 20;
  std::string jr_seed_kind = "complete";
  jr_sim->add_option("--t-max", jr_tmax, "arrivals")->capture_default_str();
  jr_sim->add_option("--replicates", jr_reps, "independent runs")->capture_default_str();
  jr_sim->add_option("--seed-graph", jr_seed_kind, "complete or segregated")
      ->check(CLI::IsMember({"complete", "segregated"}))
      ->capture_default_str();

  auto* jr_pred = jr->add_subcommand("predict", "closed-form integration and effect predicates");
  jr_opts.attach(jr_pred);
  std::uint64_t pred_tmax = 10000;
  jr_pred->add_option("--t-max", pred_tmax, "last time of the theory curve")->capture_default_str();

  auto* jr_int = jr->add_subcommand("intervene", "temporary changes of N_S: planning, effects, simulation");
  jr_opts.attach(jr_int);
  std::uint64_t int_T = 2000;
  std::uint64_t int_I = 50;
  double int_rate = 1e-4;
  std::string int_plan_in;
  std::string int_plan_out;
  std::string int_planner = "first-order";
  bool int_simulate = false;
  std::size_t int_reps = 50;
  std::uint64_t int_tmax = 10000;
  jr_int->add_option("--T", int_T, "arrivals before the window")->capture_default_str();
  jr_int->add_option("--I", int_I, "window length")->capture_default_str();
  jr_int->add_option("--rate-limit", int_rate, "max per-step change of f")->capture_default_str();
  jr_int->add_option("--plan", int_plan_in, "plan JSON {T, I, delta_ns, rate_limit} instead of planning");
  jr_int->add_option("--plan-out", int_plan_out, "write the plan JSON here");
  jr_int->add_option("--planner", int_planner, "first-order or horizon")
      ->check(CLI::IsMember({"first-order", "horizon"}))
      ->capture_default_str();
  jr_int->add_flag("--simulate", int_simulate, "paired simulation of the plan");
  jr_int->add_option("--replicates", int_reps, "paired runs")->capture_default_str();
  jr_int->add_option("--t-max", int_tmax, "arrivals per run")->capture_default_str();

  // fixed-node ---------------------------------------------------------------
  auto* fnode = app.add_subcommand("fixed-node", "rewiring model on a fixed node set");
  fnode->require_subcommand(1);
  FixedNodeGridConfig fn_cfg;
  double fn_n1 = 0.5;
  auto* fn_sim = fnode->add_subcommand("simulate", "simulation vs mean-field equilibrium over an (s, c) grid");
  auto* fn_solve = fnode->add_subcommand("solve", "all mean-field fixed points with stability");
  for (auto* sub : {fn_sim, fn_solve}) {
    sub->add_option("--s", fn_cfg.s_values, "acceptance for random candidates")->delimiter(',')->capture_default_str();
    sub->add_option("--c", fn_cfg.c_values, "triadic-closure probability")->delimiter(',')->capture_default_str();
    sub->add_option("--s-prime", fn_cfg.s_prime, "acceptance for triadic candidates")->capture_default_str();
  }
  fn_sim->add_option("--nodes", fn_cfg.nodes, "nodes (two equal groups)")->capture_default_str();
  fn_sim->add_option("--mean-degree", fn_cfg.mean_degree, "mean degree")->capture_default_str();
  fn_sim->add_option("--time-units", fn_cfg.time_units, "iterations per edge")->capture_default_str();
  fn_sim->add_option("--replicates", fn_cfg.replicates, "runs per grid point")->capture_default_str();
  fn_solve->add_option("--n1", fn_n1, "fraction of nodes in group 1")->capture_default_str();

  // estimate -----------------------------------------------------------------
  auto* est = app.add_subcommand("estimate", "fit growth parameters per field cluster of a citation dump");
  std::string est_input;
  std::string est_years = "2015:2020";
  EstimateOptions est_opts;
  std::optional<std::uint32_t> est_k;
  est->add_option("--input", est_input, "JSON-lines citation records")->required();
  est->add_option("--years", est_years, "inclusive year window FROM:TO")->capture_default_str();
  est->add_option("--min-field-share", est_opts.ingest.min_field_share, "drop rarer fields")->capture_default_str();
  est->add_option("--cluster-k", est_k, "number of field clusters (default: eigengap)");
  est->add_option("--starts", est_opts.fit.starts, "optimizer starts")->capture_default_str();

  // verify -------------------------------------------------------------------
  auto* ver = app.add_subcommand("verify", "rerun a verification experiment; exit 0 iff all checks pass");
  std::string suite;
  VerifyOptions ver_opts;
  ver->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  ver->add_option("--effort", ver_opts.effort, "replicate multiplier")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sbm->parsed()) {
      sbm_cfg.seed = g.seed;
      sbm_cfg.threads = g.threads;
      if (sbm_p) {
        if (!(sbm_cfg.q > 0.0)) throw Error(ErrorCode::kInvalidArgument, "--p needs a positive --q");
        sbm_cfg.ratios = {*sbm_p / sbm_cfg.q};
      }
      write_table(g, sbm_sweep_table(sbm_relative_sweep(sbm_cfg)), "sbm");
    } else if (jr_sim->parsed()) {
      JrTrajectoryConfig c;
      c.params = jr_opts.params();
      c.t_max = jr_tmax;
      c.replicates = jr_reps;
      c.seed_kind = jr_seed_kind == "segregated" ? SeedKind::kSegregated : SeedKind::kComplete;
      c.seed = g.seed;
      c.threads = g.threads;
      write_table(g, jr_trajectory_table(jr_trajectory(c)), "jr-simulate");
    } else if (jr_pred->parsed()) {
      const auto p = jr_opts.params();
      const auto d = derive(p);
      const auto fx = effect_predicates(p);
      Table curve;
      curve.columns = {"t", "f_theory", "f_theory_large_t"};
      for (auto t : log_times(pred_tmax)) {
        curve.add_row({static_cast<std::int64_t>(t), integration_at_exact(p, t), integration_at(p, t)});
      }
      if (format_of(g, "json") == "csv") {
        write_table(g, curve, "jr-predict");
      } else {
        json doc = {{"schema_version", kSchemaVersion},
                    {"n", d.n}, {"m_r", d.m_r}, {"m_s", d.m_s}, {"d_r", d.d_r}, {"d_s", d.d_s},
                    {"absolute_effect", to_string(fx.absolute)},
                    {"relative_effect", to_string(fx.relative)},
                    {"curve", table_to_json(curve)}};
        try {
          doc["f_inf"] = equilibrium_integration(p);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kAlphaOutOfRange) throw;
          doc["f_inf"] = nullptr;
          doc["warning"] = e.what();
        }
        write_json(g, doc, "jr-predict");
      }
    } else if (jr_int->parsed()) {
      const auto p = jr_opts.params();
      InterventionPlan plan;
      json doc = {{"schema_version", kSchemaVersion}};
      std::vector<double> steps;
      if (!int_plan_in.empty()) {
        plan = plan_from_file(int_plan_in);
      } else {
        const auto model = int_planner == "horizon" ? PlannerModel::kHorizon : PlannerModel::kFirstOrder;
        const auto opt = optimal_interventions(p, int_T, int_I, int_rate, model);
        plan = opt.plan;
        steps = opt.step_change;
        doc["predicted_gain"] = opt.gain;
        doc["clamped"] = opt.clamped;
        doc["closed_form_regime"] = opt.closed_form_regime;
        doc["planner_warnings"] = opt.warnings;
      }
      plan.validate(p);
      if (!int_plan_out.empty()) emit(int_plan_out, plan_to_json(plan).dump(2) + "\n");
      const auto imm = intervention_immediate_effect(p, plan);
      const auto lt = intervention_longterm_effect(p, plan, static_cast<double>(int_tmax));
      doc["plan"] = plan_to_json(plan);
      doc["immediate_effect"] = imm.total;
      doc["longterm_effect"] = {{"t", int_tmax}, {"value", lt.total}};
      std::vector<std::string> warnings = imm.warnings;
      warnings.insert(warnings.end(), lt.warnings.begin(), lt.warnings.end());
      doc["warnings"] = warnings;

      std::optional<Table> sim_table;
      if (int_simulate) {
        InterventionConfig c;
        c.params = p;
        c.plan = plan;
        c.t_max = int_tmax;
        c.replicates = int_reps;
        c.seed = g.seed;
        c.threads = g.threads;
        sim_table = intervention_table(intervention_experiment(c));
        doc["simulation"] = table_to_json(*sim_table);
      }
      if (format_of(g, "json") == "csv") {
        if (sim_table) {
          write_table(g, *sim_table, "jr-intervene");
        } else {
          Table t;
          t.columns = {"j", "delta_ns", "immediate_effect", "predicted_step_change"};
          for (std::size_t j = 0; j < plan.delta_ns.size(); ++j) {
            t.add_row({static_cast<std::int64_t>(j + 1), plan.delta_ns[j], imm.per_step[j],
                       j < steps.size() ? steps[j] : std::numeric_limits<double>::quiet_NaN()});
          }
          write_table(g, t, "jr-intervene");
        }
      } else {
        write_json(g, doc, "jr-intervene");
      }
    } else if (fn_sim->parsed()) {
      fn_cfg.seed = g.seed;
      fn_cfg.threads = g.threads;
      write_table(g, fixed_node_table(fixed_node_grid(fn_cfg)), "fixed-node-simulate");
    } else if (fn_solve->parsed()) {
      Table t;
      t.columns = {"s", "c", "t11", "t22", "p11", "p22", "integration", "stable", "eig1", "eig2"};
      for (double s : fn_cfg.s_values) {
        for (double c : fn_cfg.c_values) {
          FixedNodeParams fp;
          fp.s = s;
          fp.c = c;
          fp.s_prime = fn_cfg.s_prime;
          fp.n_theta = {fn_n1, 1.0 - fn_n1};
          for (const auto& x : find_fixed_points(fp)) {
            t.add_row({s, c, x.t11, x.t22, x.p11, x.p22, x.integration, static_cast<std::int64_t>(x.stable),
                       x.eigen_real[0], x.eigen_real[1]});
          }
        }
      }
      write_table(g, t, "fixed-node-solve");
    } else if (est->parsed()) {
      const auto [y0, y1] = parse_years(est_years);
      est_opts.ingest.year_min = y0;
      est_opts.ingest.year_max = y1;
      est_opts.cluster_k = est_k;
      est_opts.seed = g.seed;
      est_opts.fit.seed = g.seed;
      const auto data = ingest(est_input, est_opts.ingest);
      const auto report = estimate(data, est_opts);
      if (format_of(g, "json") == "csv") {
        write_table(g, estimate_table(report), "estimate");
      } else {
        write_json(g, estimate_json(data, report), "estimate");
      }
    } else if (ver->parsed()) {
      ver_opts.seed = g.seed;
      ver_opts.threads = g.threads;
      const auto report = run_suite(suite, ver_opts);
      write_table(g, report.table, "verify-" + suite);
      for (const auto& c : report.checks) {
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
      }
      std::cout << suite << ": " << (report.passed() ? "PASS" : "FAIL") << '\n';
      return report.passed() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "netseg: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "netseg: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
