// Copyright 2026 The c2p2sl Authors
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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "c2p2sl/baselines.hpp"
#include "c2p2sl/errors.hpp"
#include "c2p2sl/link_model.hpp"
#include "c2p2sl/optimizer.hpp"
#include "c2p2sl/scenario.hpp"
#include "c2p2sl/scenario_io.hpp"
#include "c2p2sl/schedule_sim.hpp"
#include "c2p2sl/timing.hpp"

namespace c2p2sl::cli {
namespace {

using nlohmann::json;

// Raised for bad flags or files; maps to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string g9(double v) { return fmt("%.9g", v); }

struct SourceFlags {
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  int ues = 8;
  std::optional<double> bandwidth;

  void attach(CLI::App& cmd) {
    auto* path = cmd.add_option("--scenario", scenario_path, "scenario file (JSON)");
    auto* sd = cmd.add_option("--seed", seed, "generate a random scenario from this seed");
    path->excludes(sd);
    cmd.add_option("--ues", ues, "UE count for generated scenarios")->check(CLI::Range(1, 10000));
    cmd.add_option("--bandwidth", bandwidth, "override the channel bandwidth (Hz)")
        ->check(CLI::PositiveNumber);
  }
  bool given() const { return !scenario_path.empty() || seed.has_value(); }
  Scenario load() const {
    Scenario s;
    if (!scenario_path.empty()) {
      s = load_scenario(scenario_path);
    } else if (seed) {
      s = random_scenario(ues, *seed);
    } else {
      throw InputError("one of --scenario or --seed is required");
    }
    if (bandwidth) s.channel.bandwidth = *bandwidth;
    validate(s);
    return s;
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << content)) throw InputError("cannot write '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json decision_to_json(const Decision& d) {
  return {{"cut_layer", d.cut_layer},
          {"micro_batches", d.micro_batches},
          {"batch_split", d.batch_split},
          {"slot_alloc", d.slot_alloc}};
}

Decision decision_from_json(const json& j) {
  try {
    Decision d;
    d.cut_layer = j.at("cut_layer").get<int>();
    d.micro_batches = j.at("micro_batches").get<int>();
    d.batch_split = j.at("batch_split").get<std::vector<int>>();
    d.slot_alloc = j.at("slot_alloc").get<std::vector<double>>();
    return d;
  } catch (const json::exception& e) {
    throw InputError(std::string("decision: ") + e.what());
  }
}

json constraints_to_json(const ConstraintReport& r) {
  json out = json::array();
  for (const auto& c : r.checks) {
    out.push_back({{"name", c.name}, {"passed", c.passed}, {"slack", c.slack}, {"detail", c.detail}});
  }
  return out;
}

json timing_to_json(const TimingBreakdown& t) {
  return {{"idle", t.idle},         {"work", t.work},         {"latency", t.latency()},
          {"bubble_rate", t.bubble_rate}, {"bs_fwd", t.bs_fwd}, {"bs_bwd", t.bs_bwd},
          {"max_fwd_up", t.max_fwd_up}, {"max_down_bwd", t.max_down_bwd},
          {"ue_fwd", t.ue_fwd},     {"ue_up", t.ue_up},       {"ue_down", t.ue_down},
          {"ue_bwd", t.ue_bwd}};
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
  return out;
}

std::string constraint_line(const ConstraintReport& r) {
  std::string out;
  for (const auto& c : r.checks) out += (out.empty() ? "" : "  ") + c.name + (c.passed ? " ok" : " FAIL");
  return out;
}

std::string pad_right(std::string text, std::size_t width) {
  if (text.size() < width) text.resize(width, ' ');
  return text;
}

std::string pad_left(const std::string& text, std::size_t width) {
  return text.size() < width ? std::string(width - text.size(), ' ') + text : text;
}

void row(std::ostream& out, const std::string& key, const std::string& value) {
  out << pad_right(key, 16) << value << '\n';
}

KRule parse_k_rule(const std::string& name) {
  if (name == "c4-exact") return KRule::kC4Exact;
  if (name == "literal") return KRule::kLiteral;
  throw InputError("unknown k rule '" + name + "'");
}

// ---------------------------------------------------------------- optimize

struct OptimizeFlags {
  SourceFlags source;
  double epsilon = 1e-3;
  int max_iterations = 50;
  std::string k_rule = "c4-exact";
  bool strict_only = false;
  std::string out_path = "result.json";
};

int cmd_optimize(const OptimizeFlags& f, std::ostream& out) {
  const Scenario s = f.source.load();
  AOOptions opt;
  opt.tolerances.ao_epsilon = f.epsilon;
  opt.max_iterations = f.max_iterations;
  opt.k_rule = parse_k_rule(f.k_rule);
  opt.allow_relaxed_pacing = !f.strict_only;
  const AOState st = run_ao(s, opt);

  const auto rates = link_rates(s);
  const Decision& d = st.decision;
  const TimingBreakdown t = evaluate(s, rates, d);
  const ConstraintReport report = check_constraints(s, rates, d);
  const ScheduleSummary sim = summarize_schedule(s, rates, d);
  const BaselineReport psl = latency_psl(s, rates, d.cut_layer, d.batch_split, d.slot_alloc);

  json history = json::array();
  for (const auto& h : st.history) history.push_back({{"iteration", h.iteration}, {"bubble_rate", h.bubble_rate}});
  const json record = {
      {"format", "c2p2sl-result/1"},
      {"scenario", scenario_to_json(s)},
      {"options",
       {{"epsilon", f.epsilon},
        {"max_iterations", f.max_iterations},
        {"k_rule", f.k_rule},
        {"allow_relaxed_pacing", opt.allow_relaxed_pacing}}},
      {"mode", to_string(st.mode)},
      {"decision", decision_to_json(d)},
      {"initial_decision", decision_to_json(st.initial_decision)},
      {"bubble_rate", st.bubble_rate},
      {"initial_bubble_rate", st.initial_bubble_rate},
      {"iterations", st.iteration},
      {"converged", st.converged},
      {"timing", timing_to_json(t)},
      {"makespan", sim.makespan},
      {"bs_idle", sim.bs_idle},
      {"psl_latency", psl.per_batch_latency},
      {"constraints", constraints_to_json(report)},
      {"history", history}};
  write_file(f.out_path, record.dump(2) + "\n");

  std::string slots;
  for (double tau : d.slot_alloc) slots += (slots.empty() ? "" : " ") + fmt("%.4g", tau * 1e3);
  row(out, "mode", to_string(st.mode));
  row(out, "cut layer", std::to_string(d.cut_layer));
  row(out, "micro-batches", std::to_string(d.micro_batches));
  row(out, "batch split", join_ints(d.batch_split));
  row(out, "slots (ms)", slots);
  row(out, "bubble rate", fmt("%.6f", st.bubble_rate) + " (start " + fmt("%.6f", st.initial_bubble_rate) + ")");
  row(out, "iterations", std::to_string(st.iteration) + (st.converged ? " (converged)" : " (limit)"));
  row(out, "idle + work", fmt("%.6g s", t.latency()));
  row(out, "makespan", fmt("%.6g s", sim.makespan));
  row(out, "PSL latency", fmt("%.6g s", psl.per_batch_latency));
  row(out, "constraints", constraint_line(report));
  row(out, "result", f.out_path);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateFlags {
  SourceFlags source;
  std::string decision_path;
  std::string trace_path;
  std::string gantt_path;
  bool force = false;
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out, std::ostream& err) {
  json doc;
  try {
    doc = json::parse(read_file(f.decision_path));
  } catch (const json::parse_error& e) {
    throw InputError(f.decision_path + ": " + e.what());
  }
  const bool is_record = doc.is_object() && doc.contains("decision");
  Scenario s;
  if (f.source.given()) {
    s = f.source.load();
  } else if (is_record && doc.contains("scenario")) {
    s = scenario_from_json(doc.at("scenario"));
  } else {
    throw InputError("decision file has no scenario; pass --scenario or --seed");
  }
  const Decision d = decision_from_json(is_record ? doc.at("decision") : doc);
  const bool relaxed_record = is_record && doc.value("mode", "") == "relaxed";

  const auto rates = link_rates(s);
  validate_decision(s, d);
  const ConstraintReport report = check_constraints(s, rates, d);
  std::vector<std::string> hard, pacing;
  for (const auto& c : report.checks) {
    if (c.passed) continue;
    (c.name == "C3" || c.name == "C4" ? pacing : hard).push_back(c.name + ": " + c.detail);
  }
  if (!hard.empty() || (!pacing.empty() && !relaxed_record)) {
    std::vector<std::string> all = hard;
    all.insert(all.end(), pacing.begin(), pacing.end());
    if (!f.force) {
      err << "error: decision is infeasible (use --force to simulate anyway)\n";
      for (const auto& m : all) err << "  " << m << '\n';
      return kExitInfeasible;
    }
    err << "warning: simulating an infeasible decision; the analytic latency does not apply\n";
    for (const auto& m : all) err << "  " << m << '\n';
  } else if (!pacing.empty()) {
    err << "note: pacing conditions were relaxed by the optimizer; the analytic latency does not apply\n";
  }

  const ScheduleTrace trace = simulate(s, rates, d);
  const TimingBreakdown t = evaluate(s, rates, d);
  if (!f.trace_path.empty()) export_trace(trace, f.trace_path);
  if (!f.gantt_path.empty()) export_gantt(trace, f.gantt_path);
  row(out, "makespan", fmt("%.9g s", trace.makespan));
  row(out, "BS idle", fmt("%.9g s", trace.bs_idle));
  row(out, "idle + work", fmt("%.9g s", t.latency()));
  row(out, "blocks", std::to_string(trace.blocks.size()));
  if (!f.trace_path.empty()) row(out, "trace", f.trace_path);
  if (!f.gantt_path.empty()) row(out, "gantt", f.gantt_path);
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepFlags {
  std::string sweep;
  std::string seeds = "0-19";
  std::string schemes = "sl,psl,epsl,c2p2sl";
  int ues = 8;
  std::optional<double> bandwidth;
  std::optional<double> epsl_factor;
  double epsilon = 1e-3;
  int jobs = 0;
  std::string out_path = "sweep.csv";
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v)) throw InputError("bad " + what + " '" + text + "'");
  return v;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(text, ',')) {
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoull(item));
      } else {
        const auto lo = std::stoull(item.substr(0, dash)), hi = std::stoull(item.substr(dash + 1));
        if (hi < lo || hi - lo > 1000000) throw InputError("bad seed range '" + item + "'");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw InputError("bad seed '" + item + "'");
    }
  }
  if (out.empty()) throw InputError("--seeds is empty");
  return out;
}

struct SweepPlan {
  std::string variable;  // "ue_count" or "bandwidth"
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::vector<Scheme> schemes;
};

SweepPlan parse_sweep(const SweepFlags& f) {
  SweepPlan plan;
  const auto eq = f.sweep.find('=');
  if (eq == std::string::npos) throw InputError("--sweep expects VARIABLE=V1,V2,...");
  plan.variable = f.sweep.substr(0, eq);
  if (plan.variable != "ue_count" && plan.variable != "bandwidth") {
    throw InputError("unknown sweep variable '" + plan.variable + "' (ue_count or bandwidth)");
  }
  for (const auto& item : split(f.sweep.substr(eq + 1), ',')) {
    const double v = parse_number(item, plan.variable);
    if (v <= 0.0) throw InputError("sweep values must be positive");
    if (plan.variable == "ue_count" && v != std::floor(v)) throw InputError("ue_count values must be integers");
    plan.values.push_back(v);
  }
  if (plan.values.empty()) throw InputError("--sweep has no values");
  plan.seeds = parse_seeds(f.seeds);
  for (const auto& name : split(f.schemes, ',')) {
    try {
      plan.schemes.push_back(parse_scheme(name));
    } catch (const std::invalid_argument&) {
      throw InputError("unknown scheme '" + name + "'");
    }
  }
  if (plan.schemes.empty()) throw InputError("--schemes is empty");
  std::sort(plan.schemes.begin(), plan.schemes.end());
  plan.schemes.erase(std::unique(plan.schemes.begin(), plan.schemes.end()), plan.schemes.end());
  return plan;
}

struct SweepRow {
  Scheme scheme = Scheme::kSL;
  bool ok = false;
  double latency = 0.0;
  double bubble = 0.0;
};

struct SweepCell {
  std::size_t value_index = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";
  std::string mode;
  int cut = 0;
  int k = 0;
  std::vector<SweepRow> rows;
  double c2p2sl = 0.0;
  double psl = 0.0;
};

SweepCell run_cell(const SweepPlan& plan, const SweepFlags& f, std::size_t vi, std::uint64_t seed) {
  SweepCell cell;
  cell.value_index = vi;
  cell.seed = seed;
  const double value = plan.values[vi];
  const int n = plan.variable == "ue_count" ? static_cast<int>(value) : f.ues;
  Scenario s = random_scenario(n, seed);
  if (plan.variable == "bandwidth") {
    s.channel.bandwidth = value;
  } else if (f.bandwidth) {
    s.channel.bandwidth = *f.bandwidth;
  }
  AOOptions opt;
  opt.tolerances.ao_epsilon = f.epsilon;
  try {
    const AOState st = run_ao(s, opt);
    const auto rates = link_rates(s);
    const Decision& d = st.decision;
    cell.mode = to_string(st.mode);
    cell.cut = d.cut_layer;
    cell.k = d.micro_batches;
    const double factor = f.epsl_factor.value_or(1.0 / n);
    const BaselineReport psl = latency_psl(s, rates, d.cut_layer, d.batch_split, d.slot_alloc);
    const BaselineReport pipe = latency_c2p2sl(s, rates, d);
    cell.psl = psl.per_batch_latency;
    cell.c2p2sl = pipe.per_batch_latency;
    for (Scheme scheme : plan.schemes) {
      BaselineReport r;
      switch (scheme) {
        case Scheme::kSL: r = latency_sl(s, rates, d.cut_layer, d.batch_split); break;
        case Scheme::kPSL: r = psl; break;
        case Scheme::kEPSL: r = latency_epsl(s, rates, d.cut_layer, d.batch_split, d.slot_alloc, factor); break;
        case Scheme::kC2P2SL: r = pipe; break;
      }
      cell.rows.push_back({scheme, true, r.per_batch_latency, bs_bubble_rate(r)});
    }
  } catch (const InfeasibleError&) {
    cell.status = "infeasible";
    for (Scheme scheme : plan.schemes) cell.rows.push_back({scheme, false, 0.0, 0.0});
  }
  return cell;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

int cmd_sweep(const SweepFlags& f, std::ostream& out) {
  const SweepPlan plan = parse_sweep(f);
  if (f.epsl_factor && (*f.epsl_factor <= 0.0 || *f.epsl_factor > 1.0)) {
    throw InputError("--epsl-factor must lie in (0, 1]");
  }
  std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
  for (std::size_t vi = 0; vi < plan.values.size(); ++vi) {
    for (auto seed : plan.seeds) jobs.push_back({vi, seed});
  }
  std::vector<SweepCell> cells(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        cells[j] = run_cell(plan, f, jobs[j].first, jobs[j].second);
      } catch (const std::exception& e) {
        errors[j] = e.what();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t threads = std::min<std::size_t>(f.jobs > 0 ? f.jobs : hw, jobs.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw InputError(e);
  }
  std::sort(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) {
    return std::pair(a.value_index, a.seed) < std::pair(b.value_index, b.seed);
  });

  std::ostringstream csv;
  csv << kSweepHeader << '\n';
  std::vector<double> reductions;
  std::map<std::pair<std::size_t, Scheme>, std::vector<double>> by_value;
  for (const auto& c : cells) {
    const std::string value = g9(plan.values[c.value_index]);
    for (const auto& r : c.rows) {
      csv << plan.variable << ',' << value << ',' << c.seed << ',' << to_string(r.scheme) << ',' << c.status << ','
          << c.mode << ',' << c.cut << ',' << c.k << ',' << (r.ok ? g9(r.latency) : "nan") << ','
          << (r.ok ? g9(r.bubble) : "nan") << '\n';
      if (r.ok) by_value[{c.value_index, r.scheme}].push_back(r.latency);
    }
    if (c.status == "ok") reductions.push_back(1.0 - c.c2p2sl / c.psl);
  }
  write_file(f.out_path, csv.str());

  out << pad_right(plan.variable, 14);
  for (Scheme sc : plan.schemes) out << pad_left(to_string(sc), 14);
  out << "   (median per-batch latency, s)\n";
  for (std::size_t vi = 0; vi < plan.values.size(); ++vi) {
    out << pad_right(g9(plan.values[vi]), 14);
    for (Scheme sc : plan.schemes) out << fmt("%14.6g", median(by_value[{vi, sc}]));
    out << '\n';
  }
  const std::size_t infeasible = cells.size() - reductions.size();
  out << "median c2p2sl vs psl latency reduction: " << fmt("%.2f%%", 100.0 * median(reductions)) << " over "
      << reductions.size() << " cells";
  if (infeasible) out << " (" << infeasible << " infeasible)";
  out << '\n' << "wrote " << f.out_path << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- generate

int cmd_generate(const SourceFlags& source, const std::string& out_path, std::ostream& out) {
  if (!source.seed) throw InputError("generate requires --seed");
  const std::string text = serialize_scenario(source.load());
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
    out << "wrote " << out_path << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pipelined split-learning scheduler: optimize, simulate and sweep", "c2p2sl"};
  app.require_subcommand(1);

  OptimizeFlags opt;
  auto* optimize = app.add_subcommand("optimize", "run alternating optimization and write a result record");
  opt.source.attach(*optimize);
  optimize->add_option("--epsilon", opt.epsilon, "AO stopping tolerance on the bubble rate")
      ->check(CLI::PositiveNumber);
  optimize->add_option("--max-iterations", opt.max_iterations, "AO iteration cap")->check(CLI::Range(1, 100000));
  optimize->add_option("--k-rule", opt.k_rule, "micro-batch rule: c4-exact or literal");
  optimize->add_flag("--strict-only", opt.strict_only, "fail instead of relaxing pipeline pacing");
  optimize->add_option("--out", opt.out_path, "result record path");

  SimulateFlags sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "replay a decision and export its schedule");
  sim.source.attach(*simulate_cmd);
  simulate_cmd->add_option("--decision", sim.decision_path, "result record or bare decision (JSON)")->required();
  simulate_cmd->add_option("--trace,--out", sim.trace_path, "trace table path (CSV)");
  simulate_cmd->add_option("--gantt", sim.gantt_path, "Gantt chart path (SVG)");
  simulate_cmd->add_flag("--force", sim.force, "simulate even if constraints are violated");

  SweepFlags sw;
  auto* sweep = app.add_subcommand("sweep", "latency of every scheme over UE counts or bandwidths");
  sweep->add_option("--sweep", sw.sweep, "ue_count=4,6,8,10 or bandwidth=100e6,200e6,...")->required();
  sweep->add_option("--seeds", sw.seeds, "seed list and ranges, e.g. 0-19 or 1,5,9");
  sweep->add_option("--schemes", sw.schemes, "subset of sl,psl,epsl,c2p2sl");
  sweep->add_option("--ues", sw.ues, "UE count for bandwidth sweeps")->check(CLI::Range(1, 10000));
  sweep->add_option("--bandwidth", sw.bandwidth, "bandwidth (Hz) for UE-count sweeps")->check(CLI::PositiveNumber);
  sweep->add_option("--epsl-factor", sw.epsl_factor, "EPSL aggregation factor in (0, 1]; default 1/n");
  sweep->add_option("--epsilon", sw.epsilon, "AO stopping tolerance")->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", sw.jobs, "worker threads (default: hardware threads)")->check(CLI::NonNegativeNumber);
  sweep->add_option("--out", sw.out_path, "CSV output path");

  SourceFlags gen;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "write a random scenario file");
  gen.attach(*generate);
  generate->add_option("--out", gen_out, "scenario path (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (optimize->parsed()) return cmd_optimize(opt, out);
    if (simulate_cmd->parsed()) return cmd_simulate(sim, out, err);
    if (sweep->parsed()) return cmd_sweep(sw, out);
    if (generate->parsed()) return cmd_generate(gen, gen_out, out);
  } catch (const InfeasibleError& e) {
    err << "error: infeasible: " << e.what() << '\n';
    for (const auto& line : e.diagnostics()) err << "  " << line << '\n';
    return kExitInfeasible;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace c2p2sl::cli
