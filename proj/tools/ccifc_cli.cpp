// Command-line front end: figure reproduction, custom scenario runs, the
// closed-form-vs-LP membership oracle, and finite-alphabet capacity checks.
//
// Exit codes (fixed; scripts depend on them):
//   0  success
//   2  invalid configuration (flags, files, scenario/channel contents)
//   3  the computed rate region is empty (no positive rate pair)
//   4  a figure's asserted dominance ordering failed
//   5  oracle disagreement (membership cross-check or identity check)
//   6  capacity evaluation refused: the channel fails a required condition
//
// Every emitted data file is accompanied by a manifest.json recording the
// exact inputs; repeated runs of the same command produce byte-identical
// outputs except for the wall_clock_seconds line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ccifc/baselines.hpp"
#include "ccifc/dmc.hpp"
#include "ccifc/rate_terms.hpp"
#include "ccifc/region.hpp"
#include "ccifc/scenario.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitEmptyRegion = 3;
constexpr int kExitDominance = 4;
constexpr int kExitOracle = 5;
constexpr int kExitRefused = 6;

constexpr double kFigureTol = 1e-6;  // tolerance for figure dominance claims

using ccifc::Frontier;
using ccifc::GaussianScenario;
using ccifc::MaskSet;
using ccifc::RatePoint;
using ccifc::Strategy;
using ccifc::SweepOptions;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw CliError{code, message};
}

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// --------------------------------------------------------------------------
// File helpers.
// --------------------------------------------------------------------------

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) fail(kExitConfig, "cannot write " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(kExitConfig, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(kExitConfig, "cannot create directory " + dir.string());
}

// Parses a frontier CSV written by this tool back into a chain of points.
Frontier load_frontier_csv(const std::filesystem::path& path) {
  Frontier f;
  std::istringstream in(read_text(path));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string c1, c2;
    if (!std::getline(row, c1, ',') || !std::getline(row, c2, ',')) continue;
    f.points.push_back({std::stod(c1), std::stod(c2)});
  }
  return f;
}

const char* kPlotStub = R"(#!/usr/bin/env python3
"""Plot the frontier CSV files in this directory (R1 on x, R2 on y)."""
import csv
import glob
import os
import sys

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib not installed; the CSV files are the artifact of record")

here = os.path.dirname(os.path.abspath(__file__))
for path in sorted(glob.glob(os.path.join(here, "*.csv"))):
    xs, ys = [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            xs.append(float(row["R1"]))
            ys.append(float(row["R2"]))
    plt.plot(xs, ys, marker="o", markersize=3,
             label=os.path.splitext(os.path.basename(path))[0])
plt.xlabel("R1 [bit/channel use]")
plt.ylabel("R2 [bit/channel use]")
plt.legend(fontsize=7)
plt.grid(True, alpha=0.4)
out = os.path.join(here, "plot.png")
plt.savefig(out, dpi=160, bbox_inches="tight")
print("wrote", out)
)";

// --------------------------------------------------------------------------
// Option parsing helpers.
// --------------------------------------------------------------------------

// Accepts both the canonical short mask keys (g1..g3, bp1, ...) and the
// spelled-out gamma aliases used in the plot captions.
std::string normalize_mask_key(std::string key) {
  if (key == "gamma1") return "g1";
  if (key == "gamma2") return "g2";
  if (key == "gamma3") return "g3";
  return key;
}

MaskSet parse_masks(const std::vector<std::string>& raw) {
  MaskSet masks;
  for (const std::string& item : raw) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      fail(kExitConfig, "mask '" + item + "' is not of the form key=value");
    const std::string key = normalize_mask_key(item.substr(0, eq));
    if (!ccifc::is_valid_mask_key(key))
      fail(kExitConfig, "unknown mask key '" + item.substr(0, eq) + "'");
    try {
      size_t used = 0;
      const std::string vs = item.substr(eq + 1);
      const double value = std::stod(vs, &used);
      if (used != vs.size()) throw std::invalid_argument(vs);
      masks[key] = value;
    } catch (const std::exception&) {
      fail(kExitConfig, "mask '" + item + "' has a non-numeric value");
    }
  }
  return masks;
}

ccifc::DpcSelection parse_dpc(const std::string& text) {
  if (text.empty()) return ccifc::DpcSelection::auto_union();
  if (text == "paper") return ccifc::DpcSelection::paper();
  if (text == "zero") return ccifc::DpcSelection::zero();
  if (text.rfind("manual:", 0) == 0) {
    const std::string rest = text.substr(7);
    const auto comma = rest.find(',');
    if (comma != std::string::npos) {
      try {
        return ccifc::DpcSelection::manual(std::stod(rest.substr(0, comma)),
                                           std::stod(rest.substr(comma + 1)));
      } catch (const std::exception&) {
      }
    }
  }
  fail(kExitConfig,
       "--dpc must be 'paper', 'zero', or 'manual:<a1>,<a2>' (got '" + text +
           "')");
}

// Shared scenario-selection flags.
struct ScenarioArgs {
  std::string preset;
  std::string scenario_file;
  CLI::Option* h21_opt = nullptr;
  CLI::Option* n2_opt = nullptr;
  double h21 = 0;
  double n2 = 0;

  void attach(CLI::App* cmd, bool preset_required) {
    auto* p = cmd->add_option("--preset", preset,
                              "named parameter preset (fig6, fig7, fig8, "
                              "fig9strong, fig9mixed, fig10)");
    auto* s = cmd->add_option("--scenario", scenario_file,
                              "scenario JSON file (see README for the keys)");
    p->excludes(s);
    s->excludes(p);
    if (preset_required) cmd->require_option();
    h21_opt = cmd->add_option("--h21", h21, "override the cognitive link gain");
    n2_opt = cmd->add_option("--n2", n2, "override the overheard-noise power");
  }

  // Returns the scenario plus a short label used in CSV rows.
  std::pair<GaussianScenario, std::string> resolve() const {
    GaussianScenario scen;
    std::string label;
    if (!preset.empty()) {
      const auto p = ccifc::figure_preset(preset);
      if (!p) fail(kExitConfig, "unknown preset '" + preset + "'");
      scen = p->scenario;
      label = preset;
    } else if (!scenario_file.empty()) {
      std::string error;
      const auto s = ccifc::scenario_from_json(read_text(scenario_file), &error);
      if (!s) fail(kExitConfig, "bad scenario file: " + error);
      scen = *s;
      label = "custom";
    } else {
      fail(kExitConfig, "provide --preset or --scenario");
    }
    if (h21_opt->count()) {
      scen.h21 = h21;
      label += " h21=" + format_g(h21);
    }
    if (n2_opt->count()) {
      scen.N2 = n2;
      label += " n2=" + format_g(n2);
    }
    const auto v = ccifc::validate_scenario(scen);
    if (!v.valid) fail(kExitConfig, "invalid scenario: " + v.violation);
    return {scen, label};
  }
};

// --------------------------------------------------------------------------
// Manifest.
// --------------------------------------------------------------------------

nlohmann::json scenario_json(const GaussianScenario& s) {
  return nlohmann::json::parse(ccifc::scenario_to_json(s));
}

nlohmann::json masks_json(const MaskSet& masks) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : masks) j[k] = v;
  return j;
}

std::string command_string(int argc, char** argv) {
  std::string out = "ccifc";
  for (int i = 1; i < argc; ++i) {
    out += ' ';
    out += argv[i];
  }
  return out;
}

void write_manifest(const std::filesystem::path& dir, nlohmann::json manifest,
                    double wall_seconds) {
  manifest["tool_version"] = kToolVersion;
  manifest["wall_clock_seconds"] = std::round(wall_seconds * 1000.0) / 1000.0;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

nlohmann::json stats_json(const ccifc::SweepStats& st) {
  nlohmann::json j;
  j["allocations_enumerated"] = st.allocations_enumerated;
  j["invalid_allocations"] = st.invalid_allocations;
  j["evaluations"] = st.evaluations;
  j["feasible_points"] = st.feasible_points;
  j["negative_theta_skips"] = st.negative_theta_skips;
  j["precondition_failures"] = st.precondition_failures;
  j["unbounded_skips"] = st.unbounded_skips;
  return j;
}

// --------------------------------------------------------------------------
// region
// --------------------------------------------------------------------------

struct RegionArgs {
  ScenarioArgs scenario;
  std::string strategy;
  int grid = 7;
  std::string dpc;
  std::vector<std::string> masks;
  std::string out = "ccifc-out";
  bool cap_with_gain = false;
};

int run_region(const RegionArgs& args, const std::string& command) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [scen, label] = args.scenario.resolve();
  const MaskSet masks = parse_masks(args.masks);
  const ccifc::DpcSelection dpc = parse_dpc(args.dpc);

  SweepOptions opt;
  opt.resolution = args.grid;
  opt.relay_resolution = args.grid;
  opt.dpc = dpc;
  opt.masks = masks;

  Frontier frontier;
  std::optional<ccifc::SweepStats> stats;
  nlohmann::json grid_spec;
  try {
    if (args.strategy == "hk") {
      const auto res = ccifc::hk_region(scen, opt);
      frontier = res.frontier;
      stats = res.stats;
      grid_spec = {{"resolution", args.grid}};
    } else if (args.strategy == "outer") {
      ccifc::OuterOptions oopt;
      oopt.cap_with_gain = args.cap_with_gain;
      frontier = ccifc::mimo_bc_outer(scen, oopt);
      grid_spec = {{"split_resolution", oopt.split_resolution},
                   {"rho_resolution", oopt.rho_resolution}};
    } else {
      const auto strat = ccifc::strategy_from_name(args.strategy);
      if (!strat)
        fail(kExitConfig,
             "unknown strategy '" + args.strategy +
                 "' (expected classical, nodelay, lookahead, hk, or outer)");
      const auto res = ccifc::sweep_frontier(scen, *strat, opt);
      frontier = res.frontier;
      stats = res.stats;
      grid_spec = {{"resolution", args.grid},
                   {"relay_resolution", args.grid}};
    }
  } catch (const std::invalid_argument& e) {
    fail(kExitConfig, e.what());
  }

  if (frontier.empty() || frontier.max_r1() + frontier.max_r2() <= 0.0) {
    std::fprintf(stderr, "rate region is empty for this configuration\n");
    return kExitEmptyRegion;
  }

  const std::filesystem::path dir(args.out);
  ensure_dir(dir);
  write_text(dir / "frontier.csv",
             ccifc::frontier_csv(frontier, args.strategy, label));
  write_text(dir / "plot.py", kPlotStub);

  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["scenario"] = scenario_json(scen);
  manifest["scenario_label"] = label;
  manifest["strategies"] = {args.strategy};
  manifest["grid"] = grid_spec;
  manifest["dpc"] = dpc.label();
  manifest["masks"] = masks_json(masks);
  manifest["outputs"] = {"frontier.csv", "plot.py"};
  manifest["seed"] = 0;
  if (args.strategy == "outer")
    manifest["outer_bound_type"] = ccifc::kOuterBoundType;
  if (stats) manifest["stats"] = stats_json(*stats);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(dir, manifest, wall);

  std::printf("%s: %zu frontier vertices, max R1 %.6f, max R2 %.6f -> %s\n",
              args.strategy.c_str(), frontier.points.size(), frontier.max_r1(),
              frontier.max_r2(), (dir / "frontier.csv").string().c_str());
  return kExitOk;
}

// --------------------------------------------------------------------------
// figure
// --------------------------------------------------------------------------

struct FigureArgs {
  std::string name;
  int grid = 7;
  std::string out = "ccifc-out";
  CLI::Option* h21_opt = nullptr;
  double h21 = 0;
};

struct Claim {
  std::string outer;  // file stem expected to dominate
  std::string inner;  // file stem expected to be contained
};

int run_figure(const FigureArgs& args, const std::string& command) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto preset = ccifc::figure_preset(args.name);
  if (!preset) fail(kExitConfig, "unknown figure '" + args.name + "'");

  std::vector<double> h21_values = preset->h21_values;
  if (args.h21_opt->count()) h21_values = {args.h21};

  SweepOptions opt;
  opt.resolution = args.grid;
  opt.relay_resolution = args.grid;

  const std::filesystem::path dir(args.out);
  ensure_dir(dir);

  std::vector<std::string> outputs;
  std::vector<Claim> claims;

  // Writes one frontier CSV and records the file stem.
  const auto emit = [&](const std::string& stem, const Frontier& f,
                        const std::string& strategy, const std::string& label) {
    write_text(dir / (stem + ".csv"), ccifc::frontier_csv(f, strategy, label));
    outputs.push_back(stem + ".csv");
  };

  if (args.name == "fig10") {
    // Pre-decoding cooperation as the overheard link gets cleaner, with the
    // rate-splitting-only baseline for reference.
    GaussianScenario scen = preset->scenario;
    scen.h21 = h21_values.front();
    std::vector<std::string> stems;
    for (const double n2 : preset->n2_values) {
      GaussianScenario s2 = scen;
      s2.N2 = n2;
      const std::string stem = "lookahead-n2-" + format_g(n2);
      emit(stem, ccifc::sweep_frontier(s2, Strategy::Lookahead, opt).frontier,
           "lookahead", args.name + " n2=" + format_g(n2));
      stems.push_back(stem);
    }
    emit("hk", ccifc::hk_region(scen, opt).frontier, "hk", args.name);
    // Cleaner overheard links dominate noisier ones; every curve beats the
    // no-cooperation baseline.  (Preset lists n2 in decreasing order.)
    for (size_t i = 1; i < stems.size(); ++i)
      claims.push_back({stems[i], stems[i - 1]});
    for (const auto& stem : stems) claims.push_back({stem, "hk"});
  } else if (args.name == "fig8") {
    // Ingredient ablations on the instantaneous-relaying strategy: disabling
    // the coherent stream, the precoder, or the relay map shrinks the region.
    for (const double h21 : h21_values) {
      GaussianScenario scen = preset->scenario;
      scen.h21 = h21;
      const std::string suffix = "-h21-" + format_g(h21);
      const std::string label = args.name + " h21=" + format_g(h21);

      emit("full" + suffix,
           ccifc::sweep_frontier(scen, Strategy::NoDelay, opt).frontier,
           "nodelay", label);

      SweepOptions ab = opt;
      ab.masks["g3"] = 0.0;
      emit("no-gamma3" + suffix,
           ccifc::sweep_frontier(scen, Strategy::NoDelay, ab).frontier,
           "nodelay", label);

      ab = opt;
      ab.dpc = ccifc::DpcSelection::zero();
      emit("dpc-zero" + suffix,
           ccifc::sweep_frontier(scen, Strategy::NoDelay, ab).frontier,
           "nodelay", label);

      ab = opt;
      ab.masks["relay_beta"] = 0.0;
      emit("no-relay" + suffix,
           ccifc::sweep_frontier(scen, Strategy::NoDelay, ab).frontier,
           "nodelay", label);

      emit("hk" + suffix, ccifc::hk_region(scen, opt).frontier, "hk", label);

      for (const char* stem :
           {"no-gamma3", "dpc-zero", "no-relay", "hk"})
        claims.push_back({"full" + suffix, stem + suffix});
    }
  } else {
    // fig6 / fig7 / fig9strong / fig9mixed: the three cooperation strategies
    // against the rate-splitting-only baseline (and the outer bound where the
    // plot shows one).
    const bool with_outer = args.name == "fig7";
    if (with_outer) {
      // The broadcast-style bound depends only on the receiver links and the
      // power budget, not on the overheard link, so one curve serves all h21.
      emit("outer", ccifc::mimo_bc_outer(preset->scenario, {}), "outer",
           args.name);
    }
    for (const double h21 : h21_values) {
      GaussianScenario scen = preset->scenario;
      scen.h21 = h21;
      const std::string suffix = "-h21-" + format_g(h21);
      const std::string label = args.name + " h21=" + format_g(h21);
      emit("classical" + suffix,
           ccifc::sweep_frontier(scen, Strategy::Classical, opt).frontier,
           "classical", label);
      emit("nodelay" + suffix,
           ccifc::sweep_frontier(scen, Strategy::NoDelay, opt).frontier,
           "nodelay", label);
      emit("lookahead" + suffix,
           ccifc::sweep_frontier(scen, Strategy::Lookahead, opt).frontier,
           "lookahead", label);
      emit("hk" + suffix, ccifc::hk_region(scen, opt).frontier, "hk", label);

      for (const char* stem : {"classical", "nodelay", "lookahead"})
        claims.push_back({stem + suffix, "hk" + suffix});
      claims.push_back({"nodelay" + suffix, "classical" + suffix});
      if (with_outer)
        for (const char* stem : {"classical", "nodelay", "lookahead", "hk"})
          claims.push_back({"outer", stem + suffix});
    }
  }

  // Re-derive every claim from the files just written; the CSVs are the
  // artifact of record, not the in-memory frontiers.
  std::ostringstream report;
  report << "figure " << args.name << " dominance report (tolerance "
         << kFigureTol << ")\n";
  bool all_ok = true;
  for (const Claim& c : claims) {
    const Frontier outer = load_frontier_csv(dir / (c.outer + ".csv"));
    const Frontier inner = load_frontier_csv(dir / (c.inner + ".csv"));
    const bool ok = ccifc::frontier_dominates(outer, inner, kFigureTol);
    all_ok = all_ok && ok;
    report << "  " << c.outer << " contains " << c.inner << ": "
           << (ok ? "PASS" : "FAIL") << "\n";
  }
  report << "overall: " << (all_ok ? "PASS" : "FAIL") << "\n";
  write_text(dir / "report.txt", report.str());
  outputs.push_back("report.txt");
  write_text(dir / "plot.py", kPlotStub);
  outputs.push_back("plot.py");

  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["figure"] = args.name;
  manifest["scenario"] = scenario_json(preset->scenario);
  manifest["h21_values"] = h21_values;
  if (!preset->n2_values.empty()) manifest["n2_values"] = preset->n2_values;
  manifest["strategies"] = {"classical", "nodelay", "lookahead", "hk"};
  manifest["grid"] = {{"resolution", args.grid},
                      {"relay_resolution", args.grid}};
  manifest["dpc"] = ccifc::DpcSelection::auto_union().label();
  manifest["masks"] = nlohmann::json::object();
  manifest["outputs"] = outputs;
  manifest["seed"] = 0;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(dir, manifest, wall);

  std::fputs(report.str().c_str(), stdout);
  return all_ok ? kExitOk : kExitDominance;
}

// --------------------------------------------------------------------------
// oracle
// --------------------------------------------------------------------------

struct OracleArgs {
  int trials = 100;
  std::uint64_t seed = 7;
  int grid = 50;
  int corrupt_family = -1;
};

int run_oracle(const OracleArgs& args) {
  if (args.trials < 1) fail(kExitConfig, "--trials must be at least 1");
  if (args.grid < 2) fail(kExitConfig, "--grid must be at least 2");

  std::uint64_t state = args.seed;
  int disagreements = 0;
  double worst = 0.0;
  nlohmann::json offender;

  for (int trial = 0; trial < args.trials; ++trial) {
    const ccifc::RateTerms terms = ccifc::random_consistent_terms(state);
    ccifc::RegionPolytope poly = ccifc::corollary_region(terms);
    // Mutation hook: tightening one family by 25% must surface as a
    // disagreement with the LP, proving the cross-check has teeth.
    if (args.corrupt_family >= 0)
      poly.bound[static_cast<size_t>(args.corrupt_family)] *= 0.75;

    double max_bound = 0.0;
    for (const double b : poly.bound)
      if (std::isfinite(b)) max_bound = std::max(max_bound, b);
    const double span = 1.2 * std::max(max_bound, 1e-3);

    for (int i = 0; i < args.grid; ++i) {
      for (int j = 0; j < args.grid; ++j) {
        const double r1 = span * i / (args.grid - 1);
        const double r2 = span * j / (args.grid - 1);
        const double margin = ccifc::corollary_margin(poly, r1, r2);
        const bool closed_form_in = margin >= 0.0;
        const bool lp_in =
            ccifc::lp_project(terms, r1, r2) == ccifc::LpStatus::Feasible;
        if (closed_form_in != lp_in && std::abs(margin) > 1e-9) {
          ++disagreements;
          if (std::abs(margin) > worst) {
            worst = std::abs(margin);
            offender = {{"trial", trial},
                        {"r1", r1},
                        {"r2", r2},
                        {"closed_form_margin", margin},
                        {"lp_feasible", lp_in},
                        {"I", std::vector<double>(terms.I.begin(),
                                                  terms.I.end())},
                        {"I3prime", terms.I3prime}};
          }
        }
      }
    }
  }

  std::printf(
      "oracle: trials=%d grid=%dx%d disagreements=%d worst_margin=%.3g\n",
      args.trials, args.grid, args.grid, disagreements, worst);
  if (disagreements > 0) {
    std::printf("%s\n", offender.dump(2).c_str());
    return kExitOracle;
  }
  return kExitOk;
}

// --------------------------------------------------------------------------
// dmc
// --------------------------------------------------------------------------

struct DmcArgs {
  std::string channel;
  bool check_only = false;
  std::string capacity;  // degraded | degraded-sum | semidet
  bool verify_identity = false;
  int t_max = 4;
  int q = 6;
  int samples = 300;
  std::uint64_t seed = 1;
  std::string out = "ccifc-out";
};

ccifc::FiniteChannel load_channel(const std::string& name_or_path,
                                  std::string* label) {
  if (const auto ch = ccifc::builtin_channel(name_or_path)) {
    *label = name_or_path;
    return *ch;
  }
  if (!std::filesystem::exists(name_or_path))
    fail(kExitConfig, "'" + name_or_path +
                          "' is neither a built-in channel nor a file "
                          "(built-ins: degraded-binary, paired-outputs, "
                          "noiseless-xor)");
  *label = std::filesystem::path(name_or_path).stem().string();
  try {
    return ccifc::channel_from_json(read_text(name_or_path));
  } catch (const std::invalid_argument& e) {
    fail(kExitConfig, std::string("bad channel file: ") + e.what());
  }
}

void print_condition_reports(const std::vector<ccifc::ConditionReport>& reports,
                             const std::string& label) {
  std::printf("channel '%s' condition report:\n", label.c_str());
  for (const auto& r : reports) {
    std::printf("  %-26s %-10s %-5s margin %+.3e",
                ccifc::condition_name(r.condition).c_str(),
                r.structural ? "structural" : "sampled",
                r.holds ? "HOLDS" : "FAILS", r.worst_margin);
    if (!r.holds && !r.witness.empty())
      std::printf("  (%s)", r.witness.c_str());
    std::printf("\n");
  }
}

int run_dmc(const DmcArgs& args, const std::string& command) {
  const auto t0 = std::chrono::steady_clock::now();
  const int modes = int(args.check_only) + int(!args.capacity.empty()) +
                    int(args.verify_identity);
  if (modes > 1)
    fail(kExitConfig,
         "--check-only, --capacity, and --verify-identity are exclusive");

  std::string label;
  const ccifc::FiniteChannel ch = load_channel(args.channel, &label);

  ccifc::CapacityOptions opt;
  opt.t_max = args.t_max;
  opt.q = args.q;
  opt.seed = args.seed;
  opt.condition_samples = args.samples;

  if (args.verify_identity) {
    ccifc::AssignmentCheck res;
    try {
      res = ccifc::verify_assignment_identity(ch, opt);
    } catch (const std::invalid_argument& e) {
      fail(kExitConfig, e.what());
    }
    std::printf(
        "identity check: %llu input families, worst gap %.3e (tolerance "
        "1e-10)\n",
        static_cast<unsigned long long>(res.families), res.max_gap);
    return res.max_gap <= 1e-10 ? kExitOk : kExitOracle;
  }

  if (args.capacity.empty()) {
    // Default task: report the channel conditions.
    print_condition_reports(ccifc::check_conditions(ch, args.seed, args.samples),
                            label);
    return kExitOk;
  }

  ccifc::CapacityTheorem theorem;
  if (args.capacity == "degraded") {
    theorem = ccifc::CapacityTheorem::Degraded;
  } else if (args.capacity == "degraded-sum") {
    theorem = ccifc::CapacityTheorem::DegradedSum;
  } else if (args.capacity == "semidet") {
    theorem = ccifc::CapacityTheorem::Semideterministic;
  } else {
    fail(kExitConfig, "--capacity must be degraded, degraded-sum, or semidet");
  }

  ccifc::CapacityResult res;
  try {
    res = ccifc::capacity_region(ch, theorem, opt);
  } catch (const std::invalid_argument& e) {
    fail(kExitConfig, e.what());
  }
  if (res.refused) {
    print_condition_reports(res.preconditions, label);
    std::fprintf(stderr, "refused: %s\n", res.refusal.c_str());
    return kExitRefused;
  }
  // Discrete mutual informations are entropy differences and can carry
  // ~1e-16 rounding dust, so a zero-capacity channel may report a maximal
  // rate pair that is positive by a few ulps.  Classify anything below this
  // slack as the zero rate pair.
  constexpr double zero_rate_slack = 1e-9;
  if (res.frontier.empty() ||
      res.frontier.max_r1() + res.frontier.max_r2() <= zero_rate_slack) {
    std::fprintf(stderr, "capacity region is empty (only the zero rate pair)\n");
    return kExitEmptyRegion;
  }

  const std::filesystem::path dir(args.out);
  ensure_dir(dir);
  const std::string strategy = "capacity-" + args.capacity;
  write_text(dir / "capacity.csv",
             ccifc::frontier_csv(res.frontier, strategy, label));
  write_text(dir / "plot.py", kPlotStub);

  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["channel"] = nlohmann::json::parse(ccifc::channel_to_json(ch));
  manifest["channel_label"] = label;
  manifest["strategies"] = {strategy};
  manifest["grid"] = {{"t_max", opt.t_max}, {"q", opt.q}};
  manifest["dpc"] = "n/a";
  manifest["masks"] = nlohmann::json::object();
  manifest["outputs"] = {"capacity.csv", "plot.py"};
  manifest["seed"] = args.seed;
  manifest["families_enumerated"] = res.families;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(dir, manifest, wall);

  std::printf(
      "%s: %llu input families, %zu frontier vertices, max R1 %.6f, max R2 "
      "%.6f -> %s\n",
      strategy.c_str(), static_cast<unsigned long long>(res.families),
      res.frontier.points.size(), res.frontier.max_r1(), res.frontier.max_r2(),
      (dir / "capacity.csv").string().c_str());
  return kExitOk;
}

}  // namespace

// --------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app(
      "Rate regions for the Gaussian cognitive interference channel with a "
      "delayed overheard link, plus finite-alphabet capacity checks");
  app.set_version_flag("--version", kToolVersion);
  app.set_config("--config", "",
                 "read options from an INI/TOML file ([section] per command; "
                 "command-line flags win)");
  app.require_subcommand(1);

  RegionArgs region;
  auto* region_cmd = app.add_subcommand(
      "region", "compute one strategy's achievable frontier");
  region.scenario.attach(region_cmd, false);
  region_cmd
      ->add_option("--strategy", region.strategy,
                   "classical | nodelay | lookahead | hk | outer")
      ->required();
  region_cmd->add_option("--grid", region.grid,
                         "grid points per power-fraction axis (default 7)");
  region_cmd->add_option("--dpc", region.dpc,
                         "precoder coefficients: paper, zero, or "
                         "manual:<a1>,<a2> (default: union of paper and zero)");
  region_cmd->add_option("--mask", region.masks,
                         "pin an allocation fraction, e.g. --mask gamma3=0 "
                         "(repeatable)");
  region_cmd->add_option("--out", region.out, "output directory");
  region_cmd->add_flag("--cap-with-gain", region.cap_with_gain,
                       "apply the receiver gain inside the single-user cap "
                       "used by the outer bound");

  FigureArgs figure;
  auto* figure_cmd = app.add_subcommand(
      "figure", "emit a comparison plot's CSV bundle and dominance report");
  figure_cmd->add_option("name", figure.name, "figure preset name")->required();
  figure_cmd->add_option("--grid", figure.grid,
                         "grid points per power-fraction axis (default 7)");
  figure_cmd->add_option("--out", figure.out, "output directory");
  figure.h21_opt = figure_cmd->add_option(
      "--h21", figure.h21, "restrict to one cognitive link gain");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand(
      "oracle",
      "cross-check closed-form region membership against the LP formulation");
  oracle_cmd->add_option("--trials", oracle.trials,
                         "random bound vectors to test (default 100)");
  oracle_cmd->add_option("--seed", oracle.seed, "random seed (default 7)");
  oracle_cmd->add_option("--grid", oracle.grid,
                         "membership grid per axis (default 50)");
  oracle_cmd
      ->add_option("--corrupt-family", oracle.corrupt_family,
                   "tighten one weighted-sum family by 25% (mutation test)")
      ->check(CLI::Range(0, 7))
      ->group("");  // hidden

  DmcArgs dmc;
  auto* dmc_cmd = app.add_subcommand(
      "dmc", "finite-alphabet channel conditions and capacity regions");
  dmc_cmd
      ->add_option("--channel", dmc.channel,
                   "built-in channel name or channel JSON file")
      ->required();
  dmc_cmd->add_flag("--check-only", dmc.check_only,
                    "only print the condition report (the default task)");
  dmc_cmd->add_option("--capacity", dmc.capacity,
                      "evaluate a capacity region: degraded, degraded-sum, or "
                      "semidet");
  dmc_cmd->add_flag("--verify-identity", dmc.verify_identity,
                    "compare the fast enumeration against the direct "
                    "split-rate assignment over the whole input grid");
  dmc_cmd->add_option("--tmax", dmc.t_max,
                      "auxiliary alphabet size bound (default 4)");
  dmc_cmd->add_option("--q", dmc.q,
                      "probability grid denominator (default 6)");
  dmc_cmd->add_option("--samples", dmc.samples,
                      "sampled inputs per condition check (default 300)");
  dmc_cmd->add_option("--seed", dmc.seed, "random seed (default 1)");
  dmc_cmd->add_option("--out", dmc.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string command = command_string(argc, argv);
  try {
    if (region_cmd->parsed()) return run_region(region, command);
    if (figure_cmd->parsed()) return run_figure(figure, command);
    if (oracle_cmd->parsed()) return run_oracle(oracle);
    if (dmc_cmd->parsed()) return run_dmc(dmc, command);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
