// ps2mac_cli: run scenarios, print the access-ratio table, compare control
// overhead against AT-ST, and self-test.
//
// Exit codes: 0 success, 1 invalid input or I/O failure, 2 self-test mismatch.

#include "ps2mac/experiment.hpp"
#include "ps2mac/simulator.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace ps2mac;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitSelfTest = 2;

struct Options {
  std::vector<std::string> scenarios{"I", "II", "III", "IV", "V"};
  std::vector<std::string> schemes{"ps2mac"};
  std::size_t seeds = 10;
  std::uint64_t seed_base = 1;
  double duration = 60.0;
  std::vector<double> weights{3, 2, 1};
  std::vector<int> thresholds{4, 7};
  std::string out = "results";
  unsigned threads = 0;
  int retry_limit = 7;
  std::size_t queue_capacity = kDefaultClassCapacity;
  int nodes = 36;
  double area = 1000.0;
  int flows = 30;
  double rate = 4.0;
  int payload = 512;
  int rts = 20, cts = 14, ack = 14, at = 20, st = 14, header = 28;
  std::string own_priority = "head";
  bool raw = false;
};

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

WeightVector make_weights(const std::vector<double>& w) {
  if (w.size() != 3) {
    throw InvalidInput("--weights needs three values w0,w1,w2");
  }
  return {w[0], w[1], w[2]};
}

std::uint64_t effective_seed_base(const Options& o) {
  if (const char* env = std::getenv("PS2MAC_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') {
      throw InvalidInput("PS2MAC_SEED must be a non-negative integer");
    }
    return v;
  }
  return o.seed_base;
}

ScenarioSpec make_spec(const Options& o, const std::string& id) {
  ScenarioSpec s = builtin_scenario(id);
  s.weights = make_weights(o.weights);
  s.node_count = o.nodes;
  s.area_width = o.area;
  s.area_height = o.area;
  s.flow_count = o.flows;
  s.cbr_rate = o.rate;
  s.payload = o.payload;
  s.validate();
  return s;
}

SimConfig make_config(const Options& o, Scheme scheme) {
  SimConfig c;
  c.scheme = scheme;
  c.duration_s = o.duration;
  if (o.thresholds.size() != 2) {
    throw InvalidInput("--retry-thresholds needs two values Tmp,Tlp");
  }
  c.thresholds = {o.thresholds[0], o.thresholds[1]};
  c.retry_limit = o.retry_limit;
  c.queue_capacity = o.queue_capacity;
  c.sizes.rts = o.rts;
  c.sizes.cts = o.cts;
  c.sizes.ack = o.ack;
  c.sizes.at = o.at;
  c.sizes.st = o.st;
  c.sizes.data_header = o.header;
  if (o.own_priority == "head") {
    c.own_priority = OwnPriorityRule::HeadOfLine;
  } else if (o.own_priority == "highest") {
    c.own_priority = OwnPriorityRule::HighestQueued;
  } else {
    throw InvalidInput("--own-priority must be head or highest");
  }
  c.validate();
  return c;
}

// Writes through a temporary file so a failed run never leaves a partial CSV.
void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    f << content;
    if (!f.flush()) {
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--scenario", o.scenarios, "Scenarios to run (I..V)")->delimiter(',');
  sub->add_option("--seeds", o.seeds, "Number of seeds")->check(CLI::PositiveNumber);
  sub->add_option("--seed-base", o.seed_base, "First seed (PS2MAC_SEED overrides)");
  sub->add_option("--duration", o.duration, "Simulated seconds per run");
  sub->add_option("--weights", o.weights, "Class weights w0,w1,w2")->delimiter(',')->expected(3);
  sub->add_option("--retry-thresholds", o.thresholds, "Boost thresholds Tmp,Tlp")->delimiter(',')->expected(2);
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  sub->add_option("--retry-limit", o.retry_limit, "Attempts before a frame is dropped");
  sub->add_option("--queue-capacity", o.queue_capacity, "Frames per class queue (0 = unbounded)");
  sub->add_option("--nodes", o.nodes, "Node count");
  sub->add_option("--area", o.area, "Side of the square area in m");
  sub->add_option("--flows", o.flows, "CBR flows");
  sub->add_option("--rate", o.rate, "Packets per second per flow");
  sub->add_option("--payload", o.payload, "DATA payload bytes");
  sub->add_option("--rts-size", o.rts, "RTS bytes");
  sub->add_option("--cts-size", o.cts, "CTS bytes");
  sub->add_option("--ack-size", o.ack, "ACK bytes");
  sub->add_option("--at-size", o.at, "AT bytes");
  sub->add_option("--st-size", o.st, "ST bytes");
  sub->add_option("--header-size", o.header, "DATA header bytes");
  sub->add_option("--own-priority", o.own_priority, "RTS recipient compares its head-of-line or highest queued class")
      ->check(CLI::IsMember({"head", "highest"}));
}

std::string cell(const Summary& s, double scale, int precision) {
  if (s.n == 0) {
    return "-";
  }
  return format_number(s.mean * scale, precision);
}

void print_aggregate(const std::string& scenario, Scheme scheme, const Aggregate& a) {
  std::printf("%-4s %-10s", scenario.c_str(), std::string(to_string(scheme)).c_str());
  for (Priority p : kAllClasses) {
    std::printf("  %s thr %8s kb/s pdr %6s delay %8s ms", std::string(to_string(p)).c_str(),
                cell(a[p].throughput, 1e-3, 2).c_str(), cell(a[p].pdr, 1.0, 4).c_str(),
                cell(a[p].delay, 1e-3, 2).c_str());
  }
  std::printf("  overhead %s%%\n", cell(a.overhead, 1.0, 2).c_str());
}

int cmd_run(const Options& o) {
  std::vector<Scheme> schemes;
  for (const auto& s : o.schemes) {
    schemes.push_back(parse_scheme(s));
  }
  const auto seeds = seed_range(effective_seed_base(o), o.seeds);
  std::vector<ScenarioSpec> specs;
  for (const auto& id : o.scenarios) {
    specs.push_back(make_spec(o, id));
  }
  std::vector<SimConfig> configs;
  for (Scheme s : schemes) {
    configs.push_back(make_config(o, s));
  }

  std::string runs_csv = runs_csv_header();
  std::string agg_csv = aggregate_csv_header();
  bool balanced = true;
  for (const auto& spec : specs) {
    for (const auto& cfg : configs) {
      const auto runs = run_seeds(spec, cfg, seeds, o.threads);
      for (std::size_t i = 0; i < runs.size(); ++i) {
        runs_csv += runs_csv_rows(spec.id, cfg.scheme, seeds[i], runs[i]);
      }
      const Aggregate a = aggregate(runs);
      balanced = balanced && a.balanced;
      agg_csv += aggregate_csv_rows(spec.id, cfg.scheme, a);
      print_aggregate(spec.id, cfg.scheme, a);
    }
  }
  if (!balanced) {
    std::cerr << "error: packet conservation ledger did not balance\n";
    return kExitSelfTest;
  }
  fs::create_directories(o.out);
  write_atomically(fs::path(o.out) / "runs.csv", runs_csv);
  write_atomically(fs::path(o.out) / "aggregate.csv", agg_csv);
  std::cout << "wrote " << (fs::path(o.out) / "runs.csv").string() << " and "
            << (fs::path(o.out) / "aggregate.csv").string() << "\n";
  return 0;
}

int cmd_table1(const Options& o) {
  const WeightVector w = make_weights(o.weights);
  const bool defaults = w.values() == WeightVector::defaults().values();
  const auto rows = access_table(w);
  const auto& golden = golden_access_table();
  bool ok = true;
  std::printf("%-4s %6s %6s %6s   %s\n", "", "x", "y", "z", o.raw ? "w0x' : w1y' : w2z'" : "ratio");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::printf("%-4s %6g %6g %6g   ", r.scenario.c_str(), r.input.x(), r.input.y(), r.input.z());
    if (o.raw) {
      std::printf("%g : %g : %g\n", r.ratio.hp, r.ratio.mp, r.ratio.lp);
    } else {
      std::printf("%d:%d:%d", r.quanta.n[0], r.quanta.n[1], r.quanta.n[2]);
      if (defaults && !(r.quanta == golden[i])) {
        std::printf("   MISMATCH (expected %d:%d:%d)", golden[i].n[0], golden[i].n[1], golden[i].n[2]);
        ok = false;
      }
      std::printf("\n");
    }
  }
  if (defaults && !o.raw) {
    std::printf("%s\n", ok ? "golden table: match" : "golden table: MISMATCH");
  }
  return ok ? 0 : kExitSelfTest;
}

int cmd_compare(const Options& o) {
  for (const auto& s : o.schemes) {
    if (s != "ps2mac" && s != "atst") {
      throw InvalidInput("compare runs ps2mac against atst only; '" + s + "' is not accepted");
    }
  }
  const auto seeds = seed_range(effective_seed_base(o), o.seeds);
  const SimConfig ps2 = make_config(o, Scheme::Ps2Mac);
  const SimConfig atst = make_config(o, Scheme::Atst);
  std::vector<ScenarioSpec> specs;
  for (const auto& id : o.scenarios) {
    specs.push_back(make_spec(o, id));
  }

  std::string csv = "scenario,seed,overhead_ps2mac_pct,overhead_atst_pct,delta_pct,relative_reduction\n";
  std::vector<double> reductions;
  std::size_t pairs = 0, ps2_lower = 0;
  for (const auto& spec : specs) {
    const auto a = run_seeds(spec, ps2, seeds, o.threads);
    const auto b = run_seeds(spec, atst, seeds, o.threads);
    std::vector<double> scen_red;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const auto oa = control_overhead(a[i]);
      const auto ob = control_overhead(b[i]);
      csv += spec.id + "," + std::to_string(seeds[i]) + ",";
      if (!oa || !ob || *ob == 0.0) {
        csv += (oa ? format_number(*oa) : "") + "," + (ob ? format_number(*ob) : "") + ",,\n";
        continue;
      }
      const double rel = (*ob - *oa) / *ob;
      csv += format_number(*oa) + "," + format_number(*ob) + "," + format_number(*oa - *ob) + "," +
             format_number(rel) + "\n";
      reductions.push_back(rel);
      scen_red.push_back(rel);
      ++pairs;
      ps2_lower += *oa <= *ob ? 1 : 0;
    }
    const Summary s = summarize(std::span<const double>(scen_red));
    std::printf("%-4s ps2mac %6s%%  atst %6s%%  mean reduction %s%%\n", spec.id.c_str(),
                cell(aggregate(a).overhead, 1.0, 2).c_str(), cell(aggregate(b).overhead, 1.0, 2).c_str(),
                cell(s, 100.0, 1).c_str());
  }
  const Summary all = summarize(std::span<const double>(reductions));
  std::printf("pairs with ps2mac <= atst: %zu of %zu; mean relative reduction %s%%\n", ps2_lower, pairs,
              cell(all, 100.0, 1).c_str());
  fs::create_directories(o.out);
  write_atomically(fs::path(o.out) / "compare.csv", csv);
  std::cout << "wrote " << (fs::path(o.out) / "compare.csv").string() << "\n";
  return 0;
}

int cmd_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
    failures += ok ? 0 : 1;
  };

  const auto rows = access_table(WeightVector::defaults());
  bool table_ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    table_ok = table_ok && rows[i].quanta == golden_access_table()[i];
  }
  check(table_ok, "access-ratio table matches the published quanta");

  const auto a = aifsn(WeightVector::defaults());
  const MacTimingConfig t;
  check(a == Aifsn{2, 3, 6}, "AIFSN = (2,3,6)");
  check(ifs(Priority::HP, t, a) == 50 && ifs(Priority::MP, t, a) == 70 && ifs(Priority::LP, t, a) == 130,
        "IFS = (50,70,130) us");
  const auto pf = priority_factors(WeightVector::defaults());
  check(std::abs(pf[Priority::HP] - 0.5) < 1e-9 && std::abs(pf[Priority::MP] - 2.0 / 3) < 1e-9 &&
            std::abs(pf[Priority::LP] - 5.0 / 6) < 1e-9,
        "PF = (0.5, 0.6667, 0.8333)");
  check(airtime(540, 2e6) == 2160 && airtime(20, 2e6) == 80, "airtime of DATA and RTS");

  SimConfig cfg;
  cfg.duration_s = 5.0;
  cfg.seed = 7;
  const auto spec = builtin_scenario("II");
  const auto r1 = run(spec, cfg);
  const auto r2 = run(spec, cfg);
  check(runs_csv_rows("II", cfg.scheme, 7, r1.metrics) == runs_csv_rows("II", cfg.scheme, 7, r2.metrics),
        "same seed gives identical rows");
  check(r1.metrics.balanced(), "conservation ledger balances");
  return failures == 0 ? 0 : kExitSelfTest;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proportional-share scheduling and MAC simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file; [run], [compare] or [table1] sections mirror the flags");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());

  Options o;
  auto* run_cmd = app.add_subcommand("run", "Simulate scenarios and write runs.csv and aggregate.csv");
  add_common(run_cmd, o);
  run_cmd->add_option("--scheme", o.schemes, "ps2mac, atst or legacy-dcf")->delimiter(',');

  auto* table_cmd = app.add_subcommand("table1", "Print the access-ratio table for the five scenario mixes");
  table_cmd->add_option("--weights", o.weights, "Class weights w0,w1,w2")->delimiter(',')->expected(3);
  table_cmd->add_flag("--raw", o.raw, "Print the unrounded weighted shares");

  auto* cmp_cmd = app.add_subcommand("compare", "Paired control-overhead comparison against AT-ST");
  add_common(cmp_cmd, o);
  cmp_cmd->add_option("--scheme", o.schemes, "Accepted for symmetry; only ps2mac and atst are valid")
      ->delimiter(',');

  app.add_subcommand("selftest", "Check the published constants and run a short determinism check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(o);
    }
    if (table_cmd->parsed()) {
      return cmd_table1(o);
    }
    if (cmp_cmd->parsed()) {
      return cmd_compare(o);
    }
    return cmd_selftest();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
