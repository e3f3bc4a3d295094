#include "area_overlay/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "area_overlay/analysis.hpp"
#include "area_overlay/codec.hpp"
#include "area_overlay/generator.hpp"
#include "area_overlay/render.hpp"

namespace area_overlay {

namespace {

/// Failure to read or interpret an input file; carries the exit code to use.
struct CliFailure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path, int code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure{code, fmt::format("cannot read {}", path)};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

NetworkSpec load_spec(const std::string& path) {
  const std::string text = read_file(path, kExitScenario);
  try {
    return load_scenario(text);
  } catch (const ScenarioError& e) {
    throw CliFailure{kExitScenario, fmt::format("{}: {}", path, e.what())};
  } catch (const ValidationError& e) {
    throw CliFailure{kExitScenario, fmt::format("{}: {}", path, e.what())};
  }
}

std::optional<RouterId> resolve_router(const NetworkSpec& spec, const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (const auto id = spec.find_router(name)) return id;
  try {
    const RouterId id = parse_router_id(name);
    if (spec.routers.count(id)) return id;
  } catch (const std::invalid_argument&) {
  }
  throw CliFailure{kExitScenario, fmt::format("unknown router '{}'", name)};
}

struct RunOptions {
  std::string scenario;
  std::string mode = "extension";
  std::string events;
  std::string output = "routes";
  std::string router;
  std::string format = "text";
};

int cmd_run(const RunOptions& opt, std::ostream& out) {
  const NetworkSpec spec = load_spec(opt.scenario);
  std::vector<Event> events;
  if (!opt.events.empty()) {
    try {
      events = load_events(read_file(opt.events, kExitScenario), spec);
    } catch (const ScenarioError& e) {
      throw CliFailure{kExitScenario, fmt::format("{}: {}", opt.events, e.what())};
    }
  }
  if (opt.output == "diff" && opt.mode != "both") {
    throw CliFailure{kExitUsage, "--output diff requires --mode both"};
  }
  const auto router = resolve_router(spec, opt.router);
  const OutputFormat format = opt.format == "lines" ? OutputFormat::kLines : OutputFormat::kText;

  std::vector<std::pair<ProtocolMode, Engine>> runs;
  if (opt.mode != "dvr") runs.emplace_back(ProtocolMode::kExtension, run_scenario(spec, ProtocolMode::kExtension, events));
  if (opt.mode != "extension") {
    runs.emplace_back(ProtocolMode::kHierarchicalDvr,
                      run_scenario(spec, ProtocolMode::kHierarchicalDvr, events));
  }
  if (opt.output == "diff") {
    out << render_diff(runs[0].second, runs[1].second, router);
    return kExitOk;
  }
  for (const auto& [mode, engine] : runs) {
    if (runs.size() > 1 && format == OutputFormat::kText) out << "# " << to_string(mode) << '\n';
    if (opt.output == "routes") {
      out << render_routes(engine, router, format);
    } else if (opt.output == "overlay") {
      out << render_overlay(engine, router);
    } else if (opt.output == "timeline") {
      out << engine.timeline().text();
    } else {
      out << render_lsdbs(engine, router);
    }
  }
  return kExitOk;
}

struct LsaOptions {
  std::string file;
  std::string version = "v2";
  std::string scenario;
  bool hex = false;
  bool encode = false;
};

int cmd_lsa(const LsaOptions& opt, std::ostream& out) {
  const OspfVersion version = opt.version == "v3" ? OspfVersion::kV3 : OspfVersion::kV2;
  std::optional<NetworkSpec> spec;
  if (!opt.scenario.empty()) spec = load_spec(opt.scenario);
  const NetworkSpec* names = spec ? &*spec : nullptr;
  const std::string input = read_file(opt.file, kExitMalformedLsa);
  try {
    if (opt.encode) {
      for (const auto& lsa : parse_lsa_text(input, names)) {
        const Bytes bytes = encode_lsa(lsa, version);
        if (opt.hex) {
          out << to_hex(bytes) << '\n';
        } else {
          out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        }
      }
      return kExitOk;
    }
    const Bytes bytes = opt.hex ? from_hex(input) : Bytes(input.begin(), input.end());
    const auto lsas = decode_lsa_stream(bytes, version);
    for (std::size_t i = 0; i < lsas.size(); ++i) {
      if (i > 0) out << '\n';
      out << format_lsa(lsas[i], names);
    }
    return kExitOk;
  } catch (const DecodeError& e) {
    throw CliFailure{kExitMalformedLsa, fmt::format("malformed LSA: {}", e.what())};
  } catch (const std::invalid_argument& e) {
    throw CliFailure{kExitMalformedLsa, fmt::format("malformed input: {}", e.what())};
  }
}

struct GenOptions {
  int count = 200;
  int max_routers = 12;
  int max_areas = 5;
  bool asymmetric = false;
  bool print = false;
};

int cmd_gen(const GenOptions& opt, std::ostream& out) {
  const std::uint64_t seed = seed_from_env(1);
  GeneratorOptions gen;
  gen.max_routers = opt.max_routers;
  gen.max_areas = opt.max_areas;
  gen.asymmetric = opt.asymmetric;
  std::size_t mismatched = 0;
  std::size_t dvr_suboptimal = 0;
  std::size_t dvr_below = 0;
  for (int i = 0; i < opt.count; ++i) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
    const NetworkSpec spec = random_scenario(rng, gen);
    if (opt.print) {
      out << fmt::format("# scenario {} seed {}\n", i, seed + static_cast<std::uint64_t>(i))
          << to_scenario_text(spec) << '\n';
      continue;
    }
    const auto ext = compare_with_oracle(run_scenario(spec, ProtocolMode::kExtension, {}));
    const auto dvr = compare_with_oracle(run_scenario(spec, ProtocolMode::kHierarchicalDvr, {}));
    const auto bad = ext.mismatches().size();
    mismatched += bad > 0;
    dvr_suboptimal += dvr.above > 0;
    dvr_below += dvr.below > 0;
    out << fmt::format("scenario {} seed {}: {} routers, {} areas, {} ABRs; extension mismatches {}; "
                       "dvr above oracle {}, below oracle {}\n",
                       i, seed + static_cast<std::uint64_t>(i), spec.routers.size(),
                       spec.areas.size(), spec.abrs().size(), bad, dvr.above, dvr.below);
  }
  if (opt.print) return kExitOk;
  out << fmt::format("{} scenarios: {} with extension mismatches, {} with dvr suboptimality, "
                     "{} with dvr below oracle\n",
                     opt.count, mismatched, dvr_suboptimal, dvr_below);
  return mismatched == 0 && dvr_below == 0 ? kExitOk : kExitUsage;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-area OSPF simulator with an ABR overlay", "area-overlay"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and print results");
  run_cmd->add_option("scenario", run.scenario, "Scenario file")->required();
  run_cmd->add_option("--mode", run.mode)->check(CLI::IsMember({"extension", "dvr", "both"}));
  run_cmd->add_option("--events", run.events, "Event file");
  run_cmd->add_option("--output", run.output)
      ->check(CLI::IsMember({"routes", "overlay", "timeline", "diff", "lsas"}));
  run_cmd->add_option("--router", run.router, "Restrict output to one router");
  run_cmd->add_option("--format", run.format)->check(CLI::IsMember({"text", "lines"}));

  std::string oracle_scenario;
  std::string oracle_source;
  auto* oracle_cmd = app.add_subcommand("oracle", "Flat shortest-path costs over the whole network");
  oracle_cmd->add_option("scenario", oracle_scenario, "Scenario file")->required();
  oracle_cmd->add_option("--source", oracle_source, "Source router");

  LsaOptions lsa;
  auto* lsa_cmd = app.add_subcommand("lsa", "Decode overlay LSAs, or encode their text form");
  lsa_cmd->add_option("file", lsa.file, "Input file")->required();
  lsa_cmd->add_option("--version", lsa.version)->check(CLI::IsMember({"v2", "v3"}));
  lsa_cmd->add_flag("--hex", lsa.hex, "Bytes are hex text");
  lsa_cmd->add_option("--scenario", lsa.scenario, "Scenario for router names");
  lsa_cmd->add_flag("--encode", lsa.encode, "Encode the text form instead of decoding");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand(
      "gen", "Check random scenarios against the oracle (seed: AREA_OVERLAY_SEED)");
  gen_cmd->add_option("--count", gen.count)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--max-routers", gen.max_routers)->check(CLI::Range(2, 254));
  gen_cmd->add_option("--max-areas", gen.max_areas)->check(CLI::Range(1, 254));
  gen_cmd->add_flag("--asymmetric", gen.asymmetric);
  gen_cmd->add_flag("--print", gen.print, "Print the scenarios instead of checking them");

  std::vector<std::string> argv_storage{"area-overlay"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run, out);
    if (*oracle_cmd) {
      const NetworkSpec spec = load_spec(oracle_scenario);
      out << render_oracle(spec, resolve_router(spec, oracle_source));
      return kExitOk;
    }
    if (*lsa_cmd) return cmd_lsa(lsa, out);
    return cmd_gen(gen, out);
  } catch (const CliFailure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitScenario;
  }
}

}  // namespace area_overlay
