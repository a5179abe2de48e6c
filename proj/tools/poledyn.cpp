// poledyn: run scenarios, verify the boundary laws, scan trough amplitudes
// and draw the circular-mirror caustic.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "poledyn/cli/config.hpp"
#include "poledyn/cli/experiments.hpp"
#include "poledyn/cli/output.hpp"
#include "poledyn/cli/runner.hpp"
#include "poledyn/cli/scenario.hpp"
#include "poledyn/kernels.hpp"

namespace fs = std::filesystem;
using namespace poledyn;
using namespace poledyn::cli;

namespace {

struct Common {
  std::string out_dir = "out";
  std::vector<std::string> tol;
  std::vector<std::string> formats;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out-dir,-o", c.out_dir, "Directory for output files")->capture_default_str();
  cmd->add_option("--tol", c.tol, "Integrator override key=value (repeatable)");
  cmd->add_option("--format", c.formats, "Output formats: csv, json, svg (repeatable)")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  cmd->add_option("--threads,-j", c.threads, "Worker threads, 0 for all cores");
  cmd->add_option("--seed", c.seed, "Seed for randomized ensemble directions");
}

RunOptions run_options(const Common& c) {
  RunOptions o;
  o.out_dir = c.out_dir;
  o.threads = c.threads;
  o.seed = c.seed;
  for (const auto& f : c.formats) o.formats.push_back(format_from_string(f));
  for (const auto& kv : c.tol) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error("--tol expects key=value, got '" + kv + "'");
    o.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return o;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir + ": " + ec.message());
}

std::string in_dir(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamics of point poles with position-dependent strengths"};
  app.require_subcommand(1);
  std::string preset_dir = default_preset_dir();
  app.add_option("--preset-dir", preset_dir, "Directory holding *.scn presets")->capture_default_str();
  std::string isa;
  app.add_option("--isa", isa, "Force the pairwise kernel: scalar, avx2, neon");

  auto* presets = app.add_subcommand("presets", "List the bundled scenario presets");

  Common run_c;
  std::string scenario_arg;
  auto* run = app.add_subcommand("run", "Integrate a scenario and write its outputs");
  run->add_option("scenario", scenario_arg, "Preset name or scenario file")->required();
  add_common(run, run_c);

  Common ver_c;
  std::string law;
  std::vector<double> theta_deg, ratios;
  auto* verify = app.add_subcommand("verify", "Compare simulated boundary laws with closed forms");
  verify->add_option("law", law, "snell, reflection, leapfrog or rainbow")
      ->required()
      ->check(CLI::IsMember({"snell", "reflection", "leapfrog", "rainbow"}));
  verify->add_option("--theta-deg", theta_deg, "Incidence angles in degrees");
  verify->add_option("--ratios", ratios, "s2/s1 ratios (snell)");
  add_common(verify, ver_c);

  Common amp_c;
  std::string amp_scenario = "trough";
  std::vector<double> amp_y0, amp_theta;
  auto* amp = app.add_subcommand("amplitude-scan", "Zigzag amplitude against departure angle");
  amp->add_option("scenario", amp_scenario, "Trough preset or file")->capture_default_str();
  amp->add_option("--y0", amp_y0, "Initial Im z of the pair midpoint");
  amp->add_option("--theta", amp_theta, "Departure angles as theta/pi in (0, 1)");
  add_common(amp, amp_c);

  Common cau_c;
  std::string cau_scenario = "caustic-arc";
  int cau_count = 0;
  auto* cau = app.add_subcommand("caustic", "Pairs reflected by a circular arc mirror");
  cau->add_option("scenario", cau_scenario, "Arc mirror preset or file")->capture_default_str();
  cau->add_option("--count", cau_count, "Number of pairs (overrides the scenario)");
  add_common(cau, cau_c);

  std::string drift_scenario, drift_dir;
  auto* drift = app.add_subcommand("drift", "Recompute drift reports from written outputs");
  drift->add_option("scenario", drift_scenario, "Preset name or scenario file")->required();
  drift->add_option("--dir", drift_dir, "Output directory of an earlier run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitConfig;
  }

  try {
    if (!isa.empty()) {
      if (isa == "scalar") kernels::set_active(kernels::Isa::Scalar);
      else if (isa == "avx2") kernels::set_active(kernels::Isa::Avx2);
      else if (isa == "neon") kernels::set_active(kernels::Isa::Neon);
      else throw Error("unknown ISA '" + isa + "'");
    }

    if (*presets) {
      for (const auto& name : list_presets(preset_dir)) {
        std::string desc;
        try {
          desc = load_scenario(resolve_scenario(name, preset_dir)).description;
        } catch (const Error& e) {
          desc = std::string("(invalid: ") + e.what() + ")";
        }
        std::printf("%-18s %s\n", name.c_str(), desc.c_str());
      }
      return kExitClean;
    }

    if (*run) {
      const RunOptions opt = run_options(run_c);
      const Scenario sc = load_scenario(resolve_scenario(scenario_arg, preset_dir));
      const RunResult res = simulate(sc, opt);
      const auto files = write_outputs(res, opt);
      std::size_t early = 0;
      for (const auto& m : res.members) early += m.trajectory.terminated_early() ? 1 : 0;
      std::printf("%s: %zu member(s), %zu ended early, %zu file(s) in %s (%.2f s)\n",
                  sc.name.c_str(), res.members.size(), early, files.size(), opt.out_dir.c_str(),
                  res.wall_seconds);
      return res.exit_code();
    }

    if (*verify) {
      const RunOptions opt = run_options(ver_c);
      IntegratorConfig cfg = verify_config();
      for (const auto& [k, v] : opt.overrides) apply_integrator_setting(cfg, k, v);
      cfg.validate();
      VerifyReport rep;
      if (law == "snell") {
        SnellGrid g;
        if (!theta_deg.empty()) g.theta1_deg = theta_deg;
        if (!ratios.empty()) g.ratios = ratios;
        rep = verify_snell(g, cfg, opt.threads);
      } else if (law == "reflection") {
        ReflectionGrid g;
        if (!theta_deg.empty()) g.theta1_deg = theta_deg;
        rep = verify_reflection(g, cfg, opt.threads);
      } else if (law == "leapfrog") {
        cfg.t_end = 1.2;
        for (const auto& [k, v] : opt.overrides) apply_integrator_setting(cfg, k, v);
        rep = verify_leapfrog(LeapfrogSetup{}, cfg);
      } else {
        rep = verify_rainbow(RainbowSetup{}, cfg, opt.threads);
      }
      const std::string table = verify_table(rep);
      std::fputs(table.c_str(), stdout);
      ensure_dir(opt.out_dir);
      if (opt.wants(Format::Csv)) write_file(in_dir(opt.out_dir, "verify_" + law + ".csv"), table);
      if (opt.wants(Format::Json)) write_file(in_dir(opt.out_dir, "verify_" + law + ".json"), verify_json(rep));
      return rep.pass ? kExitClean : kExitPartial;
    }

    if (*amp) {
      const RunOptions opt = run_options(amp_c);
      const Scenario sc = load_scenario(resolve_scenario(amp_scenario, preset_dir));
      AmplitudeOptions ao;
      if (!amp_y0.empty()) ao.y0 = amp_y0;
      ao.theta_over_pi = amp_theta;
      const auto curves = amplitude_scan(sc, ao, opt);
      const std::string csv = amplitude_csv(curves);
      std::fputs(csv.c_str(), stdout);
      ensure_dir(opt.out_dir);
      if (opt.wants(Format::Csv)) write_file(in_dir(opt.out_dir, "amplitude.csv"), csv);
      if (opt.wants(Format::Svg)) write_file(in_dir(opt.out_dir, "amplitude.svg"), amplitude_svg(curves));
      bool clean = true;
      for (const auto& c : curves) {
        for (const auto& p : c.points) clean = clean && p.confined && p.terminal == "horizon";
      }
      return clean ? kExitClean : kExitPartial;
    }

    if (*cau) {
      const RunOptions opt = run_options(cau_c);
      const Scenario sc = load_scenario(resolve_scenario(cau_scenario, preset_dir));
      const CausticResult c = caustic(sc, cau_count, opt);
      write_outputs(c.run, opt);
      if (opt.wants(Format::Svg)) write_file(in_dir(opt.out_dir, "caustic.svg"), caustic_svg(c));
      if (opt.wants(Format::Json)) write_file(in_dir(opt.out_dir, "caustic.json"), caustic_json(c));
      std::size_t flagged = 0;
      for (const auto& r : c.rays) {
        flagged += r.straddles_endpoint ? 1 : 0;
        std::printf("x0=%+.4f heading=%8.3f deg axis_crossing=%.6f predicted=%.6f%s\n", r.x0,
                    r.heading_after * 180.0 / kPi, r.axis_crossing, r.predicted,
                    r.straddles_endpoint ? "  (straddles arc endpoint)" : "");
      }
      return flagged == 0 ? c.run.exit_code() : kExitPartial;
    }

    if (*drift) {
      const Scenario sc = load_scenario(resolve_scenario(drift_scenario, preset_dir));
      const auto bad = recheck_drift(sc, drift_dir);
      if (bad.empty()) {
        std::printf("drift reports reproduce exactly\n");
        return kExitClean;
      }
      for (auto i : bad) std::printf("member %zu: drift report differs\n", i);
      return kExitPartial;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "poledyn: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "poledyn: %s\n", e.what());
    return kExitConfig;
  }
  return kExitClean;
}
