#include "stasim/csv.hpp"
#include "stasim/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

using namespace stasim;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kIntegrator = 3, kCalibration = 4 };

struct Overrides {
  std::optional<std::string> config_path;
  std::map<std::string, std::string> values;
};

void add_config_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option_function<std::string>(
      "--config", [&o](const std::string& p) { o.config_path = p; }, "JSON configuration file");
  const auto defaults = ExperimentConfig{}.to_json();
  for (const auto& [key, value] : defaults.items()) {
    if (key == "experiment") continue;
    const std::string k = key;
    auto* opt = cmd->add_option_function<std::string>(
        "--" + k, [&o, k](const std::string& v) { o.values[k] = v; }, "overrides '" + k + "'");
    opt->type_name(value.is_string() ? "TEXT" : value.is_array() ? "JSON" : "VALUE");
  }
}

ExperimentConfig resolve(const Overrides& o, const std::string& experiment) {
  ExperimentConfig c = o.config_path ? ExperimentConfig::from_file(*o.config_path) : ExperimentConfig{};
  c.apply_environment();
  const auto defaults = ExperimentConfig{}.to_json();
  json patch = json::object();
  for (const auto& [key, text] : o.values) {
    if (defaults.at(key).is_string()) {
      patch[key] = text;
      continue;
    }
    try {
      patch[key] = json::parse(text);
    } catch (const json::parse_error&) {
      throw ConfigError("flag --" + key + ": cannot parse '" + text + "'");
    }
  }
  if (!experiment.empty()) patch["experiment"] = experiment;
  c.merge(patch);
  c.validate();
  return c;
}

void report_files(const RunFiles& r) {
  for (const auto& n : r.notes) std::cerr << "note: " << n << '\n';
  for (const auto& f : r.files) std::cout << "wrote " << f.string() << '\n';
}

void print_topology(const SshSummary& s) {
  std::cout << "alpha,nu_endpoint,nu_integral,Ch,nu_exact,Ch_exact\n";
  for (std::size_t i = 0; i < s.simulated.size(); ++i) {
    const auto& a = s.simulated[i];
    const auto& e = s.exact[i];
    std::cout << format_number(a.alpha) << ',' << format_number(a.nu.endpoint) << ','
              << format_number(a.nu.integral) << ',' << format_number(a.chern) << ','
              << format_number(e.nu.endpoint) << ',' << format_number(e.chern) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven three-level qubit simulator: STA/DRAG transfers, tomography, SSH topology"};
  app.set_version_flag("--version", std::string(STASIM_VERSION));
  app.require_subcommand(1);

  Overrides o;
  std::string ssh_mode = "realtime";
  auto* transfer = app.add_subcommand("transfer", "population transfer under sinusoidal and Hanning STA fields");
  auto* qst = app.add_subcommand("qst", "Bloch trajectories with and without DRAG");
  auto* ssh = app.add_subcommand("ssh", "theta_q curves, winding and Chern numbers for each alpha");
  ssh->add_option("--mode", ssh_mode, "realtime or virtual trajectories")
      ->check(CLI::IsMember({"realtime", "virtual"}));
  auto* sweep = app.add_subcommand("sweep", "realtime topology sweep over alpha_min .. alpha_max");
  auto* lattice = app.add_subcommand("lattice", "finite SSH chain spectra and edge states");
  auto* dump = app.add_subcommand("dump-config", "print the effective configuration as JSON");
  for (auto* cmd : {transfer, qst, ssh, sweep, lattice, dump}) add_config_options(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (dump->parsed()) {
      std::cout << resolve(o, "").to_json().dump(2) << '\n';
    } else if (transfer->parsed()) {
      const auto s = run_transfer(resolve(o, "transfer"));
      report_files(s);
      for (const auto& v : s.variants) {
        const auto& p = v.record.final_point().populations;
        std::cout << v.name << ": P0=" << format_number(p(0)) << " P1=" << format_number(p(1))
                  << " P2=" << format_number(p(2)) << '\n';
      }
      std::cout << "leakage estimate (linear, endpoint): " << format_number(s.leakage_linear.endpoint)
                << '\n';
      if (s.lab_frame_deviation >= 0.0)
        std::cout << "lab vs rotating max population deviation: "
                  << format_number(s.lab_frame_deviation) << '\n';
    } else if (qst->parsed()) {
      const auto s = run_qst_trajectory(resolve(o, "qst_trajectory"));
      report_files(s);
      std::cout << "max|y| without DRAG: " << format_number(s.max_abs_y_drag_off) << '\n'
                << "max|yD| with DRAG: " << format_number(s.max_abs_yd_drag_on) << '\n';
    } else if (ssh->parsed()) {
      const bool realtime = ssh_mode == "realtime";
      const auto s = run_ssh(resolve(o, realtime ? "ssh_realtime" : "ssh_virtual"),
                             realtime ? SshMode::Realtime : SshMode::Virtual);
      report_files(s);
      print_topology(s);
    } else if (sweep->parsed()) {
      const auto s = run_sweep(resolve(o, "ssh_sweep"));
      report_files(s);
      print_topology(s);
    } else if (lattice->parsed()) {
      const auto s = run_lattice(resolve(o, "lattice"));
      report_files(s);
      std::cout << "edge states at edge_alpha: " << s.edge.states.size() << '\n'
                << "periodic residual: " << format_number(s.periodic_residual) << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kConfig;
  } catch (const IntegratorFailure& e) {
    std::cerr << "integrator failure: " << e.what() << '\n';
    return kIntegrator;
  } catch (const InvalidCalibration& e) {
    std::cerr << "calibration error: " << e.what() << '\n';
    return kCalibration;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
