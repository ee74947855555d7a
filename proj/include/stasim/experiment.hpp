#pragma once

#include "stasim/dynamics.hpp"
#include "stasim/ssh.hpp"
#include "stasim/tomography.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace stasim {

/// Flat, human-readable run configuration. Frequencies are f/2pi in MHz, times in ns.
struct ExperimentConfig {
  std::string experiment = "transfer";

  double omega_mhz = 30.0;
  double omega2_mhz = 30.0;
  double delta2_mhz = -200.0;
  double omega10_mhz = 5700.0;
  double t1_ns = 310.0;
  double t2star_ns = 120.0;

  std::string schedule = "hanning";
  double ta_transfer_ns = 15.0;
  double ta_ssh_ns = 20.0;
  double dt_ns = 0.005;
  double record_ns = 0.5;
  bool dissipation = true;
  bool drag = true;
  int levels = 3;
  bool lab_frame = false;
  double lab_dt_ns = 2e-4;

  int probes = 41;
  std::vector<double> alphas{0.0, 0.3, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 2.0};

  std::string tomography = "exact";
  int shots = 3000;
  std::uint64_t seed = 20240601;
  double f0 = 0.065, f1 = 0.925, f2 = 0.93;
  double f0p = 0.003, f1p = 0.093, f2p = 0.831;

  int cells = 40;
  double alpha_min = 0.0;
  double alpha_max = 2.0;
  int alpha_steps = 81;
  double edge_alpha = 0.5;
  double edge_threshold = 1e-3;
  int end_cells = 0;

  std::string output_dir = "stasim_out";

  /// Throws ConfigError with the offending key.
  void validate() const;

  nlohmann::ordered_json to_json() const;
  /// Overlays the keys present in j; unknown keys are rejected.
  void merge(const nlohmann::json& j);

  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig from_file(const std::filesystem::path& path);
  /// STASIM_OUTPUT_DIR replaces output_dir when set.
  void apply_environment();

  AnharmonicSpec anharmonic() const { return {mhz(omega10_mhz), mhz(delta2_mhz)}; }
  DissipationSpec dissipation_spec() const { return {t1_ns, t2star_ns}; }
  CalibrationTable calibration() const { return {{f0, f1, f2}, {f0p, f1p, f2p}}; }
  EvolutionOptions evolution() const { return {dt_ns, record_ns}; }
  ReadoutMode readout_mode(std::uint64_t cell) const;
  AngleShape transfer_shape() const;
};

struct RunFiles {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> notes;
};

struct TransferVariant {
  std::string name;
  AngleKind kind = AngleKind::Hanning;
  int levels = 3;
  bool lindblad = false;
  bool drag = false;
  TrajectoryRecord record;
};

struct TransferSummary : RunFiles {
  std::vector<TransferVariant> variants;
  LeakageEstimate leakage_linear;
  LeakageEstimate leakage_hanning;
  /// Largest population difference between lab- and rotating-frame runs; negative when skipped.
  double lab_frame_deviation = -1.0;

  const TransferVariant& find(const std::string& name) const;
};

struct QstSummary : RunFiles {
  double max_abs_y_drag_off = 0.0;
  double max_abs_yd_drag_on = 0.0;
  double max_ideal_deviation = 0.0;
};

struct SshSummary : RunFiles {
  std::vector<TopologyResult> simulated;
  std::vector<TopologyResult> exact;
};

struct LatticeSummary : RunFiles {
  std::vector<std::pair<double, int>> midgap_counts;
  EdgeReport edge;
  double periodic_residual = 0.0;
  double chiral_asymmetry = 0.0;
};

enum class SshMode { Realtime, Virtual };

/// Variants are named "<linear|hanning>[_drag]_<2|3>level_<unitary|lindblad>".
TransferSummary run_transfer(const ExperimentConfig& config);
QstSummary run_qst_trajectory(const ExperimentConfig& config);
SshSummary run_ssh(const ExperimentConfig& config, SshMode mode);
/// Realtime topology sweep over alpha_min .. alpha_max in alpha_steps points.
SshSummary run_sweep(const ExperimentConfig& config);
LatticeSummary run_lattice(const ExperimentConfig& config);

/// Simulated theta_q curve of one realtime or virtual SSH run.
TopologyResult simulate_topology(const ExperimentConfig& config, double alpha, SshMode mode,
                                 std::uint64_t cell);

}  // namespace stasim
