#include "stasim/experiment.hpp"

#include "stasim/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <type_traits>

namespace stasim {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kExperiments{"transfer",     "qst_trajectory", "ssh_realtime",
                                            "ssh_virtual",  "ssh_sweep",      "lattice"};

[[noreturn]] void key_error(const std::string& key, const std::string& what) {
  throw ConfigError("key '" + key + "': " + what);
}

template <typename T>
void read(const json& j, const std::string& key, T& out) {
  const json& v = j.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) key_error(key, "expected true or false");
    out = v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) key_error(key, "expected a string");
    out = v.get<std::string>();
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    if (!v.is_array()) key_error(key, "expected an array of numbers");
    out.clear();
    for (const auto& x : v) {
      if (!x.is_number()) key_error(key, "expected an array of numbers");
      out.push_back(x.get<double>());
    }
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) key_error(key, "expected an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_unsigned() || v.get<long long>() >= 0) {
        out = v.get<T>();
        return;
      }
      key_error(key, "expected a non-negative integer");
    } else {
      out = v.get<T>();
    }
  } else {
    if (!v.is_number()) key_error(key, "expected a number");
    out = v.get<T>();
  }
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) key_error(key, what);
}

/// 1-based line of the first occurrence of "key" in text, or 0.
int locate(const std::string& text, const std::string& message) {
  const auto a = message.find('\'');
  const auto b = message.find('\'', a + 1);
  if (a == std::string::npos || b == std::string::npos) return 0;
  const std::string needle = "\"" + message.substr(a + 1, b - a - 1) + "\"";
  const auto pos = text.find(needle);
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

std::vector<std::string> metadata(const ExperimentConfig& c, const std::string& what) {
  return {std::string("stasim ") + STASIM_VERSION + " " + what, "config " + c.to_json().dump()};
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

bool is_critical(double alpha) { return std::abs(alpha - 1.0) < 1e-6; }

// Quasi-momentum sweeps stop short of pi at the gap closure.
constexpr double kCriticalEnd = pi - 1e-6;

TrajectoryRecord propagate(const ExperimentConfig& c, const StaProtocol& protocol, int levels,
                           bool lindblad, const EvolutionOptions& options) {
  const auto h = rotating_frame_sampler(protocol, c.anharmonic(), levels);
  const auto rho0 = DensityMatrix3::basis(0);
  if (lindblad) return evolve_lindblad(h, rho0, protocol.duration(), c.dissipation_spec(), options);
  return evolve_unitary(h, rho0, protocol.duration(), options);
}

}  // namespace

void ExperimentConfig::validate() const {
  require(std::find(kExperiments.begin(), kExperiments.end(), experiment) != kExperiments.end(),
          "experiment",
          "must be one of transfer, qst_trajectory, ssh_realtime, ssh_virtual, ssh_sweep, lattice");
  require(omega_mhz > 0.0, "omega_mhz", "must be positive");
  require(omega2_mhz > 0.0, "omega2_mhz", "must be positive");
  require(delta2_mhz < 0.0, "delta2_mhz", "must be negative");
  require(omega10_mhz > 0.0, "omega10_mhz", "must be positive");
  require(t1_ns > 0.0, "t1_ns", "must be positive");
  require(t2star_ns > 0.0 && t2star_ns <= 2.0 * t1_ns, "t2star_ns", "must lie in (0, 2 T1]");
  require(schedule == "linear" || schedule == "hanning", "schedule", "must be linear or hanning");
  require(ta_transfer_ns > 0.0, "ta_transfer_ns", "must be positive");
  require(ta_ssh_ns > 0.0, "ta_ssh_ns", "must be positive");
  require(dt_ns > 0.0 && dt_ns <= 0.01, "dt_ns", "must lie in (0, 0.01]");
  require(record_ns >= dt_ns, "record_ns", "must be at least dt_ns");
  require(levels == 2 || levels == 3, "levels", "must be 2 or 3");
  require(lab_dt_ns > 0.0 && lab_dt_ns <= 0.01, "lab_dt_ns", "must lie in (0, 0.01]");
  require(probes >= 2, "probes", "must be at least 2");
  require(!alphas.empty(), "alphas", "must not be empty");
  for (double a : alphas) require(a >= 0.0, "alphas", "entries must be non-negative");
  require(tomography == "exact" || tomography == "sampled", "tomography",
          "must be exact or sampled");
  require(shots > 0, "shots", "must be positive");
  const std::pair<const char*, double> fs[]{{"f0", f0},   {"f1", f1},   {"f2", f2},
                                            {"f0p", f0p}, {"f1p", f1p}, {"f2p", f2p}};
  for (const auto& [k, v] : fs) require(v >= 0.0 && v <= 1.0, k, "must lie in [0, 1]");
  require(cells >= 2, "cells", "must be at least 2");
  require(alpha_min >= 0.0, "alpha_min", "must be non-negative");
  require(alpha_max >= alpha_min, "alpha_max", "must not be below alpha_min");
  require(alpha_steps >= 2, "alpha_steps", "must be at least 2");
  require(edge_alpha >= 0.0, "edge_alpha", "must be non-negative");
  require(edge_threshold > 0.0, "edge_threshold", "must be positive");
  require(end_cells >= 0, "end_cells", "must be non-negative");
  require(!output_dir.empty(), "output_dir", "must not be empty");
}

ordered_json ExperimentConfig::to_json() const {
  ordered_json j;
  j["experiment"] = experiment;
  j["omega_mhz"] = omega_mhz;
  j["omega2_mhz"] = omega2_mhz;
  j["delta2_mhz"] = delta2_mhz;
  j["omega10_mhz"] = omega10_mhz;
  j["t1_ns"] = t1_ns;
  j["t2star_ns"] = t2star_ns;
  j["schedule"] = schedule;
  j["ta_transfer_ns"] = ta_transfer_ns;
  j["ta_ssh_ns"] = ta_ssh_ns;
  j["dt_ns"] = dt_ns;
  j["record_ns"] = record_ns;
  j["dissipation"] = dissipation;
  j["drag"] = drag;
  j["levels"] = levels;
  j["lab_frame"] = lab_frame;
  j["lab_dt_ns"] = lab_dt_ns;
  j["probes"] = probes;
  j["alphas"] = alphas;
  j["tomography"] = tomography;
  j["shots"] = shots;
  j["seed"] = seed;
  j["f0"] = f0;
  j["f1"] = f1;
  j["f2"] = f2;
  j["f0p"] = f0p;
  j["f1p"] = f1p;
  j["f2p"] = f2p;
  j["cells"] = cells;
  j["alpha_min"] = alpha_min;
  j["alpha_max"] = alpha_max;
  j["alpha_steps"] = alpha_steps;
  j["edge_alpha"] = edge_alpha;
  j["edge_threshold"] = edge_threshold;
  j["end_cells"] = end_cells;
  j["output_dir"] = output_dir;
  return j;
}

void ExperimentConfig::merge(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration root must be a JSON object");
  json full = json(to_json());
  for (const auto& [key, value] : j.items()) {
    if (!full.contains(key)) key_error(key, "unknown configuration key");
    full[key] = value;
  }
  ExperimentConfig c;
  read(full, "experiment", c.experiment);
  read(full, "omega_mhz", c.omega_mhz);
  read(full, "omega2_mhz", c.omega2_mhz);
  read(full, "delta2_mhz", c.delta2_mhz);
  read(full, "omega10_mhz", c.omega10_mhz);
  read(full, "t1_ns", c.t1_ns);
  read(full, "t2star_ns", c.t2star_ns);
  read(full, "schedule", c.schedule);
  read(full, "ta_transfer_ns", c.ta_transfer_ns);
  read(full, "ta_ssh_ns", c.ta_ssh_ns);
  read(full, "dt_ns", c.dt_ns);
  read(full, "record_ns", c.record_ns);
  read(full, "dissipation", c.dissipation);
  read(full, "drag", c.drag);
  read(full, "levels", c.levels);
  read(full, "lab_frame", c.lab_frame);
  read(full, "lab_dt_ns", c.lab_dt_ns);
  read(full, "probes", c.probes);
  read(full, "alphas", c.alphas);
  read(full, "tomography", c.tomography);
  read(full, "shots", c.shots);
  read(full, "seed", c.seed);
  read(full, "f0", c.f0);
  read(full, "f1", c.f1);
  read(full, "f2", c.f2);
  read(full, "f0p", c.f0p);
  read(full, "f1p", c.f1p);
  read(full, "f2p", c.f2p);
  read(full, "cells", c.cells);
  read(full, "alpha_min", c.alpha_min);
  read(full, "alpha_max", c.alpha_max);
  read(full, "alpha_steps", c.alpha_steps);
  read(full, "edge_alpha", c.edge_alpha);
  read(full, "edge_threshold", c.edge_threshold);
  read(full, "end_cells", c.end_cells);
  read(full, "output_dir", c.output_dir);
  *this = c;
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c.merge(j);
    c.validate();
  } catch (const ConfigError& e) {
    const int line = locate(text, e.what());
    if (line == 0) throw;
    throw ConfigError("line " + std::to_string(line) + ": " + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read configuration file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return from_text(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void ExperimentConfig::apply_environment() {
  if (const char* dir = std::getenv("STASIM_OUTPUT_DIR"); dir && *dir) output_dir = dir;
}

ReadoutMode ExperimentConfig::readout_mode(std::uint64_t cell) const {
  if (tomography == "exact") return ReadoutMode::exact();
  return ReadoutMode::sampling(shots, seed ^ cell);
}

AngleShape ExperimentConfig::transfer_shape() const {
  return schedule == "linear" ? AngleShape::linear() : AngleShape::hanning();
}

// ---------------------------------------------------------------------------

const TransferVariant& TransferSummary::find(const std::string& name) const {
  for (const auto& v : variants)
    if (v.name == name) return v;
  throw InvalidArgument("no transfer variant named " + name);
}

TransferSummary run_transfer(const ExperimentConfig& c) {
  c.validate();
  TransferSummary out;
  const fs::path dir = c.output_dir;
  const double omega = mhz(c.omega_mhz);
  const double ta = c.ta_transfer_ns;
  const auto options = c.evolution();

  struct Plan {
    AngleKind kind;
    bool drag;
  };
  std::vector<Plan> plans{{AngleKind::Linear, false}, {AngleKind::Hanning, false}};
  if (c.drag) plans.push_back({AngleKind::Hanning, true});

  for (const auto& plan : plans) {
    ProtocolSpec ps;
    ps.shape = plan.kind == AngleKind::Linear ? AngleShape::linear() : AngleShape::hanning();
    ps.duration = ta;
    ps.omega2 = omega;
    ps.delta2 = mhz(c.delta2_mhz);
    const std::string base = std::string(plan.kind == AngleKind::Linear ? "linear" : "hanning") +
                             (plan.drag ? "_drag" : "");
    for (int levels : {2, 3}) {
      // DRAG only acts through |2>
      ps.drag = plan.drag && levels == 3;
      const StaProtocol protocol(ps);
      for (bool lindblad : {false, true}) {
        if (lindblad && !c.dissipation) continue;
        TransferVariant v;
        v.name = base + "_" + std::to_string(levels) + "level_" + (lindblad ? "lindblad" : "unitary");
        v.kind = plan.kind;
        v.levels = levels;
        v.lindblad = lindblad;
        v.drag = plan.drag;
        v.record = propagate(c, protocol, levels, lindblad, options);
        if (ps.drag) add_dframe_projections(v.record, protocol);
        const fs::path file = dir / ("transfer_" + v.name + ".csv");
        write_trajectory(file, v.record, metadata(c, "transfer " + v.name));
        out.files.push_back(file);
        out.variants.push_back(std::move(v));
      }
    }
    ps.drag = plan.drag;
    const StaProtocol protocol(ps);
    const auto fields = protocol.sample(c.dt_ns);
    const fs::path ffile = dir / ("transfer_field_" + base + ".csv");
    write_field_schedule(ffile, fields, metadata(c, "field " + base));
    const fs::path dfile = dir / ("transfer_drive_" + base + ".csv");
    write_drive_program(dfile, synthesize_drive(fields, mhz(c.omega10_mhz)),
                        metadata(c, "drive " + base));
    out.files.insert(out.files.end(), {ffile, dfile});
  }

  const auto n = samples_for_step(ta, c.dt_ns);
  out.leakage_linear = leakage_estimate(make_angle_schedule(AngleShape::linear(), ta, n), omega,
                                        mhz(c.delta2_mhz));
  out.leakage_hanning = leakage_estimate(make_angle_schedule(AngleShape::hanning(), ta, n), omega,
                                         mhz(c.delta2_mhz));
  if (out.leakage_linear.weak_anharmonicity)
    out.notes.push_back("|delta2| < 3 omega: leakage estimate is unreliable");
  for (const auto& [name, est] : {std::pair{"linear", &out.leakage_linear},
                                  std::pair{"hanning", &out.leakage_hanning}}) {
    const fs::path file = dir / (std::string("transfer_leakage_") + name + ".csv");
    CsvWriter w(file, metadata(c, std::string("leakage ") + name + " endpoint " +
                                      format_number(est->endpoint)),
                {"t_ns", "P2_estimate"});
    for (std::size_t i = 0; i < est->t.size(); ++i) w.row({est->t[i], est->p2[i]});
    out.files.push_back(file);
  }

  if (c.lab_frame) {
    ProtocolSpec ps;
    ps.duration = ta;
    ps.omega2 = omega;
    ps.delta2 = mhz(c.delta2_mhz);
    const StaProtocol protocol(ps);
    const auto spec = c.anharmonic();
    const auto rot = evolve_unitary(rotating_frame_sampler(protocol, spec), DensityMatrix3::basis(0),
                                    ta, options);
    const DriveProgram drive = synthesize_drive(protocol.sample(c.lab_dt_ns), spec.omega10);
    const auto lab = evolve_unitary(
        [&](double t) { return lab_hamiltonian(drive, spec, t); }, DensityMatrix3::basis(0), ta,
        {c.lab_dt_ns, c.record_ns});
    const fs::path file = dir / "transfer_lab_vs_rotating.csv";
    CsvWriter w(file, metadata(c, "lab-frame cross-check"),
                {"t_ns", "P0_rot", "P1_rot", "P2_rot", "P0_lab", "P1_lab", "P2_lab"});
    out.lab_frame_deviation = 0.0;
    for (std::size_t i = 0; i < std::min(rot.points.size(), lab.points.size()); ++i) {
      const auto& a = rot.points[i].populations;
      const auto& b = lab.points[i].populations;
      out.lab_frame_deviation = std::max(out.lab_frame_deviation, (a - b).cwiseAbs().maxCoeff());
      w.row({rot.points[i].t, a(0), a(1), a(2), b(0), b(1), b(2)});
    }
    out.files.push_back(file);
  }
  return out;
}

QstSummary run_qst_trajectory(const ExperimentConfig& c) {
  c.validate();
  if (c.drag && c.schedule == "linear")
    throw ConfigError("key 'drag': DRAG needs the hanning schedule");
  QstSummary out;
  const fs::path dir = c.output_dir;
  for (bool drag_on : {false, true}) {
    ProtocolSpec ps;
    ps.shape = c.transfer_shape();
    ps.duration = c.ta_transfer_ns;
    ps.omega2 = mhz(c.omega_mhz);
    ps.delta2 = mhz(c.delta2_mhz);
    ps.drag = drag_on && c.levels == 3;
    const StaProtocol protocol(ps);
    const auto rec = propagate(c, protocol, c.levels, c.dissipation, c.evolution());
    Readout readout(c.calibration(), c.readout_mode(drag_on ? 1 : 0));
    const std::string name = drag_on ? "drag_on" : "drag_off";
    const fs::path file = dir / ("qst_" + name + ".csv");
    CsvWriter w(file, metadata(c, "qst " + name),
                {"t_ns", "x", "y", "z", "xD", "yD", "zD", "purity", "x_ideal", "z_ideal"});
    for (const auto& p : rec.points) {
      const Matrix3cd d = ps.drag ? dframe_propagator(protocol.drag(p.t)) : Matrix3cd::Identity();
      const auto f = tomography_pipeline(p.rho, d, readout);
      const double th = protocol.angle(p.t).theta;
      const Vector3d ideal(std::sin(th), 0.0, std::cos(th));
      const Vector3d got(f.dframe.x, f.dframe.y, f.dframe.z);
      if (drag_on) {
        out.max_abs_yd_drag_on = std::max(out.max_abs_yd_drag_on, std::abs(f.dframe.y));
        out.max_ideal_deviation = std::max(out.max_ideal_deviation, (got - ideal).norm());
      } else {
        out.max_abs_y_drag_off = std::max(out.max_abs_y_drag_off, std::abs(f.rframe.y));
      }
      w.row({p.t, f.rframe.x, f.rframe.y, f.rframe.z, f.dframe.x, f.dframe.y, f.dframe.z,
             f.dframe.purity(), ideal.x(), ideal.z()});
    }
    out.files.push_back(file);
  }
  return out;
}

TopologyResult simulate_topology(const ExperimentConfig& c, double alpha, SshMode mode,
                                 std::uint64_t cell) {
  const double omega2 = mhz(c.omega2_mhz);
  const int intervals = c.probes - 1;
  const double end = is_critical(alpha) ? kCriticalEnd : pi;

  ProtocolSpec ps;
  ps.duration = c.ta_ssh_ns;
  ps.omega1 = alpha * omega2;
  ps.omega2 = omega2;
  ps.delta2 = mhz(c.delta2_mhz);
  ps.drag = c.drag && c.levels == 3;

  std::vector<double> theta, theta_q;
  auto probe = [&](const StaProtocol& protocol, const TrajectoryPoint& p, Readout& readout) {
    const Matrix3cd d = ps.drag ? dframe_propagator(protocol.drag(p.t)) : Matrix3cd::Identity();
    const auto f = tomography_pipeline(p.rho, d, readout);
    theta.push_back(protocol.angle(p.t).theta);
    theta_q.push_back(experimental_thetaq(f.dframe.x, f.dframe.z));
  };

  if (mode == SshMode::Realtime) {
    ps.shape = AngleShape::hanning(end);
    const StaProtocol protocol(ps);
    EvolutionOptions options{c.dt_ns, c.ta_ssh_ns / intervals};
    const auto rec = propagate(c, protocol, c.levels, c.dissipation, options);
    Readout readout(c.calibration(), c.readout_mode(cell));
    for (const auto& p : rec.points) probe(protocol, p, readout);
  } else {
    for (int m = 0; m <= intervals; ++m) {
      ps.shape = AngleShape::virtual_hanning(m, intervals);
      ps.shape.theta_end = std::min(ps.shape.theta_end, end);
      const StaProtocol protocol(ps);
      EvolutionOptions options{c.dt_ns, c.ta_ssh_ns};
      const auto rec = propagate(c, protocol, c.levels, c.dissipation, options);
      Readout readout(c.calibration(), c.readout_mode(cell * c.probes + m));
      probe(protocol, rec.final_point(), readout);
    }
  }
  return topology_from_curve(alpha, std::move(theta), std::move(theta_q));
}

namespace {

void write_topology(const ExperimentConfig& c, SshSummary& out, const std::string& stem) {
  const fs::path dir = c.output_dir;
  const fs::path curves = dir / (stem + "_curves.csv");
  {
    CsvWriter w(curves, metadata(c, stem + " curves"), {"alpha", "theta", "theta_q", "theta_q_exact"});
    for (std::size_t i = 0; i < out.simulated.size(); ++i) {
      const auto& s = out.simulated[i];
      const auto& e = out.exact[i];
      for (std::size_t k = 0; k < s.theta.size(); ++k)
        w.row({s.alpha, s.theta[k], s.theta_q[k], e.theta_q[k]});
    }
  }
  const fs::path topo = dir / (stem + "_topology.csv");
  {
    CsvWriter w(topo, metadata(c, stem + " topology"),
                {"alpha", "nu_endpoint", "nu_integral", "Ch", "nu_exact", "Ch_exact"});
    for (std::size_t i = 0; i < out.simulated.size(); ++i) {
      const auto& s = out.simulated[i];
      const auto& e = out.exact[i];
      w.row({s.alpha, s.nu.endpoint, s.nu.integral, s.chern, e.nu.endpoint, e.chern});
    }
  }
  out.files.insert(out.files.end(), {curves, topo});
}

SshSummary topology_runs(const ExperimentConfig& c, const std::vector<double>& alphas, SshMode mode,
                         const std::string& stem) {
  SshSummary out;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    out.simulated.push_back(simulate_topology(c, alphas[i], mode, i));
    out.exact.push_back(exact_topology(alphas[i], out.simulated.back().theta));
    if (is_critical(alphas[i]))
      out.notes.push_back("alpha = 1 is the gap-closing point; the sweep stops at theta = pi - 1e-6");
  }
  write_topology(c, out, stem);
  return out;
}

}  // namespace

SshSummary run_ssh(const ExperimentConfig& c, SshMode mode) {
  c.validate();
  return topology_runs(c, c.alphas, mode, mode == SshMode::Realtime ? "ssh_realtime" : "ssh_virtual");
}

SshSummary run_sweep(const ExperimentConfig& c) {
  c.validate();
  return topology_runs(c, linspace(c.alpha_min, c.alpha_max, c.alpha_steps), SshMode::Realtime,
                       "ssh_sweep");
}

LatticeSummary run_lattice(const ExperimentConfig& c) {
  c.validate();
  LatticeSummary out;
  const fs::path dir = c.output_dir;
  const double omega2 = mhz(c.omega2_mhz);
  const int quarter = c.end_cells > 0 ? c.end_cells : (c.cells + 3) / 4;

  const fs::path open_file = dir / "lattice_open_scan.csv";
  const fs::path periodic_file = dir / "lattice_periodic_scan.csv";
  {
    CsvWriter wo(open_file, metadata(c, "open lattice"),
                 {"alpha", "eigenvalue_index", "E", "edge_weight_L", "edge_weight_R"});
    CsvWriter wp(periodic_file, metadata(c, "periodic lattice"),
                 {"alpha", "eigenvalue_index", "E", "E_bulk"});
    for (double alpha : linspace(c.alpha_min, c.alpha_max, c.alpha_steps)) {
      const auto params = SshParams::from_alpha(alpha, omega2);
      const auto open = lattice_spectrum(c.cells, params, Boundary::Open);
      out.midgap_counts.emplace_back(alpha, count_midgap_states(open, params));
      const int n = static_cast<int>(open.energies.size());
      for (int i = 0; i < n; ++i) {
        out.chiral_asymmetry =
            std::max(out.chiral_asymmetry, std::abs(open.energies(i) + open.energies(n - 1 - i)));
        const Eigen::VectorXd v = open.states.col(i);
        const double left = v.head(2 * quarter).squaredNorm();
        const double right = v.tail(2 * quarter).squaredNorm();
        wo.row({alpha, double(i), open.energies(i), left, right});
      }
      const auto periodic = lattice_spectrum(c.cells, params, Boundary::Periodic);
      const Eigen::VectorXd bulk = bulk_band_multiset(c.cells, params);
      out.periodic_residual =
          std::max(out.periodic_residual, (periodic.energies - bulk).cwiseAbs().maxCoeff());
      for (int i = 0; i < n; ++i) wp.row({alpha, double(i), periodic.energies(i), bulk(i)});
    }
  }
  out.files.insert(out.files.end(), {open_file, periodic_file});

  const auto params = SshParams::from_alpha(c.edge_alpha, omega2);
  const auto open = lattice_spectrum(c.cells, params, Boundary::Open);
  out.edge = edge_state_report(open, params, c.edge_threshold, c.end_cells);
  const fs::path edge_file = dir / "lattice_edge_states.csv";
  {
    CsvWriter w(edge_file, metadata(c, "edge states at alpha " + format_number(c.edge_alpha)),
                {"E", "edge_weight_L", "edge_weight_R"});
    for (const auto& s : out.edge.states) w.row({s.energy, s.weight_left, s.weight_right});
  }
  out.files.push_back(edge_file);
  if (out.edge.psi_a.size() > 0) {
    const fs::path psi_file = dir / "lattice_edge_wavefunctions.csv";
    CsvWriter w(psi_file, metadata(c, "chiral edge combinations"), {"site", "psi_A", "psi_B"});
    for (int s = 0; s < out.edge.psi_a.size(); ++s)
      w.row({double(s), out.edge.psi_a(s), out.edge.psi_b(s)});
    out.files.push_back(psi_file);
  }
  return out;
}

}  // namespace stasim
