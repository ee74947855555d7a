// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "stasim/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace stasim;

namespace {

const double kOmega = mhz(30.0);
const double kDelta2 = mhz(-200.0);
const double kTransfer = 15.0;
const double kSsh = 20.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

StaProtocol transfer_protocol(AngleShape shape, bool drag) {
  ProtocolSpec ps;
  ps.shape = shape;
  ps.duration = kTransfer;
  ps.omega2 = kOmega;
  ps.delta2 = kDelta2;
  ps.drag = drag;
  return StaProtocol(ps);
}

TrajectoryRecord transfer(AngleShape shape, bool drag, int levels, bool lindblad, double dt = 0.005,
                          const DensityMatrix3& rho0 = DensityMatrix3::basis(0)) {
  const auto protocol = transfer_protocol(shape, drag);
  const auto h = rotating_frame_sampler(protocol, AnharmonicSpec{}, levels);
  const EvolutionOptions o{dt, 0.5};
  if (lindblad) return evolve_lindblad(h, rho0, kTransfer, DissipationSpec{}, o);
  return evolve_unitary(h, rho0, kTransfer, o);
}

double step(double alpha) { return alpha < 1.0 ? 1.0 : 0.0; }

void c1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto protocol = transfer_protocol(AngleShape::hanning(), false);
  const auto rec = evolve_unitary(rotating_frame_sampler(protocol, AnharmonicSpec{}, 2),
                                  DensityMatrix3::basis(0), kTransfer);
  const double elapsed = seconds_since(t0);
  double worst = 0.0;
  for (const auto& p : rec.points)
    worst = std::max(worst, std::abs(p.populations(1) - 0.5 * (1 - std::cos(protocol.angle(p.t).theta))));
  const double p1 = rec.final_point().populations(1);
  o.detail << "P1(Ta)=" << p1 << " max|P1-(1-cos)/2|=" << worst << " t=" << elapsed << "s";
  o.require(p1 >= 1 - 1e-6, "P1(Ta) >= 1-1e-6");
  o.require(worst <= 1e-6, "per-sample match 1e-6");
  o.require(elapsed < 0.1, "runtime < 0.1 s");
}

void c2(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = transfer(AngleShape::linear(), false, 3, true).final_point().populations;
  const double elapsed = seconds_since(t0);
  o.detail << "P1=" << p(1) << " P2=" << p(2) << " t=" << elapsed << "s";
  o.require(p(1) >= 0.88 && p(1) <= 0.93, "P1 in [0.88, 0.93]");
  o.require(p(2) >= 0.015 && p(2) <= 0.05, "P2 in [0.015, 0.05]");
  o.require(elapsed < 0.5, "runtime < 0.5 s");
}

Vector3d hanning_lindblad() { return transfer(AngleShape::hanning(), false, 3, true).final_point().populations; }

void c3(Outcome& o) {
  const auto p = hanning_lindblad();
  o.detail << "P1=" << p(1) << " P2=" << p(2);
  o.require(p(1) >= 0.90 && p(1) <= 0.95, "P1 in [0.90, 0.95]");
  o.require(p(2) <= 0.015, "P2 <= 0.015");
}

void c4(Outcome& o) {
  const auto base = hanning_lindblad();
  const auto p = transfer(AngleShape::hanning(), true, 3, true).final_point().populations;
  o.detail << "P1=" << p(1) << " P2=" << p(2);
  o.require(p(1) >= 0.93 && p(1) <= 0.97, "P1 in [0.93, 0.97]");
  o.require(p(2) <= 0.006, "P2 <= 0.006");
  o.require(p(1) > base(1) && p(2) < base(2), "better than Hanning without DRAG");
}

void c5(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const double lin = transfer(AngleShape::linear(), false, 3, false).final_point().populations(2);
  const double han = transfer(AngleShape::hanning(), false, 3, false).final_point().populations(2);
  const double drag = transfer(AngleShape::hanning(), true, 3, false).final_point().populations(2);
  const auto est = leakage_estimate(
      make_angle_schedule(AngleShape::linear(), kTransfer, samples_for_step(kTransfer, 0.005)), kOmega,
      kDelta2);
  const double elapsed = seconds_since(t0);
  const double ratio = lin / est.endpoint;
  o.detail << "P2 linear=" << lin << " hanning=" << han << " drag=" << drag
           << " estimate=" << est.endpoint << " ratio=" << ratio << " t=" << elapsed << "s";
  o.require(lin > han && han > drag, "ordering");
  o.require(ratio <= 2.5 && ratio >= 1 / 2.5, "estimate within factor 2.5");
  o.require(elapsed < 1.0, "runtime < 1 s");
}

void c6(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig c;
  double worst_nu = 0.0, worst_ch = 0.0;
  std::uint64_t cell = 0;
  for (double a : {0.0, 0.3, 0.6, 0.8, 1.2, 1.4, 1.6, 2.0}) {
    const auto r = simulate_topology(c, a, SshMode::Realtime, cell++);
    worst_nu = std::max({worst_nu, std::abs(r.nu.endpoint - step(a)), std::abs(r.nu.integral - step(a))});
    worst_ch = std::max(worst_ch, std::abs(r.chern - step(a)));
  }
  const double elapsed = seconds_since(t0);
  o.detail << "max|nu-step|=" << worst_nu << " max|Ch-step|=" << worst_ch << " t=" << elapsed << "s";
  o.require(worst_nu <= 0.05, "nu within 0.05");
  o.require(worst_ch <= 0.05, "Ch within 0.05");
  o.require(elapsed < 30.0, "runtime < 30 s");
}

void c7(Outcome& o) {
  const ExperimentConfig c;
  double worst = 0.0;
  std::uint64_t cell = 0;
  for (double a : {0.0, 0.6, 1.2, 1.6}) {
    const auto real = simulate_topology(c, a, SshMode::Realtime, cell);
    const auto virt = simulate_topology(c, a, SshMode::Virtual, cell++);
    worst = std::max(worst, std::abs(real.nu.endpoint - virt.nu.endpoint));
  }
  o.detail << "max|nu_virtual-nu_realtime|=" << worst;
  o.require(worst <= 0.05, "difference <= 0.05");
}

void c8(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = SshParams::from_alpha(0.5, kOmega);
  const auto rep = edge_state_report(lattice_spectrum(40, p, Boundary::Open), p);
  double localization = 1.0;
  for (const auto& s : rep.states) localization = std::min(localization, s.weight_left + s.weight_right);
  if (rep.states.size() == 2) localization = std::min({localization, rep.psi_a_left_a, rep.psi_b_right_b});
  const auto q = SshParams::from_alpha(1.5, kOmega);
  const auto none = edge_state_report(lattice_spectrum(40, q, Boundary::Open), q);
  double residual = 0.0;
  for (double a : {0.0, 0.5, 1.0, 1.5, 2.0})
    residual = std::max(residual, periodic_spectrum_residual(40, SshParams::from_alpha(a, kOmega)));
  const double elapsed = seconds_since(t0);
  o.detail << "edge states(0.5)=" << rep.states.size() << " localization=" << localization
           << " edge states(1.5)=" << none.states.size() << " periodic residual=" << residual
           << " t=" << elapsed << "s";
  o.require(rep.states.size() == 2, "two mid-gap states at alpha=0.5");
  o.require(localization >= 0.99, "end localization >= 0.99");
  o.require(none.states.empty(), "none at alpha=1.5");
  o.require(residual <= 1e-9, "periodic spectrum within 1e-9");
  o.require(elapsed < 1.0, "runtime < 1 s");
}

Matrix3cd random_density(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Matrix3cd a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = Complex<double>(n(rng), n(rng));
  const Matrix3cd rho = a * a.adjoint();
  return rho / rho.trace();
}

void c9(Outcome& o) {
  std::mt19937_64 rng(20240601);
  const AngleShape shapes[] = {AngleShape::linear(), AngleShape::hanning()};
  double herm = 0.0, trace = 0.0, min_eig = 1.0;
  for (int k = 0; k < 100; ++k) {
    const auto rho0 = DensityMatrix3(random_density(rng));
    const bool han = k % 2 == 1;
    const auto rec = transfer(shapes[k % 2], han && k % 4 == 3, 3, true, 0.005, rho0);
    for (const auto& p : rec.points) {
      const Matrix3cd& m = p.rho.matrix();
      herm = std::max(herm, (m - m.adjoint()).cwiseAbs().maxCoeff());
      trace = std::max(trace, std::abs(m.trace() - 1.0));
      min_eig = std::min(min_eig, p.rho.eigenvalues().minCoeff());
    }
  }
  o.detail << "runs=100 max|rho-rho^H|=" << herm << " max|tr-1|=" << trace << " min eig=" << min_eig;
  o.require(herm <= 1e-10, "Hermitian within 1e-10");
  o.require(trace <= 1e-9, "trace within 1e-9");
  o.require(min_eig >= -1e-8, "eigenvalues >= -1e-8");
}

void c10(Outcome& o) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  Readout exact;
  double bloch = 0.0;
  for (int k = 0; k < 100; ++k) {
    Eigen::Vector3cd psi(Complex<double>(n(rng), n(rng)), Complex<double>(n(rng), n(rng)), 0.0);
    Matrix3cd rho = psi * psi.adjoint() / psi.squaredNorm();
    // mix with the maximally mixed qubit state for non-pure samples
    const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    Matrix3cd mixed = Matrix3cd::Zero();
    mixed(0, 0) = mixed(1, 1) = 0.5;
    rho = w * rho + (1 - w) * mixed;
    const auto b = qst_qubit(DensityMatrix3(rho), exact);
    const Vector3d trace_formula(2 * rho(0, 1).real(), -2 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real());
    bloch = std::max(bloch, (Vector3d(b.x, b.y, b.z) - trace_formula).cwiseAbs().maxCoeff());
  }
  const CalibrationTable t;
  double readout = 0.0;
  std::exponential_distribution<double> e;
  for (int k = 0; k < 100; ++k) {
    Vector3d p(e(rng), e(rng), e(rng));
    p /= p.sum();
    const auto inv = readout_invert3(readout_forward(p, t, Bias::Im), readout_forward(p, t, Bias::ImPrime), t);
    readout = std::max(readout, (inv.clamped - p).cwiseAbs().maxCoeff());
  }
  o.detail << "Bloch error=" << bloch << " readout round trip=" << readout;
  o.require(bloch <= 1e-12, "Bloch vector within 1e-12");
  o.require(readout <= 1e-12, "readout round trip within 1e-12");
}

void c11(Outcome& o) {
  double d_end = 0.0;
  const auto check_d = [&](const StaProtocol& protocol) {
    for (double t : {0.0, protocol.duration()}) {
      const Matrix3cd d = dframe_propagator(protocol.drag(t));
      d_end = std::max(d_end, (d - Matrix3cd::Identity()).cwiseAbs().maxCoeff());
    }
  };
  check_d(transfer_protocol(AngleShape::hanning(), true));
  for (double a : {0.0, 0.6, 1.4}) {
    ProtocolSpec ps;
    ps.duration = kSsh;
    ps.omega1 = a * kOmega;
    ps.omega2 = kOmega;
    ps.delta2 = kDelta2;
    ps.drag = true;
    check_d(StaProtocol(ps));
  }

  double dot = 0.0, cross = 0.0;
  for (std::size_t n : {std::size_t(41), std::size_t(3001), std::size_t(4001), std::size_t(100001)}) {
    for (double a : {0.0, 0.3, 0.6, 0.8, 1.2, 1.4, 1.6, 2.0}) {
      const double ta = a == 0.0 ? kTransfer : kSsh;
      for (const auto& shape : {AngleShape::hanning(), AngleShape::linear()}) {
        const auto s = make_angle_schedule(shape, ta, n);
        const auto ref = reference_field_ssh(s, a * kOmega, kOmega);
        const auto cd = counter_diabatic_field(ref);
        for (std::size_t i = 0; i < s.samples.size(); ++i) {
          dot = std::max(dot, std::abs(ref.samples[i].b.dot(cd.samples[i].b)));
          const auto q = field_polar_angle(s.samples[i], a * kOmega, kOmega);
          cross = std::max(cross, (counter_diabatic_general(q.value, q.rate, 0.0, 0.0) - cd.samples[i].b).norm());
        }
      }
    }
  }
  o.detail << "max|D-I| at endpoints=" << d_end << " max|B0.Bcd|=" << dot << " max|cross-angle|=" << cross;
  o.require(d_end <= 1e-10, "D(0)=D(Ta)=I within 1e-10");
  o.require(dot <= 1e-12, "B0.Bcd within 1e-12");
  o.require(cross <= 1e-10, "cross product vs angle form within 1e-10");
}

void c12(Outcome& o) {
  const double h = 1e-4;
  double rel_rate = 0.0, rel_accel = 0.0, rel_q = 0.0;
  const AngleShape shapes[] = {AngleShape::linear(), AngleShape::hanning(), AngleShape::virtual_hanning(17, 40)};
  for (const auto& shape : shapes) {
    double peak_rate = 0.0, peak_accel = 0.0, err_rate = 0.0, err_accel = 0.0;
    for (int i = 1; i < 200; ++i) {
      const double t = kSsh * i / 200.0;
      const auto a = evaluate_angle(shape, kSsh, t);
      const auto ap = evaluate_angle(shape, kSsh, t + h), am = evaluate_angle(shape, kSsh, t - h);
      peak_rate = std::max(peak_rate, std::abs(a.rate));
      peak_accel = std::max(peak_accel, std::abs(a.accel));
      err_rate = std::max(err_rate, std::abs((ap.theta - am.theta) / (2 * h) - a.rate));
      err_accel = std::max(err_accel, std::abs((ap.rate - am.rate) / (2 * h) - a.accel));
    }
    rel_rate = std::max(rel_rate, err_rate / peak_rate);
    if (peak_accel > 0.0) rel_accel = std::max(rel_accel, err_accel / peak_accel);
  }
  for (double alpha : {0.0, 0.6, 1.4}) {
    double peak = 0.0, err = 0.0;
    for (int i = 1; i < 200; ++i) {
      const double t = kSsh * i / 200.0;
      auto q = [&](double tt) {
        return field_polar_angle(evaluate_angle(AngleShape::hanning(), kSsh, tt), alpha * kOmega, kOmega);
      };
      peak = std::max(peak, std::abs(q(t).rate));
      err = std::max(err, std::abs((q(t + h).value - q(t - h).value) / (2 * h) - q(t).rate));
    }
    rel_q = std::max(rel_q, err / peak);
  }
  const double u1 = transfer(AngleShape::hanning(), true, 3, false).final_point().populations(1);
  const double u2 = transfer(AngleShape::hanning(), true, 3, false, 0.0025).final_point().populations(1);
  const double l1 = transfer(AngleShape::hanning(), true, 3, true).final_point().populations(1);
  const double l2 = transfer(AngleShape::hanning(), true, 3, true, 0.0025).final_point().populations(1);
  o.detail << "rel err rate=" << rel_rate << " accel=" << rel_accel << " theta_q rate=" << rel_q
           << " dt-halving unitary=" << std::abs(u1 - u2) << " lindblad=" << std::abs(l1 - l2);
  o.require(rel_rate <= 1e-5 && rel_accel <= 1e-5 && rel_q <= 1e-5, "derivatives within relative 1e-5");
  o.require(std::abs(u1 - u2) <= 1e-8, "unitary dt-halving <= 1e-8");
  o.require(std::abs(l1 - l2) <= 1e-7, "Lindblad dt-halving <= 1e-7");
}

void c13(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto protocol = transfer_protocol(AngleShape::hanning(), false);
  const AnharmonicSpec spec;
  const auto rot = evolve_unitary(rotating_frame_sampler(protocol, spec), DensityMatrix3::basis(0), kTransfer);
  const double lab_dt = 2e-4;
  const DriveProgram drive = synthesize_drive(protocol.sample(lab_dt), spec.omega10);
  const auto lab = evolve_unitary([&](double t) { return lab_hamiltonian(drive, spec, t); },
                                  DensityMatrix3::basis(0), kTransfer, {lab_dt, 0.5});
  double worst = 0.0;
  for (std::size_t i = 0; i < rot.points.size(); ++i)
    worst = std::max(worst, (rot.points[i].populations - lab.points[i].populations).cwiseAbs().maxCoeff());
  const double elapsed = seconds_since(t0);
  o.detail << "samples=" << rot.points.size() << " max population deviation=" << worst << " t=" << elapsed << "s";
  o.require(rot.points.size() == lab.points.size(), "matching sample grids");
  o.require(worst <= 2e-2, "deviation <= 2e-2");
  o.require(elapsed < 30.0, "runtime < 30 s");
}

void c14(Outcome& o) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0), lc(-3.0, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng), z = u(rng), c = std::pow(10.0, lc(rng));
    worst = std::max(worst, std::abs(experimental_thetaq(c * x, c * z) - experimental_thetaq(x, z)));
  }
  o.detail << "max deviation over 1000 scalings=" << worst;
  o.require(worst <= 1e-12, "invariance within 1e-12");
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<void(Outcome&)>>> criteria{
      {1, c1}, {2, c2}, {3, c3}, {4, c4},   {5, c5},   {6, c6},   {7, c7},
      {8, c8}, {9, c9}, {10, c10}, {11, c11}, {12, c12}, {13, c13}, {14, c14}};
  const auto start = std::chrono::steady_clock::now();
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
  }
  const double total = seconds_since(start);
  std::printf("total runtime %.2f s; %d of %zu criteria failed\n", total, failed, criteria.size());
  if (total >= 120.0) {
    std::printf("suite runtime exceeds 2 minutes\n");
    ++failed;
  }
  return failed == 0 ? 0 : 1;
}
