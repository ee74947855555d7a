#include "stasim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stasim {

using cd = Complex<double>;

void DissipationSpec::validate() const {
  if (!(t1 > 0.0) || !(t2star > 0.0)) throw InvalidArgument("T1 and T2* must be positive");
  if (gamma_phi() < 0.0) throw InvalidArgument("T2* must not exceed 2 T1");
}

std::vector<Matrix3cd> DissipationSpec::collapse_operators() const {
  validate();
  Matrix3cd l1 = Matrix3cd::Zero();
  l1(0, 1) = 1.0 / std::sqrt(t1);
  Matrix3cd l2 = Matrix3cd::Zero();
  l2(1, 2) = std::sqrt(2.0 / t1);
  Matrix3cd lphi = Matrix3cd::Zero();
  const double a = std::sqrt(2.0 * gamma_phi());
  lphi(1, 1) = a;
  lphi(2, 2) = 2.0 * a;
  return {l1, l2, lphi};
}

HamiltonianFn rotating_frame_sampler(const StaProtocol& protocol, const AnharmonicSpec& spec,
                                     int levels) {
  return [protocol, spec, levels](double t) {
    return rotating_hamiltonian(protocol.field(t), spec, levels);
  };
}

namespace {

struct Integration {
  std::size_t steps = 0;
  std::size_t steps_per_record = 0;
  double dt = 0.0;
};

Integration plan(double duration, const EvolutionOptions& o) {
  if (!(duration > 0.0)) throw InvalidArgument("evolution time must be positive");
  if (!(o.dt > 0.0) || o.dt > 0.01 + 1e-15) throw InvalidArgument("time step must be in (0, 0.01] ns");
  if (!(o.record_every > 0.0)) throw InvalidArgument("recording interval must be positive");
  Integration p;
  p.steps_per_record = std::max<std::size_t>(1, std::llround(o.record_every / o.dt));
  const auto records = std::max<long long>(1, std::llround(duration / o.record_every));
  if (std::abs(static_cast<double>(records) * o.record_every - duration) > 1e-9) {
    // recording interval does not divide the run; record only the endpoints
    p.steps = std::max<std::size_t>(1, std::llround(duration / o.dt));
    p.steps_per_record = p.steps;
  } else {
    p.steps = p.steps_per_record * static_cast<std::size_t>(records);
  }
  p.dt = duration / static_cast<double>(p.steps);
  return p;
}

template <typename Rhs>
TrajectoryRecord integrate(const Rhs& rhs, const DensityMatrix3& rho0, const Integration& p) {
  TrajectoryRecord rec;
  rec.dt = p.dt;
  Matrix3cd rho = rho0.matrix();
  const double tr0 = rho.trace().real();
  double min_eig = 0.0;
  auto record = [&](double t) {
    auto point = TrajectoryPoint{t, DensityMatrix3::trusted(rho, Frame::Rotating),
                                 rho.diagonal().real(), std::nullopt};
    min_eig = std::min(min_eig, point.rho.eigenvalues().minCoeff());
    rec.points.push_back(std::move(point));
  };
  record(0.0);
  const double h = p.dt;
  for (std::size_t i = 0; i < p.steps; ++i) {
    const double t = h * static_cast<double>(i);
    const Matrix3cd k1 = rhs(t, rho);
    const Matrix3cd k2 = rhs(t + 0.5 * h, rho + 0.5 * h * k1);
    const Matrix3cd k3 = rhs(t + 0.5 * h, rho + 0.5 * h * k2);
    const Matrix3cd k4 = rhs(t + h, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rec.max_trace_drift = std::max(rec.max_trace_drift, std::abs(rho.trace().real() - tr0));
    if (!rho.allFinite()) throw IntegratorFailure("density matrix became non-finite");
    if ((i + 1) % p.steps_per_record == 0) record(h * static_cast<double>(i + 1));
  }
  rec.min_eigenvalue = min_eig;
  return rec;
}

template <typename Rhs>
TrajectoryRecord run_with_retry(const Rhs& rhs, const DensityMatrix3& rho0, double duration,
                                const EvolutionOptions& options) {
  if (auto err = DensityMatrix3::check(rho0.matrix())) throw InvalidArgument(*err);
  Integration p = plan(duration, options);
  TrajectoryRecord rec = integrate(rhs, rho0, p);
  if (rec.max_trace_drift > 1e-6) {
    p.steps *= 2;
    p.steps_per_record *= 2;
    p.dt *= 0.5;
    rec = integrate(rhs, rho0, p);
    if (rec.max_trace_drift > 1e-6)
      throw IntegratorFailure("trace drift " + std::to_string(rec.max_trace_drift) +
                              " persists after halving the time step");
  }
  if (rec.min_eigenvalue < -1e-4)
    throw IntegratorFailure("density matrix lost positivity (eigenvalue " +
                            std::to_string(rec.min_eigenvalue) + ")");
  return rec;
}

}  // namespace

TrajectoryRecord evolve_unitary(const HamiltonianFn& h, const DensityMatrix3& rho0, double duration,
                                const EvolutionOptions& options) {
  const cd minus_i(0.0, -1.0);
  auto rhs = [&](double t, const Matrix3cd& rho) -> Matrix3cd {
    const Matrix3cd hm = h(t);
    return minus_i * (hm * rho - rho * hm);
  };
  return run_with_retry(rhs, rho0, duration, options);
}

TrajectoryRecord evolve_lindblad(const HamiltonianFn& h, const DensityMatrix3& rho0,
                                 double duration, const DissipationSpec& dissipation,
                                 const EvolutionOptions& options) {
  const auto ls = dissipation.collapse_operators();
  Matrix3cd decay = Matrix3cd::Zero();
  for (const auto& l : ls) decay += l.adjoint() * l;
  decay *= 0.5;
  const cd minus_i(0.0, -1.0);
  auto rhs = [&](double t, const Matrix3cd& rho) -> Matrix3cd {
    const Matrix3cd hm = h(t);
    Matrix3cd out = minus_i * (hm * rho - rho * hm) - decay * rho - rho * decay;
    for (const auto& l : ls) out.noalias() += l * rho * l.adjoint();
    return out;
  };
  return run_with_retry(rhs, rho0, duration, options);
}

void add_dframe_projections(TrajectoryRecord& record, const StaProtocol& protocol) {
  for (auto& p : record.points) {
    const Matrix3cd d = dframe_propagator(protocol.drag(p.t));
    p.dframe_bloch = dframe_transform(p.rho, d).qubit_bloch();
  }
}

LeakageEstimate leakage_estimate(const AngleSchedule& schedule, double omega, double delta2) {
  if (delta2 == 0.0) throw InvalidArgument("anharmonicity must be nonzero");
  LeakageEstimate est;
  est.weak_anharmonicity = std::abs(delta2) < 3.0 * omega;
  est.t.reserve(schedule.samples.size());
  est.p2.reserve(schedule.samples.size());
  for (const auto& a : schedule.samples) {
    const double half = std::sin(0.5 * a.theta);
    const double s = std::sin(a.theta);
    const double coupling2 = 0.5 * half * half * (omega * omega * s * s + a.rate * a.rate);
    const double detuning = delta2 - 1.5 * omega * std::cos(a.theta) - 0.5 * omega;
    est.t.push_back(a.t);
    est.p2.push_back(coupling2 / (detuning * detuning));
  }
  const double rate_end = schedule.at(schedule.duration).rate;
  est.endpoint = rate_end * rate_end / (2.0 * (delta2 + omega) * (delta2 + omega));
  return est;
}

StaComparison sta_vs_bare_comparison(double omega, double duration, const AngleShape& shape,
                                     double dt) {
  const AnharmonicSpec spec;
  EvolutionOptions options;
  options.dt = dt;
  options.record_every = duration;
  auto run = [&](bool cd_on) {
    ProtocolSpec ps;
    ps.shape = shape;
    ps.duration = duration;
    ps.omega2 = omega;
    ps.counter_diabatic = cd_on;
    const StaProtocol protocol(ps);
    const auto rec =
        evolve_unitary(rotating_frame_sampler(protocol, spec, 2), DensityMatrix3::basis(0), duration,
                       options);
    return rec.final_point().populations[1];
  };
  return {run(true), run(false)};
}

}  // namespace stasim
