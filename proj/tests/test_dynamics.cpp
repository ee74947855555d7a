#include "stasim/dynamics.hpp"

#include <doctest.h>

#include <cmath>

using namespace stasim;
using doctest::Approx;
using cd = std::complex<double>;

namespace {

const double kOmega = mhz(30.0);

HamiltonianFn zero_hamiltonian() {
  return [](double) { return Matrix3cd::Zero().eval(); };
}

TrajectoryRecord run_transfer(AngleShape shape, bool drag, int levels, bool lindblad, double dt = 0.005) {
  ProtocolSpec ps;
  ps.shape = shape;
  ps.drag = drag;
  const StaProtocol protocol(ps);
  const auto h = rotating_frame_sampler(protocol, AnharmonicSpec{}, levels);
  const EvolutionOptions o{dt, 0.5};
  if (lindblad) return evolve_lindblad(h, DensityMatrix3::basis(0), 15.0, DissipationSpec{}, o);
  return evolve_unitary(h, DensityMatrix3::basis(0), 15.0, o);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("dissipation model") {
  const DissipationSpec d;
  CHECK(d.gamma_phi() == Approx(1.0 / 120 - 1.0 / 620));
  const auto ls = d.collapse_operators();
  REQUIRE(ls.size() == 3);
  CHECK(std::norm(ls[0](0, 1)) == Approx(1.0 / 310));
  CHECK(std::norm(ls[1](1, 2)) == Approx(2.0 / 310));
  CHECK(ls[2](2, 2).real() == Approx(2.0 * std::sqrt(2.0 * d.gamma_phi())));
  CHECK_THROWS_AS((DissipationSpec{100.0, 250.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((DissipationSpec{0.0, 100.0}.validate()), InvalidArgument);
}

TEST_CASE("free evolution leaves the state unchanged") {
  const auto rho0 = DensityMatrix3::pure(Eigen::Vector3cd(1, cd(0.3, 0.2), 0.5));
  const auto rec = evolve_unitary(zero_hamiltonian(), rho0, 20.0);
  CHECK(rec.points.size() == 41);
  for (const auto& p : rec.points) CHECK((p.rho.matrix() - rho0.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Rabi oscillation") {
  const double omega = kOmega;
  auto h = [omega](double) {
    Matrix3cd m = Matrix3cd::Zero();
    m(0, 1) = m(1, 0) = omega / 2;
    return m;
  };
  const double t_pi = pi / omega;
  const auto rec = evolve_unitary(h, DensityMatrix3::basis(0), t_pi, {0.005, t_pi});
  CHECK(std::abs(rec.final_point().populations(1) - 1.0) <= 1e-8);
  const auto rec2 = evolve_unitary(h, DensityMatrix3::basis(0), 10.0, {0.005, 0.5});
  for (const auto& p : rec2.points)
    CHECK(std::abs(p.populations(1) - std::pow(std::sin(omega * p.t / 2), 2)) <= 1e-8);
}

TEST_CASE("ideal two-level STA follows the reference path") {
  ProtocolSpec ps;
  const StaProtocol protocol(ps);
  const auto rec = evolve_unitary(rotating_frame_sampler(protocol, AnharmonicSpec{}, 2),
                                  DensityMatrix3::basis(0), 15.0);
  CHECK(rec.final_point().populations(1) >= 1 - 1e-6);
  for (const auto& p : rec.points) {
    const double th = protocol.angle(p.t).theta;
    CHECK(std::abs(p.populations(1) - 0.5 * (1 - std::cos(th))) <= 1e-6);
    // instantaneous eigenstate of the reference field
    const Eigen::Vector3cd up(std::cos(th / 2), std::sin(th / 2), 0);
    const Matrix3cd target = up * up.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix3cd> es(p.rho.matrix() - target, Eigen::EigenvaluesOnly);
    CHECK(0.5 * es.eigenvalues().cwiseAbs().sum() <= 1e-6);
  }
}

TEST_CASE("amplitude damping and dephasing") {
  const DissipationSpec d;
  const auto decay = evolve_lindblad(zero_hamiltonian(), DensityMatrix3::basis(1), 20.0, d);
  for (const auto& p : decay.points) CHECK(std::abs(p.populations(1) - std::exp(-p.t / 310.0)) <= 1e-6);

  const auto plus = DensityMatrix3::pure(Eigen::Vector3cd(1, 1, 0));
  const auto deph = evolve_lindblad(zero_hamiltonian(), plus, 20.0, d);
  for (const auto& p : deph.points)
    CHECK(std::abs(std::abs(p.rho(0, 1)) - 0.5 * std::exp(-p.t / 120.0)) <= 1e-6);
}

TEST_CASE("trace, Hermiticity and positivity") {
  const auto u = run_transfer(AngleShape::hanning(), true, 3, false);
  CHECK(u.max_trace_drift <= 1e-9);
  const auto l = run_transfer(AngleShape::hanning(), true, 3, true);
  CHECK(l.max_trace_drift <= 1e-6);
  CHECK(l.min_eigenvalue >= -1e-6);
  for (const auto& p : l.points) {
    CHECK((p.rho.matrix() - p.rho.matrix().adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(p.populations.sum() == Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("three-level Hanning STA with DRAG under dissipation") {
  const auto p = run_transfer(AngleShape::hanning(), true, 3, true).final_point().populations;
  CHECK(p(1) >= 0.92);
  CHECK(p(1) <= 0.98);
  CHECK(p(2) <= 0.01);
}

TEST_CASE("step-size convergence") {
  const double u1 = run_transfer(AngleShape::hanning(), true, 3, false).final_point().populations(1);
  const double u2 =
      run_transfer(AngleShape::hanning(), true, 3, false, 0.0025).final_point().populations(1);
  CHECK(std::abs(u1 - u2) <= 1e-8);
  const double l1 = run_transfer(AngleShape::hanning(), true, 3, true).final_point().populations(1);
  const double l2 =
      run_transfer(AngleShape::hanning(), true, 3, true, 0.0025).final_point().populations(1);
  CHECK(std::abs(l1 - l2) <= 1e-7);
}

TEST_CASE("leakage ordering without dissipation") {
  const double linear = run_transfer(AngleShape::linear(), false, 3, false).final_point().populations(2);
  const double hanning = run_transfer(AngleShape::hanning(), false, 3, false).final_point().populations(2);
  const double drag = run_transfer(AngleShape::hanning(), true, 3, false).final_point().populations(2);
  CHECK(linear > hanning);
  CHECK(hanning > drag);
}

TEST_CASE("leakage estimate") {
  const double delta2 = mhz(-200.0);
  const auto han = leakage_estimate(make_angle_schedule(AngleShape::hanning(), 15.0, 3001), kOmega, delta2);
  CHECK(std::abs(han.endpoint) < 1e-30);
  CHECK_FALSE(han.weak_anharmonicity);

  const auto lin = leakage_estimate(make_angle_schedule(AngleShape::linear(), 15.0, 3001), kOmega, delta2);
  const double rate = pi / 15.0;
  CHECK(lin.endpoint == Approx(rate * rate / (2 * std::pow(delta2 + kOmega, 2))).epsilon(1e-12));
  CHECK(lin.endpoint == Approx(0.0192).epsilon(2e-3));
  // the closed form is the curve evaluated at theta = pi
  CHECK(lin.p2.back() == Approx(lin.endpoint).epsilon(1e-10));
  CHECK(lin.p2.front() == 0.0);

  const auto weak = leakage_estimate(make_angle_schedule(AngleShape::linear(), 15.0, 11), 1e-9, delta2);
  CHECK(weak.endpoint == Approx(rate * rate / (2 * delta2 * delta2)).epsilon(1e-8));
  const auto strong = leakage_estimate(make_angle_schedule(AngleShape::linear(), 15.0, 11), 0.5, delta2);
  CHECK(strong.weak_anharmonicity);
}

TEST_CASE("counter-diabatic driving against the bare sweep") {
  const auto fast = sta_vs_bare_comparison(kOmega, 15.0, AngleShape::hanning());
  CHECK(fast.with_cd >= 1 - 1e-6);
  CHECK(fast.without_cd < fast.with_cd);
  const auto slow = sta_vs_bare_comparison(kOmega, 1000.0, AngleShape::hanning());
  CHECK(slow.without_cd >= 0.999);
  const auto bare = sta_vs_bare_comparison(1e-7, 15.0, AngleShape::hanning());
  CHECK(bare.with_cd >= 1 - 1e-6);
}

TEST_CASE("integrator guards") {
  CHECK_THROWS_AS(evolve_unitary(zero_hamiltonian(), DensityMatrix3::basis(0), 1.0, {0.02, 0.5}),
                  InvalidArgument);
  CHECK_THROWS_AS(evolve_unitary(zero_hamiltonian(), DensityMatrix3::basis(0), -1.0), InvalidArgument);
  // an anti-Hermitian part inflates the coherence past positivity
  auto leaky = [](double) {
    Matrix3cd m = Matrix3cd::Zero();
    m(0, 0) = cd(0.0, -1.0);
    return m;
  };
  const auto plus = DensityMatrix3::pure(Eigen::Vector3cd(1, 1, 0));
  CHECK_THROWS_AS(evolve_unitary(leaky, plus, 5.0), IntegratorFailure);
  auto broken = [](double) { return Matrix3cd::Constant(std::nan("")).eval(); };
  CHECK_THROWS_AS(evolve_unitary(broken, plus, 1.0), IntegratorFailure);
}

TEST_CASE("D-frame projections") {
  ProtocolSpec ps;
  ps.drag = true;
  const StaProtocol protocol(ps);
  auto rec = evolve_unitary(rotating_frame_sampler(protocol, AnharmonicSpec{}), DensityMatrix3::basis(0),
                            15.0);
  add_dframe_projections(rec, protocol);
  for (const auto& p : rec.points) {
    REQUIRE(p.dframe_bloch.has_value());
    CHECK(std::abs(p.dframe_bloch->y()) < 0.05);
  }
}

}  // TEST_SUITE
