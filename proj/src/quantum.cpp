#include "stasim/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stasim {

using cd = Complex<double>;

void AnharmonicSpec::validate() const {
  if (!(omega10 > 0.0)) throw InvalidArgument("qubit frequency must be positive");
  if (!(delta2 < 0.0)) throw InvalidArgument("anharmonicity must be negative");
}

const char* to_string(Frame frame) {
  switch (frame) {
    case Frame::Lab: return "lab";
    case Frame::Rotating: return "rotating";
    case Frame::Dframe: return "dframe";
  }
  return "?";
}

std::optional<std::string> DensityMatrix3::check(const Matrix3cd& rho, const DensityTolerance& tol) {
  if (!rho.allFinite()) return "density matrix has non-finite entries";
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol.hermitian)
    return "density matrix is not Hermitian";
  if (std::abs(rho.trace() - 1.0) > tol.trace) return "density matrix trace differs from 1";
  const Matrix3cd h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix3cd> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol.eigenvalue) return "density matrix is not positive";
  return std::nullopt;
}

DensityMatrix3::DensityMatrix3(const Matrix3cd& rho, Frame frame, const DensityTolerance& tol)
    : rho_(rho), frame_(frame) {
  if (auto err = check(rho, tol)) throw InvalidArgument(*err);
}

DensityMatrix3 DensityMatrix3::trusted(const Matrix3cd& rho, Frame frame) {
  DensityMatrix3 d;
  d.rho_ = rho;
  d.frame_ = frame;
  return d;
}

DensityMatrix3 DensityMatrix3::basis(int level, Frame frame) {
  if (level < 0 || level > 2) throw InvalidArgument("level index out of range");
  Matrix3cd rho = Matrix3cd::Zero();
  rho(level, level) = 1.0;
  return trusted(rho, frame);
}

DensityMatrix3 DensityMatrix3::pure(const Eigen::Vector3cd& psi, Frame frame) {
  const double n = psi.norm();
  if (n < 1e-12) throw InvalidArgument("state vector has zero norm");
  const Eigen::Vector3cd v = psi / n;
  return trusted(v * v.adjoint(), frame);
}

Vector3d DensityMatrix3::qubit_bloch() const {
  return {2.0 * rho_(0, 1).real(), -2.0 * rho_(0, 1).imag(), (rho_(0, 0) - rho_(1, 1)).real()};
}

Vector3d DensityMatrix3::eigenvalues() const {
  const Matrix3cd h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix3cd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix3cd rotating_hamiltonian(const Vector3d& b, const AnharmonicSpec& spec, int levels) {
  if (levels != 2 && levels != 3) throw InvalidArgument("only 2- and 3-level models are supported");
  static const LadderOps<double> s = ladder_ops<double>();
  Matrix3cd h = 0.5 * (b.x() * s.sx + b.y() * s.sy + b.z() * s.sz);
  if (levels == 2) {
    h.row(2).setZero();
    h.col(2).setZero();
  } else {
    h(2, 2) += spec.delta2;
  }
  return h;
}

Matrix3cd lab_hamiltonian(const DriveProgram& drive, const AnharmonicSpec& spec, double t) {
  static const LadderOps<double> s = ladder_ops<double>();
  const DriveSample d = drive.at(t);
  const double lambda = d.envelope * std::cos(drive.carrier * t + d.phase);
  Matrix3cd h = lambda * s.sx;
  h.diagonal() += spec.bare_energies().cast<cd>();
  return h;
}

Matrix3cd rframe_unitary(double t, double carrier, double xi) {
  const double a = carrier * t + xi;
  Matrix3cd r = Matrix3cd::Zero();
  for (int n = 0; n < 3; ++n) r(n, n) = std::polar(1.0, -(n - 0.5) * a);
  return r;
}

DensityMatrix3 rframe_transform(const DensityMatrix3& lab, double t, double carrier, double xi) {
  const Matrix3cd r = rframe_unitary(t, carrier, xi);
  return DensityMatrix3::trusted(r.adjoint() * lab.matrix() * r, Frame::Rotating);
}

Matrix3cd dframe_generator(const DragElements& e) {
  Matrix3cd m = Matrix3cd::Zero();
  auto set_pair = [&m](int r, int c, double x, double y) {
    m(r, c) = cd(x, -y);
    m(c, r) = cd(x, y);
  };
  set_pair(0, 1, e.m1_01x, e.m1_01y);
  set_pair(1, 2, e.m1_12x + e.m2_12x, e.m1_12y + e.m2_12y);
  set_pair(0, 2, e.m2_02x, e.m2_02y);
  return m;
}

Matrix3cd dframe_propagator(const DragElements& e) { return hermitian_expm(dframe_generator(e)); }

DensityMatrix3 dframe_transform(const DensityMatrix3& rho, const Matrix3cd& d) {
  if ((d.adjoint() * d - Matrix3cd::Identity()).cwiseAbs().maxCoeff() > 1e-8)
    throw InvalidArgument("D-frame transform needs a unitary matrix");
  return DensityMatrix3::trusted(d.adjoint() * rho.matrix() * d, Frame::Dframe);
}

Matrix3cd dframe_hamiltonian(const StaProtocol& protocol, const AnharmonicSpec& spec, double t,
                             double h) {
  const Matrix3cd hr = rotating_hamiltonian(protocol.field(t), spec);
  const Matrix3cd d = dframe_propagator(protocol.drag(t));
  const Matrix3cd dp = dframe_propagator(protocol.drag(t + h));
  const Matrix3cd dm = dframe_propagator(protocol.drag(t - h));
  const Matrix3cd d_dot = (dp - dm) / (2.0 * h);
  return d.adjoint() * hr * d + cd(0.0, 1.0) * d_dot.adjoint() * d;
}

double factorization_residual(const Matrix3cd& h_d) {
  return std::sqrt(std::norm(h_d(0, 2)) + std::norm(h_d(1, 2)));
}

}  // namespace stasim
