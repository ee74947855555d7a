#pragma once

#include "stasim/core.hpp"
#include "stasim/fields.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <optional>

namespace stasim {

template <typename Scalar>
struct LadderOps {
  Matrix3c<Scalar> sx, sy, sz;
};

/// Spin-like ladder operators of the three lowest oscillator levels.
template <typename Scalar = double>
LadderOps<Scalar> ladder_ops() {
  using C = Complex<Scalar>;
  const Scalar r2 = std::sqrt(Scalar(2));
  LadderOps<Scalar> ops;
  ops.sx.setZero();
  ops.sy.setZero();
  ops.sz.setZero();
  ops.sx(0, 1) = ops.sx(1, 0) = C(1);
  ops.sx(1, 2) = ops.sx(2, 1) = C(r2);
  ops.sy(0, 1) = C(0, -1);
  ops.sy(1, 0) = C(0, 1);
  ops.sy(1, 2) = C(0, -r2);
  ops.sy(2, 1) = C(0, r2);
  ops.sz.diagonal() << C(1), C(-1), C(-3);
  return ops;
}

struct AnharmonicSpec {
  double omega10 = mhz(5700.0);
  double delta2 = mhz(-200.0);

  /// (0, w10, 2 w10 + Delta2)
  Vector3d bare_energies() const { return {0.0, omega10, 2.0 * omega10 + delta2}; }
  void validate() const;
};

enum class Frame { Lab, Rotating, Dframe };

const char* to_string(Frame frame);

struct DensityTolerance {
  double hermitian = 1e-10;
  double trace = 1e-9;
  double eigenvalue = 1e-8;
};

class DensityMatrix3 {
 public:
  DensityMatrix3() : rho_(Matrix3cd::Zero()) { rho_(0, 0) = 1.0; }
  /// Validates the entries and throws InvalidArgument on failure.
  explicit DensityMatrix3(const Matrix3cd& rho, Frame frame = Frame::Rotating,
                          const DensityTolerance& tol = {});

  /// Wraps propagated entries without validation.
  static DensityMatrix3 trusted(const Matrix3cd& rho, Frame frame);
  static DensityMatrix3 basis(int level, Frame frame = Frame::Rotating);
  static DensityMatrix3 pure(const Eigen::Vector3cd& psi, Frame frame = Frame::Rotating);

  static std::optional<std::string> check(const Matrix3cd& rho, const DensityTolerance& tol = {});

  const Matrix3cd& matrix() const { return rho_; }
  Complex<double> operator()(int r, int c) const { return rho_(r, c); }
  Frame frame() const { return frame_; }
  Vector3d populations() const { return rho_.diagonal().real(); }
  /// (x, y, z) of the {|0>, |1>} block: rho01 = (x - i y)/2, z = P0 - P1.
  Vector3d qubit_bloch() const;
  Vector3d eigenvalues() const;

 private:
  Matrix3cd rho_;
  Frame frame_ = Frame::Rotating;
};

/// exp(-i * scale * M) for Hermitian M by eigendecomposition.
template <typename Derived>
auto hermitian_expm(const Eigen::MatrixBase<Derived>& m, double scale = 1.0) {
  using MatrixType = typename Derived::PlainObject;
  using RealScalar = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  const MatrixType a = m;
  if (a.rows() != a.cols()) throw InvalidArgument("matrix exponential needs a square matrix");
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > RealScalar(1e-10))
    throw InvalidArgument("matrix exponential input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatrixType> es(a);
  const auto phases = (es.eigenvalues().array() * RealScalar(-scale))
                          .unaryExpr([](RealScalar x) { return std::polar(RealScalar(1), x); })
                          .matrix();
  return MatrixType(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
}

/// (1/2) B.S + Delta2 |2><2|. With levels == 2 the |2> row and column are zero.
Matrix3cd rotating_hamiltonian(const Vector3d& b, const AnharmonicSpec& spec, int levels = 3);

/// sum_n eps_n |n><n| + E cos(w_d t + Phi) Sx, without the rotating-wave approximation.
Matrix3cd lab_hamiltonian(const DriveProgram& drive, const AnharmonicSpec& spec, double t);

/// diag(exp(-i (n - 1/2)(w_d t + xi))).
Matrix3cd rframe_unitary(double t, double carrier, double xi);

DensityMatrix3 rframe_transform(const DensityMatrix3& lab, double t, double carrier, double xi);

/// Hermitian generator M with zero diagonal; element (m, n), m < n, is Mx - i My.
Matrix3cd dframe_generator(const DragElements& e);

/// D = exp(-i M).
Matrix3cd dframe_propagator(const DragElements& e);

/// D^dagger rho D.
DensityMatrix3 dframe_transform(const DensityMatrix3& rho, const Matrix3cd& d);

/// D^dagger H D + i dD^dagger/dt D for the DRAG-corrected protocol, dD/dt by central differences.
Matrix3cd dframe_hamiltonian(const StaProtocol& protocol, const AnharmonicSpec& spec, double t,
                             double h = 1e-4);

/// Norm of the couplings from the qubit block to |2>, i.e. of entries (0,2) and (1,2).
double factorization_residual(const Matrix3cd& h_d);

}  // namespace stasim
