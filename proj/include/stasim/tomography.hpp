#pragma once

#include "stasim/quantum.hpp"

#include <cstdint>
#include <random>
#include <utility>

namespace stasim {

/// Tunneling probabilities of |0>, |1>, |2> at the two readout biases.
struct CalibrationTable {
  Vector3d f{0.065, 0.925, 0.93};
  Vector3d f_prime{0.003, 0.093, 0.831};

  /// Rows f, f' and (1, 1, 1).
  Eigen::Matrix3d matrix() const;
  double condition_number() const;
  /// Throws InvalidCalibration on out-of-range entries or condition number above 1e6.
  void validate() const;
};

enum class Bias { Im, ImPrime };

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;

  double purity() const { return std::sqrt(x * x + y * y + z * z); }
};

double readout_forward(const Vector3d& populations, const CalibrationTable& table, Bias bias);

/// Raw solution of the linear system and its clamped, renormalized counterpart.
template <int N>
struct Inversion {
  Eigen::Matrix<double, N, 1> raw;
  Eigen::Matrix<double, N, 1> clamped;
  double residual = 0.0;
};

Inversion<2> readout_invert2(double p_t, double f0, double f1);
Inversion<3> readout_invert3(double p_t, double p_t_prime, const CalibrationTable& table);

/// Negative entries set to zero, then normalized to unit sum.
template <typename Derived>
typename Derived::PlainObject clamp_to_simplex(const Eigen::MatrixBase<Derived>& p) {
  typename Derived::PlainObject out = p.cwiseMax(0.0);
  const double s = out.sum();
  if (s <= 0.0) throw InvalidCalibration("inverted populations are all non-positive");
  return out / s;
}

struct ReadoutMode {
  bool sampled = false;
  int shots = 3000;
  std::uint64_t seed = 0;

  static ReadoutMode exact() { return {}; }
  static ReadoutMode sampling(int shots, std::uint64_t seed) { return {true, shots, seed}; }
};

/// Emulated two-bias readout. In sampled mode each tunneling probability is replaced by a
/// binomial estimate with the configured number of shots.
class Readout {
 public:
  explicit Readout(CalibrationTable table = {}, ReadoutMode mode = {});

  const CalibrationTable& table() const { return table_; }
  const ReadoutMode& mode() const { return mode_; }

  Inversion<3> measure(const Matrix3cd& rho);
  Vector3d populations(const Matrix3cd& rho) { return measure(rho).clamped; }

 private:
  double observe(double p);

  CalibrationTable table_;
  ReadoutMode mode_;
  std::mt19937_64 rng_;
};

/// exp(-i theta sigma/2) acting on the (m, n) level pair, identity elsewhere.
Matrix3cd pair_rotation(int m, int n, char axis, double theta);

BlochVector qst_qubit(const DensityMatrix3& rho, Readout& readout);

enum class LevelPair { P01, P12, P02 };

/// (x, y) with rho_mn = (x - i y)/2.
std::pair<double, double> qst_qutrit_offdiag(const DensityMatrix3& rho, LevelPair pair,
                                             Readout& readout);

/// (sqrt(P0 P2), sqrt(P1 P2))
std::pair<double, double> coherence_approximation(const Vector3d& populations);

/// arccos(zD / sqrt(xD^2 + zD^2)); throws UndefinedAngle when both projections are below 1e-9.
double experimental_thetaq(double x_d, double z_d);

struct TomographyFrame {
  Vector3d populations = Vector3d::Zero();
  BlochVector rframe;
  BlochVector dframe;
  Matrix3cd rho = Matrix3cd::Zero();
};

/// Measures populations and the qubit Bloch vector, completes rho with the coherence
/// approximation and moves it to the D-frame defined by d.
TomographyFrame tomography_pipeline(const DensityMatrix3& rho, const Matrix3cd& d, Readout& readout);

}  // namespace stasim
