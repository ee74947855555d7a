#include "stasim/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stasim {

using cd = Complex<double>;

Eigen::Matrix3d CalibrationTable::matrix() const {
  Eigen::Matrix3d a;
  a.row(0) = f.transpose();
  a.row(1) = f_prime.transpose();
  a.row(2).setOnes();
  return a;
}

double CalibrationTable::condition_number() const {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(matrix());
  const auto& s = svd.singularValues();
  if (s(2) == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(2);
}

void CalibrationTable::validate() const {
  const bool in_range = (f.array() >= 0.0).all() && (f.array() <= 1.0).all() &&
                        (f_prime.array() >= 0.0).all() && (f_prime.array() <= 1.0).all();
  if (!in_range) throw InvalidCalibration("calibration probabilities must lie in [0, 1]");
  const double cond = condition_number();
  if (!(cond <= 1e6))
    throw InvalidCalibration("calibration matrix is ill-conditioned (condition number " +
                             std::to_string(cond) + ")");
}

double readout_forward(const Vector3d& populations, const CalibrationTable& table, Bias bias) {
  return populations.dot(bias == Bias::Im ? table.f : table.f_prime);
}

Inversion<2> readout_invert2(double p_t, double f0, double f1) {
  if (std::abs(f1 - f0) < 1e-12) throw InvalidCalibration("f0 and f1 must differ");
  Inversion<2> out;
  const double p1 = (p_t - f0) / (f1 - f0);
  out.raw << 1.0 - p1, p1;
  out.clamped = clamp_to_simplex(out.raw);
  out.residual = std::abs(f0 * out.raw(0) + f1 * out.raw(1) - p_t);
  return out;
}

Inversion<3> readout_invert3(double p_t, double p_t_prime, const CalibrationTable& table) {
  table.validate();
  const Eigen::Matrix3d a = table.matrix();
  const Vector3d b(p_t, p_t_prime, 1.0);
  Inversion<3> out;
  out.raw = a.partialPivLu().solve(b);
  out.clamped = clamp_to_simplex(out.raw);
  out.residual = (a * out.raw - b).norm();
  return out;
}

Readout::Readout(CalibrationTable table, ReadoutMode mode)
    : table_(table), mode_(mode), rng_(mode.seed) {
  table_.validate();
  if (mode_.sampled && mode_.shots <= 0) throw InvalidArgument("shot count must be positive");
}

double Readout::observe(double p) {
  p = std::clamp(p, 0.0, 1.0);
  if (!mode_.sampled) return p;
  std::binomial_distribution<int> draw(mode_.shots, p);
  return static_cast<double>(draw(rng_)) / mode_.shots;
}

Inversion<3> Readout::measure(const Matrix3cd& rho) {
  const Vector3d p = rho.diagonal().real();
  const double pt = observe(readout_forward(p, table_, Bias::Im));
  const double ptp = observe(readout_forward(p, table_, Bias::ImPrime));
  return readout_invert3(pt, ptp, table_);
}

Matrix3cd pair_rotation(int m, int n, char axis, double theta) {
  Matrix3cd g = Matrix3cd::Zero();
  if (axis == 'x') {
    g(m, n) = g(n, m) = 1.0;
  } else if (axis == 'y') {
    g(m, n) = cd(0.0, -1.0);
    g(n, m) = cd(0.0, 1.0);
  } else {
    throw InvalidArgument("rotation axis must be x or y");
  }
  return hermitian_expm(g, 0.5 * theta);
}

namespace {

Vector3d rotated_populations(const Matrix3cd& rho, const Matrix3cd& u, Readout& readout) {
  return readout.populations(u * rho * u.adjoint());
}

std::pair<double, double> pair_projections(const Matrix3cd& rho, int m, int n, Readout& readout) {
  auto contrast = [&](const Matrix3cd& u) {
    const Vector3d p = rotated_populations(rho, u, readout);
    return p(m) - p(n);
  };
  const double x = 0.5 * (contrast(pair_rotation(m, n, 'y', -0.5 * pi)) -
                          contrast(pair_rotation(m, n, 'y', 0.5 * pi)));
  const double y = 0.5 * (contrast(pair_rotation(m, n, 'x', 0.5 * pi)) -
                          contrast(pair_rotation(m, n, 'x', -0.5 * pi)));
  return {x, y};
}

}  // namespace

BlochVector qst_qubit(const DensityMatrix3& rho, Readout& readout) {
  const Vector3d p = readout.populations(rho.matrix());
  const auto [x, y] = pair_projections(rho.matrix(), 0, 1, readout);
  return {x, y, p(0) - p(1)};
}

std::pair<double, double> qst_qutrit_offdiag(const DensityMatrix3& rho, LevelPair pair,
                                             Readout& readout) {
  switch (pair) {
    case LevelPair::P01: return pair_projections(rho.matrix(), 0, 1, readout);
    case LevelPair::P12: return pair_projections(rho.matrix(), 1, 2, readout);
    case LevelPair::P02: {
      // swap |0> and |1> with a pi pulse, then read the 12 pair
      const Matrix3cd swap01 = pair_rotation(0, 1, 'x', pi);
      const Matrix3cd vx = pair_rotation(1, 2, 'x', 0.5 * pi) * swap01;
      const Matrix3cd vy = pair_rotation(1, 2, 'y', 0.5 * pi) * swap01;
      const Vector3d px = rotated_populations(rho.matrix(), vx, readout);
      const Vector3d py = rotated_populations(rho.matrix(), vy, readout);
      return {px(1) - px(2), py(1) - py(2)};
    }
  }
  return {0.0, 0.0};
}

std::pair<double, double> coherence_approximation(const Vector3d& p) {
  const Vector3d q = p.cwiseMax(0.0);
  return {std::sqrt(q(0) * q(2)), std::sqrt(q(1) * q(2))};
}

double experimental_thetaq(double x_d, double z_d) {
  const double r = std::hypot(x_d, z_d);
  if (r < 1e-9) throw UndefinedAngle("Bloch projections vanish; polar angle is undefined");
  return std::acos(std::clamp(z_d / r, -1.0, 1.0));
}

TomographyFrame tomography_pipeline(const DensityMatrix3& rho, const Matrix3cd& d, Readout& readout) {
  TomographyFrame out;
  out.populations = readout.populations(rho.matrix());
  const Vector3d& p = out.populations;
  const auto [x, y] = pair_projections(rho.matrix(), 0, 1, readout);
  out.rframe = {x, y, p(0) - p(1)};
  const auto [c02, c12] = coherence_approximation(p);
  Matrix3cd r = Matrix3cd::Zero();
  r.diagonal() = p.cast<cd>();
  r(0, 1) = cd(0.5 * out.rframe.x, -0.5 * out.rframe.y);
  r(1, 0) = std::conj(r(0, 1));
  r(0, 2) = r(2, 0) = c02;
  r(1, 2) = r(2, 1) = c12;
  out.rho = r;
  const Vector3d b = dframe_transform(DensityMatrix3::trusted(r, Frame::Rotating), d).qubit_bloch();
  out.dframe = {b.x(), b.y(), b.z()};
  return out;
}

}  // namespace stasim
