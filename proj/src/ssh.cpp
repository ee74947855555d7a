#include "stasim/ssh.hpp"

#include <algorithm>
#include <cmath>

namespace stasim {

void SshParams::validate() const {
  if (!(omega2 > 0.0)) throw InvalidArgument("intercell hopping must be positive");
  if (!(omega1 >= 0.0)) throw InvalidArgument("intracell hopping must be non-negative");
}

Matrix2cd bulk_hamiltonian(double theta, const SshParams& p) {
  const Complex<double> lower = p.omega1 + p.omega2 * std::polar(1.0, theta);
  Matrix2cd h;
  h << 0.0, 0.5 * std::conj(lower), 0.5 * lower, 0.0;
  return h;
}

std::pair<double, double> band_energies(double theta, const SshParams& p) {
  const double r2 = p.omega1 * p.omega1 + p.omega2 * p.omega2 +
                    2.0 * p.omega1 * p.omega2 * std::cos(theta);
  const double e = 0.5 * std::sqrt(std::max(r2, 0.0));
  return {-e, e};
}

double theta_q_exact(double theta, double alpha) {
  const double r = std::sqrt(std::max(1.0 + alpha * alpha + 2.0 * alpha * std::cos(theta), 0.0));
  if (r < 1e-12) throw UndefinedAngle("Bloch eigenstate is undefined at alpha = 1, theta = pi");
  return std::acos(std::clamp((alpha + std::cos(theta)) / r, -1.0, 1.0));
}

Complex<double> bloch_phase(double theta, double alpha) {
  const Complex<double> z = alpha + std::polar(1.0, theta);
  if (std::abs(z) < 1e-12) throw UndefinedAngle("Bloch phase is undefined at alpha = 1, theta = pi");
  return z / std::abs(z);
}

std::vector<double> theta_grid(int points, CurveSpacing spacing, double theta_end) {
  if (points < 2) throw InvalidArgument("a theta grid needs at least two points");
  std::vector<double> g(points);
  for (int k = 0; k < points; ++k) {
    const double u = static_cast<double>(k) / (points - 1);
    g[k] = spacing == CurveSpacing::Even ? theta_end * u : 0.5 * theta_end * (1.0 - std::cos(pi * u));
  }
  return g;
}

WindingEstimate winding_number(const std::vector<double>& tq) {
  if (tq.size() < 2) throw InvalidArgument("winding number needs at least two samples");
  WindingEstimate w;
  w.endpoint = (tq.back() - tq.front()) / pi;
  // The second half of the circle is the mirror image x -> -x of the first.
  std::vector<double> loop(tq.begin(), tq.end());
  for (auto it = tq.rbegin() + 1; it != tq.rend(); ++it) loop.push_back(-*it);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
    const double ax = std::sin(loop[i]), az = std::cos(loop[i]);
    const double bx = std::sin(loop[i + 1]), bz = std::cos(loop[i + 1]);
    total += std::atan2(az * bx - ax * bz, ax * bx + az * bz);
  }
  w.integral = total / (2.0 * pi);
  return w;
}

double chern_number(const std::vector<double>& tq) {
  if (tq.size() < 2) throw InvalidArgument("Chern number needs at least two samples");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < tq.size(); ++i)
    sum += (tq[i + 1] - tq[i]) * std::sin(0.5 * (tq[i + 1] + tq[i]));
  return 0.5 * sum;
}

TopologyResult topology_from_curve(double alpha, std::vector<double> theta,
                                   std::vector<double> theta_q) {
  if (theta.size() != theta_q.size()) throw InvalidArgument("theta and theta_q differ in length");
  TopologyResult r;
  r.alpha = alpha;
  r.theta = std::move(theta);
  r.theta_q = std::move(theta_q);
  r.nu = winding_number(r.theta_q);
  r.chern = chern_number(r.theta_q);
  return r;
}

TopologyResult exact_topology(double alpha, const std::vector<double>& theta) {
  std::vector<double> tq;
  tq.reserve(theta.size());
  const bool critical = std::abs(alpha - 1.0) < 1e-12;
  for (double th : theta) tq.push_back(critical ? 0.5 * th : theta_q_exact(th, alpha));
  return topology_from_curve(alpha, theta, std::move(tq));
}

LatticeSpectrum lattice_spectrum(int cells, const SshParams& params, Boundary boundary) {
  const Eigen::MatrixXd h = lattice_hamiltonian<double>(cells, params, boundary);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  return {cells, boundary, es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXd bulk_band_multiset(int cells, const SshParams& params) {
  Eigen::VectorXd e(2 * cells);
  for (int k = 0; k < cells; ++k) {
    const auto [lo, hi] = band_energies(2.0 * pi * k / cells, params);
    e(2 * k) = lo;
    e(2 * k + 1) = hi;
  }
  std::sort(e.begin(), e.end());
  return e;
}

double periodic_spectrum_residual(int cells, const SshParams& params) {
  const auto spec = lattice_spectrum(cells, params, Boundary::Periodic);
  return (spec.energies - bulk_band_multiset(cells, params)).cwiseAbs().maxCoeff();
}

int count_midgap_states(const LatticeSpectrum& spectrum, const SshParams& params) {
  const double cut = 0.25 * std::abs(params.omega1 - params.omega2);
  return static_cast<int>((spectrum.energies.array().abs() < cut).count());
}

namespace {

struct EndWeights {
  double left = 0.0, right = 0.0, left_a = 0.0, right_b = 0.0;
};

EndWeights end_weights(const Eigen::VectorXd& v, int cells, int end_cells) {
  EndWeights w;
  for (int c = 0; c < end_cells; ++c) {
    const double a = v(2 * c) * v(2 * c), b = v(2 * c + 1) * v(2 * c + 1);
    w.left += a + b;
    w.left_a += a;
    const int r = cells - 1 - c;
    const double ra = v(2 * r) * v(2 * r), rb = v(2 * r + 1) * v(2 * r + 1);
    w.right += ra + rb;
    w.right_b += rb;
  }
  const double norm = v.squaredNorm();
  w.left /= norm;
  w.right /= norm;
  w.left_a /= norm;
  w.right_b /= norm;
  return w;
}

}  // namespace

EdgeReport edge_state_report(const LatticeSpectrum& spectrum, const SshParams& params,
                             double threshold_ratio, int end_cells) {
  if (spectrum.boundary != Boundary::Open)
    throw InvalidArgument("edge states are defined for open boundaries only");
  const int cells = spectrum.cells;
  EdgeReport rep;
  rep.end_cells = end_cells > 0 ? std::min(end_cells, cells) : (cells + 3) / 4;
  const double threshold = threshold_ratio * params.omega2;

  std::vector<int> picked;
  for (int i = 0; i < spectrum.energies.size(); ++i) {
    if (std::abs(spectrum.energies(i)) >= threshold) continue;
    picked.push_back(i);
    const auto w = end_weights(spectrum.states.col(i), cells, rep.end_cells);
    rep.states.push_back({spectrum.energies(i), w.left, w.right});
    rep.midgap_energy += std::abs(spectrum.energies(i));
  }
  if (picked.empty()) return rep;
  rep.midgap_energy /= static_cast<double>(picked.size());
  if (picked.size() != 2) return rep;

  // Diagonalize the sublattice operator inside the pair to separate the two ends.
  Eigen::MatrixXd pair(spectrum.states.rows(), 2);
  pair.col(0) = spectrum.states.col(picked[0]);
  pair.col(1) = spectrum.states.col(picked[1]);
  Eigen::VectorXd chiral(spectrum.states.rows());
  for (int s = 0; s < chiral.size(); ++s) chiral(s) = (s % 2 == 0) ? 1.0 : -1.0;
  const Eigen::Matrix2d g = pair.transpose() * chiral.asDiagonal() * pair;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
  Eigen::VectorXd a = pair * es.eigenvectors().col(1);
  Eigen::VectorXd b = pair * es.eigenvectors().col(0);
  if (end_weights(a, cells, rep.end_cells).left < end_weights(b, cells, rep.end_cells).left)
    std::swap(a, b);
  rep.psi_a = a.normalized();
  rep.psi_b = b.normalized();
  rep.psi_a_left_a = end_weights(rep.psi_a, cells, rep.end_cells).left_a;
  rep.psi_b_right_b = end_weights(rep.psi_b, cells, rep.end_cells).right_b;
  return rep;
}

}  // namespace stasim
