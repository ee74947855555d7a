#pragma once

#include "stasim/core.hpp"

#include <Eigen/Eigenvalues>

#include <utility>
#include <vector>

namespace stasim {

/// Hopping amplitudes: omega1 intracell, omega2 intercell (both enter the Hamiltonian halved).
struct SshParams {
  double omega1 = 0.0;
  double omega2 = mhz(30.0);

  static SshParams from_alpha(double alpha, double omega2 = mhz(30.0)) {
    return {alpha * omega2, omega2};
  }
  double alpha() const { return omega1 / omega2; }
  void validate() const;
};

Matrix2cd bulk_hamiltonian(double theta, const SshParams& params);

/// (E-, E+)
std::pair<double, double> band_energies(double theta, const SshParams& params);

/// Polar angle of the spin-up Bloch eigenstate, in [0, pi]. Throws UndefinedAngle at alpha = 1,
/// theta = pi.
double theta_q_exact(double theta, double alpha);

/// Phase factor of the lower-left Bloch Hamiltonian entry, (alpha + e^{i theta}) / |alpha + e^{i theta}|.
Complex<double> bloch_phase(double theta, double alpha);

enum class CurveSpacing { HanningImage, Even };

/// Quasi-momenta 0 .. theta_end. HanningImage: theta_end/2 (1 - cos(pi k / (points - 1))).
std::vector<double> theta_grid(int points, CurveSpacing spacing, double theta_end = pi);

struct WindingEstimate {
  /// (theta_q(end) - theta_q(0)) / pi
  double endpoint = 0.0;
  /// Net rotation of (sin theta_q, cos theta_q) around the mirrored closed loop, over 2 pi.
  double integral = 0.0;
};

WindingEstimate winding_number(const std::vector<double>& theta_q);

/// (1/2) sum (theta_q[m+1] - theta_q[m]) sin((theta_q[m+1] + theta_q[m]) / 2)
double chern_number(const std::vector<double>& theta_q);

struct TopologyResult {
  double alpha = 0.0;
  std::vector<double> theta;
  std::vector<double> theta_q;
  WindingEstimate nu;
  double chern = 0.0;

  double zak_phase() const { return nu.endpoint * pi; }
};

TopologyResult topology_from_curve(double alpha, std::vector<double> theta,
                                   std::vector<double> theta_q);

/// Exact theta_q(theta) on the given grid, with the alpha = 1 limit theta/2.
TopologyResult exact_topology(double alpha, const std::vector<double>& theta);

enum class Boundary { Open, Periodic };

/// 2N x 2N hopping matrix; site 2n is A_n, 2n + 1 is B_n.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> lattice_hamiltonian(int cells,
                                                                          const SshParams& params,
                                                                          Boundary boundary) {
  if (cells < 2) throw InvalidArgument("lattice needs at least two unit cells");
  params.validate();
  const int n = 2 * cells;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> h =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  const Scalar intra = Scalar(params.omega1 / 2);
  const Scalar inter = Scalar(params.omega2 / 2);
  for (int c = 0; c < cells; ++c) {
    h(2 * c, 2 * c + 1) = h(2 * c + 1, 2 * c) = intra;
    if (c + 1 < cells) h(2 * c + 1, 2 * c + 2) = h(2 * c + 2, 2 * c + 1) = inter;
  }
  if (boundary == Boundary::Periodic) h(n - 1, 0) = h(0, n - 1) = inter;
  return h;
}

struct LatticeSpectrum {
  int cells = 0;
  Boundary boundary = Boundary::Open;
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd states;    // columns
};

LatticeSpectrum lattice_spectrum(int cells, const SshParams& params, Boundary boundary);

/// Sorted multiset {E+-(2 pi k / N)}.
Eigen::VectorXd bulk_band_multiset(int cells, const SshParams& params);

/// Largest |E_lattice - E_bulk| between the periodic lattice and the bulk bands.
double periodic_spectrum_residual(int cells, const SshParams& params);

/// Number of open-lattice states with |E| below a quarter of the bulk gap |omega1 - omega2|.
int count_midgap_states(const LatticeSpectrum& spectrum, const SshParams& params);

struct EdgeState {
  double energy = 0.0;
  double weight_left = 0.0;
  double weight_right = 0.0;
};

struct EdgeReport {
  std::vector<EdgeState> states;
  double midgap_energy = 0.0;
  int end_cells = 0;
  /// Chiral combinations of the near-zero pair; empty unless exactly two states were found.
  Eigen::VectorXd psi_a, psi_b;
  /// Weight of psi_a on the A sites of the left end, and of psi_b on the B sites of the right end.
  double psi_a_left_a = 0.0;
  double psi_b_right_b = 0.0;
};

/// Open-boundary states with |E| < threshold_ratio * omega2. end_cells <= 0 selects ceil(N/4).
EdgeReport edge_state_report(const LatticeSpectrum& spectrum, const SshParams& params,
                             double threshold_ratio = 1e-3, int end_cells = 0);

}  // namespace stasim
