#pragma once

#include "stasim/fields.hpp"
#include "stasim/quantum.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace stasim {

using HamiltonianFn = std::function<Matrix3cd(double)>;

struct DissipationSpec {
  double t1 = 310.0;
  double t2star = 120.0;

  /// 1/T2* - 1/(2 T1)
  double gamma_phi() const { return 1.0 / t2star - 0.5 / t1; }
  void validate() const;
  /// |0><1|/sqrt(T1), sqrt(2/T1)|1><2| and sqrt(2 gamma_phi) diag(0, 1, 2).
  std::vector<Matrix3cd> collapse_operators() const;
};

struct EvolutionOptions {
  double dt = 0.005;
  double record_every = 0.5;
};

struct TrajectoryPoint {
  double t = 0.0;
  DensityMatrix3 rho;
  Vector3d populations = Vector3d::Zero();
  std::optional<Vector3d> dframe_bloch;
};

struct TrajectoryRecord {
  std::vector<TrajectoryPoint> points;
  double dt = 0.0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;

  const TrajectoryPoint& final_point() const { return points.back(); }
};

/// Rotating-frame Hamiltonian sampler for a protocol; levels == 2 truncates to the qubit.
HamiltonianFn rotating_frame_sampler(const StaProtocol& protocol, const AnharmonicSpec& spec,
                                     int levels = 3);

TrajectoryRecord evolve_unitary(const HamiltonianFn& h, const DensityMatrix3& rho0, double duration,
                                const EvolutionOptions& options = {});

TrajectoryRecord evolve_lindblad(const HamiltonianFn& h, const DensityMatrix3& rho0,
                                 double duration, const DissipationSpec& dissipation,
                                 const EvolutionOptions& options = {});

/// Fills dframe_bloch with the qubit Bloch vector of D^dagger rho D at every recorded point.
void add_dframe_projections(TrajectoryRecord& record, const StaProtocol& protocol);

struct LeakageEstimate {
  std::vector<double> t;
  std::vector<double> p2;
  /// theta'(Ta)^2 / (2 (Delta2 + Omega)^2)
  double endpoint = 0.0;
  /// Set when |Delta2| < 3 Omega, where the estimate is unreliable.
  bool weak_anharmonicity = false;
};

LeakageEstimate leakage_estimate(const AngleSchedule& schedule, double omega, double delta2);

struct StaComparison {
  double with_cd = 0.0;
  double without_cd = 0.0;
};

/// Final |<1|psi(Ta)>|^2 in the dissipation-free qubit with and without the counter-diabatic field.
StaComparison sta_vs_bare_comparison(double omega, double duration, const AngleShape& shape,
                                     double dt = 0.005);

}  // namespace stasim
