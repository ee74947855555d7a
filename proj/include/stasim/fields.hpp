#pragma once

#include "stasim/core.hpp"

#include <cstddef>
#include <vector>

namespace stasim {

// ---------------------------------------------------------------------------
// Polar-angle waveforms
// ---------------------------------------------------------------------------

enum class AngleKind { Linear, Hanning, VirtualHanning };

/// Shape of theta(t) on [0, Ta]. Linear and Hanning sweep 0 -> theta_end
/// (pi by default); VirtualHanning(m, M) is a Hanning sweep that stops at m*pi/M.
struct AngleShape {
  AngleKind kind = AngleKind::Hanning;
  double theta_end = pi;
  int m = 0;
  int total = 0;

  static AngleShape linear(double theta_end = pi);
  static AngleShape hanning(double theta_end = pi);
  static AngleShape virtual_hanning(int m, int total);

  bool hanning_like() const { return kind != AngleKind::Linear; }
};

struct AngleSample {
  double t = 0.0;
  double theta = 0.0;
  double rate = 0.0;   // rad/ns
  double accel = 0.0;  // rad/ns^2
};

AngleSample evaluate_angle(const AngleShape& shape, double duration, double t);

struct AngleSchedule {
  AngleShape shape;
  double duration = 0.0;
  std::vector<AngleSample> samples;

  AngleSample at(double t) const { return evaluate_angle(shape, duration, t); }
};

/// Uniform grid of n_samples points on [0, duration] with analytic derivatives.
AngleSchedule make_angle_schedule(const AngleShape& shape, double duration, std::size_t n_samples);

/// Number of samples for a uniform grid whose spacing is as close as possible to dt.
std::size_t samples_for_step(double duration, double dt);

// ---------------------------------------------------------------------------
// Effective fields
// ---------------------------------------------------------------------------

enum class FieldLabel { Reference, CounterDiabatic, Drag, Total };

/// B(t) with up to two analytic time-derivative channels.
struct FieldSample {
  double t = 0.0;
  Vector3d b = Vector3d::Zero();
  Vector3d db = Vector3d::Zero();
  Vector3d d2b = Vector3d::Zero();
};

struct FieldSchedule {
  FieldLabel label = FieldLabel::Total;
  double omega1 = 0.0;
  double omega2 = 0.0;
  // How many of db, d2b carry valid analytic values.
  int derivative_order = 0;
  std::vector<FieldSample> samples;
};

/// Sum on a shared grid; the result is labelled Total.
FieldSchedule operator+(const FieldSchedule& a, const FieldSchedule& b);

/// (Omega2 sin theta, 0, Omega1 + Omega2 cos theta) with first and second derivatives.
FieldSample reference_point(const AngleSample& angle, double omega1, double omega2);

/// B0 x dB0 / |B0|^2, with its first derivative. Throws GapClosure when |B0| < 1e-9.
FieldSample counter_diabatic_point(const FieldSample& reference);

/// Counter-diabatic field of a spin following polar angle theta and azimuth phi.
Vector3d counter_diabatic_general(double theta, double theta_rate, double phi, double phi_rate);

/// Polar angle of the in-plane reference field and its first two time derivatives.
struct PolarAngle {
  double value = 0.0;
  double rate = 0.0;
  double accel = 0.0;
};

PolarAngle field_polar_angle(const AngleSample& angle, double omega1, double omega2);

/// First-order DRAG field, D-frame generator elements and level shifts at one instant.
/// Generator elements are dimensionless; the remaining entries are in rad/ns.
struct DragElements {
  Vector3d field = Vector3d::Zero();
  double m1_01x = 0.0, m1_01y = 0.0, m1_12x = 0.0, m1_12y = 0.0;
  double m2_12x = 0.0, m2_12y = 0.0, m2_02x = 0.0, m2_02y = 0.0;
  double eps1 = 0.0;    // shift of |0>, |1>
  double eps2_0 = 0.0;  // zeroth-order shift of |2>
  double eps2_1 = 0.0;  // first-order shift of |2>
};

/// Closed form for the STA field (Omega2 sin theta, dtheta_q/dt, Omega1 + Omega2 cos theta).
DragElements drag_elements(const AngleSample& angle, double omega1, double omega2, double delta2);

/// Same quantities from an arbitrary field carrying its first derivative.
DragElements drag_elements_from_field(const FieldSample& sta_field, double delta2);

FieldSchedule reference_field_transfer(const AngleSchedule& schedule, double omega);
FieldSchedule reference_field_ssh(const AngleSchedule& schedule, double omega1, double omega2);
FieldSchedule counter_diabatic_field(const FieldSchedule& reference);

/// DRAG field for the single-amplitude transfer sweep (Hanning kinds only).
FieldSchedule drag_field_transfer(const AngleSchedule& schedule, double omega, double delta2);

struct DragCorrection {
  FieldSchedule field;
  std::vector<DragElements> elements;
};

DragCorrection drag_field_ssh(const AngleSchedule& schedule, double omega1, double omega2,
                              double delta2);

// ---------------------------------------------------------------------------
// Microwave synthesis
// ---------------------------------------------------------------------------

struct DriveSample {
  double t = 0.0;
  double envelope = 0.0;        // E
  double phase = 0.0;           // Phi = xi - phi
  double detuning_phase = 0.0;  // xi
  double relative_phase = 0.0;  // phi
};

struct DriveProgram {
  double carrier = 0.0;
  std::vector<DriveSample> samples;

  /// Linear interpolation of E and Phi; exact on grid points.
  DriveSample at(double t) const;
};

DriveProgram synthesize_drive(const FieldSchedule& total, double carrier);

/// Inverse of synthesize_drive; xi' by central differences (one-sided at the ends).
std::vector<FieldSample> reconstruct_field(const DriveProgram& drive);

// ---------------------------------------------------------------------------
// Complete drive protocol, evaluable at any t
// ---------------------------------------------------------------------------

struct ProtocolSpec {
  AngleShape shape = AngleShape::hanning();
  double duration = 15.0;
  double omega1 = 0.0;
  double omega2 = mhz(30.0);
  double delta2 = mhz(-200.0);
  bool counter_diabatic = true;
  bool drag = false;
};

class StaProtocol {
 public:
  explicit StaProtocol(ProtocolSpec spec);

  const ProtocolSpec& spec() const { return spec_; }
  double duration() const { return spec_.duration; }

  AngleSample angle(double t) const { return evaluate_angle(spec_.shape, spec_.duration, t); }
  Vector3d reference(double t) const;
  /// STA field B0 + Bcd (or B0 alone without counter-diabatic driving).
  Vector3d sta_field(double t) const;
  /// Field actually applied: STA field plus the DRAG field when enabled.
  Vector3d field(double t) const;
  DragElements drag(double t) const;

  FieldSchedule sample(double dt) const;

 private:
  ProtocolSpec spec_;
};

}  // namespace stasim
