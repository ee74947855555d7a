#include "stasim/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stasim {

namespace {

constexpr double kGapThreshold = 1e-9;

void require_positive(double value, const char* what) {
  if (!(value > 0.0)) throw InvalidArgument(std::string(what) + " must be positive");
}

DragElements assemble_drag(const Vector3d& b, double drag_x, double drag_y, double delta2) {
  const double sqrt2 = std::numbers::sqrt2;
  const double in_plane = b.x() * b.x() + b.y() * b.y();
  DragElements e;
  e.field = Vector3d(drag_x, drag_y, 0.0);
  e.m1_01x = b.y() / (4.0 * delta2);
  e.m1_01y = -b.x() / (4.0 * delta2);
  e.m1_12x = b.y() / (sqrt2 * delta2);
  e.m1_12y = -b.x() / (sqrt2 * delta2);
  e.m2_12x = -drag_y / (sqrt2 * delta2);
  e.m2_12y = drag_x / (sqrt2 * delta2);
  e.m2_02x = 3.0 * b.x() * b.y() / (4.0 * sqrt2 * delta2 * delta2);
  e.m2_02y = 3.0 * (b.y() * b.y() - b.x() * b.x()) / (8.0 * sqrt2 * delta2 * delta2);
  e.eps1 = -in_plane / (4.0 * delta2);
  e.eps2_0 = -1.5 * b.z();
  e.eps2_1 = in_plane / (2.0 * delta2);
  return e;
}

FieldSchedule map_angles(const AngleSchedule& schedule, FieldLabel label, double omega1,
                         double omega2, int order, auto&& point) {
  FieldSchedule out;
  out.label = label;
  out.omega1 = omega1;
  out.omega2 = omega2;
  out.derivative_order = order;
  out.samples.reserve(schedule.samples.size());
  for (const auto& a : schedule.samples) out.samples.push_back(point(a));
  return out;
}

}  // namespace

AngleShape AngleShape::linear(double theta_end) { return {AngleKind::Linear, theta_end, 0, 0}; }

AngleShape AngleShape::hanning(double theta_end) { return {AngleKind::Hanning, theta_end, 0, 0}; }

AngleShape AngleShape::virtual_hanning(int m, int total) {
  if (total <= 0 || m < 0 || m > total)
    throw InvalidArgument("virtual Hanning requires 0 <= m <= M and M > 0");
  return {AngleKind::VirtualHanning, pi * m / total, m, total};
}

AngleSample evaluate_angle(const AngleShape& shape, double duration, double t) {
  AngleSample a;
  a.t = t;
  if (shape.kind == AngleKind::Linear) {
    a.rate = shape.theta_end / duration;
    a.theta = a.rate * t;
    return a;
  }
  const double w = pi / duration;
  const double half = 0.5 * shape.theta_end;
  a.theta = half * (1.0 - std::cos(w * t));
  a.rate = half * w * std::sin(w * t);
  a.accel = half * w * w * std::cos(w * t);
  return a;
}

AngleSchedule make_angle_schedule(const AngleShape& shape, double duration, std::size_t n_samples) {
  require_positive(duration, "duration");
  if (n_samples < 2) throw InvalidArgument("an angle schedule needs at least two samples");
  AngleSchedule s{shape, duration, {}};
  s.samples.reserve(n_samples);
  const double h = duration / static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) {
    // pin the last sample exactly to Ta
    const double t = (i + 1 == n_samples) ? duration : h * static_cast<double>(i);
    s.samples.push_back(evaluate_angle(shape, duration, t));
  }
  return s;
}

std::size_t samples_for_step(double duration, double dt) {
  require_positive(duration, "duration");
  require_positive(dt, "time step");
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(duration / dt)) + 1);
}

FieldSchedule operator+(const FieldSchedule& a, const FieldSchedule& b) {
  if (a.samples.size() != b.samples.size())
    throw InvalidArgument("field schedules are sampled on different grids");
  FieldSchedule out;
  out.label = FieldLabel::Total;
  out.omega1 = a.omega2 != 0.0 ? a.omega1 : b.omega1;
  out.omega2 = a.omega2 != 0.0 ? a.omega2 : b.omega2;
  out.derivative_order = std::min(a.derivative_order, b.derivative_order);
  out.samples.resize(a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const auto& x = a.samples[i];
    const auto& y = b.samples[i];
    if (std::abs(x.t - y.t) > 1e-12) throw InvalidArgument("field schedules have mismatched times");
    out.samples[i] = {x.t, x.b + y.b, x.db + y.db, x.d2b + y.d2b};
  }
  return out;
}

FieldSample reference_point(const AngleSample& a, double omega1, double omega2) {
  const double s = std::sin(a.theta);
  const double c = std::cos(a.theta);
  FieldSample f;
  f.t = a.t;
  f.b = Vector3d(omega2 * s, 0.0, omega1 + omega2 * c);
  f.db = Vector3d(omega2 * c * a.rate, 0.0, -omega2 * s * a.rate);
  f.d2b = Vector3d(omega2 * (c * a.accel - s * a.rate * a.rate), 0.0,
                   -omega2 * (s * a.accel + c * a.rate * a.rate));
  return f;
}

FieldSample counter_diabatic_point(const FieldSample& r) {
  const double norm2 = r.b.squaredNorm();
  if (std::sqrt(norm2) < kGapThreshold)
    throw GapClosure("reference field vanishes at t = " + std::to_string(r.t) + " ns");
  const Vector3d cross = r.b.cross(r.db);
  FieldSample f;
  f.t = r.t;
  f.b = cross / norm2;
  f.db = r.b.cross(r.d2b) / norm2 - 2.0 * r.b.dot(r.db) * cross / (norm2 * norm2);
  f.d2b.setZero();
  return f;
}

Vector3d counter_diabatic_general(double theta, double theta_rate, double phi, double phi_rate) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  return {-theta_rate * sp - phi_rate * st * ct * cp,  //
          theta_rate * cp - phi_rate * st * ct * sp,   //
          phi_rate * st * st};
}

PolarAngle field_polar_angle(const AngleSample& a, double omega1, double omega2) {
  const double c = std::cos(a.theta);
  const double s = std::sin(a.theta);
  const double r2 = omega1 * omega1 + omega2 * omega2 + 2.0 * omega1 * omega2 * c;
  if (std::sqrt(std::max(r2, 0.0)) < kGapThreshold)
    throw GapClosure("reference field vanishes at theta = " + std::to_string(a.theta));
  // d theta_q / d theta and its derivative with respect to theta
  const double slope = omega2 * (omega2 + omega1 * c) / r2;
  const double curvature = omega1 * omega2 * s * (omega2 * omega2 - omega1 * omega1) / (r2 * r2);
  PolarAngle q;
  q.value = std::atan2(omega2 * s, omega1 + omega2 * c);
  q.rate = slope * a.rate;
  q.accel = curvature * a.rate * a.rate + slope * a.accel;
  return q;
}

DragElements drag_elements(const AngleSample& a, double omega1, double omega2, double delta2) {
  if (delta2 == 0.0) throw InvalidArgument("anharmonicity must be nonzero");
  const PolarAngle q = field_polar_angle(a, omega1, omega2);
  const double bx = omega2 * std::sin(a.theta);
  const double bz = omega1 + omega2 * std::cos(a.theta);
  const double drag_x = (q.accel - bx * bz) / (2.0 * delta2);
  const double drag_y = -(omega2 * std::cos(a.theta) * a.rate + bz * q.rate) / (2.0 * delta2);
  return assemble_drag(Vector3d(bx, q.rate, bz), drag_x, drag_y, delta2);
}

DragElements drag_elements_from_field(const FieldSample& f, double delta2) {
  if (delta2 == 0.0) throw InvalidArgument("anharmonicity must be nonzero");
  const double drag_x = (f.db.y() - f.b.z() * f.b.x()) / (2.0 * delta2);
  const double drag_y = -(f.db.x() + f.b.z() * f.b.y()) / (2.0 * delta2);
  return assemble_drag(f.b, drag_x, drag_y, delta2);
}

FieldSchedule reference_field_transfer(const AngleSchedule& schedule, double omega) {
  require_positive(omega, "drive amplitude");
  return map_angles(schedule, FieldLabel::Reference, 0.0, omega, 2,
                    [&](const AngleSample& a) { return reference_point(a, 0.0, omega); });
}

FieldSchedule reference_field_ssh(const AngleSchedule& schedule, double omega1, double omega2) {
  require_positive(omega2, "intercell amplitude");
  if (omega1 < 0.0) throw InvalidArgument("intracell amplitude must be non-negative");
  return map_angles(schedule, FieldLabel::Reference, omega1, omega2, 2,
                    [&](const AngleSample& a) { return reference_point(a, omega1, omega2); });
}

FieldSchedule counter_diabatic_field(const FieldSchedule& reference) {
  if (reference.derivative_order < 1)
    throw InvalidArgument("counter-diabatic field needs the reference field derivative");
  FieldSchedule out;
  out.label = FieldLabel::CounterDiabatic;
  out.omega1 = reference.omega1;
  out.omega2 = reference.omega2;
  out.derivative_order = reference.derivative_order - 1;
  out.samples.reserve(reference.samples.size());
  for (const auto& r : reference.samples) {
    FieldSample f = counter_diabatic_point(r);
    if (out.derivative_order < 1) f.db.setZero();
    out.samples.push_back(f);
  }
  return out;
}

FieldSchedule drag_field_transfer(const AngleSchedule& schedule, double omega, double delta2) {
  require_positive(omega, "drive amplitude");
  if (delta2 == 0.0) throw InvalidArgument("anharmonicity must be nonzero");
  if (!schedule.shape.hanning_like())
    throw ConstraintViolation("DRAG endpoint conditions need a Hanning-window sweep");
  return map_angles(schedule, FieldLabel::Drag, 0.0, omega, 0, [&](const AngleSample& a) {
    FieldSample f;
    f.t = a.t;
    f.b.x() = (2.0 * a.accel - omega * omega * std::sin(2.0 * a.theta)) / (4.0 * delta2);
    f.b.y() = -(omega / delta2) * a.rate * std::cos(a.theta);
    return f;
  });
}

DragCorrection drag_field_ssh(const AngleSchedule& schedule, double omega1, double omega2,
                              double delta2) {
  require_positive(omega2, "intercell amplitude");
  if (!schedule.shape.hanning_like())
    throw ConstraintViolation("DRAG endpoint conditions need a Hanning-window sweep");
  DragCorrection out;
  out.elements.reserve(schedule.samples.size());
  out.field = map_angles(schedule, FieldLabel::Drag, omega1, omega2, 0, [&](const AngleSample& a) {
    out.elements.push_back(drag_elements(a, omega1, omega2, delta2));
    FieldSample f;
    f.t = a.t;
    f.b = out.elements.back().field;
    return f;
  });
  return out;
}

// ---------------------------------------------------------------------------

DriveSample DriveProgram::at(double t) const {
  if (samples.empty()) throw InvalidArgument("empty drive program");
  if (t <= samples.front().t) return samples.front();
  if (t >= samples.back().t) return samples.back();
  const double h = (samples.back().t - samples.front().t) / static_cast<double>(samples.size() - 1);
  auto i = static_cast<std::size_t>((t - samples.front().t) / h);
  i = std::min(i, samples.size() - 2);
  const auto& a = samples[i];
  const auto& b = samples[i + 1];
  const double u = (t - a.t) / (b.t - a.t);
  auto lerp = [u](double x, double y) { return x + u * (y - x); };
  return {t, lerp(a.envelope, b.envelope), lerp(a.phase, b.phase),
          lerp(a.detuning_phase, b.detuning_phase), lerp(a.relative_phase, b.relative_phase)};
}

DriveProgram synthesize_drive(const FieldSchedule& total, double carrier) {
  const auto& s = total.samples;
  if (s.size() < 2) throw InvalidArgument("drive synthesis needs at least two samples");
  const double h = (s.back().t - s.front().t) / static_cast<double>(s.size() - 1);
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs(s[i].t - s[i - 1].t - h) > 1e-9 * std::max(1.0, h))
      throw InvalidArgument("drive synthesis needs a uniform time grid");

  DriveProgram p;
  p.carrier = carrier;
  p.samples.resize(s.size());
  double xi = 0.0;
  double previous_phi = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Vector3d& b = s[i].b;
    if (i > 0) xi += 0.5 * (s[i].t - s[i - 1].t) * (s[i - 1].b.z() + b.z());
    double phi = std::atan2(b.y(), b.x());
    // unwrap so that Phi can be interpolated
    if (i > 0) phi += 2.0 * pi * std::round((previous_phi - phi) / (2.0 * pi));
    previous_phi = phi;
    p.samples[i] = {s[i].t, std::hypot(b.x(), b.y()), xi - phi, xi, phi};
  }
  return p;
}

std::vector<FieldSample> reconstruct_field(const DriveProgram& drive) {
  const auto& s = drive.samples;
  const std::size_t n = s.size();
  if (n < 3) throw InvalidArgument("field reconstruction needs at least three samples");
  std::vector<FieldSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double rate;
    if (i == 0) {
      rate = (-3.0 * s[0].detuning_phase + 4.0 * s[1].detuning_phase - s[2].detuning_phase) /
             (s[2].t - s[0].t);
    } else if (i + 1 == n) {
      rate = (3.0 * s[n - 1].detuning_phase - 4.0 * s[n - 2].detuning_phase +
              s[n - 3].detuning_phase) /
             (s[n - 1].t - s[n - 3].t);
    } else {
      rate = (s[i + 1].detuning_phase - s[i - 1].detuning_phase) / (s[i + 1].t - s[i - 1].t);
    }
    out[i].t = s[i].t;
    out[i].b = Vector3d(s[i].envelope * std::cos(s[i].relative_phase),
                        s[i].envelope * std::sin(s[i].relative_phase), rate);
  }
  return out;
}

// ---------------------------------------------------------------------------

StaProtocol::StaProtocol(ProtocolSpec spec) : spec_(spec) {
  require_positive(spec_.duration, "duration");
  require_positive(spec_.omega2, "drive amplitude");
  if (spec_.omega1 < 0.0) throw InvalidArgument("intracell amplitude must be non-negative");
  if (spec_.drag) {
    if (spec_.delta2 == 0.0) throw InvalidArgument("anharmonicity must be nonzero");
    if (!spec_.counter_diabatic)
      throw InvalidArgument("the DRAG correction is built on the counter-diabatic STA field");
    if (!spec_.shape.hanning_like())
      throw ConstraintViolation("DRAG endpoint conditions need a Hanning-window sweep");
  }
  if (spec_.counter_diabatic) {
    const auto grid = make_angle_schedule(spec_.shape, spec_.duration,
                                          samples_for_step(spec_.duration, 0.005));
    for (const auto& a : grid.samples) {
      counter_diabatic_point(reference_point(a, spec_.omega1, spec_.omega2));
      if (spec_.drag) field_polar_angle(a, spec_.omega1, spec_.omega2);
    }
  }
}

Vector3d StaProtocol::reference(double t) const {
  return reference_point(angle(t), spec_.omega1, spec_.omega2).b;
}

Vector3d StaProtocol::sta_field(double t) const {
  const FieldSample r = reference_point(angle(t), spec_.omega1, spec_.omega2);
  if (!spec_.counter_diabatic) return r.b;
  return r.b + counter_diabatic_point(r).b;
}

Vector3d StaProtocol::field(double t) const {
  Vector3d b = sta_field(t);
  if (spec_.drag) b += drag(t).field;
  return b;
}

DragElements StaProtocol::drag(double t) const {
  if (!spec_.drag) return {};
  return drag_elements(angle(t), spec_.omega1, spec_.omega2, spec_.delta2);
}

FieldSchedule StaProtocol::sample(double dt) const {
  const auto grid = make_angle_schedule(spec_.shape, spec_.duration,
                                        samples_for_step(spec_.duration, dt));
  FieldSchedule out;
  out.label = FieldLabel::Total;
  out.omega1 = spec_.omega1;
  out.omega2 = spec_.omega2;
  out.samples.reserve(grid.samples.size());
  for (const auto& a : grid.samples) {
    FieldSample f;
    f.t = a.t;
    f.b = field(a.t);
    out.samples.push_back(f);
  }
  return out;
}

}  // namespace stasim
