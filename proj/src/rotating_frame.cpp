#include "rotbec/rotating_frame.hpp"

#include <cmath>
#include <stdexcept>

namespace rotbec {

namespace {

// sin(w*d)/w, continuous at w = 0.
double sinc_scaled(double w, double d) {
  const double x = w * d;
  if (std::abs(x) < 1e-8) return d * (1.0 - x * x / 6.0);
  return std::sin(x) / w;
}

}  // namespace

Mat3 Mat3::identity() {
  Mat3 m;
  m.a = {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  return m;
}

Mat3 rotation_matrix(double t, double omega) {
  const double c = std::cos(omega * t), s = std::sin(omega * t);
  Mat3 m;
  m.a = {{{c, s, 0.0}, {-s, c, 0.0}, {0.0, 0.0, 1.0}}};
  return m;
}

Point map_point(const Point& p, double t, double omega, FrameMap direction) {
  const Mat3 A = rotation_matrix(t, omega);
  return direction == FrameMap::kLagrangianToEulerian ? A.apply(p) : A.transposed().apply(p);
}

void validate(const PotentialSpec& spec) {
  if (const auto* trap = std::get_if<HarmonicTrap>(&spec)) {
    if (!(trap->gamma_x > 0.0) || !(trap->gamma_y > 0.0))
      throw std::invalid_argument("HarmonicTrap: trap frequencies must be positive");
    if (trap->gamma_z < 0.0)
      throw std::invalid_argument("HarmonicTrap: gamma_z must be nonnegative");
  } else {
    const auto& custom = std::get<CustomPotential>(spec);
    if (!custom.potential) throw std::invalid_argument("CustomPotential: missing callback");
    if (custom.simpson_panels < 1)
      throw std::invalid_argument("CustomPotential: simpson_panels must be >= 1");
  }
}

QuadraticCoeffs harmonic_effective_coeffs(const HarmonicTrap& trap, double t, double omega) {
  const double gx2 = trap.gamma_x * trap.gamma_x;
  const double gy2 = trap.gamma_y * trap.gamma_y;
  QuadraticCoeffs c;
  c.r2 = 0.25 * (gx2 + gy2);
  c.d2 = 0.25 * (gx2 - gy2) * std::cos(2.0 * omega * t);
  c.xy = 0.5 * (gx2 - gy2) * std::sin(2.0 * omega * t);
  c.z2 = 0.5 * trap.gamma_z * trap.gamma_z;
  return c;
}

QuadraticCoeffs harmonic_phase_coeffs(const HarmonicTrap& trap, double t0, double t1,
                                      double omega) {
  const double gx2 = trap.gamma_x * trap.gamma_x;
  const double gy2 = trap.gamma_y * trap.gamma_y;
  const double dt = t1 - t0;
  // sin(2wt1)-sin(2wt0) = 2 cos(w(t1+t0)) sin(w dt) and
  // cos(2wt1)-cos(2wt0) = -2 sin(w(t1+t0)) sin(w dt); dividing by Omega
  // through sinc keeps the formulas exact at Omega = 0.
  const double mid = omega * (t1 + t0);
  const double s = sinc_scaled(omega, dt);
  QuadraticCoeffs c;
  c.r2 = 0.25 * (gx2 + gy2) * dt;
  c.d2 = 0.25 * (gx2 - gy2) * std::cos(mid) * s;
  c.xy = 0.5 * (gx2 - gy2) * std::sin(mid) * s;
  c.z2 = 0.5 * trap.gamma_z * trap.gamma_z * dt;
  return c;
}

double effective_potential(const PotentialSpec& spec, const Point& xt, double t, double omega) {
  if (const auto* trap = std::get_if<HarmonicTrap>(&spec))
    return harmonic_effective_coeffs(*trap, t, omega).eval(xt);
  const auto& custom = std::get<CustomPotential>(spec);
  return custom.potential(map_point(xt, t, omega, FrameMap::kLagrangianToEulerian), t);
}

double simpson_phase_integral(const CustomPotential& spec, const Point& xt, double t0, double t1,
                              double omega, int panels) {
  if (panels < 1) panels = 1;
  const double h = (t1 - t0) / (2 * panels);
  double sum = 0.0;
  for (int i = 0; i <= 2 * panels; ++i) {
    const double tau = t0 + i * h;
    const double w =
        spec.potential(map_point(xt, tau, omega, FrameMap::kLagrangianToEulerian), tau);
    const double weight = (i == 0 || i == 2 * panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += weight * w;
  }
  return sum * h / 3.0;
}

double phase_integral(const PotentialSpec& spec, const Point& xt, double t_n, double t,
                      double omega) {
  const auto* custom = std::get_if<CustomPotential>(&spec);
  return phase_integral(spec, xt, t_n, t, omega, custom ? custom->simpson_panels : 0);
}

double phase_integral(const PotentialSpec& spec, const Point& xt, double t_n, double t,
                      double omega, int panels) {
  if (t < t_n) throw std::invalid_argument("phase_integral: requires t >= t_n");
  if (const auto* trap = std::get_if<HarmonicTrap>(&spec))
    return harmonic_phase_coeffs(*trap, t_n, t, omega).eval(xt);
  return simpson_phase_integral(std::get<CustomPotential>(spec), xt, t_n, t, omega, panels);
}

}  // namespace rotbec
