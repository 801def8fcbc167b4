#pragma once

#include <array>
#include <functional>
#include <variant>

#include "rotbec/spectral_grid.hpp"

// Rotating Lagrangian coordinates: x = A(t)*xt with A the rotation about
// the z axis by angle Omega*t. In these coordinates the angular momentum
// term drops out of the equations and the trap turns into the effective
// potential W_j(xt,t) = V_j(A(t)*xt).

namespace rotbec {

struct Mat3 {
  std::array<std::array<double, 3>, 3> a{};

  Point apply(const Point& p) const {
    return {a[0][0] * p[0] + a[0][1] * p[1] + a[0][2] * p[2],
            a[1][0] * p[0] + a[1][1] * p[1] + a[1][2] * p[2],
            a[2][0] * p[0] + a[2][1] * p[1] + a[2][2] * p[2]};
  }
  Mat3 transposed() const {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t.a[i][j] = a[j][i];
    return t;
  }
  static Mat3 identity();
};

// A(t): planar rotation by Omega*t; the z axis is fixed, so the same
// matrix serves d=2 (upper-left block) and d=3.
Mat3 rotation_matrix(double t, double omega);

enum class FrameMap {
  kEulerianToLagrangian,  // xt = A^T(t) x
  kLagrangianToEulerian,  // x = A(t) xt
};

Point map_point(const Point& p, double t, double omega, FrameMap direction);

// Harmonic trap V(x) = (gx^2 x^2 + gy^2 y^2 (+ gz^2 z^2))/2 for one
// component. Frequencies must be positive.
struct HarmonicTrap {
  double gamma_x = 1.0;
  double gamma_y = 1.0;
  double gamma_z = 0.0;  // unused in 2D
};

// User-supplied potential V(x[,t]); `time_dependent` records whether the
// callback actually reads t. The phase integral over a custom potential is
// done with composite Simpson quadrature using `simpson_panels` panels.
struct CustomPotential {
  std::function<double(const Point&, double)> potential;
  bool time_dependent = false;
  int simpson_panels = 8;
};

using PotentialSpec = std::variant<HarmonicTrap, CustomPotential>;

void validate(const PotentialSpec& spec);

// Coefficients of a quadratic form c_r2*(x^2+y^2) + c_d2*(x^2-y^2) +
// c_xy*(x*y) + c_z2*z^2. Both the harmonic effective potential and its
// time integral take this shape, which is what makes the potential substep
// cheap: per node it is three fused multiply-adds.
struct QuadraticCoeffs {
  double r2 = 0.0, d2 = 0.0, xy = 0.0, z2 = 0.0;

  double eval(const Point& p) const {
    const double x = p[0], y = p[1], z = p[2];
    return r2 * (x * x + y * y) + d2 * (x * x - y * y) + xy * (x * y) + z2 * (z * z);
  }
};

// W(xt,t) = V(A(t) xt) for a harmonic trap, expanded in cos(2*Omega*t) and
// sin(2*Omega*t).
QuadraticCoeffs harmonic_effective_coeffs(const HarmonicTrap& trap, double t, double omega);

// int_{t0}^{t1} W(xt,tau) dtau in closed form (valid for t1 < t0 as the
// signed integral; exact in the Omega -> 0 limit).
QuadraticCoeffs harmonic_phase_coeffs(const HarmonicTrap& trap, double t0, double t1,
                                      double omega);

// W_j(xt,t): harmonic closed form, or V(A(t) xt, t) for a custom potential.
double effective_potential(const PotentialSpec& spec, const Point& xt, double t, double omega);

// int_{t_n}^{t} W(xt,tau) dtau. Throws if t < t_n. The custom branch uses
// composite Simpson with the spec's panel count unless overridden.
double phase_integral(const PotentialSpec& spec, const Point& xt, double t_n, double t,
                      double omega);
double phase_integral(const PotentialSpec& spec, const Point& xt, double t_n, double t,
                      double omega, int panels);

// Signed Simpson integral of W over [t0,t1]; used internally and by the
// solvers (which may pass merged windows and scaled panel counts).
double simpson_phase_integral(const CustomPotential& spec, const Point& xt, double t0, double t1,
                              double omega, int panels);

}  // namespace rotbec
