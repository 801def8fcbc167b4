#include "rotbec/verify.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "rotbec/observables.hpp"
#include "rotbec/oracle.hpp"
#include "rotbec/run.hpp"
#include "rotbec/vgpe_solver.hpp"

namespace rotbec {

namespace {

ComplexField random_field(const GridSpec& grid, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ComplexField f(grid);
  auto fill = [&](int s, int l, int m) { f(s, l, m) = Complex(dist(rng), dist(rng)); };
  if (grid.dim() == 2) {
    for (int s = 1; s < grid.size(0); ++s)
      for (int l = 1; l < grid.size(1); ++l) fill(s, l, 0);
  } else {
    for (int s = 1; s < grid.size(0); ++s)
      for (int l = 1; l < grid.size(1); ++l)
        for (int m = 1; m < grid.size(2); ++m) fill(s, l, m);
  }
  return f;
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

struct Harness {
  std::ostream& out;
  int failures = 0;

  void check(const char* name, double value, double bound) {
    const bool ok = value <= bound;
    char line[160];
    std::snprintf(line, sizeof(line), "[%s] %-46s %.3e (bound %.1e)\n", ok ? "PASS" : "FAIL",
                  name, value, bound);
    out << line;
    if (!ok) ++failures;
  }
};

CgpeParams sec51_params(double dt) {
  CgpeParams p;
  p.dt = dt;
  p.omega = 0.4;
  p.lambda = 1.0;
  p.beta = {{{51.5, 50.0}, {50.0, 48.5}}};
  p.traps = {HarmonicTrap{1.0, 1.0, 0.0}, HarmonicTrap{1.0, 1.0, 0.0}};
  return p;
}

CoupledState small_gaussian_state(const GridSpec& grid) {
  auto psi1 = [](const Point& x) {
    return Complex(std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])) / std::sqrt(2.0 * M_PI), 0.0);
  };
  auto psi2 = [](const Point& x) {
    const double amp = std::pow(1.5, 0.25) / std::sqrt(2.0 * M_PI);
    return Complex(amp * std::exp(-0.5 * (x[0] * x[0] + 1.5 * x[1] * x[1])), 0.0);
  };
  return init_from_function(grid, psi1, psi2).state;
}

}  // namespace

int run_verification(std::ostream& out) {
  Harness h{out};

  // Transform identities.
  {
    const GridSpec grid(BoxDomain::box2d(-16.0, 16.0, -12.0, 12.0), 24, 16);
    const ComplexField f = random_field(grid, 11);
    h.check("dst round trip (2D)", max_abs_diff(dst_inverse(dst_forward(f)), f), 1e-12);

    const double direct = inner_product(f, f).real();
    const SpectralField hat = dst_forward(f);
    double parseval = 0.0;
    for (int p = 1; p < grid.size(0); ++p)
      for (int q = 1; q < grid.size(1); ++q) parseval += std::norm(hat.at(p, q));
    parseval *= 0.25 * grid.box().length(0) * grid.box().length(1);
    h.check("Parseval identity", std::abs(parseval - direct) / direct, 1e-10);

    const GridSpec g3(BoxDomain::box3d(-4.0, 4.0, -4.0, 4.0, -4.0, 4.0), 8, 8, 8);
    const ComplexField f3 = random_field(g3, 12);
    h.check("dst round trip (3D)", max_abs_diff(dst_inverse(dst_forward(f3)), f3), 1e-12);
  }

  // Rotation geometry.
  {
    double worst_orth = 0.0, worst_rt = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double t = 0.173 * i;
      const Mat3 A = rotation_matrix(t, 0.7);
      const Mat3 At = A.transposed();
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
          double dot = 0.0;
          for (int k = 0; k < 3; ++k) dot += At.a[r][k] * A.a[k][c];
          worst_orth = std::max(worst_orth, std::abs(dot - (r == c ? 1.0 : 0.0)));
        }
      const Point p{1.3, -0.4, 0.2};
      const Point back = map_point(map_point(p, t, 0.7, FrameMap::kLagrangianToEulerian), t, 0.7,
                                   FrameMap::kEulerianToLagrangian);
      for (int k = 0; k < 3; ++k) worst_rt = std::max(worst_rt, std::abs(back[k] - p[k]));
    }
    h.check("rotation matrix orthogonality", worst_orth, 1e-15);
    h.check("coordinate map round trip", worst_rt, 1e-14);
  }

  // Harmonic phase integral against brute-force quadrature.
  {
    const HarmonicTrap trap{1.05, 0.9, 0.0};
    const PotentialSpec spec = trap;
    CustomPotential dense;
    dense.potential = [&](const Point& x, double) {
      return 0.5 * (trap.gamma_x * trap.gamma_x * x[0] * x[0] +
                    trap.gamma_y * trap.gamma_y * x[1] * x[1]);
    };
    dense.simpson_panels = 4096;
    const Point x{1.0, 2.0, 0.0};
    const double analytic = phase_integral(spec, x, 0.0, 0.1, 0.6);
    const double quad = phase_integral(PotentialSpec{dense}, x, 0.0, 0.1, 0.6);
    h.check("harmonic phase integral vs quadrature", std::abs(analytic - quad), 1e-12);
  }

  // Splitting solver against the dense RK4 reference.
  {
    const GridSpec grid(BoxDomain::square2d(-8.0, 8.0), 16, 16);
    const CgpeParams params = sec51_params(1e-4);
    CoupledState split = small_gaussian_state(grid);
    const CoupledState ref =
        oracle::rk4_reference(small_gaussian_state(grid), params, 0.1, 1e-5);
    CgpeSolver solver(grid, params);
    solver.evolve(split, 1000, {}, 0);
    h.check("splitting vs RK4 oracle (l2, t=0.1)", composite_l2_error(split, ref), 1e-6);
  }

  // Conservation on a short run.
  {
    const GridSpec grid(BoxDomain::square2d(-8.0, 8.0), 32, 32);
    CgpeParams params = sec51_params(1e-3);
    CgpeSolver solver(grid, params);
    CoupledState state = small_gaussian_state(grid);
    const double n0 = sample_diagnostics(state, params).mass_total;
    double worst = 0.0;
    solver.evolve(state, 200,
                  [&](const CoupledState& s, std::int64_t) {
                    const auto mass = component_mass(s);
                    worst = std::max(worst, std::abs(mass[0] + mass[1] - n0) / n0);
                  },
                  50);
    h.check("total mass conservation (200 steps)", worst, 1e-12);

    params.lambda = 0.0;
    CgpeSolver solver0(grid, params);
    state = small_gaussian_state(grid);
    const auto m0 = component_mass(state);
    solver0.evolve(state, 200, {}, 0);
    const auto m1 = component_mass(state);
    const double drift = std::max(std::abs(m1[0] - m0[0]) / m0[0], std::abs(m1[1] - m0[1]) / m0[1]);
    h.check("per-component mass, lambda = 0", drift, 1e-12);
  }

  // Time reversibility: forward then backward with negated dt.
  {
    const GridSpec grid(BoxDomain::square2d(-8.0, 8.0), 32, 32);
    CgpeParams params = sec51_params(1e-3);
    CoupledState state = small_gaussian_state(grid);
    const CoupledState start = state;
    CgpeSolver fwd(grid, params);
    fwd.evolve(state, 50, {}, 0);
    params.dt = -params.dt;
    CgpeSolver bwd(grid, params);
    bwd.evolve(state, 50, {}, 0);
    h.check("time reversibility (50 steps)", composite_l2_error(state, start), 1e-10);
  }

  // M = 2 VGPE reduction against the two-component solver.
  {
    const GridSpec grid(BoxDomain::square2d(-8.0, 8.0), 32, 32);
    const double lambda = 1.0;
    CgpeParams cparams = sec51_params(1e-3);
    cparams.lambda = lambda;
    VgpeParams vparams;
    vparams.beta = Eigen::MatrixXd{{51.5, 50.0}, {50.0, 48.5}};
    vparams.omega = cparams.omega;
    vparams.dt = cparams.dt;
    vparams.traps = {cparams.traps[0], cparams.traps[1]};
    vparams.drive.B = Eigen::MatrixXd{{0.0, -lambda}, {-lambda, 0.0}};
    vparams.drive.g = 1.0;

    CoupledState a = small_gaussian_state(grid);
    CoupledState b = a;
    CgpeSolver cs(grid, cparams);
    VgpeSolver vs(grid, vparams);
    cs.evolve(a, 100, {}, 0);
    vs.evolve(b, 100, {}, 0);
    h.check("VGPE M=2 reduction (100 steps)", composite_l2_error(a, b), 1e-10);
  }

  out << (h.failures == 0 ? "verification: all checks passed\n"
                          : "verification: FAILURES detected\n");
  return h.failures;
}

}  // namespace rotbec
