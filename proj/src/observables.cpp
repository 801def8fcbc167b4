#include "rotbec/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace rotbec {

namespace {

constexpr double kMassFloor = 1e-14;
constexpr double kTailFraction = 1e-10;

struct Kahan {
  double sum = 0.0, comp = 0.0;
  void add(double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Trapezoidal node weight along one axis: 1/2 on the boundary nodes. For
// boundary-zero fields this coincides with the interior rectangle rule,
// and it makes integrals of the cosine-type derivative fields exact.
double axis_weight(int i, int n) { return (i == 0 || i == n) ? 0.5 : 1.0; }

double cell_volume(const GridSpec& g) {
  double w = 1.0;
  for (int axis = 0; axis < g.dim(); ++axis) w *= g.spacing(axis);
  return w;
}

template <typename F>
double weighted_sum(const GridSpec& g, F&& f) {
  Kahan acc;
  if (g.dim() == 2) {
    for (int s = 0; s <= g.size(0); ++s) {
      const double wx = axis_weight(s, g.size(0));
      for (int l = 0; l <= g.size(1); ++l)
        acc.add(wx * axis_weight(l, g.size(1)) * f(s, l, 0));
    }
  } else {
    for (int s = 0; s <= g.size(0); ++s) {
      const double wx = axis_weight(s, g.size(0));
      for (int l = 0; l <= g.size(1); ++l) {
        const double wxy = wx * axis_weight(l, g.size(1));
        for (int m = 0; m <= g.size(2); ++m)
          acc.add(wxy * axis_weight(m, g.size(2)) * f(s, l, m));
      }
    }
  }
  return acc.sum * cell_volume(g);
}

}  // namespace

std::vector<double> component_mass(const CoupledState& state) {
  std::vector<double> masses;
  masses.reserve(state.components.size());
  for (const auto& comp : state.components)
    masses.push_back(inner_product(comp, comp).real());
  return masses;
}

double energy(const CoupledState& state, const CgpeParams& params, double t) {
  if (state.num_components() != 2)
    throw std::invalid_argument("energy: defined for the two-component system");
  const GridSpec& g = state.grid();
  const int d = g.dim();

  std::vector<ComplexField> dx, dy, dz;
  for (const auto& comp : state.components) {
    dx.push_back(partial_derivative(comp, 0));
    dy.push_back(partial_derivative(comp, 1));
    if (d == 3) dz.push_back(partial_derivative(comp, 2));
  }

  const QuadraticCoeffs* wcoeffs[2] = {nullptr, nullptr};
  QuadraticCoeffs wc[2];
  for (int j = 0; j < 2; ++j)
    if (const auto* trap = std::get_if<HarmonicTrap>(&params.traps[j])) {
      wc[j] = harmonic_effective_coeffs(*trap, t, params.omega);
      wcoeffs[j] = &wc[j];
    }

  return weighted_sum(g, [&](int s, int l, int m) {
    const Point x = g.node_point(s, l, m);
    double e = 0.0;
    for (int j = 0; j < 2; ++j) {
      const Complex phi = state.components[j](s, l, m);
      const double rho = std::norm(phi);
      double grad2 = std::norm(dx[j](s, l, m)) + std::norm(dy[j](s, l, m));
      if (d == 3) grad2 += std::norm(dz[j](s, l, m));
      const double w = wcoeffs[j] ? wcoeffs[j]->eval(x)
                                  : effective_potential(params.traps[j], x, t, params.omega);
      // L_z phi = -i (x d_y - y d_x) phi
      const Complex lzphi =
          Complex(0.0, -1.0) * (x[0] * dy[j](s, l, m) - x[1] * dx[j](s, l, m));
      e += 0.5 * grad2 + w * rho + 0.5 * params.beta[j][j] * rho * rho -
           params.omega * (std::conj(phi) * lzphi).real();
    }
    const Complex p1 = state.components[0](s, l, m);
    const Complex p2 = state.components[1](s, l, m);
    e += params.beta[0][1] * std::norm(p1) * std::norm(p2) -
         2.0 * params.lambda * (p1 * std::conj(p2)).real();
    return e;
  });
}

AngularMomentum angular_momentum(const CoupledState& state) {
  const GridSpec& g = state.grid();
  AngularMomentum result;
  Kahan total;
  for (const auto& comp : state.components) {
    const ComplexField dx = partial_derivative(comp, 0);
    const ComplexField dy = partial_derivative(comp, 1);
    const double lz_int = weighted_sum(g, [&](int s, int l, int m) {
      const Complex phi = comp(s, l, m);
      const Point x = g.node_point(s, l, m);
      const Complex lzphi = Complex(0.0, -1.0) * (x[0] * dy(s, l, m) - x[1] * dx(s, l, m));
      return (std::conj(phi) * lzphi).real();
    });
    const double mass = inner_product(comp, comp).real();
    if (mass > kMassFloor)
      result.per_component.push_back(lz_int / mass);
    else
      result.per_component.push_back(std::nullopt);
    total.add(lz_int);
  }
  result.total = total.sum;
  return result;
}

CondensateWidths condensate_widths(const CoupledState& state, double t, double omega) {
  const GridSpec& g = state.grid();
  // Lagrangian second moments of the total density.
  double mxx = 0.0, myy = 0.0, mxy = 0.0, mzz = 0.0, mass = 0.0, ring = 0.0;
  {
    Kahan axx, ayy, axy, azz, am, aring;
    auto accumulate = [&](int s, int l, int m) {
      double rho = 0.0;
      for (const auto& comp : state.components) rho += std::norm(comp(s, l, m));
      const Point x = g.node_point(s, l, m);
      axx.add(rho * x[0] * x[0]);
      ayy.add(rho * x[1] * x[1]);
      axy.add(rho * x[0] * x[1]);
      if (g.dim() == 3) azz.add(rho * x[2] * x[2]);
      am.add(rho);
      const bool adjacent = s == 1 || s == g.size(0) - 1 || l == 1 || l == g.size(1) - 1 ||
                            (g.dim() == 3 && (m == 1 || m == g.size(2) - 1));
      if (adjacent) aring.add(rho);
    };
    if (g.dim() == 2) {
      for (int s = 1; s < g.size(0); ++s)
        for (int l = 1; l < g.size(1); ++l) accumulate(s, l, 0);
    } else {
      for (int s = 1; s < g.size(0); ++s)
        for (int l = 1; l < g.size(1); ++l)
          for (int m = 1; m < g.size(2); ++m) accumulate(s, l, m);
    }
    const double vol = cell_volume(g);
    mxx = axx.sum * vol;
    myy = ayy.sum * vol;
    mxy = axy.sum * vol;
    mzz = azz.sum * vol;
    mass = am.sum * vol;
    ring = aring.sum * vol;
  }

  // Eulerian moments through x = cos(th) xt + sin(th) yt,
  // y = -sin(th) xt + cos(th) yt with th = Omega t.
  const double th = omega * t;
  const double c = std::cos(th), s = std::sin(th);
  const double dx2 = c * c * mxx + s * s * myy + std::sin(2.0 * th) * mxy;
  const double dy2 = s * s * mxx + c * c * myy - std::sin(2.0 * th) * mxy;

  CondensateWidths w;
  w.sigma_x = std::sqrt(std::max(0.0, dx2));
  w.sigma_y = std::sqrt(std::max(0.0, dy2));
  w.sigma_r = std::sqrt(w.sigma_x * w.sigma_x + w.sigma_y * w.sigma_y);
  if (g.dim() == 3) w.sigma_z = std::sqrt(std::max(0.0, mzz));
  w.tail_warning = mass > 0.0 && ring > kTailFraction * mass;
  return w;
}

DiagnosticsRecord sample_diagnostics(const CoupledState& state, const CgpeParams& params) {
  DiagnosticsRecord rec;
  rec.t = state.t;
  rec.mass = component_mass(state);
  Kahan total;
  for (double nj : rec.mass) total.add(nj);
  rec.mass_total = total.sum;
  rec.energy = energy(state, params, state.t);
  const AngularMomentum lz = angular_momentum(state);
  rec.lz = lz.per_component;
  rec.lz_total = lz.total;
  const CondensateWidths w = condensate_widths(state, state.t, params.omega);
  rec.sigma_x = w.sigma_x;
  rec.sigma_y = w.sigma_y;
  rec.sigma_z = w.sigma_z;
  rec.sigma_r = w.sigma_r;
  rec.tail_warning = w.tail_warning;
  return rec;
}

}  // namespace rotbec
