#include "rotbec/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace rotbec::oracle {

namespace {

void check_tiny_grid(const GridSpec& g) {
  for (int axis = 0; axis < g.dim(); ++axis)
    if (g.size(axis) > 32)
      throw std::invalid_argument("oracle: grids larger than 32 per axis are not supported");
}

// out += scale * rhs
void axpy(CoupledState& out, const CoupledState& rhs, double scale) {
  for (int j = 0; j < out.num_components(); ++j) {
    Complex* o = out.components[j].data();
    const Complex* r = rhs.components[j].data();
    for (std::size_t i = 0; i < out.components[j].size(); ++i) o[i] += scale * r[i];
  }
}

}  // namespace

CoupledState apply_rhs(const CoupledState& state, const CgpeParams& params, double t) {
  check_tiny_grid(state.grid());
  if (state.num_components() != 2)
    throw std::invalid_argument("oracle::apply_rhs: two-component states only");
  const GridSpec& g = state.grid();

  // -1/2 Lap phi_j via the sine expansion.
  std::vector<ComplexField> kin;
  for (const auto& comp : state.components) {
    SpectralField hat = dst_forward(comp);
    if (g.dim() == 2) {
      for (int p = 1; p < g.size(0); ++p)
        for (int q = 1; q < g.size(1); ++q) hat.at(p, q) *= 0.5 * laplacian_symbol(g, p, q);
    } else {
      for (int p = 1; p < g.size(0); ++p)
        for (int q = 1; q < g.size(1); ++q)
          for (int r = 1; r < g.size(2); ++r)
            hat.at(p, q, r) *= 0.5 * laplacian_symbol(g, p, q, r);
    }
    kin.push_back(dst_inverse(hat));
  }

  CoupledState deriv;
  deriv.t = state.t;
  for (int j = 0; j < 2; ++j) deriv.components.emplace_back(g);
  auto eval = [&](int s, int l, int m) {
    const Point x = g.node_point(s, l, m);
    const double rho1 = std::norm(state.components[0](s, l, m));
    const double rho2 = std::norm(state.components[1](s, l, m));
    for (int j = 0; j < 2; ++j) {
      const Complex phi = state.components[j](s, l, m);
      const double w = effective_potential(params.traps[j], x, t, params.omega);
      const double f = params.beta[j][0] * rho1 + params.beta[j][1] * rho2;
      const Complex h = kin[j](s, l, m) + (w + f) * phi;
      deriv.components[j](s, l, m) = Complex(0.0, -1.0) * h +
                                     Complex(0.0, params.lambda) *
                                         state.components[1 - j](s, l, m);
    }
  };
  if (g.dim() == 2) {
    for (int s = 1; s < g.size(0); ++s)
      for (int l = 1; l < g.size(1); ++l) eval(s, l, 0);
  } else {
    for (int s = 1; s < g.size(0); ++s)
      for (int l = 1; l < g.size(1); ++l)
        for (int m = 1; m < g.size(2); ++m) eval(s, l, m);
  }
  return deriv;
}

CoupledState rk4_reference(CoupledState state, const CgpeParams& params, double t_end,
                           double dt_ref) {
  check_tiny_grid(state.grid());
  if (!(dt_ref > 0.0) || dt_ref > 1e-4)
    throw std::invalid_argument("oracle::rk4_reference: dt_ref must be in (0, 1e-4]");
  if (t_end < state.t)
    throw std::invalid_argument("oracle::rk4_reference: t_end must be >= state.t");

  while (state.t < t_end - 1e-15) {
    const double h = std::min(dt_ref, t_end - state.t);
    const double t = state.t;

    CoupledState k1 = apply_rhs(state, params, t);
    CoupledState stage = state;
    axpy(stage, k1, 0.5 * h);
    CoupledState k2 = apply_rhs(stage, params, t + 0.5 * h);
    stage = state;
    axpy(stage, k2, 0.5 * h);
    CoupledState k3 = apply_rhs(stage, params, t + 0.5 * h);
    stage = state;
    axpy(stage, k3, h);
    CoupledState k4 = apply_rhs(stage, params, t + h);

    axpy(state, k1, h / 6.0);
    axpy(state, k2, h / 3.0);
    axpy(state, k3, h / 3.0);
    axpy(state, k4, h / 6.0);
    state.t = t + h;
  }
  return state;
}

}  // namespace rotbec::oracle
