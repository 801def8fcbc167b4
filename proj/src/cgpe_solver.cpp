#include "rotbec/cgpe_solver.hpp"

#include <cmath>
#include <stdexcept>

#include "solver_detail.hpp"

namespace rotbec {

bool state_is_finite(const CoupledState& state) {
  for (const auto& comp : state.components)
    for (std::size_t i = 0; i < comp.size(); ++i) {
      const Complex v = comp.data()[i];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  return true;
}

InitReport init_from_functions(const GridSpec& grid,
                               const std::vector<InitialFunction>& funcs) {
  InitReport report;
  report.state.t = 0.0;
  for (const auto& f : funcs) {
    ComplexField field(grid);
    auto sample = [&](int s, int l, int m) {
      const Complex v = f(grid.node_point(s, l, m));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::runtime_error("init_from_functions: non-finite initial sample");
      field(s, l, m) = v;
    };
    // Interior only; the boundary stays at its zero initialization.
    if (grid.dim() == 2) {
      for (int s = 1; s < grid.size(0); ++s)
        for (int l = 1; l < grid.size(1); ++l) sample(s, l, 0);
    } else {
      for (int s = 1; s < grid.size(0); ++s)
        for (int l = 1; l < grid.size(1); ++l)
          for (int m = 1; m < grid.size(2); ++m) sample(s, l, m);
    }
    const double mass = inner_product(field, field).real();
    report.component_mass.push_back(mass);
    report.total_mass += mass;
    report.state.components.push_back(std::move(field));
  }
  return report;
}

InitReport init_from_function(const GridSpec& grid, const InitialFunction& psi1,
                              const InitialFunction& psi2) {
  return init_from_functions(grid, {psi1, psi2});
}

CgpeSolver::CgpeSolver(const GridSpec& grid, const CgpeParams& params)
    : grid_(grid), params_(params) {
  if (!(params.dt != 0.0) || !std::isfinite(params.dt))
    throw std::invalid_argument("CgpeSolver: dt must be nonzero and finite");
  if (params.beta[0][1] != params.beta[1][0])
    throw std::invalid_argument("CgpeSolver: beta must be symmetric");
  if (!std::isfinite(params.lambda) || !std::isfinite(params.omega))
    throw std::invalid_argument("CgpeSolver: non-finite parameter");
  for (const auto& trap : params.traps) validate(trap);

  detail::fill_symbol_table(grid_, symbol_);
  kin_phase_dt_.resize(symbol_.size());
  for (std::size_t i = 0; i < symbol_.size(); ++i)
    kin_phase_dt_[i] = std::polar(1.0, -0.5 * params_.dt * symbol_[i]);
  detail::fill_quadratics(grid_, quad_);
  for (auto& r : rho_) r.assign(static_cast<std::size_t>(grid_.node_count()), 0.0);
  for (auto& c : coeff_) c = SpectralField(grid_);
}

void CgpeSolver::check_state(const CoupledState& state) const {
  if (state.num_components() != 2)
    throw std::invalid_argument("CgpeSolver: state must have exactly 2 components");
  for (const auto& comp : state.components)
    if (comp.grid() != grid_) throw std::invalid_argument("CgpeSolver: state grid mismatch");
}

void CgpeSolver::apply_potential_phase(CoupledState& state, double t0, double t1) {
  const double duration = t1 - t0;
  if (duration == 0.0) return;
  const std::size_t n = static_cast<std::size_t>(grid_.node_count());
  for (int k = 0; k < 2; ++k) {
    const Complex* v = state.components[k].data();
    double* rho = rho_[k].data();
    for (std::size_t i = 0; i < n; ++i) rho[i] = std::norm(v[i]);
  }
  for (int j = 0; j < 2; ++j) {
    Complex* v = state.components[j].data();
    const double b0 = duration * params_.beta[j][0];
    const double b1 = duration * params_.beta[j][1];
    const double* r0 = rho_[0].data();
    const double* r1 = rho_[1].data();
    if (const auto* trap = std::get_if<HarmonicTrap>(&params_.traps[j])) {
      const QuadraticCoeffs c = harmonic_phase_coeffs(*trap, t0, t1, params_.omega);
      const double* q0 = quad_[0].data();
      const double* q1 = quad_[1].data();
      const double* q2 = quad_[2].data();
      const double* q3 = quad_[3].data();
      for (std::size_t i = 0; i < n; ++i) {
        const double theta =
            b0 * r0[i] + b1 * r1[i] + c.r2 * q0[i] + c.d2 * q1[i] + c.xy * q2[i] + c.z2 * q3[i];
        v[i] *= Complex(std::cos(theta), -std::sin(theta));
      }
    } else {
      const auto& custom = std::get<CustomPotential>(params_.traps[j]);
      const int panels =
          detail::scaled_panels(custom.simpson_panels, duration, 0.5 * std::abs(params_.dt));
      auto point_phase = [&](int s, int l, int m) {
        const std::int64_t i = grid_.node_index(s, l, m);
        const double theta =
            b0 * r0[i] + b1 * r1[i] +
            simpson_phase_integral(custom, grid_.node_point(s, l, m), t0, t1, params_.omega,
                                   panels);
        v[i] *= Complex(std::cos(theta), -std::sin(theta));
      };
      if (grid_.dim() == 2) {
        for (int s = 1; s < grid_.size(0); ++s)
          for (int l = 1; l < grid_.size(1); ++l) point_phase(s, l, 0);
      } else {
        for (int s = 1; s < grid_.size(0); ++s)
          for (int l = 1; l < grid_.size(1); ++l)
            for (int m = 1; m < grid_.size(2); ++m) point_phase(s, l, m);
      }
    }
  }
}

void CgpeSolver::apply_kinetic(CoupledState& state, double duration) {
  dst_forward_into(state.components[0], coeff_[0]);
  dst_forward_into(state.components[1], coeff_[1]);
  const double c = std::cos(params_.lambda * duration);
  const double s = std::sin(params_.lambda * duration);
  Complex* c0 = coeff_[0].data();
  Complex* c1 = coeff_[1].data();
  const std::size_t n = coeff_[0].size();
  const bool cached = duration == params_.dt;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex phase =
        cached ? kin_phase_dt_[i] : std::polar(1.0, -0.5 * duration * symbol_[i]);
    const Complex a = c0[i], b = c1[i];
    c0[i] = phase * (c * a + Complex(-s * b.imag(), s * b.real()));
    c1[i] = phase * (c * b + Complex(-s * a.imag(), s * a.real()));
  }
  dst_inverse_into(coeff_[0], state.components[0]);
  dst_inverse_into(coeff_[1], state.components[1]);
}

void CgpeSolver::potential_half_step(CoupledState& state, double t_n, double duration) {
  check_state(state);
  apply_potential_phase(state, t_n, t_n + duration);
}

void CgpeSolver::kinetic_josephson_step(CoupledState& state, double duration) {
  check_state(state);
  apply_kinetic(state, duration);
}

void CgpeSolver::strang_step(CoupledState& state) {
  check_state(state);
  const double t_n = state.t;
  const double dt = params_.dt;
  apply_potential_phase(state, t_n, t_n + 0.5 * dt);
  apply_kinetic(state, dt);
  apply_potential_phase(state, t_n + 0.5 * dt, t_n + dt);
  state.t = t_n + dt;
}

void CgpeSolver::evolve(CoupledState& state, std::int64_t n_steps, const Observer& observer,
                        std::int64_t sample_every) {
  check_state(state);
  if (n_steps < 0) throw std::invalid_argument("evolve: n_steps must be >= 0");
  if (observer) observer(state, 0);
  if (n_steps == 0) return;

  const double dt = params_.dt;
  const double t0 = state.t;
  std::int64_t done = 0;
  while (done < n_steps) {
    const std::int64_t chunk =
        sample_every > 0 ? std::min(sample_every, n_steps - done) : n_steps;
    const double tc = t0 + done * dt;
    apply_potential_phase(state, tc, tc + 0.5 * dt);
    for (std::int64_t i = 0; i < chunk; ++i) {
      apply_kinetic(state, dt);
      const double tn = tc + i * dt;
      // Between consecutive steps the closing and opening half-windows fuse
      // into one full-dt window: the potential substep preserves |phi_k|,
      // so the frozen densities of the two half-steps coincide, and the
      // phase integral is additive over adjacent windows.
      const double t_hi = i + 1 < chunk ? tn + 1.5 * dt : tn + dt;
      apply_potential_phase(state, tn + 0.5 * dt, t_hi);
    }
    done += chunk;
    state.t = t0 + done * dt;
    if (!state_is_finite(state))
      throw std::runtime_error("evolve: non-finite field detected at t = " +
                               std::to_string(state.t));
    if (observer) observer(state, done);
  }
}

}  // namespace rotbec
