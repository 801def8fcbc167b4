#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "rotbec/rotating_frame.hpp"
#include "rotbec/spectral_grid.hpp"

// Strang-split time stepper for the two-component Gross-Pitaevskii system
// in rotating Lagrangian coordinates. One step is
//
//   phi^(1)  = phi^n * exp[-i( dt/2 * sum_k beta_jk |phi_k^n|^2
//                              + int_{t_n}^{t_n+dt/2} W_j dtau )]
//   phi^(2)  = DST^-1[ exp(-i dt sym/2) (cos(lambda dt) phi_hat_j^(1)
//                              + i sin(lambda dt) phi_hat_{3-j}^(1)) ]
//   phi^n+1  = phi^(2) * exp[-i( dt/2 * sum_k beta_jk |phi_k^(2)|^2
//                              + int_{t_n+dt/2}^{t_n+dt} W_j dtau )]
//
// The Josephson coupling rides along with the kinetic substep in
// coefficient space, so a step costs two forward and two inverse sine
// transforms.

namespace rotbec {

// Component fields phi_j on a shared grid, plus the current time. Used by
// both the two-component and the M-component solver.
struct CoupledState {
  std::vector<ComplexField> components;
  double t = 0.0;

  const GridSpec& grid() const { return components.at(0).grid(); }
  int num_components() const { return static_cast<int>(components.size()); }
};

struct CgpeParams {
  double lambda = 0.0;  // Rabi frequency of the internal Josephson junction
  double omega = 0.0;   // angular velocity (0 allowed; frame map degenerates to identity)
  double dt = 1e-3;
  std::array<std::array<double, 2>, 2> beta{{{0.0, 0.0}, {0.0, 0.0}}};  // symmetric
  std::array<PotentialSpec, 2> traps{HarmonicTrap{}, HarmonicTrap{}};
};

struct InitReport {
  CoupledState state;
  std::vector<double> component_mass;
  double total_mass = 0.0;
};

using InitialFunction = std::function<Complex(const Point&)>;

// Sample initial data at all nodes, force the boundary to zero, set t = 0,
// and report the discrete masses (the caller may renormalize). Throws on
// non-finite samples.
InitReport init_from_functions(const GridSpec& grid, const std::vector<InitialFunction>& funcs);
InitReport init_from_function(const GridSpec& grid, const InitialFunction& psi1,
                              const InitialFunction& psi2);

// Observer invoked at the start, every `sample_every` steps, and at the
// end of evolve(). `step` is the number of completed steps.
using Observer = std::function<void(const CoupledState&, std::int64_t step)>;

class CgpeSolver {
 public:
  CgpeSolver(const GridSpec& grid, const CgpeParams& params);

  const CgpeParams& params() const { return params_; }
  const GridSpec& grid() const { return grid_; }

  // exp[-i(duration * sum_k beta_jk |phi_k|^2 + int_{t_n}^{t_n+duration} W_j)]
  // with the densities frozen at the substep start. Negative durations give
  // the signed (reversed) window.
  void potential_half_step(CoupledState& state, double t_n, double duration);

  // Kinetic + Josephson substep over `duration` in sine-coefficient space.
  void kinetic_josephson_step(CoupledState& state, double duration);

  // One Strang step; advances state.t by dt.
  void strang_step(CoupledState& state);

  // n_steps Strang steps. Adjacent potential half-steps between samples are
  // fused into full-step windows (the frozen densities and the phase
  // integrals agree, by additivity of int W dtau). Checks for non-finite
  // values at every sample and throws on detection. sample_every <= 0
  // means: observer only at start and end.
  void evolve(CoupledState& state, std::int64_t n_steps, const Observer& observer = {},
              std::int64_t sample_every = 0);

 private:
  void apply_potential_phase(CoupledState& state, double t0, double t1);
  void apply_kinetic(CoupledState& state, double duration);
  void check_state(const CoupledState& state) const;

  GridSpec grid_;
  CgpeParams params_;
  std::vector<double> symbol_;           // (mu_p^x)^2 + (mu_q^y)^2 (+ z) per coefficient
  std::vector<Complex> kin_phase_dt_;    // exp(-i dt sym/2), cached for duration == dt
  std::array<std::vector<double>, 4> quad_;  // r^2, x^2-y^2, x*y, z^2 per node
  std::array<std::vector<double>, 2> rho_;   // frozen densities
  std::array<SpectralField, 2> coeff_;
};

// Throws if any sample is non-finite; evolve() calls this at samples.
bool state_is_finite(const CoupledState& state);

}  // namespace rotbec
