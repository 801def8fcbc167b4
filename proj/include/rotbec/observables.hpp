#pragma once

#include <optional>
#include <vector>

#include "rotbec/cgpe_solver.hpp"

// Conserved-quantity and physical-observable diagnostics, all evaluated on
// the Lagrangian grid. The rotation about z leaves |grad psi|, |psi| and
// L_z expectations invariant, so no Eulerian reconstruction is needed:
// |grad psi|^2 = |grad phi|^2, V(x)|psi|^2 = W(xt,t)|phi|^2 and
// Re(psi* L_z psi) = Re(phi* L_z phi). Second moments are mapped back to
// the Eulerian frame through the rotation angle.

namespace rotbec {

struct DiagnosticsRecord {
  double t = 0.0;
  std::vector<double> mass;  // N_j
  double mass_total = 0.0;   // N = sum N_j, exactly as summed
  double energy = 0.0;
  std::vector<std::optional<double>> lz;  // <L_z>_j, absent when N_j <= 1e-14
  double lz_total = 0.0;                  // unnormalized sum of int phi* L_z phi
  double sigma_x = 0.0, sigma_y = 0.0, sigma_r = 0.0;
  double sigma_z = 0.0;       // 3D only
  bool tail_warning = false;  // boundary-adjacent density above 1e-10 of total
};

std::vector<double> component_mass(const CoupledState& state);

// Total energy of the two-component system at time t (rotating-frame
// evaluation of the Eulerian energy functional).
double energy(const CoupledState& state, const CgpeParams& params, double t);

struct AngularMomentum {
  std::vector<std::optional<double>> per_component;  // normalized by N_j
  double total = 0.0;                                // unnormalized sum
};
AngularMomentum angular_momentum(const CoupledState& state);

struct CondensateWidths {
  double sigma_x = 0.0, sigma_y = 0.0, sigma_r = 0.0;
  double sigma_z = 0.0;  // 3D only
  bool tail_warning = false;
};
CondensateWidths condensate_widths(const CoupledState& state, double t, double omega);

// One full diagnostics row at state.t.
DiagnosticsRecord sample_diagnostics(const CoupledState& state, const CgpeParams& params);

}  // namespace rotbec
