#pragma once

#include "rotbec/cgpe_solver.hpp"

// Independent verification backend: the unsplit semidiscrete right-hand
// side and a classical RK4 reference integrator, for cross-checking the
// splitting scheme on tiny grids. Shares the spatial discretization with
// the production solver so that comparisons isolate the time-splitting
// error.

namespace rotbec::oracle {

// d(Phi)/dt = -i[(-1/2 Lap + W_j(t) + sum_k beta_jk |phi_k|^2) phi_j]
//             + i lambda phi_{3-j},
// with the Laplacian applied spectrally. Guarded to grids of at most
// 32 x 32 (x 32); this path is O(N log N) per call but meant for
// verification only.
CoupledState apply_rhs(const CoupledState& state, const CgpeParams& params, double t);

// Classical fixed-step RK4 from state.t to t_end with step dt_ref
// (dt_ref <= 1e-4 enforced; the last step is shortened to land on t_end).
CoupledState rk4_reference(CoupledState state, const CgpeParams& params, double t_end,
                           double dt_ref);

}  // namespace rotbec::oracle
