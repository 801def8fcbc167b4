#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>
#include <vector>

#include "rotbec/cgpe_solver.hpp"

// M-component generalization: i dPhi/dt = [-1/2 Lap + W + F(Phi) + g(t)B] Phi
// with B real and diagonalizable over the reals, B = D^-1 Lambda D. The
// kinetic + drive substep acts in sine-coefficient space as
//   Phi_hat <- exp(-i dur sym/2) * D^-1 exp(-i Lambda int g) D Phi_hat.

namespace rotbec {

// Scalar drive envelope: a constant, or a callback g(t) integrated with
// composite Simpson (same panel policy as the potential phase integrals).
using DriveEnvelope = std::variant<double, std::function<double(double)>>;

struct DriveSpec {
  Eigen::MatrixXd B;
  DriveEnvelope g = 1.0;
  int simpson_panels = 8;
};

struct CouplingDecomposition {
  Eigen::MatrixXd D;      // B = D^-1 Lambda D
  Eigen::MatrixXd D_inv;
  Eigen::VectorXd lambda; // real spectrum
  double residual = 0.0;  // ||D^-1 Lambda D - B||_max
  double condition = 0.0; // 2-norm condition number of D
};

// Numerical eigendecomposition with a reconstruction-residual check.
// Throws on a complex spectrum or on residual > 1e-10 * (1 + ||B||_max)
// (non-diagonalizable B fails this way).
CouplingDecomposition decompose_coupling(const Eigen::MatrixXd& B);

struct VgpeParams {
  Eigen::MatrixXd beta;  // M x M, symmetric
  double omega = 0.0;
  double dt = 1e-3;
  std::vector<PotentialSpec> traps;  // one per component
  DriveSpec drive;

  int num_components() const { return static_cast<int>(beta.rows()); }
};

class VgpeSolver {
 public:
  VgpeSolver(const GridSpec& grid, const VgpeParams& params);

  const VgpeParams& params() const { return params_; }
  const CouplingDecomposition& decomposition() const { return decomp_; }

  void potential_half_step(CoupledState& state, double t_n, double duration);
  void kinetic_drive_step(CoupledState& state, double t_n, double duration);
  void strang_step(CoupledState& state);
  void evolve(CoupledState& state, std::int64_t n_steps, const Observer& observer = {},
              std::int64_t sample_every = 0);

  // int_{t0}^{t1} g(tau) dtau (closed form for a constant envelope).
  double drive_integral(double t0, double t1) const;

 private:
  void apply_potential_phase(CoupledState& state, double t0, double t1);
  void apply_kinetic_drive(CoupledState& state, double t0, double t1);
  void check_state(const CoupledState& state) const;

  GridSpec grid_;
  VgpeParams params_;
  CouplingDecomposition decomp_;
  std::vector<double> symbol_;
  std::array<std::vector<double>, 4> quad_;
  std::vector<std::vector<double>> rho_;
  std::vector<SpectralField> coeff_;
  std::vector<Complex> mix_;      // D^-1 exp(-i Lambda G) D, row-major M x M
  std::vector<Complex> vec_in_, vec_out_;
};

}  // namespace rotbec
