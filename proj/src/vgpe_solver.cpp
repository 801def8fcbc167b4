#include "rotbec/vgpe_solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "solver_detail.hpp"

namespace rotbec {

CouplingDecomposition decompose_coupling(const Eigen::MatrixXd& B) {
  if (B.rows() != B.cols() || B.rows() < 1)
    throw std::invalid_argument("decompose_coupling: B must be square");
  const double bmax = B.cwiseAbs().maxCoeff();
  const double tol = 1e-10 * (1.0 + bmax);

  Eigen::EigenSolver<Eigen::MatrixXd> es(B);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("decompose_coupling: eigensolver failed");
  for (int i = 0; i < B.rows(); ++i) {
    const double im = std::abs(es.eigenvalues()[i].imag());
    if (im > tol) {
      std::ostringstream msg;
      msg << "decompose_coupling: complex eigenvalue " << es.eigenvalues()[i]
          << " (B must be diagonalizable over the reals)";
      throw std::invalid_argument(msg.str());
    }
  }

  CouplingDecomposition dec;
  dec.lambda = es.eigenvalues().real();
  const Eigen::MatrixXd V = es.eigenvectors().real();  // columns are eigenvectors
  dec.D_inv = V;
  dec.D = V.inverse();
  const Eigen::MatrixXd recon = dec.D_inv * dec.lambda.asDiagonal() * dec.D;
  dec.residual = (recon - B).cwiseAbs().maxCoeff();
  if (!(dec.residual <= tol)) {  // NaN residual (defective B) also lands here
    std::ostringstream msg;
    msg << "decompose_coupling: reconstruction residual " << dec.residual << " exceeds " << tol
        << " (B appears non-diagonalizable)";
    throw std::invalid_argument(msg.str());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dec.D);
  dec.condition = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  return dec;
}

VgpeSolver::VgpeSolver(const GridSpec& grid, const VgpeParams& params)
    : grid_(grid), params_(params), decomp_(decompose_coupling(params.drive.B)) {
  const int M = params_.num_components();
  if (M < 2) throw std::invalid_argument("VgpeSolver: need M >= 2 components");
  if (params_.beta.cols() != M) throw std::invalid_argument("VgpeSolver: beta must be square");
  if (!params_.beta.isApprox(params_.beta.transpose(), 0.0))
    throw std::invalid_argument("VgpeSolver: beta must be symmetric");
  if (params_.drive.B.rows() != M)
    throw std::invalid_argument("VgpeSolver: drive matrix size must match beta");
  if (static_cast<int>(params_.traps.size()) != M)
    throw std::invalid_argument("VgpeSolver: need one trap per component");
  if (!(params_.dt != 0.0) || !std::isfinite(params_.dt))
    throw std::invalid_argument("VgpeSolver: dt must be nonzero and finite");
  for (const auto& trap : params_.traps) validate(trap);

  detail::fill_symbol_table(grid_, symbol_);
  detail::fill_quadratics(grid_, quad_);
  rho_.assign(M, std::vector<double>(static_cast<std::size_t>(grid_.node_count()), 0.0));
  coeff_.assign(M, SpectralField(grid_));
  mix_.assign(static_cast<std::size_t>(M) * M, Complex(0.0, 0.0));
  vec_in_.assign(M, Complex(0.0, 0.0));
  vec_out_.assign(M, Complex(0.0, 0.0));
}

void VgpeSolver::check_state(const CoupledState& state) const {
  if (state.num_components() != params_.num_components())
    throw std::invalid_argument("VgpeSolver: state component count mismatch");
  for (const auto& comp : state.components)
    if (comp.grid() != grid_) throw std::invalid_argument("VgpeSolver: state grid mismatch");
}

double VgpeSolver::drive_integral(double t0, double t1) const {
  if (const double* g = std::get_if<double>(&params_.drive.g)) return *g * (t1 - t0);
  const auto& g = std::get<std::function<double(double)>>(params_.drive.g);
  const int panels =
      detail::scaled_panels(params_.drive.simpson_panels, t1 - t0, 0.5 * std::abs(params_.dt));
  const double h = (t1 - t0) / (2 * panels);
  double sum = 0.0;
  for (int i = 0; i <= 2 * panels; ++i) {
    const double weight = (i == 0 || i == 2 * panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += weight * g(t0 + i * h);
  }
  return sum * h / 3.0;
}

void VgpeSolver::apply_potential_phase(CoupledState& state, double t0, double t1) {
  const double duration = t1 - t0;
  if (duration == 0.0) return;
  const int M = params_.num_components();
  const std::size_t n = static_cast<std::size_t>(grid_.node_count());
  for (int k = 0; k < M; ++k) {
    const Complex* v = state.components[k].data();
    double* rho = rho_[k].data();
    for (std::size_t i = 0; i < n; ++i) rho[i] = std::norm(v[i]);
  }
  std::vector<double> bscaled(M);
  for (int j = 0; j < M; ++j) {
    Complex* v = state.components[j].data();
    for (int k = 0; k < M; ++k) bscaled[k] = duration * params_.beta(j, k);
    auto nonlinear = [&](std::size_t i) {
      double f = 0.0;
      for (int k = 0; k < M; ++k) f += bscaled[k] * rho_[k][i];
      return f;
    };
    if (const auto* trap = std::get_if<HarmonicTrap>(&params_.traps[j])) {
      const QuadraticCoeffs c = harmonic_phase_coeffs(*trap, t0, t1, params_.omega);
      for (std::size_t i = 0; i < n; ++i) {
        const double theta = nonlinear(i) + c.r2 * quad_[0][i] + c.d2 * quad_[1][i] +
                             c.xy * quad_[2][i] + c.z2 * quad_[3][i];
        v[i] *= Complex(std::cos(theta), -std::sin(theta));
      }
    } else {
      const auto& custom = std::get<CustomPotential>(params_.traps[j]);
      const int panels =
          detail::scaled_panels(custom.simpson_panels, duration, 0.5 * std::abs(params_.dt));
      auto point_phase = [&](int s, int l, int m) {
        const std::int64_t i = grid_.node_index(s, l, m);
        const double theta = nonlinear(i) + simpson_phase_integral(custom, grid_.node_point(s, l, m),
                                                                   t0, t1, params_.omega, panels);
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

void VgpeSolver::apply_kinetic_drive(CoupledState& state, double t0, double t1) {
  const int M = params_.num_components();
  const double duration = t1 - t0;
  const double G = drive_integral(t0, t1);

  // mix = D^-1 diag(exp(-i lambda_m G)) D, a constant M x M matrix per window.
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) {
      Complex sum(0.0, 0.0);
      for (int m = 0; m < M; ++m)
        sum += decomp_.D_inv(a, m) * std::polar(1.0, -decomp_.lambda[m] * G) * decomp_.D(m, b);
      mix_[a * M + b] = sum;
    }

  for (int j = 0; j < M; ++j) dst_forward_into(state.components[j], coeff_[j]);
  const std::size_t n = coeff_[0].size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex phase = std::polar(1.0, -0.5 * duration * symbol_[i]);
    for (int a = 0; a < M; ++a) vec_in_[a] = coeff_[a].data()[i];
    for (int a = 0; a < M; ++a) {
      Complex sum(0.0, 0.0);
      for (int b = 0; b < M; ++b) sum += mix_[a * M + b] * vec_in_[b];
      coeff_[a].data()[i] = phase * sum;
    }
  }
  for (int j = 0; j < M; ++j) dst_inverse_into(coeff_[j], state.components[j]);
}

void VgpeSolver::potential_half_step(CoupledState& state, double t_n, double duration) {
  check_state(state);
  apply_potential_phase(state, t_n, t_n + duration);
}

void VgpeSolver::kinetic_drive_step(CoupledState& state, double t_n, double duration) {
  check_state(state);
  apply_kinetic_drive(state, t_n, t_n + duration);
}

void VgpeSolver::strang_step(CoupledState& state) {
  check_state(state);
  const double t_n = state.t;
  const double dt = params_.dt;
  apply_potential_phase(state, t_n, t_n + 0.5 * dt);
  apply_kinetic_drive(state, t_n, t_n + dt);
  apply_potential_phase(state, t_n + 0.5 * dt, t_n + dt);
  state.t = t_n + dt;
}

void VgpeSolver::evolve(CoupledState& state, std::int64_t n_steps, const Observer& observer,
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
      const double tn = tc + i * dt;
      apply_kinetic_drive(state, tn, tn + dt);
      // Adjacent half-windows fuse as in the two-component stepper.
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
