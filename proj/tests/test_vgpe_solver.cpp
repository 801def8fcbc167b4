#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "oracle_support.hpp"
#include "rotbec/cgpe_solver.hpp"
#include "rotbec/observables.hpp"
#include "rotbec/run.hpp"
#include "rotbec/vgpe_solver.hpp"

using namespace rotbec;
using namespace rotbec::testing;

namespace {

CoupledState random_m_state(const GridSpec& grid, int m, std::uint32_t seed) {
  CoupledState state;
  for (int j = 0; j < m; ++j) state.components.push_back(random_smooth_field(grid, seed + j));
  state.t = 0.0;
  return state;
}

double total_mass(const CoupledState& s) {
  double sum = 0.0;
  for (const auto& c : s.components) sum += inner_product(c, c).real();
  return sum;
}

VgpeParams basic_params(int m, double dt) {
  VgpeParams p;
  p.beta = Eigen::MatrixXd::Zero(m, m);
  p.dt = dt;
  p.omega = 0.5;
  p.traps.assign(m, HarmonicTrap{1.0, 1.0, 0.0});
  p.drive.B = Eigen::MatrixXd::Zero(m, m);
  p.drive.g = 1.0;
  return p;
}

}  // namespace

TEST_CASE("decompose_coupling recovers the Josephson pair structure") {
  const double lambda = 0.8;
  Eigen::MatrixXd B{{0.0, -lambda}, {-lambda, 0.0}};
  const CouplingDecomposition dec = decompose_coupling(B);
  CHECK(dec.residual <= 1e-12 * (1.0 + lambda));

  // Eigenvalues {-lambda, +lambda}; the D row belonging to -lambda is
  // proportional to (1,1), the other to (1,-1).
  for (int i = 0; i < 2; ++i) {
    const double d0 = dec.D(i, 0), d1 = dec.D(i, 1);
    if (std::abs(dec.lambda[i] + lambda) < 1e-12)
      CHECK(std::abs(d0 - d1) <= 1e-12 * std::abs(d0));
    else {
      CHECK(std::abs(dec.lambda[i] - lambda) <= 1e-12);
      CHECK(std::abs(d0 + d1) <= 1e-12 * std::abs(d0));
    }
  }
}

TEST_CASE("decompose_coupling: diagonal B gives unit eigenvectors") {
  Eigen::MatrixXd B{{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 3.0}};
  const CouplingDecomposition dec = decompose_coupling(B);
  CHECK(dec.residual <= 1e-12 * 4.0);
  std::vector<double> ev{dec.lambda[0], dec.lambda[1], dec.lambda[2]};
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(2.0));
  CHECK(ev[2] == doctest::Approx(3.0));
  for (int i = 0; i < 3; ++i) {
    int big = 0;
    for (int j = 0; j < 3; ++j)
      if (std::abs(dec.D(i, j)) > 1e-8) ++big;
    CHECK(big == 1);
  }
}

TEST_CASE("decompose_coupling: random symmetric 4x4 reconstructs B") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  Eigen::MatrixXd B(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) B(i, j) = B(j, i) = dist(rng);
  const CouplingDecomposition dec = decompose_coupling(B);
  CHECK(dec.residual <= 1e-12 * (1.0 + B.cwiseAbs().maxCoeff()));
  const Eigen::MatrixXd recon = dec.D_inv * dec.lambda.asDiagonal() * dec.D;
  CHECK((recon - B).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + B.cwiseAbs().maxCoeff()));
  CHECK(dec.condition < 10.0);  // symmetric: orthogonal eigenbasis
}

TEST_CASE("decompose_coupling rejects complex spectra and Jordan blocks") {
  CHECK_THROWS_WITH_AS(decompose_coupling(Eigen::MatrixXd{{0.0, 1.0}, {-1.0, 0.0}}),
                       doctest::Contains("complex eigenvalue"), std::invalid_argument);
  CHECK_THROWS(decompose_coupling(Eigen::MatrixXd{{1.0, 1.0}, {0.0, 1.0}}));
}

TEST_CASE("vgpe potential half step reduces to the two-component one") {
  const GridSpec grid(BoxDomain::square2d(-6.0, 6.0), 16, 16);
  CgpeParams cparams;
  cparams.dt = 1e-2;
  cparams.omega = 0.6;
  cparams.lambda = 1.0;
  cparams.beta = {{{51.5, 50.0}, {50.0, 48.5}}};
  cparams.traps = {HarmonicTrap{1.05, 0.9, 0.0}, HarmonicTrap{1.0, 1.0, 0.0}};

  VgpeParams vparams = basic_params(2, cparams.dt);
  vparams.omega = cparams.omega;
  vparams.beta = Eigen::MatrixXd{{51.5, 50.0}, {50.0, 48.5}};
  vparams.traps = {cparams.traps[0], cparams.traps[1]};
  vparams.drive.B = Eigen::MatrixXd{{0.0, -1.0}, {-1.0, 0.0}};

  CoupledState a = random_m_state(grid, 2, 50);
  CoupledState b = a;
  CgpeSolver cs(grid, cparams);
  VgpeSolver vs(grid, vparams);
  cs.potential_half_step(a, 0.37, 0.5e-2);
  vs.potential_half_step(b, 0.37, 0.5e-2);
  CHECK(max_abs_diff(a.components[0], b.components[0]) <= 1e-14);
  CHECK(max_abs_diff(a.components[1], b.components[1]) <= 1e-14);
}

TEST_CASE("vgpe potential half step: beta = 0, unit traps is a pure phase") {
  const GridSpec grid(BoxDomain::square2d(-6.0, 6.0), 16, 16);
  VgpeParams params = basic_params(2, 1e-2);
  VgpeSolver solver(grid, params);
  CoupledState state = random_m_state(grid, 2, 51);
  const CoupledState before = state;
  const double duration = 0.5e-2;
  solver.potential_half_step(state, 0.0, duration);
  for (int s = 0; s <= 16; ++s)
    for (int l = 0; l <= 16; ++l) {
      const Point x = grid.node_point(s, l);
      const Complex phase = std::polar(1.0, -0.5 * (x[0] * x[0] + x[1] * x[1]) * duration);
      CHECK(std::abs(state.components[0](s, l) - before.components[0](s, l) * phase) <= 1e-14);
    }
}

TEST_CASE("vgpe potential half step: M = 3 moduli unchanged") {
  const GridSpec grid(BoxDomain::square2d(-6.0, 6.0), 16, 16);
  VgpeParams params = basic_params(3, 1e-2);
  params.beta = Eigen::MatrixXd{{30.0, 10.0, 5.0}, {10.0, 25.0, 8.0}, {5.0, 8.0, 20.0}};
  params.traps = {HarmonicTrap{1.0, 1.2, 0.0}, HarmonicTrap{0.9, 1.0, 0.0},
                  HarmonicTrap{1.1, 0.8, 0.0}};
  params.drive.B = Eigen::MatrixXd::Zero(3, 3);
  VgpeSolver solver(grid, params);
  CoupledState state = random_m_state(grid, 3, 52);
  const CoupledState before = state;
  solver.potential_half_step(state, 0.2, 0.5e-2);
  for (int j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < state.components[j].size(); ++i)
      CHECK(std::abs(std::abs(state.components[j].data()[i]) -
                     std::abs(before.components[j].data()[i])) <= 1e-15);
}

TEST_CASE("vgpe kinetic-drive step with g = 1 matches the Josephson step") {
  const GridSpec grid(BoxDomain::square2d(-6.0, 6.0), 16, 16);
  const double lambda = 1.3;
  CgpeParams cparams;
  cparams.dt = 1e-2;
  cparams.lambda = lambda;
  cparams.beta = {{{0.0, 0.0}, {0.0, 0.0}}};
  VgpeParams vparams = basic_params(2, 1e-2);
  vparams.drive.B = Eigen::MatrixXd{{0.0, -lambda}, {-lambda, 0.0}};

  CoupledState a = random_m_state(grid, 2, 53);
  CoupledState b = a;
  CgpeSolver cs(grid, cparams);
  VgpeSolver vs(grid, vparams);
  cs.kinetic_josephson_step(a, 1e-2);
  vs.kinetic_drive_step(b, 0.0, 1e-2);
  CHECK(max_abs_diff(a.components[0], b.components[0]) <= 1e-12);
  CHECK(max_abs_diff(a.components[1], b.components[1]) <= 1e-12);
}

TEST_CASE("vgpe kinetic-drive step with g = 0 is free evolution") {
  const GridSpec grid(BoxDomain::square2d(-6.0, 6.0), 16, 16);
  VgpeParams params = basic_params(2, 1e-2);
  params.drive.B = Eigen::MatrixXd{{0.0, -2.0}, {-2.0, 0.0}};
  params.drive.g = 0.0;
  VgpeSolver solver(grid, params);
  CoupledState state = random_m_state(grid, 2, 54);
  const auto m0 = component_mass(state);
  solver.kinetic_drive_step(state, 0.0, 1e-2);
  const auto m1 = component_mass(state);
  CHECK(std::abs(m1[0] - m0[0]) / m0[0] <= 1e-12);
  CHECK(std::abs(m1[1] - m0[1]) / m0[1] <= 1e-12);
}

TEST_CASE("vgpe kinetic-drive step matches a dense matrix exponential (M = 3)") {
  const GridSpec grid(BoxDomain::square2d(-4.0, 4.0), 8, 8);
  const int J = 8, K = 8, n = (J - 1) * (K - 1), M = 3;
  VgpeParams params = basic_params(M, 1e-2);
  params.drive.B = Eigen::MatrixXd{{0.5, -0.7, 0.2}, {-0.7, 0.1, 0.4}, {0.2, 0.4, -0.3}};
  VgpeSolver solver(grid, params);
  CoupledState state = random_m_state(grid, M, 55);

  // Dense generator: H[(a i),(b i')] = delta_ab K(i,i') + B(a,b) delta_ii'.
  Eigen::MatrixXd ana(n, n), syn(n, n);
  Eigen::VectorXd halfsym(n);
  for (int p = 1; p < J; ++p)
    for (int q = 1; q < K; ++q) {
      const int row = (p - 1) * (K - 1) + (q - 1);
      const double mx = p * M_PI / grid.box().length(0);
      const double my = q * M_PI / grid.box().length(1);
      halfsym[row] = 0.5 * (mx * mx + my * my);
      for (int s = 1; s < J; ++s)
        for (int l = 1; l < K; ++l) {
          const int col = (s - 1) * (K - 1) + (l - 1);
          const double basis = std::sin(M_PI * p * s / J) * std::sin(M_PI * q * l / K);
          ana(row, col) = basis * (2.0 / J) * (2.0 / K);
          syn(col, row) = basis;
        }
    }
  const Eigen::MatrixXd kin = syn * halfsym.asDiagonal() * ana;
  Eigen::MatrixXd H(M * n, M * n);
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b)
      H.block(a * n, b * n, n, n) =
          (a == b ? kin : Eigen::MatrixXd::Zero(n, n)) +
          params.drive.B(a, b) * Eigen::MatrixXd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
  Eigen::VectorXcd u(M * n);
  for (int a = 0; a < M; ++a)
    for (int s = 1; s < J; ++s)
      for (int l = 1; l < K; ++l)
        u[a * n + (s - 1) * (K - 1) + (l - 1)] = state.components[a](s, l);
  Eigen::VectorXcd w = es.eigenvectors().transpose() * u;
  const double duration = params.dt;
  for (int i = 0; i < M * n; ++i) w[i] *= std::polar(1.0, -duration * es.eigenvalues()[i]);
  const Eigen::VectorXcd dense = es.eigenvectors() * w;

  solver.kinetic_drive_step(state, 0.0, duration);
  double worst = 0.0;
  for (int a = 0; a < M; ++a)
    for (int s = 1; s < J; ++s)
      for (int l = 1; l < K; ++l)
        worst = std::max(worst, std::abs(state.components[a](s, l) -
                                         dense[a * n + (s - 1) * (K - 1) + (l - 1)]));
  CHECK(worst <= 1e-10);
}

TEST_CASE("vgpe strang/evolve conserves total mass (M = 3, g(t) callback)") {
  const GridSpec grid(BoxDomain::square2d(-6.0, 6.0), 16, 16);
  VgpeParams params = basic_params(3, 1e-3);
  params.beta = Eigen::MatrixXd{{40.0, 10.0, 5.0}, {10.0, 30.0, 8.0}, {5.0, 8.0, 25.0}};
  params.traps = {HarmonicTrap{1.0, 1.0, 0.0}, HarmonicTrap{1.1, 0.9, 0.0},
                  HarmonicTrap{0.95, 1.05, 0.0}};
  params.drive.B = Eigen::MatrixXd{{0.0, -1.0, 0.3}, {-1.0, 0.2, 0.5}, {0.3, 0.5, -0.4}};
  params.drive.g = std::function<double(double)>([](double t) { return std::cos(1.3 * t); });
  VgpeSolver solver(grid, params);
  CoupledState state = random_m_state(grid, 3, 56);
  const double n0 = total_mass(state);
  double worst = 0.0;
  solver.evolve(state, 100,
                [&](const CoupledState& s, std::int64_t) {
                  worst = std::max(worst, std::abs(total_mass(s) - n0) / n0);
                },
                10);
  CHECK(worst <= 1e-12);
}

TEST_CASE("M = 2 reduction tracks the two-component solver over 100 steps") {
  const GridSpec grid(BoxDomain::square2d(-8.0, 8.0), 32, 32);
  const double lambda = 1.0;
  CgpeParams cparams;
  cparams.dt = 1e-3;
  cparams.omega = 0.4;
  cparams.lambda = lambda;
  cparams.beta = {{{51.5, 50.0}, {50.0, 48.5}}};
  cparams.traps = {HarmonicTrap{1.0, 1.0, 0.0}, HarmonicTrap{1.0, 1.0, 0.0}};
  VgpeParams vparams = basic_params(2, cparams.dt);
  vparams.omega = cparams.omega;
  vparams.beta = Eigen::MatrixXd{{51.5, 50.0}, {50.0, 48.5}};
  vparams.drive.B = Eigen::MatrixXd{{0.0, -lambda}, {-lambda, 0.0}};

  CoupledState a = random_m_state(grid, 2, 57);
  CoupledState b = a;
  CgpeSolver cs(grid, cparams);
  VgpeSolver vs(grid, vparams);
  cs.evolve(a, 100, {}, 0);
  vs.evolve(b, 100, {}, 0);
  CHECK(composite_l2_error(a, b) <= 1e-10);
}

TEST_CASE("constant-in-space drive reduces to the per-mode matrix ODE") {
  // beta = 0 and V = 0: each sine coefficient vector obeys
  // i c' = (sym/2) c + g B c, solved by the symbol phase times exp(-i G B).
  const GridSpec grid(BoxDomain::square2d(-4.0, 4.0), 8, 8);
  VgpeParams params = basic_params(3, 1e-2);
  CustomPotential zero_potential;
  zero_potential.potential = [](const Point&, double) { return 0.0; };
  params.traps.assign(3, zero_potential);
  params.drive.B = Eigen::MatrixXd{{0.4, -0.6, 0.1}, {-0.6, 0.0, 0.3}, {0.1, 0.3, -0.2}};
  VgpeSolver solver(grid, params);

  CoupledState state = random_m_state(grid, 3, 58);
  std::vector<SpectralField> hats;
  for (const auto& c : state.components) hats.push_back(dst_forward(c));

  const int n_steps = 10;
  solver.evolve(state, n_steps, {}, 0);
  const double T = n_steps * params.dt;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(params.drive.B);
  Eigen::MatrixXcd expB = Eigen::MatrixXcd::Zero(3, 3);
  for (int m = 0; m < 3; ++m)
    expB += std::polar(1.0, -es.eigenvalues()[m] * T) * es.eigenvectors().col(m) *
            es.eigenvectors().col(m).transpose();

  const SpectralField out0 = dst_forward(state.components[0]);
  const SpectralField out1 = dst_forward(state.components[1]);
  const SpectralField out2 = dst_forward(state.components[2]);
  double worst = 0.0;
  for (int p = 1; p < 8; ++p)
    for (int q = 1; q < 8; ++q) {
      Eigen::Vector3cd c0{hats[0].at(p, q), hats[1].at(p, q), hats[2].at(p, q)};
      Eigen::Vector3cd expected =
          std::polar(1.0, -0.5 * T * laplacian_symbol(grid, p, q)) * (expB * c0);
      worst = std::max(worst, std::abs(out0.at(p, q) - expected[0]));
      worst = std::max(worst, std::abs(out1.at(p, q) - expected[1]));
      worst = std::max(worst, std::abs(out2.at(p, q) - expected[2]));
    }
  CHECK(worst <= 1e-12);
}

TEST_CASE("drive integral: Simpson on a callback matches the closed form") {
  const GridSpec grid(BoxDomain::square2d(-4.0, 4.0), 8, 8);
  VgpeParams params = basic_params(2, 1e-2);
  params.drive.B = Eigen::MatrixXd{{0.0, -1.0}, {-1.0, 0.0}};
  params.drive.g = std::function<double(double)>([](double t) { return std::cos(t); });
  VgpeSolver solver(grid, params);
  const double got = solver.drive_integral(0.2, 0.2 + 1e-2);
  CHECK(std::abs(got - (std::sin(0.21) - std::sin(0.2))) <= 1e-12);
}

TEST_CASE("vgpe parameter validation") {
  const GridSpec grid(BoxDomain::square2d(-4.0, 4.0), 8, 8);
  VgpeParams params = basic_params(2, 1e-2);
  params.beta(0, 1) = 3.0;  // asymmetric
  CHECK_THROWS(VgpeSolver(grid, params));
  params = basic_params(2, 1e-2);
  params.traps.pop_back();
  CHECK_THROWS(VgpeSolver(grid, params));
  params = basic_params(2, 1e-2);
  params.drive.B = Eigen::MatrixXd::Zero(3, 3);
  CHECK_THROWS(VgpeSolver(grid, params));
}
