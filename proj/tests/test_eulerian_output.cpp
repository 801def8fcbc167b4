#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "oracle_support.hpp"
#include "rotbec/eulerian_output.hpp"
#include "rotbec/run.hpp"

using namespace rotbec;
using namespace rotbec::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rotbec_eul_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

CoupledState gaussian_state(const GridSpec& grid) {
  auto psi1 = [](const Point& x) {
    return Complex(std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])) / std::sqrt(2.0 * M_PI), 0.0);
  };
  auto psi2 = [](const Point& x) {
    return Complex(x[0], x[1]) / std::sqrt(2.0 * M_PI) *
           std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]));
  };
  return init_from_function(grid, psi1, psi2).state;
}

}  // namespace

TEST_CASE("sine_series_evaluate reproduces dst_inverse at the grid nodes") {
  const GridSpec grid(BoxDomain::box2d(-3.0, 3.0, -2.0, 4.0), 16, 16);
  const ComplexField f = random_smooth_field(grid, 21);
  const SpectralField hat = dst_forward(f);
  const ComplexField nodes = dst_inverse(hat);

  std::vector<Point> points;
  for (int s = 0; s <= 16; ++s)
    for (int l = 0; l <= 16; ++l) points.push_back(grid.node_point(s, l));
  const std::vector<Complex> values = sine_series_evaluate(hat, points);
  double worst = 0.0;
  std::size_t i = 0;
  for (int s = 0; s <= 16; ++s)
    for (int l = 0; l <= 16; ++l) worst = std::max(worst, std::abs(values[i++] - nodes(s, l)));
  CHECK(worst <= 1e-12);
}

TEST_CASE("sine_series_evaluate: single mode at arbitrary points, zero outside") {
  const GridSpec grid(BoxDomain::square2d(-2.0, 2.0), 8, 8);
  SpectralField hat(grid);
  hat.at(2, 1) = Complex(0.3, -0.8);
  const std::vector<Point> pts = {{0.137, -1.4142, 0.0}, {1.99, 1.99, 0.0}, {2.01, 0.0, 0.0}};
  const std::vector<Complex> values = sine_series_evaluate(hat, pts);
  for (int i = 0; i < 2; ++i) {
    const Complex expected = hat.at(2, 1) *
                             std::sin(grid.frequency(0, 2) * (pts[i][0] + 2.0)) *
                             std::sin(grid.frequency(1, 1) * (pts[i][1] + 2.0));
    CHECK(std::abs(values[i] - expected) <= 1e-13);
  }
  CHECK(values[2] == Complex(0.0, 0.0));  // outside the box
}

TEST_CASE("sine_series_evaluate matches dst_inverse on a 3D grid") {
  const GridSpec grid(BoxDomain::box3d(-2.0, 2.0, -2.0, 2.0, -1.0, 1.0), 6, 6, 4);
  SpectralField hat(grid);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t i = 0; i < hat.size(); ++i) hat.data()[i] = Complex(dist(rng), dist(rng));
  const ComplexField nodes = dst_inverse(hat);

  std::vector<Point> points;
  for (int s = 0; s <= 6; ++s)
    for (int l = 0; l <= 6; ++l)
      for (int m = 0; m <= 4; ++m) points.push_back(grid.node_point(s, l, m));
  const std::vector<Complex> values = sine_series_evaluate(hat, points);
  double worst = 0.0;
  std::size_t i = 0;
  for (int s = 0; s <= 6; ++s)
    for (int l = 0; l <= 6; ++l)
      for (int m = 0; m <= 4; ++m)
        worst = std::max(worst, std::abs(values[i++] - nodes(s, l, m)));
  CHECK(worst <= 1e-12);
}

TEST_CASE("eulerian_frame at t = 0 is an identity copy") {
  const GridSpec grid(BoxDomain::square2d(-8.0, 8.0), 32, 32);
  const CoupledState state = gaussian_state(grid);
  const CoupledState frame = eulerian_frame(state, 0.0, 0.6, grid);
  CHECK(max_abs_diff(frame.components[0], state.components[0]) <= 1e-12);
  CHECK(max_abs_diff(frame.components[1], state.components[1]) <= 1e-12);
}

TEST_CASE("a full revolution restores the Lagrangian frame") {
  // Run to Omega t = 2 pi; A(t) = I there, so reconstruction at the nodes
  // must reproduce the Lagrangian field.
  const GridSpec grid(BoxDomain::square2d(-8.0, 8.0), 32, 32);
  CgpeParams params;
  params.omega = 1.0;
  params.lambda = 1.0;
  params.beta = {{{10.0, 8.0}, {8.0, 6.0}}};
  params.traps = {HarmonicTrap{1.0, 1.0, 0.0}, HarmonicTrap{1.0, 1.0, 0.0}};
  params.dt = 2.0 * M_PI / 1000.0;
  CgpeSolver solver(grid, params);
  CoupledState state = gaussian_state(grid);
  solver.evolve(state, 1000, {}, 0);
  CHECK(state.t == doctest::Approx(2.0 * M_PI).epsilon(1e-12));

  const CoupledState frame = eulerian_frame(state, state.t, params.omega, grid);
  CHECK(max_abs_diff(frame.components[0], state.components[0]) <= 1e-12);
  CHECK(max_abs_diff(frame.components[1], state.components[1]) <= 1e-12);
}

TEST_CASE("reconstructed frame carries the Lagrangian mass") {
  const GridSpec grid(BoxDomain::square2d(-8.0, 8.0), 64, 64);
  const CoupledState state = gaussian_state(grid);
  const double t = 0.7;  // Omega t well away from a multiple of 2 pi
  const CoupledState frame = eulerian_frame(state, t, 0.6, grid);
  for (int j = 0; j < 2; ++j) {
    const double lagrangian = inner_product(state.components[j], state.components[j]).real();
    const double eulerian = inner_product(frame.components[j], frame.components[j]).real();
    CHECK(std::abs(eulerian - lagrangian) <= 1e-6);
  }
}

TEST_CASE("timeseries CSV: header-only for empty input, stable bytes") {
  TempDir tmp;
  const std::string path = tmp.file("empty.csv");
  write_timeseries({}, path);
  CHECK(slurp(path) == "t,N1,N2,N,E,Lz1,Lz2,Lz,sx,sy,sr\n");

  DiagnosticsRecord rec;
  rec.t = 0.5;
  rec.mass = {0.25, 0.75};
  rec.mass_total = 1.0;
  rec.energy = 3.25;
  rec.lz = {std::optional<double>(0.5), std::nullopt};
  rec.lz_total = 0.125;
  rec.sigma_x = 1.5;
  rec.sigma_y = 2.5;
  rec.sigma_r = std::sqrt(1.5 * 1.5 + 2.5 * 2.5);
  const std::string path2 = tmp.file("rows.csv");
  write_timeseries({rec}, path2);
  const std::string first = slurp(path2);
  CHECK(first.find("nan") != std::string::npos);  // absent <L_z>_2
  write_timeseries({rec}, path2);
  CHECK(slurp(path2) == first);
}

TEST_CASE("grid dump round trip is bit-exact") {
  TempDir tmp;
  const GridSpec grid(BoxDomain::box2d(-3.0, 3.0, -2.0, 4.0), 16, 12);
  CoupledState state;
  state.components.push_back(random_smooth_field(grid, 31));
  state.components.push_back(random_smooth_field(grid, 32));
  state.t = 1.375;

  const std::string path = tmp.file("state.dump");
  write_grid_dump(state, 0.6, path);
  const GridDump dump = read_grid_dump(path);
  CHECK(dump.omega == 0.6);
  CHECK(dump.state.t == 1.375);
  CHECK(dump.state.grid() == grid);
  for (int j = 0; j < 2; ++j)
    CHECK(std::memcmp(dump.state.components[j].data(), state.components[j].data(),
                      state.components[j].size() * sizeof(Complex)) == 0);

  // Rewriting the read-back state reproduces the same bytes.
  const std::string path2 = tmp.file("state2.dump");
  write_grid_dump(dump.state, dump.omega, path2);
  CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("dump layout: magic + length-prefixed metadata + payload") {
  TempDir tmp;
  const GridSpec grid(BoxDomain::square2d(0.0, 1.0), 4, 4);
  CoupledState state;
  state.components.push_back(ComplexField(grid));
  const std::string path = tmp.file("tiny.dump");
  write_grid_dump(state, 0.0, path);

  const std::string bytes = slurp(path);
  REQUIRE(bytes.size() > 16);
  CHECK(bytes.substr(0, 8) == std::string("ROTBEC1\0", 8));
  std::uint64_t meta_len = 0;
  std::memcpy(&meta_len, bytes.data() + 8, 8);
  // 5x5 nodes, one component, 16 bytes per node.
  CHECK(bytes.size() == 8 + 8 + meta_len + 2 * 8 * 25);
}

TEST_CASE("dump reader rejects corrupted input") {
  TempDir tmp;
  const GridSpec grid(BoxDomain::square2d(0.0, 1.0), 4, 4);
  CoupledState state;
  state.components.push_back(ComplexField(grid));
  const std::string path = tmp.file("bad.dump");
  write_grid_dump(state, 0.0, path);
  std::string bytes = slurp(path);

  {
    std::string mangled = bytes;
    mangled[0] = 'X';
    std::ofstream(tmp.file("magic.dump"), std::ios::binary) << mangled;
    CHECK_THROWS_WITH_AS(read_grid_dump(tmp.file("magic.dump")), doctest::Contains("magic"),
                         std::runtime_error);
  }
  // Metadata declares more nodes than the payload holds.
  {
    std::string mangled = bytes;
    const auto pos = mangled.find("grid.J = 4");
    REQUIRE(pos != std::string::npos);
    mangled[pos + 9] = '8';
    std::ofstream(tmp.file("short.dump"), std::ios::binary) << mangled;
    CHECK_THROWS_WITH_AS(read_grid_dump(tmp.file("short.dump")),
                         doctest::Contains("node count"), std::runtime_error);
  }
  {
    std::string mangled = bytes + "extra";
    std::ofstream(tmp.file("long.dump"), std::ios::binary) << mangled;
    CHECK_THROWS_WITH_AS(read_grid_dump(tmp.file("long.dump")),
                         doctest::Contains("trailing"), std::runtime_error);
  }
  CHECK_THROWS(read_grid_dump(tmp.file("missing.dump")));
}
