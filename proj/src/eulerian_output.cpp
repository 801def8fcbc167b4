#include "rotbec/eulerian_output.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rotbec/rotating_frame.hpp"

namespace rotbec {

namespace {

constexpr char kMagic[8] = {'R', 'O', 'T', 'B', 'E', 'C', '1', '\0'};

static_assert(std::endian::native == std::endian::little,
              "grid dump format is little-endian; big-endian hosts are unsupported");

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void io_fail(const std::string& what, const std::string& path) {
  throw std::runtime_error(what + ": " + path);
}

}  // namespace

std::vector<Complex> sine_series_evaluate(const SpectralField& spec,
                                          const std::vector<Point>& points) {
  const GridSpec& g = spec.grid();
  const int d = g.dim();
  std::vector<Complex> out(points.size(), Complex(0.0, 0.0));
  std::vector<double> sx(g.size(0)), sy(g.size(1)), sz(d == 3 ? g.size(2) : 1);

  for (std::size_t n = 0; n < points.size(); ++n) {
    const Point& x = points[n];
    bool inside = true;
    for (int axis = 0; axis < d; ++axis)
      inside = inside && x[axis] >= g.box().lo[axis] && x[axis] <= g.box().hi[axis];
    if (!inside) continue;

    for (int p = 1; p < g.size(0); ++p) sx[p] = std::sin(g.frequency(0, p) * (x[0] - g.box().lo[0]));
    for (int q = 1; q < g.size(1); ++q) sy[q] = std::sin(g.frequency(1, q) * (x[1] - g.box().lo[1]));
    if (d == 3)
      for (int r = 1; r < g.size(2); ++r)
        sz[r] = std::sin(g.frequency(2, r) * (x[2] - g.box().lo[2]));

    Complex sum(0.0, 0.0);
    if (d == 2) {
      for (int p = 1; p < g.size(0); ++p) {
        Complex row(0.0, 0.0);
        for (int q = 1; q < g.size(1); ++q) row += spec.at(p, q) * sy[q];
        sum += row * sx[p];
      }
    } else {
      for (int p = 1; p < g.size(0); ++p) {
        Complex plane(0.0, 0.0);
        for (int q = 1; q < g.size(1); ++q) {
          Complex row(0.0, 0.0);
          for (int r = 1; r < g.size(2); ++r) row += spec.at(p, q, r) * sz[r];
          plane += row * sy[q];
        }
        sum += plane * sx[p];
      }
    }
    out[n] = sum;
  }
  return out;
}

CoupledState eulerian_frame(const CoupledState& state, double t, double omega,
                            const GridSpec& eulerian_grid) {
  const GridSpec& eg = eulerian_grid;
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(eg.node_count()));
  auto push = [&](int s, int l, int m) {
    points.push_back(map_point(eg.node_point(s, l, m), t, omega,
                               FrameMap::kEulerianToLagrangian));
  };
  if (eg.dim() == 2) {
    for (int s = 0; s <= eg.size(0); ++s)
      for (int l = 0; l <= eg.size(1); ++l) push(s, l, 0);
  } else {
    for (int s = 0; s <= eg.size(0); ++s)
      for (int l = 0; l <= eg.size(1); ++l)
        for (int m = 0; m <= eg.size(2); ++m) push(s, l, m);
  }

  CoupledState frame;
  frame.t = t;
  for (const auto& comp : state.components) {
    const SpectralField hat = dst_forward(comp);
    const std::vector<Complex> values = sine_series_evaluate(hat, points);
    ComplexField field(eg);
    for (std::size_t i = 0; i < values.size(); ++i) field.data()[i] = values[i];
    frame.components.push_back(std::move(field));
  }
  return frame;
}

void write_timeseries(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) io_fail("write_timeseries: cannot open", path);
  out << "t,N1,N2,N,E,Lz1,Lz2,Lz,sx,sy,sr\n";
  for (const auto& r : records) {
    if (r.mass.size() != 2)
      throw std::runtime_error("write_timeseries: records must have exactly 2 components");
    auto lz = [&](int j) {
      return r.lz[j].has_value() ? format_double(*r.lz[j]) : std::string("nan");
    };
    out << format_double(r.t) << ',' << format_double(r.mass[0]) << ','
        << format_double(r.mass[1]) << ',' << format_double(r.mass_total) << ','
        << format_double(r.energy) << ',' << lz(0) << ',' << lz(1) << ','
        << format_double(r.lz_total) << ',' << format_double(r.sigma_x) << ','
        << format_double(r.sigma_y) << ',' << format_double(r.sigma_r) << '\n';
  }
  if (!out) io_fail("write_timeseries: write failed", path);
}

void write_grid_dump(const CoupledState& state, double omega, const std::string& path) {
  const GridSpec& g = state.grid();
  std::ostringstream meta;
  meta << "dim = " << g.dim() << "\n";
  const char* lo_names[3] = {"domain.a", "domain.c", "domain.f"};
  const char* hi_names[3] = {"domain.b", "domain.e", "domain.g"};
  const char* n_names[3] = {"grid.J", "grid.K", "grid.L"};
  for (int axis = 0; axis < g.dim(); ++axis) {
    meta << lo_names[axis] << " = " << format_double(g.box().lo[axis]) << "\n";
    meta << hi_names[axis] << " = " << format_double(g.box().hi[axis]) << "\n";
    meta << n_names[axis] << " = " << g.size(axis) << "\n";
  }
  meta << "t = " << format_double(state.t) << "\n";
  meta << "omega = " << format_double(omega) << "\n";
  meta << "components = " << state.num_components() << "\n";
  const std::string meta_str = meta.str();

  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) io_fail("write_grid_dump: cannot open", path);
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t len = meta_str.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(meta_str.data(), static_cast<std::streamsize>(meta_str.size()));
  for (const auto& comp : state.components)
    out.write(reinterpret_cast<const char*>(comp.data()),
              static_cast<std::streamsize>(comp.size() * sizeof(Complex)));
  if (!out) io_fail("write_grid_dump: write failed", path);
}

GridDump read_grid_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail("read_grid_dump: cannot open", path);

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    io_fail("read_grid_dump: bad magic (not a ROTBEC1 dump)", path);

  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || len > (1u << 20)) io_fail("read_grid_dump: bad metadata length", path);
  std::string meta_str(len, '\0');
  in.read(meta_str.data(), static_cast<std::streamsize>(len));
  if (!in) io_fail("read_grid_dump: truncated metadata", path);

  std::map<std::string, std::string> kv;
  std::istringstream meta(meta_str);
  std::string line;
  while (std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto need = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) io_fail("read_grid_dump: missing metadata key " + key, path);
    return it->second;
  };

  const int dim = std::stoi(need("dim"));
  if (dim != 2 && dim != 3) io_fail("read_grid_dump: bad dim", path);
  GridSpec grid;
  if (dim == 2) {
    grid = GridSpec(BoxDomain::box2d(std::stod(need("domain.a")), std::stod(need("domain.b")),
                                     std::stod(need("domain.c")), std::stod(need("domain.e"))),
                    std::stoi(need("grid.J")), std::stoi(need("grid.K")));
  } else {
    grid = GridSpec(BoxDomain::box3d(std::stod(need("domain.a")), std::stod(need("domain.b")),
                                     std::stod(need("domain.c")), std::stod(need("domain.e")),
                                     std::stod(need("domain.f")), std::stod(need("domain.g"))),
                    std::stoi(need("grid.J")), std::stoi(need("grid.K")),
                    std::stoi(need("grid.L")));
  }
  const int components = std::stoi(need("components"));
  if (components < 1) io_fail("read_grid_dump: bad component count", path);

  GridDump dump;
  dump.omega = std::stod(need("omega"));
  dump.state.t = std::stod(need("t"));
  for (int j = 0; j < components; ++j) {
    ComplexField field(grid);
    in.read(reinterpret_cast<char*>(field.data()),
            static_cast<std::streamsize>(field.size() * sizeof(Complex)));
    if (!in) io_fail("read_grid_dump: payload shorter than metadata node count", path);
    dump.state.components.push_back(std::move(field));
  }
  in.peek();
  if (!in.eof()) io_fail("read_grid_dump: trailing bytes beyond metadata node count", path);
  return dump;
}

}  // namespace rotbec
