#pragma once

#include <string>
#include <vector>

#include "rotbec/observables.hpp"

// Reconstruction of the Eulerian wave functions psi_j(x,t) = phi_j(A^T(t)x)
// from the Lagrangian solution, and all file output. Output frames are
// sparse in time, so reconstruction is plain summation of the sine series
// (O(#points * J * K) per frame).

namespace rotbec {

// Evaluate the sine series at arbitrary points. Points outside the closed
// box give 0 (the field vanishes outside D).
std::vector<Complex> sine_series_evaluate(const SpectralField& spec,
                                          const std::vector<Point>& points);

// psi_j on `eulerian_grid` at time t: map each node with A^T(t) and
// evaluate the sine interpolant there. Returned state carries t.
CoupledState eulerian_frame(const CoupledState& state, double t, double omega,
                            const GridSpec& eulerian_grid);

// Timeseries CSV, fixed header:
//   t,N1,N2,N,E,Lz1,Lz2,Lz,sx,sy,sr
// Absent per-component <L_z> values are written as nan. Two-component
// records only.
void write_timeseries(const std::vector<DiagnosticsRecord>& records, const std::string& path);

// Self-describing binary dump:
//   bytes 0..7   magic "ROTBEC1\0"
//   bytes 8..15  little-endian uint64 metadata length
//   metadata     UTF-8 key = value lines (dim, bounds, grid sizes, t,
//                omega, component count)
//   payload      per component, row-major over the full node set,
//                little-endian float64 (re, im) pairs
struct GridDump {
  CoupledState state;
  double omega = 0.0;
};

void write_grid_dump(const CoupledState& state, double omega, const std::string& path);
GridDump read_grid_dump(const std::string& path);

}  // namespace rotbec
