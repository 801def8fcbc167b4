#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "rotbec/rotating_frame.hpp"
#include "rotbec/spectral_grid.hpp"

// Shared precomputation for the two- and M-component steppers.

namespace rotbec::detail {

inline void fill_symbol_table(const GridSpec& g, std::vector<double>& symbol) {
  symbol.assign(static_cast<std::size_t>(g.interior_count()), 0.0);
  if (g.dim() == 2) {
    for (int p = 1; p < g.size(0); ++p)
      for (int q = 1; q < g.size(1); ++q)
        symbol[g.coeff_index(p, q)] = laplacian_symbol(g, p, q);
  } else {
    for (int p = 1; p < g.size(0); ++p)
      for (int q = 1; q < g.size(1); ++q)
        for (int r = 1; r < g.size(2); ++r)
          symbol[g.coeff_index(p, q, r)] = laplacian_symbol(g, p, q, r);
  }
}

// Per-node quadratics x^2+y^2, x^2-y^2, x*y, z^2 against which every
// harmonic phase window is a dot product.
inline void fill_quadratics(const GridSpec& g, std::array<std::vector<double>, 4>& quad) {
  const std::size_t n = static_cast<std::size_t>(g.node_count());
  for (auto& q : quad) q.assign(n, 0.0);
  auto set = [&](std::int64_t i, const Point& x) {
    quad[0][i] = x[0] * x[0] + x[1] * x[1];
    quad[1][i] = x[0] * x[0] - x[1] * x[1];
    quad[2][i] = x[0] * x[1];
    quad[3][i] = x[2] * x[2];
  };
  if (g.dim() == 2) {
    for (int s = 0; s <= g.size(0); ++s)
      for (int l = 0; l <= g.size(1); ++l) set(g.node_index(s, l), g.node_point(s, l));
  } else {
    for (int s = 0; s <= g.size(0); ++s)
      for (int l = 0; l <= g.size(1); ++l)
        for (int m = 0; m <= g.size(2); ++m)
          set(g.node_index(s, l, m), g.node_point(s, l, m));
  }
}

// Panel counts are specified per half-step window; merged windows get
// proportionally more panels so the quadrature step stays fixed.
inline int scaled_panels(int panels_per_half_step, double window, double half_step) {
  const double ratio = half_step > 0.0 ? std::abs(window) / half_step : 1.0;
  return panels_per_half_step * std::max(1, static_cast<int>(std::lround(ratio)));
}

}  // namespace rotbec::detail
