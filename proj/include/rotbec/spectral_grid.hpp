#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

// Tensor-product grid on a rectangular box with homogeneous Dirichlet
// boundary, discrete sine transforms, spectral differentiation and
// discrete integrals.

namespace rotbec {

using Complex = std::complex<double>;

// A spatial point. z is ignored for 2D quantities.
using Point = std::array<double, 3>;

// Rectangular computational box [a,b]x[c,e] (x[f,g] in 3D).
struct BoxDomain {
  int dim = 2;
  std::array<double, 3> lo{{0.0, 0.0, 0.0}};
  std::array<double, 3> hi{{0.0, 0.0, 0.0}};

  static BoxDomain box2d(double a, double b, double c, double e);
  static BoxDomain box3d(double a, double b, double c, double e, double f, double g);
  static BoxDomain square2d(double a, double b) { return box2d(a, b, a, b); }

  double length(int axis) const { return hi[axis] - lo[axis]; }
};

// Uniform grid with J+1 nodes per axis (both boundary nodes included).
// J, K (, L) must be even and >= 4.
class GridSpec {
 public:
  GridSpec() = default;
  GridSpec(BoxDomain box, int J, int K);
  GridSpec(BoxDomain box, int J, int K, int L);

  const BoxDomain& box() const { return box_; }
  int dim() const { return box_.dim; }
  int size(int axis) const { return n_[axis]; }            // J, K, L
  int nodes(int axis) const { return n_[axis] + 1; }       // J+1 nodes per axis
  double spacing(int axis) const { return box_.length(axis) / n_[axis]; }
  double node(int axis, int i) const { return box_.lo[axis] + i * spacing(axis); }

  std::int64_t node_count() const;      // product of (n+1)
  std::int64_t interior_count() const;  // product of (n-1)

  // Sine frequency mu_p = p*pi/(b-a) along an axis, p in 1..n-1.
  double frequency(int axis, int p) const;

  Point node_point(int s, int l, int m = 0) const;

  std::int64_t node_index(int s, int l, int m = 0) const {
    if (dim() == 2) return static_cast<std::int64_t>(s) * (n_[1] + 1) + l;
    return (static_cast<std::int64_t>(s) * (n_[1] + 1) + l) * (n_[2] + 1) + m;
  }
  // Coefficient index for (p,q[,r]), each in 1..n-1.
  std::int64_t coeff_index(int p, int q, int r = 1) const {
    if (dim() == 2) return static_cast<std::int64_t>(p - 1) * (n_[1] - 1) + (q - 1);
    return (static_cast<std::int64_t>(p - 1) * (n_[1] - 1) + (q - 1)) * (n_[2] - 1) + (r - 1);
  }

  bool operator==(const GridSpec& o) const;
  bool operator!=(const GridSpec& o) const { return !(*this == o); }

 private:
  BoxDomain box_{};
  std::array<int, 3> n_{{0, 0, 0}};
};

// Complex samples on the full node set (boundary included). Fields fed to
// the transforms must vanish on the boundary; fields produced by
// partial_derivative may not.
class ComplexField {
 public:
  ComplexField() = default;
  explicit ComplexField(const GridSpec& grid)
      : grid_(grid), values_(static_cast<std::size_t>(grid.node_count())) {}

  const GridSpec& grid() const { return grid_; }

  Complex& operator()(int s, int l, int m = 0) { return values_[grid_.node_index(s, l, m)]; }
  const Complex& operator()(int s, int l, int m = 0) const {
    return values_[grid_.node_index(s, l, m)];
  }

  Complex* data() { return values_.data(); }
  const Complex* data() const { return values_.data(); }
  std::size_t size() const { return values_.size(); }

 private:
  GridSpec grid_{};
  std::vector<Complex> values_;
};

// Sine-series coefficients phi_hat_{pq(r)} on the interior frequency set
// {1..J-1}x{1..K-1}(x{1..L-1}).
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const GridSpec& grid)
      : grid_(grid), coeffs_(static_cast<std::size_t>(grid.interior_count())) {}

  const GridSpec& grid() const { return grid_; }

  Complex& at(int p, int q, int r = 1) { return coeffs_[grid_.coeff_index(p, q, r)]; }
  const Complex& at(int p, int q, int r = 1) const { return coeffs_[grid_.coeff_index(p, q, r)]; }

  Complex* data() { return coeffs_.data(); }
  const Complex* data() const { return coeffs_.data(); }
  std::size_t size() const { return coeffs_.size(); }

 private:
  GridSpec grid_{};
  std::vector<Complex> coeffs_;
};

// Forward transform: coefficients of the sine interpolant through the
// interior nodes. Rejects fields whose boundary values exceed 1e-12.
SpectralField dst_forward(const ComplexField& field);

// Evaluate the sine series at all nodes; boundary comes out exactly zero.
ComplexField dst_inverse(const SpectralField& spec);

// Allocation-free variants for the time-stepping loop. dst_inverse_into
// overwrites interior nodes only; the caller keeps the boundary zero.
void dst_forward_into(const ComplexField& field, SpectralField& out);
void dst_inverse_into(const SpectralField& spec, ComplexField& out);

// (mu_p^x)^2 + (mu_q^y)^2 (+ (mu_r^z)^2 in 3D). Throws on an index outside
// the interior frequency set.
double laplacian_symbol(const GridSpec& grid, int p, int q, int r = 1);

// Derivative of the sine interpolant along `axis`, sampled at all nodes,
// via odd periodic extension to a 2J-point Fourier grid. Requires a
// boundary-zero input; the output may be nonzero on the faces normal to
// `axis`.
ComplexField partial_derivative(const ComplexField& field, int axis);

// h_x*h_y(*h_z) * sum over interior nodes of conj(f)*g. Exact for products
// of sine basis modes. Throws on grid mismatch.
Complex inner_product(const ComplexField& f, const ComplexField& g);

// sqrt(<f,f>): the h-weighted discrete l2 norm.
double l2_norm(const ComplexField& f);

}  // namespace rotbec
