#ifndef FNLW_FOURIER_FIELD_HPP
#define FNLW_FOURIER_FIELD_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "fnlw/grid.hpp"

namespace fnlw {

/// Fourier coefficients f^(n) of a real field on the torus, stored on the
/// full M x M mode lattice. Entry (i, j) holds the mode
/// (wavenumber(i, M), wavenumber(j, M)).
///
/// Synthesis convention: f(x) = sum_n f^(n) e^{i n.x}, so the coefficients are
/// orthonormal with respect to the normalized measure on [0, 2pi)^2.
template <typename Scalar>
class FourierField {
 public:
  using RealScalar = Scalar;
  using Complex = std::complex<Scalar>;
  using Coefficients = Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic>;

  FourierField() = default;

  explicit FourierField(const GridSpec& grid)
      : grid_(grid), coefficients_(Coefficients::Zero(grid.M, grid.M)) {}

  FourierField(const GridSpec& grid, Coefficients coefficients)
      : grid_(grid), coefficients_(std::move(coefficients)) {
    if (coefficients_.rows() != grid.M || coefficients_.cols() != grid.M)
      throw std::invalid_argument("coefficient array does not match grid size");
  }

  const GridSpec& grid() const noexcept { return grid_; }
  int size() const noexcept { return grid_.M; }
  int band() const noexcept { return grid_.N; }

  const Coefficients& coefficients() const noexcept { return coefficients_; }
  Coefficients& coefficients() noexcept { return coefficients_; }

  /// Coefficient of mode n, zero if n has no slot on this lattice.
  Complex coefficient(Mode n) const {
    if (!representable(n.n1, size()) || !representable(n.n2, size()))
      return Complex(0);
    return coefficients_(storage_index(n.n1, size()), storage_index(n.n2, size()));
  }

  Complex& operator[](Mode n) {
    if (!representable(n.n1, size()) || !representable(n.n2, size()))
      throw std::out_of_range("mode not representable on this lattice");
    return coefficients_(storage_index(n.n1, size()), storage_index(n.n2, size()));
  }

  /// Sets f^(n) = c and f^(-n) = conj(c).
  void set_symmetric(Mode n, Complex c) {
    (*this)[n] = c;
    (*this)[-n] = std::conj(c);
    if (n == -n) (*this)[n] = Complex(c.real(), 0);
  }

  /// Declares a new band radius without touching coefficients.
  void set_band(int N) noexcept { grid_.N = N; }

  FourierField& operator+=(const FourierField& other) {
    check_same_lattice(other);
    coefficients_ += other.coefficients_;
    grid_.N = std::max(grid_.N, other.grid_.N);
    return *this;
  }
  FourierField& operator-=(const FourierField& other) {
    check_same_lattice(other);
    coefficients_ -= other.coefficients_;
    grid_.N = std::max(grid_.N, other.grid_.N);
    return *this;
  }
  FourierField& operator*=(Scalar s) {
    coefficients_ *= s;
    return *this;
  }

  friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
  friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
  friend FourierField operator*(FourierField a, Scalar s) { return a *= s; }
  friend FourierField operator*(Scalar s, FourierField a) { return a *= s; }

 private:
  void check_same_lattice(const FourierField& other) const {
    if (other.size() != size())
      throw std::invalid_argument("fields live on different lattices");
  }

  GridSpec grid_{};
  Coefficients coefficients_;
};

using Field = FourierField<double>;

/// Calls fn(Mode, i, j) for every slot of an M x M lattice.
template <typename Fn>
void for_each_mode(int M, Fn&& fn) {
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < M; ++i) fn(Mode{wavenumber(i, M), wavenumber(j, M)}, i, j);
}

/// Fourier projector P_N: keeps |n| <= N, zeroes the rest.
template <typename Scalar>
FourierField<Scalar> project(const FourierField<Scalar>& f, int N) {
  if (N < 0) throw std::invalid_argument("projection radius must be >= 0");
  FourierField<Scalar> out = f;
  auto& c = out.coefficients();
  for_each_mode(f.size(), [&](Mode n, int i, int j) {
    if (!in_ball(n, N)) c(i, j) = 0;
  });
  out.set_band(std::min(f.band(), N));
  return out;
}

/// Averages f^(n) with conj(f^(-n)), restoring exact Hermitian symmetry.
template <typename Scalar>
void symmetrize(FourierField<Scalar>& f) {
  const int M = f.size();
  auto& c = f.coefficients();
  for (int j = 0; j < M; ++j) {
    const int jm = (M - j) % M;
    for (int i = 0; i < M; ++i) {
      const int im = (M - i) % M;
      if (jm < j || (jm == j && im < i)) continue;
      const auto avg = Scalar(0.5) * (c(i, j) + std::conj(c(im, jm)));
      c(i, j) = avg;
      c(im, jm) = std::conj(avg);
    }
  }
}

/// Largest |f^(n) - conj(f^(-n))|.
template <typename Scalar>
Scalar hermitian_defect(const FourierField<Scalar>& f) {
  const int M = f.size();
  const auto& c = f.coefficients();
  Scalar worst = 0;
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < M; ++i)
      worst = std::max(worst, std::abs(c(i, j) - std::conj(c((M - i) % M, (M - j) % M))));
  return worst;
}

/// Largest |f^(n)| over modes outside the ball of radius N.
template <typename Scalar>
Scalar out_of_band_magnitude(const FourierField<Scalar>& f, int N) {
  Scalar worst = 0;
  for_each_mode(f.size(), [&](Mode n, int i, int j) {
    if (!in_ball(n, N)) worst = std::max(worst, std::abs(f.coefficients()(i, j)));
  });
  return worst;
}

/// Copies every mode that has a slot on the target lattice; band unchanged.
template <typename Scalar>
FourierField<Scalar> resample(const FourierField<Scalar>& f, int M_new) {
  GridSpec grid = f.grid();
  grid.M = M_new;
  FourierField<Scalar> out(grid);
  for_each_mode(f.size(), [&](Mode n, int i, int j) {
    if (representable(n.n1, M_new) && representable(n.n2, M_new))
      out[n] = f.coefficients()(i, j);
  });
  return out;
}

/// Coefficient inner product sum_n f^(n) conj(g^(n)) (the L^2 pairing under
/// the normalized measure).
template <typename Scalar>
std::complex<Scalar> inner_product(const FourierField<Scalar>& f,
                                   const FourierField<Scalar>& g) {
  if (f.size() != g.size())
    throw std::invalid_argument("fields live on different lattices");
  return (f.coefficients() * g.coefficients().conjugate()).sum();
}

/// H^s norm (sum_n <n>^{2s} |f^(n)|^2)^{1/2}.
template <typename Scalar>
Scalar sobolev_norm(const FourierField<Scalar>& f, Scalar s) {
  Scalar total = 0;
  for_each_mode(f.size(), [&](Mode n, int i, int j) {
    const Scalar a2 = std::norm(f.coefficients()(i, j));
    if (a2 == 0) return;
    total += std::pow(Scalar(1) + Scalar(n.norm_squared()), s) * a2;
  });
  return std::sqrt(total);
}

/// Direct evaluation of sum_n f^(n) e^{i n.x} at one point (real part).
template <typename Scalar>
Scalar evaluate_at(const FourierField<Scalar>& f, Scalar x1, Scalar x2) {
  Scalar total = 0;
  for_each_mode(f.size(), [&](Mode n, int i, int j) {
    const auto c = f.coefficients()(i, j);
    if (c == std::complex<Scalar>(0)) return;
    const Scalar phase = Scalar(n.n1) * x1 + Scalar(n.n2) * x2;
    total += c.real() * std::cos(phase) - c.imag() * std::sin(phase);
  });
  return total;
}

}  // namespace fnlw

#endif  // FNLW_FOURIER_FIELD_HPP
