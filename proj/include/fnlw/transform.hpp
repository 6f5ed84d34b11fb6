#ifndef FNLW_TRANSFORM_HPP
#define FNLW_TRANSFORM_HPP

#include <unsupported/Eigen/FFT>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fnlw/fourier_field.hpp"

namespace fnlw {

template <typename Scalar>
using GridValues = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
  thread_local Eigen::FFT<Scalar> engine = [] {
    Eigen::FFT<Scalar> e;
    e.SetFlag(Eigen::FFT<Scalar>::Unscaled);
    return e;
  }();
  return engine;
}

/// Unscaled 2-D DFT along both axes. Forward uses e^{-i n.x}.
template <typename Scalar>
void transform_2d(Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& a,
                  bool inverse) {
  using Complex = std::complex<Scalar>;
  auto& fft = fft_engine<Scalar>();
  const Eigen::Index M = a.rows();
  if (M == 1) return;
  thread_local std::vector<Complex> in, out;
  in.resize(M);
  out.resize(M);
  for (Eigen::Index j = 0; j < M; ++j) {
    Complex* col = a.col(j).data();
    if (inverse)
      fft.inv(out.data(), col, M);
    else
      fft.fwd(out.data(), col, M);
    std::copy(out.begin(), out.end(), col);
  }
  for (Eigen::Index i = 0; i < M; ++i) {
    for (Eigen::Index j = 0; j < M; ++j) in[j] = a(i, j);
    if (inverse)
      fft.inv(out.data(), in.data(), M);
    else
      fft.fwd(out.data(), in.data(), M);
    for (Eigen::Index j = 0; j < M; ++j) a(i, j) = out[j];
  }
}

}  // namespace detail

/// Grid values f(x_{ij}) at x_{ij} = (2 pi i / M, 2 pi j / M).
template <typename Scalar>
GridValues<Scalar> synthesize(const FourierField<Scalar>& f) {
  auto work = f.coefficients();
  detail::transform_2d(work, /*inverse=*/true);
  return work.real();
}

/// Fourier coefficients of real grid values, Hermitian-symmetrized.
template <typename Scalar>
FourierField<Scalar> analyze(const GridSpec& grid, const GridValues<Scalar>& values) {
  if (values.rows() != grid.M || values.cols() != grid.M)
    throw std::invalid_argument("grid values are " + std::to_string(values.rows()) +
                                "x" + std::to_string(values.cols()) +
                                ", expected M=" + std::to_string(grid.M));
  typename FourierField<Scalar>::Coefficients work =
      values.template cast<std::complex<Scalar>>();
  detail::transform_2d(work, /*inverse=*/false);
  work /= Scalar(grid.M) * Scalar(grid.M);
  FourierField<Scalar> out(grid, std::move(work));
  symmetrize(out);
  return out;
}

/// Applies a pointwise map of polynomial degree `degree` to a band-limited
/// field and returns the exact coefficients of the result on a lattice wide
/// enough to hold band degree * band(f) without aliasing.
template <typename Scalar, typename Fn>
FourierField<Scalar> map_pointwise(const FourierField<Scalar>& f, int degree, Fn&& fn) {
  GridSpec out_grid = f.grid();
  out_grid.N = std::max(degree, 0) * f.band();
  out_grid.M = std::max(f.size(), fft_size_at_least(2 * out_grid.N + 1));
  const auto values = synthesize(resample(f, out_grid.M)).unaryExpr(fn).eval();
  return project(analyze(out_grid, values), out_grid.N);
}

/// P_{keep}( fn(f) ) evaluated on f's own lattice. Exact provided
/// M >= degree * band(f) + keep + 1.
template <typename Scalar, typename Fn>
FourierField<Scalar> map_pointwise_projected(const FourierField<Scalar>& f, int degree,
                                             int keep, Fn&& fn) {
  if (f.size() < degree * f.band() + keep + 1)
    throw std::invalid_argument("lattice too small for alias-free degree-" +
                                std::to_string(degree) + " evaluation");
  GridSpec out_grid = f.grid();
  out_grid.N = keep;
  const auto values = synthesize(f).unaryExpr(fn).eval();
  return project(analyze(out_grid, values), keep);
}

/// Zero mode (spatial mean under the normalized measure) of fn(f). Exact
/// provided M >= degree * band(f) + 1.
template <typename Scalar, typename Fn>
Scalar pointwise_mean(const FourierField<Scalar>& f, int degree, Fn&& fn) {
  if (f.size() < degree * f.band() + 1)
    throw std::invalid_argument("lattice too small for alias-free degree-" +
                                std::to_string(degree) + " mean");
  return synthesize(f).unaryExpr(fn).mean();
}

/// Coefficients of x -> sum_k c_k f(x)^k, alias-free on every mode.
/// The degree may not exceed the grid's Wick degree 2m+2.
template <typename Scalar>
FourierField<Scalar> pointwise_polynomial(const FourierField<Scalar>& f,
                                          std::span<const Scalar> coefficients) {
  const int degree = static_cast<int>(coefficients.size()) - 1;
  if (degree > f.grid().wick_degree())
    throw std::invalid_argument("polynomial degree " + std::to_string(degree) +
                                " exceeds the dealiasing guarantee 2m+2 = " +
                                std::to_string(f.grid().wick_degree()));
  if (degree < 0) return FourierField<Scalar>(f.grid());
  return map_pointwise(f, degree, [&](Scalar x) {
    Scalar acc = coefficients[degree];
    for (int k = degree - 1; k >= 0; --k) acc = acc * x + coefficients[k];
    return acc;
  });
}

/// Exact pointwise product f * g on a lattice holding band(f) + band(g).
template <typename Scalar>
FourierField<Scalar> multiply(const FourierField<Scalar>& f, const FourierField<Scalar>& g) {
  GridSpec out_grid = f.grid();
  out_grid.N = f.band() + g.band();
  out_grid.M = std::max({f.size(), g.size(), fft_size_at_least(2 * out_grid.N + 1)});
  const auto product =
      (synthesize(resample(f, out_grid.M)) * synthesize(resample(g, out_grid.M))).eval();
  return project(analyze(out_grid, product), out_grid.N);
}

}  // namespace fnlw

#endif  // FNLW_TRANSFORM_HPP
