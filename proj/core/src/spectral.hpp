#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "darwin/field.hpp"

namespace darwin::detail {

using Complex = std::complex<double>;

// fftw_malloc-backed complex buffer. Planning happens on these buffers so
// the chosen codelets never depend on heap alignment.
class SpectralBuffer {
 public:
  explicit SpectralBuffer(std::size_t n);
  ~SpectralBuffer();
  SpectralBuffer(const SpectralBuffer&) = delete;
  SpectralBuffer& operator=(const SpectralBuffer&) = delete;
  SpectralBuffer(SpectralBuffer&& other) noexcept;
  SpectralBuffer& operator=(SpectralBuffer&& other) noexcept;

  Complex* data() { return data_; }
  const Complex* data() const { return data_; }
  std::size_t size() const { return size_; }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }

 private:
  Complex* data_ = nullptr;
  std::size_t size_ = 0;
};

/// Forward transform of a real grid (unnormalized).
SpectralBuffer forward(const GridShape& shape, const std::vector<double>& values);

/// Inverse transform including the 1/N normalization; returns the real part.
std::vector<double> inverse(const GridShape& shape, SpectralBuffer spectrum);

/// k_eff along one axis for FFT index m of n points with spacing h.
double wavenumber(std::size_t m, std::size_t n, double h);

/// Full |k| along one axis; unlike wavenumber() it keeps pi/h at Nyquist.
double wavenumber_magnitude(std::size_t m, std::size_t n, double h);

/// Calls fn(flat_index, kx, ky, kz) for every mode.
template <class Fn>
void for_each_mode(const GridShape& shape, Fn&& fn) {
  std::vector<double> kx(shape.nx), ky(shape.ny), kz(shape.nz);
  for (std::size_t i = 0; i < shape.nx; ++i) kx[i] = wavenumber(i, shape.nx, shape.spacing);
  for (std::size_t j = 0; j < shape.ny; ++j) ky[j] = wavenumber(j, shape.ny, shape.spacing);
  for (std::size_t k = 0; k < shape.nz; ++k) kz[k] = wavenumber(k, shape.nz, shape.spacing);
  for (std::size_t i = 0; i < shape.nx; ++i) {
    for (std::size_t j = 0; j < shape.ny; ++j) {
      for (std::size_t k = 0; k < shape.nz; ++k) {
        fn(shape.index(i, j, k), kx[i], ky[j], kz[k]);
      }
    }
  }
}

/// Calls fn(flat_index, |k|^2) for every mode, Nyquist included.
template <class Fn>
void for_each_mode_k2(const GridShape& shape, Fn&& fn) {
  std::vector<double> kx(shape.nx), ky(shape.ny), kz(shape.nz);
  for (std::size_t i = 0; i < shape.nx; ++i) kx[i] = wavenumber_magnitude(i, shape.nx, shape.spacing);
  for (std::size_t j = 0; j < shape.ny; ++j) ky[j] = wavenumber_magnitude(j, shape.ny, shape.spacing);
  for (std::size_t k = 0; k < shape.nz; ++k) kz[k] = wavenumber_magnitude(k, shape.nz, shape.spacing);
  for (std::size_t i = 0; i < shape.nx; ++i) {
    for (std::size_t j = 0; j < shape.ny; ++j) {
      for (std::size_t k = 0; k < shape.nz; ++k) {
        fn(shape.index(i, j, k), kx[i] * kx[i] + ky[j] * ky[j] + kz[k] * kz[k]);
      }
    }
  }
}

}  // namespace darwin::detail
