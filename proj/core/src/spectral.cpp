#include "spectral.hpp"

#include <mutex>
#include <new>
#include <numbers>
#include <utility>

#include <fftw3.h>

namespace darwin::detail {

namespace {

// The FFTW planner is not re-entrant; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(const GridShape& shape, SpectralBuffer& buffer, int sign) {
    std::lock_guard lock(planner_mutex());
    auto* io = reinterpret_cast<fftw_complex*>(buffer.data());
    plan_ = fftw_plan_dft_3d(static_cast<int>(shape.nx), static_cast<int>(shape.ny),
                             static_cast<int>(shape.nz), io, io, sign, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::bad_alloc();
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void execute() { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

}  // namespace

SpectralBuffer::SpectralBuffer(std::size_t n) : size_(n) {
  data_ = reinterpret_cast<Complex*>(fftw_alloc_complex(n));
  if (data_ == nullptr) throw std::bad_alloc();
}

SpectralBuffer::~SpectralBuffer() {
  if (data_ != nullptr) fftw_free(data_);
}

SpectralBuffer::SpectralBuffer(SpectralBuffer&& other) noexcept
    : data_(std::exchange(other.data_, nullptr)), size_(std::exchange(other.size_, 0)) {}

SpectralBuffer& SpectralBuffer::operator=(SpectralBuffer&& other) noexcept {
  if (this != &other) {
    if (data_ != nullptr) fftw_free(data_);
    data_ = std::exchange(other.data_, nullptr);
    size_ = std::exchange(other.size_, 0);
  }
  return *this;
}

SpectralBuffer forward(const GridShape& shape, const std::vector<double>& values) {
  SpectralBuffer buf(shape.nodes());
  // Planning may overwrite the buffer; fill it afterwards.
  Plan plan(shape, buf, FFTW_FORWARD);
  for (std::size_t i = 0; i < values.size(); ++i) buf[i] = Complex(values[i], 0.0);
  plan.execute();
  return buf;
}

std::vector<double> inverse(const GridShape& shape, SpectralBuffer spectrum) {
  Plan plan(shape, spectrum, FFTW_BACKWARD);
  plan.execute();
  const double norm = 1.0 / static_cast<double>(shape.nodes());
  std::vector<double> out(shape.nodes());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = spectrum[i].real() * norm;
  return out;
}

double wavenumber(std::size_t m, std::size_t n, double h) {
  if (2 * m == n) return 0.0;  // Nyquist
  const double signed_m = (2 * m < n) ? static_cast<double>(m)
                                      : static_cast<double>(m) - static_cast<double>(n);
  return 2.0 * std::numbers::pi * signed_m / (static_cast<double>(n) * h);
}

double wavenumber_magnitude(std::size_t m, std::size_t n, double h) {
  const std::size_t folded = (2 * m <= n) ? m : n - m;
  return 2.0 * std::numbers::pi * static_cast<double>(folded) / (static_cast<double>(n) * h);
}

}  // namespace darwin::detail
