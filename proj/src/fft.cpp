#include "hormander/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <vector>

#include "hormander/errors.hpp"

namespace hormander {

namespace {

// The FFTW planner is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::span<Complex> data) {
  return reinterpret_cast<fftw_complex*>(data.data());
}

int sign_of(FftDirection dir) { return dir == FftDirection::kForward ? FFTW_FORWARD : FFTW_BACKWARD; }

// Plans a batched transform and runs it in place, then applies the unitary scale.
void run_many(std::span<Complex> data, const std::vector<int>& dims, int howmany, int stride,
              int dist, FftDirection dir) {
  if (data.empty()) return;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(), howmany,
                              as_fftw(data), nullptr, stride, dist, as_fftw(data), nullptr,
                              stride, dist, sign_of(dir), FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw NumericError("FFTW failed to create a plan");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  double points = 1.0;
  for (int d : dims) points *= d;
  const double scale = 1.0 / std::sqrt(points);
  for (auto& v : data) v *= scale;
}

void check_size(std::span<Complex> data, const Lattice& lattice) {
  if (data.size() != lattice.size()) throw ShapeError("FFT buffer does not match the lattice");
}

}  // namespace

void fft_full(std::span<Complex> data, const Lattice& lattice, FftDirection dir) {
  check_size(data, lattice);
  std::vector<int> dims(lattice.k, lattice.n_x);
  dims.push_back(lattice.n_t);
  run_many(data, dims, 1, 1, 0, dir);
}

void fft_space(std::span<Complex> data, const Lattice& lattice, FftDirection dir) {
  check_size(data, lattice);
  std::vector<int> dims(lattice.k, lattice.n_x);
  run_many(data, dims, lattice.n_t, lattice.n_t, 1, dir);
}

void fft_time(std::span<Complex> data, const Lattice& lattice, FftDirection dir) {
  check_size(data, lattice);
  run_many(data, {lattice.n_t}, static_cast<int>(lattice.spatial_size()), 1, lattice.n_t, dir);
}

void fft_1d(std::span<Complex> data, FftDirection dir) {
  run_many(data, {static_cast<int>(data.size())}, 1, 1, 0, dir);
}

}  // namespace hormander
