#pragma once

#include <complex>

namespace lcv {

/// Thin process-wide FFTW3 front end. Plans are cached per grid size and
/// guarded by a mutex; execution on caller-owned buffers is thread-safe.
/// Transforms are unnormalized (forward then inverse scales by nx*ny).
namespace fft {

void forward(int nx, int ny, std::complex<double>* data);
void inverse(int nx, int ny, std::complex<double>* data);

}  // namespace fft
}  // namespace lcv
