#include "lcv/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace lcv::fft {
namespace {

std::mutex plan_mutex;

fftw_plan get_plan(int nx, int ny, int sign) {
    // Plans created once per (nx, ny, sign) on a scratch buffer with
    // FFTW_UNALIGNED so they can run on any caller buffer.
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(nx, ny, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    fftw_complex* scratch = fftw_alloc_complex(static_cast<std::size_t>(nx) * ny);
    fftw_plan plan = fftw_plan_dft_2d(nx, ny, scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    cache.emplace(key, plan);
    return plan;
}

}  // namespace

void forward(int nx, int ny, std::complex<double>* data) {
    fftw_plan plan = get_plan(nx, ny, FFTW_FORWARD);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

void inverse(int nx, int ny, std::complex<double>* data) {
    fftw_plan plan = get_plan(nx, ny, FFTW_BACKWARD);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

}  // namespace lcv::fft
