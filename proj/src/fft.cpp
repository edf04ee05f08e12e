#include "fft.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>
#include <stdexcept>

namespace qcorr::detail {

namespace {

// The FFTW planner is not re-entrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Buffer {
  explicit Buffer(std::size_t n) : data(static_cast<fftwl_complex*>(fftwl_malloc(sizeof(fftwl_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~Buffer() { fftwl_free(data); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  fftwl_complex* data;
};

struct Plan {
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftwl_destroy_plan(plan);
  }
  fftwl_plan plan = nullptr;
};

std::vector<cplx> run(const std::vector<cplx>& x, int rank, std::size_t m, int sign) {
  const std::size_t total = x.size();
  Buffer in(total), out(total);
  Plan p;
  {
    std::lock_guard lock(planner_mutex());
    const int n = static_cast<int>(m);
    p.plan = rank == 1 ? fftwl_plan_dft_1d(n, in.data, out.data, sign, FFTW_ESTIMATE)
                       : fftwl_plan_dft_2d(n, n, in.data, out.data, sign, FFTW_ESTIMATE);
  }
  if (!p.plan) throw std::runtime_error("FFTW planning failed");
  for (std::size_t i = 0; i < total; ++i) {
    in.data[i][0] = x[i].real();
    in.data[i][1] = x[i].imag();
  }
  fftwl_execute(p.plan);
  std::vector<cplx> y(total);
  for (std::size_t i = 0; i < total; ++i) y[i] = {out.data[i][0], out.data[i][1]};
  return y;
}

}  // namespace

std::vector<cplx> dft(const std::vector<cplx>& x, Direction dir) {
  if (x.empty()) return {};
  return run(x, 1, x.size(), dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD);
}

std::vector<cplx> dft2(const std::vector<cplx>& x, std::size_t m) {
  if (x.size() != m * m) throw std::invalid_argument("dft2: size mismatch");
  if (m == 0) return {};
  return run(x, 2, m, FFTW_FORWARD);
}

}  // namespace qcorr::detail
