#include "roughstart/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace roughstart::fft {

namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(int d, int M, int sign) {
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(d, M, sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    std::vector<Complex> scratch(static_cast<std::size_t>(d == 1 ? M : M * M));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int dir = sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = d == 1 ? fftw_plan_dft_1d(M, buf, buf, dir, flags)
                            : fftw_plan_dft_2d(M, M, buf, buf, dir, flags);
    if (!plan) throw NumericalError("fft: plan creation failed");
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

std::string library_version() { return fftw_version; }

int good_size(int n) {
  if (n <= 1) return 1;
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

void transform(std::vector<Complex>& data, int d, int M, int sign) {
  if (d != 1 && d != 2) throw ValidationError("fft: d must be 1 or 2");
  const std::size_t expected = d == 1 ? static_cast<std::size_t>(M) : static_cast<std::size_t>(M) * M;
  if (data.size() != expected) throw ValidationError("fft: buffer size does not match grid");
  fftw_plan plan = cache().get(d, M, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace roughstart::fft
