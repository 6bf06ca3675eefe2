#include "hwkb/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace hwkb::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan plan_for(const Grid& grid, int sign) {
  using Key = std::tuple<int, int, int>;
  static std::map<Key, fftw_plan> cache;
  std::lock_guard lock(planner_mutex());
  const Key key{grid.dim(), grid.points(), sign};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  std::vector<int> shape(grid.dim(), grid.points());
  std::vector<Complex> scratch_in(grid.size()), scratch_out(grid.size());
  fftw_plan plan = fftw_plan_dft(grid.dim(), shape.data(),
                                 reinterpret_cast<fftw_complex*>(scratch_in.data()),
                                 reinterpret_cast<fftw_complex*>(scratch_out.data()), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan == nullptr) throw std::runtime_error("fftw planning failed");
  cache.emplace(key, plan);
  return plan;
}

void execute(const Grid& grid, int sign, std::span<const Complex> in, std::span<Complex> out) {
  if (in.size() != grid.size() || out.size() != grid.size())
    throw std::invalid_argument("fft buffer size does not match grid");
  fftw_plan plan = plan_for(grid, sign);
  // fftw_execute_dft does not write to its input for out-of-place complex plans.
  auto* src = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data()));
  fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void fft_forward(const Grid& grid, std::span<const Complex> in, std::span<Complex> out) {
  execute(grid, FFTW_FORWARD, in, out);
}

void fft_backward(const Grid& grid, std::span<const Complex> in, std::span<Complex> out) {
  execute(grid, FFTW_BACKWARD, in, out);
}

}  // namespace hwkb::detail
