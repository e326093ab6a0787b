#pragma once
// Rectangular (x,t) evaluation grids and a small data-parallel sweep helper.

#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace zsd {

struct Grid {
  double x_min = -3, x_max = 3;
  int nx = 21;
  double t_min = -3, t_max = 3;
  int nt = 21;

  void validate(int min_points = 2) const {
    if (nx < min_points || nt < min_points)
      throw std::invalid_argument("grid needs at least " + std::to_string(min_points) +
                                  " points per axis");
    if (!(x_max > x_min) || !(t_max > t_min)) throw std::invalid_argument("empty grid extent");
  }

  std::vector<double> xs() const { return axis(x_min, x_max, nx); }
  std::vector<double> ts() const { return axis(t_min, t_max, nt); }

  static std::vector<double> axis(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
  }
};

// Worker count: ZSD_THREADS overrides, otherwise hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("ZSD_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs fn(i) for i in [0, n); result combination stays with the caller, so
// chunks are recombined deterministically in index order.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers = std::min<std::size_t>(thread_count(), n ? n : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace zsd
