#include "ffprog/numeric.hpp"
#include "ffprog/random.hpp"
#include "ffprog/error.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

namespace ffprog {

namespace {

template <typename T>
T pairwise(std::span<const T> v) {
  constexpr std::size_t kLeaf = 8;
  if (v.size() <= kLeaf) {
    T acc{};
    for (const T& x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise(v.first(half)) + pairwise(v.subspan(half));
}

}  // namespace

Complex pairwise_sum(std::span<const Complex> values) { return pairwise(values); }

double pairwise_sum(std::span<const double> values) { return pairwise(values); }

std::complex<double> SplitMix64::unit_circle() {
  const double theta = 2.0 * std::numbers::pi * uniform();
  return {std::cos(theta), std::sin(theta)};
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

unsigned default_jobs() {
  if (const char* env = std::getenv("FFPROG_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace ffprog

namespace ffprog {

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::ShapeMismatch, "x and y lengths differ");
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorKind::InsufficientData, "need at least two points");
  const double mx = pairwise_sum(x) / static_cast<double>(n);
  const double my = pairwise_sum(y) / static_cast<double>(n);
  std::vector<double> sxx(n), sxy(n);
  for (std::size_t i = 0; i < n; ++i) {
    sxx[i] = (x[i] - mx) * (x[i] - mx);
    sxy[i] = (x[i] - mx) * (y[i] - my);
  }
  const double Sxx = pairwise_sum(sxx);
  if (Sxx == 0.0) throw Error(ErrorKind::InsufficientData, "x values are all equal");
  LineFit fit;
  fit.slope = pairwise_sum(sxy) / Sxx;
  fit.intercept = my - fit.slope * mx;
  std::vector<double> sq(n);
  fit.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = y[i] - (fit.slope * x[i] + fit.intercept);
    sq[i] = fit.residuals[i] * fit.residuals[i];
  }
  if (n > 2) fit.slope_stderr = std::sqrt(pairwise_sum(sq) / static_cast<double>(n - 2) / Sxx);
  return fit;
}

}  // namespace ffprog
