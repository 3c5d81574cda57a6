#include "levi/common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <thread>

namespace levi {

void require_dim(const CVec& v, Index n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(n) +
                         ", got " + std::to_string(v.size()));
  }
}

Complex hermitian_product(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) throw DimensionError("hermitian_product: size mismatch");
  Complex s{0.0, 0.0};
  for (Index j = 0; j < a.size(); ++j) s += a[j] * std::conj(b[j]);
  return s;
}

double euclidean_product(const CVec& a, const CVec& b) { return hermitian_product(a, b).real(); }

RVec realify(const CVec& z) {
  const Index n = z.size();
  RVec x(2 * n);
  x.head(n) = z.real();
  x.tail(n) = z.imag();
  return x;
}

CVec complexify(const RVec& x) {
  if (x.size() % 2 != 0) throw DimensionError("complexify: odd real dimension");
  const Index n = x.size() / 2;
  CVec z(n);
  for (Index j = 0; j < n; ++j) z[j] = Complex(x[j], x[n + j]);
  return z;
}

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs(const std::vector<CMat>& tensor) {
  double m = 0.0;
  for (const auto& slice : tensor) m = std::max(m, max_abs(slice));
  return m;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng substream(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

CVec random_gaussian(Rng& rng, Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVec v(n);
  for (Index j = 0; j < n; ++j) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[j] = Complex(re, im);
  }
  return v;
}

CVec random_unit(Rng& rng, Index n) {
  for (;;) {
    CVec v = random_gaussian(rng, n);
    const double r = v.norm();
    if (r > 1e-12) return v / r;
  }
}

double random_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng);
}

CVec random_in_ball(Rng& rng, const CVec& center, double radius) {
  const Index n = center.size();
  const CVec dir = random_unit(rng, n);
  // radius * U^(1/d) with d = 2n real dimensions
  const double u = random_uniform(rng, 0.0, 1.0);
  const double r = radius * std::pow(u, 1.0 / static_cast<double>(2 * n));
  return center + r * dir;
}

std::size_t thread_cap_from_env() {
  const char* raw = std::getenv("LEVI_LAB_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const long long v = std::strtoll(raw, &end, 10);
  if (end == raw || *end != '\0' || v <= 0) {
    throw ConfigError(std::string("LEVI_LAB_THREADS must be a positive integer, got '") + raw + "'");
  }
  return static_cast<std::size_t>(v);
}

std::size_t worker_count() {
  std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::size_t cap = 0;
  try {
    cap = thread_cap_from_env();
  } catch (const ConfigError&) {
    cap = 1;
  }
  return cap == 0 ? hw : std::min(hw, cap);
}

namespace detail {

void run_parallel(std::size_t count, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto loop = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
  }
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace detail
} // namespace levi
