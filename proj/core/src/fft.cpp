#include "ptycho/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "fft_internal.hpp"

namespace ptycho {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Twiddle with exact integer phase reduction: e^{sign*2*pi*i*(t*k mod n)/n}.
// Keeps the reference transforms accurate enough to serve as 1e-12 oracles.
inline cdouble unit_root(long long tk, long long n, int sign) {
  const long long m = ((tk % n) + n) % n;
  const double ang = sign * kTwoPi * static_cast<double>(m) / static_cast<double>(n);
  return {std::cos(ang), std::sin(ang)};
}

void require_vector(const ComplexField& z, const char* who) {
  if (!z.is_vector() || z.size() == 0)
    throw std::invalid_argument(std::string(who) + ": expected a nonempty 1D field");
}

// ---- FFTW plumbing -------------------------------------------------------
//
// The planner is not thread-safe, so every fftw_plan_* / destroy call happens
// under one mutex. Execution uses the new-array interface; all field buffers
// share the allocator's 64-byte alignment class, matching the buffers the
// plans were created on.

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int g_threads = 0;  // 0 = not initialized yet

int resolve_threads_locked() {
  if (g_threads > 0) return g_threads;
  int want = 1;
  if (const char* env = std::getenv("PTYCHO_THREADS")) {
    want = std::max(1, std::atoi(env));
  }
#ifdef PTYCHO_HAVE_FFTW_THREADS
  static bool threads_ready = fftw_init_threads() != 0;
  if (!threads_ready) want = 1;
  fftw_plan_with_nthreads(want);
#else
  want = 1;
#endif
  g_threads = want;
  return g_threads;
}

struct PlanKey {
  int rank;
  int n0, n1;
  int sign;
  bool operator<(const PlanKey& o) const {
    return std::tie(rank, n0, n1, sign) < std::tie(o.rank, o.n0, o.n1, o.sign);
  }
};

fftw_plan get_plan(const PlanKey& key) {
  static std::map<PlanKey, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  resolve_threads_locked();
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const std::size_t n = static_cast<std::size_t>(key.n0) * (key.rank == 2 ? key.n1 : 1);
  aligned_vector<cdouble> in(n), out(n);
  auto* pi = reinterpret_cast<fftw_complex*>(in.data());
  auto* po = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan p = key.rank == 1
                    ? fftw_plan_dft_1d(key.n0, pi, po, key.sign, FFTW_ESTIMATE)
                    : fftw_plan_dft_2d(key.n0, key.n1, pi, po, key.sign, FFTW_ESTIMATE);
  if (!p) throw std::runtime_error("fftw planning failed");
  cache.emplace(key, p);
  return p;
}

ComplexField run_fft(const ComplexField& z, int rank, int sign, bool normalize) {
  const PlanKey key{rank, static_cast<int>(z.rows()), static_cast<int>(z.cols()), sign};
  fftw_plan plan = get_plan(key);
  ComplexField out(z.rows(), z.cols());
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(z.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  if (normalize) {
    const double s = 1.0 / static_cast<double>(z.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= s;
  }
  return out;
}

}  // namespace

ComplexField naive_dft(const ComplexField& z) {
  require_vector(z, "naive_dft");
  const long long n = static_cast<long long>(z.size());
  ComplexField out(z.rows(), 1);
  for (long long t = 0; t < n; ++t) {
    cdouble acc{0.0, 0.0};
    for (long long k = 0; k < n; ++k) acc += z[k] * unit_root(t * k, n, -1);
    out[t] = acc;
  }
  return out;
}

ComplexField naive_idft(const ComplexField& z) {
  require_vector(z, "naive_idft");
  const long long n = static_cast<long long>(z.size());
  ComplexField out(z.rows(), 1);
  for (long long t = 0; t < n; ++t) {
    cdouble acc{0.0, 0.0};
    for (long long k = 0; k < n; ++k) acc += z[k] * unit_root(t * k, n, +1);
    out[t] = acc / static_cast<double>(n);
  }
  return out;
}

ComplexField naive_dft2(const ComplexField& z) {
  if (z.size() == 0) throw std::invalid_argument("naive_dft2: empty field");
  const long long n1 = static_cast<long long>(z.rows());
  const long long n2 = static_cast<long long>(z.cols());
  ComplexField out(z.rows(), z.cols());
  for (long long t1 = 0; t1 < n1; ++t1)
    for (long long t2 = 0; t2 < n2; ++t2) {
      cdouble acc{0.0, 0.0};
      for (long long k1 = 0; k1 < n1; ++k1)
        for (long long k2 = 0; k2 < n2; ++k2)
          acc += z(k1, k2) * unit_root(t1 * k1, n1, -1) * unit_root(t2 * k2, n2, -1);
      out(t1, t2) = acc;
    }
  return out;
}

ComplexField naive_idft2(const ComplexField& z) {
  if (z.size() == 0) throw std::invalid_argument("naive_idft2: empty field");
  const long long n1 = static_cast<long long>(z.rows());
  const long long n2 = static_cast<long long>(z.cols());
  const double s = 1.0 / static_cast<double>(n1 * n2);
  ComplexField out(z.rows(), z.cols());
  for (long long t1 = 0; t1 < n1; ++t1)
    for (long long t2 = 0; t2 < n2; ++t2) {
      cdouble acc{0.0, 0.0};
      for (long long k1 = 0; k1 < n1; ++k1)
        for (long long k2 = 0; k2 < n2; ++k2)
          acc += z(k1, k2) * unit_root(t1 * k1, n1, +1) * unit_root(t2 * k2, n2, +1);
      out(t1, t2) = acc * s;
    }
  return out;
}

ComplexField fast_fft(const ComplexField& z) {
  require_vector(z, "fast_fft");
  return run_fft(z, 1, FFTW_FORWARD, false);
}

ComplexField fast_ifft(const ComplexField& z) {
  require_vector(z, "fast_ifft");
  return run_fft(z, 1, FFTW_BACKWARD, true);
}

ComplexField fast_fft2(const ComplexField& z) {
  if (z.size() == 0) throw std::invalid_argument("fast_fft2: empty field");
  return run_fft(z, 2, FFTW_FORWARD, false);
}

ComplexField fast_ifft2(const ComplexField& z) {
  if (z.size() == 0) throw std::invalid_argument("fast_ifft2: empty field");
  return run_fft(z, 2, FFTW_BACKWARD, true);
}

int set_fft_threads(int n) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  g_threads = 0;
#ifdef PTYCHO_HAVE_FFTW_THREADS
  if (n >= 1) {
    static bool threads_ready = fftw_init_threads() != 0;
    g_threads = threads_ready ? n : 1;
    if (threads_ready) fftw_plan_with_nthreads(g_threads);
    return g_threads;
  }
#else
  g_threads = 1;
#endif
  return resolve_threads_locked();
}

int fft_threads() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  return resolve_threads_locked();
}

template <class Field>
static Field crop_centered_impl(const Field& spectrum, std::size_t mt1, std::size_t mt2) {
  const std::size_t n1 = spectrum.rows(), n2 = spectrum.cols();
  if (mt1 == 0 || mt2 == 0) throw std::invalid_argument("crop_centered: mt must be >= 1");
  if (2 * mt1 > n1 || 2 * mt2 > n2)
    throw std::invalid_argument("crop_centered: band exceeds spectrum shape");
  Field out(2 * mt1, 2 * mt2);
  const long long ln1 = static_cast<long long>(n1), ln2 = static_cast<long long>(n2);
  for (std::size_t a = 0; a < 2 * mt1; ++a) {
    const long long t1 = static_cast<long long>(a) - static_cast<long long>(mt1);
    const std::size_t i = static_cast<std::size_t>(((t1 % ln1) + ln1) % ln1);
    for (std::size_t b = 0; b < 2 * mt2; ++b) {
      const long long t2 = static_cast<long long>(b) - static_cast<long long>(mt2);
      const std::size_t j = static_cast<std::size_t>(((t2 % ln2) + ln2) % ln2);
      out(a, b) = spectrum(i, j);
    }
  }
  return out;
}

ComplexField crop_centered(const ComplexField& spectrum, std::size_t mt1, std::size_t mt2) {
  return crop_centered_impl(spectrum, mt1, mt2);
}

RealField crop_centered(const RealField& spectrum, std::size_t mt1, std::size_t mt2) {
  return crop_centered_impl(spectrum, mt1, mt2);
}

namespace detail {

void fft_columns_inplace(cdouble* data, int p, int r) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    resolve_threads_locked();
    auto it = cache.find({p, r});
    if (it != cache.end()) {
      plan = it->second;
    } else {
      aligned_vector<cdouble> buf(static_cast<std::size_t>(p) * r);
      auto* pb = reinterpret_cast<fftw_complex*>(buf.data());
      // column-major p x r block: howmany=r, contiguous columns
      plan = fftw_plan_many_dft(1, &p, r, pb, nullptr, 1, p, pb, nullptr, 1, p,
                                FFTW_FORWARD, FFTW_ESTIMATE);
      if (!plan) throw std::runtime_error("fftw planning failed (columns)");
      cache.emplace(std::make_pair(p, r), plan);
    }
  }
  auto* pd = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, pd, pd);
}

SliceBatchFft2::SliceBatchFft2(int p1, int p2, int batch) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  resolve_threads_locked();
  aligned_vector<cdouble> buf(static_cast<std::size_t>(p1) * p2 * batch);
  auto* pb = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_iodim64 dims[2];
  dims[0].n = p1;
  dims[0].is = dims[0].os = static_cast<std::ptrdiff_t>(p2) * batch;
  dims[1].n = p2;
  dims[1].is = dims[1].os = batch;
  fftw_iodim64 how[1];
  how[0].n = batch;
  how[0].is = how[0].os = 1;
  fwd_ = fftw_plan_guru64_dft(2, dims, 1, how, pb, pb, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_guru64_dft(2, dims, 1, how, pb, pb, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw std::runtime_error("fftw planning failed (slice batch)");
}

SliceBatchFft2::~SliceBatchFft2() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void SliceBatchFft2::forward(cdouble* base) const {
  auto* pb = reinterpret_cast<fftw_complex*>(base);
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), pb, pb);
}

void SliceBatchFft2::backward(cdouble* base) const {
  auto* pb = reinterpret_cast<fftw_complex*>(base);
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), pb, pb);
}

}  // namespace detail
}  // namespace ptycho
