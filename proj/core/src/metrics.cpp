#include "ptycho/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ptycho {
namespace {

void require_same_shape(std::size_t r1, std::size_t c1, std::size_t r2, std::size_t c2,
                        const char* what) {
  if (r1 != r2 || c1 != c2) throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

constexpr int kSsimWin = 11;

std::vector<double> ssim_kernel() {
  std::vector<double> g(kSsimWin);
  const double sigma = 1.5;
  double sum = 0.0;
  for (int i = 0; i < kSsimWin; ++i) {
    const double d = i - (kSsimWin - 1) / 2.0;
    g[i] = std::exp(-d * d / (2 * sigma * sigma));
    sum += g[i];
  }
  for (auto& v : g) v /= sum;
  return g;
}

// Valid-region separable correlation with the (symmetric) kernel.
RealField filter_valid(const RealField& x, const std::vector<double>& g) {
  const std::size_t rows = x.rows(), cols = x.cols();
  const std::size_t k = g.size();
  RealField h(rows, cols - k + 1);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j + k <= cols; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) acc += g[t] * x(i, j + t);
      h(i, j) = acc;
    }
  RealField out(rows - k + 1, cols - k + 1);
  for (std::size_t i = 0; i + k <= rows; ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) acc += g[t] * h(i + t, j);
      out(i, j) = acc;
    }
  return out;
}

RealField hadamard(const RealField& a, const RealField& b) {
  RealField out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

double relative_error(const ComplexField& x, const ComplexField& ref) {
  require_same_shape(x.rows(), x.cols(), ref.rows(), ref.cols(), "relative_error");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.rows() * x.cols(); ++i) {
    num += std::norm(x[i] - ref[i]);
    den += std::norm(ref[i]);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

double relative_error(const RealField& x, const RealField& ref) {
  require_same_shape(x.rows(), x.cols(), ref.rows(), ref.cols(), "relative_error");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.rows() * x.cols(); ++i) {
    const double d = x[i] - ref[i];
    num += d * d;
    den += ref[i] * ref[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

double relative_error_aligned(const ComplexField& x, const ComplexField& ref) {
  require_same_shape(x.rows(), x.cols(), ref.rows(), ref.cols(), "relative_error_aligned");
  cdouble s(0.0, 0.0);
  for (std::size_t i = 0; i < x.rows() * x.cols(); ++i) s += x[i] * std::conj(ref[i]);
  const double mag = std::abs(s);
  const cdouble c = mag > 0.0 ? std::conj(s) / mag : cdouble(1.0, 0.0);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.rows() * x.cols(); ++i) {
    num += std::norm(c * x[i] - ref[i]);
    den += std::norm(ref[i]);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

double psnr(const RealField& x, const RealField& ref, double range) {
  require_same_shape(x.rows(), x.cols(), ref.rows(), ref.cols(), "psnr");
  if (!(range > 0.0)) throw std::invalid_argument("psnr: need range > 0");
  double mse = 0.0;
  const std::size_t n = x.rows() * x.cols();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - ref[i];
    mse += d * d;
  }
  mse /= static_cast<double>(n);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(range * range / mse);
}

double ssim(const RealField& x, const RealField& ref, double range) {
  require_same_shape(x.rows(), x.cols(), ref.rows(), ref.cols(), "ssim");
  if (!(range > 0.0)) throw std::invalid_argument("ssim: need range > 0");
  if (x.rows() < kSsimWin || x.cols() < kSsimWin)
    throw std::invalid_argument("ssim: images must be at least 11x11");

  const double c1 = (0.01 * range) * (0.01 * range);
  const double c2 = (0.03 * range) * (0.03 * range);
  const auto g = ssim_kernel();

  const RealField mx = filter_valid(x, g);
  const RealField my = filter_valid(ref, g);
  const RealField mxx = filter_valid(hadamard(x, x), g);
  const RealField myy = filter_valid(hadamard(ref, ref), g);
  const RealField mxy = filter_valid(hadamard(x, ref), g);

  double acc = 0.0;
  const std::size_t n = mx.rows() * mx.cols();
  for (std::size_t i = 0; i < n; ++i) {
    const double vx = mxx[i] - mx[i] * mx[i];
    const double vy = myy[i] - my[i] * my[i];
    const double cxy = mxy[i] - mx[i] * my[i];
    acc += ((2 * mx[i] * my[i] + c1) * (2 * cxy + c2)) /
           ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return acc / static_cast<double>(n);
}

double dynamic_range(const RealField& ref) {
  const double r = ref.max_value() - ref.min_value();
  return r > 0.0 ? r : 1.0;
}

Registration register_template(const RealField& image, const RealField& tmpl) {
  const std::size_t ir = image.rows(), ic = image.cols();
  const std::size_t tr = tmpl.rows(), tc = tmpl.cols();
  if (tr > ir || tc > ic)
    throw std::invalid_argument("register_template: template larger than image");

  const double n = static_cast<double>(tr * tc);
  double tsum = 0.0;
  for (std::size_t i = 0; i < tr * tc; ++i) tsum += tmpl[i];
  const double tmean = tsum / n;
  double tvar = 0.0;
  for (std::size_t i = 0; i < tr * tc; ++i) {
    const double d = tmpl[i] - tmean;
    tvar += d * d;
  }
  if (tvar == 0.0) throw std::invalid_argument("register_template: constant template");
  const double tnorm = std::sqrt(tvar);

  Registration best;
  best.score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + tr <= ir; ++i) {
    for (std::size_t j = 0; j + tc <= ic; ++j) {
      double psum = 0.0, psq = 0.0, pdot = 0.0;
      for (std::size_t a = 0; a < tr; ++a)
        for (std::size_t b = 0; b < tc; ++b) {
          const double v = image(i + a, j + b);
          psum += v;
          psq += v * v;
          pdot += v * tmpl(a, b);
        }
      const double pvar = psq - psum * psum / n;
      double score = 0.0;
      if (pvar > 0.0) score = (pdot - psum * tmean) / (std::sqrt(pvar) * tnorm);
      if (score > best.score) {
        best.row = i;
        best.col = j;
        best.score = score;
      }
    }
  }
  return best;
}

}  // namespace ptycho
