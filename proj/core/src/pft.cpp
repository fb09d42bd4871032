#include "ptycho/pft.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fft_internal.hpp"
#include "ptycho/raw_io.hpp"

namespace ptycho::pft {
namespace {

constexpr double kPi = 3.14159265358979323846;

using RowMat = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ColMat = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
using MapRow = Eigen::Map<RowMat>;
using MapConstRow = Eigen::Map<const RowMat>;
using StridedRow = Eigen::Map<RowMat, Eigen::Unaligned, Eigen::OuterStride<>>;

std::size_t mod_nonneg(std::ptrdiff_t t, std::size_t p) {
  std::ptrdiff_t m = t % static_cast<std::ptrdiff_t>(p);
  if (m < 0) m += static_cast<std::ptrdiff_t>(p);
  return static_cast<std::size_t>(m);
}

}  // namespace

PftPlan1D pft_plan_1d(std::size_t n, std::size_t mt, std::size_t p, double eps,
                      const minimax::ScopeTable& table) {
  if (p < 2 || p > n || n % p != 0)
    throw std::invalid_argument("pft_plan_1d: p must divide n, 2 <= p <= n");
  const std::size_t q = n / p;
  if (q < 2) throw std::invalid_argument("pft_plan_1d: need q = n/p >= 2");
  if (mt < 1 || 2 * mt > n)
    throw std::invalid_argument("pft_plan_1d: need 1 <= mt and 2*mt <= n");

  PftPlan1D plan;
  plan.n = n;
  plan.p = p;
  plan.q = q;
  plan.mt = mt;
  plan.eps = eps;
  plan.r = table.min_degree(eps, static_cast<double>(mt) / static_cast<double>(p));
  const auto& rec = table.record(eps, plan.r);
  const std::size_t r = static_cast<std::size_t>(plan.r);

  // B[l, j] = w_j * x^j at the q twiddle nodes x = 1 - 2l/q.
  plan.B = ComplexField(q, r);
  for (std::size_t l = 0; l < q; ++l) {
    const double x = 1.0 - 2.0 * static_cast<double>(l) / static_cast<double>(q);
    double xpow = 1.0;
    for (std::size_t j = 0; j < r; ++j) {
      plan.B(l, j) = rec.coeff[j] * xpow;
      xpow *= x;
    }
  }

  // W[i, j] for t = i - mt: (t/p)^j * e^{-i*pi*t/p}.
  plan.W = ComplexField(2 * mt + 1, r);
  for (std::size_t i = 0; i < 2 * mt + 1; ++i) {
    const double t = static_cast<double>(i) - static_cast<double>(mt);
    const double base = t / static_cast<double>(p);
    const cdouble tw = std::polar(1.0, -kPi * base);
    double bpow = 1.0;
    for (std::size_t j = 0; j < r; ++j) {
      plan.W(i, j) = tw * bpow;
      bpow *= base;
    }
  }
  return plan;
}

ComplexField pft_apply_1d(const PftPlan1D& plan, const ComplexField& z) {
  if (!z.is_vector() || z.rows() != plan.n)
    throw std::invalid_argument("pft_apply_1d: z must be an n-vector matching the plan");
  const std::size_t p = plan.p, q = plan.q, mt = plan.mt;
  const std::size_t r = static_cast<std::size_t>(plan.r);

  // C = reshape(z, p x q) * B, columns contiguous so they FFT in place.
  MapConstRow Z(z.data(), static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
  MapConstRow B(plan.B.data(), static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(r));
  ColMat C(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(r));
  C.noalias() = Z * B;
  detail::fft_columns_inplace(C.data(), static_cast<int>(p), static_cast<int>(r));

  ComplexField out(2 * mt + 1, 1);
  for (std::size_t i = 0; i < 2 * mt + 1; ++i) {
    const std::ptrdiff_t t = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(mt);
    const auto u = static_cast<Eigen::Index>(mod_nonneg(t, p));
    cdouble acc(0.0, 0.0);
    for (std::size_t j = 0; j < r; ++j)
      acc += C(u, static_cast<Eigen::Index>(j)) * plan.W(i, j);
    out[i] = acc;
  }
  return out;
}

PftPlan2D pft_plan_2d(std::size_t n1, std::size_t n2, std::size_t mt1, std::size_t mt2,
                      std::size_t p1, std::size_t p2, double eps,
                      const minimax::ScopeTable& table) {
  PftPlan2D plan;
  plan.axis1 = pft_plan_1d(n1, mt1, p1, eps, table);
  plan.axis2 = pft_plan_1d(n2, mt2, p2, eps, table);
  plan.slice_fft = std::make_shared<detail::SliceBatchFft2>(
      static_cast<int>(p1), static_cast<int>(p2), plan.axis1.r * plan.axis2.r);
  return plan;
}

// Forward pipeline over the slice-major tensor C[k1][k2][j1][j2]:
//   A: per k1, T = B1^T * Z_block        (r1 x n2)
//   B: per (k1, j1), reshape T row to p2 x q2, multiply by B2, scatter
//   C: batched 2D FFT over (k1, k2)
//   D: band assembly out[t1, t2] = W1[t1, :] * Chat[t1 mod p1, t2 mod p2] * W2[t2, :]^T
ComplexField pft_apply_2d(const PftPlan2D& plan, const ComplexField& z) {
  const auto& a1 = plan.axis1;
  const auto& a2 = plan.axis2;
  if (z.rows() != a1.n || z.cols() != a2.n)
    throw std::invalid_argument("pft_apply_2d: z shape must match the plan");
  const std::size_t p1 = a1.p, q1 = a1.q, p2 = a2.p, q2 = a2.q, n2 = a2.n;
  const auto r1 = static_cast<std::size_t>(a1.r);
  const auto r2 = static_cast<std::size_t>(a2.r);

  aligned_vector<cdouble> C(p1 * p2 * r1 * r2);
  MapConstRow B1(a1.B.data(), static_cast<Eigen::Index>(q1), static_cast<Eigen::Index>(r1));
  MapConstRow B2(a2.B.data(), static_cast<Eigen::Index>(q2), static_cast<Eigen::Index>(r2));
  RowMat T(static_cast<Eigen::Index>(r1), static_cast<Eigen::Index>(n2));

  for (std::size_t k1 = 0; k1 < p1; ++k1) {
    MapConstRow Zblk(z.data() + k1 * q1 * n2, static_cast<Eigen::Index>(q1),
                     static_cast<Eigen::Index>(n2));
    T.noalias() = B1.transpose() * Zblk;
    for (std::size_t j1 = 0; j1 < r1; ++j1) {
      MapRow M(T.data() + j1 * n2, static_cast<Eigen::Index>(p2),
               static_cast<Eigen::Index>(q2));
      StridedRow Cslice(C.data() + (k1 * p2 * r1 + j1) * r2, static_cast<Eigen::Index>(p2),
                        static_cast<Eigen::Index>(r2),
                        Eigen::OuterStride<>(static_cast<Eigen::Index>(r1 * r2)));
      Cslice.noalias() = M * B2;
    }
  }

  plan.slice_fft->forward(C.data());

  const std::size_t mt1 = a1.mt, mt2 = a2.mt;
  ComplexField out(2 * mt1, 2 * mt2);
  std::vector<std::size_t> u2s(2 * mt2);
  for (std::size_t b = 0; b < 2 * mt2; ++b)
    u2s[b] = mod_nonneg(static_cast<std::ptrdiff_t>(b) - static_cast<std::ptrdiff_t>(mt2), p2);
  for (std::size_t a = 0; a < 2 * mt1; ++a) {
    const std::size_t u1 =
        mod_nonneg(static_cast<std::ptrdiff_t>(a) - static_cast<std::ptrdiff_t>(mt1), p1);
    const cdouble* w1 = &a1.W(a, 0);
    for (std::size_t b = 0; b < 2 * mt2; ++b) {
      const cdouble* w2 = &a2.W(b, 0);
      const cdouble* slice = C.data() + (u1 * p2 + u2s[b]) * r1 * r2;
      cdouble acc(0.0, 0.0);
      for (std::size_t j1 = 0; j1 < r1; ++j1) {
        cdouble inner(0.0, 0.0);
        const cdouble* row = slice + j1 * r2;
        for (std::size_t j2 = 0; j2 < r2; ++j2) inner += row[j2] * w2[j2];
        acc += w1[j1] * inner;
      }
      out(a, b) = acc;
    }
  }
  return out;
}

ComplexField pft_adjoint_2d(const PftPlan2D& plan, const ComplexField& band) {
  const auto& a1 = plan.axis1;
  const auto& a2 = plan.axis2;
  const std::size_t mt1 = a1.mt, mt2 = a2.mt;
  if (band.rows() != 2 * mt1 || band.cols() != 2 * mt2)
    throw std::invalid_argument("pft_adjoint_2d: band shape must match the plan");
  const std::size_t p1 = a1.p, q1 = a1.q, p2 = a2.p, q2 = a2.q, n2 = a2.n;
  const auto r1 = static_cast<std::size_t>(a1.r);
  const auto r2 = static_cast<std::size_t>(a2.r);

  // Conjugate-transposed band assembly: scatter-accumulate into the tensor.
  aligned_vector<cdouble> C(p1 * p2 * r1 * r2, cdouble(0.0, 0.0));
  std::vector<std::size_t> u2s(2 * mt2);
  for (std::size_t b = 0; b < 2 * mt2; ++b)
    u2s[b] = mod_nonneg(static_cast<std::ptrdiff_t>(b) - static_cast<std::ptrdiff_t>(mt2), p2);
  for (std::size_t a = 0; a < 2 * mt1; ++a) {
    const std::size_t u1 =
        mod_nonneg(static_cast<std::ptrdiff_t>(a) - static_cast<std::ptrdiff_t>(mt1), p1);
    const cdouble* w1 = &a1.W(a, 0);
    for (std::size_t b = 0; b < 2 * mt2; ++b) {
      const cdouble* w2 = &a2.W(b, 0);
      cdouble* slice = C.data() + (u1 * p2 + u2s[b]) * r1 * r2;
      const cdouble y = band(a, b);
      for (std::size_t j1 = 0; j1 < r1; ++j1) {
        const cdouble c1 = std::conj(w1[j1]) * y;
        cdouble* row = slice + j1 * r2;
        for (std::size_t j2 = 0; j2 < r2; ++j2) row[j2] += c1 * std::conj(w2[j2]);
      }
    }
  }

  plan.slice_fft->backward(C.data());

  ComplexField z(a1.n, n2);
  MapConstRow B1(a1.B.data(), static_cast<Eigen::Index>(q1), static_cast<Eigen::Index>(r1));
  MapConstRow B2(a2.B.data(), static_cast<Eigen::Index>(q2), static_cast<Eigen::Index>(r2));
  RowMat T(static_cast<Eigen::Index>(r1), static_cast<Eigen::Index>(n2));

  for (std::size_t k1 = 0; k1 < p1; ++k1) {
    for (std::size_t j1 = 0; j1 < r1; ++j1) {
      StridedRow Cslice(C.data() + (k1 * p2 * r1 + j1) * r2, static_cast<Eigen::Index>(p2),
                        static_cast<Eigen::Index>(r2),
                        Eigen::OuterStride<>(static_cast<Eigen::Index>(r1 * r2)));
      MapRow M(T.data() + j1 * n2, static_cast<Eigen::Index>(p2),
               static_cast<Eigen::Index>(q2));
      M.noalias() = Cslice * B2.adjoint();
    }
    MapRow Zblk(z.data() + k1 * q1 * n2, static_cast<Eigen::Index>(q1),
                static_cast<Eigen::Index>(n2));
    Zblk.noalias() = B1.conjugate() * T;
  }
  return z;
}

namespace {

void write_axis_header(std::ostream& os, const PftPlan1D& a, int idx) {
  const char* suffix[] = {"", "1", "2"};
  const char* s = suffix[idx];
  os << "n" << s << " " << a.n << " p" << s << " " << a.p << " q" << s << " " << a.q
     << " mt" << s << " " << a.mt << " r" << s << " " << a.r << "\n";
}

struct AxisHeader {
  std::size_t n = 0, p = 0, q = 0, mt = 0;
  int r = 0;
};

AxisHeader parse_axis_line(const std::string& line, const std::filesystem::path& path) {
  std::istringstream iss(line);
  AxisHeader h;
  std::string key;
  if (!(iss >> key >> h.n >> key >> h.p >> key >> h.q >> key >> h.mt >> key >> h.r))
    throw std::runtime_error("malformed plan axis line in " + path.string());
  return h;
}

void check_axis(const PftPlan1D& a, const AxisHeader& h, const std::filesystem::path& path) {
  if (a.n != h.n || a.p != h.p || a.q != h.q || a.mt != h.mt || a.r != h.r ||
      h.p * h.q != h.n || a.B.rows() != h.q || a.B.cols() != static_cast<std::size_t>(h.r) ||
      a.W.rows() != 2 * h.mt + 1 || a.W.cols() != static_cast<std::size_t>(h.r))
    throw std::runtime_error("inconsistent plan blocks in " + path.string());
}

std::string fmt_eps(double eps) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", eps);
  return buf;
}

}  // namespace

void save_plan(const std::filesystem::path& path, const PftPlan1D& plan) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << "pft-plan-1d v1\n";
  write_axis_header(os, plan, 0);
  os << "eps " << fmt_eps(plan.eps) << "\n---\n";
  write_complex_block(os, plan.B);
  write_complex_block(os, plan.W);
  if (!os) throw std::runtime_error("write failure on " + path.string());
}

void save_plan(const std::filesystem::path& path, const PftPlan2D& plan) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << "pft-plan-2d v1\n";
  write_axis_header(os, plan.axis1, 1);
  write_axis_header(os, plan.axis2, 2);
  os << "eps " << fmt_eps(plan.axis1.eps) << "\n---\n";
  write_complex_block(os, plan.axis1.B);
  write_complex_block(os, plan.axis2.B);
  write_complex_block(os, plan.axis1.W);
  write_complex_block(os, plan.axis2.W);
  if (!os) throw std::runtime_error("write failure on " + path.string());
}

namespace {

std::ifstream open_plan(const std::filesystem::path& path, const char* magic,
                        std::string& axis_lines_out, std::size_t axis_count,
                        double& eps_out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != magic)
    throw std::runtime_error(path.string() + " is not a " + std::string(magic) + " file");
  axis_lines_out.clear();
  for (std::size_t i = 0; i < axis_count; ++i) {
    if (!std::getline(is, line)) throw std::runtime_error("truncated plan " + path.string());
    axis_lines_out += line;
    axis_lines_out += '\n';
  }
  if (!std::getline(is, line) || line.rfind("eps ", 0) != 0)
    throw std::runtime_error("missing eps line in " + path.string());
  eps_out = std::stod(line.substr(4));
  if (!std::getline(is, line) || line != "---")
    throw std::runtime_error("missing block separator in " + path.string());
  return is;
}

}  // namespace

PftPlan1D load_plan_1d(const std::filesystem::path& path) {
  std::string axis_lines;
  double eps = 0.0;
  std::ifstream is = open_plan(path, "pft-plan-1d v1", axis_lines, 1, eps);
  AxisHeader h = parse_axis_line(axis_lines, path);

  PftPlan1D plan;
  plan.n = h.n;
  plan.p = h.p;
  plan.q = h.q;
  plan.mt = h.mt;
  plan.r = h.r;
  plan.eps = eps;
  plan.B = read_complex_block(is);
  plan.W = read_complex_block(is);
  check_axis(plan, h, path);
  return plan;
}

PftPlan2D load_plan_2d(const std::filesystem::path& path) {
  std::string axis_lines;
  double eps = 0.0;
  std::ifstream is = open_plan(path, "pft-plan-2d v1", axis_lines, 2, eps);
  const auto nl = axis_lines.find('\n');
  AxisHeader h1 = parse_axis_line(axis_lines.substr(0, nl), path);
  AxisHeader h2 = parse_axis_line(axis_lines.substr(nl + 1), path);

  PftPlan2D plan;
  plan.axis1.n = h1.n;
  plan.axis1.p = h1.p;
  plan.axis1.q = h1.q;
  plan.axis1.mt = h1.mt;
  plan.axis1.r = h1.r;
  plan.axis1.eps = eps;
  plan.axis2.n = h2.n;
  plan.axis2.p = h2.p;
  plan.axis2.q = h2.q;
  plan.axis2.mt = h2.mt;
  plan.axis2.r = h2.r;
  plan.axis2.eps = eps;
  plan.axis1.B = read_complex_block(is);
  plan.axis2.B = read_complex_block(is);
  plan.axis1.W = read_complex_block(is);
  plan.axis2.W = read_complex_block(is);
  check_axis(plan.axis1, h1, path);
  check_axis(plan.axis2, h2, path);
  plan.slice_fft = std::make_shared<detail::SliceBatchFft2>(
      static_cast<int>(h1.p), static_cast<int>(h2.p), h1.r * h2.r);
  return plan;
}

}  // namespace ptycho::pft
