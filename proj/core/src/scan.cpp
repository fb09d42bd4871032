#include "ptycho/scan.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ptycho {
namespace {

void check_window(const ScanPattern& sp, std::size_t j) {
  if (j >= sp.offsets.size()) throw std::out_of_range("scan: position index out of range");
}

template <typename Field>
Field slice_impl(const Field& frame, const ScanPattern& sp, std::size_t j) {
  check_window(sp, j);
  const auto [r0, c0] = sp.offsets[j];
  Field out(sp.window_rows, sp.window_cols);
  for (std::size_t i = 0; i < sp.window_rows; ++i)
    for (std::size_t k = 0; k < sp.window_cols; ++k) out(i, k) = frame(r0 + i, c0 + k);
  return out;
}

template <typename Field>
Field extract_impl(const Field& frame, const ScanPattern& sp) {
  if (frame.rows() != sp.frame_rows || frame.cols() != sp.frame_cols)
    throw std::invalid_argument("extract_object: frame shape mismatch");
  Field out(sp.object_rows, sp.object_cols);
  for (std::size_t i = 0; i < sp.object_rows; ++i)
    for (std::size_t k = 0; k < sp.object_cols; ++k)
      out(i, k) = frame(sp.margin_rows + i, sp.margin_cols + k);
  return out;
}

}  // namespace

ScanPattern grid_scan(std::size_t n, std::size_t window, std::size_t shift) {
  if (window == 0 || window > n) throw std::invalid_argument("grid_scan: need 0 < window <= n");
  if (shift == 0) throw std::invalid_argument("grid_scan: need shift >= 1");
  if ((n - window) % shift != 0)
    throw std::invalid_argument("grid_scan: shift must divide n - window");

  ScanPattern sp;
  sp.object_rows = sp.object_cols = n;
  sp.frame_rows = sp.frame_cols = n;
  sp.margin_rows = sp.margin_cols = 0;
  sp.window_rows = sp.window_cols = window;

  const std::size_t steps = (n - window) / shift + 1;
  for (std::size_t c = 0; c < steps; ++c) {
    for (std::size_t r = 0; r < steps; ++r) {
      const std::size_t rr = (c % 2 == 0) ? r : steps - 1 - r;
      sp.offsets.emplace_back(rr * shift, c * shift);
    }
  }

  sp.mask = RealField(window, window);
  for (std::size_t i = 0; i < window * window; ++i) sp.mask[i] = 1.0;
  return sp;
}

ScanPattern circular_scan(std::size_t n, double radius, std::size_t shift) {
  if (!(radius > 0.0)) throw std::invalid_argument("circular_scan: need radius > 0");
  if (shift == 0) throw std::invalid_argument("circular_scan: need shift >= 1");

  const auto diameter = static_cast<std::size_t>(2.0 * std::floor(radius)) + 1;
  const std::size_t window = ((diameter + 63) / 64) * 64;
  const std::size_t frame = 3 * shift + window;

  std::ostringstream report;
  report << "circular_scan coverage: n=" << n << " radius=" << radius << " shift=" << shift
         << " window=" << window << " frame=" << frame;
  if (shift > window)
    throw std::invalid_argument(report.str() + " -> gap between adjacent windows (shift > window)");
  if (frame < n)
    throw std::invalid_argument(report.str() + " -> raster extent smaller than object");
  if ((frame - n) % 2 != 0)
    throw std::invalid_argument(report.str() + " -> padding does not split evenly");

  ScanPattern sp;
  sp.object_rows = sp.object_cols = n;
  sp.frame_rows = sp.frame_cols = frame;
  sp.margin_rows = sp.margin_cols = (frame - n) / 2;
  sp.window_rows = sp.window_cols = window;

  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const std::size_t cc = (r % 2 == 0) ? c : 3 - c;
      sp.offsets.emplace_back(r * shift, cc * shift);
    }
  }

  sp.mask = RealField(window, window);
  const double center = (static_cast<double>(window) - 1.0) / 2.0;
  for (std::size_t i = 0; i < window; ++i) {
    for (std::size_t k = 0; k < window; ++k) {
      const double di = static_cast<double>(i) - center;
      const double dk = static_cast<double>(k) - center;
      sp.mask(i, k) = (di * di + dk * dk <= radius * radius) ? 1.0 : 0.0;
    }
  }
  return sp;
}

ComplexField window_slice(const ComplexField& frame, const ScanPattern& sp, std::size_t j) {
  if (frame.rows() != sp.frame_rows || frame.cols() != sp.frame_cols)
    throw std::invalid_argument("window_slice: frame shape mismatch");
  return slice_impl(frame, sp, j);
}

void set_window(ComplexField& frame, const ScanPattern& sp, std::size_t j,
                const ComplexField& patch) {
  if (frame.rows() != sp.frame_rows || frame.cols() != sp.frame_cols)
    throw std::invalid_argument("set_window: frame shape mismatch");
  if (patch.rows() != sp.window_rows || patch.cols() != sp.window_cols)
    throw std::invalid_argument("set_window: patch shape mismatch");
  check_window(sp, j);
  const auto [r0, c0] = sp.offsets[j];
  for (std::size_t i = 0; i < sp.window_rows; ++i)
    for (std::size_t k = 0; k < sp.window_cols; ++k) frame(r0 + i, c0 + k) = patch(i, k);
}

ComplexField extract_object(const ComplexField& frame, const ScanPattern& sp) {
  return extract_impl(frame, sp);
}

RealField extract_object(const RealField& frame, const ScanPattern& sp) {
  return extract_impl(frame, sp);
}

}  // namespace ptycho
