#pragma once

#include <cstddef>

#include "ptycho/field.hpp"

namespace ptycho {

// ||x - ref||_F / ||ref||_F. No phase alignment; the aligned variant divides
// out the best global phase first and exists as a diagnostic only.
double relative_error(const ComplexField& x, const ComplexField& ref);
double relative_error(const RealField& x, const RealField& ref);
double relative_error_aligned(const ComplexField& x, const ComplexField& ref);

// 10 log10(range^2 / MSE); +inf on an exact match (capped only when traced).
double psnr(const RealField& x, const RealField& ref, double range);

// Mean SSIM over valid (fully interior) windows: 11x11 Gaussian weights with
// sigma 1.5, K1 = 0.01, K2 = 0.03. Images must be at least 11x11.
double ssim(const RealField& x, const RealField& ref, double range);

// ref max - min, the default dynamic range for psnr/ssim; 1 when flat.
double dynamic_range(const RealField& ref);

struct Registration {
  std::size_t row = 0, col = 0;  // top-left corner of the best match
  double score = 0.0;            // normalized cross-correlation in [-1, 1]
};

// Argmax of normalized cross-correlation over all full-overlap placements.
// Ties resolve to the lexicographically smallest (row, col). Zero-variance
// image patches score 0; a constant template is rejected.
Registration register_template(const RealField& image, const RealField& tmpl);

}  // namespace ptycho
