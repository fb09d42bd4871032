#pragma once

#include <filesystem>
#include <memory>

#include "ptycho/field.hpp"
#include "ptycho/minimax.hpp"

namespace ptycho {
namespace detail {
class SliceBatchFft2;
}

namespace pft {

// Partial Fourier transform: the centered band of low-frequency DFT outputs
// computed in O(n + band * log) time via a Cooley-Tukey split n = p*q plus a
// polynomial approximation of the short-twiddle factors.
//
// Offline phase = plan construction (B and W below); online phase = apply.
//   B[l, j] = w_j * (1 - 2l/q)^j                  l in [q], j in [r]
//   W[t, j] = (t/p)^j * e^{-i*pi*t/p}             t in [-mt, mt] (row t + mt)
// where w are the scope-table coefficients for (eps, r) and
// r = min_degree(eps, mt/p).
struct PftPlan1D {
  std::size_t n = 0, p = 0, q = 0, mt = 0;
  int r = 0;
  double eps = 0.0;
  ComplexField B;  // q x r
  ComplexField W;  // (2mt+1) x r
};

PftPlan1D pft_plan_1d(std::size_t n, std::size_t mt, std::size_t p, double eps,
                      const minimax::ScopeTable& table);

// Band ztilde[t], t in [-mt, mt], stored DC-centered: output index i <-> t = i - mt.
// Deviation from the exact DFT is bounded by achieved_error * ||z||_1 per entry.
ComplexField pft_apply_1d(const PftPlan1D& plan, const ComplexField& z);

// Separable 2D variant. The public output drops the +mt edge in each axis so
// the band has even shape 2mt1 x 2mt2 with the DC bin at (mt1, mt2), matching
// crop_centered. W factors exactly per axis, so only the two axis tables are
// stored; the full 4-index W entry is their product.
struct PftPlan2D {
  PftPlan1D axis1, axis2;
  std::shared_ptr<const detail::SliceBatchFft2> slice_fft;  // cached batched FFT
};

PftPlan2D pft_plan_2d(std::size_t n1, std::size_t n2, std::size_t mt1, std::size_t mt2,
                      std::size_t p1, std::size_t p2, double eps,
                      const minimax::ScopeTable& table);

ComplexField pft_apply_2d(const PftPlan2D& plan, const ComplexField& z);

// Exact adjoint of pft_apply_2d (conjugate-transposed W-sum, backward batch
// FFT, conjugate-transposed B products), same asymptotic cost as the forward.
ComplexField pft_adjoint_2d(const PftPlan2D& plan, const ComplexField& band);

// Structured-text header plus raw complex blocks (B, W per axis).
void save_plan(const std::filesystem::path& path, const PftPlan1D& plan);
void save_plan(const std::filesystem::path& path, const PftPlan2D& plan);
PftPlan1D load_plan_1d(const std::filesystem::path& path);
PftPlan2D load_plan_2d(const std::filesystem::path& path);

}  // namespace pft
}  // namespace ptycho
