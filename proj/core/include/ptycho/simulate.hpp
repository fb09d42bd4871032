#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ptycho/field.hpp"
#include "ptycho/scan.hpp"

namespace ptycho {

// Recorded magnitudes per probe position, window-shaped and unshifted (DC at
// [0,0]). d_crop holds the centered low-frequency band of each d when
// build_cropped has run, matching the partial-transform output layout.
struct MeasurementSet {
  std::size_t window_rows = 0, window_cols = 0;
  std::vector<RealField> d;
  std::vector<RealField> d_crop;
  std::size_t mt1 = 0, mt2 = 0;  // 0 until build_cropped
  double noise_scale = 0.0;      // 0 = noiseless
  std::uint64_t noise_seed = 0;

  std::size_t count() const { return d.size(); }
};

// Smooth masked illumination: Gaussian amplitude over a 0.3 floor (sigma =
// half the window half-size) with a mild quadratic phase, times the mask.
ComplexField default_probe(const ScanPattern& sp);

// d_j = |FFT2(probe .* frame restricted to window j)| for every position.
MeasurementSet simulate(const ComplexField& truth_frame, const ComplexField& probe,
                        const ScanPattern& sp);

// Shot noise, opt-in: d <- sqrt(Poisson(scale * d^2) / scale), one seeded
// stream over all positions in order.
void add_poisson_noise(MeasurementSet& ms, double scale, std::uint64_t seed);

void build_cropped(MeasurementSet& ms, std::size_t mt1, std::size_t mt2);

// Directory layout: meta.txt, d_NNNN.ptyr (and dcrop_NNNN.ptyr when present),
// manifest.txt with an FNV-1a hash per file. load verifies the manifest.
void save_measurements(const std::filesystem::path& dir, const MeasurementSet& ms);
MeasurementSet load_measurements(const std::filesystem::path& dir);

}  // namespace ptycho
