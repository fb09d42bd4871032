#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ptycho/field.hpp"

namespace ptycho {

// Probe positions over a (possibly padded) frame. Offsets are window top-left
// corners in frame coordinates, listed in visit order. The object occupies
// [margin, margin + object) in each axis; with no padding, frame == object.
// All positions share one binary illumination mask of window shape.
struct ScanPattern {
  std::size_t object_rows = 0, object_cols = 0;
  std::size_t frame_rows = 0, frame_cols = 0;
  std::size_t margin_rows = 0, margin_cols = 0;
  std::size_t window_rows = 0, window_cols = 0;
  std::vector<std::pair<std::size_t, std::size_t>> offsets;
  RealField mask;  // window-shaped, entries in {0, 1}

  std::size_t count() const { return offsets.size(); }
};

// Full-square windows on an unpadded n x n object, stepped by `shift` in both
// axes; requires (n - window) % shift == 0 so windows tile the object exactly.
// Visit order is a column-serpentine walk: down the first column of
// positions, up the next, moving rightward.
ScanPattern grid_scan(std::size_t n, std::size_t window, std::size_t shift);

// Circular illumination of the given radius on a 4 x 4 raster with the given
// shift. The window is the smallest multiple of 64 holding the disk, the
// frame is the raster extent 3 * shift + window, and the object sits centered
// (frame - n must be even). Visit order is a row-serpentine walk. Throws with
// a coverage report when the window rectangles fail to cover the frame.
ScanPattern circular_scan(std::size_t n, double radius, std::size_t shift);

// Window-region access in frame coordinates (no masking applied).
ComplexField window_slice(const ComplexField& frame, const ScanPattern& sp, std::size_t j);
void set_window(ComplexField& frame, const ScanPattern& sp, std::size_t j,
                const ComplexField& patch);

// The unpadded object region of a frame-shaped field.
ComplexField extract_object(const ComplexField& frame, const ScanPattern& sp);
RealField extract_object(const RealField& frame, const ScanPattern& sp);

}  // namespace ptycho
