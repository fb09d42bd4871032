#pragma once

// Batched FFTW plans used by the partial-transform pipeline. Internal to core.

#include <cstddef>

#include "ptycho/field.hpp"

namespace ptycho::detail {

// r consecutive length-p columns stored contiguously (column-major p x r block):
// one forward FFT per column, in place.
void fft_columns_inplace(cdouble* data, int p, int r);

// In-place batched 2D transforms over a slice-major tensor C[k1][k2][j1][j2]
// (k-dims are the transform axes, the trailing j-block of size `batch` is the
// innermost stride-1 index). Used by the 2D partial transform and its adjoint.
class SliceBatchFft2 {
 public:
  SliceBatchFft2(int p1, int p2, int batch);
  ~SliceBatchFft2();
  SliceBatchFft2(const SliceBatchFft2&) = delete;
  SliceBatchFft2& operator=(const SliceBatchFft2&) = delete;

  void forward(cdouble* base) const;   // unnormalized, sign -1
  void backward(cdouble* base) const;  // unnormalized, sign +1 (adjoint of forward)

 private:
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

}  // namespace ptycho::detail
