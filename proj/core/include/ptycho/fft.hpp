#pragma once

#include "ptycho/field.hpp"

namespace ptycho {

// Reference O(n^2) transforms, kept deliberately independent of the fast path;
// every fast transform is tested against these.
ComplexField naive_dft(const ComplexField& z);
ComplexField naive_idft(const ComplexField& z);
ComplexField naive_dft2(const ComplexField& z);
ComplexField naive_idft2(const ComplexField& z);

// Fast transforms. Forward is unnormalized, inverse carries the 1/n factor,
// so fast_ifft(fast_fft(z)) == z.
ComplexField fast_fft(const ComplexField& z);
ComplexField fast_ifft(const ComplexField& z);
ComplexField fast_fft2(const ComplexField& z);
ComplexField fast_ifft2(const ComplexField& z);

// Selects/configures the transform thread count (also reads PTYCHO_THREADS).
// Returns the count actually in effect; serial builds always return 1.
int set_fft_threads(int n);
int fft_threads();

// Centered low-frequency block of an unshifted spectrum: output index (a, b)
// holds frequency t = (a - mt1, b - mt2), t_nu in [-mt_nu, mt_nu), so the DC
// bin lands at (mt1, mt2). Requires 2*mt_nu <= shape.
ComplexField crop_centered(const ComplexField& spectrum, std::size_t mt1, std::size_t mt2);
RealField crop_centered(const RealField& spectrum, std::size_t mt1, std::size_t mt2);

}  // namespace ptycho
