#pragma once

#include "ptycho/field.hpp"

namespace ptycho {

// Deterministic closed-form test object: smooth texture plus Gaussian bumps
// and hard edges, evaluated on normalized coordinates so any resolution
// produces the same scene. Magnitude lands in [0, 1]; phase in [0, pi/2] with
// spatial mean near pi/4, which keeps the free global phase of a random
// U[0, pi/2] initialization close to zero.
RealField phantom_magnitude(std::size_t rows, std::size_t cols);
RealField phantom_phase(std::size_t rows, std::size_t cols);
ComplexField phantom_object(std::size_t rows, std::size_t cols);

}  // namespace ptycho
