#include "ptycho/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptycho {
namespace {

constexpr double kPi = 3.14159265358979323846;

double gauss2(double u, double v, double cu, double cv, double s2) {
  const double du = u - cu, dv = v - cv;
  return std::exp(-(du * du + dv * dv) / s2);
}

}  // namespace

RealField phantom_magnitude(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("phantom: empty shape");
  RealField img(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const double u = (i + 0.5) / static_cast<double>(rows);
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = (j + 0.5) / static_cast<double>(cols);
      double x = 0.5 + 0.28 * std::sin(2 * kPi * 3 * u) * std::sin(2 * kPi * 2 * v);
      x += 0.30 * gauss2(u, v, 0.30, 0.40, 0.010);
      x -= 0.25 * gauss2(u, v, 0.70, 0.65, 0.020);
      x += 0.12 * gauss2(u, v, 0.75, 0.20, 0.004);
      if (u > 0.55 && v < 0.35) x += 0.15;
      if (std::abs(u - 0.2) + std::abs(v - 0.75) < 0.08) x -= 0.2;
      img(i, j) = std::clamp(x, 0.0, 1.0);
    }
  }
  return img;
}

RealField phantom_phase(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("phantom: empty shape");
  RealField img(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const double u = (i + 0.5) / static_cast<double>(rows);
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = (j + 0.5) / static_cast<double>(cols);
      double x = 0.5 + 0.24 * std::sin(2 * kPi * (2 * u + v)) +
                 0.16 * std::cos(2 * kPi * 3 * v) * std::sin(2 * kPi * u);
      const double du = u - 0.45, dv = v - 0.55;
      if (du * du + dv * dv < 0.04) x += 0.22;
      if (u < 0.18 && v > 0.6) x -= 0.22;
      img(i, j) = std::clamp(x, 0.0, 1.0) * (kPi / 2);
    }
  }
  return img;
}

ComplexField phantom_object(std::size_t rows, std::size_t cols) {
  return from_polar(phantom_magnitude(rows, cols), phantom_phase(rows, cols));
}

}  // namespace ptycho
