#include "ptycho/field.hpp"

#include <cmath>
#include <stdexcept>

namespace ptycho {

ComplexField::ComplexField(std::size_t rows, std::size_t cols, cdouble fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("ComplexField: empty shape");
}

ComplexField ComplexField::column(std::size_t n) { return ComplexField(n, 1); }

double ComplexField::norm_fro() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexField::norm_l1() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::abs(v);
  return s;
}

double ComplexField::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool ComplexField::all_finite() const {
  for (const auto& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

RealField::RealField(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("RealField: empty shape");
}

double RealField::norm_fro() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double RealField::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double RealField::min_value() const {
  double m = data_.empty() ? 0.0 : data_[0];
  for (double v : data_) m = std::min(m, v);
  return m;
}

double RealField::max_value() const {
  double m = data_.empty() ? 0.0 : data_[0];
  for (double v : data_) m = std::max(m, v);
  return m;
}

bool RealField::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

RealField magnitude(const ComplexField& z) {
  RealField out(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::abs(z[i]);
  return out;
}

RealField phase(const ComplexField& z) {
  RealField out(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const cdouble v = z[i];
    out[i] = (v == cdouble{0.0, 0.0}) ? 0.0 : std::arg(v);
  }
  return out;
}

ComplexField from_polar(const RealField& mag, const RealField& ph) {
  if (!mag.same_shape(ph)) throw std::invalid_argument("from_polar: shape mismatch");
  ComplexField out(mag.rows(), mag.cols());
  for (std::size_t i = 0; i < mag.size(); ++i) out[i] = std::polar(mag[i], ph[i]);
  return out;
}

}  // namespace ptycho
