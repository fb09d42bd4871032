#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace ptycho {

using cdouble = std::complex<double>;

// All field buffers share one 64-byte alignment class so cached FFT plans can be
// re-executed on any of them.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t(alignment)));
  }
  void deallocate(T* p, std::size_t) noexcept {
    ::operator delete(p, std::align_val_t(alignment));
  }
  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

template <class T>
using aligned_vector = std::vector<T, AlignedAllocator<T>>;

// Dense row-major complex 2D array; 1D signals are stored as n x 1 columns.
class ComplexField {
 public:
  ComplexField() = default;
  ComplexField(std::size_t rows, std::size_t cols, cdouble fill = cdouble{0.0, 0.0});
  static ComplexField column(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool is_vector() const { return cols_ == 1; }
  bool same_shape(const ComplexField& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  cdouble& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cdouble& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  cdouble& operator[](std::size_t i) { return data_[i]; }
  const cdouble& operator[](std::size_t i) const { return data_[i]; }

  cdouble* data() { return data_.data(); }
  const cdouble* data() const { return data_.data(); }

  double norm_fro() const;   // sqrt(sum |z_i|^2)
  double norm_l1() const;    // sum |z_i|
  double max_abs() const;
  bool all_finite() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  aligned_vector<cdouble> data_;
};

class RealField {
 public:
  RealField() = default;
  RealField(std::size_t rows, std::size_t cols, double fill = 0.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const RealField& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator[](std::size_t i) { return data_[i]; }
  const double& operator[](std::size_t i) const { return data_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double norm_fro() const;
  double max_abs() const;
  double min_value() const;
  double max_value() const;
  bool all_finite() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  aligned_vector<double> data_;
};

// Pointwise helpers shared by the simulator and the solvers.
RealField magnitude(const ComplexField& z);
RealField phase(const ComplexField& z);  // principal value, arg(0) = 0
ComplexField from_polar(const RealField& mag, const RealField& ph);

}  // namespace ptycho
