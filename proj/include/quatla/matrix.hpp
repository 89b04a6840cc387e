#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "quatla/quaternion.hpp"

namespace quatla {

using Index = std::ptrdiff_t;

// Half-open index range [begin, end).
struct Range {
  Index begin = 0;
  Index end = 0;
  constexpr Index size() const { return end > begin ? end - begin : 0; }
  constexpr bool empty() const { return end <= begin; }
};

// Dense real matrix, column-major.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(Index rows, Index cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0.0) {}

  static RealMatrix identity(Index n);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  double& operator()(Index i, Index j) { return data_[static_cast<std::size_t>(i + j * rows_)]; }
  double operator()(Index i, Index j) const {
    return data_[static_cast<std::size_t>(i + j * rows_)];
  }

  double* col(Index j) { return data_.data() + j * rows_; }
  const double* col(Index j) const { return data_.data() + j * rows_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);
RealMatrix transpose(const RealMatrix& a);
double fro_norm(const RealMatrix& a);

// Q = B0 + B1 i + B2 j + B3 k stored as four column-major real blocks.
// This is the only in-memory layout; the real counterpart is never formed by
// the solvers.
class QuatMatrix {
 public:
  QuatMatrix() = default;
  QuatMatrix(Index rows, Index cols)
      : rows_(rows), cols_(cols),
        b_{RealMatrix(rows, cols), RealMatrix(rows, cols), RealMatrix(rows, cols),
           RealMatrix(rows, cols)} {}
  QuatMatrix(RealMatrix b0, RealMatrix b1, RealMatrix b2, RealMatrix b3);

  static QuatMatrix identity(Index n);
  static QuatMatrix zeros(Index rows, Index cols) { return QuatMatrix(rows, cols); }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  RealMatrix& block(int k) { return b_[static_cast<std::size_t>(k)]; }
  const RealMatrix& block(int k) const { return b_[static_cast<std::size_t>(k)]; }

  Quaternion operator()(Index i, Index j) const {
    return {b_[0](i, j), b_[1](i, j), b_[2](i, j), b_[3](i, j)};
  }
  void set(Index i, Index j, const Quaternion& q) {
    b_[0](i, j) = q.w;
    b_[1](i, j) = q.x;
    b_[2](i, j) = q.y;
    b_[3](i, j) = q.z;
  }

  friend bool operator==(const QuatMatrix&, const QuatMatrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::array<RealMatrix, 4> b_;
};

using Complex = std::complex<double>;

// Dense complex matrix, column-major. Only used for the complex adjoint.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(Index rows, Index cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Complex& operator()(Index i, Index j) { return data_[static_cast<std::size_t>(i + j * rows_)]; }
  const Complex& operator()(Index i, Index j) const {
    return data_[static_cast<std::size_t>(i + j * rows_)];
  }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Complex> data_;
};

}  // namespace quatla
