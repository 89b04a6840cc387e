#pragma once

// Block-level update kernels shared by the solvers. All operate in place on
// the four real blocks of a QuatMatrix; no counterpart is ever formed.

#include <vector>

#include "quatla/matrix.hpp"
#include "quatla/opcount.hpp"

namespace quatla::kern {

struct Blocks {
  double* b[4];
  Index ld;
  explicit Blocks(QuatMatrix& a)
      : b{a.block(0).data(), a.block(1).data(), a.block(2).data(), a.block(3).data()},
        ld(a.rows()) {}
  Quaternion get(Index i, Index j) const {
    const Index o = i + j * ld;
    return {b[0][o], b[1][o], b[2][o], b[3][o]};
  }
  void put(Index i, Index j, const Quaternion& q) const {
    const Index o = i + j * ld;
    b[0][o] = q.w;
    b[1][o] = q.x;
    b[2][o] = q.y;
    b[3][o] = q.z;
  }
};

inline std::uint64_t u64(Index n) { return static_cast<std::uint64_t>(n > 0 ? n : 0); }

// A(r0:r0+m, cols) <- (I - beta u u*) A(r0:r0+m, cols).
inline void reflect_left_q(QuatMatrix& a, const Quaternion* u, double beta, Index r0, Index m,
                           Range cols) {
  if (beta == 0.0 || m == 0 || cols.empty()) return;
  Blocks A(a);
  for (Index j = cols.begin; j < cols.end; ++j) {
    const Index o = r0 + j * A.ld;
    const double* y0 = A.b[0] + o;
    const double* y1 = A.b[1] + o;
    const double* y2 = A.b[2] + o;
    const double* y3 = A.b[3] + o;
    // w = u* y
    double w0 = 0, w1 = 0, w2 = 0, w3 = 0;
    for (Index i = 0; i < m; ++i) {
      const Quaternion& q = u[i];
      w0 += q.w * y0[i] + q.x * y1[i] + q.y * y2[i] + q.z * y3[i];
      w1 += q.w * y1[i] - q.x * y0[i] - q.y * y3[i] + q.z * y2[i];
      w2 += q.w * y2[i] + q.x * y3[i] - q.y * y0[i] - q.z * y1[i];
      w3 += q.w * y3[i] - q.x * y2[i] + q.y * y1[i] - q.z * y0[i];
    }
    w0 *= beta; w1 *= beta; w2 *= beta; w3 *= beta;
    double* z0 = A.b[0] + o;
    double* z1 = A.b[1] + o;
    double* z2 = A.b[2] + o;
    double* z3 = A.b[3] + o;
    // y -= u w
    for (Index i = 0; i < m; ++i) {
      const Quaternion& q = u[i];
      z0[i] -= q.w * w0 - q.x * w1 - q.y * w2 - q.z * w3;
      z1[i] -= q.w * w1 + q.x * w0 + q.y * w3 - q.z * w2;
      z2[i] -= q.w * w2 - q.x * w3 + q.y * w0 + q.z * w1;
      z3[i] -= q.w * w3 + q.x * w2 - q.y * w1 + q.z * w0;
    }
  }
  ops::count(u64(cols.size()) * (32 * u64(m) + 4), u64(cols.size()) * 32 * u64(m));
}

// A(rows, c0:c0+m) <- A(rows, c0:c0+m) (I - beta u u*).
inline void reflect_right_q(QuatMatrix& a, const Quaternion* u, double beta, Range rows,
                            Index c0, Index m) {
  if (beta == 0.0 || m == 0 || rows.empty()) return;
  Blocks A(a);
  const Index r = rows.size();
  std::vector<double> t(static_cast<std::size_t>(4 * r), 0.0);
  double* t0 = t.data();
  double* t1 = t0 + r;
  double* t2 = t1 + r;
  double* t3 = t2 + r;
  // t = Y u
  for (Index jj = 0; jj < m; ++jj) {
    const Quaternion& q = u[jj];
    const Index o = rows.begin + (c0 + jj) * A.ld;
    const double* y0 = A.b[0] + o;
    const double* y1 = A.b[1] + o;
    const double* y2 = A.b[2] + o;
    const double* y3 = A.b[3] + o;
    for (Index i = 0; i < r; ++i) {
      t0[i] += y0[i] * q.w - y1[i] * q.x - y2[i] * q.y - y3[i] * q.z;
      t1[i] += y0[i] * q.x + y1[i] * q.w + y2[i] * q.z - y3[i] * q.y;
      t2[i] += y0[i] * q.y - y1[i] * q.z + y2[i] * q.w + y3[i] * q.x;
      t3[i] += y0[i] * q.z + y1[i] * q.y - y2[i] * q.x + y3[i] * q.w;
    }
  }
  // Y -= beta t u*
  for (Index jj = 0; jj < m; ++jj) {
    const Quaternion q = conj(u[jj]) * beta;
    const Index o = rows.begin + (c0 + jj) * A.ld;
    double* y0 = A.b[0] + o;
    double* y1 = A.b[1] + o;
    double* y2 = A.b[2] + o;
    double* y3 = A.b[3] + o;
    for (Index i = 0; i < r; ++i) {
      y0[i] -= t0[i] * q.w - t1[i] * q.x - t2[i] * q.y - t3[i] * q.z;
      y1[i] -= t0[i] * q.x + t1[i] * q.w + t2[i] * q.z - t3[i] * q.y;
      y2[i] -= t0[i] * q.y - t1[i] * q.z + t2[i] * q.w + t3[i] * q.x;
      y3[i] -= t0[i] * q.z + t1[i] * q.y - t2[i] * q.x + t3[i] * q.w;
    }
  }
  ops::count(u64(m) * (32 * u64(r) + 4), u64(m) * 32 * u64(r));
}

// Real reflector (I - beta u u^T) applied to all four blocks from the left.
inline void reflect_left_r(QuatMatrix& a, const double* u, double beta, Index r0, Index m,
                           Range cols) {
  if (beta == 0.0 || m == 0 || cols.empty()) return;
  Blocks A(a);
  for (int k = 0; k < 4; ++k) {
    for (Index j = cols.begin; j < cols.end; ++j) {
      double* y = A.b[k] + r0 + j * A.ld;
      double s = 0.0;
      for (Index i = 0; i < m; ++i) s += u[i] * y[i];
      s *= beta;
      for (Index i = 0; i < m; ++i) y[i] -= s * u[i];
    }
  }
  ops::count(4 * u64(cols.size()) * (2 * u64(m) + 1), 4 * u64(cols.size()) * 2 * u64(m));
}

// Real reflector applied to all four blocks from the right.
inline void reflect_right_r(QuatMatrix& a, const double* u, double beta, Range rows, Index c0,
                            Index m) {
  if (beta == 0.0 || m == 0 || rows.empty()) return;
  Blocks A(a);
  const Index r = rows.size();
  std::vector<double> t(static_cast<std::size_t>(r));
  for (int k = 0; k < 4; ++k) {
    std::fill(t.begin(), t.end(), 0.0);
    for (Index jj = 0; jj < m; ++jj) {
      const double* y = A.b[k] + rows.begin + (c0 + jj) * A.ld;
      const double f = u[jj];
      for (Index i = 0; i < r; ++i) t[static_cast<std::size_t>(i)] += y[i] * f;
    }
    for (Index jj = 0; jj < m; ++jj) {
      double* y = A.b[k] + rows.begin + (c0 + jj) * A.ld;
      const double f = beta * u[jj];
      for (Index i = 0; i < r; ++i) y[i] -= t[static_cast<std::size_t>(i)] * f;
    }
  }
  ops::count(4 * u64(m) * (2 * u64(r) + 1), 4 * u64(m) * 2 * u64(r));
}

// Rows r0..r0+m of A(:, cols) <- (I - beta u u^T) diag(p) A, or diag(p) (I - beta u u^T) A
// when phase_last is set. One pass per column.
template <bool phase_last>
inline void phase_reflect_left_r(QuatMatrix& a, const Quaternion* p, const double* u, double beta,
                                 Index r0, Index m, Range cols) {
  if (m == 0 || cols.empty()) return;
  Blocks A(a);
  for (Index j = cols.begin; j < cols.end; ++j) {
    const Index o = r0 + j * A.ld;
    double* y0 = A.b[0] + o;
    double* y1 = A.b[1] + o;
    double* y2 = A.b[2] + o;
    double* y3 = A.b[3] + o;
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    for (Index i = 0; i < m; ++i) {
      double a0 = y0[i], a1 = y1[i], a2 = y2[i], a3 = y3[i];
      if constexpr (!phase_last) {
        const Quaternion& q = p[i];
        const double b0 = q.w * a0 - q.x * a1 - q.y * a2 - q.z * a3;
        const double b1 = q.w * a1 + q.x * a0 + q.y * a3 - q.z * a2;
        const double b2 = q.w * a2 - q.x * a3 + q.y * a0 + q.z * a1;
        const double b3 = q.w * a3 + q.x * a2 - q.y * a1 + q.z * a0;
        y0[i] = a0 = b0;
        y1[i] = a1 = b1;
        y2[i] = a2 = b2;
        y3[i] = a3 = b3;
      }
      s0 += u[i] * a0;
      s1 += u[i] * a1;
      s2 += u[i] * a2;
      s3 += u[i] * a3;
    }
    s0 *= beta; s1 *= beta; s2 *= beta; s3 *= beta;
    for (Index i = 0; i < m; ++i) {
      const double a0 = y0[i] - s0 * u[i];
      const double a1 = y1[i] - s1 * u[i];
      const double a2 = y2[i] - s2 * u[i];
      const double a3 = y3[i] - s3 * u[i];
      if constexpr (phase_last) {
        const Quaternion& q = p[i];
        y0[i] = q.w * a0 - q.x * a1 - q.y * a2 - q.z * a3;
        y1[i] = q.w * a1 + q.x * a0 + q.y * a3 - q.z * a2;
        y2[i] = q.w * a2 - q.x * a3 + q.y * a0 + q.z * a1;
        y3[i] = q.w * a3 + q.x * a2 - q.y * a1 + q.z * a0;
      } else {
        y0[i] = a0;
        y1[i] = a1;
        y2[i] = a2;
        y3[i] = a3;
      }
    }
  }
  if (beta != 0.0) {
    ops::count(4 * u64(cols.size()) * (2 * u64(m) + 1), 4 * u64(cols.size()) * 2 * u64(m));
  }
  ops::count_qmul(u64(m) * u64(cols.size()));
}

// A(rows, c0:c0+m) <- A diag(p) (I - beta u u^T). One pass over the columns to form A diag(p) u.
inline void phase_reflect_right_r(QuatMatrix& a, const Quaternion* p, const double* u,
                                  double beta, Range rows, Index c0, Index m) {
  if (m == 0 || rows.empty()) return;
  Blocks A(a);
  const Index r = rows.size();
  std::vector<double> t(static_cast<std::size_t>(4 * r), 0.0);
  double* t0 = t.data();
  double* t1 = t0 + r;
  double* t2 = t1 + r;
  double* t3 = t2 + r;
  for (Index jj = 0; jj < m; ++jj) {
    const Quaternion& q = p[jj];
    const double f = u[jj];
    const Index o = rows.begin + (c0 + jj) * A.ld;
    double* y0 = A.b[0] + o;
    double* y1 = A.b[1] + o;
    double* y2 = A.b[2] + o;
    double* y3 = A.b[3] + o;
    for (Index i = 0; i < r; ++i) {
      const double a0 = y0[i], a1 = y1[i], a2 = y2[i], a3 = y3[i];
      const double b0 = a0 * q.w - a1 * q.x - a2 * q.y - a3 * q.z;
      const double b1 = a0 * q.x + a1 * q.w + a2 * q.z - a3 * q.y;
      const double b2 = a0 * q.y - a1 * q.z + a2 * q.w + a3 * q.x;
      const double b3 = a0 * q.z + a1 * q.y - a2 * q.x + a3 * q.w;
      y0[i] = b0;
      y1[i] = b1;
      y2[i] = b2;
      y3[i] = b3;
      t0[i] += b0 * f;
      t1[i] += b1 * f;
      t2[i] += b2 * f;
      t3[i] += b3 * f;
    }
  }
  ops::count_qmul(u64(m) * u64(r));
  if (beta == 0.0) return;
  for (Index jj = 0; jj < m; ++jj) {
    const double f = beta * u[jj];
    const Index o = rows.begin + (c0 + jj) * A.ld;
    double* y0 = A.b[0] + o;
    double* y1 = A.b[1] + o;
    double* y2 = A.b[2] + o;
    double* y3 = A.b[3] + o;
    for (Index i = 0; i < r; ++i) {
      y0[i] -= t0[i] * f;
      y1[i] -= t1[i] * f;
      y2[i] -= t2[i] * f;
      y3[i] -= t3[i] * f;
    }
  }
  ops::count(4 * u64(m) * (2 * u64(r) + 1), 4 * u64(m) * 2 * u64(r));
}

// Row i of A(:, cols) <- p A(i, cols).
inline void scale_row_left(QuatMatrix& a, Index i, const Quaternion& p, Range cols) {
  if (p == Quaternion(1.0) || cols.empty()) return;
  Blocks A(a);
  for (Index j = cols.begin; j < cols.end; ++j) A.put(i, j, p * A.get(i, j));
  ops::count_qmul(u64(cols.size()));
}

// Column j of A(rows, :) <- A(rows, j) p.
inline void scale_col_right(QuatMatrix& a, Index j, const Quaternion& p, Range rows) {
  if (p == Quaternion(1.0) || rows.empty()) return;
  Blocks A(a);
  const Index o = j * A.ld;
  double* y0 = A.b[0] + o;
  double* y1 = A.b[1] + o;
  double* y2 = A.b[2] + o;
  double* y3 = A.b[3] + o;
  for (Index i = rows.begin; i < rows.end; ++i) {
    const double a0 = y0[i], a1 = y1[i], a2 = y2[i], a3 = y3[i];
    y0[i] = a0 * p.w - a1 * p.x - a2 * p.y - a3 * p.z;
    y1[i] = a0 * p.x + a1 * p.w + a2 * p.z - a3 * p.y;
    y2[i] = a0 * p.y - a1 * p.z + a2 * p.w + a3 * p.x;
    y3[i] = a0 * p.z + a1 * p.y - a2 * p.x + a3 * p.w;
  }
  ops::count_qmul(u64(rows.size()));
}

// Rows r0.. r0+m of A(:, cols) <- diag(p) A; column-ordered traversal.
inline void scale_rows_left(QuatMatrix& a, const Quaternion* p, Index r0, Index m, Range cols) {
  if (m == 0 || cols.empty()) return;
  Blocks A(a);
  for (Index j = cols.begin; j < cols.end; ++j) {
    const Index o = r0 + j * A.ld;
    double* y0 = A.b[0] + o;
    double* y1 = A.b[1] + o;
    double* y2 = A.b[2] + o;
    double* y3 = A.b[3] + o;
    for (Index i = 0; i < m; ++i) {
      const Quaternion& q = p[i];
      const double a0 = y0[i], a1 = y1[i], a2 = y2[i], a3 = y3[i];
      y0[i] = q.w * a0 - q.x * a1 - q.y * a2 - q.z * a3;
      y1[i] = q.w * a1 + q.x * a0 + q.y * a3 - q.z * a2;
      y2[i] = q.w * a2 - q.x * a3 + q.y * a0 + q.z * a1;
      y3[i] = q.w * a3 + q.x * a2 - q.y * a1 + q.z * a0;
    }
  }
  ops::count_qmul(u64(m) * u64(cols.size()));
}

// |q| of a stored entry with the count of one modulus.
inline double entry_abs(const Quaternion& q) {
  ops::count(4, 3, 0, 1);
  return abs(q);
}

// Writes an exact real value with zero imaginary parts.
inline void put_real(QuatMatrix& a, Index i, Index j, double v) {
  a.block(0)(i, j) = v;
  a.block(1)(i, j) = 0.0;
  a.block(2)(i, j) = 0.0;
  a.block(3)(i, j) = 0.0;
}

inline void put_zero(QuatMatrix& a, Index i, Index j) { put_real(a, i, j, 0.0); }

}  // namespace quatla::kern
