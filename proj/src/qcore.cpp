#include "quatla/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quatla {

namespace {

// c += s * a * b for column-major real matrices.
void gemm_acc(RealMatrix& c, double s, const RealMatrix& a, const RealMatrix& b) {
  const Index m = a.rows();
  const Index kdim = a.cols();
  const Index n = b.cols();
  for (Index j = 0; j < n; ++j) {
    double* cj = c.col(j);
    for (Index k = 0; k < kdim; ++k) {
      const double f = s * b(k, j);
      if (f == 0.0) continue;
      const double* ak = a.col(k);
      for (Index i = 0; i < m; ++i) cj[i] += f * ak[i];
    }
  }
}

void require_same_shape(const QuatMatrix& a, const QuatMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
  }
}

}  // namespace

RealMatrix RealMatrix::identity(Index n) {
  RealMatrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("real product: inner dimension mismatch");
  RealMatrix c(a.rows(), b.cols());
  gemm_acc(c, 1.0, a, b);
  return c;
}

RealMatrix transpose(const RealMatrix& a) {
  RealMatrix t(a.cols(), a.rows());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

double fro_norm(const RealMatrix& a) {
  double s = 0.0;
  const Index len = a.rows() * a.cols();
  for (Index i = 0; i < len; ++i) s += a.data()[i] * a.data()[i];
  return std::sqrt(s);
}

QuatMatrix::QuatMatrix(RealMatrix b0, RealMatrix b1, RealMatrix b2, RealMatrix b3)
    : rows_(b0.rows()), cols_(b0.cols()),
      b_{std::move(b0), std::move(b1), std::move(b2), std::move(b3)} {
  for (const auto& b : b_) {
    if (b.rows() != rows_ || b.cols() != cols_)
      throw std::invalid_argument("QuatMatrix: blocks must share dimensions");
  }
}

QuatMatrix QuatMatrix::identity(Index n) {
  QuatMatrix m(n, n);
  for (Index i = 0; i < n; ++i) m.block(0)(i, i) = 1.0;
  return m;
}

std::string to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::UpperHessenberg: return "UpperHessenberg";
    case StructureKind::UpperJRSHessenberg: return "UpperJRSHessenberg";
    case StructureKind::UnreducedUpperJRSHessenberg: return "UnreducedUpperJRSHessenberg";
    case StructureKind::UpperJRSTriangular: return "UpperJRSTriangular";
    case StructureKind::JRSSchur: return "JRSSchur";
    case StructureKind::HermitianTridiagonalReal: return "HermitianTridiagonalReal";
  }
  return "?";
}

QuatMatrix adjoint(const QuatMatrix& a) {
  QuatMatrix r(a.cols(), a.rows());
  for (int k = 0; k < 4; ++k) {
    const double s = k == 0 ? 1.0 : -1.0;
    const RealMatrix& src = a.block(k);
    RealMatrix& dst = r.block(k);
    for (Index j = 0; j < a.cols(); ++j)
      for (Index i = 0; i < a.rows(); ++i) dst(j, i) = s * src(i, j);
  }
  return r;
}

QuatMatrix mat_mul(const QuatMatrix& a, const QuatMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("mat_mul: inner dimension mismatch " + std::to_string(a.rows()) +
                                "x" + std::to_string(a.cols()) + " * " +
                                std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  // Sign table of the Hamilton product: e_p e_q = sign[p][q] e_{target[p][q]}.
  static constexpr int target[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr double sign[4][4] = {
      {1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  QuatMatrix c(a.rows(), b.cols());
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) gemm_acc(c.block(target[p][q]), sign[p][q], a.block(p), b.block(q));
  return c;
}

QuatMatrix operator+(const QuatMatrix& a, const QuatMatrix& b) {
  require_same_shape(a, b, "operator+");
  QuatMatrix c = a;
  for (int k = 0; k < 4; ++k) {
    const Index len = a.rows() * a.cols();
    for (Index i = 0; i < len; ++i) c.block(k).data()[i] += b.block(k).data()[i];
  }
  return c;
}

QuatMatrix operator-(const QuatMatrix& a, const QuatMatrix& b) {
  require_same_shape(a, b, "operator-");
  QuatMatrix c = a;
  for (int k = 0; k < 4; ++k) {
    const Index len = a.rows() * a.cols();
    for (Index i = 0; i < len; ++i) c.block(k).data()[i] -= b.block(k).data()[i];
  }
  return c;
}

QuatMatrix operator*(double s, const QuatMatrix& a) {
  QuatMatrix c = a;
  for (int k = 0; k < 4; ++k) {
    const Index len = a.rows() * a.cols();
    for (Index i = 0; i < len; ++i) c.block(k).data()[i] *= s;
  }
  return c;
}

RealMatrix expand_counterpart(const QuatMatrix& a) {
  // Block (r, c) of the counterpart is sign * B_{layout[r][c]}; first block row
  // is [B0, B2, B1, B3].
  static constexpr int layout[4][4] = {{0, 2, 1, 3}, {2, 0, 3, 1}, {1, 3, 0, 2}, {3, 1, 2, 0}};
  static constexpr double sign[4][4] = {
      {1, 1, 1, 1}, {-1, 1, 1, -1}, {-1, -1, 1, 1}, {-1, 1, -1, 1}};
  const Index m = a.rows();
  const Index n = a.cols();
  RealMatrix e(4 * m, 4 * n);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const RealMatrix& b = a.block(layout[r][c]);
      const double s = sign[r][c];
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i) e(r * m + i, c * n + j) = s * b(i, j);
    }
  return e;
}

ComplexMatrix complex_adjoint(const QuatMatrix& a) {
  if (!a.square()) throw std::invalid_argument("complex_adjoint: matrix must be square");
  const Index n = a.rows();
  ComplexMatrix x(2 * n, 2 * n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const Complex c(a.block(0)(i, j), a.block(1)(i, j));
      const Complex d(a.block(2)(i, j), a.block(3)(i, j));
      x(i, j) = c;
      x(i, n + j) = d;
      x(n + i, j) = -std::conj(d);
      x(n + i, n + j) = std::conj(c);
    }
  return x;
}

double fro_norm(const QuatMatrix& a) {
  double s = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double bk = fro_norm(a.block(k));
    s += bk * bk;
  }
  return std::sqrt(s);
}

StructureCheck check_structure(const QuatMatrix& a, StructureKind kind, double tol) {
  if (!a.square()) throw std::invalid_argument("check_structure: matrix must be square");
  const Index n = a.rows();
  const double thr = tol * fro_norm(a);
  StructureCheck res;

  auto note = [&](int blk, Index i, Index j, double mag) {
    if (mag > res.violation) {
      res.violation = mag;
      res.block = blk;
      res.row = i;
      res.col = j;
    }
  };
  // Records |B_blk(i,j)| for every entry with i - j > lowest.
  auto below = [&](int blk, Index lowest) {
    const RealMatrix& b = a.block(blk);
    for (Index j = 0; j < n; ++j)
      for (Index i = std::max<Index>(0, j + lowest + 1); i < n; ++i) note(blk, i, j, std::abs(b(i, j)));
  };

  bool unreduced_fail = false;
  Index fail_row = -1;
  switch (kind) {
    case StructureKind::UpperHessenberg:
      for (int k = 0; k < 4; ++k) below(k, 1);
      break;
    case StructureKind::UpperJRSHessenberg:
    case StructureKind::UnreducedUpperJRSHessenberg:
      below(0, 1);
      for (int k = 1; k < 4; ++k) below(k, 0);
      if (kind == StructureKind::UnreducedUpperJRSHessenberg) {
        for (Index i = 1; i < n; ++i) {
          if (std::abs(a.block(0)(i, i - 1)) <= thr) {
            unreduced_fail = true;
            fail_row = i;
            break;
          }
        }
      }
      break;
    case StructureKind::UpperJRSTriangular:
      below(0, 0);
      for (int k = 1; k < 4; ++k) below(k, -1);
      break;
    case StructureKind::JRSSchur: {
      below(0, 1);
      for (int k = 1; k < 4; ++k) below(k, 0);
      const RealMatrix& b0 = a.block(0);
      for (Index i = 1; i < n; ++i) {
        const double c = b0(i, i - 1);
        if (std::abs(c) <= thr) continue;
        const bool prev = i >= 2 && std::abs(b0(i - 1, i - 2)) > thr;
        const bool next = i + 1 < n && std::abs(b0(i + 1, i)) > thr;
        if (prev || next) {
          note(0, i, i - 1, std::abs(c));
          continue;
        }
        const double p = b0(i - 1, i - 1) - b0(i, i);
        const double disc = p * p + 4.0 * b0(i - 1, i) * c;
        if (!(disc < 0.0)) note(0, i, i - 1, std::abs(c));
      }
      break;
    }
    case StructureKind::HermitianTridiagonalReal: {
      const RealMatrix& b0 = a.block(0);
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) {
          if (std::abs(i - j) > 1) note(0, i, j, std::abs(b0(i, j)));
          else if (i > j) note(0, i, j, std::abs(b0(i, j) - b0(j, i)));
        }
      for (int k = 1; k < 4; ++k) below(k, -n - 1);
      break;
    }
  }

  res.ok = res.violation <= thr && !unreduced_fail;
  if (res.ok) {
    res.block = -1;
    res.row = res.col = -1;
  } else if (unreduced_fail && res.violation <= thr) {
    res.block = 0;
    res.row = fail_row;
    res.col = fail_row - 1;
  }
  return res;
}

QuatMatrix submatrix(const QuatMatrix& a, Range rows, Range cols) {
  QuatMatrix s(rows.size(), cols.size());
  for (int k = 0; k < 4; ++k)
    for (Index j = 0; j < cols.size(); ++j)
      for (Index i = 0; i < rows.size(); ++i)
        s.block(k)(i, j) = a.block(k)(rows.begin + i, cols.begin + j);
  return s;
}

}  // namespace quatla
