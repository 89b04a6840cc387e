#pragma once

#include <string>

#include "quatla/matrix.hpp"

namespace quatla {

enum class StructureKind {
  UpperHessenberg,              // all four blocks upper Hessenberg (quaternion subdiagonal)
  UpperJRSHessenberg,           // B0 upper Hessenberg, B1..B3 upper triangular
  UnreducedUpperJRSHessenberg,  // as above with every B0 subdiagonal nonzero
  UpperJRSTriangular,           // B0 upper triangular, B1..B3 strictly upper triangular
  JRSSchur,                     // B0 quasi-triangular real Schur, B1..B3 upper triangular
  HermitianTridiagonalReal,     // B0 symmetric tridiagonal, B1..B3 zero
};

std::string to_string(StructureKind kind);

struct StructureCheck {
  bool ok = true;
  double violation = 0.0;  // max |entry| outside the allowed profile
  int block = -1;          // witness block (0..3), -1 when ok
  Index row = -1;
  Index col = -1;
};

QuatMatrix adjoint(const QuatMatrix& a);

// Quaternion product via 16 real block products.
QuatMatrix mat_mul(const QuatMatrix& a, const QuatMatrix& b);

QuatMatrix operator+(const QuatMatrix& a, const QuatMatrix& b);
QuatMatrix operator-(const QuatMatrix& a, const QuatMatrix& b);
QuatMatrix operator*(double s, const QuatMatrix& a);

// The 4m x 4n real counterpart. Test utility only.
RealMatrix expand_counterpart(const QuatMatrix& a);

// [[C, D], [-conj(D), conj(C)]] for A = C + D j, C = B0 + B1 i, D = B2 + B3 i.
ComplexMatrix complex_adjoint(const QuatMatrix& a);

double fro_norm(const QuatMatrix& a);

// Entries with |entry| <= tol * fro_norm(a) count as structural zeros.
StructureCheck check_structure(const QuatMatrix& a, StructureKind kind, double tol);

// Copy of the square submatrix a(r, r).
QuatMatrix submatrix(const QuatMatrix& a, Range rows, Range cols);

}  // namespace quatla
