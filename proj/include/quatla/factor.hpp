#pragma once

#include "quatla/matrix.hpp"

namespace quatla {

struct QRResult {
  QuatMatrix W;  // unitary
  QuatMatrix R;  // B0 upper triangular with real nonnegative diagonal, B1..B3 strictly upper
};

// Householder (H2) QR; requires rows >= cols.
QRResult qr_full(const QuatMatrix& a);

// Givens (G2) QR of a Hessenberg matrix with real or quaternion subdiagonal.
// Rejects input with nonzero entries below the first subdiagonal.
QRResult hess_qr(const QuatMatrix& h);

// `iters` steps of H <- R W with H = W R. No convergence test.
QuatMatrix qr_iteration_unshifted(const QuatMatrix& h, int iters);

}  // namespace quatla
