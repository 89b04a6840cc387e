#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "quatla/matrix.hpp"

namespace quatla {

// Double shift {kappa, conj(kappa)} entering only through t and d.
struct ShiftPair {
  double t = 0.0;  // 2 Re(kappa)
  double d = 0.0;  // |kappa|^2
  Complex kappa;
};

ShiftPair shift_from(Complex kappa);

struct DeflationState {
  Index p = 0;  // rows above the active window
  Index q = 0;  // converged trailing rows
  Range active;
};

struct SchurOptions {
  double tol = 1e-14;
  int max_sweeps = 0;       // 0 selects 30 n
  bool accumulate = true;   // form W
  bool full_t = true;       // update T outside the active window
  int exceptional_after = 10;
  // Called after every Francis step.
  std::function<void(const QuatMatrix& h, const DeflationState& st)> on_step;
};

struct SchurResult {
  QuatMatrix T;
  std::optional<QuatMatrix> W;  // Q = W T W*
  std::vector<int> blocks;      // diagonal block extents, top to bottom
  int iterations = 0;           // Francis steps taken
  bool converged = false;
};

// Standard eigenvalues of a 2x2 quaternion block from its 4x4 complex adjoint,
// sorted by increasing modulus.
std::array<Complex, 2> block2_eigenvalues(const QuatMatrix& h, Index lo);

// Shift from the trailing 2x2 block h(lo:hi, lo:hi), hi = lo + 1.
ShiftPair trailing_shift(const QuatMatrix& h, Index lo, Index hi);

// Nonzero part of the first column of H^2 - t H + d I on a window starting at lo.
std::array<Quaternion, 3> francis_first_col(const QuatMatrix& h, Index lo, double t, double d);

// One implicit double-shift step on the unreduced window. W (if given)
// receives W <- W U. With full_t = false only the window itself is updated.
void francis_step(QuatMatrix& h, Range window, double t, double d, QuatMatrix* w = nullptr,
                  bool full_t = true);

// Real JRS-Schur form of a Hessenberg matrix with real subdiagonal. W0, if
// present, is the accumulator the transforms are appended to.
SchurResult jrs_schur(const QuatMatrix& h, const SchurOptions& opts = {},
                      std::optional<QuatMatrix> w0 = std::nullopt);
SchurResult jrs_schur(const QuatMatrix& h, double tol, int max_sweeps);

// Hessenberg reduction (ViaH3) followed by jrs_schur; Q = W T W*.
SchurResult quaternion_schur(const QuatMatrix& q, const SchurOptions& opts = {});
SchurResult quaternion_schur(const QuatMatrix& q, double tol, int max_sweeps);

}  // namespace quatla
