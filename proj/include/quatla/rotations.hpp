#pragma once

#include <array>
#include <span>
#include <vector>

#include "quatla/matrix.hpp"

namespace quatla {

enum class Trans { None, Adjoint };

enum class HouseholderVariant { H1, H2, H3, H4 };

// Unitary U with U y = target, built from the reflector R = I - beta u u*
// (u unit, beta in {0, 2}):
//   H1: U = R                      target alpha v, |alpha| = |y|
//   H2: U = conj(xi) R             target |y| v
//   H3: U = R G, real u            target |y| v
//   H4: U = G R                    target |y| v
// G = diag(phases); an empty phase list means G = I.
struct HouseholderQ {
  HouseholderVariant variant = HouseholderVariant::H1;
  std::vector<Quaternion> u;
  double beta = 0.0;
  Quaternion xi = 1.0;
  std::vector<Quaternion> phases;

  Index size() const { return static_cast<Index>(u.size()); }
  bool is_identity() const { return beta == 0.0 && phases.empty() && xi == Quaternion(1.0); }
};

// Rejects y = 0 and non-unit or mismatched v.
HouseholderQ make_householder(std::span<const Quaternion> y, HouseholderVariant variant,
                              std::span<const double> v);
HouseholderQ make_householder(std::span<const Quaternion> y, HouseholderVariant variant);

// A(rows, cols) <- U A(rows, cols) (or U* A(rows, cols)); rows.size() == h.size().
void apply_householder_left(QuatMatrix& a, const HouseholderQ& h, Range rows, Range cols,
                            Trans t = Trans::None);
// A(rows, cols) <- A(rows, cols) U (or A U*); cols.size() == h.size().
void apply_householder_right(QuatMatrix& a, const HouseholderQ& h, Range rows, Range cols,
                             Trans t = Trans::None);

// Dense U, for tests and small problems.
QuatMatrix householder_matrix(const HouseholderQ& h);

// Unit-quaternion rotation p = q/|q|: the row update q <- conj(p) q makes the
// entry real |q|; the column update multiplies by p on the right.
struct JRSGivens4 {
  Quaternion phase = 1.0;
  double modulus = 0.0;

  // 4x4 real counterpart of the phase, row-major. Its transpose maps the
  // coefficient vector (w, -y, -x, -z) of q to (|q|, 0, 0, 0).
  std::array<double, 16> matrix() const;
};

JRSGivens4 jrs_givens4(const Quaternion& q);

enum class GivensVariant { G1, G2 };

// 2x2 unitary G = [[g11, g12], [g21, g22]] with G* x = [r, 0]: r = |x| for
// G2 and sigma |x| for G1.
struct GivensQ {
  GivensVariant variant = GivensVariant::G2;
  Quaternion g11 = 1.0, g12 = 0.0, g21 = 0.0, g22 = 1.0;
  Quaternion sigma = 1.0;  // G1 only
};

// Rejects x = 0.
GivensQ make_givens(const Quaternion& x1, const Quaternion& x2,
                    GivensVariant variant = GivensVariant::G2);

// Rows i and k of A(:, cols) <- G [row_i; row_k] (or G*).
void apply_givens_left(QuatMatrix& a, const GivensQ& g, Index i, Index k, Range cols,
                       Trans t = Trans::Adjoint);
// Columns i and k of A(rows, :) <- [col_i, col_k] G (or G*).
void apply_givens_right(QuatMatrix& a, const GivensQ& g, Range rows, Index i, Index k,
                        Trans t = Trans::None);

}  // namespace quatla
