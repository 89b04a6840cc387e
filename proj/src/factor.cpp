#include "quatla/factor.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "kernels.hpp"
#include "quatla/qcore.hpp"
#include "quatla/rotations.hpp"

namespace quatla {

namespace {

constexpr double kHessTol = 1e-14;

void require_hessenberg(const QuatMatrix& h, const char* what) {
  if (!h.square()) throw std::invalid_argument(std::string(what) + ": matrix must be square");
  const StructureCheck c = check_structure(h, StructureKind::UpperHessenberg, kHessTol);
  if (!c.ok) {
    throw std::invalid_argument(std::string(what) + ": input is not Hessenberg, block B" +
                                std::to_string(c.block) + " entry (" + std::to_string(c.row) +
                                "," + std::to_string(c.col) + ") = " +
                                std::to_string(c.violation));
  }
}

struct Rotation {
  Index s;
  GivensQ g;
  bool identity;
};

// Reduces h to R in place and returns the rotations and final phase.
std::vector<Rotation> givens_sweep(QuatMatrix& h, Quaternion& phase) {
  const Index n = h.rows();
  std::vector<Rotation> rots;
  rots.reserve(static_cast<std::size_t>(n));
  for (Index s = 0; s + 1 < n; ++s) {
    const Quaternion x1 = h(s, s);
    const Quaternion x2 = h(s + 1, s);
    if (norm2(x1) == 0.0 && norm2(x2) == 0.0) {
      rots.push_back({s, GivensQ{}, true});
      continue;
    }
    const GivensQ g = make_givens(x1, x2, GivensVariant::G2);
    const double r = std::sqrt(norm2(x1) + norm2(x2));
    apply_givens_left(h, g, s, s + 1, {s + 1, n}, Trans::Adjoint);
    kern::put_real(h, s, s, r);
    kern::put_zero(h, s + 1, s);
    rots.push_back({s, g, false});
  }
  phase = 1.0;
  if (n > 0) {
    const Quaternion last = h(n - 1, n - 1);
    const double a = abs(last);
    if (a > 0.0 && !(last.x == 0.0 && last.y == 0.0 && last.z == 0.0 && last.w > 0.0)) {
      phase = last / a;
      kern::put_real(h, n - 1, n - 1, a);
    }
  }
  return rots;
}

}  // namespace

QRResult qr_full(const QuatMatrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (m < n) {
    throw std::invalid_argument("qr_full: requires rows >= cols, got " + std::to_string(m) + "x" +
                                std::to_string(n));
  }
  QRResult res;
  res.R = a;
  QuatMatrix& r = res.R;
  struct Step {
    Index col;
    HouseholderQ h;
  };
  std::vector<Step> steps;
  std::vector<Quaternion> y;
  for (Index c = 0; c < n; ++c) {
    const Index len = m - c;
    y.resize(static_cast<std::size_t>(len));
    double ny2 = 0.0;
    for (Index i = 0; i < len; ++i) {
      y[static_cast<std::size_t>(i)] = r(c + i, c);
      ny2 += norm2(y[static_cast<std::size_t>(i)]);
    }
    if (ny2 == 0.0) continue;
    HouseholderQ h = make_householder(y, HouseholderVariant::H2);
    if (!h.is_identity()) {
      apply_householder_left(r, h, {c, m}, {c + 1, n});
      steps.push_back({c, std::move(h)});
    }
    kern::put_real(r, c, c, std::sqrt(ny2));
    for (Index i = c + 1; i < m; ++i) kern::put_zero(r, i, c);
  }
  // W = U_0* U_1* ... accumulated right to left.
  res.W = QuatMatrix::identity(m);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    apply_householder_left(res.W, it->h, {it->col, m}, {it->col, m}, Trans::Adjoint);
  return res;
}

QRResult hess_qr(const QuatMatrix& h) {
  require_hessenberg(h, "hess_qr");
  const Index n = h.rows();
  QRResult res;
  res.R = h;
  Quaternion phase;
  const std::vector<Rotation> rots = givens_sweep(res.R, phase);
  // W = G_0 G_1 ... G_{n-2} diag(1, .., phase); only rows 0..s+1 are nonzero
  // in the columns touched by G_s.
  res.W = QuatMatrix::identity(n);
  for (const Rotation& rot : rots) {
    if (rot.identity) continue;
    apply_givens_right(res.W, rot.g, {0, rot.s + 2}, rot.s, rot.s + 1, Trans::None);
  }
  if (n > 0) kern::scale_col_right(res.W, n - 1, phase, {0, n});
  return res;
}

QuatMatrix qr_iteration_unshifted(const QuatMatrix& h, int iters) {
  require_hessenberg(h, "qr_iteration_unshifted");
  const Index n = h.rows();
  QuatMatrix cur = h;
  for (int it = 0; it < iters; ++it) {
    Quaternion phase;
    const std::vector<Rotation> rots = givens_sweep(cur, phase);
    // R W: apply the same rotations on the right.
    for (const Rotation& rot : rots) {
      if (rot.identity) continue;
      apply_givens_right(cur, rot.g, {0, rot.s + 2}, rot.s, rot.s + 1, Trans::None);
    }
    if (n > 0) kern::scale_col_right(cur, n - 1, phase, {0, n});
  }
  return cur;
}

}  // namespace quatla
