#include "quatla/hessenberg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "kernels.hpp"
#include "quatla/qcore.hpp"
#include "quatla/rotations.hpp"

namespace quatla {

namespace {

struct ColumnTransform {
  Index col;
  HouseholderQ h;
};

HouseholderVariant variant_of(HessMethod m) {
  switch (m) {
    case HessMethod::ViaH1: return HouseholderVariant::H1;
    case HessMethod::ViaH2: return HouseholderVariant::H2;
    case HessMethod::ViaH3: return HouseholderVariant::H3;
  }
  return HouseholderVariant::H3;
}

}  // namespace

HessenbergResult hess_reduce(const QuatMatrix& q, HessMethod method, bool accumulate) {
  if (!q.square()) {
    throw std::invalid_argument("hess_reduce: matrix must be square, got " +
                                std::to_string(q.rows()) + "x" + std::to_string(q.cols()));
  }
  const Index n = q.rows();
  HessenbergResult res;
  res.method = method;
  res.H = q;
  QuatMatrix& h = res.H;
  const HouseholderVariant variant = variant_of(method);
  // ViaH1 stops at column n-3; the others also normalize the last subdiagonal.
  const Index last = method == HessMethod::ViaH1 ? n - 2 : n - 1;

  std::vector<ColumnTransform> transforms;
  std::vector<Quaternion> y;
  for (Index c = 0; c < last; ++c) {
    const Index m = n - c - 1;
    y.resize(static_cast<std::size_t>(m));
    double ny2 = 0.0;
    for (Index i = 0; i < m; ++i) {
      y[static_cast<std::size_t>(i)] = h(c + 1 + i, c);
      ny2 += norm2(y[static_cast<std::size_t>(i)]);
    }
    if (ny2 == 0.0) continue;
    HouseholderQ t = make_householder(y, variant);
    if (!t.is_identity()) {
      apply_householder_left(h, t, {c + 1, n}, {c, n});
      apply_householder_right(h, t, {0, n}, {c + 1, n}, Trans::Adjoint);
    }
    if (method != HessMethod::ViaH1) kern::put_real(h, c + 1, c, std::sqrt(ny2));
    for (Index i = c + 2; i < n; ++i) kern::put_zero(h, i, c);
    if (accumulate && !t.is_identity()) transforms.push_back({c, std::move(t)});
  }

  if (accumulate) {
    // W = U_0* U_1* ... applied right to left so each step touches only the
    // trailing block.
    QuatMatrix w = QuatMatrix::identity(n);
    for (auto it = transforms.rbegin(); it != transforms.rend(); ++it) {
      const Index c = it->col;
      apply_householder_left(w, it->h, {c + 1, n}, {c + 1, n}, Trans::Adjoint);
    }
    res.W = std::move(w);
  }

  res.subdiag.resize(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  for (Index i = 1; i < n; ++i) res.subdiag[static_cast<std::size_t>(i - 1)] = h.block(0)(i, i - 1);
  return res;
}

TridiagResult tridiag_hermitian(const QuatMatrix& q) {
  if (!q.square()) throw std::invalid_argument("tridiag_hermitian: matrix must be square");
  const double asym = fro_norm(q - adjoint(q));
  const double nq = fro_norm(q);
  if (asym > 8.0 * std::numeric_limits<double>::epsilon() * nq) {
    throw std::invalid_argument("tridiag_hermitian: input is not Hermitian, |Q - Q*| = " +
                                std::to_string(asym));
  }
  HessenbergResult hr = hess_reduce(q, HessMethod::ViaH3, true);
  const Index n = q.rows();
  TridiagResult res;
  res.T0 = RealMatrix(n, n);
  for (Index i = 0; i < n; ++i) {
    res.T0(i, i) = hr.H.block(0)(i, i);
    if (i + 1 < n) {
      const double e = hr.H.block(0)(i + 1, i);
      res.T0(i + 1, i) = e;
      res.T0(i, i + 1) = e;
    }
  }
  res.W = std::move(*hr.W);
  return res;
}

}  // namespace quatla
