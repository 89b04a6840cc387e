#include "quatla/schur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "kernels.hpp"
#include "quatla/hessenberg.hpp"
#include "quatla/qcore.hpp"
#include "quatla/rotations.hpp"

namespace quatla {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;

// ---- small dense complex eigenvalues (4x4 adjoints of 2x2 blocks) ----

// Rotation [[c, s], [-conj(s), c]] that zeroes g in (f, g).
struct CRot {
  double c = 1.0;
  Complex s = 0.0;
};

CRot crot(Complex f, Complex g) {
  CRot r;
  const double ag = std::abs(g);
  if (ag == 0.0) return r;
  const double af = std::abs(f);
  const double nr = std::hypot(af, ag);
  if (af == 0.0) {
    r.c = 0.0;
    r.s = std::conj(g) / ag;
  } else {
    r.c = af / nr;
    r.s = (f / af) * std::conj(g) / nr;
  }
  return r;
}

void crot_rows(ComplexMatrix& a, const CRot& r, Index p, Index q, Index c0, Index c1) {
  for (Index j = c0; j < c1; ++j) {
    const Complex x = a(p, j), y = a(q, j);
    a(p, j) = r.c * x + r.s * y;
    a(q, j) = -std::conj(r.s) * x + r.c * y;
  }
}

void crot_cols(ComplexMatrix& a, const CRot& r, Index p, Index q, Index r0, Index r1) {
  for (Index i = r0; i < r1; ++i) {
    const Complex x = a(i, p), y = a(i, q);
    a(i, p) = r.c * x + std::conj(r.s) * y;
    a(i, q) = -r.s * x + r.c * y;
  }
}

std::vector<Complex> small_eigenvalues(ComplexMatrix a) {
  const Index n = a.rows();
  for (Index j = 0; j + 2 < n; ++j)
    for (Index i = n - 1; i > j + 1; --i) {
      const CRot r = crot(a(i - 1, j), a(i, j));
      crot_rows(a, r, i - 1, i, 0, n);
      crot_cols(a, r, i - 1, i, 0, n);
      a(i, j) = 0.0;
    }
  std::vector<Complex> ev(static_cast<std::size_t>(n));
  Index hi = n - 1;
  int its = 0;
  int total = 0;
  while (hi >= 0) {
    Index l = hi;
    for (; l > 0; --l) {
      if (std::abs(a(l, l - 1)) <= kEps * (std::abs(a(l, l)) + std::abs(a(l - 1, l - 1)))) {
        a(l, l - 1) = 0.0;
        break;
      }
    }
    if (l == hi || total > 200 * n) {
      ev[static_cast<std::size_t>(hi)] = a(hi, hi);
      --hi;
      its = 0;
      continue;
    }
    ++its;
    ++total;
    Complex mu;
    if (its % 10 == 0) {
      mu = a(hi, hi) + std::abs(a(hi, hi - 1));
    } else {
      const Complex p = a(hi - 1, hi - 1), b = a(hi - 1, hi), c = a(hi, hi - 1), d = a(hi, hi);
      const Complex half = 0.5 * (p - d);
      const Complex root = std::sqrt(half * half + b * c);
      const Complex m1 = d - b * c / (half + root);
      const Complex m2 = d - b * c / (half - root);
      const bool ok1 = std::isfinite(std::abs(m1));
      const bool ok2 = std::isfinite(std::abs(m2));
      if (ok1 && (!ok2 || std::abs(m1 - d) <= std::abs(m2 - d))) mu = m1;
      else if (ok2) mu = m2;
      else mu = d;
    }
    for (Index i = l; i <= hi; ++i) a(i, i) -= mu;
    std::vector<CRot> rs;
    for (Index k = l; k < hi; ++k) {
      const CRot r = crot(a(k, k), a(k + 1, k));
      crot_rows(a, r, k, k + 1, k, hi + 1);
      a(k + 1, k) = 0.0;
      rs.push_back(r);
    }
    for (Index k = l; k < hi; ++k) crot_cols(a, rs[static_cast<std::size_t>(k - l)], k, k + 1, l, std::min(k + 2, hi) + 1);
    for (Index i = l; i <= hi; ++i) a(i, i) += mu;
  }
  return ev;
}

// Nonnegative-imaginary representatives of a conjugate-closed list of four.
std::array<Complex, 2> standard_pair(std::vector<Complex> z) {
  std::array<Complex, 2> out;
  for (int k = 0; k < 2; ++k) {
    auto top = std::max_element(z.begin(), z.end(),
                                [](Complex a, Complex b) { return a.imag() < b.imag(); });
    const Complex a = *top;
    z.erase(top);
    auto partner = std::min_element(z.begin(), z.end(), [&](Complex p, Complex q) {
      return std::abs(p - std::conj(a)) < std::abs(q - std::conj(a));
    });
    const Complex b = *partner;
    z.erase(partner);
    out[static_cast<std::size_t>(k)] =
        Complex(0.5 * (a.real() + b.real()), std::max(0.0, 0.5 * (a.imag() - b.imag())));
  }
  return out;
}

// ---- null vector of a small complex matrix by complete-pivoting elimination ----

std::vector<Complex> null_vector(ComplexMatrix m) {
  const Index n = m.rows();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  Index rank = n - 1;  // the smallest pivot is treated as zero
  for (Index k = 0; k < n - 1; ++k) {
    Index pi = k, pj = k;
    double best = -1.0;
    for (Index j = k; j < n; ++j)
      for (Index i = k; i < n; ++i)
        if (std::abs(m(i, j)) > best) {
          best = std::abs(m(i, j));
          pi = i;
          pj = j;
        }
    if (best == 0.0) {
      rank = k;
      break;
    }
    for (Index j = 0; j < n; ++j) std::swap(m(k, j), m(pi, j));
    for (Index i = 0; i < n; ++i) std::swap(m(i, k), m(i, pj));
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(pj)]);
    for (Index i = k + 1; i < n; ++i) {
      const Complex f = m(i, k) / m(k, k);
      for (Index j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  std::vector<Complex> y(static_cast<std::size_t>(n), 0.0);
  y[static_cast<std::size_t>(rank)] = 1.0;
  for (Index k = rank - 1; k >= 0; --k) {
    Complex s = 0.0;
    for (Index j = k + 1; j < n; ++j) s += m(k, j) * y[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(k)] = -s / m(k, k);
  }
  std::vector<Complex> x(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) x[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = y[static_cast<std::size_t>(k)];
  return x;
}

QuatMatrix block2(const QuatMatrix& h, Index lo) { return submatrix(h, {lo, lo + 2}, {lo, lo + 2}); }

// ---- local similarity helpers ----

struct Frame {
  Index n;
  Index row0;  // first row updated by right transforms
  Index col1;  // one past the last column updated by left transforms
};

// Three- or two-row reflector: phases make x real nonnegative, then a real
// reflector maps it to sigma e1.
struct SmallHouse {
  int m = 3;
  Quaternion p[3] = {1.0, 1.0, 1.0};
  bool phased = false;
  double u[3] = {0.0, 0.0, 0.0};
  double beta = 0.0;
  double sigma = 0.0;
};

SmallHouse small_house(const Quaternion* x, int m) {
  SmallHouse s;
  s.m = m;
  double a[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i < m; ++i) {
    a[i] = kern::entry_abs(x[i]);
    const bool positive_real = x[i].x == 0.0 && x[i].y == 0.0 && x[i].z == 0.0 && x[i].w >= 0.0;
    if (a[i] > 0.0 && !positive_real) {
      s.p[i] = x[i] / a[i];
      s.phased = true;
      ops::count(0, 0, 4);
    }
  }
  double tail = 0.0;
  for (int i = 1; i < m; ++i) tail += a[i] * a[i];
  s.sigma = std::sqrt(a[0] * a[0] + tail);
  ops::count(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(m - 1), 0, 1);
  if (tail == 0.0) return s;
  const double v0 = -tail / (a[0] + s.sigma);
  const double nv = std::sqrt(v0 * v0 + tail);
  s.u[0] = v0 / nv;
  for (int i = 1; i < m; ++i) s.u[i] = a[i] / nv;
  s.beta = 2.0;
  ops::count(1, 3, static_cast<std::uint64_t>(m + 1), 1);
  return s;
}

// H <- U H U* with U = R diag(conj p) acting on rows/cols r..r+m-1.
void apply_small_house(QuatMatrix& h, QuatMatrix* w, const SmallHouse& s, Index r, Index left_c0,
                       Index right_r1, const Frame& f) {
  const Range lcols{left_c0, f.col1};
  const Range rrows{f.row0, right_r1};
  if (s.phased) {
    Quaternion cp[3];
    for (int i = 0; i < s.m; ++i) cp[i] = conj(s.p[i]);
    kern::scale_rows_left(h, cp, r, s.m, lcols);
    for (int i = 0; i < s.m; ++i) {
      kern::scale_col_right(h, r + i, s.p[i], rrows);
      if (w) kern::scale_col_right(*w, r + i, s.p[i], {0, w->rows()});
    }
  }
  if (s.beta != 0.0) {
    kern::reflect_left_r(h, s.u, s.beta, r, s.m, lcols);
    kern::reflect_right_r(h, s.u, s.beta, rrows, r, s.m);
    if (w) kern::reflect_right_r(*w, s.u, s.beta, {0, w->rows()}, r, s.m);
  }
}

void require_unreduced(const QuatMatrix& h, Range win) {
  for (Index i = win.begin + 1; i < win.end; ++i) {
    if (h.block(0)(i, i - 1) == 0.0) {
      throw std::invalid_argument("francis_step: window is reduced at row " + std::to_string(i));
    }
  }
}

}  // namespace

ShiftPair shift_from(Complex kappa) {
  ShiftPair s;
  s.kappa = Complex(kappa.real(), std::abs(kappa.imag()));
  s.t = 2.0 * kappa.real();
  s.d = std::norm(kappa);
  return s;
}

std::array<Complex, 2> block2_eigenvalues(const QuatMatrix& h, Index lo) {
  const std::vector<Complex> z = small_eigenvalues(complex_adjoint(block2(h, lo)));
  std::array<Complex, 2> ev = standard_pair(z);
  if (std::abs(ev[1]) < std::abs(ev[0]) ||
      (std::abs(ev[1]) == std::abs(ev[0]) && ev[1].imag() > ev[0].imag()))
    std::swap(ev[0], ev[1]);
  return ev;
}

ShiftPair trailing_shift(const QuatMatrix& h, Index lo, Index hi) {
  if (hi != lo + 1) throw std::invalid_argument("trailing_shift: block must be 2x2");
  return shift_from(block2_eigenvalues(h, lo)[0]);
}

std::array<Quaternion, 3> francis_first_col(const QuatMatrix& h, Index lo, double t, double d) {
  const Quaternion h11 = h(lo, lo), h12 = h(lo, lo + 1);
  const Quaternion h21 = h(lo + 1, lo), h22 = h(lo + 1, lo + 1);
  const Quaternion h32 = h(lo + 2, lo + 1);
  ops::count_qmul(5);
  ops::count(8, 12 + 1);
  return {h11 * h11 + h12 * h21 - t * h11 + Quaternion(d), h21 * h11 + h22 * h21 - t * h21,
          h32 * h21};
}

void francis_step(QuatMatrix& h, Range window, double t, double d, QuatMatrix* w, bool full_t) {
  const Index lo = window.begin;
  const Index hi = window.end - 1;
  const Index m = window.size();
  if (m <= 1) return;
  if (m == 2) throw std::invalid_argument("francis_step: 2x2 windows are resolved directly");
  require_unreduced(h, window);
  const Index n = h.rows();
  const Frame f{n, full_t ? 0 : lo, full_t ? n : hi + 1};

  std::array<Quaternion, 3> x = francis_first_col(h, lo, t, d);
  for (Index k = lo; k + 2 <= hi; ++k) {
    if (k > lo) x = {h(k, k - 1), h(k + 1, k - 1), h(k + 2, k - 1)};
    const SmallHouse s = small_house(x.data(), 3);
    apply_small_house(h, w, s, k, std::max(lo, k - 1), std::min(k + 3, hi) + 1, f);
    if (k > lo) {
      kern::put_real(h, k, k - 1, s.sigma);
      kern::put_zero(h, k + 1, k - 1);
      kern::put_zero(h, k + 2, k - 1);
    }
  }
  // Two-row reflector on the last bulge column.
  {
    const Quaternion y[2] = {h(hi - 1, hi - 2), h(hi, hi - 2)};
    const SmallHouse s = small_house(y, 2);
    apply_small_house(h, w, s, hi - 1, hi - 2, hi + 1, f);
    kern::put_real(h, hi - 1, hi - 2, s.sigma);
    kern::put_zero(h, hi, hi - 2);
  }
  // Realify the last subdiagonal entry.
  {
    const Quaternion y[1] = {h(hi, hi - 1)};
    const SmallHouse s = small_house(y, 1);
    apply_small_house(h, w, s, hi, hi - 1, hi + 1, f);
    kern::put_real(h, hi, hi - 1, s.sigma);
  }
}

namespace {

// Resolves the 2x2 window at rows lo, lo+1. Returns true if it stays a block.
bool resolve_2x2(QuatMatrix& h, QuatMatrix* w, Index lo, const Frame& f) {
  // The subdiagonal is real on entry; normalize it if a caller passed otherwise.
  const Quaternion c = h(lo + 1, lo);
  if (c.x != 0.0 || c.y != 0.0 || c.z != 0.0) {
    const Quaternion y[1] = {c};
    const SmallHouse s = small_house(y, 1);
    apply_small_house(h, w, s, lo + 1, lo, lo + 2, f);
    kern::put_real(h, lo + 1, lo, s.sigma);
  }
  const std::array<Complex, 2> ev = block2_eigenvalues(h, lo);
  const double scale = fro_norm(block2(h, lo));
  const bool nonreal = std::min(ev[0].imag(), ev[1].imag()) > 1e-10 * scale;
  const RealMatrix& b0 = h.block(0);
  const double p = b0(lo, lo) - b0(lo + 1, lo + 1);
  const bool legal = p * p + 4.0 * b0(lo, lo + 1) * b0(lo + 1, lo) < 0.0;
  if (nonreal && legal) return true;

  // Split with a unitary whose first column is an eigenvector.
  const Complex lambda = ev[0];
  ComplexMatrix chi = complex_adjoint(block2(h, lo));
  for (Index i = 0; i < 4; ++i) chi(i, i) -= lambda;
  const std::vector<Complex> z = null_vector(chi);
  // [u; w] -> x = u - conj(w) j
  const Quaternion x1(z[0].real(), z[0].imag(), -z[2].real(), z[2].imag());
  const Quaternion x2(z[1].real(), z[1].imag(), -z[3].real(), z[3].imag());
  const GivensQ g = make_givens(x1, x2, GivensVariant::G2);
  apply_givens_left(h, g, lo, lo + 1, {lo, f.col1}, Trans::Adjoint);
  apply_givens_right(h, g, {f.row0, lo + 2}, lo, lo + 1, Trans::None);
  if (w) apply_givens_right(*w, g, {0, w->rows()}, lo, lo + 1, Trans::None);
  kern::put_zero(h, lo + 1, lo);
  return false;
}

}  // namespace

SchurResult jrs_schur(const QuatMatrix& h0, const SchurOptions& opts,
                      std::optional<QuatMatrix> w0) {
  if (!h0.square()) throw std::invalid_argument("jrs_schur: matrix must be square");
  const StructureCheck sc = check_structure(h0, StructureKind::UpperJRSHessenberg, 0.0);
  if (!sc.ok) {
    throw std::invalid_argument("jrs_schur: input is not upper JRS-Hessenberg, block B" +
                                std::to_string(sc.block) + " entry (" + std::to_string(sc.row) +
                                "," + std::to_string(sc.col) + ")");
  }
  const Index n = h0.rows();
  SchurResult res;
  res.T = h0;
  QuatMatrix& h = res.T;
  if (opts.accumulate) res.W = w0 ? std::move(*w0) : QuatMatrix::identity(n);
  QuatMatrix* w = res.W ? &*res.W : nullptr;
  if (w && w->cols() != n) throw std::invalid_argument("jrs_schur: accumulator size mismatch");

  const int budget = opts.max_sweeps > 0 ? opts.max_sweeps : static_cast<int>(30 * n);
  const double hnorm = fro_norm(h);
  std::vector<std::pair<Index, int>> blocks;
  Index hi = n - 1;
  int since_deflation = 0;

  while (hi >= 0) {
    Index l = hi;
    for (; l > 0; --l) {
      const double sub = std::abs(h.block(0)(l, l - 1));
      double ref = abs(h(l, l)) + abs(h(l - 1, l - 1));
      if (ref == 0.0) ref = hnorm;
      if (sub <= kTiny || sub < opts.tol * ref) {
        kern::put_zero(h, l, l - 1);
        break;
      }
    }
    const Frame f{n, opts.full_t ? 0 : l, opts.full_t ? n : hi + 1};
    if (l == hi) {
      blocks.push_back({hi, 1});
      --hi;
      since_deflation = 0;
      continue;
    }
    if (l == hi - 1) {
      if (resolve_2x2(h, w, l, f)) {
        blocks.push_back({l, 2});
      } else {
        blocks.push_back({hi, 1});
        blocks.push_back({l, 1});
      }
      hi -= 2;
      since_deflation = 0;
      continue;
    }
    if (res.iterations >= budget) break;

    ShiftPair s;
    ++since_deflation;
    if (opts.exceptional_after > 0 && since_deflation % opts.exceptional_after == 0) {
      const double kappa = std::abs(h.block(0)(hi, hi - 1)) + std::abs(h.block(0)(hi - 1, hi - 2));
      s = shift_from(Complex(kappa, 0.0));
    } else {
      s = trailing_shift(h, hi - 1, hi);
    }
    francis_step(h, {l, hi + 1}, s.t, s.d, w, opts.full_t);
    ++res.iterations;
    if (opts.on_step) opts.on_step(h, DeflationState{l, n - 1 - hi, {l, hi + 1}});
  }

  res.converged = hi < 0;
  std::sort(blocks.begin(), blocks.end());
  for (const auto& b : blocks) res.blocks.push_back(b.second);
  return res;
}

SchurResult jrs_schur(const QuatMatrix& h, double tol, int max_sweeps) {
  SchurOptions o;
  o.tol = tol;
  o.max_sweeps = max_sweeps;
  return jrs_schur(h, o);
}

SchurResult quaternion_schur(const QuatMatrix& q, const SchurOptions& opts) {
  if (!q.square()) throw std::invalid_argument("quaternion_schur: matrix must be square");
  HessenbergResult hr = hess_reduce(q, HessMethod::ViaH3, opts.accumulate);
  return jrs_schur(hr.H, opts, std::move(hr.W));
}

SchurResult quaternion_schur(const QuatMatrix& q, double tol, int max_sweeps) {
  SchurOptions o;
  o.tol = tol;
  o.max_sweeps = max_sweeps;
  return quaternion_schur(q, o);
}

}  // namespace quatla
