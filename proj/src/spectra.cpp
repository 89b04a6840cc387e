#include "quatla/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "quatla/qcore.hpp"

namespace quatla {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// ---- independent dense complex eigensolver ----

void householder_hessenberg(ComplexMatrix& a) {
  const Index n = a.rows();
  std::vector<Complex> v(static_cast<std::size_t>(n));
  for (Index k = 0; k + 2 < n; ++k) {
    double xn = 0.0;
    for (Index i = k + 1; i < n; ++i) xn += std::norm(a(i, k));
    xn = std::sqrt(xn);
    if (xn == 0.0) continue;
    const Complex x0 = a(k + 1, k);
    const Complex ph = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    const Complex alpha = -ph * xn;
    const Index m = n - k - 1;
    for (Index i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = a(k + 1 + i, k);
    v[0] -= alpha;
    double vn = 0.0;
    for (Index i = 0; i < m; ++i) vn += std::norm(v[static_cast<std::size_t>(i)]);
    vn = std::sqrt(vn);
    if (vn == 0.0) continue;
    for (Index i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] /= vn;
    // A <- (I - 2 v v*) A
    for (Index j = k; j < n; ++j) {
      Complex s = 0.0;
      for (Index i = 0; i < m; ++i) s += std::conj(v[static_cast<std::size_t>(i)]) * a(k + 1 + i, j);
      s *= 2.0;
      for (Index i = 0; i < m; ++i) a(k + 1 + i, j) -= v[static_cast<std::size_t>(i)] * s;
    }
    // A <- A (I - 2 v v*)
    for (Index i = 0; i < n; ++i) {
      Complex s = 0.0;
      for (Index jj = 0; jj < m; ++jj) s += a(i, k + 1 + jj) * v[static_cast<std::size_t>(jj)];
      s *= 2.0;
      for (Index jj = 0; jj < m; ++jj) a(i, k + 1 + jj) -= s * std::conj(v[static_cast<std::size_t>(jj)]);
    }
    a(k + 1, k) = alpha;
    for (Index i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Plane rotation [[c, s], [-conj(s), c]] with c real sending (f, g) to (r, 0).
void rotation(Complex f, Complex g, double& c, Complex& s) {
  const double af = std::abs(f), ag = std::abs(g);
  if (ag == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (af == 0.0) {
    c = 0.0;
    s = std::conj(g) / ag;
    return;
  }
  const double r = std::hypot(af, ag);
  c = af / r;
  s = (f / af) * std::conj(g) / r;
}

void rotate(ComplexMatrix& a, Index p, Index lo, Index hi, Index row0, Index row1, double c,
            Complex s) {
  for (Index j = lo; j <= hi; ++j) {
    const Complex x = a(p, j), y = a(p + 1, j);
    a(p, j) = c * x + s * y;
    a(p + 1, j) = -std::conj(s) * x + c * y;
  }
  for (Index i = row0; i <= row1; ++i) {
    const Complex x = a(i, p), y = a(i, p + 1);
    a(i, p) = c * x + std::conj(s) * y;
    a(i, p + 1) = -s * x + c * y;
  }
}

Complex wilkinson(const ComplexMatrix& a, Index hi) {
  const Complex p = a(hi - 1, hi - 1), b = a(hi - 1, hi), c = a(hi, hi - 1), d = a(hi, hi);
  const Complex tr = p + d;
  const Complex det = p * d - b * c;
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  const Complex r1 = 0.5 * (tr + disc), r2 = 0.5 * (tr - disc);
  return std::abs(r1 - d) < std::abs(r2 - d) ? r1 : r2;
}

// Single-shift implicit QR on a Hessenberg matrix. Returns false when an
// eigenvalue needs more than 60 steps.
bool complex_qr(ComplexMatrix& a, std::vector<Complex>& ev) {
  const Index n = a.rows();
  ev.assign(static_cast<std::size_t>(n), 0.0);
  Index hi = n - 1;
  int its = 0;
  while (hi >= 0) {
    Index l = hi;
    for (; l > 0; --l) {
      const double ref = std::abs(a(l, l)) + std::abs(a(l - 1, l - 1));
      if (std::abs(a(l, l - 1)) <= kEps * ref || std::abs(a(l, l - 1)) < std::numeric_limits<double>::min()) {
        a(l, l - 1) = 0.0;
        break;
      }
    }
    if (l == hi) {
      ev[static_cast<std::size_t>(hi)] = a(hi, hi);
      --hi;
      its = 0;
      continue;
    }
    if (++its > 60) return false;
    const Complex mu = (its % 11 == 0) ? a(hi, hi) + 0.75 * std::abs(a(hi, hi - 1)) : wilkinson(a, hi);
    double c;
    Complex s;
    rotation(a(l, l) - mu, a(l + 1, l), c, s);
    rotate(a, l, l, hi, l, std::min(l + 2, hi), c, s);
    for (Index k = l + 1; k < hi; ++k) {
      rotation(a(k, k - 1), a(k + 1, k - 1), c, s);
      rotate(a, k, k - 1, hi, l, std::min(k + 2, hi), c, s);
      a(k + 1, k - 1) = 0.0;
    }
  }
  return true;
}

bool adjoint_eigenvalues(const QuatMatrix& q, std::vector<Complex>& ev) {
  ComplexMatrix a = complex_adjoint(q);
  householder_hessenberg(a);
  return complex_qr(a, ev);
}

// Pairs conjugates in a conjugate-closed list and keeps the nonnegative member.
std::vector<StdEigenvalue> pair_conjugates(std::vector<Complex> z, double scale) {
  std::vector<StdEigenvalue> out;
  out.reserve(z.size() / 2);
  std::sort(z.begin(), z.end(), [](Complex a, Complex b) { return a.imag() > b.imag(); });
  std::vector<bool> used(z.size(), false);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const Complex target = std::conj(z[i]);
    std::size_t best = z.size();
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (used[k]) continue;
      const double dk = std::abs(z[k] - target);
      if (dk < bd) {
        bd = dk;
        best = k;
      }
    }
    Complex b = target;
    if (best < z.size()) {
      used[best] = true;
      b = z[best];
    }
    StdEigenvalue e{0.5 * (z[i].real() + b.real()), std::abs(0.5 * (z[i].imag() - b.imag()))};
    if (e.im < 1e-13 * scale) e.im = 0.0;
    out.push_back(e);
  }
  return out;
}

}  // namespace

StdEigenvalue standardize(const Quaternion& q) { return {q.w, imag_abs(q)}; }

StdEigenvalue standardize(Complex z) { return {z.real(), std::abs(z.imag())}; }

SpectrumReport eigs_from_schur(const SchurResult& s) {
  if (!s.converged) throw std::invalid_argument("eigs_from_schur: Schur iteration did not converge");
  SpectrumReport rep;
  rep.source = SpectrumSource::SchurPath;
  Index i = 0;
  for (int b : s.blocks) {
    if (b == 1) {
      rep.values.push_back(standardize(s.T(i, i)));
    } else {
      const QuatMatrix blk = submatrix(s.T, {i, i + 2}, {i, i + 2});
      std::vector<Complex> ev;
      if (!adjoint_eigenvalues(blk, ev))
        throw std::runtime_error("eigs_from_schur: 2x2 block eigenvalues did not converge");
      for (const StdEigenvalue& e : pair_conjugates(ev, fro_norm(blk))) rep.values.push_back(e);
    }
    i += b;
  }
  return rep;
}

SpectrumReport eigvals(const QuatMatrix& q, double tol, int max_sweeps) {
  SchurOptions o;
  o.tol = tol;
  o.max_sweeps = max_sweeps;
  o.accumulate = false;
  o.full_t = false;
  const SchurResult s = quaternion_schur(q, o);
  if (!s.converged) {
    SpectrumReport rep;
    rep.converged = false;
    return rep;
  }
  return eigs_from_schur(s);
}

SpectrumReport oracle_eigvals(const QuatMatrix& q, Index max_order) {
  if (!q.square()) throw std::invalid_argument("oracle_eigvals: matrix must be square");
  if (q.rows() > max_order) {
    throw std::invalid_argument("oracle_eigvals: order " + std::to_string(q.rows()) +
                                " exceeds cap " + std::to_string(max_order));
  }
  SpectrumReport rep;
  rep.source = SpectrumSource::OraclePath;
  std::vector<Complex> ev;
  if (!adjoint_eigenvalues(q, ev)) {
    rep.converged = false;
    return rep;
  }
  rep.values = pair_conjugates(ev, fro_norm(q));
  return rep;
}

namespace {

bool augment(std::size_t u, const std::vector<std::vector<std::size_t>>& adj,
             std::vector<std::size_t>& match_b, std::vector<bool>& seen) {
  for (std::size_t v : adj[u]) {
    if (seen[v]) continue;
    seen[v] = true;
    if (match_b[v] == SIZE_MAX || augment(match_b[v], adj, match_b, seen)) {
      match_b[v] = u;
      return true;
    }
  }
  return false;
}

bool perfect_within(const std::vector<double>& d, std::size_t n, double thr) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (d[i * n + j] <= thr) adj[i].push_back(j);
  std::vector<std::size_t> match_b(n, SIZE_MAX);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<bool> seen(n, false);
    if (!augment(u, adj, match_b, seen)) return false;
  }
  return true;
}

}  // namespace

double spectrum_distance(const SpectrumReport& a, const SpectrumReport& b) {
  const std::size_t n = a.values.size();
  if (b.values.size() != n) {
    throw std::invalid_argument("spectrum_distance: sizes differ (" + std::to_string(n) + " vs " +
                                std::to_string(b.values.size()) + ")");
  }
  if (n == 0) return 0.0;
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::abs(a.values[i].value() - b.values[j].value());
  std::vector<double> cand = d;
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (perfect_within(d, n, cand[mid])) hi = mid;
    else lo = mid + 1;
  }
  return cand[lo];
}

}  // namespace quatla
