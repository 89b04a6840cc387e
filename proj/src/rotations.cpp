#include "quatla/rotations.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "kernels.hpp"
#include "quatla/opcount.hpp"

namespace quatla {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Quaternion unit_phase(const Quaternion& q) {
  const double m = kern::entry_abs(q);
  if (m == 0.0) return 1.0;
  ops::count(4, 0, 1);
  return q / m;
}

void check_range(const QuatMatrix& a, Range rows, Range cols, const char* what) {
  if (rows.begin < 0 || cols.begin < 0 || rows.end > a.rows() || cols.end > a.cols() ||
      rows.begin > rows.end || cols.begin > cols.end) {
    throw std::out_of_range(std::string(what) + ": range [" + std::to_string(rows.begin) + "," +
                            std::to_string(rows.end) + ")x[" + std::to_string(cols.begin) + "," +
                            std::to_string(cols.end) + ") outside " + std::to_string(a.rows()) +
                            "x" + std::to_string(a.cols()));
  }
}

// Unit real vector u and beta with (I - beta u u^T) yt = r v, r = |yt| and
// yt, v real. Returns beta = 0 when yt already equals r v.
double real_reflector(const std::vector<double>& yt, std::span<const double> v, double r,
                      std::vector<double>& u) {
  const std::size_t m = yt.size();
  u.assign(m, 0.0);
  double vy = 0.0;
  for (std::size_t i = 0; i < m; ++i) vy += v[i] * yt[i];
  double dist2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = yt[i] - r * v[i];
    dist2 += d * d;
  }
  ops::count(4 * m, 3 * m);
  if (std::sqrt(dist2) <= kEps * r) return 0.0;
  if (vy > 0.0) {
    // Component along v computed without cancellation.
    double perp2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      u[i] = yt[i] - vy * v[i];
      perp2 += u[i] * u[i];
    }
    const double c = -perp2 / (vy + r);
    for (std::size_t i = 0; i < m; ++i) u[i] += c * v[i];
    ops::count(4 * m + 1, 3 * m + 1, 1);
  } else {
    for (std::size_t i = 0; i < m; ++i) u[i] = yt[i] - r * v[i];
    ops::count(m, m);
  }
  double nu = 0.0;
  for (double x : u) nu += x * x;
  nu = std::sqrt(nu);
  for (double& x : u) x /= nu;
  ops::count(m, m, m, 1);
  return 2.0;
}

}  // namespace

HouseholderQ make_householder(std::span<const Quaternion> y, HouseholderVariant variant,
                              std::span<const double> v) {
  const std::size_t m = y.size();
  if (m == 0) throw std::invalid_argument("make_householder: empty vector");
  if (v.size() != m) throw std::invalid_argument("make_householder: direction length mismatch");
  double vn = 0.0;
  for (double x : v) vn += x * x;
  if (std::abs(vn - 1.0) > 1e-12) throw std::invalid_argument("make_householder: v must be unit");

  double ny2 = 0.0;
  for (const auto& q : y) ny2 += norm2(q);
  const double ny = std::sqrt(ny2);
  ops::count(4 * m, 4 * m - 1, 0, 1);
  if (ny == 0.0) throw std::invalid_argument("make_householder: y = 0 has no direction");

  HouseholderQ h;
  h.variant = variant;
  h.u.assign(m, Quaternion{});

  // s = y^T v
  Quaternion s;
  for (std::size_t i = 0; i < m; ++i) s += y[i] * v[i];
  ops::count(4 * m, 4 * m);

  auto aligned = [&](const Quaternion& alpha) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) d2 += norm2(y[i] - alpha * v[i]);
    return std::sqrt(d2) <= kEps * ny;
  };

  switch (variant) {
    case HouseholderVariant::H1:
    case HouseholderVariant::H4: {
      const double as = kern::entry_abs(s);
      if (aligned(s) && std::abs(as - ny) <= 4 * kEps * ny) {
        // y is already a multiple alpha v with |alpha| = |y|.
        if (variant == HouseholderVariant::H4 && !(s == Quaternion(ny))) {
          const Quaternion g = conj(unit_phase(s));
          h.phases.assign(m, Quaternion(1.0));
          for (std::size_t i = 0; i < m; ++i)
            if (v[i] != 0.0) h.phases[i] = g;
        }
        return h;
      }
      const Quaternion alpha = as > 0.0 ? -(s / as) * ny : Quaternion(ny);
      double nu2 = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        h.u[i] = y[i] - alpha * v[i];
        nu2 += norm2(h.u[i]);
      }
      const double nu = std::sqrt(nu2);
      for (auto& q : h.u) q = q / nu;
      h.beta = 2.0;
      ops::count(4 * m + 4 + 4 * m, 8 * m, 1 + 4 * m, 1);
      if (variant == HouseholderVariant::H4) {
        // z = H1 y = alpha v; G maps each z_l to |y| v_l.
        const Quaternion g = conj(alpha) / ny;
        ops::count(0, 0, 4);
        h.phases.assign(m, Quaternion(1.0));
        for (std::size_t i = 0; i < m; ++i)
          if (v[i] != 0.0) h.phases[i] = g;
      }
      return h;
    }
    case HouseholderVariant::H2: {
      if (aligned(Quaternion(ny))) return h;
      const double as = kern::entry_abs(s);
      h.xi = as > 0.0 ? -(s / as) : Quaternion(1.0);
      // u = (y - xi |y| v) / sqrt(|y| (|y| + |s|)), then scaled to unit length.
      const double scale = 1.0 / std::sqrt(2.0 * ny * (ny + as));
      const Quaternion xt = h.xi * ny;
      for (std::size_t i = 0; i < m; ++i) h.u[i] = (y[i] - xt * v[i]) * scale;
      h.beta = 2.0;
      ops::count(4 + 4 + 8 * m + 3, 4 * m + 1, 5, 1);
      return h;
    }
    case HouseholderVariant::H3: {
      h.phases.assign(m, Quaternion(1.0));
      std::vector<double> yt(m);
      for (std::size_t i = 0; i < m; ++i) {
        const double a = kern::entry_abs(y[i]);
        yt[i] = a;
        if (a > 0.0) {
          h.phases[i] = conj(y[i]) / a;
          ops::count(0, 0, 4);
        }
      }
      std::vector<double> u;
      h.beta = real_reflector(yt, v, ny, u);
      for (std::size_t i = 0; i < m; ++i) h.u[i] = Quaternion(u[i]);
      bool trivial = true;
      for (const auto& p : h.phases) trivial = trivial && p == Quaternion(1.0);
      if (trivial) h.phases.clear();
      return h;
    }
  }
  return h;
}

HouseholderQ make_householder(std::span<const Quaternion> y, HouseholderVariant variant) {
  std::vector<double> e1(y.size(), 0.0);
  if (!e1.empty()) e1[0] = 1.0;
  return make_householder(y, variant, e1);
}

namespace {

std::vector<double> real_parts(const HouseholderQ& h) {
  std::vector<double> u(h.u.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = h.u[i].w;
  return u;
}

void reflect_left(QuatMatrix& a, const HouseholderQ& h, Range rows, Range cols) {
  if (h.beta == 0.0) return;
  if (h.variant == HouseholderVariant::H3) {
    const std::vector<double> u = real_parts(h);
    kern::reflect_left_r(a, u.data(), h.beta, rows.begin, rows.size(), cols);
  } else {
    kern::reflect_left_q(a, h.u.data(), h.beta, rows.begin, rows.size(), cols);
  }
}

void reflect_right(QuatMatrix& a, const HouseholderQ& h, Range rows, Range cols) {
  if (h.beta == 0.0) return;
  if (h.variant == HouseholderVariant::H3) {
    const std::vector<double> u = real_parts(h);
    kern::reflect_right_r(a, u.data(), h.beta, rows, cols.begin, cols.size());
  } else {
    kern::reflect_right_q(a, h.u.data(), h.beta, rows, cols.begin, cols.size());
  }
}

std::vector<Quaternion> conj_all(const std::vector<Quaternion>& p) {
  std::vector<Quaternion> c(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) c[i] = conj(p[i]);
  return c;
}

void phase_left(QuatMatrix& a, const std::vector<Quaternion>& p, Range rows, Range cols) {
  if (p.empty()) return;
  kern::scale_rows_left(a, p.data(), rows.begin, rows.size(), cols);
}

void phase_right(QuatMatrix& a, const std::vector<Quaternion>& p, Range rows, Range cols) {
  for (Index jj = 0; jj < static_cast<Index>(p.size()); ++jj)
    kern::scale_col_right(a, cols.begin + jj, p[static_cast<std::size_t>(jj)], rows);
}

void scalar_left(QuatMatrix& a, const Quaternion& q, Range rows, Range cols) {
  if (q == Quaternion(1.0)) return;
  const std::vector<Quaternion> p(static_cast<std::size_t>(rows.size()), q);
  phase_left(a, p, rows, cols);
}

void scalar_right(QuatMatrix& a, const Quaternion& q, Range rows, Range cols) {
  if (q == Quaternion(1.0)) return;
  for (Index j = cols.begin; j < cols.end; ++j) kern::scale_col_right(a, j, q, rows);
}

}  // namespace

void apply_householder_left(QuatMatrix& a, const HouseholderQ& h, Range rows, Range cols,
                            Trans t) {
  check_range(a, rows, cols, "apply_householder_left");
  if (rows.size() != h.size()) throw std::invalid_argument("apply_householder_left: size mismatch");
  const bool adj = t == Trans::Adjoint;
  switch (h.variant) {
    case HouseholderVariant::H1:
      reflect_left(a, h, rows, cols);
      break;
    case HouseholderVariant::H2:
      // U = conj(xi) R, U* = R xi.
      if (adj) {
        scalar_left(a, h.xi, rows, cols);
        reflect_left(a, h, rows, cols);
      } else {
        reflect_left(a, h, rows, cols);
        scalar_left(a, conj(h.xi), rows, cols);
      }
      break;
    case HouseholderVariant::H3: {
      // U = R G, U* = G* R.
      if (h.phases.empty()) {
        reflect_left(a, h, rows, cols);
        break;
      }
      const std::vector<double> u = real_parts(h);
      const std::vector<Quaternion> p = adj ? conj_all(h.phases) : h.phases;
      if (adj) {
        kern::phase_reflect_left_r<true>(a, p.data(), u.data(), h.beta, rows.begin, rows.size(),
                                         cols);
      } else {
        kern::phase_reflect_left_r<false>(a, p.data(), u.data(), h.beta, rows.begin, rows.size(),
                                          cols);
      }
      break;
    }
    case HouseholderVariant::H4:
      // U = G R, U* = R G*.
      if (adj) {
        phase_left(a, conj_all(h.phases), rows, cols);
        reflect_left(a, h, rows, cols);
      } else {
        reflect_left(a, h, rows, cols);
        phase_left(a, h.phases, rows, cols);
      }
      break;
  }
}

void apply_householder_right(QuatMatrix& a, const HouseholderQ& h, Range rows, Range cols,
                             Trans t) {
  check_range(a, rows, cols, "apply_householder_right");
  if (cols.size() != h.size()) throw std::invalid_argument("apply_householder_right: size mismatch");
  const bool adj = t == Trans::Adjoint;
  switch (h.variant) {
    case HouseholderVariant::H1:
      reflect_right(a, h, rows, cols);
      break;
    case HouseholderVariant::H2:
      // A U = (A conj(xi)) R, A U* = (A R) xi.
      if (adj) {
        reflect_right(a, h, rows, cols);
        scalar_right(a, h.xi, rows, cols);
      } else {
        scalar_right(a, conj(h.xi), rows, cols);
        reflect_right(a, h, rows, cols);
      }
      break;
    case HouseholderVariant::H3:
      // A U = (A R) G, A U* = (A G*) R.
      if (adj && !h.phases.empty()) {
        const std::vector<double> u = real_parts(h);
        const std::vector<Quaternion> p = conj_all(h.phases);
        kern::phase_reflect_right_r(a, p.data(), u.data(), h.beta, rows, cols.begin, cols.size());
      } else if (adj) {
        reflect_right(a, h, rows, cols);
      } else {
        reflect_right(a, h, rows, cols);
        phase_right(a, h.phases, rows, cols);
      }
      break;
    case HouseholderVariant::H4:
      // A U = (A G) R, A U* = (A R) G*.
      if (adj) {
        reflect_right(a, h, rows, cols);
        phase_right(a, conj_all(h.phases), rows, cols);
      } else {
        phase_right(a, h.phases, rows, cols);
        reflect_right(a, h, rows, cols);
      }
      break;
  }
}

QuatMatrix householder_matrix(const HouseholderQ& h) {
  QuatMatrix u = QuatMatrix::identity(h.size());
  apply_householder_left(u, h, {0, h.size()}, {0, h.size()});
  return u;
}

std::array<double, 16> JRSGivens4::matrix() const {
  const double a0 = phase.w, a1 = phase.x, a2 = phase.y, a3 = phase.z;
  return {a0, a2, a1, a3,    //
          -a2, a0, a3, -a1,  //
          -a1, -a3, a0, a2,  //
          -a3, a1, -a2, a0};
}

JRSGivens4 jrs_givens4(const Quaternion& q) {
  JRSGivens4 g;
  g.modulus = kern::entry_abs(q);
  if (g.modulus > 0.0) {
    g.phase = q / g.modulus;
    ops::count(0, 0, 4);
  }
  return g;
}

GivensQ make_givens(const Quaternion& x1, const Quaternion& x2, GivensVariant variant) {
  const double n1sq = norm2(x1);
  const double n2sq = norm2(x2);
  const double nx = std::sqrt(n1sq + n2sq);
  ops::count(8, 7, 0, 1);
  if (nx == 0.0) throw std::invalid_argument("make_givens: x = 0");
  GivensQ g;
  g.variant = variant;
  const double inv = 1.0 / nx;
  ops::count(0, 0, 1);

  if (variant == GivensVariant::G2) {
    const bool x2_real = x2.x == 0.0 && x2.y == 0.0 && x2.z == 0.0;
    const double a1 = std::sqrt(n1sq);
    const double a2 = std::sqrt(n2sq);
    ops::count(0, 0, 0, 2);
    g.g11 = x1 * inv;
    ops::count(4, 0);
    if (x2_real) {
      g.g21 = Quaternion(x2.w * inv);
      ops::count(1, 0);
    } else {
      g.g21 = x2 * inv;
      ops::count(4, 0);
    }
    if (a1 <= a2) {
      // g12 = |g21|, g22 = -|g21| g21^{-*} conj(g11) = -g21 conj(g11) / |g21|
      g.g12 = Quaternion(a2 * inv);
      ops::count(1, 0);
      if (x2_real) {
        g.g22 = x2.w > 0 ? -conj(g.g11) : conj(g.g11);
      } else {
        const double c = -1.0 / (a2 * inv);
        g.g22 = (g.g21 * conj(g.g11)) * c;
        ops::count(16 + 1 + 4, 12, 1);
      }
    } else {
      // g22 = |g11|, g12 = -|g11| g11^{-*} conj(g21) = -g11 conj(g21) / |g11|
      g.g22 = Quaternion(a1 * inv);
      ops::count(1, 0);
      const double c = -1.0 / (a1 * inv);
      ops::count(1, 0, 1);
      if (x2_real) {
        g.g12 = g.g11 * (g.g21.w * c);
        ops::count(5, 0);
      } else {
        g.g12 = (g.g11 * conj(g.g21)) * c;
        ops::count(16 + 4, 12);
      }
    }
    return g;
  }

  // G1: c = sigma conj(x1)/|x|, s = -sigma conj(x2)/|x|, G = [[conj(c), s], [-conj(s), c]].
  // sigma = (x1 + x2)/|x1 + x2| when x1, x2 are independent over the reals, else 1.
  const double dot = x1.w * x2.w + x1.x * x2.x + x1.y * x2.y + x1.z * x2.z;
  const double gram = n1sq * n2sq - dot * dot;
  ops::count(6, 4);
  Quaternion sigma = 1.0;
  if (gram > 64 * kEps * n1sq * n2sq) {
    const Quaternion sum = x1 + x2;
    const double as = std::sqrt(norm2(sum));
    sigma = sum / as;
    ops::count(4, 7, 4, 1);
  }
  const Quaternion c = (sigma * conj(x1)) * inv;
  const Quaternion s = -(sigma * conj(x2)) * inv;
  ops::count(2 * 16 + 8, 2 * 12);
  g.sigma = sigma;
  g.g11 = conj(c);
  g.g12 = s;
  g.g21 = -conj(s);
  g.g22 = c;
  return g;
}

void apply_givens_left(QuatMatrix& a, const GivensQ& g, Index i, Index k, Range cols, Trans t) {
  check_range(a, {std::min(i, k), std::max(i, k) + 1}, cols, "apply_givens_left");
  Quaternion m11 = g.g11, m12 = g.g12, m21 = g.g21, m22 = g.g22;
  if (t == Trans::Adjoint) {
    m11 = conj(g.g11);
    m12 = conj(g.g21);
    m21 = conj(g.g12);
    m22 = conj(g.g22);
  }
  kern::Blocks A(a);
  for (Index j = cols.begin; j < cols.end; ++j) {
    const Quaternion ri = A.get(i, j);
    const Quaternion rk = A.get(k, j);
    A.put(i, j, m11 * ri + m12 * rk);
    A.put(k, j, m21 * ri + m22 * rk);
  }
  ops::count(64 * kern::u64(cols.size()), 56 * kern::u64(cols.size()));
}

void apply_givens_right(QuatMatrix& a, const GivensQ& g, Range rows, Index i, Index k, Trans t) {
  check_range(a, rows, {std::min(i, k), std::max(i, k) + 1}, "apply_givens_right");
  Quaternion m11 = g.g11, m12 = g.g12, m21 = g.g21, m22 = g.g22;
  if (t == Trans::Adjoint) {
    m11 = conj(g.g11);
    m12 = conj(g.g21);
    m21 = conj(g.g12);
    m22 = conj(g.g22);
  }
  kern::Blocks A(a);
  for (Index r = rows.begin; r < rows.end; ++r) {
    const Quaternion ci = A.get(r, i);
    const Quaternion ck = A.get(r, k);
    A.put(r, i, ci * m11 + ck * m21);
    A.put(r, k, ci * m12 + ck * m22);
  }
  ops::count(64 * kern::u64(rows.size()), 56 * kern::u64(rows.size()));
}

}  // namespace quatla
