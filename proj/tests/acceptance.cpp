// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "quatla/factor.hpp"
#include "quatla/hessenberg.hpp"
#include "quatla/opcount.hpp"
#include "quatla/qcore.hpp"
#include "quatla/qrbench.hpp"
#include "quatla/rotations.hpp"
#include "quatla/schur.hpp"
#include "quatla/spectra.hpp"
#include "test_util.hpp"

using namespace quatla;
using namespace quatla::testing;
using bench::Family;
using bench::matgen;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

QuatMatrix dense(Index n, std::uint64_t seed) { return matgen({Family::RandomDense, n, seed}); }

// 1. eigvals vs oracle on random dense matrices.
Outcome oracle_agreement() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int failures = 0;
  for (Index n : {2, 3, 5, 10, 25, 50}) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const QuatMatrix q = dense(n, 1000 * static_cast<std::uint64_t>(n) + s);
      const SpectrumReport a = eigvals(q);
      const SpectrumReport b = oracle_eigvals(q);
      if (!a.converged || !b.converged) {
        ++failures;
        continue;
      }
      const double rel = spectrum_distance(a, b) / fro_norm(q);
      worst = std::max(worst, rel);
      if (rel > 1e-7) ++failures;
    }
  }
  const double t = elapsed(t0);
  return {failures == 0 && t <= 120.0,
          fmt("worst distance/|Q| = %.2e (limit 1e-7), %.0f failures, %.1f s (limit 120 s)", worst,
              failures, t)};
}

std::vector<SchurResult> g_schur_results;

// 2. Schur backward error and orthogonality.
Outcome schur_backward_error() {
  double worst_res = 0.0, worst_orth = 0.0;
  bool ok = true;
  for (Index n : {8, 32, 64}) {
    const double lim = 200.0 * static_cast<double>(n) * kEps;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const QuatMatrix q = dense(n, 2000 + 100 * static_cast<std::uint64_t>(n) + s);
      SchurResult r = quaternion_schur(q);
      if (!r.converged) {
        ok = false;
        continue;
      }
      const double res = similarity_error(q, *r.W, r.T) / fro_norm(q);
      const double orth = unitarity_defect(*r.W);
      worst_res = std::max(worst_res, res / lim);
      worst_orth = std::max(worst_orth, orth / lim);
      ok = ok && res <= lim && orth <= lim;
      g_schur_results.push_back(std::move(r));
    }
  }
  return {ok, fmt("max residual = %.3f x limit, max |W*W - I| = %.3f x limit (limit 200 n eps)",
                  worst_res, worst_orth)};
}

// 3. Exact structure of Schur forms and of every Francis iterate.
Outcome structure_exactness() {
  int bad_schur = 0;
  for (const SchurResult& r : g_schur_results)
    if (!check_structure(r.T, StructureKind::JRSSchur, 0.0).ok) ++bad_schur;

  int steps = 0, bad_steps = 0;
  std::uint64_t seed = 3000;
  while (steps < 1000) {
    QuatMatrix h = hess_reduce(dense(10, seed++), HessMethod::ViaH3, false).H;
    for (int k = 0; k < 10 && steps < 1000; ++k) {
      bool reduced = false;
      for (Index i = 1; i < 10; ++i) reduced = reduced || h.block(0)(i, i - 1) == 0.0;
      if (reduced) break;
      const ShiftPair s = trailing_shift(h, 8, 9);
      francis_step(h, {0, 10}, s.t, s.d);
      ++steps;
      if (!check_structure(h, StructureKind::UpperJRSHessenberg, 0.0).ok) ++bad_steps;
    }
  }
  return {bad_schur == 0 && bad_steps == 0 && !g_schur_results.empty(),
          fmt("%.0f/%.0f Schur forms exact, %.0f/%.0f Francis iterates exact",
              static_cast<double>(g_schur_results.size() - static_cast<std::size_t>(bad_schur)),
              static_cast<double>(g_schur_results.size()), steps - bad_steps, steps)};
}

// 4. Hessenberg residual and backward accuracy.
Outcome hessenberg_reduction() {
  bool ok = true;
  double worst_re = 0.0, worst_be = 0.0;
  for (Index n : {16, 64, 128}) {
    for (const Family f : {Family::Toeplitz51, Family::RandomDense}) {
      const QuatMatrix q = matgen({f, n, 4000 + static_cast<std::uint64_t>(n)});
      for (HessMethod m : {HessMethod::ViaH1, HessMethod::ViaH2, HessMethod::ViaH3}) {
        const HessenbergResult r = hess_reduce(q, m, true);
        const double be = fro_norm(mat_mul(q, *r.W) - mat_mul(*r.W, r.H)) / fro_norm(q);
        const double lim = 100.0 * static_cast<double>(n) * kEps;
        worst_be = std::max(worst_be, be / lim);
        ok = ok && be <= lim;
        if (m != HessMethod::ViaH1) {
          const double re = bench::hessenberg_residual(r.H);
          worst_re = std::max(worst_re, re);
          ok = ok && re == 0.0;
        }
      }
    }
  }
  return {ok, fmt("ViaH2/ViaH3 max Re = %g (must be 0), max |QW - WH| = %.3f x limit (100 n eps |Q|)",
                  worst_re, worst_be)};
}

// 5. Implicit Q: equal first transform column gives entrywise-equal magnitudes.
Outcome implicit_q() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const QuatMatrix q = dense(8, 5000 + s);
    QuatMatrix z = QuatMatrix::identity(8);
    const QuatMatrix u = qr_full(dense(7, 5100 + s)).W;
    for (Index j = 0; j < 7; ++j)
      for (Index i = 0; i < 7; ++i) z.set(i + 1, j + 1, u(i, j));
    const QuatMatrix h1 = hess_reduce(q, HessMethod::ViaH3, false).H;
    const QuatMatrix h2 = hess_reduce(mat_mul(mat_mul(adjoint(z), q), z), HessMethod::ViaH3, false).H;
    for (Index j = 0; j < 8; ++j)
      for (Index i = 0; i < 8; ++i) worst = std::max(worst, std::abs(abs(h1(i, j)) - abs(h2(i, j))));
  }
  return {worst <= 1e-10, fmt("max ||H(i,j)| - |H'(i,j)|| = %.2e (limit 1e-10)", worst)};
}

// 6. G2 contract on random pairs.
Outcome givens_contract() {
  std::mt19937_64 rng(6000);
  double worst_tail = 0.0, worst_unit = 0.0, worst_lead = 0.0, min_branch = 1.0;
  for (int t = 0; t < 100000; ++t) {
    const Quaternion x1 = random_quat(rng), x2 = random_quat(rng);
    const GivensQ g = make_givens(x1, x2, GivensVariant::G2);
    const double nx = std::sqrt(norm2(x1) + norm2(x2));
    const Quaternion top = conj(g.g11) * x1 + conj(g.g21) * x2;
    const Quaternion bot = conj(g.g12) * x1 + conj(g.g22) * x2;
    worst_tail = std::max(worst_tail, abs(bot) / nx);
    worst_lead = std::max(worst_lead, abs(top - Quaternion(nx)) / nx);
    const Quaternion a = conj(g.g11) * g.g11 + conj(g.g21) * g.g21 - Quaternion(1.0);
    const Quaternion b = conj(g.g11) * g.g12 + conj(g.g21) * g.g22;
    const Quaternion c = conj(g.g12) * g.g12 + conj(g.g22) * g.g22 - Quaternion(1.0);
    worst_unit = std::max(worst_unit, std::sqrt(norm2(a) + 2 * norm2(b) + norm2(c)));
    if (abs(x1) <= abs(x2)) min_branch = std::min(min_branch, abs(g.g12));
  }
  const bool ok = worst_tail <= 1e-14 && worst_unit <= 1e-14 && worst_lead <= 1e-14 &&
                  min_branch >= std::sqrt(2.0) / 2 - 1e-12;
  return {ok, fmt("trailing/|x| = %.2e, lead error/|x| = %.2e, unitarity = %.2e, min |g12| = %.6f",
                  worst_tail, worst_lead, worst_unit, min_branch)};
}

// 7. Instrumented operation counts.
Outcome operation_counts() {
  if (!ops::enabled) return {false, "operation counting compiled out (QUATLA_OPCOUNT=OFF)"};
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  {
    const Index n = 100;
    const double n3 = static_cast<double>(n * n * n);
    const QuatMatrix q = dense(n, 7000);
    const struct {
      HessMethod m;
      const char* name;
      double lead;
    } cases[] = {{HessMethod::ViaH1, "ViaH1", 128.0 / 3},
                 {HessMethod::ViaH2, "ViaH2", 184.0 / 3},
                 {HessMethod::ViaH3, "ViaH3", 80.0 / 3}};
    for (const auto& c : cases) {
      ops::Scope sc;
      (void)hess_reduce(q, c.m, true);
      const double ratio = static_cast<double>(sc.elapsed().madds()) / (c.lead * n3);
      ok = ok && std::abs(ratio - 1.0) <= 0.15;
      detail += std::string(c.name) + fmt(" %.3f, ", ratio);
    }
  }
  {
    const Index n = 512;
    const QuatMatrix h = matgen({Family::RandomHessenberg, n, 7001});
    ops::Scope sc;
    (void)hess_qr(h);
    const double ratio = static_cast<double>(sc.elapsed().flops()) / (120.0 * n * n);
    ok = ok && std::abs(ratio - 1.0) <= 0.20;
    detail += fmt("hess_qr %.3f, ", ratio);
  }
  {
    const Index n = 200;
    QuatMatrix h = hess_reduce(dense(n, 7002), HessMethod::ViaH3, false).H;
    const ShiftPair s = trailing_shift(h, n - 2, n - 1);
    ops::Scope sc;
    francis_step(h, {0, n}, s.t, s.d);
    const double ratio = static_cast<double>(sc.elapsed().flops()) / (138.0 * n * n);
    ok = ok && ratio <= 1.2;
    detail += fmt("Francis step %.3f of 138 n^2 (limit 1.2)", ratio);
  }
  const double t = elapsed(t0);
  ok = ok && t <= 60.0;
  return {ok, "ratio to leading term: " + detail + fmt(", %.1f s", t)};
}

// 8. Hermitian and unitary inputs.
Outcome structured_classes() {
  double herm_im = 0.0, herm_off = 0.0, unit_dev = 0.0;
  bool ok = true;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const QuatMatrix h = matgen({Family::Hermitian, 16, 8000 + s});
    const SchurResult r = quaternion_schur(h);
    ok = ok && r.converged;
    if (!r.converged) continue;
    const double nq = fro_norm(h);
    for (const StdEigenvalue& e : eigs_from_schur(r).values) herm_im = std::max(herm_im, e.im / nq);
    for (Index j = 0; j < 16; ++j)
      for (Index i = 0; i < 16; ++i)
        if (i != j) herm_off = std::max(herm_off, abs(r.T(i, j)) / nq);
  }
  for (std::uint64_t s = 0; s < 10; ++s) {
    const QuatMatrix u = qr_full(dense(16, 8100 + s)).W;
    const SchurResult r = quaternion_schur(u);
    ok = ok && r.converged;
    if (!r.converged) continue;
    for (const StdEigenvalue& e : eigs_from_schur(r).values)
      unit_dev = std::max(unit_dev, std::abs(std::abs(e.value()) - 1.0));
    Index i = 0;
    for (int b : r.blocks) {
      if (b == 1) unit_dev = std::max(unit_dev, std::abs(abs(r.T(i, i)) - 1.0));
      i += b;
    }
  }
  ok = ok && herm_im <= 1e-10 && herm_off <= 1e-10 && unit_dev <= 1e-9;
  return {ok, fmt("Hermitian max |im|/|Q| = %.2e, max offdiag/|Q| = %.2e (limit 1e-10); "
                  "unitary max ||lambda| - 1| = %.2e (limit 1e-9)",
                  herm_im, herm_off, unit_dev)};
}

// 9. Time scaling of schur and hess.
Outcome scaling() {
  const std::vector<Index> grid{64, 128, 256, 512};
  std::vector<double> ns(grid.begin(), grid.end());
  auto slope_of = [&](bench::Task task, const std::string& method, double& t512) {
    bench::BenchSpec spec;
    spec.task = task;
    spec.methods = {method};
    spec.n_grid = grid;
    spec.seed = 9000;
    std::vector<double> ts;
    for (const auto& r : bench::run_bench(spec)) ts.push_back(r.wall_time_s);
    t512 = ts.back();
    return bench::loglog_slope(ns, ts);
  };
  double t_h3 = 0.0, t_h1 = 0.0, t_schur = 0.0;
  const double s_hess = slope_of(bench::Task::Hess, "h3", t_h3);
  const double s_schur = slope_of(bench::Task::Schur, "francis", t_schur);
  bench::BenchSpec h1;
  h1.task = bench::Task::Hess;
  h1.methods = {"h1"};
  h1.n_grid = {512};
  h1.seed = 9000;
  t_h1 = bench::run_bench(h1).front().wall_time_s;
  const bool ok = s_hess >= 2.5 && s_hess <= 3.5 && s_schur >= 2.5 && s_schur <= 3.5 && t_h3 < t_h1;
  return {ok, fmt("slope hess(h3) = %.2f, slope schur = %.2f (range [2.5, 3.5]); n=512 hess h3 %.2f s vs h1 %.2f s",
                  s_hess, s_schur, t_h3, t_h1)};
}

// 10. Francis step budget on n = 64.
Outcome convergence_budget() {
  const Index n = 64;
  int worst = 0, failures = 0;
  double total = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    SchurOptions o;
    o.accumulate = false;
    const SchurResult r = quaternion_schur(dense(n, 10000 + s), o);
    if (!r.converged || r.iterations > 6 * n) ++failures;
    worst = std::max(worst, r.iterations);
    total += r.iterations;
  }
  return {failures == 0, fmt("max steps = %.0f (limit %.0f), mean = %.1f (%.2f n)", worst, 6.0 * n,
                             total / 20, total / 20 / n) +
                             fmt(", non-converged or over budget: %.0f", failures)};
}

}  // namespace

int main() {
  const struct {
    int id;
    const char* name;
    std::function<Outcome()> run;
  } criteria[] = {
      {1, "oracle spectrum agreement", oracle_agreement},
      {2, "Schur backward error", schur_backward_error},
      {3, "structure exactness", structure_exactness},
      {4, "Hessenberg reduction", hessenberg_reduction},
      {5, "implicit Q property", implicit_q},
      {6, "Givens G2 contract", givens_contract},
      {7, "operation-count conformance", operation_counts},
      {8, "structured-class results", structured_classes},
      {9, "scaling", scaling},
      {10, "convergence budget", convergence_budget},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const Outcome o = c.run();
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
