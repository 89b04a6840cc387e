#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "quatla/hessenberg.hpp"
#include "quatla/schur.hpp"
#include "quatla/spectra.hpp"
#include "test_util.hpp"

using namespace quatla;
using namespace quatla::testing;

namespace {

SpectrumReport report(std::initializer_list<StdEigenvalue> v) {
  SpectrumReport r;
  r.values = v;
  return r;
}

}  // namespace

TEST(Standardize, Examples) {
  EXPECT_EQ(standardize(Quaternion(1, 1, 2, 2)), (StdEigenvalue{1, 3}));
  EXPECT_EQ(standardize(Quaternion(5.0)), (StdEigenvalue{5, 0}));
  EXPECT_EQ(standardize(Quaternion(2, -4, 0, 0)), (StdEigenvalue{2, 4}));
  EXPECT_EQ(standardize(Complex(0.5, 2.0)), (StdEigenvalue{0.5, 2.0}));
}

TEST(Standardize, ClassInvariance) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const Quaternion lam = random_quat(rng);
    Quaternion beta = random_quat(rng);
    beta = beta / abs(beta);
    const StdEigenvalue a = standardize(lam);
    const StdEigenvalue b = standardize(conj(beta) * lam * beta);
    EXPECT_NEAR(a.re, b.re, 8 * kEps * abs(lam));
    EXPECT_NEAR(a.im, b.im, 8 * kEps * abs(lam));
  }
}

TEST(EigsFromSchur, Examples) {
  SchurResult s;
  s.converged = true;
  s.T = QuatMatrix(3, 3);
  s.T.set(0, 0, 1.0);
  s.T.set(1, 1, 2.0);
  s.T.set(2, 2, 3.0);
  s.blocks = {1, 1, 1};
  EXPECT_EQ(spectrum_distance(eigs_from_schur(s), report({{1, 0}, {2, 0}, {3, 0}})), 0.0);

  s.T = QuatMatrix(2, 2);
  s.T.set(0, 1, 1.0);
  s.T.set(1, 0, -1.0);
  s.blocks = {2};
  EXPECT_LE(spectrum_distance(eigs_from_schur(s), report({{0, 1}, {0, 1}})), 1e-14);

  s.T = QuatMatrix(1, 1);
  s.T.set(0, 0, Quaternion::j());
  s.blocks = {1};
  EXPECT_EQ(eigs_from_schur(s).values[0], (StdEigenvalue{0, 1}));

  s.converged = false;
  EXPECT_THROW(eigs_from_schur(s), std::invalid_argument);
}

TEST(Eigvals, Examples) {
  const SpectrumReport id = eigvals(QuatMatrix::identity(4));
  ASSERT_EQ(id.values.size(), 4u);
  for (const auto& e : id.values) EXPECT_EQ(e, (StdEigenvalue{1, 0}));

  QuatMatrix d(3, 3);
  d.set(0, 0, Quaternion::i());
  d.set(1, 1, Quaternion::j());
  d.set(2, 2, Quaternion::k());
  EXPECT_LE(spectrum_distance(eigvals(d), report({{0, 1}, {0, 1}, {0, 1}})), 1e-15);

  const QuatMatrix q = random_matrix(10, 2);
  EXPECT_LE(spectrum_distance(eigvals(q), oracle_eigvals(q)), 1e-8);
}

TEST(Eigvals, NonConvergenceWithholdsValues) {
  const SpectrumReport r = eigvals(random_matrix(10, 3), 1e-14, 1);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(r.values.empty());
}

TEST(Oracle, Examples) {
  QuatMatrix one(1, 1);
  one.set(0, 0, -2.5);
  EXPECT_EQ(oracle_eigvals(one).values[0], (StdEigenvalue{-2.5, 0}));

  QuatMatrix rot(2, 2);
  rot.set(0, 1, 1.0);
  rot.set(1, 0, -1.0);
  EXPECT_LE(spectrum_distance(oracle_eigvals(rot), report({{0, 1}, {0, 1}})), 1e-14);

  const QuatMatrix h = random_hermitian(9, 4);
  for (const auto& e : oracle_eigvals(h).values) EXPECT_LE(e.im, 1e-10);
  EXPECT_EQ(oracle_eigvals(h).source, SpectrumSource::OraclePath);
}

TEST(Oracle, SizeCap) {
  EXPECT_THROW(oracle_eigvals(random_matrix(6, 5), 5), std::invalid_argument);
  EXPECT_THROW(oracle_eigvals(random_matrix(2, 3, 5)), std::invalid_argument);
}

TEST(Distance, Examples) {
  EXPECT_EQ(spectrum_distance(report({{1, 0}, {2, 3}}), report({{1, 0}, {2, 3}})), 0.0);
  EXPECT_DOUBLE_EQ(spectrum_distance(report({{1, 0}}), report({{1.5, 0}})), 0.5);
  EXPECT_EQ(spectrum_distance(report({{0, 1}, {2, 0}}), report({{2, 0}, {0, 1}})), 0.0);
  EXPECT_THROW(spectrum_distance(report({{0, 1}}), report({})), std::invalid_argument);
}

TEST(Distance, OptimalNotGreedy) {
  // Greedy nearest matching pairs 1.0 with 1.1 and leaves 0 with 2.0.
  EXPECT_NEAR(spectrum_distance(report({{0, 0}, {1, 0}}), report({{1.1, 0}, {2.0, 0}})), 1.1, 1e-15);
}

TEST(Agreement, RandomOrders) {
  for (Index n : {2, 5, 10, 25, 50}) {
    const QuatMatrix q = random_matrix(n, 40 + n);
    EXPECT_LE(spectrum_distance(eigvals(q), oracle_eigvals(q)), 1e-7 * fro_norm(q)) << n;
  }
}

TEST(Agreement, UnitarySimilarityInvariance) {
  const QuatMatrix q = random_matrix(12, 6);
  const QuatMatrix w = random_unitary(12, 7);
  const QuatMatrix q2 = mat_mul(mat_mul(adjoint(w), q), w);
  EXPECT_LE(spectrum_distance(eigvals(q), eigvals(q2)), 1e-7);
}

TEST(Oracle, EveryValueHasConjugatePartner) {
  // Reconstructing the adjoint spectrum from the pairs reproduces a closed set.
  const QuatMatrix q = random_matrix(8, 8);
  const SpectrumReport r = oracle_eigvals(q);
  ASSERT_EQ(r.values.size(), 8u);
  for (const auto& e : r.values) EXPECT_GE(e.im, 0.0);
  const SpectrumReport s = oracle_eigvals(hess_reduce(q, HessMethod::ViaH3, false).H);
  EXPECT_LE(spectrum_distance(r, s), 1e-8 * fro_norm(q));
}
