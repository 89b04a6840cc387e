#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "quatla/factor.hpp"
#include "quatla/hessenberg.hpp"
#include "quatla/opcount.hpp"
#include "quatla/spectra.hpp"
#include "test_util.hpp"

using namespace quatla;
using namespace quatla::testing;

namespace {

void expect_real_nonneg_diagonal(const QuatMatrix& r) {
  for (Index i = 0; i < std::min(r.rows(), r.cols()); ++i) {
    EXPECT_GE(r.block(0)(i, i), 0.0);
    for (int k = 1; k < 4; ++k) EXPECT_EQ(r.block(k)(i, i), 0.0);
  }
}

}  // namespace

TEST(QRFull, Identity) {
  const QRResult f = qr_full(QuatMatrix::identity(4));
  EXPECT_EQ(f.W, QuatMatrix::identity(4));
  EXPECT_EQ(f.R, QuatMatrix::identity(4));
}

TEST(QRFull, TallColumn) {
  QuatMatrix a(2, 1);
  a.set(1, 0, 1.0);
  const QRResult f = qr_full(a);
  EXPECT_NEAR(f.R(0, 0).w, 1.0, 1e-15);
  EXPECT_EQ(f.R(1, 0), Quaternion(0.0));
  EXPECT_LE(fro_norm(a - mat_mul(f.W, f.R)), 4 * kEps);
}

TEST(QRFull, RandomRectangular) {
  const QuatMatrix a = random_matrix(6, 4, 1);
  const QRResult f = qr_full(a);
  EXPECT_LE(fro_norm(a - mat_mul(f.W, f.R)), 100 * 6 * kEps * fro_norm(a));
  EXPECT_LE(unitarity_defect(f.W), 100 * 6 * kEps);
  QuatMatrix sq(6, 6);
  for (int k = 0; k < 4; ++k)
    for (Index j = 0; j < 4; ++j)
      for (Index i = 0; i < 6; ++i) sq.block(k)(i, j) = f.R.block(k)(i, j);
  EXPECT_TRUE(check_structure(sq, StructureKind::UpperJRSTriangular, 0.0).ok);
  expect_real_nonneg_diagonal(f.R);
}

TEST(QRFull, RejectsWide) { EXPECT_THROW(qr_full(random_matrix(2, 3, 2)), std::invalid_argument); }

TEST(HessQR, Identity) {
  const QRResult f = hess_qr(QuatMatrix::identity(5));
  EXPECT_EQ(f.W, QuatMatrix::identity(5));
  EXPECT_EQ(f.R, QuatMatrix::identity(5));
}

TEST(HessQR, TwoByTwoReal) {
  QuatMatrix h(2, 2);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) h.set(i, j, 1.0);
  const QRResult f = hess_qr(h);
  const double r2 = std::sqrt(2.0);
  EXPECT_NEAR(f.R(0, 0).w, r2, 1e-15);
  EXPECT_NEAR(f.R(0, 1).w, r2, 1e-15);
  EXPECT_EQ(f.R(1, 0), Quaternion(0.0));
  EXPECT_LE(abs(f.R(1, 1)), 1e-15);
}

TEST(HessQR, RandomRealAndQuaternionSubdiagonal) {
  const QuatMatrix q = random_matrix(20, 3);
  for (HessMethod m : {HessMethod::ViaH1, HessMethod::ViaH3}) {
    const QuatMatrix h = hess_reduce(q, m, false).H;
    const QRResult f = hess_qr(h);
    EXPECT_LE(fro_norm(h - mat_mul(f.W, f.R)), 100 * 20 * kEps * fro_norm(h));
    EXPECT_LE(unitarity_defect(f.W), 100 * 20 * kEps);
    EXPECT_TRUE(check_structure(f.R, StructureKind::UpperJRSTriangular, 0.0).ok);
    expect_real_nonneg_diagonal(f.R);
  }
}

TEST(HessQR, FallbackEquivalence) {
  const QuatMatrix q = random_matrix(12, 4);
  const QRResult a = hess_qr(hess_reduce(q, HessMethod::ViaH1, false).H);
  const QRResult b = hess_qr(hess_reduce(q, HessMethod::ViaH2, false).H);
  for (Index i = 0; i < 12; ++i) EXPECT_NEAR(abs(a.R(i, i)), abs(b.R(i, i)), 1e-10);
}

TEST(HessQR, RejectsNonHessenbergWithWitness) {
  QuatMatrix h = random_jrs_hessenberg(5, 5);
  h.block(2)(4, 1) = 0.25;
  try {
    (void)hess_qr(h);
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("(4,1)"), std::string::npos) << e.what();
  }
}

TEST(HessQR, OperationCount) {
  if (!ops::enabled) GTEST_SKIP() << "operation counting disabled";
  const Index n = 50;
  const QuatMatrix h = random_jrs_hessenberg(n, 6);
  ops::Scope sc;
  (void)hess_qr(h);
  EXPECT_LE(static_cast<double>(sc.elapsed().flops()), 1.15 * 120.0 * n * n);
}

TEST(QRIteration, IdentityFixed) {
  EXPECT_EQ(qr_iteration_unshifted(QuatMatrix::identity(4), 7), QuatMatrix::identity(4));
}

TEST(QRIteration, SymmetricTridiagonalConverges) {
  QuatMatrix h(2, 2);
  h.set(0, 0, 2.0);
  h.set(1, 1, 2.0);
  h.set(0, 1, 1.0);
  h.set(1, 0, 1.0);
  const QuatMatrix r = qr_iteration_unshifted(h, 50);
  EXPECT_LT(abs(r(1, 0)), 1e-8);
  EXPECT_NEAR(r(0, 0).w, 3.0, 1e-8);
  EXPECT_NEAR(r(1, 1).w, 1.0, 1e-8);
}

TEST(QRIteration, EqualModulusStalls) {
  QuatMatrix h(2, 2);
  h.set(0, 1, 1.0);
  h.set(1, 0, -1.0);
  const QuatMatrix r = qr_iteration_unshifted(h, 50);
  EXPECT_GT(abs(r(1, 0)), 0.5);
}

TEST(QRIteration, PreservesSpectrumAndStructure) {
  const QuatMatrix h = hess_reduce(random_matrix(10, 7), HessMethod::ViaH3, false).H;
  const SpectrumReport ref = oracle_eigvals(h);
  QuatMatrix cur = h;
  for (int it = 0; it < 5; ++it) {
    cur = qr_iteration_unshifted(cur, 1);
    EXPECT_TRUE(check_structure(cur, StructureKind::UpperJRSHessenberg, 1e-15).ok);
    EXPECT_LE(spectrum_distance(ref, oracle_eigvals(cur)), 1e-9 * fro_norm(h));
  }
}
