#pragma once

#include <optional>
#include <vector>

#include "quatla/matrix.hpp"
#include "quatla/schur.hpp"

namespace quatla {

// Class representative re + im i of a right eigenvalue, im >= 0.
struct StdEigenvalue {
  double re = 0.0;
  double im = 0.0;

  Complex value() const { return {re, im}; }
  friend bool operator==(const StdEigenvalue&, const StdEigenvalue&) = default;
};

enum class SpectrumSource { SchurPath, OraclePath };

struct SpectrumReport {
  std::vector<StdEigenvalue> values;
  std::optional<double> matching_distance;
  SpectrumSource source = SpectrumSource::SchurPath;
  bool converged = true;  // false: values withheld
};

StdEigenvalue standardize(const Quaternion& q);
StdEigenvalue standardize(Complex z);

// Rejects unconverged input.
SpectrumReport eigs_from_schur(const SchurResult& s);

// Eigenvalue-only Schur path. On non-convergence values are empty and
// converged is false.
SpectrumReport eigvals(const QuatMatrix& q, double tol = 1e-14, int max_sweeps = 0);

inline constexpr Index kOracleMaxOrder = 128;

// Eigenvalues of the complex adjoint by an independent complex QR solver.
SpectrumReport oracle_eigvals(const QuatMatrix& q, Index max_order = kOracleMaxOrder);

// Smallest achievable maximum |a_i - b_pi(i)| over one-to-one assignments.
double spectrum_distance(const SpectrumReport& a, const SpectrumReport& b);

}  // namespace quatla
