#pragma once

#include <optional>
#include <vector>

#include "quatla/matrix.hpp"

namespace quatla {

enum class HessMethod { ViaH1, ViaH2, ViaH3 };

struct HessenbergResult {
  QuatMatrix H;
  std::optional<QuatMatrix> W;  // W* Q W = H when accumulated
  HessMethod method = HessMethod::ViaH3;
  std::vector<double> subdiag;  // B0 subdiagonal of H
};

// Unitary similarity to Hessenberg form. ViaH1 leaves quaternion subdiagonal
// entries; ViaH2 and ViaH3 leave real nonnegative ones.
HessenbergResult hess_reduce(const QuatMatrix& q, HessMethod method, bool accumulate);

struct TridiagResult {
  RealMatrix T0;  // real symmetric tridiagonal
  QuatMatrix W;   // W* Q W = T0
};

// Rejects input whose asymmetry |Q - Q*| exceeds 8 eps |Q|.
TridiagResult tridiag_hermitian(const QuatMatrix& q);

}  // namespace quatla
