// Internal: LU factorization with partial pivoting for complex tridiagonal
// systems.  Row swaps introduce one extra superdiagonal of fill-in.
#pragma once

#include "nhlatt/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace nhlatt::detail {

struct PivotedTridiagLU {
  int n = 0;
  std::vector<Complex> sub, diag, super, super2;
  std::vector<char> swapped;

  // Factor the symmetric tridiagonal matrix with the given diagonal and
  // off-diagonal entries.  Exact zero pivots are replaced by `tiny` so that
  // inverse iteration can solve against (numerically) singular shifts.
  void factor(std::span<const Complex> d_in, std::span<const Complex> e_in,
              double tiny) {
    n = static_cast<int>(d_in.size());
    diag.assign(d_in.begin(), d_in.end());
    sub.assign(e_in.begin(), e_in.end());
    super.assign(e_in.begin(), e_in.end());
    super2.assign(std::max(n - 2, 0), Complex{0.0, 0.0});
    swapped.assign(std::max(n - 1, 0), 0);

    for (int i = 0; i + 1 < n; ++i) {
      if (std::abs(diag[i]) >= std::abs(sub[i])) {
        if (diag[i] == Complex{0.0, 0.0}) diag[i] = Complex{tiny, 0.0};
        const Complex fact = sub[i] / diag[i];
        sub[i] = fact;
        diag[i + 1] -= fact * super[i];
      } else {
        const Complex fact = diag[i] / sub[i];
        diag[i] = sub[i];
        sub[i] = fact;
        const Complex temp = super[i];
        super[i] = diag[i + 1];
        diag[i + 1] = temp - fact * diag[i + 1];
        if (i + 2 < n) {
          super2[i] = super[i + 1];
          super[i + 1] = -fact * super[i + 1];
        }
        swapped[i] = 1;
      }
    }
    if (diag[n - 1] == Complex{0.0, 0.0}) diag[n - 1] = Complex{tiny, 0.0};
  }

  void solve(std::span<Complex> b) const {
    for (int i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= sub[i] * b[i];
      } else {
        const Complex temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - sub[i] * b[i];
      }
    }
    b[n - 1] /= diag[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - super[n - 2] * b[n - 1]) / diag[n - 2];
    for (int i = n - 3; i >= 0; --i) {
      b[i] = (b[i] - super[i] * b[i + 1] - super2[i] * b[i + 2]) / diag[i];
    }
  }
};

} // namespace nhlatt::detail
