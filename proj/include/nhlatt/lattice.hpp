#pragma once

#include <complex>
#include <span>
#include <vector>

namespace nhlatt {

using Complex = std::complex<double>;

/// Open tight-binding chain with a single on-site impurity.
///
/// Site indices are 1-based throughout the public interface.  The hopping
/// amplitude is fixed at J = 1, i.e. all energies and times are expressed
/// in units of J and 1/J.  The impurity is a general complex number: a
/// purely imaginary value -i*gamma (gamma > 0) models an absorbing site,
/// a real value an ordinary potential defect.
struct LatticeParams {
  int length = 0;        // number of sites L (>= 2)
  int impurity_site = 0; // q, 1-based, 1 <= q <= L
  Complex impurity{0.0, 0.0};
  static constexpr double hopping = 1.0;
};

void validate(const LatticeParams& params);

LatticeParams absorbing_impurity(int length, int site, double gamma);
LatticeParams real_impurity(int length, int site, double strength);

/// Central site convention: L/2 for even L, (L+1)/2 for odd L.
int central_site(int length);

/// True when the impurity has a strictly negative imaginary part.
bool is_absorbing(const LatticeParams& params);

/// Complex symmetric tridiagonal operator: the same off-diagonal value
/// couples sites j and j+1 in both directions.
struct TridiagOperator {
  std::vector<Complex> diag;
  std::vector<Complex> offdiag; // length dim()-1

  int dim() const { return static_cast<int>(diag.size()); }

  /// out = H * in, O(dim).
  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  std::vector<Complex> apply(std::span<const Complex> in) const;

  /// Sum of the diagonal; equals the impurity value for built Hamiltonians.
  Complex trace() const;
};

/// The L x L chain Hamiltonian: -1 on both off-diagonals, the impurity
/// value on diagonal entry q.
TridiagOperator build_hamiltonian(const LatticeParams& params);

} // namespace nhlatt
