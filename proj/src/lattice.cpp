#include "nhlatt/lattice.hpp"

#include "nhlatt/errors.hpp"

#include <string>

namespace nhlatt {

void validate(const LatticeParams& params) {
  if (params.length < 2) {
    throw ValidationError("invalid-L: chain length must be >= 2, got " +
                          std::to_string(params.length));
  }
  if (params.impurity_site < 1 || params.impurity_site > params.length) {
    throw ValidationError("invalid-q: impurity site " +
                          std::to_string(params.impurity_site) +
                          " outside [1, " + std::to_string(params.length) +
                          "]");
  }
}

LatticeParams absorbing_impurity(int length, int site, double gamma) {
  if (gamma < 0.0) {
    throw ValidationError("invalid-gamma: absorbing strength must be >= 0");
  }
  LatticeParams p{length, site, Complex{0.0, -gamma}};
  validate(p);
  return p;
}

LatticeParams real_impurity(int length, int site, double strength) {
  LatticeParams p{length, site, Complex{strength, 0.0}};
  validate(p);
  return p;
}

int central_site(int length) {
  return (length % 2 == 0) ? length / 2 : (length + 1) / 2;
}

bool is_absorbing(const LatticeParams& params) {
  return params.impurity.imag() < 0.0;
}

TridiagOperator build_hamiltonian(const LatticeParams& params) {
  validate(params);
  TridiagOperator op;
  op.diag.assign(params.length, Complex{0.0, 0.0});
  op.diag[params.impurity_site - 1] = params.impurity;
  op.offdiag.assign(params.length - 1, Complex{-1.0, 0.0});
  return op;
}

void TridiagOperator::apply(std::span<const Complex> in,
                            std::span<Complex> out) const {
  const int n = dim();
  if (static_cast<int>(in.size()) != n || static_cast<int>(out.size()) != n) {
    throw ValidationError("dimension-mismatch: operator dim " +
                          std::to_string(n) + ", vector size " +
                          std::to_string(in.size()));
  }
  if (n == 1) {
    out[0] = diag[0] * in[0];
    return;
  }
  out[0] = diag[0] * in[0] + offdiag[0] * in[1];
  for (int j = 1; j + 1 < n; ++j) {
    out[j] = offdiag[j - 1] * in[j - 1] + diag[j] * in[j] +
             offdiag[j] * in[j + 1];
  }
  out[n - 1] = offdiag[n - 2] * in[n - 2] + diag[n - 1] * in[n - 1];
}

std::vector<Complex> TridiagOperator::apply(std::span<const Complex> in) const {
  std::vector<Complex> out(dim());
  apply(in, out);
  return out;
}

Complex TridiagOperator::trace() const {
  Complex sum{0.0, 0.0};
  for (const Complex& d : diag) sum += d;
  return sum;
}

} // namespace nhlatt
