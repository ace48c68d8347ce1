#pragma once

#include "nhlatt/lattice.hpp"

namespace nhlatt {

/// Parameters of the characteristic polynomial det(lambda*I - H) for the
/// absorbing-impurity chain: length L, impurity site q, strength gamma.
struct CharPolyParams {
  int length = 0;
  int impurity_site = 0;
  double gamma = 0.0;
};

void validate(const CharPolyParams& params);

/// K_n: the monic three-term family with K_0 = 1, K_1 = lambda and
/// K_n = lambda*K_{n-1} - K_{n-2}; zero for n < 0.  On the band,
/// K_n(2 cos t) = sin((n+1)t)/sin(t), i.e. K_n(x) = U_n(x/2) with U_n the
/// Chebyshev polynomial of the second kind.  Evaluation always runs the
/// forward recurrence: it is branch-free and stays finite at x = +-2 where
/// the closed form has a removable singularity.
Complex k_eval(int n, Complex lambda);

/// value = mantissa * 2^exponent.  Keeps degree-500 evaluations inside
/// double range; the mantissa is kept within a few binary orders of unity.
struct ScaledComplex {
  Complex mantissa{0.0, 0.0};
  long exponent = 0;

  Complex value() const;
  double log_abs() const; // natural log of |value|, -inf for zero
};

ScaledComplex charpoly_eval_scaled(const CharPolyParams& params,
                                   Complex lambda);

/// det(lambda*I - H); monic of degree L.  May overflow to inf for very
/// large |lambda| at large L; use charpoly_eval_scaled there.
Complex charpoly_eval(const CharPolyParams& params, Complex lambda);

/// d/dlambda of the characteristic polynomial, via the differentiated
/// recurrence carried alongside K_n.
Complex charpoly_derivative(const CharPolyParams& params, Complex lambda);

/// Both at once; root polishing wants the ratio, where the exponents cancel.
void charpoly_eval_with_derivative(const CharPolyParams& params,
                                   Complex lambda, ScaledComplex& value,
                                   ScaledComplex& derivative);

/// Residual of the reflection relation P(-conj(lambda)) =
/// (-1)^L * conj(P(lambda)); zero up to rounding for every input.
double symmetry_check(const CharPolyParams& params, Complex lambda);

} // namespace nhlatt
