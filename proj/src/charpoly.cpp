#include "nhlatt/charpoly.hpp"

#include "nhlatt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nhlatt {

namespace {

double max_abs_part(Complex z) {
  return std::max(std::abs(z.real()), std::abs(z.imag()));
}

Complex ldexp_complex(Complex z, long e) {
  if (e < std::numeric_limits<int>::min()) return {0.0, 0.0};
  const int ei = static_cast<int>(
      std::min<long>(e, std::numeric_limits<int>::max()));
  return {std::ldexp(z.real(), ei), std::ldexp(z.imag(), ei)};
}

ScaledComplex normalized(Complex mantissa, long exponent) {
  const double m = max_abs_part(mantissa);
  if (m == 0.0 || !std::isfinite(m)) return {mantissa, 0};
  int k = 0;
  std::frexp(m, &k);
  return {ldexp_complex(mantissa, -k), exponent + k};
}

ScaledComplex smul(const ScaledComplex& a, const ScaledComplex& b) {
  return normalized(a.mantissa * b.mantissa, a.exponent + b.exponent);
}

ScaledComplex sscale(const ScaledComplex& a, Complex c) {
  return normalized(a.mantissa * c, a.exponent);
}

ScaledComplex sadd(const ScaledComplex& a, const ScaledComplex& b) {
  if (a.mantissa == Complex{0.0, 0.0}) return b;
  if (b.mantissa == Complex{0.0, 0.0}) return a;
  if (a.exponent >= b.exponent) {
    const long shift = b.exponent - a.exponent;
    if (shift < -2000) return a;
    return normalized(a.mantissa + ldexp_complex(b.mantissa, shift),
                      a.exponent);
  }
  return sadd(b, a);
}

ScaledComplex ssub(const ScaledComplex& a, const ScaledComplex& b) {
  return sadd(a, ScaledComplex{-b.mantissa, b.exponent});
}

struct KPair {
  ScaledComplex k;  // K_n
  ScaledComplex dk; // K_n'
};

// One forward pass of the joint (K, K') recurrence, capturing snapshots at
// the requested orders.  All four carried values share one running
// exponent; they are renormalized together whenever the largest leaves
// [2^-512, 2^512].
void k_snapshots(Complex lambda, std::span<const int> orders,
                 std::span<KPair> out) {
  int max_order = -1;
  for (size_t i = 0; i < orders.size(); ++i) {
    out[i] = KPair{};
    max_order = std::max(max_order, orders[i]);
  }
  auto capture = [&](int n, Complex k, Complex dk, long e) {
    for (size_t i = 0; i < orders.size(); ++i) {
      if (orders[i] == n) {
        out[i].k = normalized(k, e);
        out[i].dk = normalized(dk, e);
      }
    }
  };
  // n = -1 snapshots stay zero; n = 0 is the recurrence seed.
  Complex k_prev{0.0, 0.0}, k_cur{1.0, 0.0};
  Complex dk_prev{0.0, 0.0}, dk_cur{0.0, 0.0};
  long exponent = 0;
  capture(0, k_cur, dk_cur, exponent);
  for (int n = 1; n <= max_order; ++n) {
    const Complex k_next = lambda * k_cur - k_prev;
    const Complex dk_next = k_cur + lambda * dk_cur - dk_prev;
    k_prev = k_cur;
    k_cur = k_next;
    dk_prev = dk_cur;
    dk_cur = dk_next;
    const double big = std::max(
        std::max(max_abs_part(k_prev), max_abs_part(k_cur)),
        std::max(max_abs_part(dk_prev), max_abs_part(dk_cur)));
    if (big > 0x1p512 || (big > 0.0 && big < 0x1p-512)) {
      int sh = 0;
      std::frexp(big, &sh);
      k_prev = ldexp_complex(k_prev, -sh);
      k_cur = ldexp_complex(k_cur, -sh);
      dk_prev = ldexp_complex(dk_prev, -sh);
      dk_cur = ldexp_complex(dk_cur, -sh);
      exponent += sh;
    }
    capture(n, k_cur, dk_cur, exponent);
  }
}

// P = K_{q-1} K_{L-q+1} + (i gamma K_{q-1} - K_{q-2}) K_{L-q}, assembled
// from one recurrence pass; the derivative follows by the product rule.
void assemble(const CharPolyParams& p, Complex lambda, ScaledComplex& value,
              ScaledComplex& derivative) {
  const Complex ig{0.0, p.gamma};
  const int orders[4] = {p.impurity_site - 2, p.impurity_site - 1,
                         p.length - p.impurity_site,
                         p.length - p.impurity_site + 1};
  KPair s[4];
  k_snapshots(lambda, orders, s);
  const KPair& ka = s[0]; // K_{q-2}
  const KPair& kb = s[1]; // K_{q-1}
  const KPair& kc = s[2]; // K_{L-q}
  const KPair& kd = s[3]; // K_{L-q+1}

  const ScaledComplex w = ssub(sscale(kb.k, ig), ka.k);
  const ScaledComplex dw = ssub(sscale(kb.dk, ig), ka.dk);
  value = sadd(smul(kb.k, kd.k), smul(w, kc.k));
  derivative = sadd(sadd(smul(kb.dk, kd.k), smul(kb.k, kd.dk)),
                    sadd(smul(dw, kc.k), smul(w, kc.dk)));
}

} // namespace

void validate(const CharPolyParams& params) {
  if (params.length < 1) {
    throw ValidationError("invalid-L: polynomial degree must be >= 1");
  }
  if (params.impurity_site < 1 || params.impurity_site > params.length) {
    throw ValidationError("invalid-q: impurity site " +
                          std::to_string(params.impurity_site) +
                          " outside [1, " + std::to_string(params.length) +
                          "]");
  }
  if (params.gamma < 0.0) {
    throw ValidationError("invalid-gamma: strength must be >= 0");
  }
}

Complex ScaledComplex::value() const {
  return ldexp_complex(mantissa, exponent);
}

double ScaledComplex::log_abs() const {
  const double m = std::abs(mantissa);
  if (m == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(m) + static_cast<double>(exponent) * std::log(2.0);
}

Complex k_eval(int n, Complex lambda) {
  if (n < 0) return {0.0, 0.0};
  const int orders[1] = {n};
  KPair s[1];
  k_snapshots(lambda, orders, s);
  return s[0].k.value();
}

ScaledComplex charpoly_eval_scaled(const CharPolyParams& params,
                                   Complex lambda) {
  validate(params);
  ScaledComplex value, derivative;
  assemble(params, lambda, value, derivative);
  return value;
}

Complex charpoly_eval(const CharPolyParams& params, Complex lambda) {
  return charpoly_eval_scaled(params, lambda).value();
}

Complex charpoly_derivative(const CharPolyParams& params, Complex lambda) {
  validate(params);
  ScaledComplex value, derivative;
  assemble(params, lambda, value, derivative);
  return derivative.value();
}

void charpoly_eval_with_derivative(const CharPolyParams& params,
                                   Complex lambda, ScaledComplex& value,
                                   ScaledComplex& derivative) {
  validate(params);
  assemble(params, lambda, value, derivative);
}

double symmetry_check(const CharPolyParams& params, Complex lambda) {
  const Complex left = charpoly_eval(params, -std::conj(lambda));
  const Complex right = charpoly_eval(params, lambda);
  const double sign = (params.length % 2 == 0) ? 1.0 : -1.0;
  return std::abs(left - sign * std::conj(right));
}

} // namespace nhlatt
