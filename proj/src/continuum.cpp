#include "nhlatt/continuum.hpp"

#include "nhlatt/errors.hpp"

namespace nhlatt {

void validate(const ContinuumParams& params) {
  if (!(params.momentum > 0.0)) {
    throw ValidationError("invalid-k: wavenumber must be > 0");
  }
  if (params.gamma < 0.0) {
    throw ValidationError("invalid-gamma: strength must be >= 0");
  }
  if (!(params.hbar > 0.0) || !(params.mass > 0.0)) {
    throw ValidationError("invalid-units: hbar and mass must be > 0");
  }
}

ScatteringAmplitudes continuum_amplitudes(const ContinuumParams& params) {
  validate(params);
  const double mg = params.mass * params.gamma;
  const double kh2 = params.momentum * params.hbar * params.hbar;
  return {Complex{-mg / (mg + kh2), 0.0}, Complex{kh2 / (kh2 + mg), 0.0}};
}

RtaTriple continuum_rta(const ContinuumParams& params) {
  const ScatteringAmplitudes a = continuum_amplitudes(params);
  const double r2 = std::norm(a.reflection);
  const double t2 = std::norm(a.transmission);
  return {r2, t2, 1.0 - r2 - t2};
}

double gamma_star(double momentum, double hbar, double mass) {
  ContinuumParams probe{momentum, 0.0, hbar, mass};
  validate(probe);
  return momentum * hbar * hbar / mass;
}

} // namespace nhlatt
