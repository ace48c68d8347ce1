#pragma once

#include "nhlatt/lattice.hpp"

namespace nhlatt {

/// Plane-wave scattering off an absorbing delta potential on the line.
/// Defaults hbar = 1, mass = 1/2 make the quadratic dispersion match the
/// bottom of the lattice band, so continuum and lattice curves are directly
/// comparable.
struct ContinuumParams {
  double momentum = 0.0; // k > 0
  double gamma = 0.0;    // >= 0
  double hbar = 1.0;
  double mass = 0.5;
};

void validate(const ContinuumParams& params);

struct ScatteringAmplitudes {
  Complex reflection;
  Complex transmission;
};

/// r = -m*gamma / (m*gamma + k*hbar^2), t = k*hbar^2 / (k*hbar^2 + m*gamma).
/// gamma = 0 gives (0, 1) exactly; no division-by-zero path exists.
ScatteringAmplitudes continuum_amplitudes(const ContinuumParams& params);

struct RtaTriple {
  double reflection;
  double transmission;
  double absorption;
};

/// R = |r|^2, T = |t|^2, A = 1 - R - T (always >= 0 here).
RtaTriple continuum_rta(const ContinuumParams& params);

/// The strength maximizing absorption, k*hbar^2/m; simultaneously the
/// R = T crossing.  2k with the default units.
double gamma_star(double momentum, double hbar = 1.0, double mass = 0.5);

} // namespace nhlatt
