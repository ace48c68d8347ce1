#pragma once

#include "nhlatt/lattice.hpp"

#include <functional>

namespace nhlatt {

/// Discrete Gaussian wavepacket: amplitude exp(-(j-j0)^2 / (2 sigma^2))
/// times the phase exp(i k j), normalized.  Valid geometries keep
/// 1 << sigma << L/2 so the packet overlaps neither the edges nor the
/// impurity at t = 0.
struct WavepacketSpec {
  int center = 0;       // j0, 1-based
  double sigma = 0.0;   // width in sites, > 1
  double momentum = 0.0; // k in (0, pi); positive k moves right
};

struct WaveState {
  std::vector<Complex> amplitudes;
  double time = 0.0;

  int dim() const { return static_cast<int>(amplitudes.size()); }
};

double squared_norm(const WaveState& state);

// Total occupancy allowed on the edge sites and the impurity site of a
// freshly built packet.  The canonical 500-site, sigma = 40 geometry sits
// near 2e-6, so the gate is 1e-4 rather than something stricter.
inline constexpr double kPacketOverlapTol = 1e-4;

WaveState init_wavepacket(int length, const WavepacketSpec& spec);

using StepObserver = std::function<void(const WaveState&)>;

/// Evolve under exp(-iHt) to t_final with global 2-norm error <= tol.
/// Crank-Nicolson steps with pivoted tridiagonal solves; step-doubling
/// Richardson estimates drive the step size.  The observer, when given,
/// sees the initial state and every accepted step.
WaveState propagate(const TridiagOperator& op, const WaveState& initial,
                    double t_final, double tol,
                    const StepObserver& on_step = {});

/// Fixed-step variant used for convergence studies.
WaveState propagate_fixed(const TridiagOperator& op, const WaveState& initial,
                          double t_final, int steps);

struct RtaFractions {
  double reflection;   // weight on sites 1..q
  double transmission; // weight on sites q+1..L
  double absorption;   // 1 - R - T
};

RtaFractions measure_rta(const WaveState& state, int impurity_site);

/// One scattering data point.
struct RtaPoint {
  double gamma = 0.0;
  double momentum = 0.0;
  double reflection = 0.0;
  double transmission = 0.0;
  double absorption = 0.0;
  double t_obs = 0.0;
  double norm_final = 0.0;         // ||psi(t_obs)||
  double absorbed_integral = 0.0;  // 2 gamma int |psi_q|^2 dt, trapezoid
};

/// Observation time: packet reaches the impurity at (q - j0)/v_g, then
/// 0.8 of the travel time to the nearer boundary is allowed for the
/// scattered packets to separate, with a floor of (q - j0 + 3 sigma)/v_g.
/// Group velocity v_g = 2 sin k.
double observation_time(int length, int impurity_site,
                        const WavepacketSpec& spec);

/// Build the Hamiltonian, launch the packet, propagate to the observation
/// time and measure R, T, A; the absorbed weight is also accumulated
/// independently along the trajectory.  An extra observer, when given,
/// sees every accepted step (occupancy dumps hook in here).
RtaPoint scatter_once(int length, int impurity_site,
                      const WavepacketSpec& spec, double gamma, double tol,
                      const StepObserver& on_step = {});

} // namespace nhlatt
