#pragma once

#include "nhlatt/dynamics.hpp"
#include "nhlatt/spectral.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nhlatt {

/// One scan axis: which parameter varies and the values it takes.
/// Values must be strictly increasing and non-empty.
struct ScanGrid {
  enum class Axis { gamma, momentum, site, length };
  Axis axis = Axis::gamma;
  std::vector<double> values;
};

void validate(const ScanGrid& grid);
std::vector<double> linear_grid(double lo, double hi, int points);

/// Number of worker threads for grid scans: NHLATT_THREADS when set,
/// otherwise the hardware concurrency.
int scan_thread_count();

struct ScatterGeometry {
  int length = 0;
  int impurity_site = 0;
  WavepacketSpec packet;
  double tol = 1e-8;
};

struct RtaScanEntry {
  RtaPoint point{};
  bool ok = false;
  std::string error; // failure annotation when !ok
};

/// One scatter_once per grid value; grid points run concurrently and
/// failures are annotated per point rather than aborting the scan.
std::vector<RtaScanEntry> scan_rta(const ScanGrid& gammas,
                                   const ScatterGeometry& geometry);

/// Strength of maximal absorption, by parabolic interpolation through the
/// three scan points around the discrete argmax of A.
double extract_gamma_star(std::span<const RtaPoint> scan);

struct SpectrumSweep {
  std::vector<double> gammas;
  std::vector<std::vector<Complex>> branches; // branches[g][b]
  std::vector<char> ambiguous; // matching moved > 10x the grid spacing
};

/// Ordered spectra over a gamma grid with continuity-based branch
/// tracking, so Re/Im traces are plottable as curves.
SpectrumSweep spectrum_sweep(const ScanGrid& gammas, int length,
                             int impurity_site);

struct LocFit {
  double alpha = 0.0;     // amplitude decay length
  double r_squared = 0.0;
  int window_lo = 0;      // smallest |j - q| used
  int window_hi = 0;      // largest |j - q| used
};

/// Log-linear fit of the occupancy profile against |j - q|, excluding
/// sites within 2 of the impurity and within 5 of either edge.  The
/// occupancy slope -2/alpha is converted to the amplitude decay length.
/// Sides with fewer than 4 usable sites are dropped; with check_quality
/// the fit must reach r^2 >= 0.99.
LocFit fit_localization_length(std::span<const double> profile,
                               int impurity_site, bool check_quality = true);

struct GammaVMap {
  std::vector<std::pair<double, double>> pairs; // (gamma, V)
  int length = 0;
};

/// For each gamma > 2, the real impurity strength V >= 0 whose localized
/// state has the same localization length, found by bisection.
GammaVMap map_gamma_to_v(std::span<const double> gammas, int length);

struct EpStructure {
  int length = 0;
  int impurity_site = 0;
  EpClass classification = EpClass::no_ep;
  double gamma_c = 0.0; // principal coalescence (2 for even L), NaN if none
  double gamma_1 = 0.0; // extra EP above 2 when present, NaN otherwise
  bool bound_state_at_large_gamma = false;
  std::string diagnostics;
};

/// Size-dependence taxonomy at the central site: all pairs coalesce at
/// gamma = 2 (L mod 4 = 2), the same plus one extra EP just above 2
/// (L mod 4 = 0), a single third-order EP (L mod 4 = 3), or no EP at all
/// (L mod 4 = 1).  The class is detected, not assumed.
EpStructure classify_ep_structure(int length, int impurity_site = 0);

struct QScanEntry {
  int site = 0;
  double gamma_c = 0.0;
  double min_gap = 0.0;
};

/// EP location as a function of the impurity site.
std::vector<QScanEntry> scan_q(int length, std::span<const int> sites);

struct EigenstateProfiles {
  int length = 0;
  std::vector<int> indices; // 1-based positions in the (Re, Im) ordering
  std::vector<Complex> eigenvalues;
  std::vector<std::vector<double>> occupancies;
  std::vector<double> participation; // participation ratio 1 / sum p_j^2
};

EigenstateProfiles dump_eigenstate_profiles(int length, int impurity_site,
                                            double gamma,
                                            std::span<const int> indices);

} // namespace nhlatt
