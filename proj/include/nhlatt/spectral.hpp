#pragma once

#include "nhlatt/charpoly.hpp"
#include "nhlatt/lattice.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nhlatt {

enum class SpectralBackend { dense_qr, charpoly_roots };

/// Full complex spectrum of one Hamiltonian instance.  Right eigenvectors
/// are unit-normalized and stored per eigenvalue when requested; the two
/// backends never share code, so their agreement is a meaningful check.
struct Spectrum {
  std::vector<Complex> eigenvalues;
  std::vector<std::vector<Complex>> eigenvectors; // empty unless requested
  SpectralBackend backend = SpectralBackend::dense_qr;
  LatticeParams params;
  bool near_defective = false; // inverse iteration stagnated somewhere

  bool has_vectors() const { return !eigenvectors.empty(); }
};

inline constexpr int kDenseMaxLength = 2000;
inline constexpr int kCharpolyMaxLength = 200;
inline constexpr std::uint64_t kDefaultSeed = 20250101u;

/// Dense solve: eigenvalues by complex shifted-QR iteration, eigenvectors
/// by two-step inverse iteration on (H - lambda*I) with pivoted tridiagonal
/// solves and a seeded random start.
Spectrum solve_dense(const LatticeParams& params, bool want_vectors,
                     std::uint64_t seed = kDefaultSeed);

/// Root-finder solve: all zeros of the characteristic polynomial by
/// simultaneous Aberth-Ehrlich iteration with Newton polishing; produces
/// no eigenvectors.
Spectrum solve_charpoly(const CharPolyParams& params);

/// Candidate eigenvector from the forward transfer recursion
/// x_{j+1} = (diag_j - lambda) x_j - x_{j-1}, x_0 = 0, x_1 = 1, unit
/// normalized.  Throws when lambda is not close to an eigenvalue.
std::vector<Complex> eigenvector_transfer(const TridiagOperator& op,
                                          Complex lambda);

struct EigenPairMatch {
  int first = -1;
  int second = -1;
  double gap = 0.0;
  double overlap_defect = 1.0; // 1 - |<v_first|v_second>|
};

enum class EpClass { all_paired_ep, single_extra_ep, third_order_ep, no_ep };
std::string to_string(EpClass c);

// Declaration thresholds: an eigenvalue pair counts as coalesced when its
// gap is below kEpGapTol and, when vectors are available, the overlap
// defect is below kEpOverlapTol.  A third-order event is declared either
// for three mutually coincident eigenvalues (within kTripleGapTol) or for
// a coalescence happening on the imaginary axis while a further
// zero-real-part eigenvalue is present (the odd-L central-site signature,
// where an impurity-blind zero mode sits on the axis throughout).
inline constexpr double kEpGapTol = 1e-5;
inline constexpr double kEpOverlapTol = 1e-3;
inline constexpr double kTripleGapTol = 2e-4;
inline constexpr double kAxisTol = 1e-6;

struct EpReport {
  std::vector<EigenPairMatch> pairs; // greedy min-gap matching, gap-sorted
  std::vector<int> unpaired;         // leftover index for odd dimensions
  EpClass classification = EpClass::no_ep;
  double gamma_at_detection = 0.0;
  double min_gap = 0.0;    // smallest gap over all eigenvalue pairs
  int coalesced_pairs = 0; // pairs meeting the declaration thresholds
};

/// Greedy minimum-gap pairing of a spectrum plus EP classification.
EpReport detect_pairs(const Spectrum& spec);

struct EpLocation {
  double gamma_c = 0.0;
  EpReport report;
};

/// Minimize the minimum pairwise eigenvalue gap g(gamma) over the window
/// by a coarse scan for interior local minima followed by golden-section
/// refinement.  Throws "no-minimum" when g is monotone on the window.
EpLocation locate_ep(int length, int impurity_site, double gamma_lo,
                     double gamma_hi);

/// Same search on a caller-supplied strictly increasing gamma grid.
EpLocation locate_ep_on_grid(int length, int impurity_site,
                             std::span<const double> grid);

struct BoundStateInfo {
  Complex eigenvalue;
  std::vector<double> profile;       // per-site occupancies, sum 1
  double localization_length = 0.0;  // amplitude decay scale alpha
  double fit_r_squared = 0.0;
  int index = -1; // position in the spectrum passed in
};

/// Index of the localized eigenvalue: for an absorbing impurity the most
/// negative imaginary eigenvalue on the imaginary axis (requires
/// gamma > 2), for a real impurity the eigenvalue separated from the band.
/// Throws "no-bound-state" when the selection criterion matches nothing.
int bound_state_index(const Spectrum& spec);

/// Full localized-state record: eigenvalue, occupancy profile and the
/// fitted localization length.  Requires eigenvectors.
BoundStateInfo bound_state(const Spectrum& spec);

/// Sort eigenvalues by (Re, then Im) ascending, eigenvectors permuted
/// consistently.
Spectrum order_eigenpairs(Spectrum spec);

} // namespace nhlatt
