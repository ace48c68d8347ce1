#include "nhlatt/spectral.hpp"

#include "nhlatt/errors.hpp"
#include "nhlatt/experiments.hpp"
#include "pivoted_tridiag.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace nhlatt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXcd dense_matrix(const TridiagOperator& op) {
  const int n = op.dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) m(j, j) = op.diag[j];
  for (int j = 0; j + 1 < n; ++j) {
    m(j, j + 1) = op.offdiag[j];
    m(j + 1, j) = op.offdiag[j];
  }
  return m;
}

double operator_scale(const TridiagOperator& op) {
  double s = 0.0;
  for (const Complex& d : op.diag) s = std::max(s, std::abs(d));
  return s + 2.0 * LatticeParams::hopping;
}

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const Complex& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double eigen_residual(const TridiagOperator& op, std::span<const Complex> v,
                      Complex lambda) {
  std::vector<Complex> hv = op.apply(v);
  double s = 0.0;
  for (size_t j = 0; j < hv.size(); ++j) s += std::norm(hv[j] - lambda * v[j]);
  return std::sqrt(s);
}

struct InverseIterationResult {
  std::vector<Complex> vector;
  double residual = kInf;
};

InverseIterationResult inverse_iteration(const TridiagOperator& op,
                                         Complex lambda,
                                         std::mt19937_64& rng) {
  const int n = op.dim();
  const double scale = operator_scale(op) + std::abs(lambda);
  const double tiny =
      std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
  std::vector<Complex> shifted(op.diag.begin(), op.diag.end());
  for (Complex& d : shifted) d -= lambda;
  detail::PivotedTridiagLU lu;
  lu.factor(shifted, op.offdiag, tiny);

  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_unit = [&] {
    std::vector<Complex> v(n);
    for (Complex& x : v) x = Complex{gauss(rng), gauss(rng)};
    const double nv = norm2(v);
    for (Complex& x : v) x /= nv;
    return v;
  };

  std::vector<Complex> v = random_unit();
  double residual = kInf;
  for (int iter = 0; iter < 5; ++iter) {
    std::vector<Complex> w = v;
    lu.solve(w);
    const double nw = norm2(w);
    if (!std::isfinite(nw) || nw == 0.0) {
      v = random_unit();
      continue;
    }
    for (Complex& x : w) x /= nw;
    v = std::move(w);
    if (iter >= 1) {
      residual = eigen_residual(op, v, lambda);
      if (residual < 1e-11 * scale) break;
    }
  }
  if (!std::isfinite(residual)) residual = eigen_residual(op, v, lambda);
  return {std::move(v), residual};
}

double min_pairwise_gap(std::span<const Complex> values) {
  double best = kInf;
  for (size_t i = 0; i < values.size(); ++i) {
    for (size_t j = i + 1; j < values.size(); ++j) {
      best = std::min(best, std::abs(values[i] - values[j]));
    }
  }
  return best;
}

std::vector<Complex> dense_eigenvalues(const LatticeParams& params) {
  const TridiagOperator op = build_hamiltonian(params);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(dense_matrix(op), false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("no-convergence: dense QR iteration failed for L = " +
                         std::to_string(params.length));
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double min_gap_at(int length, int site, double gamma) {
  return min_pairwise_gap(
      dense_eigenvalues(absorbing_impurity(length, site, gamma)));
}

// ------------------------- Aberth-Ehrlich machinery ------------------------

Complex scaled_ratio(const ScaledComplex& num, const ScaledComplex& den,
                     double cap) {
  if (den.mantissa == Complex{0.0, 0.0}) return {cap, 0.0};
  const Complex m = num.mantissa / den.mantissa;
  const long e = num.exponent - den.exponent;
  if (e > 900) return {cap, 0.0};
  const Complex r{std::ldexp(m.real(), static_cast<int>(e)),
                  std::ldexp(m.imag(), static_cast<int>(e))};
  const double ar = std::abs(r);
  if (!std::isfinite(ar) || ar > cap) return r / ar * cap;
  return r;
}

struct AberthOutcome {
  std::vector<Complex> roots;
  bool ok = false;
};

AberthOutcome aberth_attempt(const CharPolyParams& p, double radius,
                             double angle_offset) {
  const int n = p.length;
  std::vector<Complex> z(n);
  for (int m = 0; m + 1 < n; ++m) {
    const double ang =
        2.0 * std::numbers::pi * (m + angle_offset) / std::max(n - 1, 1);
    z[m] = radius * Complex{std::cos(ang), std::sin(ang)};
  }
  z[n - 1] = Complex{0.0, -std::max(p.gamma, 2.0)};

  std::vector<char> done(n, 0);
  std::deque<double> history;
  ScaledComplex val, der;
  const int max_sweeps = 250;
  bool all_done = false;
  for (int sweep = 0; sweep < max_sweeps && !all_done; ++sweep) {
    double max_w = 0.0;
    all_done = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      charpoly_eval_with_derivative(p, z[i], val, der);
      if (val.mantissa == Complex{0.0, 0.0}) {
        done[i] = 1;
        continue;
      }
      const double cap = 0.5 * (1.0 + std::abs(z[i]));
      const Complex newton = scaled_ratio(val, der, cap);
      Complex s{0.0, 0.0};
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        Complex diff = z[i] - z[j];
        const double ad = std::abs(diff);
        if (ad < 1e-300) diff = Complex{1e-300, 0.0};
        s += 1.0 / diff;
      }
      const Complex denom = 1.0 - newton * s;
      Complex w = (std::abs(denom) < 1e-12) ? newton : newton / denom;
      const double aw = std::abs(w);
      if (aw > cap) w *= cap / aw;
      z[i] -= w;
      const double rel = std::abs(w) / (1.0 + std::abs(z[i]));
      max_w = std::max(max_w, rel);
      if (rel < 5e-14) {
        done[i] = 1;
      } else {
        all_done = false;
      }
    }
    // Multiple roots stall the per-point criterion near sqrt(eps); stop on
    // stagnation at small corrections and let the cluster polish finish.
    history.push_back(max_w);
    if (history.size() > 10) history.pop_front();
    if (sweep > 50 && max_w < 1e-7 && history.size() == 10 &&
        max_w > 0.5 * history.front()) {
      break;
    }
  }

  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!done[i]) {
      charpoly_eval_with_derivative(p, z[i], val, der);
      const double cap = 1.0 + std::abs(z[i]);
      worst = std::max(worst, std::abs(scaled_ratio(val, der, cap)) /
                                  (1.0 + std::abs(z[i])));
    }
  }
  return {std::move(z), worst < 1e-5};
}

// Union clusters of machine-coincident roots; polish each cluster centroid
// with multiplicity-aware Newton steps and assign it to every member.
void polish_roots(const CharPolyParams& p, std::vector<Complex>& z) {
  const int n = static_cast<int>(z.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double tol = 2e-5 * (1.0 + std::abs(z[i]));
      if (std::abs(z[i] - z[j]) < tol) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);

  ScaledComplex val, der;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    const int mult = static_cast<int>(g.size());
    Complex c{0.0, 0.0};
    double diam = 0.0;
    for (int i : g) c += z[i];
    c /= static_cast<double>(mult);
    for (int i : g) diam = std::max(diam, std::abs(z[i] - c));

    charpoly_eval_with_derivative(p, c, val, der);
    double best_log = val.log_abs();
    for (int step = 0; step < 4; ++step) {
      if (val.mantissa == Complex{0.0, 0.0}) break;
      const double cap = (mult > 1) ? (diam + 1e-8) : 0.1 * (1.0 + std::abs(c));
      Complex w =
          static_cast<double>(mult) * scaled_ratio(val, der, kInf);
      const double aw = std::abs(w);
      if (!std::isfinite(aw)) break;
      if (aw > cap) w *= cap / aw;
      const Complex trial = c - w;
      charpoly_eval_with_derivative(p, trial, val, der);
      const double trial_log = val.log_abs();
      if (trial_log < best_log) {
        c = trial;
        best_log = trial_log;
      } else {
        break;
      }
    }
    for (int i : g) z[i] = c;
  }
}

// ------------------------------- pair search -------------------------------

struct GapDip {
  double gamma = 0.0;
  double gap = kInf;
};

int axis_eigenvalue_count(const std::vector<Complex>& values) {
  int n = 0;
  for (const Complex& v : values) {
    if (std::abs(v.real()) < 1e-8) ++n;
  }
  return n;
}

GapDip golden_refine(int length, int site, double a, double b) {
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - golden * (b - a);
  double x2 = a + golden * (b - a);
  double f1 = min_gap_at(length, site, x1);
  double f2 = min_gap_at(length, site, x2);
  for (int it = 0; it < 110 && (b - a) > 1e-13 * std::max(1.0, b); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = min_gap_at(length, site, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = min_gap_at(length, site, x2);
    }
  }
  const double gc = 0.5 * (a + b);
  return {gc, min_gap_at(length, site, gc)};
}

// Coalescences in this family happen when eigenvalues lock onto the
// imaginary axis, so the zero-real-part count flips exactly at the EP.
// The dip of the min-gap function is a very narrow sqrt-funnel that a
// grid can straddle unseen; bisection on the count change pins it.
std::vector<GapDip> refine_interior_minima(int length, int site,
                                           std::span<const double> grid) {
  const size_t m = grid.size();
  std::vector<double> g(m);
  std::vector<int> axis(m);
  for (size_t i = 0; i < m; ++i) {
    const auto values =
        dense_eigenvalues(absorbing_impurity(length, site, grid[i]));
    g[i] = min_pairwise_gap(values);
    axis[i] = axis_eigenvalue_count(values);
  }

  struct Bracket {
    double lo, hi;
  };
  std::vector<Bracket> brackets;
  std::vector<double> crossings;

  std::vector<size_t> minima;
  for (size_t i = 1; i + 1 < m; ++i) {
    if (g[i] <= g[i - 1] && g[i] <= g[i + 1]) {
      if (!minima.empty() && minima.back() + 1 == i) continue;
      minima.push_back(i);
    }
  }
  std::sort(minima.begin(), minima.end(),
            [&](size_t a, size_t b) { return g[a] < g[b]; });
  if (minima.size() > 3) minima.resize(3);
  for (size_t idx : minima) brackets.push_back({grid[idx - 1], grid[idx + 1]});

  for (size_t i = 0; i + 1 < m; ++i) {
    if (axis[i] == axis[i + 1]) continue;
    double lo = grid[i], hi = grid[i + 1];
    const int c_lo = axis[i];
    for (int it = 0; it < 60 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      const int c = axis_eigenvalue_count(
          dense_eigenvalues(absorbing_impurity(length, site, mid)));
      if (c == c_lo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double crossing = 0.5 * (lo + hi);
    // discard flips hugging the window edge; they belong to an EP at or
    // outside the endpoint, not to an interior minimum
    const double margin = 0.5 * (grid[1] - grid[0]);
    if (crossing < grid.front() + margin || crossing > grid.back() - margin) {
      continue;
    }
    crossings.push_back(crossing);
  }

  std::vector<GapDip> dips;
  for (const Bracket& br : brackets) {
    dips.push_back(golden_refine(length, site, br.lo, br.hi));
  }
  // The bisected flip IS the coalescence point; the min-gap funnel around
  // it can be narrower than any background structure, where a golden
  // search would slide off, so take it directly.
  for (const double crossing : crossings) {
    dips.push_back({crossing, min_gap_at(length, site, crossing)});
  }
  std::sort(dips.begin(), dips.end(),
            [](const GapDip& a, const GapDip& b) { return a.gap < b.gap; });
  std::vector<GapDip> unique;
  for (const GapDip& dip : dips) {
    bool dup = false;
    for (const GapDip& seen : unique) {
      if (std::abs(seen.gamma - dip.gamma) < 1e-6) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(dip);
  }
  return unique;
}

} // namespace

std::string to_string(EpClass c) {
  switch (c) {
    case EpClass::all_paired_ep: return "all-paired-EP";
    case EpClass::single_extra_ep: return "single-extra-EP";
    case EpClass::third_order_ep: return "third-order-EP";
    case EpClass::no_ep: return "no-EP";
  }
  return "no-EP";
}

Spectrum solve_dense(const LatticeParams& params, bool want_vectors,
                     std::uint64_t seed) {
  validate(params);
  if (params.length > kDenseMaxLength) {
    throw ValidationError("invalid-L: dense solve limited to L <= " +
                          std::to_string(kDenseMaxLength));
  }
  Spectrum spec;
  spec.backend = SpectralBackend::dense_qr;
  spec.params = params;
  spec.eigenvalues = dense_eigenvalues(params);

  if (want_vectors) {
    const TridiagOperator op = build_hamiltonian(params);
    const double scale = operator_scale(op);
    std::mt19937_64 rng(seed);
    spec.eigenvectors.reserve(params.length);
    for (const Complex& lambda : spec.eigenvalues) {
      InverseIterationResult r = inverse_iteration(op, lambda, rng);
      if (r.residual > 1e-9 * scale) spec.near_defective = true;
      spec.eigenvectors.push_back(std::move(r.vector));
    }
  }
  return spec;
}

Spectrum solve_charpoly(const CharPolyParams& params) {
  validate(params);
  if (params.length > kCharpolyMaxLength) {
    throw ValidationError("invalid-L: charpoly solve limited to L <= " +
                          std::to_string(kCharpolyMaxLength));
  }

  static constexpr double kRadii[3] = {2.2, 1.8, 2.7};
  static constexpr double kOffsets[3] = {0.31, 0.17, 0.43};
  AberthOutcome outcome;
  for (int attempt = 0; attempt < 3 && !outcome.ok; ++attempt) {
    outcome = aberth_attempt(params, kRadii[attempt], kOffsets[attempt]);
    if (!outcome.ok) continue;
    polish_roots(params, outcome.roots);
    Complex sum{0.0, 0.0};
    for (const Complex& r : outcome.roots) sum += r;
    const Complex expected{0.0, -params.gamma};
    if (std::abs(sum - expected) >
        1e-6 * params.length * (1.0 + params.gamma)) {
      outcome.ok = false;
    }
  }
  if (!outcome.ok) {
    throw NumericalError(
        "root-count-mismatch: simultaneous iteration failed to converge to " +
        std::to_string(params.length) + " roots");
  }

  std::sort(outcome.roots.begin(), outcome.roots.end(),
            [](const Complex& a, const Complex& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });

  Spectrum spec;
  spec.backend = SpectralBackend::charpoly_roots;
  spec.params = LatticeParams{params.length, params.impurity_site,
                              Complex{0.0, -params.gamma}};
  spec.eigenvalues = std::move(outcome.roots);
  return spec;
}

std::vector<Complex> eigenvector_transfer(const TridiagOperator& op,
                                          Complex lambda) {
  const int n = op.dim();
  if (n < 1) throw ValidationError("dimension-mismatch: empty operator");
  std::vector<Complex> x(n);
  x[0] = Complex{1.0, 0.0};
  Complex prev{0.0, 0.0}; // x_0 in the recursion
  for (int j = 0; j + 1 < n; ++j) {
    x[j + 1] = (op.diag[j] - lambda) * x[j] - prev;
    prev = x[j];
    if (std::abs(x[j + 1]) > 1e120) {
      for (int m = 0; m <= j + 1; ++m) x[m] *= 1e-120;
      prev *= 1e-120;
    }
  }
  const double nx = norm2(x);
  if (!(nx > 0.0) || !std::isfinite(nx)) {
    throw NumericalError("large-residual: transfer recursion overflowed");
  }
  for (Complex& c : x) c /= nx;
  const double scale = operator_scale(op) + std::abs(lambda);
  const double res = eigen_residual(op, x, lambda);
  if (res > 1e-6 * scale) {
    throw NumericalError(
        "large-residual: lambda is not an eigenvalue (residual " +
        std::to_string(res) + ")");
  }
  return x;
}

EpReport detect_pairs(const Spectrum& spec) {
  const int n = static_cast<int>(spec.eigenvalues.size());
  EpReport report;
  report.gamma_at_detection = -spec.params.impurity.imag();
  if (n < 2) {
    if (n == 1) report.unpaired.push_back(0);
    return report;
  }

  struct Edge {
    double gap;
    int a, b;
  };
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      edges.push_back({std::abs(spec.eigenvalues[i] - spec.eigenvalues[j]),
                       i, j});
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.gap < b.gap; });
  report.min_gap = edges.front().gap;

  const bool overlaps = spec.has_vectors();
  auto overlap_defect = [&](int a, int b) {
    if (!overlaps) return 1.0;
    Complex dot{0.0, 0.0};
    const auto& va = spec.eigenvectors[a];
    const auto& vb = spec.eigenvectors[b];
    for (size_t j = 0; j < va.size(); ++j) dot += std::conj(va[j]) * vb[j];
    return 1.0 - std::abs(dot);
  };

  std::vector<char> used(n, 0);
  for (const Edge& e : edges) {
    if (used[e.a] || used[e.b]) continue;
    used[e.a] = used[e.b] = 1;
    report.pairs.push_back({e.a, e.b, e.gap, overlap_defect(e.a, e.b)});
  }
  for (int i = 0; i < n; ++i) {
    if (!used[i]) report.unpaired.push_back(i);
  }

  for (const EigenPairMatch& pm : report.pairs) {
    const bool gap_ok = pm.gap < kEpGapTol;
    const bool ov_ok = !overlaps || pm.overlap_defect < kEpOverlapTol;
    if (gap_ok && ov_ok) ++report.coalesced_pairs;
  }

  // A triple: a tight pair plus any further eigenvalue within the
  // third-order tolerance of it, or a coalescence sitting on the imaginary
  // axis while another zero-real-part eigenvalue is present.
  bool triple = false;
  for (const EigenPairMatch& pm : report.pairs) {
    if (pm.gap >= kTripleGapTol) continue;
    if (overlaps && pm.overlap_defect >= 1e-2) continue;
    const Complex center = spec.eigenvalues[pm.first];
    const bool on_axis = std::abs(center.real()) < kAxisTol;
    for (int i = 0; i < n && !triple; ++i) {
      if (i == pm.first || i == pm.second) continue;
      if (std::abs(spec.eigenvalues[i] - center) < kTripleGapTol) {
        triple = true;
      }
      if (on_axis && std::abs(spec.eigenvalues[i].real()) < kAxisTol) {
        triple = true;
      }
    }
    if (triple) break;
  }

  if (triple) {
    report.classification = EpClass::third_order_ep;
  } else if (n % 2 == 0 && report.coalesced_pairs == n / 2) {
    report.classification = EpClass::all_paired_ep;
  } else if (report.coalesced_pairs >= 1) {
    report.classification = EpClass::single_extra_ep;
  } else {
    report.classification = EpClass::no_ep;
  }
  return report;
}

EpLocation locate_ep_on_grid(int length, int impurity_site,
                             std::span<const double> grid) {
  if (grid.size() < 3) {
    throw ValidationError("invalid-window: need at least 3 grid points");
  }
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ValidationError("invalid-window: grid must be strictly increasing");
    }
  }
  const std::vector<GapDip> dips =
      refine_interior_minima(length, impurity_site, grid);
  if (dips.empty()) {
    throw NumericalError(
        "no-minimum: min-gap function is monotone on the window");
  }
  const double gamma_c = dips.front().gamma;
  const Spectrum spec =
      solve_dense(absorbing_impurity(length, impurity_site, gamma_c), true);
  EpReport report = detect_pairs(spec);
  report.gamma_at_detection = gamma_c;
  return {gamma_c, report};
}

EpLocation locate_ep(int length, int impurity_site, double gamma_lo,
                     double gamma_hi) {
  if (!(gamma_lo >= 0.0) || !(gamma_hi > gamma_lo)) {
    throw ValidationError("invalid-window: need 0 <= gamma_lo < gamma_hi");
  }
  const int m = 160;
  std::vector<double> grid(m);
  const double h = (gamma_hi - gamma_lo) / m;
  for (int i = 0; i < m; ++i) grid[i] = gamma_lo + (i + 0.5) * h;
  return locate_ep_on_grid(length, impurity_site, grid);
}

int bound_state_index(const Spectrum& spec) {
  const LatticeParams& par = spec.params;
  const int n = static_cast<int>(spec.eigenvalues.size());
  int pick = -1;
  if (is_absorbing(par)) {
    const double gamma = -par.impurity.imag();
    if (gamma <= 2.0) {
      throw NumericalError(
          "no-bound-state: no separated state for gamma <= 2 (gamma = " +
          std::to_string(gamma) + ")");
    }
    for (int i = 0; i < n; ++i) {
      const Complex ev = spec.eigenvalues[i];
      if (std::abs(ev.real()) < 1e-6) {
        if (pick < 0 || ev.imag() < spec.eigenvalues[pick].imag()) pick = i;
      }
    }
  } else {
    if (par.impurity.real() == 0.0) {
      throw NumericalError("no-bound-state: zero impurity");
    }
    for (int i = 0; i < n; ++i) {
      const double re = std::abs(spec.eigenvalues[i].real());
      if (re > 2.0) {
        if (pick < 0 ||
            re > std::abs(spec.eigenvalues[pick].real())) {
          pick = i;
        }
      }
    }
  }
  if (pick < 0) {
    throw NumericalError(
        "no-bound-state: no eigenvalue separates by the selection criterion");
  }
  return pick;
}

BoundStateInfo bound_state(const Spectrum& spec) {
  if (!spec.has_vectors()) {
    throw ValidationError("bound-state requires eigenvectors");
  }
  const LatticeParams& par = spec.params;
  const int pick = bound_state_index(spec);

  BoundStateInfo info;
  info.eigenvalue = spec.eigenvalues[pick];
  info.index = pick;
  const auto& v = spec.eigenvectors[pick];
  info.profile.resize(v.size());
  double total = 0.0;
  for (size_t j = 0; j < v.size(); ++j) {
    info.profile[j] = std::norm(v[j]);
    total += info.profile[j];
  }
  for (double& p : info.profile) p /= total;

  const int argmax = static_cast<int>(std::distance(
      info.profile.begin(),
      std::max_element(info.profile.begin(), info.profile.end())));
  if (std::abs(argmax + 1 - par.impurity_site) > 1) {
    throw NumericalError(
        "no-bound-state: occupancy not peaked at the impurity site");
  }

  const LocFit fit = fit_localization_length(info.profile, par.impurity_site,
                                             /*check_quality=*/false);
  info.localization_length = fit.alpha;
  info.fit_r_squared = fit.r_squared;
  return info;
}

Spectrum order_eigenpairs(Spectrum spec) {
  const int n = static_cast<int>(spec.eigenvalues.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Complex& x = spec.eigenvalues[a];
    const Complex& y = spec.eigenvalues[b];
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  std::vector<Complex> values(n);
  for (int i = 0; i < n; ++i) values[i] = spec.eigenvalues[order[i]];
  spec.eigenvalues = std::move(values);
  if (spec.has_vectors()) {
    std::vector<std::vector<Complex>> vecs(n);
    for (int i = 0; i < n; ++i) vecs[i] = std::move(spec.eigenvectors[order[i]]);
    spec.eigenvectors = std::move(vecs);
  }
  return spec;
}

} // namespace nhlatt
