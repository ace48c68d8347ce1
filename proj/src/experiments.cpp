#include "nhlatt/experiments.hpp"

#include "nhlatt/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace nhlatt {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

template <typename F>
void parallel_for(int n, F&& body) {
  const int workers = std::min(scan_thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

std::vector<double> log_offset_grid(double base, double delta_lo,
                                    double delta_hi, int points) {
  std::vector<double> grid(points);
  const double l0 = std::log(delta_lo);
  const double l1 = std::log(delta_hi);
  for (int i = 0; i < points; ++i) {
    grid[i] = base + std::exp(l0 + (l1 - l0) * i / (points - 1));
  }
  return grid;
}

} // namespace

void validate(const ScanGrid& grid) {
  if (grid.values.empty()) {
    throw ValidationError("invalid-grid: no scan values");
  }
  for (size_t i = 1; i < grid.values.size(); ++i) {
    if (!(grid.values[i] > grid.values[i - 1])) {
      throw ValidationError("invalid-grid: values must be strictly increasing");
    }
  }
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) {
    throw ValidationError("invalid-grid: need points >= 2 and hi > lo");
  }
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) {
    v[i] = lo + (hi - lo) * i / (points - 1);
  }
  return v;
}

int scan_thread_count() {
  if (const char* env = std::getenv("NHLATT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<RtaScanEntry> scan_rta(const ScanGrid& gammas,
                                   const ScatterGeometry& geometry) {
  validate(gammas);
  if (gammas.axis != ScanGrid::Axis::gamma) {
    throw ValidationError("invalid-grid: scan_rta scans the gamma axis");
  }
  const int n = static_cast<int>(gammas.values.size());
  std::vector<RtaScanEntry> entries(n);
  parallel_for(n, [&](int i) {
    try {
      entries[i].point =
          scatter_once(geometry.length, geometry.impurity_site,
                       geometry.packet, gammas.values[i], geometry.tol);
      entries[i].ok = true;
    } catch (const std::exception& e) {
      entries[i].ok = false;
      entries[i].error = e.what();
    }
  });
  return entries;
}

double extract_gamma_star(std::span<const RtaPoint> scan) {
  if (scan.size() < 7) {
    throw ValidationError(
        "invalid-scan: need at least 7 points bracketing the maximum");
  }
  size_t best = 0;
  for (size_t i = 1; i < scan.size(); ++i) {
    if (scan[i].absorption > scan[best].absorption) best = i;
  }
  if (best == 0 || best + 1 == scan.size()) {
    throw NumericalError("max-at-boundary: argmax of A is a scan endpoint");
  }
  const double xa = scan[best - 1].gamma, ya = scan[best - 1].absorption;
  const double xb = scan[best].gamma, yb = scan[best].absorption;
  const double xc = scan[best + 1].gamma, yc = scan[best + 1].absorption;
  const double denom =
      2.0 * (xa * (yb - yc) + xb * (yc - ya) + xc * (ya - yb));
  if (denom == 0.0) return xb;
  const double num = xa * xa * (yb - yc) + xb * xb * (yc - ya) +
                     xc * xc * (ya - yb);
  return num / denom;
}

SpectrumSweep spectrum_sweep(const ScanGrid& gammas, int length,
                             int impurity_site) {
  validate(gammas);
  const auto& gs = gammas.values;
  // EP rendering near gamma = 2 needs a fine grid there.
  for (size_t i = 1; i < gs.size(); ++i) {
    const bool near_two = gs[i] > 1.9 && gs[i - 1] < 2.1;
    if (near_two && gs[i] - gs[i - 1] > 0.02 + 1e-12) {
      throw ValidationError(
          "invalid-grid: resolution must be <= 0.02 near gamma = 2");
    }
  }

  const int n = static_cast<int>(gs.size());
  std::vector<std::vector<Complex>> raw(n);
  parallel_for(n, [&](int i) {
    Spectrum s = order_eigenpairs(
        solve_dense(absorbing_impurity(length, impurity_site, gs[i]), false));
    raw[i] = std::move(s.eigenvalues);
  });

  SpectrumSweep sweep;
  sweep.gammas = gs;
  sweep.branches.resize(n);
  sweep.ambiguous.assign(n, 0);
  sweep.branches[0] = raw[0];
  for (int g = 1; g < n; ++g) {
    const auto& prev = sweep.branches[g - 1];
    const auto& cur = raw[g];
    const int m = static_cast<int>(cur.size());
    struct Edge {
      double dist;
      int from, to;
    };
    std::vector<Edge> edges;
    edges.reserve(m * m);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        edges.push_back({std::abs(prev[a] - cur[b]), a, b});
      }
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& x, const Edge& y) { return x.dist < y.dist; });
    std::vector<char> from_used(m, 0), to_used(m, 0);
    std::vector<Complex> row(m);
    double max_move = 0.0;
    int assigned = 0;
    for (const Edge& e : edges) {
      if (from_used[e.from] || to_used[e.to]) continue;
      from_used[e.from] = to_used[e.to] = 1;
      row[e.from] = cur[e.to];
      max_move = std::max(max_move, e.dist);
      if (++assigned == m) break;
    }
    sweep.branches[g] = std::move(row);
    const double spacing = gs[g] - gs[g - 1];
    sweep.ambiguous[g] = max_move > 10.0 * spacing ? 1 : 0;
  }
  return sweep;
}

LocFit fit_localization_length(std::span<const double> profile,
                               int impurity_site, bool check_quality) {
  const int n = static_cast<int>(profile.size());
  if (impurity_site < 1 || impurity_site > n) {
    throw ValidationError("invalid-q: impurity site outside the profile");
  }
  std::vector<double> xs, ys;
  int left = 0, right = 0;
  auto collect = [&](bool want_left) {
    for (int j = 1; j <= n; ++j) {
      const int d = std::abs(j - impurity_site);
      if (d < 2) continue;          // kink at the impurity
      if (j <= 5 || j > n - 5) continue; // edge contamination
      if ((j < impurity_site) != want_left) continue;
      if (!(profile[j - 1] > 0.0)) continue;
      xs.push_back(static_cast<double>(d));
      ys.push_back(std::log(profile[j - 1]));
      (want_left ? left : right)++;
    }
  };
  collect(true);
  if (left < 4) { // drop an unusable side
    xs.clear();
    ys.clear();
    left = 0;
  }
  collect(false);
  if (right < 4) {
    xs.resize(left);
    ys.resize(left);
    right = 0;
  }
  if (left < 4 && right < 4) {
    throw ValidationError(
        "window-too-small: fewer than 4 usable sites on both sides");
  }

  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double det = m * sxx - sx * sx;
  if (det == 0.0) {
    throw NumericalError("poor-fit: degenerate abscissa");
  }
  const double slope = (m * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / m;
  if (!(slope < 0.0)) {
    throw NumericalError("poor-fit: occupancy profile is not decaying");
  }

  double ss_res = 0.0, ss_tot = 0.0;
  const double mean_y = sy / m;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double fit = intercept + slope * xs[i];
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  LocFit out;
  out.alpha = -2.0 / slope;
  out.r_squared =
      ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  out.window_lo = static_cast<int>(*std::min_element(xs.begin(), xs.end()));
  out.window_hi = static_cast<int>(*std::max_element(xs.begin(), xs.end()));
  if (check_quality && out.r_squared < 0.99) {
    throw NumericalError("poor-fit: r^2 = " + std::to_string(out.r_squared));
  }
  return out;
}

GammaVMap map_gamma_to_v(std::span<const double> gammas, int length) {
  const int q = central_site(length);
  GammaVMap map;
  map.length = length;
  map.pairs.reserve(gammas.size());
  for (const double gamma : gammas) {
    if (!(gamma > 2.0)) {
      throw ValidationError("invalid-gamma: the map requires gamma > 2");
    }
    const Spectrum imag_spec =
        solve_dense(absorbing_impurity(length, q, gamma), true);
    const double alpha_target = bound_state(imag_spec).localization_length;

    auto alpha_real = [&](double v) -> double {
      // NaN when no state has separated from the band yet.
      try {
        const Spectrum s = solve_dense(real_impurity(length, q, v), true);
        return bound_state(s).localization_length;
      } catch (const NumericalError&) {
        return kNan;
      }
    };

    double lo = 1e-6, hi = gamma;
    if (!(alpha_real(hi) < alpha_target)) {
      throw NumericalError(
          "no-bound-state: real potential V = gamma fails to localize harder");
    }
    while (hi - lo > 1e-8) {
      const double mid = 0.5 * (lo + hi);
      const double a = alpha_real(mid);
      if (std::isnan(a) || a > alpha_target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    map.pairs.emplace_back(gamma, 0.5 * (lo + hi));
  }
  return map;
}

EpStructure classify_ep_structure(int length, int impurity_site) {
  const int q = impurity_site > 0 ? impurity_site : central_site(length);
  EpStructure out;
  out.length = length;
  out.impurity_site = q;
  out.gamma_c = kNan;
  out.gamma_1 = kNan;
  std::ostringstream diag;

  auto declared = [](const EpReport& rep) {
    return rep.coalesced_pairs >= 1 ||
           rep.classification == EpClass::third_order_ep;
  };

  if (length % 2 == 0) {
    const Spectrum at2 = solve_dense(absorbing_impurity(length, q, 2.0), true);
    const EpReport rep2 = detect_pairs(at2);
    diag << "gamma=2: " << rep2.coalesced_pairs << "/" << length / 2
         << " pairs coalesced (min gap " << rep2.min_gap << "). ";
    if (rep2.classification != EpClass::all_paired_ep) {
      throw NumericalError(
          "unclassifiable: expected full pairing at gamma = 2 for even L; " +
          diag.str());
    }
    out.gamma_c = 2.0;
    // Hunt for an extra EP above 2; log spacing resolves gamma_1 -> 2+.
    bool extra = false;
    try {
      const std::vector<double> grid = log_offset_grid(2.0, 1e-4, 1.6, 220);
      const EpLocation loc = locate_ep_on_grid(length, q, grid);
      if (declared(loc.report)) {
        extra = true;
        out.gamma_1 = loc.gamma_c;
        diag << "extra EP at gamma_1 = " << loc.gamma_c << " (min gap "
             << loc.report.min_gap << "). ";
      } else {
        diag << "no further coalescence above 2 (best dip gap "
             << loc.report.min_gap << " at " << loc.gamma_c << "). ";
      }
    } catch (const NumericalError& e) {
      diag << "no interior dip above 2 (" << e.what() << "). ";
    }
    out.classification =
        extra ? EpClass::single_extra_ep : EpClass::all_paired_ep;
  } else {
    try {
      const EpLocation loc = locate_ep(length, q, 1.2, 3.6);
      if (loc.report.classification == EpClass::third_order_ep) {
        out.classification = EpClass::third_order_ep;
        out.gamma_c = loc.gamma_c;
        diag << "third-order EP at gamma = " << loc.gamma_c << " (min gap "
             << loc.report.min_gap << "). ";
      } else if (declared(loc.report)) {
        out.classification = EpClass::single_extra_ep;
        out.gamma_c = loc.gamma_c;
        diag << "second-order EP at gamma = " << loc.gamma_c << ". ";
      } else {
        out.classification = EpClass::no_ep;
        diag << "shallowest dip gap " << loc.report.min_gap << " at "
             << loc.gamma_c << ", below no declaration threshold. ";
      }
    } catch (const NumericalError& e) {
      out.classification = EpClass::no_ep;
      diag << "no interior dip on [1.2, 3.6] (" << e.what() << "). ";
    }
  }

  try {
    const Spectrum large =
        solve_dense(absorbing_impurity(length, q, 6.0), false);
    bound_state_index(large);
    out.bound_state_at_large_gamma = true;
    diag << "bound state present at gamma = 6.";
  } catch (const NumericalError&) {
    out.bound_state_at_large_gamma = false;
    diag << "no bound state at gamma = 6.";
  }
  out.diagnostics = diag.str();
  return out;
}

std::vector<QScanEntry> scan_q(int length, std::span<const int> sites) {
  std::vector<QScanEntry> entries;
  entries.reserve(sites.size());
  for (const int q : sites) {
    const EpLocation loc = locate_ep(length, q, 0.3, 3.8);
    entries.push_back({q, loc.gamma_c, loc.report.min_gap});
  }
  return entries;
}

EigenstateProfiles dump_eigenstate_profiles(int length, int impurity_site,
                                            double gamma,
                                            std::span<const int> indices) {
  const Spectrum spec = order_eigenpairs(
      solve_dense(absorbing_impurity(length, impurity_site, gamma), true));
  EigenstateProfiles out;
  out.length = length;
  if (indices.empty()) {
    out.indices.resize(length);
    std::iota(out.indices.begin(), out.indices.end(), 1);
  } else {
    out.indices.assign(indices.begin(), indices.end());
    for (const int i : out.indices) {
      if (i < 1 || i > length) {
        throw ValidationError("invalid-index: eigenstate index outside [1, L]");
      }
    }
  }
  for (const int i : out.indices) {
    const auto& v = spec.eigenvectors[i - 1];
    std::vector<double> occ(v.size());
    double total = 0.0;
    for (size_t j = 0; j < v.size(); ++j) {
      occ[j] = std::norm(v[j]);
      total += occ[j];
    }
    double inv_pr = 0.0;
    for (double& p : occ) {
      p /= total;
      inv_pr += p * p;
    }
    out.eigenvalues.push_back(spec.eigenvalues[i - 1]);
    out.occupancies.push_back(std::move(occ));
    out.participation.push_back(1.0 / inv_pr);
  }
  return out;
}

} // namespace nhlatt
