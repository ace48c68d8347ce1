// Acceptance suite: one line per criterion, every tolerance pinned in code.

#include "nhlatt/continuum.hpp"
#include "nhlatt/dynamics.hpp"
#include "nhlatt/experiments.hpp"
#include "nhlatt/lattice.hpp"
#include "nhlatt/spectral.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace nhlatt;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << (detail.str().empty() ? "" : "; ") << "FAILED: " << what;
    }
  }
  void note(const std::string& what) {
    detail << (detail.str().empty() ? "" : "; ") << what;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double reflection_asymmetry(const std::vector<Complex>& values) {
  std::vector<Complex> mirrored;
  mirrored.reserve(values.size());
  for (const Complex& v : values) mirrored.push_back(-std::conj(v));
  return oracle::hausdorff(values, mirrored);
}

// criterion 6 data is reused by criterion 10
std::vector<RtaPoint> wide_scan;
constexpr double kWideScanTol = 1e-8;

void criterion_1(Outcome& out) {
  const Spectrum spec = solve_dense(absorbing_impurity(14, 7, 0.0), false);
  Spectrum ordered = order_eigenpairs(spec);
  double worst = 0.0;
  for (int m = 1; m <= 14; ++m) {
    worst = std::max(worst,
                     std::abs(ordered.eigenvalues[m - 1] -
                              Complex{oracle::open_chain_eigenvalue(m, 14), 0}));
  }
  out.require(worst < 1e-10, "hermitian eigenvalue error " +
                                 fmt(worst) + " >= 1e-10");
  out.note("max |dE| = " + fmt(worst));
}

void criterion_2(Outcome& out) {
  auto rng = oracle::seeded_rng(20250102u);
  std::uniform_int_distribution<int> len(2, 60);
  std::uniform_real_distribution<double> gam(0.0, 10.0);
  double worst_trace = 0.0, worst_sym = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int length = len(rng);
    std::uniform_int_distribution<int> site(1, length);
    const double gamma = gam(rng);
    const Spectrum spec =
        solve_dense(absorbing_impurity(length, site(rng), gamma), false);
    Complex sum{0, 0};
    for (const Complex& ev : spec.eigenvalues) sum += ev;
    worst_trace = std::max(
        worst_trace, std::abs(sum - Complex{0.0, -gamma}) / length);
    worst_sym = std::max(worst_sym, reflection_asymmetry(spec.eigenvalues));
  }
  out.require(worst_trace < 1e-8, "trace identity residual/L " +
                                      fmt(worst_trace));
  out.require(worst_sym < 1e-7,
              "reflection symmetry distance " + fmt(worst_sym));
}

void criterion_3(Outcome& out) {
  for (const int length : {14, 30}) {
    const Spectrum spec =
        solve_dense(absorbing_impurity(length, length / 2, 2.0), true);
    const EpReport rep = detect_pairs(spec);
    out.require(static_cast<int>(rep.pairs.size()) == length / 2,
                "pair count at L = " + fmt(length));
    int good = 0;
    for (const EigenPairMatch& pm : rep.pairs) {
      if (pm.gap < 1e-6 && pm.overlap_defect < 1e-3) ++good;
    }
    out.require(good == length / 2,
                "only " + fmt(good) + "/" +
                    fmt(length / 2) + " tight pairs at L = " +
                    fmt(length));
  }

  auto rng = oracle::seeded_rng(333u);
  double worst = 0.0;
  for (const int length : {6, 10, 14, 18}) {
    const int half = length / 2;
    for (const int q : {half, half + 1}) {
      const CharPolyParams p{length, q, 2.0};
      for (int trial = 0; trial < 100; ++trial) {
        const Complex lambda = oracle::random_unit_disk(rng, 2.0);
        const Complex kh = k_eval(half, lambda);
        const Complex khm = k_eval(half - 1, lambda);
        const Complex square = (kh + Complex{0, 1} * khm) *
                               (kh + Complex{0, 1} * khm);
        worst = std::max(worst, std::abs(charpoly_eval(p, lambda) - square));
      }
    }
  }
  out.require(worst < 1e-9,
              "perfect-square residual " + fmt(worst));
}

void criterion_4(Outcome& out) {
  double worst = 0.0;
  int worst_len = 0;
  double worst_gamma = 0.0;
  for (int length = 2; length <= 60; ++length) {
    std::vector<int> sites{1};
    if (length / 2 > 1) sites.push_back(length / 2);
    for (const int q : sites) {
      for (const double gamma : {0.0, 0.5, 1.0, 2.5, 5.0, 10.0}) {
        const Spectrum a = solve_charpoly({length, q, gamma});
        const Spectrum b =
            solve_dense(absorbing_impurity(length, q, gamma), false);
        const double d = oracle::hausdorff(a.eigenvalues, b.eigenvalues);
        if (d > worst) {
          worst = d;
          worst_len = length;
          worst_gamma = gamma;
        }
      }
    }
  }
  out.require(worst < 1e-6, "backend Hausdorff " + fmt(worst) +
                                " at L = " + fmt(worst_len) +
                                ", gamma = " + fmt(worst_gamma));
  out.note("worst Hausdorff = " + fmt(worst));
}

void criterion_5(Outcome& out) {
  for (const int length : {6, 10, 14, 30}) {
    const EpStructure s = classify_ep_structure(length);
    out.require(s.classification == EpClass::all_paired_ep,
                "L = " + fmt(length) + " classified " +
                    to_string(s.classification));
  }
  double prev_gamma1 = 1e9;
  for (const int length : {8, 12, 16}) {
    const EpStructure s = classify_ep_structure(length);
    out.require(s.classification == EpClass::single_extra_ep,
                "L = " + fmt(length) + " classified " +
                    to_string(s.classification));
    out.require(s.gamma_1 > 2.0,
                "gamma_1 <= 2 at L = " + fmt(length));
    out.require(s.gamma_1 < prev_gamma1,
                "gamma_1 not decreasing at L = " + fmt(length));
    prev_gamma1 = s.gamma_1;
  }
  for (const int length : {7, 11}) {
    const EpStructure s = classify_ep_structure(length);
    out.require(s.classification == EpClass::third_order_ep,
                "L = " + fmt(length) + " classified " +
                    to_string(s.classification));
  }
  for (const int length : {9, 13}) {
    const EpStructure s = classify_ep_structure(length);
    out.require(s.classification == EpClass::no_ep,
                "L = " + fmt(length) + " classified " +
                    to_string(s.classification));
  }
}

void criterion_6(Outcome& out) {
  const ScanGrid grid{ScanGrid::Axis::gamma, linear_grid(0.0, 10.0, 41)};
  const ScatterGeometry geom{500, 250, {125, 40.0, kPi / 2}, kWideScanTol};
  const auto entries = scan_rta(grid, geom);
  wide_scan.clear();
  for (const auto& e : entries) {
    if (!e.ok) {
      out.require(false, "scan point failed: " + e.error);
      return;
    }
    wide_scan.push_back(e.point);
  }

  size_t best = 0;
  for (size_t i = 1; i < wide_scan.size(); ++i) {
    if (wide_scan[i].absorption > wide_scan[best].absorption) best = i;
  }
  out.require(best > 0 && best + 1 < wide_scan.size(),
              "absorption maximum at a scan endpoint");
  bool unimodal = true;
  for (size_t i = 0; i + 1 < wide_scan.size(); ++i) {
    if (i < best &&
        wide_scan[i + 1].absorption < wide_scan[i].absorption - 1e-4) {
      unimodal = false;
    }
    if (i >= best &&
        wide_scan[i + 1].absorption > wide_scan[i].absorption + 1e-4) {
      unimodal = false;
    }
  }
  out.require(unimodal, "A(gamma) is not unimodal");

  const double star = extract_gamma_star(wide_scan);
  out.require(star >= 1.6 && star <= 2.4,
              "argmax A = " + fmt(star) + " outside [1.6, 2.4]");

  bool r_up = true, t_down = true;
  for (size_t i = 0; i + 1 < wide_scan.size(); ++i) {
    if (wide_scan[i + 1].reflection < wide_scan[i].reflection - 0.02)
      r_up = false;
    if (wide_scan[i + 1].transmission > wide_scan[i].transmission + 0.02)
      t_down = false;
  }
  out.require(r_up, "R not nondecreasing within 0.02");
  out.require(t_down, "T not nonincreasing within 0.02");

  const double a10 = wide_scan.back().absorption;
  out.require(a10 < 0.05,
              "A(gamma = 10) = " + fmt(a10) + " >= 0.05");
  out.note("argmax A = " + fmt(star) +
           ", A(10) = " + fmt(a10));
}

void criterion_7(Outcome& out) {
  const std::vector<double> gamma_grid = linear_grid(0.2, 4.0, 21);
  for (const double k : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
    const ScanGrid grid{ScanGrid::Axis::gamma, gamma_grid};
    const ScatterGeometry geom{250, 125, {62, 15.0, k}, 1e-7};
    const auto entries = scan_rta(grid, geom);
    std::vector<RtaPoint> pts;
    for (const auto& e : entries) {
      if (e.ok) pts.push_back(e.point);
    }
    if (pts.size() < 7) {
      out.require(false, "scan too sparse at k = " + fmt(k));
      continue;
    }
    const double star = extract_gamma_star(pts);
    const double expected = 2.0 * std::sin(k);
    out.require(std::abs(star - expected) <= 0.3,
                "lattice gamma* at k = " + fmt(k) + " is " +
                    fmt(star) + ", expected ~" +
                    fmt(expected));
    out.note("gamma*(" + fmt(k) + ") = " + fmt(star));

    // the continuum curve peaks at exactly 2k; its grid must bracket that
    const double spacing = gamma_grid[1] - gamma_grid[0];
    const std::vector<double> cont_grid =
        linear_grid(0.2, std::max(4.0, 2.0 * k + 2.0), 41);
    const double cont_spacing = cont_grid[1] - cont_grid[0];
    double cont_best = cont_grid.front();
    double cont_max = -1.0;
    for (const double g : cont_grid) {
      const double a = continuum_rta({k, g}).absorption;
      if (a > cont_max) {
        cont_max = a;
        cont_best = g;
      }
    }
    out.require(std::abs(cont_best - 2.0 * k) <
                    std::max(spacing, cont_spacing) + 1e-12,
                "continuum grid argmax off 2k at k = " + fmt(k));
    out.require(std::abs(gamma_star(k) - 2.0 * k) < 1e-14,
                "closed-form gamma* != 2k");
  }
}

void criterion_8(Outcome& out) {
  const double k = kPi / 2;
  const RtaTriple rta = continuum_rta({k, 2.0 * k});
  out.require(std::abs(rta.reflection - 0.25) < 1e-12, "R != 1/4 at 2k");
  out.require(std::abs(rta.transmission - 0.25) < 1e-12, "T != 1/4 at 2k");
  out.require(std::abs(rta.absorption - 0.5) < 1e-12, "A != 1/2 at 2k");
  out.require(std::abs(gamma_star(k, 1.0, 0.5) - kPi) < 1e-14,
              "gamma* != pi at k = pi/2");
}

void criterion_9(Outcome& out) {
  const Spectrum imag_spec = solve_dense(absorbing_impurity(42, 21, 2.5), true);
  const BoundStateInfo info = bound_state(imag_spec);
  out.require(std::abs(info.eigenvalue - Complex{0.0, -1.5}) < 0.01,
              "bound eigenvalue off -1.5i");
  out.require(info.fit_r_squared > 0.999,
              "profile fit r^2 = " + fmt(info.fit_r_squared));
  const double alpha_expected = 1.0 / std::log(2.0);
  out.require(std::abs(info.localization_length - alpha_expected) <
                  0.05 * alpha_expected,
              "alpha = " + fmt(info.localization_length) +
                  " not within 5% of 1/ln 2");

  const Spectrum real_spec = solve_dense(real_impurity(42, 21, -2.5), true);
  const BoundStateInfo real_info = bound_state(real_spec);
  out.require(real_info.localization_length < info.localization_length,
              "real potential not more localized");

  const GammaVMap map = map_gamma_to_v(std::vector<double>{2.5, 4.0, 10.0}, 42);
  double prev_ratio = 0.0;
  for (const auto& [gamma, v] : map.pairs) {
    const double expected = std::sqrt(gamma * gamma - 4.0);
    out.require(std::abs(v - expected) < 0.05,
                "V(" + fmt(gamma) + ") = " + fmt(v) +
                    ", expected " + fmt(expected));
    out.require(v / gamma > prev_ratio, "V/gamma not increasing");
    prev_ratio = v / gamma;
  }
  out.note("alpha = " + fmt(info.localization_length) +
           ", V(2.5) = " + fmt(map.pairs.front().second));
}

void criterion_10(Outcome& out) {
  // propagation against the eigendecomposition oracle
  const LatticeParams params = absorbing_impurity(20, 10, 1.3);
  const TridiagOperator op = build_hamiltonian(params);
  auto rng = oracle::seeded_rng(777u);
  WaveState psi0;
  psi0.amplitudes.resize(20);
  double total = 0.0;
  for (Complex& a : psi0.amplitudes) {
    a = oracle::random_unit_disk(rng, 1.0);
    total += std::norm(a);
  }
  for (Complex& a : psi0.amplitudes) a /= std::sqrt(total);

  const auto expected = oracle::spectral_propagate(op, psi0.amplitudes, 3.0);
  const WaveState got = propagate(op, psi0, 3.0, 1e-10);
  double err = 0.0;
  for (int j = 0; j < 20; ++j) {
    err += std::norm(got.amplitudes[j] - expected[j]);
  }
  err = std::sqrt(err);
  out.require(err < 1e-8,
              "oracle mismatch " + fmt(err) + " >= 1e-8");

  // norm conservation on the Hermitian chain
  const TridiagOperator free_op = build_hamiltonian({40, 20, Complex{0, 0}});
  WaveState unit;
  unit.amplitudes.assign(40, Complex{0, 0});
  for (int j = 0; j < 40; ++j) {
    unit.amplitudes[j] = oracle::random_unit_disk(rng, 1.0);
  }
  const double n0 = std::sqrt(squared_norm(unit));
  for (Complex& a : unit.amplitudes) a /= n0;
  const double tol = 1e-8;
  const WaveState evolved = propagate(free_op, unit, 10.0, tol);
  out.require(std::abs(squared_norm(evolved) - 1.0) < tol,
              "norm drift " + fmt(squared_norm(evolved) - 1.0));

  // absorption bookkeeping across the criterion-6 scan
  if (wide_scan.empty()) {
    out.require(false, "criterion 6 scan unavailable for bookkeeping check");
    return;
  }
  double worst = 0.0;
  for (const RtaPoint& p : wide_scan) {
    worst = std::max(worst, std::abs(p.absorption - p.absorbed_integral));
  }
  out.require(worst < 10.0 * kWideScanTol,
              "bookkeeping residual " + fmt(worst) + " >= " +
                  fmt(10.0 * kWideScanTol));
  out.note("oracle err = " + fmt(err));
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "hermitian baseline", 0.1, criterion_1},
      {2, "trace and reflection-symmetry invariants", 10.0, criterion_2},
      {3, "multiple EP at gamma = 2", 60.0, criterion_3},
      {4, "backend equivalence", 30.0, criterion_4},
      {5, "size-dependence taxonomy", 120.0, criterion_5},
      {6, "scattering scan reproduction", 300.0, criterion_6},
      {7, "gamma*(k) law", 600.0, criterion_7},
      {8, "continuum closed forms", 5.0, criterion_8},
      {9, "bound state and gamma-V map", 10.0, criterion_9},
      {10, "dynamics correctness", 60.0, criterion_10},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (seconds > c.budget_seconds) {
      out.require(false, "runtime " + fmt(seconds) +
                             " s exceeds the " +
                             fmt(c.budget_seconds) + " s budget");
    }
    if (!out.pass) ++failures;
    std::printf("[%s] criterion %2d (%7.2f s): %s%s%s\n",
                out.pass ? "PASS" : "FAIL", c.id, seconds, c.name,
                out.detail.str().empty() ? "" : " -- ",
                out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
