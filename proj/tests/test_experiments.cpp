#include "nhlatt/experiments.hpp"

#include "nhlatt/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace nhlatt;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<RtaPoint> ok_points(const std::vector<RtaScanEntry>& entries) {
  std::vector<RtaPoint> pts;
  for (const auto& e : entries) {
    if (e.ok) pts.push_back(e.point);
  }
  return pts;
}

int count_occupancy_minima(const std::vector<double>& occ) {
  int n = 0;
  for (size_t j = 1; j + 1 < occ.size(); ++j) {
    if (occ[j] < occ[j - 1] && occ[j] < occ[j + 1]) ++n;
  }
  return n;
}

} // namespace

TEST_CASE("grid helpers and validation") {
  const auto g = linear_grid(0.0, 1.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == doctest::Approx(0.5));

  CHECK_THROWS_AS(validate(ScanGrid{ScanGrid::Axis::gamma, {}}),
                  ValidationError);
  CHECK_THROWS_AS(validate(ScanGrid{ScanGrid::Axis::gamma, {1.0, 1.0}}),
                  ValidationError);
  CHECK_THROWS_AS(linear_grid(1.0, 0.0, 5), ValidationError);
}

TEST_CASE("thread count override") {
  setenv("NHLATT_THREADS", "3", 1);
  CHECK(scan_thread_count() == 3);
  unsetenv("NHLATT_THREADS");
  CHECK(scan_thread_count() >= 1);
}

TEST_CASE("rta scan over gamma: shape of the absorption curve") {
  const ScatterGeometry geom{160, 80, {40, 12.0, kPi / 2}, 1e-6};
  const ScanGrid grid{ScanGrid::Axis::gamma, linear_grid(0.0, 6.0, 19)};
  const auto entries = scan_rta(grid, geom);
  REQUIRE(entries.size() == 19);
  for (const auto& e : entries) REQUIRE(e.ok);
  const auto pts = ok_points(entries);

  // free chain endpoint
  CHECK(pts.front().absorption < 1e-4);
  for (const auto& p : pts) {
    CHECK(std::abs(p.reflection + p.transmission + p.absorption - 1.0) <
          1e-14);
    CHECK(p.absorption > -1e-9);
  }

  // single interior maximum
  size_t best = 0;
  for (size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].absorption > pts[best].absorption) best = i;
  }
  CHECK(best > 0);
  CHECK(best + 1 < pts.size());
  CHECK(pts[best].absorption > pts.back().absorption + 0.05);

  // the R = T crossing sits near the absorption maximum
  size_t cross = 0;
  double cross_val = 1e9;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double d = std::abs(pts[i].reflection - pts[i].transmission);
    if (d < cross_val) {
      cross_val = d;
      cross = i;
    }
  }
  CHECK(std::abs(pts[cross].gamma - extract_gamma_star(pts)) < 0.3 + 1e-9);
}

TEST_CASE("rta scan annotates failing grid points") {
  const ScatterGeometry geom{160, 80, {40, 12.0, kPi / 2}, 1e-6};
  const ScanGrid grid{ScanGrid::Axis::gamma, {-0.5, 1.0}};
  const auto entries = scan_rta(grid, geom);
  REQUIRE(entries.size() == 2);
  CHECK_FALSE(entries[0].ok);
  CHECK(entries[0].error.find("gamma") != std::string::npos);
  CHECK(entries[1].ok);
}

TEST_CASE("gamma_star extraction from a synthetic scan") {
  // plane-wave absorption shape with a known maximum at 2 sin k
  const double s = std::sin(kPi / 3);
  std::vector<RtaPoint> pts;
  for (double g = 0.0; g <= 4.01; g += 0.25) {
    RtaPoint p{};
    p.gamma = g;
    p.absorption = 4.0 * g * s / ((g + 2 * s) * (g + 2 * s));
    pts.push_back(p);
  }
  CHECK(std::abs(extract_gamma_star(pts) - 2.0 * s) < 0.05);

  std::vector<RtaPoint> few(pts.begin(), pts.begin() + 5);
  CHECK_THROWS_AS(extract_gamma_star(few), ValidationError);

  // monotone data puts the argmax at the boundary
  std::vector<RtaPoint> rising;
  for (double g = 0.0; g <= 2.0; g += 0.25) {
    RtaPoint p{};
    p.gamma = g;
    p.absorption = g;
    rising.push_back(p);
  }
  CHECK_THROWS_AS(extract_gamma_star(rising), NumericalError);
}

TEST_CASE("spectrum sweep: pre-paired imaginary parts and the merge at 2") {
  const ScanGrid grid{ScanGrid::Axis::gamma, linear_grid(0.0, 4.0, 201)};
  const SpectrumSweep sweep = spectrum_sweep(grid, 14, 7);
  REQUIRE(sweep.branches.size() == 201);

  // at gamma = 1 the values come in (a + ib, -a + ib) partners
  const auto& mid = sweep.branches[50]; // gamma = 1.0
  for (const Complex& v : mid) {
    bool partner = false;
    for (const Complex& w : mid) {
      if (&w == &v) continue;
      if (std::abs(w - (-std::conj(v))) < 1e-9) partner = true;
    }
    CHECK(partner);
    CHECK(std::abs(v.real()) > 0.01); // real parts still split
  }

  // at gamma = 2 the branches collapse pairwise
  const auto& at2 = sweep.branches[100];
  int tight_pairs = 0;
  for (size_t a = 0; a < at2.size(); ++a) {
    for (size_t b = a + 1; b < at2.size(); ++b) {
      if (std::abs(at2[a] - at2[b]) < 1e-6) ++tight_pairs;
    }
  }
  CHECK(tight_pairs == 7);

  // branch continuity away from the EP
  for (size_t g = 1; g < sweep.gammas.size(); ++g) {
    if (std::abs(sweep.gammas[g] - 2.0) < 0.2) continue;
    const double spacing = sweep.gammas[g] - sweep.gammas[g - 1];
    for (size_t b = 0; b < sweep.branches[g].size(); ++b) {
      CHECK(std::abs(sweep.branches[g][b] - sweep.branches[g - 1][b]) <
            10.0 * spacing);
    }
  }
}

TEST_CASE("spectrum sweep: bound branch approaches -i sqrt(gamma^2 - 4)") {
  const ScanGrid grid{ScanGrid::Axis::gamma, linear_grid(5.0, 10.0, 26)};
  const SpectrumSweep sweep = spectrum_sweep(grid, 14, 7);
  const auto& last = sweep.branches.back(); // gamma = 10
  double best = 1e9;
  for (const Complex& v : last) {
    best = std::min(best, std::abs(v - Complex{0.0, -std::sqrt(96.0)}));
  }
  CHECK(best < 0.05);
}

TEST_CASE("spectrum sweep rejects a coarse grid near gamma = 2") {
  const ScanGrid grid{ScanGrid::Axis::gamma, linear_grid(0.0, 4.0, 11)};
  CHECK_THROWS_AS(spectrum_sweep(grid, 14, 7), ValidationError);
}

TEST_CASE("localization fit recovers a planted decay") {
  const int length = 60, q = 30;
  std::vector<double> profile(length);
  double total = 0.0;
  for (int j = 1; j <= length; ++j) {
    profile[j - 1] = std::exp(-2.0 * std::abs(j - q) / 3.0);
    total += profile[j - 1];
  }
  for (double& p : profile) p /= total;
  const LocFit fit = fit_localization_length(profile, q);
  CHECK(std::abs(fit.alpha - 3.0) < 0.01);
  CHECK(fit.r_squared > 0.9999);
  CHECK(fit.window_lo >= 2);

  // flat profile: no decay to fit
  std::vector<double> flat(length, 1.0 / length);
  CHECK_THROWS_AS(fit_localization_length(flat, q), NumericalError);

  // too short on both sides
  std::vector<double> tiny(12, 1.0 / 12);
  CHECK_THROWS_AS(fit_localization_length(tiny, 6), ValidationError);
}

TEST_CASE("gamma to V map follows the infinite-chain identity") {
  const std::vector<double> gammas{2.5, 4.0, 10.0};
  const GammaVMap map = map_gamma_to_v(gammas, 42);
  REQUIRE(map.pairs.size() == 3);
  double prev_v = 0.0;
  double prev_ratio = 0.0;
  for (size_t i = 0; i < map.pairs.size(); ++i) {
    const double gamma = map.pairs[i].first;
    const double v = map.pairs[i].second;
    CHECK(std::abs(v - std::sqrt(gamma * gamma - 4.0)) < 0.05);
    CHECK(v < gamma);
    CHECK(v > prev_v);
    CHECK(v / gamma > prev_ratio); // ratio climbs toward 1
    prev_v = v;
    prev_ratio = v / gamma;
  }

  CHECK_THROWS_AS(map_gamma_to_v(std::vector<double>{1.5}, 42),
                  ValidationError);
}

TEST_CASE("size taxonomy on the small representatives") {
  CHECK(classify_ep_structure(6).classification == EpClass::all_paired_ep);
  CHECK(classify_ep_structure(6).gamma_c == doctest::Approx(2.0));

  const EpStructure eight = classify_ep_structure(8);
  CHECK(eight.classification == EpClass::single_extra_ep);
  CHECK(eight.gamma_1 > 2.0);

  const EpStructure seven = classify_ep_structure(7);
  CHECK(seven.classification == EpClass::third_order_ep);
  CHECK(seven.gamma_c > 2.0);

  const EpStructure nine = classify_ep_structure(9);
  CHECK(nine.classification == EpClass::no_ep);
  CHECK(nine.bound_state_at_large_gamma);
}

TEST_CASE("classification is total over L = 6..40 with the predicted class") {
  for (int length = 6; length <= 40; ++length) {
    const EpStructure s = classify_ep_structure(length);
    EpClass expected = EpClass::no_ep;
    switch (length % 4) {
      case 2: expected = EpClass::all_paired_ep; break;
      case 0: expected = EpClass::single_extra_ep; break;
      case 3: expected = EpClass::third_order_ep; break;
      case 1: expected = EpClass::no_ep; break;
    }
    INFO("L = ", length, " -> ", to_string(s.classification));
    CHECK(s.classification == expected);
    CHECK(s.bound_state_at_large_gamma);
  }
}

TEST_CASE("no-EP class still grows a localized axis eigenvalue") {
  // the unpaired zero-real-part eigenvalue picks up imaginary weight
  const Spectrum lo = solve_dense(absorbing_impurity(9, 5, 1.5), false);
  const Spectrum hi = solve_dense(absorbing_impurity(9, 5, 3.5), false);
  auto axis_im = [](const Spectrum& s) {
    double im = 0.0;
    for (const Complex& v : s.eigenvalues) {
      if (std::abs(v.real()) < 1e-8) im = std::min(im, v.imag());
    }
    return im;
  };
  CHECK(axis_im(hi) < axis_im(lo) - 0.5);
}

TEST_CASE("impurity-site scan: parity of the EP location") {
  const std::vector<int> sites{1, 2, 3, 7};
  const auto entries = scan_q(14, sites);
  REQUIRE(entries.size() == 4);
  CHECK(entries[0].gamma_c < 2.0);  // q = 1, odd
  CHECK(entries[1].gamma_c > 2.0);  // q = 2, even
  CHECK(entries[2].gamma_c < 2.0);  // q = 3, odd
  CHECK(std::abs(entries[3].gamma_c - 2.0) < 1e-3); // central
  for (const auto& e : entries) CHECK(e.min_gap < 1e-5);
}

TEST_CASE("edge impurity localizes the bound state at the edge") {
  const Spectrum spec = solve_dense(absorbing_impurity(14, 1, 6.0), true);
  const BoundStateInfo info = bound_state(spec);
  int argmax = 0;
  for (int j = 0; j < 14; ++j) {
    if (info.profile[j] > info.profile[argmax]) argmax = j;
  }
  CHECK(argmax == 0); // site 1
}

TEST_CASE("eigenstate profiles: free-chain occupancies are sin^2") {
  const EigenstateProfiles dump =
      dump_eigenstate_profiles(12, 6, 0.0, std::vector<int>{});
  REQUIRE(dump.indices.size() == 12);
  for (int m = 1; m <= 12; ++m) {
    const auto expected = oracle::open_chain_eigenvector(m, 12);
    for (int j = 0; j < 12; ++j) {
      CHECK(std::abs(dump.occupancies[m - 1][j] - std::norm(expected[j])) <
            1e-8);
    }
  }
}

TEST_CASE("eigenstate profiles: the localized state stands out") {
  const EigenstateProfiles dump =
      dump_eigenstate_profiles(42, 21, 2.5, std::vector<int>{});
  int localized = 0;
  for (size_t i = 0; i < dump.indices.size(); ++i) {
    if (dump.participation[i] < 42.0 / 10.0) ++localized;
  }
  CHECK(localized == 1);

  // band-edge states have fewer occupancy minima than band-center states
  const int edge_nodes = count_occupancy_minima(dump.occupancies.front());
  const int center_nodes = count_occupancy_minima(dump.occupancies[15]);
  CHECK(edge_nodes < center_nodes);
}
