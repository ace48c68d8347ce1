// nhlatt command-line front end: spectra, scattering scans, EP searches and
// bound-state analysis, exported as plot-ready CSV or JSON tables.

#include "nhlatt/continuum.hpp"
#include "nhlatt/dynamics.hpp"
#include "nhlatt/errors.hpp"
#include "nhlatt/experiments.hpp"
#include "nhlatt/lattice.hpp"
#include "nhlatt/spectral.hpp"
#include "nhlatt/table_io.hpp"
#include "nhlatt/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace nhlatt;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;

struct CommonOpts {
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-8;
  std::string config; // consumed in the pre-scan; registered so parsing
                      // accepts it anywhere
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "Output file path")->required();
  cmd->add_option("--format", c.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", c.seed, "Seed for randomized solver starts");
  cmd->add_option("--tol", c.tol, "Propagation tolerance");
  cmd->add_option("--config", c.config,
                  "JSON file of option values overriding the flags");
}

// momentum given either in radians or as a fraction of pi
struct MomentumOpt {
  double k = 0.0;
  double k_pi = -1.0;

  double resolve() const { return k_pi >= 0.0 ? k_pi * kPi : k; }
};

void add_momentum(CLI::App* cmd, MomentumOpt& m, bool required) {
  auto* rad = cmd->add_option("--k", m.k, "Momentum in radians");
  auto* frac =
      cmd->add_option("--k-pi", m.k_pi, "Momentum as a fraction of pi");
  frac->excludes(rad);
  if (required) {
    // one of the two must appear; validated after parsing
    (void)rad;
  }
}

json base_meta(const std::string& command, const CommonOpts& c) {
  return json{{"command", command},
              {"version", kVersion},
              {"format", c.format},
              {"seed", c.seed},
              {"tol", c.tol}};
}

void emit(const Table& table, const json& meta, const CommonOpts& c) {
  write_table(table, meta, parse_format(c.format), c.out);
}

std::vector<TableCell> spectrum_row(int index, const Complex& ev) {
  return {static_cast<double>(index), ev.real(), ev.imag()};
}

// ---------------------------------------------------------------------------

int run_spectrum(const CommonOpts& c, int length, int site, double gamma,
                 const std::string& backend, bool vectors, double gamma_min,
                 double gamma_max, int points) {
  json meta = base_meta("spectrum", c);
  meta["L"] = length;
  meta["q"] = site;
  meta["backend"] = backend;

  Table table;
  if (points > 0) {
    // sweep mode with continuity-tracked branches
    meta["gamma_min"] = gamma_min;
    meta["gamma_max"] = gamma_max;
    meta["points"] = points;
    const ScanGrid grid{ScanGrid::Axis::gamma,
                        linear_grid(gamma_min, gamma_max, points)};
    const SpectrumSweep sweep = spectrum_sweep(grid, length, site);
    table.columns = {"gamma", "branch", "re_lambda", "im_lambda", "ambiguous"};
    for (size_t g = 0; g < sweep.gammas.size(); ++g) {
      for (size_t b = 0; b < sweep.branches[g].size(); ++b) {
        table.rows.push_back({sweep.gammas[g], static_cast<double>(b + 1),
                              sweep.branches[g][b].real(),
                              sweep.branches[g][b].imag(),
                              static_cast<double>(sweep.ambiguous[g])});
      }
    }
    emit(table, meta, c);
    return 0;
  }

  meta["gamma"] = gamma;
  meta["vectors"] = vectors;
  Spectrum spec;
  if (backend == "charpoly") {
    if (vectors) {
      throw ValidationError(
          "invalid-backend: the charpoly backend produces no eigenvectors");
    }
    spec = solve_charpoly({length, site, gamma});
  } else {
    spec = solve_dense(absorbing_impurity(length, site, gamma), vectors,
                       c.seed);
  }
  spec = order_eigenpairs(std::move(spec));

  table.columns = {"index", "re_lambda", "im_lambda"};
  if (vectors) {
    for (int j = 1; j <= length; ++j) {
      table.columns.push_back("occ_" + std::to_string(j));
    }
  }
  for (int i = 0; i < length; ++i) {
    auto row = spectrum_row(i + 1, spec.eigenvalues[i]);
    if (vectors) {
      for (const Complex& a : spec.eigenvectors[i]) {
        row.push_back(std::norm(a));
      }
    }
    table.rows.push_back(std::move(row));
  }
  emit(table, meta, c);
  return 0;
}

int run_scatter(const CommonOpts& c, int length, int site, int j0,
                double sigma, double k, double gamma,
                const std::string& occupancy_out, int stride) {
  json meta = base_meta("scatter", c);
  meta["L"] = length;
  meta["q"] = site;
  meta["j0"] = j0;
  meta["sigma"] = sigma;
  meta["k"] = k;
  meta["gamma"] = gamma;

  std::ofstream occ;
  long step_count = 0;
  StepObserver observer;
  if (!occupancy_out.empty()) {
    occ.open(occupancy_out, std::ios::binary);
    if (!occ) {
      throw IoError("io-error: cannot open " + occupancy_out);
    }
    occ << "t,j,occupancy\n";
    observer = [&](const WaveState& s) {
      if (step_count++ % stride != 0) return;
      for (int j = 1; j <= s.dim(); ++j) {
        occ << format_double(s.time) << ',' << j << ','
            << format_double(std::norm(s.amplitudes[j - 1])) << '\n';
      }
    };
    meta["occupancy_out"] = occupancy_out;
    meta["stride"] = stride;
  }

  const RtaPoint p =
      scatter_once(length, site, {j0, sigma, k}, gamma, c.tol, observer);
  Table table;
  table.columns = {"gamma", "k", "R", "T", "A", "t_obs", "norm_final",
                   "absorbed_integral"};
  table.rows.push_back({p.gamma, p.momentum, p.reflection, p.transmission,
                        p.absorption, p.t_obs, p.norm_final,
                        p.absorbed_integral});
  emit(table, meta, c);
  return 0;
}

int run_scan_gamma(const CommonOpts& c, int length, int site, int j0,
                   double sigma, double k, double gamma_min, double gamma_max,
                   int points) {
  json meta = base_meta("scan-gamma", c);
  meta["L"] = length;
  meta["q"] = site;
  meta["j0"] = j0;
  meta["sigma"] = sigma;
  meta["k"] = k;
  meta["gamma_min"] = gamma_min;
  meta["gamma_max"] = gamma_max;
  meta["points"] = points;

  const ScanGrid grid{ScanGrid::Axis::gamma,
                      linear_grid(gamma_min, gamma_max, points)};
  const ScatterGeometry geom{length, site, {j0, sigma, k}, c.tol};
  const auto entries = scan_rta(grid, geom);

  Table table;
  table.columns = {"gamma", "k", "R", "T", "A", "t_obs", "norm_final",
                   "absorbed_integral"};
  json failures = json::array();
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (!e.ok) {
      std::cerr << "scan point gamma = " << grid.values[i]
                << " failed: " << e.error << "\n";
      failures.push_back({{"gamma", grid.values[i]}, {"error", e.error}});
      continue;
    }
    table.rows.push_back({e.point.gamma, e.point.momentum, e.point.reflection,
                          e.point.transmission, e.point.absorption,
                          e.point.t_obs, e.point.norm_final,
                          e.point.absorbed_integral});
  }
  meta["failures"] = failures;
  emit(table, meta, c);
  return table.rows.empty() ? 2 : 0;
}

int run_scan_k(const CommonOpts& c, int length, int site, int j0, double sigma,
               std::vector<double> k_values, double gamma_min,
               double gamma_max, int points) {
  json meta = base_meta("scan-k", c);
  meta["L"] = length;
  meta["q"] = site;
  meta["j0"] = j0;
  meta["sigma"] = sigma;
  meta["k_values"] = k_values;
  meta["gamma_min"] = gamma_min;
  meta["gamma_max"] = gamma_max;
  meta["points"] = points;

  Table table;
  table.columns = {"k", "gamma_star", "gamma_star_continuum", "two_sin_k"};
  for (const double k : k_values) {
    const ScanGrid grid{ScanGrid::Axis::gamma,
                        linear_grid(gamma_min, gamma_max, points)};
    const ScatterGeometry geom{length, site, {j0, sigma, k}, c.tol};
    const auto entries = scan_rta(grid, geom);
    std::vector<RtaPoint> pts;
    for (const auto& e : entries) {
      if (e.ok) pts.push_back(e.point);
    }
    const double star = extract_gamma_star(pts);
    table.rows.push_back(
        {k, star, gamma_star(k), 2.0 * std::sin(k)});
  }
  emit(table, meta, c);
  return 0;
}

int run_scan_q(const CommonOpts& c, int length, std::vector<int> sites,
               double gamma_min, double gamma_max) {
  json meta = base_meta("scan-q", c);
  meta["L"] = length;
  meta["q_values"] = sites;
  meta["gamma_min"] = gamma_min;
  meta["gamma_max"] = gamma_max;

  Table table;
  table.columns = {"q", "gamma_c", "min_gap"};
  for (const int q : sites) {
    const EpLocation loc = locate_ep(length, q, gamma_min, gamma_max);
    table.rows.push_back(
        {static_cast<double>(q), loc.gamma_c, loc.report.min_gap});
  }
  emit(table, meta, c);
  return 0;
}

int run_bound_state(const CommonOpts& c, int length, int site,
                    std::optional<double> gamma, std::optional<double> v,
                    const std::string& profile_out) {
  if (gamma.has_value() == v.has_value()) {
    throw ValidationError(
        "invalid-impurity: give exactly one of --gamma or --V");
  }
  const LatticeParams params = gamma ? absorbing_impurity(length, site, *gamma)
                                     : real_impurity(length, site, *v);
  json meta = base_meta("bound-state", c);
  meta["L"] = length;
  meta["q"] = site;
  if (gamma) meta["gamma"] = *gamma;
  if (v) meta["V"] = *v;

  const Spectrum spec = solve_dense(params, true, c.seed);
  const BoundStateInfo info = bound_state(spec);

  Table table;
  table.columns = {"re_lambda", "im_lambda", "alpha", "r_squared"};
  table.rows.push_back({info.eigenvalue.real(), info.eigenvalue.imag(),
                        info.localization_length, info.fit_r_squared});
  emit(table, meta, c);

  if (!profile_out.empty()) {
    Table profile;
    profile.columns = {"j", "occupancy"};
    for (int j = 1; j <= length; ++j) {
      profile.rows.push_back(
          {static_cast<double>(j), info.profile[j - 1]});
    }
    json pmeta = meta;
    pmeta["table"] = "profile";
    write_table(profile, pmeta, parse_format(c.format), profile_out);
  }
  return 0;
}

int run_ep_locate(const CommonOpts& c, int length, int site, double gamma_min,
                  double gamma_max) {
  json meta = base_meta("ep-locate", c);
  meta["L"] = length;
  meta["q"] = site;
  meta["gamma_min"] = gamma_min;
  meta["gamma_max"] = gamma_max;

  const EpLocation loc = locate_ep(length, site, gamma_min, gamma_max);
  Table table;
  table.columns = {"gamma_c", "min_gap", "coalesced_pairs", "classification"};
  table.rows.push_back({loc.gamma_c, loc.report.min_gap,
                        static_cast<double>(loc.report.coalesced_pairs),
                        TableCell{to_string(loc.report.classification)}});
  emit(table, meta, c);
  return 0;
}

int run_classify_ep(const CommonOpts& c, int length, int site) {
  json meta = base_meta("classify-ep", c);
  meta["L"] = length;
  meta["q"] = site;

  const EpStructure s = classify_ep_structure(length, site);
  std::cerr << s.diagnostics << "\n";
  Table table;
  table.columns = {"L",       "q",       "l_mod_4",
                   "classification", "gamma_c", "gamma_1",
                   "bound_state_large_gamma"};
  table.rows.push_back({static_cast<double>(s.length),
                        static_cast<double>(s.impurity_site),
                        static_cast<double>(s.length % 4),
                        TableCell{to_string(s.classification)}, s.gamma_c,
                        s.gamma_1,
                        static_cast<double>(s.bound_state_at_large_gamma)});
  emit(table, meta, c);
  return 0;
}

int run_profiles(const CommonOpts& c, int length, int site, double gamma,
                 std::vector<int> indices) {
  json meta = base_meta("profiles", c);
  meta["L"] = length;
  meta["q"] = site;
  meta["gamma"] = gamma;
  meta["indices"] = indices;

  const EigenstateProfiles dump =
      dump_eigenstate_profiles(length, site, gamma, indices);
  Table table;
  table.columns = {"index", "re_lambda", "im_lambda"};
  for (int j = 1; j <= length; ++j) {
    table.columns.push_back("occ_" + std::to_string(j));
  }
  for (size_t i = 0; i < dump.indices.size(); ++i) {
    auto row = spectrum_row(dump.indices[i], dump.eigenvalues[i]);
    for (const double occ : dump.occupancies[i]) row.push_back(occ);
    table.rows.push_back(std::move(row));
  }
  emit(table, meta, c);
  return 0;
}

int run_continuum(const CommonOpts& c, double k, double gamma_min,
                  double gamma_max, int points, double hbar, double mass) {
  json meta = base_meta("continuum", c);
  meta["k"] = k;
  meta["gamma_min"] = gamma_min;
  meta["gamma_max"] = gamma_max;
  meta["points"] = points;
  meta["hbar"] = hbar;
  meta["mass"] = mass;
  const double star = gamma_star(k, hbar, mass);
  meta["gamma_star"] = star;

  Table table;
  table.columns = {"gamma", "k", "R", "T", "A", "gamma_star"};
  for (const double g : linear_grid(gamma_min, gamma_max, points)) {
    const RtaTriple rta = continuum_rta({k, g, hbar, mass});
    table.rows.push_back(
        {g, k, rta.reflection, rta.transmission, rta.absorption, star});
  }
  emit(table, meta, c);
  return 0;
}

// --config pre-scan: pull the path out of argv, turn the JSON object into
// trailing tokens so they parse last and win.
std::vector<std::string> config_tokens(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      path = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      path = arg.substr(9);
    }
  }
  if (path.empty()) return {};

  std::ifstream in(path);
  if (!in) throw IoError("io-error: cannot open config " + path);
  json doc = json::parse(in, nullptr, true, true);
  if (!doc.is_object()) {
    throw ValidationError("invalid-config: top level must be an object");
  }
  std::vector<std::string> tokens;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
      continue;
    }
    tokens.push_back("--" + key);
    if (value.is_string()) {
      tokens.push_back(value.get<std::string>());
    } else {
      tokens.push_back(value.dump());
    }
  }
  return tokens;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra and scattering for a 1-D chain with one absorbing "
               "impurity"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  int length = 0, site = 0, j0 = 0, points = 0, stride = 100;
  double gamma = 0.0, sigma = 0.0, gamma_min = 0.0, gamma_max = 0.0;
  double hbar = 1.0, mass = 0.5;
  std::string backend = "dense", occupancy_out, profile_out;
  bool vectors = false;
  std::vector<double> k_values;
  std::vector<int> q_values, indices;
  std::optional<double> opt_gamma, opt_v;
  MomentumOpt momentum;
  CommonOpts common[10];
  std::function<int()> action;

  // spectrum ---------------------------------------------------------------
  auto* sc_spectrum = app.add_subcommand("spectrum", "Eigenvalue table");
  sc_spectrum->add_option("--L", length, "Chain length")->required();
  sc_spectrum->add_option("--q", site, "Impurity site (1-based)")->required();
  sc_spectrum->add_option("--gamma", gamma, "Absorbing strength");
  sc_spectrum->add_option("--backend", backend, "dense or charpoly")
      ->check(CLI::IsMember({"dense", "charpoly"}));
  sc_spectrum->add_flag("--vectors", vectors, "Also export occupancies");
  sc_spectrum->add_option("--gamma-min", gamma_min, "Sweep start");
  sc_spectrum->add_option("--gamma-max", gamma_max, "Sweep end");
  sc_spectrum->add_option("--points", points, "Sweep point count");
  add_common(sc_spectrum, common[0]);
  sc_spectrum->callback([&] {
    action = [&] {
      return run_spectrum(common[0], length, site, gamma, backend, vectors,
                          gamma_min, gamma_max, points);
    };
  });

  // scatter ----------------------------------------------------------------
  auto* sc_scatter =
      app.add_subcommand("scatter", "Single wavepacket scattering run");
  sc_scatter->add_option("--L", length)->required();
  sc_scatter->add_option("--q", site)->required();
  sc_scatter->add_option("--j0", j0, "Packet center (default L/4)");
  sc_scatter->add_option("--sigma", sigma, "Packet width")->required();
  add_momentum(sc_scatter, momentum, true);
  sc_scatter->add_option("--gamma", gamma)->required();
  sc_scatter->add_option("--occupancy-out", occupancy_out,
                         "CSV of (t, j, occupancy) along the run");
  sc_scatter->add_option("--stride", stride,
                         "Accepted steps between occupancy records");
  add_common(sc_scatter, common[1]);
  sc_scatter->callback([&] {
    action = [&] {
      if (j0 == 0) j0 = length / 4;
      return run_scatter(common[1], length, site, j0, sigma,
                         momentum.resolve(), gamma, occupancy_out, stride);
    };
  });

  // scan-gamma ---------------------------------------------------------------
  auto* sc_scan_gamma =
      app.add_subcommand("scan-gamma", "R/T/A versus strength");
  sc_scan_gamma->add_option("--L", length)->required();
  sc_scan_gamma->add_option("--q", site)->required();
  sc_scan_gamma->add_option("--j0", j0, "Packet center (default L/4)");
  sc_scan_gamma->add_option("--sigma", sigma)->required();
  add_momentum(sc_scan_gamma, momentum, true);
  sc_scan_gamma->add_option("--gamma-min", gamma_min)->required();
  sc_scan_gamma->add_option("--gamma-max", gamma_max)->required();
  sc_scan_gamma->add_option("--points", points)->required();
  add_common(sc_scan_gamma, common[2]);
  sc_scan_gamma->callback([&] {
    action = [&] {
      if (j0 == 0) j0 = length / 4;
      return run_scan_gamma(common[2], length, site, j0, sigma,
                            momentum.resolve(), gamma_min, gamma_max, points);
    };
  });

  // scan-k -------------------------------------------------------------------
  auto* sc_scan_k =
      app.add_subcommand("scan-k", "Absorption-maximizing strength versus k");
  sc_scan_k->add_option("--L", length)->required();
  sc_scan_k->add_option("--q", site)->required();
  sc_scan_k->add_option("--j0", j0, "Packet center (default L/4)");
  sc_scan_k->add_option("--sigma", sigma)->required();
  sc_scan_k->add_option("--k-values", k_values, "Momenta in radians")
      ->required()
      ->delimiter(',');
  sc_scan_k->add_option("--gamma-min", gamma_min)->required();
  sc_scan_k->add_option("--gamma-max", gamma_max)->required();
  sc_scan_k->add_option("--points", points)->required();
  add_common(sc_scan_k, common[3]);
  sc_scan_k->callback([&] {
    action = [&] {
      if (j0 == 0) j0 = length / 4;
      return run_scan_k(common[3], length, site, j0, sigma, k_values,
                        gamma_min, gamma_max, points);
    };
  });

  // scan-q ---------------------------------------------------------------
  auto* sc_scan_q =
      app.add_subcommand("scan-q", "EP location versus impurity site");
  sc_scan_q->add_option("--L", length)->required();
  sc_scan_q->add_option("--q-values", q_values, "Impurity sites")
      ->required()
      ->delimiter(',');
  sc_scan_q->add_option("--gamma-min", gamma_min)->default_val(0.3);
  sc_scan_q->add_option("--gamma-max", gamma_max)->default_val(3.8);
  add_common(sc_scan_q, common[4]);
  sc_scan_q->callback([&] {
    action = [&] {
      return run_scan_q(common[4], length, q_values, gamma_min, gamma_max);
    };
  });

  // bound-state ------------------------------------------------------------
  auto* sc_bound = app.add_subcommand("bound-state",
                                      "Localized eigenstate and its decay");
  sc_bound->add_option("--L", length)->required();
  sc_bound->add_option("--q", site)->required();
  double gamma_in = 0.0, v_in = 0.0;
  auto* og = sc_bound->add_option("--gamma", gamma_in, "Absorbing strength");
  auto* ov = sc_bound->add_option("--V", v_in, "Real impurity strength");
  ov->excludes(og);
  sc_bound->add_option("--profile-out", profile_out,
                       "Per-site occupancy table");
  add_common(sc_bound, common[5]);
  sc_bound->callback([&] {
    action = [&] {
      if (og->count()) opt_gamma = gamma_in;
      if (ov->count()) opt_v = v_in;
      return run_bound_state(common[5], length, site, opt_gamma, opt_v,
                             profile_out);
    };
  });

  // ep-locate ----------------------------------------------------------------
  auto* sc_ep = app.add_subcommand("ep-locate",
                                   "Locate an eigenvalue coalescence");
  sc_ep->add_option("--L", length)->required();
  sc_ep->add_option("--q", site)->required();
  sc_ep->add_option("--gamma-min", gamma_min)->required();
  sc_ep->add_option("--gamma-max", gamma_max)->required();
  add_common(sc_ep, common[6]);
  sc_ep->callback([&] {
    action = [&] {
      return run_ep_locate(common[6], length, site, gamma_min, gamma_max);
    };
  });

  // classify-ep --------------------------------------------------------------
  auto* sc_classify =
      app.add_subcommand("classify-ep", "Size-dependence class of the EP "
                                        "structure");
  sc_classify->add_option("--L", length)->required();
  sc_classify->add_option("--q", site, "Impurity site (default: central)");
  add_common(sc_classify, common[7]);
  sc_classify->callback([&] {
    action = [&] { return run_classify_ep(common[7], length, site); };
  });

  // profiles -----------------------------------------------------------------
  auto* sc_profiles =
      app.add_subcommand("profiles", "Eigenstate occupancy profiles");
  sc_profiles->add_option("--L", length)->required();
  sc_profiles->add_option("--q", site)->required();
  sc_profiles->add_option("--gamma", gamma)->required();
  sc_profiles->add_option("--indices", indices,
                          "1-based eigenstate indices (default: all)")
      ->delimiter(',');
  add_common(sc_profiles, common[8]);
  sc_profiles->callback([&] {
    action = [&] {
      return run_profiles(common[8], length, site, gamma, indices);
    };
  });

  // continuum ----------------------------------------------------------------
  auto* sc_continuum =
      app.add_subcommand("continuum", "Closed-form delta-potential curves");
  add_momentum(sc_continuum, momentum, true);
  sc_continuum->add_option("--gamma-min", gamma_min)->required();
  sc_continuum->add_option("--gamma-max", gamma_max)->required();
  sc_continuum->add_option("--points", points)->required();
  sc_continuum->add_option("--hbar", hbar);
  sc_continuum->add_option("--mass", mass);
  add_common(sc_continuum, common[9]);
  sc_continuum->callback([&] {
    action = [&] {
      return run_continuum(common[9], momentum.resolve(), gamma_min,
                           gamma_max, points, hbar, mass);
    };
  });

  try {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    for (const std::string& t : config_tokens(argc, argv)) args.push_back(t);
    // CLI11 consumes tokens back to front
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    return action ? action() : 1;
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
