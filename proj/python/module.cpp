// Python bindings for the chain-impurity toolkit.

#include "nhlatt/continuum.hpp"
#include "nhlatt/dynamics.hpp"
#include "nhlatt/errors.hpp"
#include "nhlatt/experiments.hpp"
#include "nhlatt/lattice.hpp"
#include "nhlatt/spectral.hpp"
#include "nhlatt/version.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace nhlatt;

PYBIND11_MODULE(nhlatt, m) {
  m.doc() = "Spectra, exceptional points and wavepacket scattering for a "
            "tight-binding chain with one absorbing impurity";
  m.attr("__version__") = kVersion;

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_RuntimeError);

  // lattice ------------------------------------------------------------
  py::class_<LatticeParams>(m, "LatticeParams")
      .def(py::init<int, int, Complex>(), "length"_a, "impurity_site"_a,
           "impurity"_a)
      .def_readonly("length", &LatticeParams::length)
      .def_readonly("impurity_site", &LatticeParams::impurity_site)
      .def_readonly("impurity", &LatticeParams::impurity);

  m.def("absorbing_impurity", &absorbing_impurity, "length"_a, "site"_a,
        "gamma"_a);
  m.def("real_impurity", &real_impurity, "length"_a, "site"_a, "strength"_a);
  m.def("central_site", &central_site, "length"_a);

  py::class_<TridiagOperator>(m, "TridiagOperator")
      .def_readonly("diag", &TridiagOperator::diag)
      .def_readonly("offdiag", &TridiagOperator::offdiag)
      .def("dim", &TridiagOperator::dim)
      .def("apply",
           [](const TridiagOperator& op, const std::vector<Complex>& v) {
             return op.apply(v);
           },
           "v"_a)
      .def("trace", &TridiagOperator::trace);

  m.def("build_hamiltonian", &build_hamiltonian, "params"_a);

  // charpoly -----------------------------------------------------------
  m.def("k_eval", &k_eval, "n"_a, "lam"_a);
  m.def(
      "charpoly_eval",
      [](int length, int site, double gamma, Complex lam) {
        return charpoly_eval({length, site, gamma}, lam);
      },
      "length"_a, "site"_a, "gamma"_a, "lam"_a);
  m.def(
      "charpoly_derivative",
      [](int length, int site, double gamma, Complex lam) {
        return charpoly_derivative({length, site, gamma}, lam);
      },
      "length"_a, "site"_a, "gamma"_a, "lam"_a);
  m.def(
      "symmetry_check",
      [](int length, int site, double gamma, Complex lam) {
        return symmetry_check({length, site, gamma}, lam);
      },
      "length"_a, "site"_a, "gamma"_a, "lam"_a);

  // continuum ------------------------------------------------------------
  m.def(
      "continuum_amplitudes",
      [](double k, double gamma, double hbar, double mass) {
        const ScatteringAmplitudes a =
            continuum_amplitudes({k, gamma, hbar, mass});
        return py::make_tuple(a.reflection, a.transmission);
      },
      "k"_a, "gamma"_a, "hbar"_a = 1.0, "mass"_a = 0.5);
  m.def(
      "continuum_rta",
      [](double k, double gamma, double hbar, double mass) {
        const RtaTriple t = continuum_rta({k, gamma, hbar, mass});
        return py::make_tuple(t.reflection, t.transmission, t.absorption);
      },
      "k"_a, "gamma"_a, "hbar"_a = 1.0, "mass"_a = 0.5);
  m.def("gamma_star", &gamma_star, "k"_a, "hbar"_a = 1.0, "mass"_a = 0.5);

  // spectral -------------------------------------------------------------
  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("eigenvalues", &Spectrum::eigenvalues)
      .def_readonly("eigenvectors", &Spectrum::eigenvectors)
      .def_readonly("near_defective", &Spectrum::near_defective)
      .def_property_readonly("backend", [](const Spectrum& s) {
        return s.backend == SpectralBackend::dense_qr ? "dense-qr"
                                                      : "charpoly-roots";
      });

  m.def("solve_dense", &solve_dense, "params"_a, "want_vectors"_a,
        "seed"_a = kDefaultSeed);
  m.def(
      "solve_charpoly",
      [](int length, int site, double gamma) {
        return solve_charpoly({length, site, gamma});
      },
      "length"_a, "site"_a, "gamma"_a);
  m.def("order_eigenpairs", &order_eigenpairs, "spec"_a);
  m.def("eigenvector_transfer", &eigenvector_transfer, "op"_a, "lam"_a);

  py::class_<EigenPairMatch>(m, "EigenPairMatch")
      .def_readonly("first", &EigenPairMatch::first)
      .def_readonly("second", &EigenPairMatch::second)
      .def_readonly("gap", &EigenPairMatch::gap)
      .def_readonly("overlap_defect", &EigenPairMatch::overlap_defect);

  py::class_<EpReport>(m, "EpReport")
      .def_readonly("pairs", &EpReport::pairs)
      .def_readonly("unpaired", &EpReport::unpaired)
      .def_readonly("gamma_at_detection", &EpReport::gamma_at_detection)
      .def_readonly("min_gap", &EpReport::min_gap)
      .def_readonly("coalesced_pairs", &EpReport::coalesced_pairs)
      .def_property_readonly("classification", [](const EpReport& r) {
        return to_string(r.classification);
      });

  m.def("detect_pairs", &detect_pairs, "spec"_a);
  m.def(
      "locate_ep",
      [](int length, int site, double lo, double hi) {
        const EpLocation loc = locate_ep(length, site, lo, hi);
        return py::make_tuple(loc.gamma_c, loc.report);
      },
      "length"_a, "site"_a, "gamma_lo"_a, "gamma_hi"_a);

  py::class_<BoundStateInfo>(m, "BoundStateInfo")
      .def_readonly("eigenvalue", &BoundStateInfo::eigenvalue)
      .def_readonly("profile", &BoundStateInfo::profile)
      .def_readonly("localization_length",
                    &BoundStateInfo::localization_length)
      .def_readonly("fit_r_squared", &BoundStateInfo::fit_r_squared)
      .def_readonly("index", &BoundStateInfo::index);

  m.def("bound_state", &bound_state, "spec"_a);
  m.def("bound_state_index", &bound_state_index, "spec"_a);

  // dynamics -------------------------------------------------------------
  py::class_<WaveState>(m, "WaveState")
      .def_readonly("amplitudes", &WaveState::amplitudes)
      .def_readonly("time", &WaveState::time)
      .def("dim", &WaveState::dim);

  m.def("squared_norm", &squared_norm, "state"_a);
  m.def(
      "init_wavepacket",
      [](int length, int center, double sigma, double k) {
        return init_wavepacket(length, {center, sigma, k});
      },
      "length"_a, "center"_a, "sigma"_a, "k"_a);
  m.def(
      "propagate",
      [](const TridiagOperator& op, const WaveState& state, double t_final,
         double tol) { return propagate(op, state, t_final, tol); },
      "op"_a, "state"_a, "t_final"_a, "tol"_a);
  m.def("propagate_fixed", &propagate_fixed, "op"_a, "state"_a, "t_final"_a,
        "steps"_a);
  m.def(
      "measure_rta",
      [](const WaveState& state, int site) {
        const RtaFractions f = measure_rta(state, site);
        return py::make_tuple(f.reflection, f.transmission, f.absorption);
      },
      "state"_a, "impurity_site"_a);
  m.def(
      "observation_time",
      [](int length, int site, int center, double sigma, double k) {
        return observation_time(length, site, {center, sigma, k});
      },
      "length"_a, "impurity_site"_a, "center"_a, "sigma"_a, "k"_a);

  py::class_<RtaPoint>(m, "RtaPoint")
      .def_readonly("gamma", &RtaPoint::gamma)
      .def_readonly("momentum", &RtaPoint::momentum)
      .def_readonly("reflection", &RtaPoint::reflection)
      .def_readonly("transmission", &RtaPoint::transmission)
      .def_readonly("absorption", &RtaPoint::absorption)
      .def_readonly("t_obs", &RtaPoint::t_obs)
      .def_readonly("norm_final", &RtaPoint::norm_final)
      .def_readonly("absorbed_integral", &RtaPoint::absorbed_integral);

  m.def(
      "scatter_once",
      [](int length, int site, int center, double sigma, double k,
         double gamma, double tol) {
        return scatter_once(length, site, {center, sigma, k}, gamma, tol);
      },
      "length"_a, "impurity_site"_a, "center"_a, "sigma"_a, "k"_a, "gamma"_a,
      "tol"_a);

  // experiments ------------------------------------------------------------
  py::class_<LocFit>(m, "LocFit")
      .def_readonly("alpha", &LocFit::alpha)
      .def_readonly("r_squared", &LocFit::r_squared)
      .def_readonly("window_lo", &LocFit::window_lo)
      .def_readonly("window_hi", &LocFit::window_hi);

  m.def(
      "fit_localization_length",
      [](const std::vector<double>& profile, int site, bool check_quality) {
        return fit_localization_length(profile, site, check_quality);
      },
      "profile"_a, "impurity_site"_a, "check_quality"_a = true);

  m.def(
      "scan_rta",
      [](const std::vector<double>& gammas, int length, int site, int center,
         double sigma, double k, double tol) {
        const ScanGrid grid{ScanGrid::Axis::gamma, gammas};
        const ScatterGeometry geom{length, site, {center, sigma, k}, tol};
        const auto entries = scan_rta(grid, geom);
        py::list out;
        for (const auto& e : entries) {
          if (e.ok) {
            out.append(py::cast(e.point));
          } else {
            out.append(py::none());
          }
        }
        return out;
      },
      "gammas"_a, "length"_a, "impurity_site"_a, "center"_a, "sigma"_a, "k"_a,
      "tol"_a = 1e-8);
  m.def(
      "extract_gamma_star",
      [](const std::vector<RtaPoint>& points) {
        return extract_gamma_star(points);
      },
      "points"_a);
  m.def(
      "spectrum_sweep",
      [](const std::vector<double>& gammas, int length, int site) {
        const SpectrumSweep sweep =
            spectrum_sweep({ScanGrid::Axis::gamma, gammas}, length, site);
        py::list rows;
        for (const auto& branch : sweep.branches) rows.append(py::cast(branch));
        return py::make_tuple(sweep.gammas, rows);
      },
      "gammas"_a, "length"_a, "impurity_site"_a);
  m.def(
      "map_gamma_to_v",
      [](const std::vector<double>& gammas, int length) {
        return map_gamma_to_v(gammas, length).pairs;
      },
      "gammas"_a, "length"_a);

  py::class_<EpStructure>(m, "EpStructure")
      .def_readonly("length", &EpStructure::length)
      .def_readonly("impurity_site", &EpStructure::impurity_site)
      .def_readonly("gamma_c", &EpStructure::gamma_c)
      .def_readonly("gamma_1", &EpStructure::gamma_1)
      .def_readonly("bound_state_at_large_gamma",
                    &EpStructure::bound_state_at_large_gamma)
      .def_readonly("diagnostics", &EpStructure::diagnostics)
      .def_property_readonly("classification", [](const EpStructure& s) {
        return to_string(s.classification);
      });

  m.def("classify_ep_structure", &classify_ep_structure, "length"_a,
        "impurity_site"_a = 0);
  m.def(
      "scan_q",
      [](int length, const std::vector<int>& sites) {
        py::list out;
        for (const auto& e : scan_q(length, sites)) {
          out.append(py::make_tuple(e.site, e.gamma_c, e.min_gap));
        }
        return out;
      },
      "length"_a, "sites"_a);
  m.def(
      "dump_eigenstate_profiles",
      [](int length, int site, double gamma, const std::vector<int>& indices) {
        const EigenstateProfiles d =
            dump_eigenstate_profiles(length, site, gamma, indices);
        return py::make_tuple(d.indices, d.eigenvalues, d.occupancies,
                              d.participation);
      },
      "length"_a, "impurity_site"_a, "gamma"_a,
      "indices"_a = std::vector<int>{});
}
