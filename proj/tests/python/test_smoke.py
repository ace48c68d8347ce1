import cmath
import math

import pytest

import nhlatt


def test_version_string():
    assert nhlatt.__version__


def test_hamiltonian_shape_and_trace():
    params = nhlatt.absorbing_impurity(14, 7, 2.0)
    op = nhlatt.build_hamiltonian(params)
    assert op.dim() == 14
    assert op.trace() == pytest.approx(-2.0j)
    assert op.diag[6] == pytest.approx(-2.0j)
    assert all(e == -1.0 for e in op.offdiag)

    column = op.apply([0.0] * 6 + [1.0] + [0.0] * 7)
    assert column[5] == pytest.approx(-1.0)
    assert column[6] == pytest.approx(-2.0j)
    assert column[7] == pytest.approx(-1.0)


def test_validation_maps_to_value_error():
    with pytest.raises(ValueError):
        nhlatt.absorbing_impurity(4, 9, 1.0)


def test_free_chain_spectrum():
    spec = nhlatt.order_eigenpairs(
        nhlatt.solve_dense(nhlatt.absorbing_impurity(14, 7, 0.0), False)
    )
    for m, ev in enumerate(spec.eigenvalues, start=1):
        expected = -2.0 * math.cos(m * math.pi / 15.0)
        assert abs(ev - expected) < 1e-10


def test_backends_agree():
    a = nhlatt.solve_dense(nhlatt.absorbing_impurity(10, 5, 1.5), False)
    b = nhlatt.solve_charpoly(10, 5, 1.5)
    for ev in a.eigenvalues:
        assert min(abs(ev - w) for w in b.eigenvalues) < 1e-7


def test_pairing_at_the_exceptional_point():
    spec = nhlatt.solve_dense(nhlatt.absorbing_impurity(6, 3, 2.0), True)
    report = nhlatt.detect_pairs(spec)
    assert report.classification == "all-paired-EP"
    assert report.coalesced_pairs == 3
    assert all(p.gap < 1e-6 for p in report.pairs)


def test_charpoly_square_at_two():
    lam = 0.37 - 0.21j
    p = nhlatt.charpoly_eval(6, 3, 2.0, lam)
    k3 = nhlatt.k_eval(3, lam)
    k2 = nhlatt.k_eval(2, lam)
    assert abs(p - (k3 + 1j * k2) ** 2) < 1e-12


def test_continuum_marker_values():
    k = math.pi / 2
    r, t, a = nhlatt.continuum_rta(k, 2.0 * k)
    assert r == pytest.approx(0.25, abs=1e-12)
    assert t == pytest.approx(0.25, abs=1e-12)
    assert a == pytest.approx(0.5, abs=1e-12)
    assert nhlatt.gamma_star(k) == pytest.approx(math.pi)


def test_wavepacket_scattering_run():
    point = nhlatt.scatter_once(120, 60, 30, 10.0, math.pi / 2, 2.0, 1e-6)
    assert point.reflection + point.transmission + point.absorption == pytest.approx(1.0)
    assert abs(point.reflection - point.transmission) < 0.1
    assert point.absorption > 0.3
    assert abs(point.absorption - point.absorbed_integral) < 1e-4


def test_bound_state():
    spec = nhlatt.solve_dense(nhlatt.absorbing_impurity(42, 21, 2.5), True)
    info = nhlatt.bound_state(spec)
    assert abs(info.eigenvalue - (-1.5j)) < 0.01
    assert info.localization_length == pytest.approx(1.0 / math.log(2.0), rel=0.05)
    with pytest.raises(RuntimeError):
        nhlatt.bound_state(
            nhlatt.solve_dense(nhlatt.absorbing_impurity(14, 7, 1.0), True)
        )


def test_classification_smoke():
    assert nhlatt.classify_ep_structure(6).classification == "all-paired-EP"
    assert nhlatt.classify_ep_structure(9).classification == "no-EP"
