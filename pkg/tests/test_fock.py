import math

import numpy as np
import pytest
from scipy.special import iv

from h10sim import fock
from h10sim.fock import (
    AlgebraKind,
    ModeOperator,
    ModeState,
    basis_state,
    bessel_I,
    bg_state,
    bg_vacuum_overlap,
    glauber_state,
    isw_hamiltonian,
    max_basis_overlap,
    su11_generators,
    su11_number,
    wh_ladder,
    wh_number,
)


def test_wh_ladder_small():
    a, ad = wh_ladder(2)
    assert np.array_equal(a.matrix, [[0, 1], [0, 0]])
    assert wh_ladder(3)[0].matrix[1, 2] == pytest.approx(math.sqrt(2), abs=0)
    for d in (2, 5, 9):
        a, ad = wh_ladder(d)
        assert np.all(a.matrix @ basis_state(0, d).amps == 0)
        assert np.array_equal(ad.matrix, a.matrix.conj().T)
    with pytest.raises(ValueError):
        wh_ladder(1)


def test_wh_number():
    assert np.array_equal(np.diag(wh_number(3).matrix), [0, 1, 2])
    a, ad = wh_ladder(8)
    # sqrt(n)**2 may round by one ulp
    assert np.allclose(wh_number(8).matrix, ad.matrix @ a.matrix, rtol=0, atol=1e-14)


def test_su11_actions():
    km, kp, k3 = su11_generators(6)
    e = lambda n: basis_state(n, 6).amps  # noqa: E731
    assert np.allclose(kp.matrix @ e(0), math.sqrt(3) * e(1), atol=1e-15)
    assert np.allclose(k3.matrix @ e(0), 3 * e(0), atol=0)
    assert np.allclose(km.matrix @ e(1), math.sqrt(3) * e(0), atol=1e-15)
    assert np.array_equal(kp.matrix, km.matrix.conj().T)


def test_su11_number_and_isw():
    assert np.array_equal(np.diag(su11_number(4).matrix), [0, 1, 2, 3])
    km, kp, k3 = su11_generators(8)
    assert np.array_equal(su11_number(8).matrix, (k3.matrix - 3 * np.eye(8)) / 2)
    assert np.array_equal(np.diag(su11_number(16).matrix), np.diag(wh_number(16).matrix))
    assert np.array_equal(np.diag(isw_hamiltonian(4).matrix), [0, 3, 8, 15])
    assert np.allclose(kp.matrix @ km.matrix, isw_hamiltonian(8).matrix, atol=1e-12)


def test_band_structure_is_enforced():
    m = np.zeros((3, 3))
    m[0, 1] = 1.0
    ModeOperator(m, "lowering")
    with pytest.raises(ValueError):
        ModeOperator(m, "raising")
    with pytest.raises(ValueError):
        ModeOperator(np.zeros((1, 1)))
    assert wh_ladder(4)[1].structure == "raising"


def test_operator_and_state_json_round_trip():
    km = su11_generators(5)[0]
    back = ModeOperator.from_json(km.to_json())
    assert back.structure == "lowering" and np.array_equal(back.matrix, km.matrix)
    s = bg_state(1.5 + 0.5j, 7)
    assert np.array_equal(ModeState.from_json(s.to_json()).amps, s.amps)


def test_ladder_reconstruction():
    d = 16
    kp = su11_generators(d)[1].matrix
    v = basis_state(0, d).amps
    for n in range(11):
        if n:
            v = kp @ v
        scale = math.sqrt(math.factorial(n) * math.factorial(n + 2) / 2)
        assert np.allclose(v / scale, basis_state(n, d).amps, atol=1e-10)


def test_algebra_kind_parse():
    assert AlgebraKind.parse("isw") is AlgebraKind.SU11
    assert AlgebraKind.parse("WH") is AlgebraKind.WEYL_HEISENBERG
    with pytest.raises(ValueError):
        AlgebraKind.parse("su2")


@pytest.mark.parametrize("x", [0.0, 1e-3, 0.7, 3.2, 10.0, 40.0])
@pytest.mark.parametrize("order", [0, 1, 2, 5])
def test_bessel_matches_scipy(order, x):
    assert bessel_I(order, x) == pytest.approx(iv(order, x), rel=1e-13, abs=1e-300)


def test_bessel_examples():
    assert bessel_I(2, 0.0) == 0.0
    assert abs(bessel_I(2, 3.2) - 2.788) < 1e-3
    z = 1.7
    series = sum(z ** (2 * n) / (math.factorial(n) * math.factorial(n + 2)) for n in range(60))
    assert series == pytest.approx(bessel_I(2, 2 * z) / z**2, rel=1e-14)


def test_glauber_state():
    assert np.array_equal(glauber_state(0, 6).amps, basis_state(0, 6).amps)
    assert abs(glauber_state(1.0, 32).norm_sq - 1) < 1e-12
    a = wh_ladder(64)[0].matrix
    s = glauber_state(1.5, 64)
    assert np.linalg.norm(a @ s.amps - 1.5 * s.amps) < 1e-8
    # lgamma path stays finite past 170!
    big = glauber_state(14.0, 320)
    assert np.all(np.isfinite(big.amps)) and abs(big.norm_sq - 1) < 1e-10


def test_glauber_tie_at_alpha_two():
    s = glauber_state(2.0, 64)
    probs = [math.exp(-4) * 4**n / math.factorial(n) for n in range(10)]
    best = max(probs)
    assert [n for n, p in enumerate(probs) if p == pytest.approx(best, rel=1e-12)] == [3, 4]
    n, p = max_basis_overlap(s)
    assert n == 3 and p == pytest.approx(best, rel=1e-12)


def test_bg_state_limit_and_normalization():
    assert fock.bg_normalizer(0) == pytest.approx(math.sqrt(2))
    assert np.allclose(bg_state(0, 8).amps, basis_state(0, 8).amps, atol=0)
    assert np.allclose(bg_state(1e-6, 8).amps, basis_state(0, 8).amps, atol=1e-6)
    for r in np.linspace(0.1, 4.0, 14):
        for phase in (0.0, 1.0, 2.5):
            assert abs(bg_state(r * np.exp(1j * phase), 64).norm_sq - 1) < 1e-10


def test_bg_truncation_not_renormalized_by_default():
    s = bg_state(4.0, 6)
    assert s.tail_mass > 1e-3
    assert abs(bg_state(4.0, 6, normalize=True).norm_sq - 1) < 1e-14


@pytest.mark.parametrize("z", [1.8, 2.0, 3.0, 2.0j, 1.2 - 1.7j])
def test_bg_eigenstate(z):
    km = su11_generators(64)[0].matrix
    s = bg_state(z, 64)
    assert np.linalg.norm(km @ s.amps - z * s.amps) < 1e-8


def test_vacuum_overlap_closed_form():
    for r in np.arange(0.5, 4.01, 0.5):
        assert abs(bg_state(r, 64).amps[0]) ** 2 == pytest.approx(bg_vacuum_overlap(r), abs=1e-9)
    assert abs(bg_vacuum_overlap(1.6) - 0.459) < 1e-3


def test_halting_bound_grid():
    for r in np.linspace(1.6, 5.0, 69)[1:]:
        assert max_basis_overlap(bg_state(r, 64))[1] < 0.5
    assert max_basis_overlap(bg_state(1.61, 64))[1] < 0.5
    assert max_basis_overlap(bg_state(0.5, 64))[1] > 0.5


def test_max_basis_overlap_vacuum():
    assert max_basis_overlap(basis_state(0, 4)) == (0, 1.0)


@pytest.mark.parametrize("d", [8, 32])
def test_interior_commutators(d):
    a, ad = (m.matrix for m in wh_ladder(d))
    km, kp, k3 = (m.matrix for m in su11_generators(d))
    inner = slice(0, d - 1)
    comm = lambda x, y: x @ y - y @ x  # noqa: E731
    assert np.abs((comm(a, ad) - np.eye(d))[:, inner]).max() < 1e-12
    assert np.abs((comm(km, kp) - k3)[:, inner]).max() < 1e-12
    assert np.abs((comm(km, k3) - 2 * km)[:, inner]).max() < 1e-12
    assert np.abs((comm(kp, k3) + 2 * kp)[:, inner]).max() < 1e-12
