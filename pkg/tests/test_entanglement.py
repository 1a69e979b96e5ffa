import numpy as np
import pytest
from hypothesis import given, strategies as st

from wsim.entanglement import (
    WSpec,
    concurrence_report,
    has_mirror_self_pair,
    mirror_concurrence,
    mirror_pairs,
    pairwise_matrix,
    spin_flip,
    total_concurrence,
    w_pair_concurrence,
    w_reduced_density,
    wootters_concurrence,
)
from wsim.errors import InvalidRegisterError
from wsim.qstate import DensityMatrix, partial_trace

from strategies import complex_vectors, wspecs

S2 = 1 / np.sqrt(2)
YY = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])


def pure_concurrence(psi):
    """Independent oracle for pure two-qubit states: |<psi| Y(x)Y |psi*>|."""
    return abs(psi.conj() @ YY @ psi.conj())


def werner(p):
    singlet = np.array([0, S2, -S2, 0])
    return p * np.outer(singlet, singlet) + (1 - p) * np.eye(4) / 4


# ---------------------------------------------------------------- WSpec


def test_wspec_validation():
    with pytest.raises(InvalidRegisterError):
        WSpec([1.0])
    with pytest.raises(InvalidRegisterError):
        WSpec([0.5, 0.5])
    WSpec.uniform(4)  # uniform coefficients are accepted


def test_wspec_state_layout():
    amps = WSpec([0.6, 0.8j]).state().amps
    # c_1 sits on |10>, c_2 on |01>
    np.testing.assert_allclose(amps, [0, 0.8j, 0.6, 0])


# ---------------------------------------------------------------- spin flip


def test_spin_flip_examples():
    np.testing.assert_allclose(spin_flip(np.eye(4) / 4), np.eye(4) / 4)
    ket01 = np.zeros((4, 4)); ket01[1, 1] = 1
    ket10 = np.zeros((4, 4)); ket10[2, 2] = 1
    np.testing.assert_allclose(spin_flip(ket01), ket10)
    bell = np.outer([0, S2, S2, 0], [0, S2, S2, 0])
    np.testing.assert_allclose(spin_flip(bell), bell, atol=1e-15)


def test_spin_flip_errors():
    with pytest.raises(InvalidRegisterError):
        spin_flip(np.eye(2) / 2)
    with pytest.raises(InvalidRegisterError):
        spin_flip(np.triu(np.ones((4, 4))))


@given(complex_vectors(16))
def test_spin_flip_hermitian_trace(v):
    m = v.reshape(4, 4)
    rho = m @ m.conj().T
    rho /= np.trace(rho)
    out = spin_flip(rho)
    assert np.abs(out - out.conj().T).max() < 1e-12
    assert abs(np.trace(out) - np.trace(rho.conj())) < 1e-12


# ---------------------------------------------------------------- Wootters


def test_wootters_examples():
    bell = np.outer([0, S2, S2, 0], [0, S2, S2, 0])
    assert wootters_concurrence(bell)[0] == pytest.approx(1, abs=1e-12)
    prod = np.zeros((4, 4)); prod[0, 0] = 1
    assert wootters_concurrence(prod)[0] == 0
    rho12 = partial_trace(WSpec.uniform(3).state(), [1, 2])
    assert wootters_concurrence(rho12)[0] == pytest.approx(2 / 3, abs=1e-12)


@pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0])
def test_wootters_werner(p):
    # Werner family: C = max(0, (3p - 1)/2)
    assert wootters_concurrence(werner(p))[0] == pytest.approx(max(0, (3 * p - 1) / 2), abs=1e-9)


@given(complex_vectors(4))
def test_wootters_pure_states(v):
    psi = v / np.linalg.norm(v)
    c, lam = wootters_concurrence(np.outer(psi, psi.conj()))
    assert abs(c - pure_concurrence(psi)) < 1e-9


@given(complex_vectors(16))
def test_wootters_mixed_against_lapack(v):
    m = v.reshape(4, 4)
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    r = rho @ YY @ rho.conj() @ YY
    lam = np.sort(np.clip(np.linalg.eigvals(r).real, 0, None))[::-1]
    oracle = max(0.0, np.sqrt(lam[0]) - np.sqrt(lam[1:]).sum())
    c, ours = wootters_concurrence(rho)
    assert abs(c - oracle) < 1e-7
    assert list(ours) == sorted(ours, reverse=True) and min(ours) >= 0
    assert 0 <= c <= 1


def test_wootters_rejects_non_density():
    # Hermitian, trace 1, eigenvalues 0.5 +- 0.9: R picks up a negative eigenvalue
    bad = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
    bad[0, 3] = bad[3, 0] = 0.9j
    with pytest.raises(InvalidRegisterError):
        wootters_concurrence(bad)


# ---------------------------------------------------------------- closed forms


def test_reduced_density_examples():
    rho = w_reduced_density(WSpec.uniform(3), 1, 2).entries
    expected = np.zeros((4, 4))
    expected[[0, 1, 2], [0, 1, 2]] = 1 / 3
    expected[1, 2] = expected[2, 1] = 1 / 3
    np.testing.assert_allclose(rho, expected, atol=1e-15)
    rho = w_reduced_density(WSpec([1, 0, 0, 0]), 2, 3).entries
    np.testing.assert_array_equal(rho, np.diag([1, 0, 0, 0]))
    rho = w_reduced_density(WSpec([S2, S2]), 1, 2).entries
    assert rho[0, 0] == pytest.approx(0, abs=1e-15)
    np.testing.assert_allclose(rho[1:3, 1:3], [[0.5, 0.5], [0.5, 0.5]])


def test_reduced_density_coherence_placement():
    w = WSpec.normalized([0.3, 0.5j, -0.2, 0.7])
    rho = w_reduced_density(w, 2, 4).entries
    assert rho[1, 2] == pytest.approx(np.conj(w.c(2)) * w.c(4))


def test_pair_errors():
    w = WSpec.uniform(3)
    with pytest.raises(InvalidRegisterError):
        w_pair_concurrence(w, 2, 2)
    with pytest.raises(InvalidRegisterError):
        w_reduced_density(w, 1, 4)


def test_pair_concurrence_examples():
    assert w_pair_concurrence(WSpec.uniform(3), 1, 3) == pytest.approx(2 / 3)
    assert w_pair_concurrence(WSpec([1, 0, 0]), 1, 2) == 0
    assert w_pair_concurrence(WSpec([S2, S2]), 1, 2) == pytest.approx(1)


@pytest.mark.parametrize("n", range(2, 13))
def test_total_uniform(n):
    assert total_concurrence(WSpec.uniform(n)) == pytest.approx(1, abs=1e-12)


def test_total_examples():
    assert total_concurrence(WSpec([1, 0, 0, 0])) == 0
    w = WSpec([S2, S2])
    assert total_concurrence(w) == pytest.approx(concurrence_report(w, 1, 2).wootters, abs=1e-12)


def test_total_matches_pairwise_sum(rng):
    # sqrt(1/2 sum_{m != n} C_mn^2) / sqrt(2 (1 - 1/N))
    for n in range(2, 9):
        w = WSpec.normalized(rng.normal(size=n) + 1j * rng.normal(size=n))
        c = pairwise_matrix(w)
        unnormalized = np.sqrt(0.5 * np.sum(c ** 2))
        assert total_concurrence(w) == pytest.approx(unnormalized / np.sqrt(2 * (1 - 1 / n)), abs=1e-12)


def test_mirror_examples():
    assert mirror_concurrence(WSpec.uniform(4)) == pytest.approx(1)
    w = WSpec([0.6, 0.8])
    assert mirror_concurrence(w) == pytest.approx(2 * 0.6 * 0.8)
    assert mirror_concurrence(WSpec([1, 0, 0, 0])) == 0


def test_mirror_odd_self_pair():
    assert mirror_pairs(5) == [(1, 5), (2, 4), (3, 3)]
    assert has_mirror_self_pair(5) and not has_mirror_self_pair(4)
    w = WSpec.uniform(3)
    assert mirror_concurrence(w) == pytest.approx(2 / 3 + 2 / 3)


# ---------------------------------------------------------------- properties


@given(wspecs(2, 8), st.data())
def test_closed_form_vs_wootters(w, data):
    m = data.draw(st.integers(1, w.n))
    n = data.draw(st.integers(1, w.n).filter(lambda k: k != m))
    rep = concurrence_report(w, m, n)
    assert abs(rep.closed_form - rep.wootters) < 1e-9
    assert all(x >= 0 for x in rep.eigenvalues)
    assert list(rep.eigenvalues) == sorted(rep.eigenvalues, reverse=True)
    brute = partial_trace(w.state(), [m, n]).entries
    assert np.abs(w_reduced_density(w, m, n).entries - brute).max() < 1e-12


@given(wspecs(2, 10))
def test_total_bounded(w):
    t = total_concurrence(w)
    assert 0 <= t <= 1 + 1e-15


@given(wspecs(2, 7), st.lists(st.floats(0, 2 * np.pi), min_size=7, max_size=7))
def test_phase_invariance(w, phases):
    rotated = WSpec(w.coeffs * np.exp(1j * np.array(phases[: w.n])))
    assert abs(total_concurrence(w) - total_concurrence(rotated)) < 1e-12
    assert abs(mirror_concurrence(w) - mirror_concurrence(rotated)) < 1e-12
    for m in range(1, w.n):
        assert abs(w_pair_concurrence(w, m, m + 1) - w_pair_concurrence(rotated, m, m + 1)) < 1e-12
        a = concurrence_report(w, m, m + 1).wootters
        b = concurrence_report(rotated, m, m + 1).wootters
        assert abs(a - b) < 1e-12


@given(wspecs(2, 10).filter(lambda w: w.n % 2 == 0))
def test_mirror_even_is_pair_sum(w):
    expected = sum(w_pair_concurrence(w, j, w.n + 1 - j) for j in range(1, w.n // 2 + 1))
    assert mirror_concurrence(w) == expected
